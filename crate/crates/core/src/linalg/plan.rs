use std::ops::Range;

use rayon::prelude::*;

use crate::backends::{Backend, BackendTag};
use crate::Real;

/// Accumulators used by the blocked backend inside each chunk.
pub const BLOCKED_LANES: usize = 4;

/// Fixed summation order for reductions on one backend.
///
/// The index range is split into `workers` contiguous ranges; each range is
/// cut into `block_size` chunks summed with `lanes` interleaved
/// accumulators. Chunk partials, then worker partials, are combined
/// left to right. The result depends only on `(n, block_size, lanes,
/// workers)`, never on scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionPlan {
    pub block_size: usize,
    pub lanes: usize,
    pub workers: usize,
}

impl ReductionPlan {
    pub fn for_backend(be: &Backend, tag: BackendTag) -> Self {
        let (lanes, workers) = match tag {
            BackendTag::Generic => (1, 1),
            BackendTag::Blocked => (BLOCKED_LANES, 1),
            BackendTag::Parallel => (1, be.workers()),
        };
        Self {
            block_size: be.block_size(),
            lanes,
            workers,
        }
    }

    pub fn chunk_count(&self, n: usize) -> usize {
        n.div_ceil(self.block_size)
    }

    pub fn reduce<T: Real>(&self, n: usize, term: impl Fn(usize) -> T + Sync) -> T {
        if self.workers <= 1 {
            return self.reduce_range(0..n, &term);
        }
        let partials: Vec<T> = partition(n, self.workers)
            .into_par_iter()
            .map(|r| self.reduce_range(r, &term))
            .collect();
        combine(partials)
    }

    fn reduce_range<T: Real>(&self, range: Range<usize>, term: &impl Fn(usize) -> T) -> T {
        let mut chunks = Vec::with_capacity(range.len().div_ceil(self.block_size));
        let mut lo = range.start;
        while lo < range.end {
            let hi = (lo + self.block_size).min(range.end);
            chunks.push(self.sum_chunk(lo..hi, term));
            lo = hi;
        }
        combine(chunks)
    }

    fn sum_chunk<T: Real>(&self, range: Range<usize>, term: &impl Fn(usize) -> T) -> T {
        if self.lanes == 1 {
            let mut acc = T::zero();
            for i in range {
                acc = acc + term(i);
            }
            return acc;
        }
        let mut acc = [T::zero(); BLOCKED_LANES];
        let mut i = range.start;
        while i + BLOCKED_LANES <= range.end {
            acc[0] = acc[0] + term(i);
            acc[1] = acc[1] + term(i + 1);
            acc[2] = acc[2] + term(i + 2);
            acc[3] = acc[3] + term(i + 3);
            i += BLOCKED_LANES;
        }
        for (lane, j) in (i..range.end).enumerate() {
            acc[lane] = acc[lane] + term(j);
        }
        (acc[0] + acc[1]) + (acc[2] + acc[3])
    }
}

fn combine<T: Real>(partials: Vec<T>) -> T {
    partials.into_iter().reduce(|a, b| a + b).unwrap_or_else(T::zero)
}

/// `workers` contiguous ranges covering `0..n`; the first `n % workers`
/// ranges are one element longer.
pub(crate) fn partition(n: usize, workers: usize) -> Vec<Range<usize>> {
    let workers = workers.clamp(1, n.max(1));
    let base = n / workers;
    let extra = n % workers;
    let mut out = Vec::with_capacity(workers);
    let mut lo = 0;
    for w in 0..workers {
        let len = base + usize::from(w < extra);
        out.push(lo..lo + len);
        lo += len;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_covers_range() {
        let p = partition(10, 3);
        assert_eq!(p, vec![0..4, 4..7, 7..10]);
        assert_eq!(partition(2, 8), vec![0..1, 1..2]);
    }

    #[test]
    fn plans_agree_on_exact_sums() {
        for (lanes, workers) in [(1, 1), (4, 1), (1, 3)] {
            let plan = ReductionPlan {
                block_size: 8,
                lanes,
                workers,
            };
            let s: f64 = plan.reduce(1001, |i| i as f64);
            assert_eq!(s, 500_500.0);
        }
    }

    #[test]
    fn empty_range_is_zero() {
        let plan = ReductionPlan {
            block_size: 4,
            lanes: 4,
            workers: 1,
        };
        assert_eq!(plan.reduce::<f32>(0, |_| 1.0), 0.0);
    }
}
