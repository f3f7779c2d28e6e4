//! Per-backend loop drivers. Every backend evaluates the same per-element
//! expression; only the iteration order over disjoint indices differs.

use rayon::prelude::*;

use crate::backends::{Backend, BackendTag};
use crate::containers::{q1_offsets, BandLayout};
use crate::{BandedMatrix, Real};

/// `out[i] = f(i, out[i])` for every `i`.
pub(crate) fn map_indexed<T: Real>(be: &Backend, tag: BackendTag, out: &mut [T], f: impl Fn(usize, T) -> T + Sync) {
    match tag {
        BackendTag::Generic => {
            for (i, o) in out.iter_mut().enumerate() {
                *o = f(i, *o);
            }
        }
        BackendTag::Blocked => {
            for (b, block) in out.chunks_mut(be.block_size()).enumerate() {
                let base = b * be.block_size();
                let mut quads = block.chunks_exact_mut(4);
                let mut i = base;
                for q in &mut quads {
                    q[0] = f(i, q[0]);
                    q[1] = f(i + 1, q[1]);
                    q[2] = f(i + 2, q[2]);
                    q[3] = f(i + 3, q[3]);
                    i += 4;
                }
                for o in quads.into_remainder() {
                    *o = f(i, *o);
                    i += 1;
                }
            }
        }
        BackendTag::Parallel => {
            let chunk = out.len().div_ceil(be.workers().max(1)).max(1);
            out.par_chunks_mut(chunk).enumerate().for_each(|(c, part)| {
                let base = c * chunk;
                for (j, o) in part.iter_mut().enumerate() {
                    *o = f(base + j, *o);
                }
            });
        }
    }
}

/// Borrowed band list of a matrix, ready for row evaluation.
pub(crate) struct BandView<'a, T> {
    n: usize,
    bands: Vec<(isize, &'a [T])>,
    /// Grid side when all nine Q1 bands are stored.
    q1: Option<usize>,
}

impl<'a, T: Real> BandView<'a, T> {
    pub(crate) fn new(a: &'a BandedMatrix<T>) -> Self {
        let bands: Vec<_> = a.bands().collect();
        let q1 = match (a.layout(), a.grid_side()) {
            (BandLayout::Q1Fixed, Some(m)) if bands.len() == 9 => Some(m),
            _ => None,
        };
        debug_assert!(q1.is_none_or(|m| bands.iter().map(|b| b.0).eq(q1_offsets(m))));
        Self { n: a.order(), bands, q1 }
    }

    /// `(Ax)_i`, summing stored bands in ascending offset order.
    #[inline]
    pub(crate) fn row(&self, x: &[T], i: usize) -> T {
        let mut acc = T::zero();
        for &(k, b) in &self.bands {
            let j = i as isize + k;
            if j >= 0 && (j as usize) < self.n {
                acc = acc + b[i] * x[j as usize];
            }
        }
        acc
    }

    /// Rows `lo .. lo + out.len()` of `Ax`.
    pub(crate) fn rows_into(&self, x: &[T], lo: usize, out: &mut [T]) {
        match self.q1 {
            Some(m) => self.q1_rows(m, x, lo, out),
            None => self.bandwise_rows(x, lo, out),
        }
    }

    fn bandwise_rows(&self, x: &[T], lo: usize, out: &mut [T]) {
        let hi = lo + out.len();
        out.fill(T::zero());
        for &(k, b) in &self.bands {
            let live = crate::containers::banded_rows(self.n, k);
            let start = live.start.max(lo);
            let end = live.end.min(hi);
            for i in start..end {
                let o = &mut out[i - lo];
                *o = *o + b[i] * x[(i as isize + k) as usize];
            }
        }
    }

    fn q1_rows(&self, m: usize, x: &[T], lo: usize, out: &mut [T]) {
        let [b0, b1, b2, b3, b4, b5, b6, b7, b8] = [0, 1, 2, 3, 4, 5, 6, 7, 8].map(|k| self.bands[k].1);
        let inner = (m + 1)..self.n.saturating_sub(m + 1);
        for (r, o) in out.iter_mut().enumerate() {
            let i = lo + r;
            if inner.contains(&i) {
                let mut acc = T::zero();
                acc = acc + b0[i] * x[i - m - 1];
                acc = acc + b1[i] * x[i - m];
                acc = acc + b2[i] * x[i - m + 1];
                acc = acc + b3[i] * x[i - 1];
                acc = acc + b4[i] * x[i];
                acc = acc + b5[i] * x[i + 1];
                acc = acc + b6[i] * x[i + m - 1];
                acc = acc + b7[i] * x[i + m];
                acc = acc + b8[i] * x[i + m + 1];
                *o = acc;
            } else {
                *o = self.row(x, i);
            }
        }
    }

    /// Whole product `y = Ax` on the given backend.
    pub(crate) fn apply(&self, be: &Backend, tag: BackendTag, x: &[T], y: &mut [T]) {
        match tag {
            BackendTag::Generic => self.rows_into(x, 0, y),
            BackendTag::Blocked => {
                let bs = be.block_size();
                for (b, block) in y.chunks_mut(bs).enumerate() {
                    self.rows_into(x, b * bs, block);
                }
            }
            BackendTag::Parallel => {
                let chunk = y.len().div_ceil(be.workers().max(1)).max(1);
                y.par_chunks_mut(chunk)
                    .enumerate()
                    .for_each(|(c, part)| self.rows_into(x, c * chunk, part));
            }
        }
    }
}
