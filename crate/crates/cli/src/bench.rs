use std::fmt::Write as _;
use std::time::{Duration, Instant};

use hpla_core::{linalg, Backend, BackendTag, DenseVector, Precision, Real};
use log::warn;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub kernel: &'static str,
    pub backend: BackendTag,
    pub n: usize,
    pub precision: Precision,
    pub mflops: f64,
    /// Median time of one kernel call.
    pub seconds: f64,
    pub reps: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "kernel,backend,n,precision,mflops,seconds,reps";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.kernel, r.backend, r.n, r.precision, r.mflops, r.seconds, r.reps
            );
        }
        out
    }

    pub fn find(&self, backend: BackendTag, n: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.backend == backend && r.n == n)
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2
    }
}

fn time_axpy<T: Real>(be: &Backend, n: usize, reps: usize) -> CliResult<Duration> {
    let x = DenseVector::from_fn(n, |i| T::from_f64((i % 17) as f64 * 0.25))?;
    let mut y = DenseVector::new(n, T::one())?;
    let alpha = T::from_f64(1e-3);
    linalg::axpy(be, &mut y, alpha, &x)?;
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        linalg::axpy(be, &mut y, alpha, &x)?;
        times.push(start.elapsed());
    }
    std::hint::black_box(y.as_slice());
    Ok(median(times))
}

/// Times `y <- y + alpha x` for every size and backend: one warm-up call,
/// then the median of `reps` timed calls. Counts `2n` flops per call.
pub fn bench_axpy(base: &Backend, sizes: &[usize], backends: &[BackendTag], precision: Precision, reps: usize) -> CliResult<BenchReport> {
    if reps == 0 {
        return Err(CliError::Usage("reps must be at least 1".into()));
    }
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::Usage("sizes must be non-empty and positive".into()));
    }
    if sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(CliError::Usage("sizes must be sorted ascending".into()));
    }
    let mut report = BenchReport::default();
    for &n in sizes {
        for &tag in backends {
            let be = base.retag(tag);
            let t = match precision {
                Precision::Single => time_axpy::<f32>(&be, n, reps)?,
                Precision::Double => time_axpy::<f64>(&be, n, reps)?,
            };
            let seconds = t.as_secs_f64().max(1e-9);
            report.rows.push(BenchRow {
                kernel: "axpy",
                backend: tag,
                n,
                precision,
                mflops: 2.0 * n as f64 / seconds / 1e6,
                seconds,
                reps,
            });
        }
        if n >= 1_000_000 {
            if let (Some(g), Some(p)) = (report.find(BackendTag::Generic, n), report.find(BackendTag::Parallel, n)) {
                if p.mflops < 0.9 * g.mflops {
                    warn!(
                        "parallel axpy at n = {n} reaches {:.0} MFLOP/s, below 0.9x generic ({:.0})",
                        p.mflops, g.mflops
                    );
                }
            }
        }
    }
    Ok(report)
}
