use super::{ReportBuilder, SolverReport, StopReason};
use crate::linalg;
use crate::{Backend, BandedMatrix, DenseVector, Error, Real, Result};

/// Unpreconditioned conjugate gradients.
///
/// Stops when `||b - A x|| <= tol * ||b - A x0||`. Non-convergence within
/// `maxit` iterations is reported through `converged = false`; a
/// non-positive curvature `p'Ap` is an error.
pub fn cg_solve<T: Real>(
    be: &Backend,
    a: &BandedMatrix<T>,
    x: &mut DenseVector<T>,
    b: &DenseVector<T>,
    tol: f64,
    maxit: usize,
) -> Result<SolverReport> {
    let n = a.order();
    x.check_len(n)?;
    b.check_len(n)?;
    let mut r = DenseVector::zeros(n)?;
    linalg::defect_into(be, b, a, x, &mut r)?;
    let mut rho = linalg::dot(be, &r, &r)?;
    let r0 = rho.sqrt().as_f64();
    let mut report = ReportBuilder::new(r0);
    if r0 == 0.0 {
        return Ok(report.finish(StopReason::Converged));
    }
    let mut p = r.copy();
    let mut q = DenseVector::zeros(n)?;
    for it in 1..=maxit {
        linalg::banded_matvec_into(be, a, &p, &mut q)?;
        let curvature = linalg::dot(be, &p, &q)?;
        if curvature <= T::zero() || !curvature.is_finite() {
            return Err(Error::Breakdown {
                iteration: it,
                curvature: curvature.as_f64(),
            });
        }
        let alpha = rho / curvature;
        linalg::axpy(be, x, alpha, &p)?;
        linalg::axpy(be, &mut r, -alpha, &q)?;
        let rho_next = linalg::dot(be, &r, &r)?;
        let res = rho_next.sqrt().as_f64();
        report.push(res);
        if res <= tol * r0 {
            return Ok(report.finish(StopReason::Converged));
        }
        let beta = rho_next / rho;
        rho = rho_next;
        // p <- r + beta p
        linalg::scale(be, &mut p, beta);
        linalg::axpy(be, &mut p, T::one(), &r)?;
    }
    Ok(report.finish(StopReason::MaxIterations))
}
