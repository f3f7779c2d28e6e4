use super::{solve_decoupled_rows, v_cycle, GridHierarchy, ReportBuilder, SolverReport, StopReason};
use crate::linalg;
use crate::{Backend, DenseVector, Error, Real, Result};

/// V-cycles of the low-precision preconditioner per outer iteration.
pub const INNER_CYCLES: usize = 2;

/// Inner solves whose residual grows beyond this factor are rejected.
pub const INNER_DIVERGENCE_FACTOR: f64 = 10.0;

/// Defect correction in double precision, preconditioned by
/// [`INNER_CYCLES`] V-cycles on `inner` (usually single precision).
///
/// Each outer step computes `d = b - A x` in double, rounds `d` into the
/// inner precision, approximately solves `A c = d` starting from `c = 0`,
/// and updates `x += c`. Stops when `||d|| <= tol ||d0||`.
pub fn mixed_defect_correct<S: Real>(
    be: &Backend,
    outer: &GridHierarchy<f64>,
    inner: &GridHierarchy<S>,
    x: &mut DenseVector<f64>,
    b: &DenseVector<f64>,
    tol: f64,
    max_outer: usize,
) -> Result<SolverReport> {
    if outer.len() != inner.len() || outer.level(outer.finest()).m != inner.level(inner.finest()).m {
        return Err(Error::InvalidParameter(
            "outer and inner hierarchies describe different grids".into(),
        ));
    }
    let a = &outer.level(outer.finest()).matrix;
    let a_inner = &inner.level(inner.finest()).matrix;
    let n = a.order();
    x.check_len(n)?;
    b.check_len(n)?;
    solve_decoupled_rows(a, x, b);

    let mut d = DenseVector::zeros(n)?;
    linalg::defect_into(be, b, a, x, &mut d)?;
    let d0 = linalg::norm_l2(be, &d, false);
    let mut report = ReportBuilder::new(d0);
    if d0 == 0.0 {
        return Ok(report.finish(StopReason::Converged));
    }
    let mut d_inner = DenseVector::<S>::zeros(n)?;
    let mut c = DenseVector::<S>::zeros(n)?;
    let mut c_outer = DenseVector::<f64>::zeros(n)?;
    for _ in 0..max_outer {
        linalg::convert_into(be, &d, &mut d_inner)?;
        c.fill(S::zero());
        for _ in 0..INNER_CYCLES {
            v_cycle(be, inner, inner.finest(), &mut c, &d_inner)?;
        }
        let initial = linalg::norm_l2(be, &d_inner, false).as_f64();
        let reached = linalg::residual_norm(be, S::one(), &d_inner, -S::one(), a_inner, &c)?.as_f64();
        if !reached.is_finite() || reached > INNER_DIVERGENCE_FACTOR * initial {
            return Err(Error::InnerDivergence {
                initial,
                final_: reached,
            });
        }
        linalg::convert_into(be, &c, &mut c_outer)?;
        linalg::axpy(be, x, 1.0, &c_outer)?;
        linalg::defect_into(be, b, a, x, &mut d)?;
        let r = linalg::norm_l2(be, &d, false);
        report.push(r);
        if r <= tol * d0 {
            return Ok(report.finish(StopReason::Converged));
        }
    }
    Ok(report.finish(StopReason::MaxIterations))
}
