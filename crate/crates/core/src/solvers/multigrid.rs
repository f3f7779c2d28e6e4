use log::debug;

use super::{cg_solve, jacobi_smooth, prolongate, restrict, solve_decoupled_rows, ReportBuilder, SolverReport, StopReason};
use crate::linalg;
use crate::{Backend, BandLayout, BandedMatrix, DenseVector, Error, Precision, Real, Result};

/// A cycle that reduces the residual by less than this factor ends the
/// iteration as stagnated.
pub const STAGNATION_RATIO: f64 = 0.95;

/// Ratio between coarse and fine load-vector scaling in 2D:
/// `(h_coarse / h_fine)^2`. Q1 stiffness matrices do not depend on `h`.
const COARSE_DEFECT_SCALE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmootherParams {
    pub omega: f64,
    pub steps: usize,
}

impl Default for SmootherParams {
    fn default() -> Self {
        Self { omega: 0.7, steps: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoarseParams {
    pub tol: f64,
    pub maxit: usize,
}

impl Default for CoarseParams {
    fn default() -> Self {
        Self { tol: 1e-12, maxit: 1000 }
    }
}

#[derive(Debug, PartialEq)]
pub struct Level<T> {
    pub matrix: BandedMatrix<T>,
    /// Grid points per side.
    pub m: usize,
}

/// Stiffness matrices of nested grids, coarsest first.
#[derive(Debug)]
pub struct GridHierarchy<T> {
    levels: Vec<Level<T>>,
    pub smoother: SmootherParams,
    pub coarse: CoarseParams,
}

impl<T: Real> GridHierarchy<T> {
    pub fn new(levels: Vec<BandedMatrix<T>>, smoother: SmootherParams, coarse: CoarseParams) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter("hierarchy needs at least one level".into()));
        }
        let mut out = Vec::with_capacity(levels.len());
        for a in levels {
            if a.layout() != BandLayout::Q1Fixed {
                return Err(Error::InvalidParameter("hierarchy matrices must use the Q1 layout".into()));
            }
            let m = a.grid_side().ok_or(Error::NotASquareGrid(a.order()))?;
            if let Some(prev) = out.last().map(|l: &Level<T>| l.m) {
                if m != 2 * prev - 1 {
                    return Err(Error::InvalidParameter(format!(
                        "level with m = {m} does not refine m = {prev}"
                    )));
                }
            }
            out.push(Level { matrix: a, m });
        }
        Ok(Self {
            levels: out,
            smoother,
            coarse,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Index of the finest level.
    pub fn finest(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, index: usize) -> &Level<T> {
        &self.levels[index]
    }

    pub fn levels(&self) -> &[Level<T>] {
        &self.levels
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    /// Same hierarchy with every matrix rounded into `U`.
    pub fn convert<U: Real>(&self) -> GridHierarchy<U> {
        GridHierarchy {
            levels: self
                .levels
                .iter()
                .map(|l| Level {
                    matrix: l.matrix.convert(),
                    m: l.m,
                })
                .collect(),
            smoother: self.smoother,
            coarse: self.coarse,
        }
    }

    /// The first `count` levels.
    pub fn truncated(&self, count: usize) -> GridHierarchy<T> {
        GridHierarchy {
            levels: self.levels[..count.clamp(1, self.len())]
                .iter()
                .map(|l| Level {
                    matrix: l.matrix.copy(),
                    m: l.m,
                })
                .collect(),
            smoother: self.smoother,
            coarse: self.coarse,
        }
    }
}

/// One V-cycle on `A_level x = b`: pre-smooth, restrict the defect, recurse
/// (CG on the coarsest level), prolongate and correct, post-smooth.
pub fn v_cycle<T: Real>(
    be: &Backend,
    h: &GridHierarchy<T>,
    level: usize,
    x: &mut DenseVector<T>,
    b: &DenseVector<T>,
) -> Result<()> {
    if level >= h.len() {
        return Err(Error::InvalidParameter(format!(
            "level {level} outside hierarchy of {} levels",
            h.len()
        )));
    }
    let Level { matrix: a, m } = h.level(level);
    if level == 0 {
        let rep = cg_solve(be, a, x, b, h.coarse.tol, h.coarse.maxit)?;
        if !rep.converged {
            debug!("coarse CG stopped after {} iterations", rep.iterations);
        }
        return Ok(());
    }
    let omega = T::from_f64(h.smoother.omega);
    jacobi_smooth(be, a, x, b, omega, h.smoother.steps)?;

    let mut r = DenseVector::zeros(a.order())?;
    linalg::defect_into(be, b, a, x, &mut r)?;
    let mut rc = restrict(&r, *m)?;
    linalg::scale(be, &mut rc, T::from_f64(COARSE_DEFECT_SCALE));

    let m_coarse = h.level(level - 1).m;
    let mut ec = DenseVector::zeros(m_coarse * m_coarse)?;
    v_cycle(be, h, level - 1, &mut ec, &rc)?;
    let ef = prolongate(&ec, m_coarse)?;
    linalg::axpy(be, x, T::one(), &ef)?;

    jacobi_smooth(be, a, x, b, omega, h.smoother.steps)
}

/// Repeats V-cycles on the finest level until `||r|| <= tol ||r0||`.
///
/// Rows without off-diagonal couplings are solved exactly before the first
/// cycle. Iteration also stops when a cycle fails to reduce the residual by
/// [`STAGNATION_RATIO`], which happens once rounding dominates.
pub fn multigrid_solve<T: Real>(
    be: &Backend,
    h: &GridHierarchy<T>,
    x: &mut DenseVector<T>,
    b: &DenseVector<T>,
    tol: f64,
    max_cycles: usize,
) -> Result<SolverReport> {
    let top = h.finest();
    let a = &h.level(top).matrix;
    x.check_len(a.order())?;
    b.check_len(a.order())?;
    solve_decoupled_rows(a, x, b);
    let residual = |x: &DenseVector<T>| -> Result<f64> {
        Ok(linalg::residual_norm(be, T::one(), b, -T::one(), a, x)?.as_f64())
    };
    let r0 = residual(x)?;
    let mut report = ReportBuilder::new(r0);
    if r0 == 0.0 {
        return Ok(report.finish(StopReason::Converged));
    }
    for _ in 0..max_cycles {
        v_cycle(be, h, top, x, b)?;
        let prev = report.last();
        let r = residual(x)?;
        report.push(r);
        if r <= tol * r0 {
            return Ok(report.finish(StopReason::Converged));
        }
        if !r.is_finite() || r > STAGNATION_RATIO * prev {
            return Ok(report.finish(StopReason::Stagnated));
        }
    }
    Ok(report.finish(StopReason::MaxIterations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{self, Boundary};

    fn hierarchy(levels: usize) -> GridHierarchy<f64> {
        fem::build_hierarchy(levels, &Boundary::dirichlet(), SmootherParams::default(), CoarseParams::default())
            .unwrap()
    }

    #[test]
    fn construction_checks_nesting() {
        let a3 = fem::assemble_q1_stiffness(1).unwrap();
        let a9 = fem::assemble_q1_stiffness(3).unwrap();
        assert!(GridHierarchy::new(vec![a3, a9], SmootherParams::default(), CoarseParams::default()).is_err());
    }

    #[test]
    fn single_level_is_cg() {
        let be = Backend::generic();
        let h = hierarchy(1);
        let b = DenseVector::from_fn(9, |i| i as f64).unwrap();
        let mut x1 = DenseVector::zeros(9).unwrap();
        v_cycle(&be, &h, 0, &mut x1, &b).unwrap();
        let mut x2 = DenseVector::zeros(9).unwrap();
        cg_solve(&be, &h.level(0).matrix, &mut x2, &b, 1e-12, 1000).unwrap();
        assert_eq!(x1.as_slice(), x2.as_slice());
    }

    #[test]
    fn zero_rhs_stays_zero() {
        let be = Backend::generic();
        let h = hierarchy(4);
        let n = h.level(3).matrix.order();
        let b = DenseVector::zeros(n).unwrap();
        let mut x = DenseVector::zeros(n).unwrap();
        v_cycle(&be, &h, 3, &mut x, &b).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
        let rep = multigrid_solve(&be, &h, &mut x, &b, 1e-10, 10).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.converged);
    }

    #[test]
    fn v_cycle_is_linear() {
        let be = Backend::generic();
        let h = hierarchy(4);
        let n = h.level(3).matrix.order();
        let vec = |s: f64| DenseVector::from_fn(n, |i| ((i as f64) * s).sin()).unwrap();
        let (x1, b1, x2, b2) = (vec(0.3), vec(1.1), vec(0.7), vec(2.3));
        let (alpha, beta) = (0.8, -1.7);
        let combine = |p: &DenseVector<f64>, q: &DenseVector<f64>| {
            let mut r = DenseVector::zeros(n).unwrap();
            linalg::scaled_sum(&be, &mut r, p, q, alpha, beta).unwrap();
            r
        };
        let mut xc = combine(&x1, &x2);
        let bc = combine(&b1, &b2);
        v_cycle(&be, &h, 3, &mut xc, &bc).unwrap();
        let (mut y1, mut y2) = (x1.copy(), x2.copy());
        v_cycle(&be, &h, 3, &mut y1, &b1).unwrap();
        v_cycle(&be, &h, 3, &mut y2, &b2).unwrap();
        let expected = combine(&y1, &y2);
        let mut diff = DenseVector::zeros(n).unwrap();
        linalg::elementwise(&be, linalg::BinaryOp::Difference, &mut diff, &xc, &expected).unwrap();
        let rel = linalg::norm_l2(&be, &diff, false) / linalg::norm_l2(&be, &expected, false);
        assert!(rel <= 1e-12, "{rel}");
    }

    #[test]
    fn one_cycle_halves_residual_at_level_six() {
        let be = Backend::generic();
        let h = hierarchy(6);
        let problem = fem::PoissonProblem::polynomial(6);
        let a = &h.level(5).matrix;
        let b = problem.rhs().unwrap();
        let mut x = DenseVector::zeros(a.order()).unwrap();
        solve_decoupled_rows(a, &mut x, &b);
        let r0 = linalg::residual_norm(&be, 1.0, &b, -1.0, a, &x).unwrap();
        v_cycle(&be, &h, 5, &mut x, &b).unwrap();
        let r1 = linalg::residual_norm(&be, 1.0, &b, -1.0, a, &x).unwrap();
        assert!(r0 / r1 >= 2.0, "reduction {}", r0 / r1);
    }

    #[test]
    fn level_six_converges_within_twelve_cycles() {
        let be = Backend::generic();
        let h = hierarchy(6);
        let b = fem::PoissonProblem::polynomial(6).rhs().unwrap();
        let mut x = DenseVector::zeros(b.len()).unwrap();
        let rep = multigrid_solve(&be, &h, &mut x, &b, 1e-10, 12).unwrap();
        assert!(rep.converged, "{:?}", rep.residual_history);
    }
}
