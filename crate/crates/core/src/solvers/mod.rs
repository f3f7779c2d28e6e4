//! Iterative solvers for banded systems.
//!
//! The solvers are single-threaded orchestrators; all vector work goes
//! through [`crate::linalg`] on the caller's backend.

mod cg;
mod jacobi;
mod mixed;
mod multigrid;
mod transfer;

use std::time::Instant;

pub use cg::cg_solve;
pub use jacobi::jacobi_smooth;
pub use mixed::{mixed_defect_correct, INNER_CYCLES, INNER_DIVERGENCE_FACTOR};
pub use multigrid::{multigrid_solve, v_cycle, CoarseParams, GridHierarchy, Level, SmootherParams, STAGNATION_RATIO};
pub use transfer::{prolongate, restrict};

use crate::{BandedMatrix, DenseVector, Real};

/// Why an iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Relative residual reached the tolerance.
    Converged,
    /// The residual stopped decreasing (precision floor reached).
    Stagnated,
    /// Iteration budget exhausted.
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub iterations: usize,
    /// Euclidean residual norms, starting with the initial residual.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub stop: StopReason,
    /// Seconds.
    pub wall_time: f64,
}

impl SolverReport {
    pub fn initial_residual(&self) -> f64 {
        self.residual_history[0]
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().unwrap_or(&0.0)
    }

    /// Ratio of consecutive residual norms, one per iteration.
    pub fn reductions(&self) -> Vec<f64> {
        self.residual_history.windows(2).map(|w| w[0] / w[1]).collect()
    }
}

pub(crate) struct ReportBuilder {
    start: Instant,
    history: Vec<f64>,
}

impl ReportBuilder {
    pub(crate) fn new(initial: f64) -> Self {
        Self {
            start: Instant::now(),
            history: vec![initial],
        }
    }

    pub(crate) fn push(&mut self, r: f64) {
        self.history.push(r);
    }

    pub(crate) fn last(&self) -> f64 {
        *self.history.last().unwrap_or(&0.0)
    }

    pub(crate) fn finish(self, stop: StopReason) -> SolverReport {
        SolverReport {
            iterations: self.history.len() - 1,
            residual_history: self.history,
            converged: stop == StopReason::Converged,
            stop,
            wall_time: self.start.elapsed().as_secs_f64(),
        }
    }
}

/// Rows whose only stored nonzero is the diagonal (e.g. Dirichlet rows) are
/// solved exactly: `x_i = b_i / a_ii`.
pub(crate) fn solve_decoupled_rows<T: Real>(a: &BandedMatrix<T>, x: &mut DenseVector<T>, b: &DenseVector<T>) {
    let n = a.order();
    let diag = a.diagonal();
    let mut coupled = vec![false; n];
    for (k, band) in a.bands() {
        if k == 0 {
            continue;
        }
        for (i, c) in coupled.iter_mut().enumerate() {
            if band[i] != T::zero() {
                *c = true;
            }
        }
    }
    for i in 0..n {
        if !coupled[i] && diag[i] != T::zero() {
            x[i] = b[i] / diag[i];
        }
    }
}
