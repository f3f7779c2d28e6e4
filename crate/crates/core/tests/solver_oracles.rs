//! Iterative solvers against dense Gaussian elimination on the Poisson
//! systems of the coarse levels.

use hpla_core::fem::{self, Boundary, PoissonProblem, PrecisionMode, SolveOptions};
use hpla_core::oracle::DenseMatrix;
use hpla_core::solvers::{cg_solve, mixed_defect_correct, multigrid_solve, CoarseParams, SmootherParams};
use hpla_core::{Backend, BackendTag, DenseVector, RuntimeConfig};

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn dense_solution(level: usize) -> (DenseVector<f64>, Vec<f64>) {
    let p = PoissonProblem::polynomial(level);
    let a = fem::assemble_q1_stiffness(level).unwrap();
    let b = p.rhs().unwrap();
    let x = DenseMatrix::from_banded(&a).solve(b.as_slice()).unwrap();
    (b, x)
}

#[test]
fn cg_and_multigrid_match_dense_solve_up_to_level_four() {
    for tag in BackendTag::ALL {
        let be = Backend::new(tag, &RuntimeConfig::default().with_workers(3));
        for level in 1..=4 {
            let (b, exact) = dense_solution(level);
            let a = fem::assemble_q1_stiffness(level).unwrap();
            let mut x = DenseVector::zeros(b.len()).unwrap();
            let rep = cg_solve(&be, &a, &mut x, &b, 1e-12, 1000).unwrap();
            assert!(rep.converged);
            assert!(max_abs_diff(x.as_slice(), &exact) <= 1e-8, "cg level {level}");

            let h = fem::build_hierarchy::<f64>(level, &Boundary::dirichlet(), SmootherParams::default(), CoarseParams::default()).unwrap();
            let mut x = DenseVector::zeros(b.len()).unwrap();
            let rep = multigrid_solve(&be, &h, &mut x, &b, 1e-12, 100).unwrap();
            assert!(rep.converged);
            assert!(max_abs_diff(x.as_slice(), &exact) <= 1e-8, "mg level {level}");
        }
    }
}

#[test]
fn single_level_multigrid_is_the_coarse_solver() {
    let be = Backend::generic();
    let (b, exact) = dense_solution(1);
    let h = fem::build_hierarchy::<f64>(1, &Boundary::dirichlet(), SmootherParams::default(), CoarseParams::default()).unwrap();
    let mut x = DenseVector::zeros(9).unwrap();
    multigrid_solve(&be, &h, &mut x, &b, 1e-12, 5).unwrap();
    assert!(max_abs_diff(x.as_slice(), &exact) <= 1e-12);
}

#[test]
fn mixed_precision_reaches_double_accuracy() {
    let be = Backend::generic();
    let level = 5;
    let (b, exact) = dense_solution(level);
    let hd = fem::build_hierarchy::<f64>(level, &Boundary::dirichlet(), SmootherParams::default(), CoarseParams::default()).unwrap();
    let hs = hd.convert::<f32>();
    let mut x = DenseVector::zeros(b.len()).unwrap();
    let rep = mixed_defect_correct(&be, &hd, &hs, &mut x, &b, 1e-12, 50).unwrap();
    assert!(rep.converged);
    assert!(max_abs_diff(x.as_slice(), &exact) <= 1e-9);
}

#[test]
fn backends_agree_on_multigrid_solution() {
    let p = PoissonProblem::polynomial(5);
    let opts = SolveOptions::default();
    let runs: Vec<Vec<u64>> = BackendTag::ALL
        .iter()
        .map(|&t| {
            let be = Backend::new(t, &RuntimeConfig::default().with_workers(4));
            let (u, _) = fem::solve(&be, &p, PrecisionMode::Double, &opts).unwrap();
            u.iter().map(|v| v.to_bits()).collect()
        })
        .collect();
    // Reductions differ in summation order, so iterates may differ in the
    // last bits; the converged solutions agree far below the tolerance.
    for r in &runs[1..] {
        let a: Vec<f64> = runs[0].iter().map(|b| f64::from_bits(*b)).collect();
        let c: Vec<f64> = r.iter().map(|b| f64::from_bits(*b)).collect();
        assert!(max_abs_diff(&a, &c) <= 1e-10);
    }
}
