use crate::linalg::{self, BinaryOp};
use crate::{Backend, BandedMatrix, DenseVector, Error, Real, Result};

/// Damped Jacobi: `x <- x + omega * D^-1 (b - A x)`, `steps` times.
pub fn jacobi_smooth<T: Real>(
    be: &Backend,
    a: &BandedMatrix<T>,
    x: &mut DenseVector<T>,
    b: &DenseVector<T>,
    omega: T,
    steps: usize,
) -> Result<()> {
    let n = a.order();
    x.check_len(n)?;
    b.check_len(n)?;
    if steps == 0 {
        return Ok(());
    }
    let diag = a.diagonal();
    if let Some(row) = diag.iter().position(|d| *d == T::zero()) {
        return Err(Error::ZeroDiagonal { row });
    }
    let inv_diag = DenseVector::from_vec(diag.into_iter().map(|d| T::one() / d).collect())?;
    let mut r = DenseVector::zeros(n)?;
    let mut update = DenseVector::zeros(n)?;
    for _ in 0..steps {
        linalg::defect_into(be, b, a, x, &mut r)?;
        linalg::elementwise(be, BinaryOp::Product, &mut update, &inv_diag, &r)?;
        linalg::axpy(be, x, omega, &update)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem;
    use crate::BandLayout;

    #[test]
    fn identity_solves_in_one_step() {
        let be = Backend::generic();
        let a = BandedMatrix::<f64>::identity(4, BandLayout::Arbitrary).unwrap();
        let b = DenseVector::from_vec(vec![1.0, -2.0, 3.0, 0.5]).unwrap();
        let mut x = DenseVector::from_vec(vec![7.0, 7.0, 7.0, 7.0]).unwrap();
        jacobi_smooth(&be, &a, &mut x, &b, 1.0, 1).unwrap();
        assert_eq!(x.as_slice(), b.as_slice());
    }

    #[test]
    fn zero_steps_is_noop() {
        let be = Backend::generic();
        let a = BandedMatrix::<f64>::identity(2, BandLayout::Arbitrary).unwrap();
        let b = DenseVector::new(2, 1.0).unwrap();
        let mut x = DenseVector::new(2, 5.0).unwrap();
        jacobi_smooth(&be, &a, &mut x, &b, 0.7, 0).unwrap();
        assert_eq!(x.as_slice(), &[5.0, 5.0]);
    }

    #[test]
    fn zero_diagonal_rejected() {
        let be = Backend::generic();
        let mut a = BandedMatrix::<f64>::identity(3, BandLayout::Arbitrary).unwrap();
        a.set(1, 1, 0.0).unwrap();
        let b = DenseVector::new(3, 1.0).unwrap();
        let mut x = DenseVector::zeros(3).unwrap();
        assert!(matches!(
            jacobi_smooth(&be, &a, &mut x, &b, 0.7, 1),
            Err(Error::ZeroDiagonal { row: 1 })
        ));
    }

    #[test]
    fn residual_decreases_monotonically_on_poisson() {
        let be = Backend::generic();
        let a = fem::assemble_q1_stiffness(3).unwrap();
        let b = fem::assemble_rhs(3, &|_, _| 1.0, &|_, _| 0.0).unwrap();
        let mut x = DenseVector::zeros(a.order()).unwrap();
        let mut prev = linalg::residual_norm(&be, 1.0, &b, -1.0, &a, &x).unwrap();
        for _ in 0..100 {
            jacobi_smooth(&be, &a, &mut x, &b, 0.7, 1).unwrap();
            let r = linalg::residual_norm(&be, 1.0, &b, -1.0, &a, &x).unwrap();
            assert!(r < prev, "{r} >= {prev}");
            prev = r;
        }
    }

    #[test]
    fn fixed_point_iff_zero_residual() {
        let be = Backend::generic();
        let a = fem::assemble_q1_stiffness(2).unwrap();
        let n = a.order();
        let x_star = DenseVector::from_fn(n, |i| (i as f64 * 0.37).sin()).unwrap();
        let b = linalg::banded_matvec(&be, &a, &x_star).unwrap();
        let mut x = x_star.copy();
        jacobi_smooth(&be, &a, &mut x, &b, 0.7, 3).unwrap();
        for (p, q) in x.iter().zip(x_star.iter()) {
            assert!((p - q).abs() <= 1e-15);
        }
        let mut y = x_star.copy();
        y[12] += 1.0;
        jacobi_smooth(&be, &a, &mut y, &b, 0.7, 1).unwrap();
        assert!(y.iter().zip(x_star.iter()).any(|(p, q)| p != q));
    }
}
