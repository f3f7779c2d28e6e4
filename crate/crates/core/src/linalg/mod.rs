//! BLAS-1 style vector kernels and banded matrix-vector products.
//!
//! Every kernel resolves its backend through the dispatch registry and
//! reports its container accesses to the memory arbiter: inputs are
//! acquired for reading, outputs for writing, at the location of the
//! backend that actually runs.

mod kernels;
mod plan;

pub use plan::{ReductionPlan, BLOCKED_LANES};

use kernels::{map_indexed, BandView};

use crate::backends::{resolve, Backend};
use crate::{BandedMatrix, DenseVector, Error, Real, Result};

/// Binary elementwise operations `out = a op b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Sum,
    Difference,
    Product,
}

impl BinaryOp {
    fn kernel(self) -> &'static str {
        match self {
            BinaryOp::Sum => "sum",
            BinaryOp::Difference => "difference",
            BinaryOp::Product => "product",
        }
    }
}

fn same_len<T: Real>(a: &DenseVector<T>, b: &DenseVector<T>) -> Result<()> {
    b.check_len(a.len())
}

fn run_on(be: &Backend, kernel: &str) -> Result<Backend> {
    Ok(be.retag(resolve(kernel, be.tag())?))
}

/// `y <- y + alpha * x`
pub fn axpy<T: Real>(be: &Backend, y: &mut DenseVector<T>, alpha: T, x: &DenseVector<T>) -> Result<()> {
    same_len(y, x)?;
    let be = run_on(be, "axpy")?;
    be.read(x.block_id(), x.bytes());
    be.write(y.block_id(), y.bytes());
    let xs = x.as_slice();
    map_indexed(&be, be.tag(), y.as_mut_slice(), |i, yi| yi + alpha * xs[i]);
    Ok(())
}

/// `r <- alpha * a + beta * b`
pub fn scaled_sum<T: Real>(
    be: &Backend,
    r: &mut DenseVector<T>,
    a: &DenseVector<T>,
    b: &DenseVector<T>,
    alpha: T,
    beta: T,
) -> Result<()> {
    same_len(r, a)?;
    same_len(r, b)?;
    let be = run_on(be, "scaled_sum")?;
    be.read(a.block_id(), a.bytes());
    be.read(b.block_id(), b.bytes());
    be.write(r.block_id(), r.bytes());
    let (a, b) = (a.as_slice(), b.as_slice());
    map_indexed(&be, be.tag(), r.as_mut_slice(), |i, _| alpha * a[i] + beta * b[i]);
    Ok(())
}

/// `out <- a op b`
pub fn elementwise<T: Real>(
    be: &Backend,
    op: BinaryOp,
    out: &mut DenseVector<T>,
    a: &DenseVector<T>,
    b: &DenseVector<T>,
) -> Result<()> {
    same_len(out, a)?;
    same_len(out, b)?;
    let be = run_on(be, op.kernel())?;
    be.read(a.block_id(), a.bytes());
    be.read(b.block_id(), b.bytes());
    be.write(out.block_id(), out.bytes());
    let (a, b) = (a.as_slice(), b.as_slice());
    match op {
        BinaryOp::Sum => map_indexed(&be, be.tag(), out.as_mut_slice(), |i, _| a[i] + b[i]),
        BinaryOp::Difference => map_indexed(&be, be.tag(), out.as_mut_slice(), |i, _| a[i] - b[i]),
        BinaryOp::Product => map_indexed(&be, be.tag(), out.as_mut_slice(), |i, _| a[i] * b[i]),
    }
    Ok(())
}

/// `x <- alpha * x`
pub fn scale<T: Real>(be: &Backend, x: &mut DenseVector<T>, alpha: T) {
    let be = be.retag(resolve("scale", be.tag()).unwrap_or_default());
    be.write(x.block_id(), x.bytes());
    map_indexed(&be, be.tag(), x.as_mut_slice(), |_, v| alpha * v);
}

/// `sum_i x_i y_i` in the backend's [`ReductionPlan`] order.
pub fn dot<T: Real>(be: &Backend, x: &DenseVector<T>, y: &DenseVector<T>) -> Result<T> {
    same_len(x, y)?;
    let be = run_on(be, "dot")?;
    be.read(x.block_id(), x.bytes());
    be.read(y.block_id(), y.bytes());
    let (xs, ys) = (x.as_slice(), y.as_slice());
    Ok(ReductionPlan::for_backend(&be, be.tag()).reduce(xs.len(), |i| xs[i] * ys[i]))
}

/// Euclidean norm, or its square. The square is bitwise `dot(x, x)`.
pub fn norm_l2<T: Real>(be: &Backend, x: &DenseVector<T>, squared: bool) -> T {
    let be = be.retag(resolve("norm_l2", be.tag()).unwrap_or_default());
    be.read(x.block_id(), x.bytes());
    let xs = x.as_slice();
    let s = ReductionPlan::for_backend(&be, be.tag()).reduce(xs.len(), |i| xs[i] * xs[i]);
    if squared {
        s
    } else {
        s.sqrt()
    }
}

/// `y = A x` into a fresh vector.
pub fn banded_matvec<T: Real>(be: &Backend, a: &BandedMatrix<T>, x: &DenseVector<T>) -> Result<DenseVector<T>> {
    let mut y = DenseVector::zeros(a.order())?;
    banded_matvec_into(be, a, x, &mut y)?;
    Ok(y)
}

/// `y <- A x`
pub fn banded_matvec_into<T: Real>(
    be: &Backend,
    a: &BandedMatrix<T>,
    x: &DenseVector<T>,
    y: &mut DenseVector<T>,
) -> Result<()> {
    x.check_len(a.order())?;
    y.check_len(a.order())?;
    let be = run_on(be, "banded_matvec")?;
    be.read(a.block_id(), a.bytes());
    be.read(x.block_id(), x.bytes());
    be.write(y.block_id(), y.bytes());
    BandView::new(a).apply(&be, be.tag(), x.as_slice(), y.as_mut_slice());
    Ok(())
}

/// `r <- b - A x`
pub fn defect_into<T: Real>(
    be: &Backend,
    b: &DenseVector<T>,
    a: &BandedMatrix<T>,
    x: &DenseVector<T>,
    r: &mut DenseVector<T>,
) -> Result<()> {
    b.check_len(a.order())?;
    banded_matvec_into(be, a, x, r)?;
    let be = run_on(be, "difference")?;
    be.read(b.block_id(), b.bytes());
    be.write(r.block_id(), r.bytes());
    let bs = b.as_slice();
    map_indexed(&be, be.tag(), r.as_mut_slice(), |i, ax| bs[i] - ax);
    Ok(())
}

/// `||alpha y + beta A x||_2` in a single pass without storing `A x`.
pub fn residual_norm<T: Real>(
    be: &Backend,
    alpha: T,
    y: &DenseVector<T>,
    beta: T,
    a: &BandedMatrix<T>,
    x: &DenseVector<T>,
) -> Result<T> {
    x.check_len(a.order())?;
    y.check_len(a.order())?;
    let be = run_on(be, "residual_norm")?;
    be.read(a.block_id(), a.bytes());
    be.read(x.block_id(), x.bytes());
    be.read(y.block_id(), y.bytes());
    let view = BandView::new(a);
    let (xs, ys) = (x.as_slice(), y.as_slice());
    let s = ReductionPlan::for_backend(&be, be.tag()).reduce(ys.len(), |i| {
        let t = alpha * ys[i] + beta * view.row(xs, i);
        t * t
    });
    Ok(s.sqrt())
}

/// Rounds every element into precision `U` (round to nearest).
pub fn convert_precision<T: Real, U: Real>(be: &Backend, x: &DenseVector<T>) -> DenseVector<U> {
    let be = be.retag(resolve("convert_precision", be.tag()).unwrap_or_default());
    be.read(x.block_id(), x.bytes());
    let out = DenseVector::from_vec(x.iter().map(|v| v.cast::<U>()).collect())
        .unwrap_or_else(|_| unreachable!("source vectors are never empty"));
    be.write(out.block_id(), out.bytes());
    out
}

/// Like [`convert_precision`], into an existing vector.
pub fn convert_into<T: Real, U: Real>(be: &Backend, x: &DenseVector<T>, out: &mut DenseVector<U>) -> Result<()> {
    if x.len() != out.len() {
        return Err(Error::DimensionMismatch {
            expected: out.len(),
            found: x.len(),
        });
    }
    let be = run_on(be, "convert_precision")?;
    be.read(x.block_id(), x.bytes());
    be.write(out.block_id(), out.bytes());
    for (o, v) in out.as_mut_slice().iter_mut().zip(x.iter()) {
        *o = v.cast::<U>();
    }
    Ok(())
}
