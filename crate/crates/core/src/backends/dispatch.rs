use log::debug;

use super::{Backend, BackendTag};
use crate::linalg::{self, BinaryOp};
use crate::{BandedMatrix, DenseVector, Error, Real, Result};

use BackendTag::*;

/// Registered kernels and the backends that specialise them. Any other tag
/// falls back to `Generic`.
pub const KERNELS: &[(&str, &[BackendTag])] = &[
    ("axpy", &[Generic, Blocked, Parallel]),
    ("scaled_sum", &[Generic, Blocked, Parallel]),
    ("sum", &[Generic, Blocked, Parallel]),
    ("difference", &[Generic, Blocked, Parallel]),
    ("product", &[Generic, Blocked, Parallel]),
    ("scale", &[Generic, Blocked, Parallel]),
    ("dot", &[Generic, Blocked, Parallel]),
    ("norm_l2", &[Generic, Blocked, Parallel]),
    ("banded_matvec", &[Generic, Blocked, Parallel]),
    ("residual_norm", &[Generic, Blocked, Parallel]),
    ("convert_precision", &[Generic]),
];

pub fn specialisations(kernel: &str) -> Option<&'static [BackendTag]> {
    KERNELS.iter().find(|(name, _)| *name == kernel).map(|(_, tags)| *tags)
}

/// Tag that will actually run `kernel` when `requested` is asked for.
pub fn resolve(kernel: &str, requested: BackendTag) -> Result<BackendTag> {
    let tags = specialisations(kernel).ok_or_else(|| Error::UnknownKernel(kernel.to_string()))?;
    if tags.contains(&requested) {
        Ok(requested)
    } else {
        debug!("{kernel}: no {requested} specialisation, using generic");
        Ok(Generic)
    }
}

/// Arguments for name-based dispatch.
pub enum KernelArgs<'a, T> {
    Axpy {
        y: &'a mut DenseVector<T>,
        alpha: T,
        x: &'a DenseVector<T>,
    },
    ScaledSum {
        r: &'a mut DenseVector<T>,
        a: &'a DenseVector<T>,
        b: &'a DenseVector<T>,
        alpha: T,
        beta: T,
    },
    Elementwise {
        out: &'a mut DenseVector<T>,
        a: &'a DenseVector<T>,
        b: &'a DenseVector<T>,
    },
    Scale {
        x: &'a mut DenseVector<T>,
        alpha: T,
    },
    Dot {
        x: &'a DenseVector<T>,
        y: &'a DenseVector<T>,
    },
    Norm {
        x: &'a DenseVector<T>,
        squared: bool,
    },
    Matvec {
        a: &'a BandedMatrix<T>,
        x: &'a DenseVector<T>,
    },
    ResidualNorm {
        alpha: T,
        y: &'a DenseVector<T>,
        beta: T,
        a: &'a BandedMatrix<T>,
        x: &'a DenseVector<T>,
    },
    ToSingle {
        x: &'a DenseVector<T>,
    },
    ToDouble {
        x: &'a DenseVector<T>,
    },
}

impl<T> KernelArgs<'_, T> {
    fn name(&self) -> &'static str {
        match self {
            KernelArgs::Axpy { .. } => "axpy",
            KernelArgs::ScaledSum { .. } => "scaled_sum",
            KernelArgs::Elementwise { .. } => "elementwise",
            KernelArgs::Scale { .. } => "scale",
            KernelArgs::Dot { .. } => "dot",
            KernelArgs::Norm { .. } => "norm_l2",
            KernelArgs::Matvec { .. } => "banded_matvec",
            KernelArgs::ResidualNorm { .. } => "residual_norm",
            KernelArgs::ToSingle { .. } | KernelArgs::ToDouble { .. } => "convert_precision",
        }
    }
}

#[derive(Debug, PartialEq)]
pub enum KernelOutput<T> {
    Unit,
    Scalar(T),
    Vector(DenseVector<T>),
    Single(DenseVector<f32>),
    Double(DenseVector<f64>),
}

/// Runs the kernel registered as `kernel` on `backend`'s tag.
pub fn dispatch<T: Real>(backend: &Backend, kernel: &str, args: KernelArgs<'_, T>) -> Result<KernelOutput<T>> {
    let tag = resolve(kernel, backend.tag())?;
    let be = backend.retag(tag);
    let mismatch = |args: &KernelArgs<'_, T>| Error::KernelArgs {
        kernel: kernel.to_string(),
        args: args.name(),
    };
    let binary = match kernel {
        "sum" => Some(BinaryOp::Sum),
        "difference" => Some(BinaryOp::Difference),
        "product" => Some(BinaryOp::Product),
        _ => None,
    };
    match (kernel, args) {
        ("axpy", KernelArgs::Axpy { y, alpha, x }) => linalg::axpy(&be, y, alpha, x).map(|_| KernelOutput::Unit),
        ("scaled_sum", KernelArgs::ScaledSum { r, a, b, alpha, beta }) => {
            linalg::scaled_sum(&be, r, a, b, alpha, beta).map(|_| KernelOutput::Unit)
        }
        (_, KernelArgs::Elementwise { out, a, b }) if binary.is_some() => {
            linalg::elementwise(&be, binary.unwrap_or(BinaryOp::Sum), out, a, b).map(|_| KernelOutput::Unit)
        }
        ("scale", KernelArgs::Scale { x, alpha }) => {
            linalg::scale(&be, x, alpha);
            Ok(KernelOutput::Unit)
        }
        ("dot", KernelArgs::Dot { x, y }) => linalg::dot(&be, x, y).map(KernelOutput::Scalar),
        ("norm_l2", KernelArgs::Norm { x, squared }) => Ok(KernelOutput::Scalar(linalg::norm_l2(&be, x, squared))),
        ("banded_matvec", KernelArgs::Matvec { a, x }) => linalg::banded_matvec(&be, a, x).map(KernelOutput::Vector),
        ("residual_norm", KernelArgs::ResidualNorm { alpha, y, beta, a, x }) => {
            linalg::residual_norm(&be, alpha, y, beta, a, x).map(KernelOutput::Scalar)
        }
        ("convert_precision", KernelArgs::ToSingle { x }) => Ok(KernelOutput::Single(linalg::convert_precision(&be, x))),
        ("convert_precision", KernelArgs::ToDouble { x }) => Ok(KernelOutput::Double(linalg::convert_precision(&be, x))),
        (_, args) => Err(mismatch(&args)),
    }
}
