//! Backend-tagged numerical kernels for structured-grid solvers.
//!
//! The crate is organised bottom-up:
//!
//! * [`containers`]: precision-generic dense vectors and banded matrices
//!   that are only ever copied through an explicit [`DenseVector::copy`] call.
//! * [`backends`]: the backend tags, the runtime configuration file and the
//!   memory arbiter that tracks where each data block currently lives.
//! * [`linalg`]: BLAS-1 style kernels, banded matrix-vector products and the
//!   fused residual-norm kernel, dispatched on a [`BackendTag`].
//! * [`solvers`]: damped Jacobi, conjugate gradients, grid transfers, the
//!   multigrid V-cycle and the mixed-precision defect-correction driver.
//! * [`fem`]: Q1 finite-element assembly of the Poisson problem on the unit
//!   square and the integral L2 error.
//! * [`swe`]: an explicit relaxation solver for the 2D shallow water
//!   equations, written as linear combinations of banded operators.

pub mod backends;
pub mod containers;
mod error;
pub mod fem;
pub mod linalg;
pub mod oracle;
mod scalar;
pub mod solvers;
pub mod swe;

pub use backends::{AccessMode, Backend, BackendTag, Location, MemoryArbiter, RuntimeConfig};
pub use containers::{BandLayout, BandedMatrix, BlockId, DenseVector};
pub use error::{Error, Result};
pub use scalar::{Precision, Real};
