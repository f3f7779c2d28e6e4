use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::Float;

/// Floating-point storage precision of a container.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Real scalar types a container can hold.
///
/// Conversions go through `f64`; narrowing to `f32` rounds to nearest-even.
pub trait Real:
    Float + Default + Sum + Send + Sync + Debug + Display + LowerExp + 'static
{
    const PRECISION: Precision;

    fn from_f64(v: f64) -> Self;
    fn as_f64(self) -> f64;

    #[inline]
    fn cast<U: Real>(self) -> U {
        U::from_f64(self.as_f64())
    }

    #[inline]
    fn bytes() -> usize {
        std::mem::size_of::<Self>()
    }
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Single;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Double;

    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}
