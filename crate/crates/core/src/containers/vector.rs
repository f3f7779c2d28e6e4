use std::ops::{Index, IndexMut};

use super::BlockId;
use crate::{Error, Real, Result};

/// Contiguous vector of reals of a fixed length.
#[derive(Debug, PartialEq)]
pub struct DenseVector<T> {
    data: Vec<T>,
    id: BlockId,
}

impl<T: Real> DenseVector<T> {
    pub fn new(len: usize, fill: T) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyContainer);
        }
        Ok(Self {
            data: vec![fill; len],
            id: BlockId::fresh(),
        })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(len, T::zero())
    }

    pub fn from_vec(data: Vec<T>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyContainer);
        }
        Ok(Self {
            data,
            id: BlockId::fresh(),
        })
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> T) -> Result<Self> {
        Self::from_vec((0..len).map(f).collect())
    }

    /// Deep copy under a new block id.
    pub fn copy(&self) -> Self {
        Self {
            data: self.data.clone(),
            id: BlockId::fresh(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false; kept for API symmetry with slices.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn block_id(&self) -> BlockId {
        self.id
    }

    pub fn bytes(&self) -> usize {
        self.data.len() * T::bytes()
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn fill(&mut self, value: T) {
        self.data.fill(value);
    }

    pub fn copy_from(&mut self, src: &DenseVector<T>) -> Result<()> {
        if src.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: src.len(),
            });
        }
        self.data.copy_from_slice(&src.data);
        Ok(())
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.data.clone()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.data.iter().map(|v| v.as_f64()).collect()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl<T> Index<usize> for DenseVector<T> {
    type Output = T;

    #[inline]
    fn index(&self, i: usize) -> &T {
        &self.data[i]
    }
}

impl<T> IndexMut<usize> for DenseVector<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.data[i]
    }
}

impl<'a, T> IntoIterator for &'a DenseVector<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.data.iter()
    }
}
