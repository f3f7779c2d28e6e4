use std::collections::BTreeMap;

use super::BlockId;
use crate::{Error, Real, Result};

/// Which band offsets a [`BandedMatrix`] accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandLayout {
    /// Any offset in `-(n-1)..=n-1`.
    Arbitrary,
    /// The nine offsets of a Q1 stencil on an `m x m` tensor grid.
    Q1Fixed,
}

/// The nine Q1 offsets for an `m x m` grid in ascending order.
pub fn q1_offsets(m: usize) -> [isize; 9] {
    let m = m as isize;
    [-m - 1, -m, -m + 1, -1, 0, 1, m - 1, m, m + 1]
}

/// Square matrix stored as full-length diagonals.
///
/// Band `k` holds entry `(i, i + k)` in slot `i`. Slots whose column falls
/// outside `0..n` are kept at zero and never read by the kernels.
#[derive(Debug, PartialEq)]
pub struct BandedMatrix<T> {
    n: usize,
    bands: BTreeMap<isize, Vec<T>>,
    layout: BandLayout,
    id: BlockId,
}

/// `m` with `m * m == n`, if any.
fn grid_side(n: usize) -> Option<usize> {
    let m = (n as f64).sqrt().round() as usize;
    (m >= 2 && m * m == n).then_some(m)
}

/// Row range for which band `offset` addresses a valid column.
#[inline]
pub(crate) fn band_rows(n: usize, offset: isize) -> std::ops::Range<usize> {
    if offset >= 0 {
        0..n.saturating_sub(offset as usize)
    } else {
        ((-offset) as usize).min(n)..n
    }
}

impl<T: Real> BandedMatrix<T> {
    pub fn new(n: usize, layout: BandLayout) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyContainer);
        }
        if layout == BandLayout::Q1Fixed && grid_side(n).is_none() {
            return Err(Error::NotASquareGrid(n));
        }
        Ok(Self {
            n,
            bands: BTreeMap::new(),
            layout,
            id: BlockId::fresh(),
        })
    }

    /// Identity of order `n` with a single main band.
    pub fn identity(n: usize, layout: BandLayout) -> Result<Self> {
        let mut a = Self::new(n, layout)?;
        a.insert_band(0, vec![T::one(); n])?;
        Ok(a)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn layout(&self) -> BandLayout {
        self.layout
    }

    #[inline]
    pub fn block_id(&self) -> BlockId {
        self.id
    }

    /// Grid side length for a Q1Fixed matrix.
    pub fn grid_side(&self) -> Option<usize> {
        match self.layout {
            BandLayout::Q1Fixed => grid_side(self.n),
            BandLayout::Arbitrary => None,
        }
    }

    pub fn bytes(&self) -> usize {
        self.bands.len() * self.n * T::bytes()
    }

    fn check_offset(&self, offset: isize) -> Result<()> {
        if offset.unsigned_abs() >= self.n {
            return Err(Error::BandOffsetOutOfRange { offset, n: self.n });
        }
        if let Some(m) = self.grid_side() {
            if !q1_offsets(m).contains(&offset) {
                return Err(Error::IllegalQ1Offset { offset, m });
            }
        }
        Ok(())
    }

    /// Stores `values` as band `offset`, replacing any previous band.
    pub fn insert_band(&mut self, offset: isize, mut values: Vec<T>) -> Result<()> {
        self.check_offset(offset)?;
        if values.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: values.len(),
            });
        }
        let live = band_rows(self.n, offset);
        for (i, v) in values.iter_mut().enumerate() {
            if !live.contains(&i) {
                *v = T::zero();
            }
        }
        self.bands.insert(offset, values);
        Ok(())
    }

    pub fn band(&self, offset: isize) -> Option<&[T]> {
        self.bands.get(&offset).map(Vec::as_slice)
    }

    /// Offsets of stored bands, ascending.
    pub fn offsets(&self) -> impl Iterator<Item = isize> + '_ {
        self.bands.keys().copied()
    }

    pub fn bands(&self) -> impl Iterator<Item = (isize, &[T])> + '_ {
        self.bands.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    /// Entry `(i, j)`; zero when the band is absent.
    pub fn get(&self, i: usize, j: usize) -> T {
        let k = j as isize - i as isize;
        self.bands.get(&k).map_or(T::zero(), |b| b[i])
    }

    /// Sets entry `(i, j)`, creating a zero band on first use.
    pub fn set(&mut self, i: usize, j: usize, value: T) -> Result<()> {
        if i >= self.n || j >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: i.max(j),
            });
        }
        let k = j as isize - i as isize;
        self.check_offset(k)?;
        let n = self.n;
        self.bands.entry(k).or_insert_with(|| vec![T::zero(); n])[i] = value;
        Ok(())
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: T) -> Result<()> {
        let cur = self.get(i, j);
        self.set(i, j, cur + value)
    }

    /// Main diagonal; zeros if no band 0 is stored.
    pub fn diagonal(&self) -> Vec<T> {
        self.band(0)
            .map_or_else(|| vec![T::zero(); self.n], <[T]>::to_vec)
    }

    /// Deep copy under a new block id.
    pub fn copy(&self) -> Self {
        Self {
            n: self.n,
            bands: self.bands.clone(),
            layout: self.layout,
            id: BlockId::fresh(),
        }
    }

    /// Elementwise rounding into another precision.
    pub fn convert<U: Real>(&self) -> BandedMatrix<U> {
        BandedMatrix {
            n: self.n,
            bands: self
                .bands
                .iter()
                .map(|(&k, b)| (k, b.iter().map(|v| v.cast::<U>()).collect()))
                .collect(),
            layout: self.layout,
            id: BlockId::fresh(),
        }
    }

    /// Transpose; band `k` becomes band `-k`.
    pub fn transpose(&self) -> Self {
        let mut bands = BTreeMap::new();
        for (&k, b) in &self.bands {
            let mut t = vec![T::zero(); self.n];
            for i in band_rows(self.n, k) {
                t[(i as isize + k) as usize] = b[i];
            }
            bands.insert(-k, t);
        }
        Self {
            n: self.n,
            bands,
            layout: self.layout,
            id: BlockId::fresh(),
        }
    }
}
