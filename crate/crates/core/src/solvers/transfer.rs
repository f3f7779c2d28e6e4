//! Grid transfers between nested `m x m` tensor grids with
//! `m_fine = 2 m_coarse - 1`. Nodes are numbered `j * m + i` with `i`
//! running along x.

use crate::{DenseVector, Error, Real, Result};

fn check_square<T: Real>(v: &DenseVector<T>, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("grid side {m} < 2")));
    }
    v.check_len(m * m)
}

/// Bilinear interpolation from the coarse to the next finer grid.
pub fn prolongate<T: Real>(coarse: &DenseVector<T>, m_coarse: usize) -> Result<DenseVector<T>> {
    check_square(coarse, m_coarse)?;
    let mc = m_coarse;
    let mf = 2 * mc - 1;
    let half = T::from_f64(0.5);
    let quarter = T::from_f64(0.25);
    let c = |i: usize, j: usize| coarse[j * mc + i];
    let mut fine = DenseVector::zeros(mf * mf)?;
    for jf in 0..mf {
        let (jc, jodd) = (jf / 2, jf % 2 == 1);
        for if_ in 0..mf {
            let (ic, iodd) = (if_ / 2, if_ % 2 == 1);
            fine[jf * mf + if_] = match (iodd, jodd) {
                (false, false) => c(ic, jc),
                (true, false) => half * (c(ic, jc) + c(ic + 1, jc)),
                (false, true) => half * (c(ic, jc) + c(ic, jc + 1)),
                (true, true) => quarter * ((c(ic, jc) + c(ic + 1, jc)) + (c(ic, jc + 1) + c(ic + 1, jc + 1))),
            };
        }
    }
    Ok(fine)
}

/// Full weighting to the next coarser grid: interior coarse nodes receive
/// `1/16 [1 2 1; 2 4 2; 1 2 1]` of the fine neighbourhood, boundary nodes
/// are injected.
pub fn restrict<T: Real>(fine: &DenseVector<T>, m_fine: usize) -> Result<DenseVector<T>> {
    check_square(fine, m_fine)?;
    if m_fine.is_multiple_of(2) || m_fine < 3 {
        return Err(Error::InvalidParameter(format!(
            "fine grid side {m_fine} must be odd and >= 3"
        )));
    }
    let mf = m_fine;
    let mc = mf.div_ceil(2);
    let f = |i: usize, j: usize| fine[j * mf + i];
    let w = [1.0, 2.0, 1.0].map(T::from_f64);
    let sixteenth = T::from_f64(1.0 / 16.0);
    let mut coarse = DenseVector::zeros(mc * mc)?;
    for jc in 0..mc {
        for ic in 0..mc {
            let (i, j) = (2 * ic, 2 * jc);
            coarse[jc * mc + ic] = if ic == 0 || jc == 0 || ic == mc - 1 || jc == mc - 1 {
                f(i, j)
            } else {
                let mut acc = T::zero();
                for (dj, wj) in w.iter().enumerate() {
                    for (di, wi) in w.iter().enumerate() {
                        acc = acc + *wi * *wj * f(i + di - 1, j + dj - 1);
                    }
                }
                sixteenth * acc
            };
        }
    }
    Ok(coarse)
}
