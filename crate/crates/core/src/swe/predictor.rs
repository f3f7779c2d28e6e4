use super::{source_term, SweParams, SweState};
use crate::linalg::{self, BinaryOp};
use crate::{Backend, BandLayout, BandedMatrix, DenseVector, Real, Result};

/// Sign of the ghost value of each component behind an x wall (the normal
/// momentum `hu1` flips) and behind a y wall (`hu2` flips). The ghost flux
/// picks up the opposite sign.
const MIRROR_X: [f64; 3] = [1.0, -1.0, 1.0];
const MIRROR_Y: [f64; 3] = [1.0, 1.0, -1.0];

/// Banded operators of one explicit Euler stage.
///
/// `m1` and `m2` are centred differences of the relaxation fields, `m3` and
/// `m4` the off-diagonal part of the upwind dissipation in x and y. Each
/// stores the four offsets `±1, ±m_x`. Couplings across a wall are absent
/// from the matrices; the reflected ghost values land on the diagonal and
/// live in the per-cell coefficient vectors.
#[derive(Debug)]
pub struct PredictorOperators<T> {
    pub m1: BandedMatrix<T>,
    pub m2: BandedMatrix<T>,
    pub m3: BandedMatrix<T>,
    pub m4: BandedMatrix<T>,
    /// Coefficient of `u_old`: `1 - dt (lambda_x/dx + lambda_y/dy)` plus wall terms.
    pub u_coeff: [DenseVector<T>; 3],
    pub v_coeff: [DenseVector<T>; 3],
    pub w_coeff: [DenseVector<T>; 3],
}

fn four_band<T: Real>(mx: usize, my: usize, x: (f64, f64), y: (f64, f64)) -> Result<BandedMatrix<T>> {
    let n = mx * my;
    let mut a = BandedMatrix::new(n, BandLayout::Arbitrary)?;
    let lower: Vec<T> = (0..n).map(|p| if p % mx == 0 { T::zero() } else { T::from_f64(x.0) }).collect();
    let upper: Vec<T> = (0..n).map(|p| if p % mx == mx - 1 { T::zero() } else { T::from_f64(x.1) }).collect();
    a.insert_band(-1, lower)?;
    a.insert_band(1, upper)?;
    a.insert_band(-(mx as isize), vec![T::from_f64(y.0); n])?;
    a.insert_band(mx as isize, vec![T::from_f64(y.1); n])?;
    Ok(a)
}

/// Builds the stage operators for `state` with the relaxation speeds and
/// step stored in `params`. Fails if a speed is not positive or the step
/// violates the CFL bound.
pub fn assemble_predictor<T: Real>(state: &SweState<T>, params: &SweParams) -> Result<PredictorOperators<T>> {
    params.check_cfl()?;
    let (mx, my) = (state.m_x, state.m_y);
    let n = mx * my;
    let cx = params.dt / (2.0 * params.dx);
    let cy = params.dt / (2.0 * params.dy);
    let dx_diss = cx * params.lambda_x;
    let dy_diss = cy * params.lambda_y;
    let centre = 1.0 - 2.0 * dx_diss - 2.0 * dy_diss;

    let mut u_coeff = [vec![centre; n], vec![centre; n], vec![centre; n]];
    let mut v_coeff = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut w_coeff = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for c in 0..3 {
        for j in 0..my {
            for (i, side) in [(0, 1.0), (mx - 1, -1.0)] {
                let p = j * mx + i;
                u_coeff[c][p] += dx_diss * MIRROR_X[c];
                v_coeff[c][p] -= side * cx * MIRROR_X[c];
            }
        }
        for i in 0..mx {
            for (j, side) in [(0, 1.0), (my - 1, -1.0)] {
                let p = j * mx + i;
                u_coeff[c][p] += dy_diss * MIRROR_Y[c];
                w_coeff[c][p] -= side * cy * MIRROR_Y[c];
            }
        }
    }
    let to_t = |f: [Vec<f64>; 3]| -> Result<[DenseVector<T>; 3]> {
        let [a, b, c] = f.map(|v| DenseVector::from_vec(v.into_iter().map(T::from_f64).collect()));
        Ok([a?, b?, c?])
    };
    Ok(PredictorOperators {
        m1: four_band(mx, my, (cx, -cx), (0.0, 0.0))?,
        m2: four_band(mx, my, (0.0, 0.0), (cy, -cy))?,
        m3: four_band(mx, my, (dx_diss, dx_diss), (0.0, 0.0))?,
        m4: four_band(mx, my, (0.0, 0.0), (dy_diss, dy_diss))?,
        u_coeff: to_t(u_coeff)?,
        v_coeff: to_t(v_coeff)?,
        w_coeff: to_t(w_coeff)?,
    })
}

/// Evaluates the linear combination
/// `c*u + M1 v + M2 w + M3 u + M4 u + (wall terms) + dt S` per component.
pub fn predict<T: Real>(
    be: &Backend,
    ops: &PredictorOperators<T>,
    state: &SweState<T>,
    source: &[DenseVector<T>; 3],
    dt: f64,
) -> Result<[DenseVector<T>; 3]> {
    let n = state.cells();
    let one = T::one();
    let component = |c: usize| -> Result<DenseVector<T>> {
        let (u, v, w) = (&state.u[c], &state.v[c], &state.w[c]);
        let mut out = DenseVector::zeros(n)?;
        let mut tmp = DenseVector::zeros(n)?;
        linalg::elementwise(be, BinaryOp::Product, &mut out, &ops.u_coeff[c], u)?;
        for (m, x) in [(&ops.m1, v), (&ops.m2, w), (&ops.m3, u), (&ops.m4, u)] {
            linalg::banded_matvec_into(be, m, x, &mut tmp)?;
            linalg::axpy(be, &mut out, one, &tmp)?;
        }
        for (coeff, x) in [(&ops.v_coeff[c], v), (&ops.w_coeff[c], w)] {
            linalg::elementwise(be, BinaryOp::Product, &mut tmp, coeff, x)?;
            linalg::axpy(be, &mut out, one, &tmp)?;
        }
        linalg::axpy(be, &mut out, T::from_f64(dt), &source[c])?;
        Ok(out)
    };
    Ok([component(0)?, component(1)?, component(2)?])
}

/// One explicit Euler stage: relaxation speeds from `state`, operator
/// assembly, source and the linear combination.
pub fn stage<T: Real>(be: &Backend, state: &SweState<T>, params: &SweParams) -> Result<[DenseVector<T>; 3]> {
    let params = params.with_wave_speeds(state);
    let ops = assemble_predictor(state, &params)?;
    let source = source_term(state, &params)?;
    predict(be, &ops, state, &source, params.dt)
}
