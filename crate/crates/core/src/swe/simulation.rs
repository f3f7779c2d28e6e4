use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::debug;

use super::{stage, SweParams, SweState};
use crate::linalg;
use crate::{Backend, DenseVector, Error, Precision, Real, Result};

/// Arithmetic used for the parts of a time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionConfig {
    AllSingle,
    AllDouble,
    /// Steps with `step_index % k == 0` run entirely in double precision.
    EveryKthDouble(usize),
    /// Both prediction stages run in double precision, everything else in
    /// single.
    PredictionDouble,
}

impl PrecisionConfig {
    pub fn validate(self) -> Result<()> {
        match self {
            PrecisionConfig::EveryKthDouble(k) if k < 2 => {
                Err(Error::InvalidParameter(format!("every-k-double needs k >= 2, got {k}")))
            }
            _ => Ok(()),
        }
    }

    /// Precision the state is kept in between steps.
    pub fn storage(self) -> Precision {
        match self {
            PrecisionConfig::AllDouble => Precision::Double,
            _ => Precision::Single,
        }
    }

    fn step_in_double(self, step_index: usize) -> bool {
        matches!(self, PrecisionConfig::EveryKthDouble(k) if step_index.is_multiple_of(k))
    }
}

impl fmt::Display for PrecisionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecisionConfig::AllSingle => f.write_str("all-single"),
            PrecisionConfig::AllDouble => f.write_str("all-double"),
            PrecisionConfig::EveryKthDouble(k) => write!(f, "every-{k}-double"),
            PrecisionConfig::PredictionDouble => f.write_str("prediction-double"),
        }
    }
}

impl FromStr for PrecisionConfig {
    type Err = Error;

    /// Accepts `all-single`/`single`, `all-double`/`double`,
    /// `prediction-double`/`prediction` and `every-K-double`/`every-K`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let config = match key.as_str() {
            "all-single" | "single" => PrecisionConfig::AllSingle,
            "all-double" | "double" => PrecisionConfig::AllDouble,
            "prediction-double" | "prediction" => PrecisionConfig::PredictionDouble,
            other => {
                let k = other
                    .strip_prefix("every-")
                    .map(|rest| rest.strip_suffix("-double").unwrap_or(rest))
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown precision config `{s}`")))?;
                PrecisionConfig::EveryKthDouble(k)
            }
        };
        config.validate()?;
        Ok(config)
    }
}

/// `|V - v0| / v0` with `V = sum(h) dx dy`.
pub fn relative_volume_error<T: Real>(state: &SweState<T>, v0: f64, params: &SweParams) -> f64 {
    (state.volume(params.dx, params.dy) - v0).abs() / v0
}

/// One prediction stage. With `blend = Some(u0)` the result is
/// `(u0 + stage(state)) / 2`, formed in the same precision as the stage.
fn run_stage<T: Real>(
    be: &Backend,
    state: &SweState<T>,
    params: &SweParams,
    widen: bool,
    blend: Option<&[DenseVector<T>; 3]>,
) -> Result<[DenseVector<T>; 3]> {
    if widen {
        let wide = state.convert::<f64>(be);
        let start = blend.map(|u0| u0.each_ref().map(|x| linalg::convert_precision::<T, f64>(be, x)));
        let out = finish_stage(be, stage(be, &wide, params)?, start.as_ref())?;
        Ok(out.map(|x| linalg::convert_precision(be, &x)))
    } else {
        finish_stage(be, stage(be, state, params)?, blend)
    }
}

fn finish_stage<T: Real>(be: &Backend, mut u: [DenseVector<T>; 3], blend: Option<&[DenseVector<T>; 3]>) -> Result<[DenseVector<T>; 3]> {
    if let Some(u0) = blend {
        let half = T::from_f64(0.5);
        for (out, start) in u.iter_mut().zip(u0) {
            let predicted = out.copy();
            linalg::scaled_sum(be, out, start, &predicted, half, half)?;
        }
    }
    Ok(u)
}

/// New state with conserved variables `u`, clamped and relaxed.
fn corrected<T: Real>(prev: &SweState<T>, u: [DenseVector<T>; 3], params: &SweParams, step: usize) -> Result<SweState<T>> {
    if u.iter().any(|f| f.iter().any(|x| !x.is_finite())) {
        return Err(Error::NonFinite { step });
    }
    let n = prev.cells();
    let mut next = SweState {
        m_x: prev.m_x,
        m_y: prev.m_y,
        u,
        v: [DenseVector::zeros(n)?, DenseVector::zeros(n)?, DenseVector::zeros(n)?],
        w: [DenseVector::zeros(n)?, DenseVector::zeros(n)?, DenseVector::zeros(n)?],
        bed: prev.bed.copy(),
        time: prev.time,
    };
    next.clamp_dry(params.eps_dry);
    next.relax(params);
    Ok(next)
}

/// Heun's method in Shu–Osher form: `u1 = E(u)`, `u_new = (u + E(u1)) / 2`
/// with `E` one explicit Euler stage, so the average is part of the second
/// prediction.
fn heun<T: Real>(be: &Backend, state: &SweState<T>, params: &SweParams, widen: bool, step: usize) -> Result<SweState<T>> {
    let u1 = run_stage(be, state, params, widen, None)?;
    let s1 = corrected(state, u1, params, step)?;
    let u2 = run_stage(be, &s1, params, widen, Some(&state.u))?;
    let mut next = corrected(state, u2, params, step)?;
    next.time = state.time + params.dt;
    Ok(next)
}

/// Advances `state` by one Heun step of length `params.dt`.
///
/// Each stage evaluates the predictor, clamps dry cells and resets the
/// relaxation fields. `config` only has an effect on single-precision
/// states, which it widens for the whole step or for the two prediction
/// stages.
pub fn timestep<T: Real>(
    be: &Backend,
    state: &SweState<T>,
    params: &SweParams,
    config: PrecisionConfig,
    step_index: usize,
) -> Result<SweState<T>> {
    config.validate()?;
    let single = T::PRECISION == Precision::Single;
    if single && config.step_in_double(step_index) {
        let wide = state.convert::<f64>(be);
        return Ok(heun(be, &wide, params, false, step_index)?.convert::<T>(be));
    }
    heun(be, state, params, single && config == PrecisionConfig::PredictionDouble, step_index)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeSample {
    pub step: usize,
    pub time: f64,
    pub rel_vol_err: f64,
}

#[derive(Debug)]
pub struct SimulationReport {
    pub config: PrecisionConfig,
    /// One sample per step, starting with the initial state.
    pub samples: Vec<VolumeSample>,
    pub reference_volume: f64,
    /// Smallest depth seen after any step.
    pub min_depth: f64,
    pub final_state: SweState<f64>,
    pub wall_time: Duration,
}

impl SimulationReport {
    pub fn final_volume_error(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.rel_vol_err)
    }
}

/// Runs `steps` time steps from `initial`, storing the state in the
/// precision `config` asks for. The reference volume is that of the
/// initial state in storage precision. With `snapshot_every = Some(k)`
/// the callback sees the initial state and every `k`-th step.
pub fn run_simulation(
    be: &Backend,
    initial: &SweState<f64>,
    params: &SweParams,
    steps: usize,
    config: PrecisionConfig,
    snapshot_every: Option<usize>,
    on_snapshot: &mut dyn FnMut(usize, &SweState<f64>) -> Result<()>,
) -> Result<SimulationReport> {
    config.validate()?;
    params.validate()?;
    match config.storage() {
        Precision::Double => run::<f64>(be, initial.copy(), params, steps, config, snapshot_every, on_snapshot),
        Precision::Single => run::<f32>(be, initial.convert(be), params, steps, config, snapshot_every, on_snapshot),
    }
}

fn run<T: Real>(
    be: &Backend,
    mut state: SweState<T>,
    params: &SweParams,
    steps: usize,
    config: PrecisionConfig,
    snapshot_every: Option<usize>,
    on_snapshot: &mut dyn FnMut(usize, &SweState<f64>) -> Result<()>,
) -> Result<SimulationReport> {
    let start = Instant::now();
    let v0 = state.volume(params.dx, params.dy);
    if v0.is_nan() || v0 <= 0.0 {
        return Err(Error::InvalidParameter("initial state holds no water".into()));
    }
    let snapshot_due = |step: usize| snapshot_every.is_some_and(|k| k > 0 && step.is_multiple_of(k));
    let mut samples = vec![VolumeSample {
        step: 0,
        time: state.time,
        rel_vol_err: relative_volume_error(&state, v0, params),
    }];
    let mut min_depth = state.min_depth();
    if snapshot_due(0) {
        on_snapshot(0, &state.convert(be))?;
    }
    for step in 1..=steps {
        state = timestep(be, &state, params, config, step)?;
        let err = relative_volume_error(&state, v0, params);
        samples.push(VolumeSample {
            step,
            time: state.time,
            rel_vol_err: err,
        });
        min_depth = min_depth.min(state.min_depth());
        if snapshot_due(step) {
            on_snapshot(step, &state.convert(be))?;
        }
    }
    debug!("{config}: {steps} steps, final volume error {:e}", samples.last().map_or(0.0, |s| s.rel_vol_err));
    Ok(SimulationReport {
        config,
        samples,
        reference_volume: v0,
        min_depth,
        final_state: state.convert(be),
        wall_time: start.elapsed(),
    })
}
