use std::fmt;
use std::str::FromStr;

use super::{SweParams, SweState};
use crate::{Error, Result};

pub const MIN_GRID: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Column of deep water in the middle of a shallower lake.
    CircularDambreak,
    /// Straight dam across the domain with a breach in the middle third.
    PartialDambreak,
    /// Circular column released onto a dry bed.
    DryBedDambreak,
    /// Lake at rest.
    Uniform,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::CircularDambreak,
        ScenarioKind::PartialDambreak,
        ScenarioKind::DryBedDambreak,
        ScenarioKind::Uniform,
    ];

    /// Step that keeps the default dambreak of this kind within the CFL
    /// bound for its whole run on 5 m cells.
    pub fn default_dt(self) -> f64 {
        match self {
            ScenarioKind::DryBedDambreak => 0.05,
            ScenarioKind::PartialDambreak => 0.15,
            _ => 0.2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::CircularDambreak => "circular",
            ScenarioKind::PartialDambreak => "partial",
            ScenarioKind::DryBedDambreak => "dry-bed",
            ScenarioKind::Uniform => "uniform",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key || format!("{}-dambreak", k.name()) == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario `{s}`")))
    }
}

/// Water levels of a dambreak. `radius` is a fraction of the domain width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DambreakShape {
    pub h_in: f64,
    pub h_out: f64,
    pub radius: f64,
}

impl Default for DambreakShape {
    fn default() -> Self {
        Self {
            h_in: 10.0,
            h_out: 5.0,
            radius: 0.15,
        }
    }
}

pub fn make_scenario(kind: ScenarioKind, m: usize, params: &SweParams) -> Result<SweState<f64>> {
    make_scenario_with(kind, m, params, DambreakShape::default())
}

/// Initial state on an `m x m` grid, at rest. The dry-bed variant ignores
/// `shape.h_out` and uses zero; the uniform one fills the lake at `h_out`.
pub fn make_scenario_with(kind: ScenarioKind, m: usize, params: &SweParams, shape: DambreakShape) -> Result<SweState<f64>> {
    if m < MIN_GRID {
        return Err(Error::InvalidParameter(format!("grid side {m} is below the minimum {MIN_GRID}")));
    }
    params.validate()?;
    let n = m * m;
    let centre_x = 0.5 * m as f64 * params.dx;
    let centre_y = 0.5 * m as f64 * params.dy;
    let r0 = shape.radius * m as f64 * params.dx;
    let inside = |i: usize, j: usize| {
        let x = (i as f64 + 0.5) * params.dx - centre_x;
        let y = (j as f64 + 0.5) * params.dy - centre_y;
        x.hypot(y) <= r0
    };
    let mut h = vec![0.0; n];
    let mut bed = vec![0.0; n];
    for j in 0..m {
        for i in 0..m {
            let p = j * m + i;
            h[p] = match kind {
                ScenarioKind::CircularDambreak if inside(i, j) => shape.h_in,
                ScenarioKind::CircularDambreak => shape.h_out,
                ScenarioKind::DryBedDambreak if inside(i, j) => shape.h_in,
                ScenarioKind::DryBedDambreak => 0.0,
                ScenarioKind::Uniform => shape.h_out,
                ScenarioKind::PartialDambreak => {
                    let dam = i == m / 2 - 1 || i == m / 2;
                    let breach = (m * 2 / 5..m * 3 / 5).contains(&j);
                    if dam && !breach {
                        bed[p] = 1.2 * shape.h_in;
                    }
                    let level = if i < m / 2 { shape.h_in } else { shape.h_out };
                    (level - bed[p]).max(0.0)
                }
            };
        }
    }
    let zeros = vec![0.0; n];
    SweState::new(m, m, &h, &zeros, &zeros, &bed, params)
}
