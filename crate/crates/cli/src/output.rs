use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use hpla_core::swe::SweState;
use hpla_core::Real;

use crate::{io_error, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldFormat {
    Csv,
    Pgm,
}

impl FieldFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FieldFormat::Csv => "csv",
            FieldFormat::Pgm => "pgm",
        }
    }
}

impl FromStr for FieldFormat {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(FieldFormat::Csv),
            "pgm" => Ok(FieldFormat::Pgm),
            other => Err(CliError::Usage(format!("unknown field format '{other}' (expected csv or pgm)"))),
        }
    }
}

/// Renders the depth as `m_y` lines of `m_x` comma-separated values, the
/// first line holding `y = 0`. Values use the shortest decimal form that
/// parses back to the same number.
pub fn height_csv<T: Real>(state: &SweState<T>) -> String {
    let h = state.depth().as_slice();
    let mut out = String::with_capacity(h.len() * 8);
    for row in h.chunks(state.m_x) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

/// Plain (P2) greyscale image of the depth, scaled linearly so the frame
/// minimum is 0 and the maximum 255. A constant frame is all zeros.
pub fn height_pgm<T: Real>(state: &SweState<T>) -> String {
    let h: Vec<f64> = state.depth().iter().map(|v| v.as_f64()).collect();
    let lo = h.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    let mut out = format!("P2\n{} {}\n255\n", state.m_x, state.m_y);
    for row in h.chunks(state.m_x) {
        let line: Vec<String> = row
            .iter()
            .map(|&v| {
                let g = if span > 0.0 { ((v - lo) / span * 255.0).round() } else { 0.0 };
                (g.clamp(0.0, 255.0) as u8).to_string()
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_height_field<T: Real>(state: &SweState<T>, path: &Path, format: FieldFormat) -> CliResult<()> {
    let text = match format {
        FieldFormat::Csv => height_csv(state),
        FieldFormat::Pgm => height_pgm(state),
    };
    fs::write(path, text).map_err(io_error(path))
}

/// Reads a height field written by [`write_height_field`] in CSV form.
/// Returns `(m_x, m_y, values)` with values in row-major order.
pub fn read_height_csv(path: &Path) -> CliResult<(usize, usize, Vec<f64>)> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let mut values = Vec::new();
    let mut m_x = None;
    let mut m_y = 0;
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        match m_x {
            None => m_x = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected {w} values, found {}",
                    path.display(),
                    lineno + 1,
                    row.len()
                )))
            }
            Some(_) => {}
        }
        values.extend(row);
        m_y += 1;
    }
    Ok((m_x.unwrap_or(0), m_y, values))
}
