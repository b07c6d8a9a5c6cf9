//! `--state` values: a name, an inline JSON object, or `@path` to a JSON file.

use std::fs;

use serde::Deserialize;
use vqb_core::{Complex64, ComplexMatrix, DensityMatrix};

use crate::error::{CliError, CliResult};

/// Amplitude vectors whose norm is further than this from 1 are normalized with a warning.
const NORM_WARNING: f64 = 1e-6;

pub const NAMED: [&str; 5] = ["zero", "one", "plus", "mixed_plus_half", "maximally_mixed"];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InlineState {
    Pure { amplitudes: Vec<[f64; 2]> },
    Mixed { matrix: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Named(String),
    Inline(InlineState),
}

impl StateSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        let s = s.trim();
        let text = match s.strip_prefix('@') {
            Some(path) => fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("cannot read state file {path}: {e}")))?,
            None if s.starts_with('{') => s.to_string(),
            None => {
                return if NAMED.contains(&s) {
                    Ok(StateSpec::Named(s.to_string()))
                } else {
                    Err(CliError::Validation(format!("unknown state {s:?}; expected one of {NAMED:?} or inline JSON")))
                };
            }
        };
        serde_json::from_str(&text)
            .map(StateSpec::Inline)
            .map_err(|e| CliError::Validation(format!("malformed state JSON: {e}")))
    }

    /// Builds the density matrix. Named states take their dimension from `d`
    /// (default 2); inline states carry their own and must agree with `d` if given.
    pub fn resolve(&self, d: Option<usize>) -> CliResult<DensityMatrix> {
        let rho = match self {
            StateSpec::Named(name) => named(name, d.unwrap_or(2))?,
            StateSpec::Inline(inline) => inline_state(inline)?,
        };
        if let Some(d) = d {
            if rho.dim() != d {
                return Err(CliError::Validation(format!("state has dimension {} but --d is {d}", rho.dim())));
            }
        }
        Ok(rho)
    }
}

fn validation(e: vqb_core::Error) -> CliError {
    CliError::Validation(e.to_string())
}

fn uniform_superposition(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| Complex64::new(1.0 / d as f64, 0.0))
}

fn named(name: &str, d: usize) -> CliResult<DensityMatrix> {
    let mat = match name {
        "zero" => return Ok(DensityMatrix::basis(0, d)),
        "one" => return Ok(DensityMatrix::basis(1, d)),
        "maximally_mixed" => return Ok(DensityMatrix::maximally_mixed(d)),
        "plus" => uniform_superposition(d),
        // I/(2d) + |+><+|/2; at d = 2 this is I/4 + |+><+|/2.
        "mixed_plus_half" => {
            ComplexMatrix::identity(d).scale_re(0.5 / d as f64) + uniform_superposition(d).scale_re(0.5)
        }
        other => return Err(CliError::Validation(format!("unknown state {other:?}"))),
    };
    DensityMatrix::from_matrix(mat).map_err(validation)
}

fn inline_state(inline: &InlineState) -> CliResult<DensityMatrix> {
    match inline {
        InlineState::Pure { amplitudes } => {
            let amps: Vec<Complex64> = amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            if amps.len() < 2 {
                return Err(CliError::Validation("a pure state needs at least 2 amplitudes".into()));
            }
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm.is_finite() && (norm - 1.0).abs() > NORM_WARNING {
                eprintln!("warning: amplitude vector has norm {norm}; normalizing");
            }
            DensityMatrix::pure(&amps).map_err(validation)
        }
        InlineState::Mixed { matrix } => {
            let rows: Vec<Vec<Complex64>> = matrix
                .iter()
                .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
                .collect();
            if rows.len() < 2 {
                return Err(CliError::Validation("a density matrix needs dimension at least 2".into()));
            }
            let mat = ComplexMatrix::from_rows(&rows).map_err(validation)?;
            DensityMatrix::from_matrix(mat).map_err(validation)
        }
    }
}
