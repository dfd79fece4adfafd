//! On-disk JSON formats for states and local unitary specifications.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use qcentral_core::{
    coeffs_to_dense, dense_to_coeffs, LocalFactor, LocalUnitarySpec, PauliIndex, PauliState,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// Coefficient encoding written to disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Encoding {
    Pauli,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateData {
    /// Pauli-string letters run from qubit 1 to n; missing strings are 0.
    Pauli(BTreeMap<String, f64>),
    /// Rows of `[re, im]` pairs.
    Dense(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub version: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub data: StateData,
}

impl StateFile {
    pub fn from_state(state: &PauliState, label: Option<String>, encoding: Encoding) -> Result<Self, CliError> {
        let data = match encoding {
            Encoding::Pauli => StateData::Pauli(
                state.terms().map(|(idx, v)| (idx.to_string(), v)).collect(),
            ),
            Encoding::Dense => {
                let dense = coeffs_to_dense(state)?;
                let m = dense.matrix();
                StateData::Dense(
                    (0..m.nrows())
                        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                        .collect(),
                )
            }
        };
        Ok(StateFile {
            version: FORMAT_VERSION,
            n: state.n(),
            label,
            data,
        })
    }

    pub fn to_state(&self) -> Result<PauliState, CliError> {
        if self.version != FORMAT_VERSION {
            return Err(CliError::Format(format!(
                "unsupported state file version {} (expected {FORMAT_VERSION})",
                self.version
            )));
        }
        match &self.data {
            StateData::Pauli(map) => {
                let terms = map
                    .iter()
                    .map(|(k, &v)| {
                        if k.chars().count() != self.n {
                            return Err(CliError::Format(format!(
                                "Pauli string {k:?} has length {}, n = {}",
                                k.chars().count(),
                                self.n
                            )));
                        }
                        Ok((k.parse::<PauliIndex>()?, v))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(PauliState::from_terms(self.n, terms)?)
            }
            StateData::Dense(rows) => {
                let dim = 1usize << self.n;
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(CliError::Format(format!(
                        "dense matrix must be {dim}×{dim} for n = {}",
                        self.n
                    )));
                }
                let m = DMatrix::from_fn(dim, dim, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
                Ok(dense_to_coeffs(&qcentral_core::DenseOperator::new(m)?)?)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }

    /// Single-line form, for JSON-lines batches.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("state file serializes")
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorEntry {
    /// 1-based.
    pub qubit: usize,
    pub axis: [f64; 3],
    /// Radians.
    pub angle: f64,
}

/// `U = ⊗_j exp(i angle_j axis_j·σ⃗)`; omitted qubits are the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitarySpecFile {
    #[serde(default = "default_version")]
    pub version: u32,
    pub factors: Vec<FactorEntry>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

impl UnitarySpecFile {
    pub fn from_spec(spec: &LocalUnitarySpec) -> Self {
        UnitarySpecFile {
            version: FORMAT_VERSION,
            factors: spec
                .factors()
                .iter()
                .enumerate()
                .filter(|(_, f)| f.angle() != 0.0)
                .map(|(j, f)| FactorEntry {
                    qubit: j + 1,
                    axis: f.axis(),
                    angle: f.angle(),
                })
                .collect(),
        }
    }

    pub fn to_spec(&self, n: usize) -> Result<LocalUnitarySpec, CliError> {
        let mut factors = vec![LocalFactor::IDENTITY; n];
        let mut seen = vec![false; n];
        for e in &self.factors {
            if e.qubit == 0 || e.qubit > n {
                return Err(CliError::Format(format!("qubit {} out of range 1..={n}", e.qubit)));
            }
            if std::mem::replace(&mut seen[e.qubit - 1], true) {
                return Err(CliError::Format(format!("qubit {} listed twice", e.qubit)));
            }
            factors[e.qubit - 1] = LocalFactor::new(e.axis, e.angle)?;
        }
        Ok(LocalUnitarySpec::new(factors)?)
    }

    pub fn inverse(&self) -> Self {
        UnitarySpecFile {
            version: self.version,
            factors: self
                .factors
                .iter()
                .map(|e| FactorEntry { angle: -e.angle, ..e.clone() })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec file serializes")
    }
}
