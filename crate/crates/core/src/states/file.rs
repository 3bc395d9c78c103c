//! JSON state files:
//! `{"dims":[2,2,2], "kind":"pure"|"mixed", "data":[[re,im],...]}`.
//! Mixed-state data is the row-major density matrix.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DensityMatrix, StateVector};
use crate::error::{Error, Result};
use crate::qmat::{c, ComplexMatrix, DimSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl AnyState {
    pub fn dims(&self) -> &DimSpec {
        match self {
            AnyState::Pure(s) => s.dims(),
            AnyState::Mixed(r) => r.dims(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            AnyState::Pure(s) => s.to_density(),
            AnyState::Mixed(r) => r.clone(),
        }
    }

    pub fn to_file(&self) -> StateFile {
        match self {
            AnyState::Pure(s) => StateFile {
                dims: s.dims().as_slice().to_vec(),
                kind: StateKind::Pure,
                data: s.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            },
            AnyState::Mixed(r) => StateFile {
                dims: r.dims().as_slice().to_vec(),
                kind: StateKind::Mixed,
                data: r.matrix().data().iter().map(|z| [z.re, z.im]).collect(),
            },
        }
    }
}

impl StateFile {
    pub fn validate(self) -> Result<AnyState> {
        let dims = DimSpec::new(self.dims).map_err(|e| Error::InvalidState {
            invariant: "dims",
            detail: e.to_string(),
        })?;
        let amps: Vec<_> = self.data.iter().map(|p| c(p[0], p[1])).collect();
        match self.kind {
            StateKind::Pure => Ok(AnyState::Pure(StateVector::new(dims, amps)?)),
            StateKind::Mixed => {
                let n = dims.total();
                if amps.len() != n * n {
                    return Err(Error::InvalidState {
                        invariant: "data length equals (product of dims)^2",
                        detail: format!("{} entries for dims {:?}", amps.len(), dims.as_slice()),
                    });
                }
                let m = ComplexMatrix::new(n, n, amps).map_err(|e| Error::InvalidState {
                    invariant: "finite entries",
                    detail: e.to_string(),
                })?;
                Ok(AnyState::Mixed(DensityMatrix::new(dims, m)?))
            }
        }
    }
}

pub fn parse_state_file(text: &str) -> Result<AnyState> {
    let raw: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.validate()
}

pub fn read_state_file(path: &Path) -> Result<AnyState> {
    parse_state_file(&std::fs::read_to_string(path)?)
}

pub fn write_state_file(path: &Path, state: &AnyState) -> Result<()> {
    let text = serde_json::to_string_pretty(&state.to_file()).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}
