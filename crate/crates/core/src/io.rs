//! JSON state files and the state loader shared by the command-line tools.
//!
//! A state file is
//! `{"dims": [2, 2], "kind": "pure" | "density", "data": [[re, im], ...]}`,
//! with amplitudes in composite-index order or matrix elements in row-major order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{CMatrix, CVector, DensityMatrix, Dims, PureState, TpsMatrix, C64};
use crate::states::{AnyState, Family};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Dims,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &AnyState) -> Self {
        let pairs = |it: &mut dyn Iterator<Item = C64>| it.map(|z| [z.re, z.im]).collect();
        match state {
            AnyState::Pure(p) => StateFile {
                dims: p.dims().clone(),
                kind: StateKind::Pure,
                data: pairs(&mut p.amps().iter().copied()),
            },
            AnyState::Density(d) => {
                let m = d.matrix();
                let n = m.nrows();
                let mut it = (0..n * n).map(|k| m[(k / n, k % n)]);
                StateFile { dims: d.dims().clone(), kind: StateKind::Density, data: pairs(&mut it) }
            }
        }
    }

    /// Build the state, checking normalization and positivity when `validate` is set.
    pub fn into_state(self, validate: bool) -> Result<AnyState> {
        let n = self.dims.total();
        let values: Vec<C64> = self.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        match self.kind {
            StateKind::Pure => {
                if values.len() != n {
                    return Err(Error::Parse(format!(
                        "pure state with dims {} needs {n} amplitudes, got {}",
                        self.dims,
                        values.len()
                    )));
                }
                let amps = CVector::from_vec(values);
                let tol = if validate { crate::qstate::Tolerances::default().norm } else { f64::INFINITY };
                Ok(AnyState::Pure(PureState::with_tolerance(self.dims, amps, tol)?))
            }
            StateKind::Density => {
                if values.len() != n * n {
                    return Err(Error::Parse(format!(
                        "density matrix with dims {} needs {} elements, got {}",
                        self.dims,
                        n * n,
                        values.len()
                    )));
                }
                let m = CMatrix::from_row_slice(n, n, &values);
                let rho = if validate {
                    DensityMatrix::new(self.dims, m)?
                } else {
                    DensityMatrix::new_unchecked(self.dims, m)?
                };
                Ok(AnyState::Density(rho))
            }
        }
    }
}

pub fn read_state_file(path: &Path, validate: bool) -> Result<AnyState> {
    let text = fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    file.into_state(validate)
}

pub fn write_state_file(path: &Path, state: &AnyState) -> Result<()> {
    let text = serde_json::to_string_pretty(&StateFile::from_state(state))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// A state together with its family, when it came from a factory spec.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedState {
    pub family: Option<Family>,
    pub state: AnyState,
}

/// Load `spec` as a state file if such a file exists, otherwise parse it as a
/// factory spec such as `werner:a=0.5`.
pub fn load_state(spec: &str, validate: bool) -> Result<LoadedState> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(LoadedState { family: None, state: read_state_file(path, validate)? });
    }
    if spec.ends_with(".json") {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("state file '{spec}' not found"),
        )));
    }
    let family: Family = spec.parse()?;
    let state = family.state()?;
    Ok(LoadedState { family: Some(family), state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::werner;

    fn tmp(name: &str) -> std::path::PathBuf {
        std::env::temp_dir().join(format!("consonance-io-{}-{name}", std::process::id()))
    }

    #[test]
    fn round_trip_density_and_pure() {
        let rho = AnyState::Density(werner(0.3).unwrap());
        let p = tmp("w.json");
        write_state_file(&p, &rho).unwrap();
        assert_eq!(read_state_file(&p, true).unwrap(), rho);

        let psi = "bell:psi-".parse::<Family>().unwrap().state().unwrap();
        write_state_file(&p, &psi).unwrap();
        assert_eq!(read_state_file(&p, true).unwrap(), psi);
        fs::remove_file(p).unwrap();
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let json = r#"{"dims":[2,2],"kind":"pure","data":[[1,0],[0,0],[0,0]]}"#;
        let f: StateFile = serde_json::from_str(json).unwrap();
        assert!(matches!(f.into_state(true), Err(Error::Parse(_))));
    }

    #[test]
    fn validation_can_be_skipped() {
        let json = r#"{"dims":[2],"kind":"density","data":[[1,0],[0,0],[0,0],[1,0]]}"#;
        let f: StateFile = serde_json::from_str(json).unwrap();
        assert!(matches!(f.clone().into_state(true), Err(Error::Validation(_))));
        assert!(f.into_state(false).is_ok());
        let bad_dims = r#"{"dims":[1,2],"kind":"pure","data":[[1,0],[0,0]]}"#;
        assert!(serde_json::from_str::<StateFile>(bad_dims).is_err());
    }

    #[test]
    fn loader_prefers_files_then_factories() {
        let l = load_state("werner:a=0.25", true).unwrap();
        assert_eq!(l.family, Some(Family::Werner { a: 0.25 }));
        assert!(load_state("missing-file.json", true).is_err());
        assert!(load_state("no_such_family", true).is_err());
    }
}
