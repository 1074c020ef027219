//! JSON state and observable files.
//!
//! A state file is `{"dims": [2, 2, 2], "matrix": [[re, im], ...]}` with the
//! entries in row-major order. An observable file uses the same `matrix`
//! field (`dims` optional and ignored) and must hold a Hermitian matrix.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{validate_density, ComplexMatrix, DensityMatrix, DimVector, C64, DEFAULT_TOL};
use crate::measurement::named_observable;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObservableFile {
    #[serde(default)]
    #[allow(dead_code)]
    dims: Option<Vec<usize>>,
    matrix: Vec<[f64; 2]>,
}

fn square_from_pairs(entries: &[[f64; 2]]) -> Result<ComplexMatrix> {
    let n = (entries.len() as f64).sqrt().round() as usize;
    if n == 0 || n * n != entries.len() {
        return Err(Error::dim(format!(
            "matrix field has {} entries, not a perfect square",
            entries.len()
        )));
    }
    ComplexMatrix::new(
        n,
        n,
        entries.iter().map(|&[re, im]| C64::new(re, im)).collect(),
    )
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "{what}: {e} (line {}, column {})",
            e.line(),
            e.column()
        ))
    })
}

pub fn parse_state_json(text: &str, tol: f64) -> Result<DensityMatrix> {
    let file: StateFile = parse_json(text, "state file")?;
    let dims = DimVector::new(file.dims)?;
    let m = square_from_pairs(&file.matrix)?;
    validate_density(&m, &dims, tol)
}

pub fn load_state_file(path: &Path) -> Result<DensityMatrix> {
    load_state_file_with_tol(path, DEFAULT_TOL)
}

pub fn load_state_file_with_tol(path: &Path, tol: f64) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_state_json(&text, tol)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let file = StateFile {
        dims: rho.dims().as_slice().to_vec(),
        matrix: rho
            .matrix()
            .as_slice()
            .iter()
            .map(|z| [z.re, z.im])
            .collect(),
    };
    serde_json::to_string(&file).expect("state serializes")
}

pub fn parse_observable_json(text: &str) -> Result<ComplexMatrix> {
    let file: ObservableFile = parse_json(text, "observable file")?;
    let m = square_from_pairs(&file.matrix)?;
    let deviation = m.hermitian_deviation();
    if deviation > DEFAULT_TOL {
        return Err(Error::usage(format!(
            "observable is not Hermitian (max |m - m†| = {deviation:e})"
        )));
    }
    Ok(m)
}

/// Resolves an observable argument: a named token or a path to a JSON file.
pub fn resolve_observable(arg: &str) -> Result<ComplexMatrix> {
    if let Some(m) = named_observable(arg) {
        return Ok(m);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Error::usage(format!(
            "'{arg}' is neither sigma1/sigma2/sigma3 nor an existing file"
        )));
    }
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))?;
    parse_observable_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_state, Family, StateSpec};

    #[test]
    fn state_round_trip() {
        let w = make_state(&StateSpec::new(Family::W)).unwrap();
        let back = parse_state_json(&state_to_json(&w), DEFAULT_TOL).unwrap();
        assert!(back.matrix().max_abs_diff(w.matrix()) < 1e-15);
        assert_eq!(back.dims(), w.dims());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_state_json("{\"dims\": [2, 2],\n \"matrix\": [[1, 0],, ]}", DEFAULT_TOL)
            .unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_state_json("{\"dims\": [2]}", DEFAULT_TOL),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_state_json("{\"dims\": [2], \"matrix\": [], \"x\": 1}", DEFAULT_TOL),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn dims_must_match_matrix() {
        let mut entries = vec![[0.0, 0.0]; 16];
        for i in 0..4 {
            entries[i * 5] = [0.25, 0.0];
        }
        let text = serde_json::json!({"dims": [2, 2, 2], "matrix": entries}).to_string();
        assert!(matches!(
            parse_state_json(&text, DEFAULT_TOL),
            Err(Error::Dimension(_))
        ));
        let text = serde_json::json!({"dims": [2, 2], "matrix": &entries[..15]}).to_string();
        assert!(matches!(
            parse_state_json(&text, DEFAULT_TOL),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn invalid_density_is_reported() {
        let text = serde_json::json!({"dims": [2], "matrix": [[1, 0], [0, 0], [0, 0], [-1, 0]]})
            .to_string();
        match parse_state_json(&text, DEFAULT_TOL) {
            Err(Error::InvalidDensity(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn observables() {
        let y = parse_observable_json(r#"{"matrix": [[0,0],[0,-1],[0,1],[0,0]]}"#).unwrap();
        assert_eq!(y, crate::measurement::sigma2());
        assert!(parse_observable_json(r#"{"matrix": [[0,0],[1,0],[0,0],[0,0]]}"#).is_err());
        assert!(resolve_observable("sigma3").is_ok());
        assert!(matches!(
            resolve_observable("/nonexistent/obs.json"),
            Err(Error::Usage(_))
        ));
    }
}
