//! Reading exchange matrices and quivers from JSON files.

use clusterlab::catalog::CoxeterType;
use clusterlab::skewsym::{find_skew_symmetrizer, Quiver};
use clusterlab::{Matrix, Scalar};
use serde_json::Value;
use std::path::Path;

pub type CliResult<T> = Result<T, String>;

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    // serde_json errors carry "line L column C".
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// An input matrix with an optional user-supplied symmetrizer.
pub struct MatrixInput {
    pub matrix: Matrix,
    pub symmetrizer: Option<Vec<Scalar>>,
    pub default_depth: Option<usize>,
}

impl MatrixInput {
    /// The supplied symmetrizer, or one computed from the matrix.
    pub fn symmetrizer(&self) -> CliResult<Vec<Scalar>> {
        match &self.symmetrizer {
            Some(d) => Ok(d.clone()),
            None => find_skew_symmetrizer(&self.matrix).map_err(|e| e.to_string()),
        }
    }
}

/// Accepts a bare matrix, `{"B": matrix, "D": [..]}`, or a quiver
/// `{"n": n, "arrows": [..]}`.
pub fn matrix_from_value(v: &Value) -> CliResult<MatrixInput> {
    let plain = |matrix| MatrixInput { matrix, symmetrizer: None, default_depth: None };
    if v.is_array() {
        return Matrix::from_json(v).map(plain).map_err(|e| e.to_string());
    }
    if let Some(b) = v.get("B") {
        let matrix = Matrix::from_json(b).map_err(|e| e.to_string())?;
        let symmetrizer = match v.get("D") {
            Some(Value::Array(ds)) => {
                Some(ds.iter().map(Scalar::from_json).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?)
            }
            Some(_) => return Err("\"D\" must be an array".into()),
            None => None,
        };
        return Ok(MatrixInput { matrix, symmetrizer, default_depth: None });
    }
    if v.get("arrows").is_some() {
        let q = Quiver::from_json(v).map_err(|e| e.to_string())?;
        return Ok(plain(q.weights().clone()));
    }
    Err("expected a matrix, an object with \"B\", or a quiver with \"arrows\"".into())
}

pub fn quiver_from_value(v: &Value) -> CliResult<Quiver> {
    if v.get("arrows").is_some() {
        return Quiver::from_json(v).map_err(|e| e.to_string());
    }
    let m = matrix_from_value(v)?.matrix;
    Quiver::new(m.clone()).or_else(|_| clusterlab::skewsym::sk_quiver(&m)).map_err(|e| e.to_string())
}

/// Resolves `--input` or `--type`.
pub fn load_matrix(input: Option<&Path>, type_name: Option<&str>) -> CliResult<MatrixInput> {
    match (input, type_name) {
        (Some(path), None) => matrix_from_value(&read_json(path)?),
        (None, Some(name)) => {
            let t = CoxeterType::parse(name).map_err(|e| e.to_string())?;
            Ok(MatrixInput { matrix: t.matrix(), symmetrizer: None, default_depth: Some(t.default_depth()) })
        }
        _ => Err("give exactly one of --input and --type".into()),
    }
}

pub fn load_quiver(input: Option<&Path>, type_name: Option<&str>) -> CliResult<Quiver> {
    match (input, type_name) {
        (Some(path), None) => quiver_from_value(&read_json(path)?),
        (None, Some(name)) => CoxeterType::parse(name).map(CoxeterType::quiver).map_err(|e| e.to_string()),
        _ => Err("give exactly one of --input and --type".into()),
    }
}
