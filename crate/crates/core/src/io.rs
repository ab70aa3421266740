//! Text formats for vectors and operator matrices.
//!
//! Matrices are stored either as row-major CSV (one matrix row per line, no
//! header) or as a JSON envelope `{domain, codomain, entries}` whose space
//! fields use the descriptor grammar. Both formats round-trip exactly:
//! numbers are written in shortest round-trip form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::OperatorMatrix;
use crate::scalar::Scalar;
use crate::space::Space;

/// Parses a JSON array of numbers.
pub fn parse_vector<T: Scalar>(s: &str) -> Result<Vec<T>> {
    let v: Vec<T> = serde_json::from_str(s.trim()).map_err(|e| Error::Parse(format!("vector {s:?}: {e}")))?;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("vector {s:?} has non-finite entries")));
    }
    Ok(v)
}

/// Parses a vector and checks it against the space dimension.
pub fn parse_vector_in<T: Scalar>(space: &Space<T>, s: &str) -> Result<Vec<T>> {
    let v = parse_vector(s)?;
    space.check_dim(&v)?;
    Ok(v)
}

pub fn matrix_to_csv<T: Scalar>(m: &OperatorMatrix<T>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|v| format!("{v:?}")))
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_from_csv<T: Scalar>(s: &str, domain: Space<T>, codomain: Space<T>) -> Result<OperatorMatrix<T>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(s.as_bytes());
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let row = rec
            .iter()
            .map(|c| c.parse::<T>().map_err(|_| Error::Parse(format!("matrix entry {c:?}"))))
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    OperatorMatrix::from_rows(rows, domain, codomain)
}

/// JSON form of an operator matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixEnvelope<T> {
    pub domain: String,
    pub codomain: String,
    pub entries: Vec<Vec<T>>,
}

impl<T: Scalar> MatrixEnvelope<T> {
    pub fn from_matrix(m: &OperatorMatrix<T>) -> Self {
        Self {
            domain: m.domain().to_string(),
            codomain: m.codomain().to_string(),
            entries: m.to_rows(),
        }
    }

    pub fn into_matrix(self) -> Result<OperatorMatrix<T>> {
        OperatorMatrix::from_rows(self.entries, self.domain.parse()?, self.codomain.parse()?)
    }
}

pub fn matrix_to_json<T: Scalar>(m: &OperatorMatrix<T>) -> Result<String> {
    serde_json::to_string(&MatrixEnvelope::from_matrix(m)).map_err(|e| Error::Parse(e.to_string()))
}

pub fn matrix_from_json<T: Scalar>(s: &str) -> Result<OperatorMatrix<T>> {
    let env: MatrixEnvelope<T> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    env.into_matrix()
}
