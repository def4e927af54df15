//! JSON exchange format for configurations:
//!
//! ```json
//! {"field": {"kind": "prime", "p": 5}, "n": 3, "k": 1,
//!  "subspaces": [["1", "0", "0"], ["0", "1", "0"]]}
//! ```
//!
//! Each subspace is an `n x k` basis matrix in row-major order. Entries are
//! strings so rationals (`"3/7"`) stay exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::grassmann::{Configuration, Subspace};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FieldJson {
    Prime { p: u64 },
    Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigurationJson {
    field: FieldJson,
    n: usize,
    k: usize,
    subspaces: Vec<Vec<String>>,
}

/// Parses a configuration. Syntax and shape problems give
/// [`Error::Malformed`]; everything else (non-prime `p`, dependent columns,
/// duplicates) is reported by the underlying constructors.
pub fn configuration_from_json(text: &str) -> Result<Configuration> {
    let raw: ConfigurationJson = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    let field = match raw.field {
        FieldJson::Prime { p } => FieldSpec::prime(p)?,
        FieldJson::Rational => FieldSpec::Rational,
    };
    if raw.k > raw.n {
        return Err(Error::Malformed(format!("k = {} exceeds n = {}", raw.k, raw.n)));
    }
    let mut subspaces = Vec::with_capacity(raw.subspaces.len());
    for (j, entries) in raw.subspaces.iter().enumerate() {
        if entries.len() != raw.n * raw.k {
            return Err(Error::Malformed(format!(
                "subspace {j} has {} entries, expected n*k = {}",
                entries.len(),
                raw.n * raw.k
            )));
        }
        let scalars = entries
            .iter()
            .map(|s| field.parse_scalar(s).map_err(|e| Error::Malformed(format!("subspace {j}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_scalars(field, raw.n, raw.k, &scalars)?;
        subspaces.push(Subspace::from_basis(&m)?);
    }
    Configuration::new(subspaces)
}

/// Serializes with canonical bases, so equal configurations give equal bytes.
pub fn configuration_to_json(config: &Configuration) -> String {
    let field = match config.field() {
        FieldSpec::Prime(p) => FieldJson::Prime { p: p as u64 },
        FieldSpec::Rational => FieldJson::Rational,
    };
    let raw = ConfigurationJson {
        field,
        n: config.n(),
        k: config.k(),
        subspaces: config
            .subspaces()
            .iter()
            .map(|s| s.basis().scalars().iter().map(ToString::to_string).collect())
            .collect(),
    };
    serde_json::to_string(&raw).expect("plain data serializes")
}
