//! Versioned JSON dump of a [`StabilizerState`].
//!
//! ```json
//! { "version": 1, "n": 2, "phi": 0, "omega": [0, 0],
//!   "E": ["10", "01"], "F": ["00", "00"], "G": ["10", "01"],
//!   "b": "10", "s": "00" }
//! ```
//!
//! Bitstrings list site 0 first. Matrix rows are `E_j`, `F_j`, `G_j`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitMatrix, BitParseError, BitVec};
use crate::state::{StabilizerState, StateError};
use crate::tableau::ControlTableau;

pub const DUMP_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DumpError {
    #[error("malformed state dump: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported dump version {0}")]
    Version(u32),
    #[error("field {field}: {source}")]
    Bits {
        field: &'static str,
        source: BitParseError,
    },
    #[error("field {field} has the wrong shape for n = {n}")]
    Shape { field: &'static str, n: usize },
    #[error("phi must be in 0..8, got {0}")]
    Phase(u8),
    #[error("omega entries must be in 0..4")]
    Omega,
    #[error(transparent)]
    Tableau(#[from] crate::tableau::TableauError),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Dump {
    version: u32,
    n: usize,
    phi: u8,
    omega: Vec<u8>,
    #[serde(rename = "E")]
    e: Vec<String>,
    #[serde(rename = "F")]
    f: Vec<String>,
    #[serde(rename = "G")]
    g: Vec<String>,
    b: String,
    s: String,
}

fn rows(m: &BitMatrix) -> Vec<String> {
    m.rows().iter().map(BitVec::to_string).collect()
}

pub fn to_json(st: &StabilizerState) -> String {
    let t = st.tableau();
    let dump = Dump {
        version: DUMP_VERSION,
        n: st.n(),
        phi: st.phase(),
        omega: t.omega().to_vec(),
        e: rows(t.e()),
        f: rows(t.f()),
        g: rows(t.g()),
        b: st.b().to_string(),
        s: st.s().to_string(),
    };
    let mut out = serde_json::to_string_pretty(&dump).expect("dump serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<StabilizerState, DumpError> {
    let d: Dump = serde_json::from_str(text)?;
    if d.version != DUMP_VERSION {
        return Err(DumpError::Version(d.version));
    }
    let n = d.n;
    if n == 0 {
        return Err(DumpError::Shape { field: "n", n });
    }
    if d.phi >= 8 {
        return Err(DumpError::Phase(d.phi));
    }
    if d.omega.len() != n {
        return Err(DumpError::Shape { field: "omega", n });
    }
    if d.omega.iter().any(|&w| w >= 4) {
        return Err(DumpError::Omega);
    }
    let vec = |field: &'static str, text: &str| -> Result<BitVec, DumpError> {
        let v: BitVec = text.parse().map_err(|source| DumpError::Bits { field, source })?;
        if v.len() != n {
            return Err(DumpError::Shape { field, n });
        }
        Ok(v)
    };
    let matrix = |field: &'static str, texts: &[String]| -> Result<BitMatrix, DumpError> {
        if texts.len() != n {
            return Err(DumpError::Shape { field, n });
        }
        let rows = texts.iter().map(|t| vec(field, t)).collect::<Result<Vec<_>, _>>()?;
        BitMatrix::from_rows(rows).ok_or(DumpError::Shape { field, n })
    };
    let tableau = ControlTableau::from_parts(d.omega, matrix("E", &d.e)?, matrix("F", &d.f)?, matrix("G", &d.g)?)?;
    let b = vec("b", &d.b)?;
    let s = vec("s", &d.s)?;
    Ok(StabilizerState::from_parts(d.phi, tableau, b, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_dump() {
        let text = to_json(&StabilizerState::vacuum(2));
        assert!(text.contains("\"E\": [\n    \"10\",\n    \"01\"\n  ]"));
        assert_eq!(from_json(&text).unwrap(), StabilizerState::vacuum(2));
    }

    #[test]
    fn rejects_bad_dumps() {
        let good = to_json(&StabilizerState::vacuum(2));
        assert!(matches!(from_json(&good.replace("\"version\": 1", "\"version\": 2")), Err(DumpError::Version(2))));
        assert!(matches!(from_json(&good.replace("\"s\": \"00\"", "\"s\": \"0x\"")), Err(DumpError::Bits { .. })));
        assert!(matches!(from_json(&good.replace("\"b\": \"00\"", "\"b\": \"01\"")), Err(DumpError::State(_))));
        assert!(matches!(from_json("{"), Err(DumpError::Json(_))));
    }
}
