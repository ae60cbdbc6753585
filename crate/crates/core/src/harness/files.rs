//! Versioned JSON formats for codes and reports.

use serde::{Deserialize, Serialize};

use crate::codes::{JointCode, Provenance, SystemParams};
use crate::error::{Error, Result};
use crate::gf::{Field, Mat};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    /// Monic modulus coefficients, little-endian (`m + 1` digits).
    pub modulus: Vec<u32>,
    pub alpha: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileProvenance {
    pub seed: Option<u64>,
    pub attempts: Option<u64>,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub schema_version: u32,
    pub field: FieldSpec,
    pub params: SystemParams,
    /// One `M x KL` grid of canonical element integers per database.
    pub generators: Vec<Vec<Vec<u32>>>,
    pub labels: Option<Vec<Vec<String>>>,
    pub provenance: FileProvenance,
}

impl CodeFile {
    pub fn from_code(code: &JointCode) -> CodeFile {
        let f = code.field();
        CodeFile {
            schema_version: SCHEMA_VERSION,
            field: FieldSpec {
                p: f.characteristic(),
                m: f.degree(),
                modulus: f.modulus().to_vec(),
                alpha: f.alpha().value(),
            },
            params: *code.params(),
            generators: code
                .generators()
                .iter()
                .map(|g| g.row_iter().map(|r| r.iter().map(|e| e.value()).collect()).collect())
                .collect(),
            labels: code.labels().map(<[Vec<String>]>::to_vec),
            provenance: FileProvenance {
                seed: code.provenance().seed,
                attempts: code.provenance().attempts,
                tool_version: TOOL_VERSION.to_string(),
            },
        }
    }

    /// Rebuilds the code, rejecting out-of-range integers and malformed
    /// shapes. MDS is not required here; that is what `verify` is for.
    pub fn to_code(&self) -> Result<JointCode> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let schema = |e: Error| Error::Schema(e.to_string());
        let fs = &self.field;
        let field = Field::from_parts(fs.p, fs.m, &fs.modulus, fs.alpha).map_err(schema)?;
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(db, grid)| {
                let cols = grid.first().map_or(0, Vec::len);
                if grid.iter().any(|r| r.len() != cols) {
                    return Err(Error::Schema(format!("generator {db} is ragged")));
                }
                let entries = grid
                    .iter()
                    .flatten()
                    .map(|&v| field.elem(v as u64))
                    .collect::<Result<Vec<_>>>()
                    .map_err(schema)?;
                Ok(Mat::new(grid.len(), cols, entries))
            })
            .collect::<Result<Vec<_>>>()?;
        let provenance = Provenance {
            seed: self.provenance.seed,
            attempts: self.provenance.attempts,
        };
        JointCode::new(self.params, field, generators, self.labels.clone(), provenance).map_err(schema)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code files always serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<CodeFile> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Mds,
    Privacy,
    Correctness,
    Barrier,
    Sweep,
    Transcript,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub kind: ReportKind,
    pub payload: serde_json::Value,
}

impl ReportFile {
    pub fn new<T: Serialize>(kind: ReportKind, payload: &T) -> ReportFile {
        ReportFile {
            schema_version: SCHEMA_VERSION,
            kind,
            payload: serde_json::to_value(payload).expect("reports always serialize"),
        }
    }
}
