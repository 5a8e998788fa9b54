//! JSON interchange format for linear designs.
//!
//! Entries are `[re, im]` integer pairs so that a loaded design can be
//! re-verified exactly. Keys are written in sorted order and each matrix sits
//! on one line, so a design always serializes to the same bytes.

use std::collections::BTreeMap;

use cuw_core::constructions::{LinearDesign, Origin, Partition};
use cuw_core::linalg_exact::GaussianMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum DesignFileError {
    #[error("malformed JSON: {0}")]
    Malformed(#[source] serde_json::Error),

    #[error("matrix {matrix} row {row} column {col}: entry is not an integer pair")]
    NonInteger { matrix: usize, row: usize, col: usize },

    #[error("invalid design file: {0}")]
    Schema(String),

    #[error("matrix {matrix} is {rows}x{cols}, expected {nt}x{nt}")]
    MatrixShape {
        matrix: usize,
        rows: usize,
        cols: usize,
        nt: usize,
    },

    #[error("matrix {0} not unitary")]
    NotUnitary(usize),

    #[error("matrix 0 is not the identity")]
    LeadingNotIdentity,

    #[error("partition is not a disjoint cover: {0}")]
    PartitionNotCover(String),

    #[error("partition must have g = {g} groups of lambda = {lambda} indices")]
    PartitionShape { g: usize, lambda: usize },

    #[error(transparent)]
    Design(#[from] cuw_core::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub construction: String,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
}

/// On-disk form of a [`LinearDesign`]. Field order is alphabetical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    pub g: usize,
    pub lambda: usize,
    pub matrices: Vec<Vec<Vec<[i64; 2]>>>,
    pub meta: Meta,
    pub nt: usize,
    /// 1-based variable indices.
    pub partition: Vec<Vec<usize>>,
}

impl DesignFile {
    pub fn from_design(d: &LinearDesign) -> Self {
        let matrices = d
            .weights
            .iter()
            .map(|w| {
                w.row_pairs()
                    .into_iter()
                    .map(|row| row.into_iter().map(|(re, im)| [re, im]).collect())
                    .collect()
            })
            .collect();
        Self {
            g: d.g,
            lambda: d.lambda,
            matrices,
            meta: Meta {
                construction: d.origin.method.clone(),
                parameters: d.origin.params.clone(),
                tool_version: TOOL_VERSION.to_string(),
            },
            nt: d.nt,
            partition: d.partition.to_one_based(),
        }
    }

    /// Canonical text: sorted keys, one matrix per line, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"g\": {},\n", self.g));
        out.push_str(&format!("  \"lambda\": {},\n", self.lambda));
        out.push_str("  \"matrices\": [\n");
        for (i, m) in self.matrices.iter().enumerate() {
            let sep = if i + 1 < self.matrices.len() { "," } else { "" };
            out.push_str(&format!("    {}{sep}\n", compact(m)));
        }
        out.push_str("  ],\n");
        out.push_str(&format!("  \"meta\": {},\n", compact(&self.meta)));
        out.push_str(&format!("  \"nt\": {},\n", self.nt));
        out.push_str(&format!("  \"partition\": {}\n", compact(&self.partition)));
        out.push_str("}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, DesignFileError> {
        let value: Value = serde_json::from_str(text).map_err(DesignFileError::Malformed)?;
        check_integer_entries(&value)?;
        serde_json::from_value(value).map_err(|e| DesignFileError::Schema(e.to_string()))
    }

    /// Validates the [`LinearDesign`] invariants and builds the design.
    pub fn to_design(&self) -> Result<LinearDesign, DesignFileError> {
        let mut weights = Vec::with_capacity(self.matrices.len());
        for (i, m) in self.matrices.iter().enumerate() {
            let rows: Vec<Vec<(i64, i64)>> = m
                .iter()
                .map(|row| row.iter().map(|&[re, im]| (re, im)).collect())
                .collect();
            let cols = rows.first().map_or(0, Vec::len);
            if rows.len() != self.nt || rows.iter().any(|r| r.len() != self.nt) {
                return Err(DesignFileError::MatrixShape {
                    matrix: i,
                    rows: rows.len(),
                    cols,
                    nt: self.nt,
                });
            }
            let w = GaussianMatrix::from_pairs(&rows)?;
            if !w.is_unitary() {
                return Err(DesignFileError::NotUnitary(i));
            }
            weights.push(w);
        }
        if weights.first().is_some_and(|w| !w.is_identity()) {
            return Err(DesignFileError::LeadingNotIdentity);
        }
        let k = weights.len();
        let partition = Partition::from_one_based(&self.partition, k).map_err(|e| match e {
            cuw_core::Error::InvalidPartition(msg) => DesignFileError::PartitionNotCover(msg),
            other => DesignFileError::Design(other),
        })?;
        if partition.len() != self.g || partition.groups().iter().any(|g| g.len() != self.lambda) {
            return Err(DesignFileError::PartitionShape {
                g: self.g,
                lambda: self.lambda,
            });
        }
        let origin = Origin {
            method: self.meta.construction.clone(),
            params: self.meta.parameters.clone(),
        };
        Ok(LinearDesign::new(
            self.nt,
            self.lambda,
            self.g,
            weights,
            partition,
            origin,
        )?)
    }
}

pub fn serialize(d: &LinearDesign) -> String {
    DesignFile::from_design(d).to_canonical_string()
}

pub fn deserialize(text: &str) -> Result<LinearDesign, DesignFileError> {
    DesignFile::parse(text)?.to_design()
}

/// Reports the first matrix entry that is not a pair of integers.
fn check_integer_entries(value: &Value) -> Result<(), DesignFileError> {
    let Some(matrices) = value.get("matrices").and_then(Value::as_array) else {
        return Ok(());
    };
    for (m, matrix) in matrices.iter().enumerate() {
        let Some(rows) = matrix.as_array() else { continue };
        for (r, row) in rows.iter().enumerate() {
            let Some(entries) = row.as_array() else { continue };
            for (c, entry) in entries.iter().enumerate() {
                let ok = entry
                    .as_array()
                    .is_some_and(|pair| pair.len() == 2 && pair.iter().all(|v| v.as_i64().is_some()));
                if !ok {
                    return Err(DesignFileError::NonInteger {
                        matrix: m,
                        row: r,
                        col: c,
                    });
                }
            }
        }
    }
    Ok(())
}

fn compact<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}
