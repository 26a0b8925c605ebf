//! JSON documents for states and density operators.
//!
//! Density operator (`schema = "rindler.density/1"`):
//!
//! ```text
//! {
//!   "schema": "rindler.density/1",
//!   "modes": [{"name": "R1_I", "statistics": "bosonic"}, ...],
//!   "n_max": 4,
//!   "basis": [[0, 0], [0, 1], ...],        // one occupation list per row/column
//!   "matrix": [[re, im], ...],             // dim * dim pairs, row-major
//!   "truncation_deficit": 0.0
//! }
//! ```
//!
//! State vector (`schema = "rindler.state/1"`) has the same `modes`, `n_max`,
//! `basis` and `truncation_deficit` fields, with `amplitudes` holding one
//! `[re, im]` pair per basis entry.
//!
//! Floats are written in shortest round-trip form, so a document read back
//! reproduces every matrix element bit for bit.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DensityOperator, FockBasisState, ModeLabel, StateVector};
use crate::error::{Error, Result};

pub const DENSITY_SCHEMA: &str = "rindler.density/1";
pub const STATE_SCHEMA: &str = "rindler.state/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityDocument {
    pub schema: String,
    pub modes: Vec<ModeLabel>,
    pub n_max: u32,
    pub basis: Vec<FockBasisState>,
    pub matrix: Vec<[f64; 2]>,
    pub truncation_deficit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub schema: String,
    pub modes: Vec<ModeLabel>,
    pub n_max: u32,
    pub basis: Vec<FockBasisState>,
    pub amplitudes: Vec<[f64; 2]>,
    pub truncation_deficit: f64,
}

impl DensityOperator {
    pub fn to_document(&self) -> DensityDocument {
        let dense = self.to_dense();
        let n = self.dim();
        let mut matrix = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = dense[(i, j)];
                matrix.push([v.re, v.im]);
            }
        }
        DensityDocument {
            schema: DENSITY_SCHEMA.to_string(),
            modes: self.modes().to_vec(),
            n_max: self.n_max(),
            basis: self.basis().to_vec(),
            matrix,
            truncation_deficit: self.truncation_deficit(),
        }
    }

    pub fn from_document(doc: DensityDocument) -> Result<Self> {
        if doc.schema != DENSITY_SCHEMA {
            return Err(Error::Format(format!("expected schema {DENSITY_SCHEMA}, found {}", doc.schema)));
        }
        let n = doc.basis.len();
        if doc.matrix.len() != n * n {
            return Err(Error::Format(format!("matrix has {} entries, expected {}", doc.matrix.len(), n * n)));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = doc.matrix[i * n + j];
            Complex64::new(re, im)
        });
        DensityOperator::from_dense(doc.modes, doc.n_max, doc.basis, &m, doc.truncation_deficit)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("density document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DensityDocument = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_document(doc)
    }
}

impl StateVector {
    pub fn to_document(&self) -> StateDocument {
        let (basis, amplitudes) = self.iter().map(|(k, a)| (k.clone(), [a.re, a.im])).unzip();
        StateDocument {
            schema: STATE_SCHEMA.to_string(),
            modes: self.modes().to_vec(),
            n_max: self.n_max(),
            basis,
            amplitudes,
            truncation_deficit: self.truncation_deficit(),
        }
    }

    pub fn from_document(doc: StateDocument) -> Result<Self> {
        if doc.schema != STATE_SCHEMA {
            return Err(Error::Format(format!("expected schema {STATE_SCHEMA}, found {}", doc.schema)));
        }
        if doc.basis.len() != doc.amplitudes.len() {
            return Err(Error::Format("basis and amplitude lists differ in length".into()));
        }
        let terms = doc
            .basis
            .into_iter()
            .zip(doc.amplitudes)
            .map(|(k, [re, im])| (k.0, Complex64::new(re, im)));
        Ok(StateVector::from_amplitudes(doc.modes, doc.n_max, terms)?.with_truncation_deficit(doc.truncation_deficit))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("state document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDocument = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_document(doc)
    }
}
