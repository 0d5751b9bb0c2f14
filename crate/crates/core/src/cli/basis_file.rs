//! JSON basis files.
//!
//! ```json
//! {
//!   "name": "meb8",
//!   "shape": [2, 2, 2],
//!   "labels": ["phi1", ...],
//!   "claims": ["orthonormal", "maximally_entangled:strict", "complete"],
//!   "vectors": [[[re, im], ...], ...],
//!   "terms": [{"grouping": [[0], [1], [2]],
//!              "terms": [{"coefficient": 0.7071067811865476,
//!                         "factors": [[[1.0, 0.0], [0.0, 0.0]], ...]}]}, ...]
//! }
//! ```
//!
//! `labels`, `claims` and `terms` are optional; `terms` entries may be
//! `null` for vectors without a decomposition. Numbers are written in
//! shortest round-trip form, so export followed by import is lossless.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constructions::{Claim, DecomposedVector, Decomposition, LabeledBasis, Term};
use crate::qstate::{Ket, SystemShape};
use crate::{Error, C64};

use super::CliError;

type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub name: String,
    pub shape: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<String>,
    pub vectors: Vec<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<Option<TermsFile>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermsFile {
    pub grouping: Vec<Vec<usize>>,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coefficient: f64,
    pub factors: Vec<Vec<Pair>>,
}

fn pairs(k: &Ket) -> Vec<Pair> {
    k.amps().iter().map(|z| [z.re, z.im]).collect()
}

fn ket(shape: SystemShape, amps: &[Pair]) -> crate::Result<Ket> {
    Ket::new(shape, amps.iter().map(|[re, im]| C64::new(*re, *im)).collect())
}

impl BasisFile {
    pub fn from_basis(b: &LabeledBasis) -> Self {
        let terms: Vec<Option<TermsFile>> = b
            .vectors()
            .iter()
            .map(|v| {
                v.decomposition().map(|d| TermsFile {
                    grouping: d.grouping.clone(),
                    terms: d
                        .terms
                        .iter()
                        .map(|t| TermFile { coefficient: t.coefficient, factors: t.factors.iter().map(pairs).collect() })
                        .collect(),
                })
            })
            .collect();
        BasisFile {
            name: b.name().to_string(),
            shape: b.shape().dims().to_vec(),
            labels: b.vectors().iter().map(|v| v.label().to_string()).collect(),
            claims: b.claims().iter().map(Claim::name).collect(),
            vectors: b.vectors().iter().map(|v| pairs(v.ket())).collect(),
            terms: if terms.iter().any(Option::is_some) { Some(terms) } else { None },
        }
    }

    pub fn to_basis(&self) -> crate::Result<LabeledBasis> {
        let shape = SystemShape::new(self.shape.clone())?;
        if !self.labels.is_empty() && self.labels.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} vectors",
                self.labels.len(),
                self.vectors.len()
            )));
        }
        if let Some(terms) = &self.terms {
            if terms.len() != self.vectors.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} term entries for {} vectors",
                    terms.len(),
                    self.vectors.len()
                )));
            }
        }
        let mut vectors = Vec::with_capacity(self.vectors.len());
        for (i, amps) in self.vectors.iter().enumerate() {
            let label = self.labels.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
            let k = ket(shape.clone(), amps)?;
            let dec = self.terms.as_ref().and_then(|t| t[i].as_ref());
            let vector = match dec {
                None => DecomposedVector::plain(label, k),
                Some(tf) => {
                    let dims = shape.dims();
                    let mut terms = Vec::with_capacity(tf.terms.len());
                    for t in &tf.terms {
                        if t.factors.len() != tf.grouping.len() {
                            return Err(Error::InvalidDecomposition("factor count differs from slot count".into()));
                        }
                        let factors = tf
                            .grouping
                            .iter()
                            .zip(&t.factors)
                            .map(|(slot, f)| {
                                let sub = slot
                                    .iter()
                                    .map(|&s| dims.get(s).copied().ok_or(Error::OutOfRange { index: s, bound: dims.len() }))
                                    .collect::<crate::Result<Vec<_>>>()?;
                                ket(SystemShape::new(sub)?, f)
                            })
                            .collect::<crate::Result<Vec<_>>>()?;
                        terms.push(Term { coefficient: t.coefficient, factors });
                    }
                    DecomposedVector::with_terms(label, k, Decomposition { grouping: tf.grouping.clone(), terms })?
                }
            };
            vectors.push(vector);
        }
        let claims = self.claims.iter().map(|c| Claim::parse(c, &shape)).collect::<crate::Result<Vec<_>>>()?;
        LabeledBasis::new(self.name.clone(), shape, vectors, claims)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite numbers serialize");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| CliError::Format(path.display().to_string(), e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
    }
}

/// Loads and validates a basis file.
pub fn load_basis(path: &Path) -> Result<LabeledBasis, CliError> {
    BasisFile::read(path)?.to_basis().map_err(|e| CliError::Format(path.display().to_string(), e.to_string()))
}
