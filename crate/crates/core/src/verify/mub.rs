use serde::Serialize;

use crate::constructions::LabeledBasis;
use crate::qstate::inner;
use crate::verify::check_orthonormal;
use crate::{Error, Result};

/// Default tolerance on `|⟨a_i|b_j⟩| − 1/√d`.
pub const MUB_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MubScope {
    /// Both sets span the whole space.
    CompleteBases,
    /// At least one set is incomplete; the check is pairwise unbiasedness.
    IncompleteSets,
}

impl MubScope {
    pub fn describe(self) -> &'static str {
        match self {
            MubScope::CompleteBases => "mutual unbiasedness of complete bases",
            MubScope::IncompleteSets => "pairwise-unbiasedness of incomplete sets",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub row: usize,
    pub col: usize,
    pub label_a: String,
    pub label_b: String,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MubReport {
    pub set_a: String,
    pub set_b: String,
    /// `magnitudes[i][j] = |⟨a_i|b_j⟩|`
    pub magnitudes: Vec<Vec<f64>>,
    pub target: f64,
    pub max_deviation: f64,
    pub first_violation: Option<Violation>,
    pub unbiased: bool,
    pub scope: MubScope,
}

pub fn mub_overlap(a: &LabeledBasis, b: &LabeledBasis) -> Result<MubReport> {
    mub_overlap_with(a, b, MUB_TOL)
}

/// Overlap magnitudes of two orthonormal sets against the unbiased target
/// `1/√(total dimension)`.
pub fn mub_overlap_with(a: &LabeledBasis, b: &LabeledBasis, tol: f64) -> Result<MubReport> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch { left: a.shape().dims().to_vec(), right: b.shape().dims().to_vec() });
    }
    for set in [a, b] {
        let check = check_orthonormal(set, 1e-10);
        if !check.holds {
            return Err(Error::NotOrthonormal { residual: check.max_residual });
        }
    }
    let total = a.shape().total();
    let target = 1.0 / (total as f64).sqrt();
    let mut magnitudes = Vec::with_capacity(a.len());
    let mut max_deviation = 0.0f64;
    let mut first_violation = None;
    for (i, va) in a.vectors().iter().enumerate() {
        let mut row = Vec::with_capacity(b.len());
        for (j, vb) in b.vectors().iter().enumerate() {
            let m = inner(va.ket(), vb.ket())?.norm();
            let dev = (m - target).abs();
            max_deviation = max_deviation.max(dev);
            if dev > tol && first_violation.is_none() {
                first_violation = Some(Violation {
                    row: i,
                    col: j,
                    label_a: va.label().to_string(),
                    label_b: vb.label().to_string(),
                    magnitude: m,
                });
            }
            row.push(m);
        }
        magnitudes.push(row);
    }
    let scope = if a.len() == total && b.len() == total { MubScope::CompleteBases } else { MubScope::IncompleteSets };
    Ok(MubReport {
        set_a: a.name().to_string(),
        set_b: b.name().to_string(),
        magnitudes,
        target,
        max_deviation,
        unbiased: first_violation.is_none(),
        first_violation,
        scope,
    })
}
