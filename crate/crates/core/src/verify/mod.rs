//! Basis-level verdicts: orthonormality, per-vector entanglement,
//! completeness, unextendibility search over the complement, and overlap
//! (mutual unbiasedness) checks.
//!
//! Unextendibility is a universally quantified statement, so it is only
//! supported numerically here: a verdict of "no maximally entangled state
//! found" always comes with the minimum defect actually reached.

mod matching;
mod mub;
mod search;

pub use matching::{match_sets, SetMatching};
pub use mub::{mub_overlap, mub_overlap_with, MubReport, MubScope, Violation, MUB_TOL};
pub use search::{
    descend, random_complement_floor, restart_rng, unextendibility_search, unextendibility_search_with,
    RestartOutcome, SearchConfig, SearchVerdict, StopReason, UnextendibilityResult, SEARCH_ORTHONORMAL_TOL, TIE_TOL,
};

use serde::Serialize;

use crate::constructions::{Claim, LabeledBasis};
use crate::entanglement::{is_maximally_entangled, CutResidual, EntanglementPredicate};
use crate::exec::Execution;
use crate::qstate::{gram_matrix, numerical_rank, Operator, RANK_TOL};
use crate::{Result, C64};

/// Orthonormality tolerance used by [`full_report`].
pub const REPORT_ORTHONORMAL_TOL: f64 = 1e-10;
/// Per-vector entanglement tolerance used by [`full_report`].
pub const REPORT_ENTANGLEMENT_TOL: f64 = 1e-8;

/// Fixed interpretive notes attached to every report.
pub const CAVEATS: [&str; 4] = [
    "strict: the reduced state of the smaller side of every bipartition must equal I/dim(H_A); \
     the normalization is read as the Hilbert-space dimension of A, not the number of parties in A.",
    "For unequal local dimensions the strict, ghz<d> and cut<k> predicates disagree. In 2x3x3 the \
     GHZ-like basis vectors reduce to diag(1/2,1/2,0) on a qutrit: they pass ghz2 and fail strict, \
     and the complement contains cut1-maximally entangled states. Verdicts are reported per predicate.",
    "Unextendibility is certified numerically by multi-start descent over the orthogonal complement. \
     'no maximally entangled complement state found' reports the minimum defect reached and is not a proof.",
    "Overlap checks on sets smaller than the full dimension test pairwise unbiasedness of incomplete sets.",
];

pub(crate) fn complex_pairs(amps: &[C64]) -> Vec<[f64; 2]> {
    amps.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthonormalityCheck {
    pub holds: bool,
    /// Largest entry of `|G − I|`.
    pub max_residual: f64,
}

pub fn check_orthonormal(b: &LabeledBasis, tol: f64) -> OrthonormalityCheck {
    let gram = gram_matrix(&b.kets()).expect("basis vectors share a shape");
    let max_residual = gram.max_abs_diff(&Operator::identity(b.len())).expect("square Gram matrix");
    OrthonormalityCheck { holds: max_residual < tol, max_residual }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessCheck {
    pub rank: usize,
    pub total: usize,
    pub complete: bool,
}

/// Numerical rank of the stacked vectors; complete iff it equals the total
/// dimension.
pub fn check_completeness(b: &LabeledBasis, tol: f64) -> CompletenessCheck {
    let rank = numerical_rank(&b.kets(), tol).expect("nonempty basis");
    let total = b.shape().total();
    CompletenessCheck { rank, total, complete: rank == total }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorVerdict {
    pub label: String,
    pub holds: bool,
    pub residuals: Vec<CutResidual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredicateSummary {
    pub predicate: EntanglementPredicate,
    pub all_hold: bool,
    pub max_residual: f64,
    pub vectors: Vec<VectorVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub verified: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisReport {
    pub name: String,
    pub shape: Vec<usize>,
    pub size: usize,
    pub orthonormality: OrthonormalityCheck,
    pub entanglement: Vec<PredicateSummary>,
    pub completeness: CompletenessCheck,
    pub complement_dim: usize,
    pub unextendibility: Vec<UnextendibilityResult>,
    pub claims: Vec<ClaimCheck>,
    pub caveats: Vec<String>,
}

impl BasisReport {
    pub fn entanglement_for(&self, pred: &EntanglementPredicate) -> Option<&PredicateSummary> {
        self.entanglement.iter().find(|s| &s.predicate == pred)
    }

    pub fn search_for(&self, pred: &EntanglementPredicate) -> Option<&UnextendibilityResult> {
        self.unextendibility.iter().find(|s| &s.predicate == pred)
    }

    pub fn all_claims_verified(&self) -> bool {
        self.claims.iter().all(|c| c.verified)
    }
}

fn summarize(b: &LabeledBasis, pred: &EntanglementPredicate) -> Result<PredicateSummary> {
    let mut vectors = Vec::with_capacity(b.len());
    for v in b.vectors() {
        let verdict = match is_maximally_entangled(v.ket(), pred, REPORT_ENTANGLEMENT_TOL) {
            Ok(verdict) => VectorVerdict { label: v.label().into(), holds: verdict.holds, residuals: verdict.residuals, note: None },
            Err(crate::Error::NotUnit { norm }) => VectorVerdict {
                label: v.label().into(),
                holds: false,
                residuals: Vec::new(),
                note: Some(format!("not a unit vector (norm {norm})")),
            },
            Err(e) => return Err(e),
        };
        vectors.push(verdict);
    }
    let all_hold = vectors.iter().all(|v| v.holds);
    let max_residual = vectors.iter().flat_map(|v| v.residuals.iter().map(|r| r.residual)).fold(0.0, f64::max);
    Ok(PredicateSummary { predicate: pred.clone(), all_hold, max_residual, vectors })
}

pub fn full_report(b: &LabeledBasis, preds: &[EntanglementPredicate], cfg: &SearchConfig) -> Result<BasisReport> {
    full_report_with(b, preds, cfg, Execution::default())
}

/// Runs every check on `b` for each predicate in `preds` plus any predicate
/// named by the basis' own claims, and evaluates those claims.
pub fn full_report_with(
    b: &LabeledBasis,
    preds: &[EntanglementPredicate],
    cfg: &SearchConfig,
    exec: Execution,
) -> Result<BasisReport> {
    cfg.validate()?;
    let mut all_preds: Vec<EntanglementPredicate> = preds.to_vec();
    for p in b.claims().iter().filter_map(Claim::predicate) {
        if !all_preds.contains(p) {
            all_preds.push(p.clone());
        }
    }
    for p in &all_preds {
        p.validate(b.shape())?;
    }

    let orthonormality = check_orthonormal(b, REPORT_ORTHONORMAL_TOL);
    let completeness = check_completeness(b, RANK_TOL);
    let entanglement = all_preds.iter().map(|p| summarize(b, p)).collect::<Result<Vec<_>>>()?;
    let unextendibility = if orthonormality.holds {
        all_preds.iter().map(|p| unextendibility_search_with(b, p, cfg, exec)).collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let complement_dim = b.shape().total() - completeness.rank;

    let claims = b
        .claims()
        .iter()
        .map(|claim| {
            let (verified, detail) = match claim {
                Claim::Orthonormal => (
                    orthonormality.holds,
                    format!("orthonormality residual {:.3e}", orthonormality.max_residual),
                ),
                Claim::Complete => (
                    completeness.complete,
                    format!("rank {}/{}", completeness.rank, completeness.total),
                ),
                Claim::MaximallyEntangled(p) => {
                    let s = entanglement.iter().find(|s| &s.predicate == p).expect("predicate evaluated");
                    let failing: Vec<&str> = s.vectors.iter().filter(|v| !v.holds).map(|v| v.label.as_str()).collect();
                    let mut detail = format!("max residual {:.6e}", s.max_residual);
                    if !failing.is_empty() {
                        detail.push_str(&format!("; failing vectors: {}", failing.join(" ")));
                    }
                    (s.all_hold, detail)
                }
                Claim::Unextendible(p) => match unextendibility.iter().find(|r| &r.predicate == p) {
                    None => (false, "search skipped: basis not orthonormal".into()),
                    Some(r) => match &r.verdict {
                        SearchVerdict::ComplementEmpty => (false, "complement empty: the set is complete".into()),
                        SearchVerdict::NoMeStateFound { min_defect } => (
                            true,
                            format!("no maximally entangled complement state found; min defect {min_defect:.6e}"),
                        ),
                        SearchVerdict::MeStateFound { .. } => (
                            false,
                            format!("maximally entangled complement state found; defect {:.3e}", r.min_defect.unwrap_or(0.0)),
                        ),
                    },
                },
            };
            ClaimCheck { claim: claim.name(), verified, detail }
        })
        .collect();

    Ok(BasisReport {
        name: b.name().to_string(),
        shape: b.shape().dims().to_vec(),
        size: b.len(),
        orthonormality,
        entanglement,
        completeness,
        complement_dim,
        unextendibility,
        claims,
        caveats: CAVEATS.iter().map(|s| s.to_string()).collect(),
    })
}
