//! Multi-start projected gradient descent over the orthogonal complement.
//!
//! Each restart draws a Gaussian point on the unit sphere of complement
//! coordinates (`2·dim` reals), then repeatedly steps along the negative
//! tangent gradient and renormalizes. Steps that fail to decrease the defect
//! are shrunk; accepted steps grow back toward the configured size. With the
//! `parallel` feature restarts run concurrently. Each restart owns its RNG
//! stream, so results do not depend on execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::constructions::LabeledBasis;
use crate::entanglement::{EntanglementPredicate, FrameObjective, GRADIENT_STEP};
use crate::exec::Execution;
use crate::qstate::{orthonormal_complement, Ket};
use crate::verify::{check_orthonormal, complex_pairs};
use crate::{Error, Result};

/// Orthonormality tolerance required of a basis before searching.
pub const SEARCH_ORTHONORMAL_TOL: f64 = 1e-10;
/// Restarts whose minima differ by at most this much are tied.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial step length along the tangent gradient.
    pub step: f64,
    /// Step multiplier after a non-improving trial, in `(0, 1)`.
    pub shrink: f64,
    /// Stop once the tangent gradient norm falls below this.
    pub grad_tol: f64,
    pub seed: u64,
    /// Minimum defect below which a complement state counts as maximally
    /// entangled.
    pub witness_threshold: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 32,
            max_iters: 2000,
            step: 0.1,
            shrink: 0.5,
            grad_tol: 1e-9,
            seed: 0,
            witness_threshold: 1e-8,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad("step must be positive");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return bad("shrink must lie in (0, 1)");
        }
        if !(self.grad_tol > 0.0) {
            return bad("grad_tol must be positive");
        }
        if !(self.witness_threshold > 0.0) {
            return bad("witness_threshold must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Tangent gradient below `grad_tol`.
    Stationary,
    /// No decreasing step longer than machine precision.
    Stalled,
    MaxIters,
}

/// One descent run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartOutcome {
    pub index: usize,
    pub min_defect: f64,
    pub iterations: usize,
    pub stop: StopReason,
    #[serde(skip)]
    pub point: Vec<f64>,
    /// Objective after every accepted step, starting at the initial point.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchVerdict {
    ComplementEmpty,
    NoMeStateFound {
        min_defect: f64,
    },
    MeStateFound {
        #[serde(serialize_with = "serialize_ket")]
        witness: Ket,
    },
}

fn serialize_ket<S: serde::Serializer>(k: &Ket, s: S) -> std::result::Result<S::Ok, S::Error> {
    complex_pairs(k.amps()).serialize(s)
}

fn serialize_opt_ket<S: serde::Serializer>(k: &Option<Ket>, s: S) -> std::result::Result<S::Ok, S::Error> {
    k.as_ref().map(|k| complex_pairs(k.amps())).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnextendibilityResult {
    pub predicate: EntanglementPredicate,
    pub complement_dim: usize,
    /// Smallest defect over all restarts; `None` for an empty complement.
    pub min_defect: Option<f64>,
    /// Normalized complement state attaining the winning minimum.
    #[serde(serialize_with = "serialize_opt_ket")]
    pub argmin: Option<Ket>,
    /// Restart minima in ascending order.
    pub per_restart_minima: Vec<f64>,
    /// Restart outcomes ordered by `(min_defect, index)`.
    pub restarts: Vec<RestartOutcome>,
    /// Index of the restart that supplied `argmin`.
    pub winner: Option<usize>,
    pub verdict: SearchVerdict,
}

impl UnextendibilityResult {
    pub fn found_witness(&self) -> Option<&Ket> {
        match &self.verdict {
            SearchVerdict::MeStateFound { witness } => Some(witness),
            _ => None,
        }
    }
}

fn unit_gaussian(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut w: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&w);
        if n > 1e-6 {
            w.iter_mut().for_each(|x| *x /= n);
            return w;
        }
    }
}

fn norm(w: &[f64]) -> f64 {
    w.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// RNG for restart `index` under `seed`: one ChaCha stream per restart.
pub fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Projected gradient descent on the unit sphere from `start`.
pub fn descend(objective: &FrameObjective, start: Vec<f64>, cfg: &SearchConfig) -> Result<(Vec<f64>, Vec<f64>, usize, StopReason)> {
    let max_step = cfg.step * 16.0;
    let mut w = start;
    let mut f = objective.value(&w)?;
    let mut trace = vec![f];
    let mut step = cfg.step;
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;
    'outer: while iterations < cfg.max_iters {
        iterations += 1;
        let g = objective.gradient(&w, GRADIENT_STEP)?;
        let radial: f64 = g.iter().zip(&w).map(|(a, b)| a * b).sum();
        let tangent: Vec<f64> = g.iter().zip(&w).map(|(a, b)| a - radial * b).collect();
        if norm(&tangent) < cfg.grad_tol {
            stop = StopReason::Stationary;
            break;
        }
        loop {
            let mut trial: Vec<f64> = w.iter().zip(&tangent).map(|(x, t)| x - step * t).collect();
            let n = norm(&trial);
            trial.iter_mut().for_each(|x| *x /= n);
            let ft = objective.value(&trial)?;
            if ft < f {
                w = trial;
                f = ft;
                trace.push(f);
                step = (step / cfg.shrink).min(max_step);
                break;
            }
            step *= cfg.shrink;
            if step < 1e-16 {
                stop = StopReason::Stalled;
                break 'outer;
            }
        }
    }
    Ok((w, trace, iterations, stop))
}

pub fn unextendibility_search(b: &LabeledBasis, pred: &EntanglementPredicate, cfg: &SearchConfig) -> Result<UnextendibilityResult> {
    unextendibility_search_with(b, pred, cfg, Execution::default())
}

pub fn unextendibility_search_with(
    b: &LabeledBasis,
    pred: &EntanglementPredicate,
    cfg: &SearchConfig,
    exec: Execution,
) -> Result<UnextendibilityResult> {
    cfg.validate()?;
    pred.validate(b.shape())?;
    let ortho = check_orthonormal(b, SEARCH_ORTHONORMAL_TOL);
    if !ortho.holds {
        return Err(Error::NotOrthonormal { residual: ortho.max_residual });
    }
    let frame = orthonormal_complement(&b.kets())?;
    let complement_dim = frame.len();
    if frame.is_empty() {
        return Ok(UnextendibilityResult {
            predicate: pred.clone(),
            complement_dim,
            min_defect: None,
            argmin: None,
            per_restart_minima: Vec::new(),
            restarts: Vec::new(),
            winner: None,
            verdict: SearchVerdict::ComplementEmpty,
        });
    }
    let objective = FrameObjective::new(frame, pred)?;

    let outcomes: Vec<Result<RestartOutcome>> = exec.map(cfg.restarts, |index| {
        let mut rng = restart_rng(cfg.seed, index);
        let start = unit_gaussian(objective.dim(), &mut rng);
        let (point, trace, iterations, stop) = descend(&objective, start, cfg)?;
        let min_defect = *trace.last().expect("trace starts with the initial value");
        Ok(RestartOutcome { index, min_defect, iterations, stop, point, trace })
    });
    let mut restarts = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let min_defect = restarts.iter().map(|r| r.min_defect).fold(f64::INFINITY, f64::min);
    // lowest index among restarts tied with the minimum
    let winner = restarts.iter().find(|r| r.min_defect <= min_defect + TIE_TOL).expect("at least one restart").index;
    let argmin = objective.compose(&restarts[winner].point)?.normalized()?;

    restarts.sort_by(|a, b| a.min_defect.total_cmp(&b.min_defect).then(a.index.cmp(&b.index)));
    let per_restart_minima = restarts.iter().map(|r| r.min_defect).collect();

    let verdict = if min_defect < cfg.witness_threshold {
        SearchVerdict::MeStateFound { witness: argmin.clone() }
    } else {
        SearchVerdict::NoMeStateFound { min_defect }
    };
    Ok(UnextendibilityResult {
        predicate: pred.clone(),
        complement_dim,
        min_defect: Some(min_defect),
        argmin: Some(argmin),
        per_restart_minima,
        restarts,
        winner: Some(winner),
        verdict,
    })
}

/// Smallest defect over `samples` seeded Gaussian unit vectors of the
/// complement, or `None` when the complement is empty.
pub fn random_complement_floor(
    b: &LabeledBasis,
    pred: &EntanglementPredicate,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Option<f64>> {
    let frame = orthonormal_complement(&b.kets())?;
    if frame.is_empty() {
        return Ok(None);
    }
    let objective = FrameObjective::new(frame, pred)?;
    const CHUNK: usize = 4096;
    let chunks = samples.div_ceil(CHUNK);
    let minima: Vec<Result<f64>> = exec.map(chunks, |c| {
        let mut rng = restart_rng(seed, c);
        let count = CHUNK.min(samples - c * CHUNK);
        let mut best = f64::INFINITY;
        for _ in 0..count {
            best = best.min(objective.value(&unit_gaussian(objective.dim(), &mut rng))?);
        }
        Ok(best)
    });
    let mut best = f64::INFINITY;
    for m in minima {
        best = best.min(m?);
    }
    Ok(Some(best))
}
