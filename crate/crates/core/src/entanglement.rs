//! Schmidt analysis, maximal-entanglement predicates and defect functions.
//!
//! Three predicates are supported:
//!
//! * [`EntanglementPredicate::StrictDef1`]: on every bipartition the reduced
//!   state of the smaller side equals `I/N_A`, with `N_A` its Hilbert-space
//!   dimension.
//! * [`EntanglementPredicate::GhzType`]: on every bipartition the nonzero
//!   spectrum of the reduced state is `d` copies of `1/d`.
//! * [`EntanglementPredicate::CutRestricted`]: the Schmidt coefficients across
//!   one designated cut all equal `1/√d`.
//!
//! For unequal local dimensions these disagree. In `2⊗3⊗3`, GHZ-like vectors
//! reduce to `diag(1/2, 1/2, 0)` on a qutrit, so they pass `GhzType(2)` but
//! fail `StrictDef1`. Reports carry verdicts under every predicate.
//!
//! Each predicate has a matching defect function. All three are nonnegative
//! and vanish exactly when the predicate holds. `StrictDef1` and `GhzType`
//! defects are polynomials in the amplitudes, so they stay smooth where
//! eigenvalues cross; the search in [`crate::verify`] minimizes them.

use serde::Serialize;

use crate::qstate::{hermitian_eigenvalues, Bipartition, CutMap, Ket, Operator, SystemShape};
use crate::{Error, Result, C64};

/// Central-difference step used by [`defect_gradient`].
pub const GRADIENT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EntanglementPredicate {
    StrictDef1,
    GhzType { d: usize },
    CutRestricted { cut: Bipartition, d: usize },
}

impl EntanglementPredicate {
    /// `CutRestricted` on a single subsystem, with `d` equal to that
    /// subsystem's dimension.
    pub fn cut_on(shape: &SystemShape, subsystem: usize) -> Result<Self> {
        let cut = Bipartition::new(shape.clone(), &[subsystem])?;
        let d = shape.dims()[subsystem];
        let pred = EntanglementPredicate::CutRestricted { cut, d };
        pred.validate(shape)?;
        Ok(pred)
    }

    /// Parses the command-line names `strict`, `ghz<d>` and `cut<k>` (`k`
    /// one-based).
    pub fn parse(name: &str, shape: &SystemShape) -> Result<Self> {
        let pred = if name == "strict" {
            EntanglementPredicate::StrictDef1
        } else if let Some(d) = name.strip_prefix("ghz") {
            let d = d.parse().map_err(|_| Error::InvalidPredicate(format!("unknown predicate {name:?}")))?;
            EntanglementPredicate::GhzType { d }
        } else if let Some(k) = name.strip_prefix("cut") {
            let k: usize = k.parse().map_err(|_| Error::InvalidPredicate(format!("unknown predicate {name:?}")))?;
            if k == 0 || k > shape.len() {
                return Err(Error::InvalidPredicate(format!("{name}: no subsystem {k} in {:?}", shape.dims())));
            }
            return EntanglementPredicate::cut_on(shape, k - 1);
        } else {
            return Err(Error::InvalidPredicate(format!("unknown predicate {name:?}")));
        };
        pred.validate(shape)?;
        Ok(pred)
    }

    /// Inverse of [`EntanglementPredicate::parse`] where one exists.
    pub fn name(&self) -> String {
        match self {
            EntanglementPredicate::StrictDef1 => "strict".into(),
            EntanglementPredicate::GhzType { d } => format!("ghz{d}"),
            EntanglementPredicate::CutRestricted { cut, d } => {
                let part = cut.part_a();
                if part.len() == 1 && cut.shape().dims()[part[0]] == *d {
                    format!("cut{}", part[0] + 1)
                } else {
                    format!("cut{}:{d}", cut.label())
                }
            }
        }
    }

    pub fn validate(&self, shape: &SystemShape) -> Result<()> {
        let check_d = |d: usize| {
            if d < 2 || d > shape.min_dim() {
                Err(Error::InvalidPredicate(format!(
                    "d = {d} outside 2..={} for shape {:?}",
                    shape.min_dim(),
                    shape.dims()
                )))
            } else {
                Ok(())
            }
        };
        match self {
            EntanglementPredicate::StrictDef1 => Ok(()),
            EntanglementPredicate::GhzType { d } => check_d(*d),
            EntanglementPredicate::CutRestricted { cut, d } => {
                if cut.shape() != shape {
                    return Err(Error::InvalidPredicate(format!(
                        "cut defined on {:?}, state has shape {:?}",
                        cut.shape().dims(),
                        shape.dims()
                    )));
                }
                check_d(*d)
            }
        }
    }

    /// Bipartitions the predicate inspects, each oriented onto its smaller
    /// side.
    pub fn cuts(&self, shape: &SystemShape) -> Vec<Bipartition> {
        match self {
            EntanglementPredicate::CutRestricted { cut, .. } => vec![cut.reduced_side()],
            _ => Bipartition::all_cuts(shape),
        }
    }
}

impl std::fmt::Display for EntanglementPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for EntanglementPredicate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// Descending Schmidt coefficients across a cut.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtSpectrum {
    pub coefficients: Vec<f64>,
    pub cut: Bipartition,
}

impl SchmidtSpectrum {
    pub fn schmidt_number(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }
}

fn check_shape(v: &Ket, cut: &Bipartition) -> Result<()> {
    if v.shape() != cut.shape() {
        return Err(Error::ShapeMismatch { left: v.shape().dims().to_vec(), right: cut.shape().dims().to_vec() });
    }
    Ok(())
}

fn reduced_spectrum(v: &Ket, cut: &Bipartition) -> Result<Vec<f64>> {
    let rho = CutMap::new(cut).reduce(v.amps());
    hermitian_eigenvalues(&rho)
}

pub fn schmidt_coefficients(v: &Ket, cut: &Bipartition) -> Result<SchmidtSpectrum> {
    check_shape(v, cut)?;
    v.ensure_unit(1e-10)?;
    let cut = cut.reduced_side();
    let coefficients = reduced_spectrum(v, &cut)?.into_iter().map(|e| e.max(0.0).sqrt()).collect();
    Ok(SchmidtSpectrum { coefficients, cut })
}

pub fn schmidt_number(v: &Ket, cut: &Bipartition, tol: f64) -> Result<usize> {
    Ok(schmidt_coefficients(v, cut)?.schmidt_number(tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutResidual {
    /// e.g. `{2}|{1,3}`, one-based.
    pub cut: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementVerdict {
    pub holds: bool,
    pub residuals: Vec<CutResidual>,
}

impl EntanglementVerdict {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn residual_on(&self, label: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.cut == label).map(|r| r.residual)
    }
}

fn two_norm_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn spectrum_target(len: usize, d: usize, value: f64) -> Vec<f64> {
    (0..len).map(|i| if i < d { value } else { 0.0 }).collect()
}

/// Per-cut residuals against `pred`; the verdict holds iff every residual is
/// below `tol`.
///
/// * `StrictDef1`: `‖ρ_A − I/N_A‖_F`
/// * `GhzType(d)`: 2-norm distance of the sorted spectrum from
///   `(1/d, …, 1/d, 0, …)`
/// * `CutRestricted(cut, d)`: 2-norm distance of the Schmidt coefficients
///   from `(1/√d, …, 1/√d, 0, …)`
pub fn is_maximally_entangled(v: &Ket, pred: &EntanglementPredicate, tol: f64) -> Result<EntanglementVerdict> {
    pred.validate(v.shape())?;
    v.ensure_unit(1e-10)?;
    let mut residuals = Vec::new();
    for cut in pred.cuts(v.shape()) {
        let rho = CutMap::new(&cut).reduce(v.amps());
        let residual = match pred {
            EntanglementPredicate::StrictDef1 => strict_term(&rho).sqrt(),
            EntanglementPredicate::GhzType { d } => {
                let eig = hermitian_eigenvalues(&rho)?;
                two_norm_distance(&eig, &spectrum_target(eig.len(), *d, 1.0 / *d as f64))
            }
            EntanglementPredicate::CutRestricted { d, .. } => {
                let coeffs: Vec<f64> = hermitian_eigenvalues(&rho)?.into_iter().map(|e| e.max(0.0).sqrt()).collect();
                let target = spectrum_target(coeffs.len(), *d, 1.0 / (*d as f64).sqrt());
                two_norm_distance(&coeffs, &target)
            }
        };
        residuals.push(CutResidual { cut: cut.label(), residual });
    }
    let holds = residuals.iter().all(|r| r.residual < tol);
    Ok(EntanglementVerdict { holds, residuals })
}

/// `‖ρ − I/N‖_F²`, summed without cancellation.
fn strict_term(rho: &Operator) -> f64 {
    let n = rho.rows();
    let inv = 1.0 / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let z = rho.get(i, j);
            sum += if i == j { (z.re - inv).powi(2) + z.im * z.im } else { z.norm_sqr() };
        }
    }
    sum
}

/// `‖ρ² − ρ/d‖_F²`.
fn ghz_term(rho: &Operator, d: usize) -> f64 {
    let n = rho.rows();
    let inv = 1.0 / d as f64;
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let sq: C64 = (0..n).map(|k| rho.get(i, k) * rho.get(k, j)).sum();
            sum += (sq - rho.get(i, j) * inv).norm_sqr();
        }
    }
    sum
}

/// `Σ_{i<d} (μ_i − 1/d)² + Σ_{i≥d} μ_i²` over the descending spectrum.
fn cut_term(rho: &Operator, d: usize) -> Result<f64> {
    let inv = 1.0 / d as f64;
    Ok(hermitian_eigenvalues(rho)?
        .iter()
        .enumerate()
        .map(|(i, &mu)| if i < d { (mu - inv).powi(2) } else { mu * mu })
        .sum())
}

/// Defect evaluator with the cut index maps precomputed for one shape.
#[derive(Debug, Clone)]
pub struct Defect {
    pred: EntanglementPredicate,
    shape: SystemShape,
    maps: Vec<CutMap>,
}

impl Defect {
    pub fn new(shape: &SystemShape, pred: &EntanglementPredicate) -> Result<Self> {
        pred.validate(shape)?;
        let maps = pred.cuts(shape).iter().map(CutMap::new).collect();
        Ok(Defect { pred: pred.clone(), shape: shape.clone(), maps })
    }

    pub fn predicate(&self) -> &EntanglementPredicate {
        &self.pred
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    /// Defect of unit-norm amplitudes.
    pub fn value_unit(&self, amps: &[C64]) -> Result<f64> {
        let mut total = 0.0;
        for map in &self.maps {
            let rho = map.reduce(amps);
            total += match &self.pred {
                EntanglementPredicate::StrictDef1 => strict_term(&rho),
                EntanglementPredicate::GhzType { d } => ghz_term(&rho, *d),
                EntanglementPredicate::CutRestricted { d, .. } => cut_term(&rho, *d)?,
            };
        }
        Ok(total)
    }

    /// Defect of `v/‖v‖`.
    pub fn value(&self, v: &Ket) -> Result<f64> {
        if v.shape() != &self.shape {
            return Err(Error::ShapeMismatch { left: v.shape().dims().to_vec(), right: self.shape.dims().to_vec() });
        }
        self.value_unit(v.normalized()?.amps())
    }
}

/// Distance of `v/‖v‖` from satisfying `pred`; zero exactly when it does.
///
/// * `StrictDef1`: `Σ_cuts ‖ρ_A − I/N_A‖_F²`
/// * `GhzType(d)`: `Σ_cuts ‖ρ_A² − ρ_A/d‖_F²`
/// * `CutRestricted(cut, d)`: `Σ_{i<d}(μ_i − 1/d)² + Σ_{i≥d} μ_i²` over the
///   squared Schmidt coefficients `μ` of the cut
pub fn defect(v: &Ket, pred: &EntanglementPredicate) -> Result<f64> {
    Defect::new(v.shape(), pred)?.value(v)
}

/// Defect as a function of real coordinates in an orthonormal frame:
/// `w ↦ defect(v(w)/‖v(w)‖)` with `v(w) = Σ_j (w_{2j} + i·w_{2j+1}) frame_j`.
#[derive(Debug, Clone)]
pub struct FrameObjective {
    frame: Vec<Ket>,
    defect: Defect,
}

impl FrameObjective {
    pub fn new(frame: Vec<Ket>, pred: &EntanglementPredicate) -> Result<Self> {
        let first = frame.first().ok_or(Error::Empty)?;
        let shape = first.shape().clone();
        for (i, a) in frame.iter().enumerate() {
            first.check_shape(a)?;
            for b in &frame[i..] {
                let expected = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
                let residual = (crate::qstate::inner(a, b)? - C64::new(expected, 0.0)).norm();
                if residual > 1e-10 {
                    return Err(Error::NotOrthonormal { residual });
                }
            }
        }
        let defect = Defect::new(&shape, pred)?;
        Ok(FrameObjective { frame, defect })
    }

    pub fn frame(&self) -> &[Ket] {
        &self.frame
    }

    /// Number of real coordinates.
    pub fn dim(&self) -> usize {
        2 * self.frame.len()
    }

    pub fn compose(&self, w: &[f64]) -> Result<Ket> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for a frame of {}", w.len(), self.frame.len())));
        }
        let shape = self.defect.shape().clone();
        let mut amps = vec![C64::new(0.0, 0.0); shape.total()];
        for (j, k) in self.frame.iter().enumerate() {
            let coeff = C64::new(w[2 * j], w[2 * j + 1]);
            if coeff == C64::new(0.0, 0.0) {
                continue;
            }
            amps.iter_mut().zip(k.amps()).for_each(|(a, b)| *a += coeff * b);
        }
        Ket::new(shape, amps)
    }

    pub fn value(&self, w: &[f64]) -> Result<f64> {
        self.defect.value(&self.compose(w)?)
    }

    /// Central finite-difference gradient with step `h`.
    pub fn gradient(&self, w: &[f64], h: f64) -> Result<Vec<f64>> {
        let mut probe = w.to_vec();
        let mut grad = Vec::with_capacity(w.len());
        for i in 0..w.len() {
            probe[i] = w[i] + h;
            let up = self.value(&probe)?;
            probe[i] = w[i] - h;
            let down = self.value(&probe)?;
            probe[i] = w[i];
            grad.push((up - down) / (2.0 * h));
        }
        Ok(grad)
    }
}

/// Gradient of the frame-coordinate defect at unit `w`, by central
/// differences with step [`GRADIENT_STEP`].
pub fn defect_gradient(w: &[f64], pred: &EntanglementPredicate, frame: &[Ket]) -> Result<Vec<f64>> {
    defect_gradient_with_step(w, pred, frame, GRADIENT_STEP)
}

pub fn defect_gradient_with_step(w: &[f64], pred: &EntanglementPredicate, frame: &[Ket], h: f64) -> Result<Vec<f64>> {
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotUnit { norm });
    }
    FrameObjective::new(frame.to_vec(), pred)?.gradient(w, h)
}
