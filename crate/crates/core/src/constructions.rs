//! Generators for the explicit states, operators and bases, plus the lifting
//! construction from bipartite to tripartite unextendible bases.
//!
//! Vector ordering inside every basis is lexicographic in its labels' index
//! pairs, so serialized output is deterministic.

use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::entanglement::EntanglementPredicate;
use crate::qstate::{apply_local, inner, Ket, Kron, Operator, SystemShape};
use crate::{Error, Result, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn shape(dims: &[usize]) -> SystemShape {
    SystemShape::new(dims.to_vec()).expect("static shape")
}

/// Pauli matrix `σ_α`; `σ₀ = I`.
pub fn pauli(alpha: usize) -> Result<Operator> {
    let (o, l, i) = (c(0.0), c(1.0), C64::new(0.0, 1.0));
    let rows = match alpha {
        0 => [[l, o], [o, l]],
        1 => [[o, l], [l, o]],
        2 => [[o, -i], [i, o]],
        3 => [[l, o], [o, -l]],
        _ => return Err(Error::OutOfRange { index: alpha, bound: 4 }),
    };
    Operator::from_rows(&rows.map(|r| r.to_vec()))
}

fn sigma(alpha: usize) -> Operator {
    pauli(alpha).expect("alpha < 4")
}

/// `(|000⟩ + |111⟩)/√2`.
pub fn ghz3() -> Ket {
    let h = c(FRAC_1_SQRT_2);
    Ket::from_terms(shape(&[2, 2, 2]), &[(&[0, 0, 0], h), (&[1, 1, 1], h)]).expect("valid labels")
}

/// One term `coefficient · (factor₁ ⊗ … ⊗ factor_m)` of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub factors: Vec<Ket>,
}

/// Explicit product-term decomposition of a vector.
///
/// `grouping[s]` lists the subsystems covered by factor slot `s`. Within one
/// slot the factors of different terms are orthonormal, which is the Schmidt
/// structure the lifting construction relies on.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub grouping: Vec<Vec<usize>>,
    pub terms: Vec<Term>,
}

impl Decomposition {
    /// Per-subsystem grouping `[[0], [1], …]`.
    pub fn per_site(terms: Vec<Term>) -> Self {
        let k = terms.first().map_or(0, |t| t.factors.len());
        Decomposition { grouping: (0..k).map(|i| vec![i]).collect(), terms }
    }

    pub fn reconstruct(&self, shape: &SystemShape) -> Result<Ket> {
        let mut seen: Vec<usize> = self.grouping.iter().flatten().copied().collect();
        seen.sort_unstable();
        if seen != (0..shape.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidDecomposition(format!(
                "grouping {:?} does not partition {} subsystems",
                self.grouping,
                shape.len()
            )));
        }
        let dims = shape.dims();
        for term in &self.terms {
            if term.factors.len() != self.grouping.len() {
                return Err(Error::InvalidDecomposition("factor count differs from slot count".into()));
            }
            for (slot, factor) in self.grouping.iter().zip(&term.factors) {
                let expected: Vec<usize> = slot.iter().map(|&i| dims[i]).collect();
                if factor.shape().dims() != expected.as_slice() {
                    return Err(Error::InvalidDecomposition(format!(
                        "factor of shape {:?} in slot {slot:?}",
                        factor.shape().dims()
                    )));
                }
            }
        }
        let amps = (0..shape.total())
            .map(|flat| {
                let labels = shape.labels(flat);
                self.terms
                    .iter()
                    .map(|term| {
                        self.grouping.iter().zip(&term.factors).fold(c(term.coefficient), |acc, (slot, f)| {
                            let sub = slot.iter().fold(0, |a, &i| a * dims[i] + labels[i]);
                            acc * f.amps()[sub]
                        })
                    })
                    .sum()
            })
            .collect();
        Ket::new(shape.clone(), amps)
    }

    fn check_slots(&self) -> Result<()> {
        for slot in 0..self.grouping.len() {
            for (a, ta) in self.terms.iter().enumerate() {
                for tb in &self.terms[a..] {
                    let expected = if std::ptr::eq(ta, tb) { 1.0 } else { 0.0 };
                    let z = inner(&ta.factors[slot], &tb.factors[slot])?;
                    if (z - c(expected)).norm() > 1e-10 {
                        return Err(Error::InvalidDecomposition(format!(
                            "slot {slot} factors are not orthonormal (overlap {z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A labelled basis vector, optionally with its product-term decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedVector {
    label: String,
    ket: Ket,
    decomposition: Option<Decomposition>,
}

impl DecomposedVector {
    pub fn plain(label: impl Into<String>, ket: Ket) -> Self {
        DecomposedVector { label: label.into(), ket, decomposition: None }
    }

    /// Validates that the terms reconstruct `ket` within `1e-12`, that each
    /// slot is orthonormal within `1e-10`, and that coefficients are positive
    /// and descending.
    pub fn with_terms(label: impl Into<String>, ket: Ket, decomposition: Decomposition) -> Result<Self> {
        let mut prev = f64::INFINITY;
        for t in &decomposition.terms {
            if !(t.coefficient > 0.0) || t.coefficient > prev + 1e-12 {
                return Err(Error::InvalidDecomposition(format!(
                    "coefficients must be positive and descending, got {}",
                    t.coefficient
                )));
            }
            prev = t.coefficient;
        }
        let rebuilt = decomposition.reconstruct(ket.shape())?;
        let err = rebuilt.max_abs_diff(&ket)?;
        if err > 1e-12 {
            return Err(Error::InvalidDecomposition(format!("reconstruction error {err:e}")));
        }
        decomposition.check_slots()?;
        Ok(DecomposedVector { label: label.into(), ket, decomposition: Some(decomposition) })
    }

    /// Builds the ket from the terms.
    pub fn from_terms(label: impl Into<String>, shape: &SystemShape, decomposition: Decomposition) -> Result<Self> {
        let ket = decomposition.reconstruct(shape)?;
        DecomposedVector::with_terms(label, ket, decomposition)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ket(&self) -> &Ket {
        &self.ket
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        self.decomposition.as_ref()
    }
}

/// Property a basis claims to have.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Claim {
    Orthonormal,
    MaximallyEntangled(EntanglementPredicate),
    Unextendible(EntanglementPredicate),
    Complete,
}

impl Claim {
    pub fn name(&self) -> String {
        match self {
            Claim::Orthonormal => "orthonormal".into(),
            Claim::MaximallyEntangled(p) => format!("maximally_entangled:{}", p.name()),
            Claim::Unextendible(p) => format!("unextendible:{}", p.name()),
            Claim::Complete => "complete".into(),
        }
    }

    pub fn parse(name: &str, shape: &SystemShape) -> Result<Self> {
        Ok(match name.split_once(':') {
            None if name == "orthonormal" => Claim::Orthonormal,
            None if name == "complete" => Claim::Complete,
            Some(("maximally_entangled", p)) => Claim::MaximallyEntangled(EntanglementPredicate::parse(p, shape)?),
            Some(("unextendible", p)) => Claim::Unextendible(EntanglementPredicate::parse(p, shape)?),
            _ => return Err(Error::InvalidParameters(format!("unknown claim {name:?}"))),
        })
    }

    pub fn predicate(&self) -> Option<&EntanglementPredicate> {
        match self {
            Claim::MaximallyEntangled(p) | Claim::Unextendible(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledBasis {
    name: String,
    shape: SystemShape,
    vectors: Vec<DecomposedVector>,
    claims: Vec<Claim>,
}

impl LabeledBasis {
    pub fn new(name: impl Into<String>, shape: SystemShape, vectors: Vec<DecomposedVector>, claims: Vec<Claim>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Empty);
        }
        let mut labels = HashSet::new();
        for v in &vectors {
            if v.ket.shape() != &shape {
                return Err(Error::ShapeMismatch { left: shape.dims().to_vec(), right: v.ket.shape().dims().to_vec() });
            }
            if !labels.insert(v.label.as_str()) {
                return Err(Error::DuplicateLabel(v.label.clone()));
            }
        }
        for claim in &claims {
            if let Some(p) = claim.predicate() {
                p.validate(&shape)?;
            }
        }
        Ok(LabeledBasis { name: name.into(), shape, vectors, claims })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn vectors(&self) -> &[DecomposedVector] {
        &self.vectors
    }

    pub fn claims(&self) -> &[Claim] {
        &self.claims
    }

    pub fn kets(&self) -> Vec<Ket> {
        self.vectors.iter().map(|v| v.ket.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&DecomposedVector> {
        self.vectors.iter().find(|v| v.label == label)
    }
}

fn qubit(l: usize) -> Ket {
    Ket::basis(shape(&[2]), &[l]).expect("label < 2")
}

fn qudit(d: usize, l: usize) -> Ket {
    Ket::basis(shape(&[d]), &[l]).expect("label < d")
}

/// GHZ-type vector `(I⊗U⊗V)|ghz3⟩` with its per-site terms.
fn local_ghz(label: String, u: &Operator, v: &Operator) -> DecomposedVector {
    let terms = (0..2)
        .map(|l| Term {
            coefficient: FRAC_1_SQRT_2,
            factors: vec![qubit(l), u.apply_ket(&qubit(l)).unwrap(), v.apply_ket(&qubit(l)).unwrap()],
        })
        .collect();
    let ket = apply_local(&[Operator::identity(2), u.clone(), v.clone()], &ghz3()).expect("qubit operators");
    DecomposedVector::with_terms(label, ket, Decomposition::per_site(terms)).expect("valid GHZ decomposition")
}

/// The eight GHZ-type vectors completing `2⊗2⊗2`:
/// `I⊗I⊗I`, `I⊗I⊗σ_α` (α = 1..3), `I⊗σ_β⊗I` (β = 1, 2), `I⊗σ₁⊗σ_γ` (γ = 1, 2)
/// applied to the GHZ state, labelled `phi1`…`phi8`.
pub fn meb8() -> LabeledBasis {
    let id = Operator::identity(2);
    let mut ops: Vec<(Operator, Operator)> = vec![(id.clone(), id.clone())];
    ops.extend((1..=3).map(|a| (id.clone(), sigma(a))));
    ops.extend((1..=2).map(|b| (sigma(b), id.clone())));
    ops.extend((1..=2).map(|g| (sigma(1), sigma(g))));
    let vectors = ops.iter().enumerate().map(|(n, (u, v))| local_ghz(format!("phi{}", n + 1), u, v)).collect();
    let strict = EntanglementPredicate::StrictDef1;
    LabeledBasis::new(
        "meb8",
        shape(&[2, 2, 2]),
        vectors,
        vec![Claim::Orthonormal, Claim::MaximallyEntangled(strict), Claim::Complete],
    )
    .expect("valid basis")
}

/// `λ₀|000⟩ + λ₁e^{iθ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩`.
pub fn canonical_three_qubit(lambda: [f64; 5], theta: f64) -> Result<Ket> {
    if lambda.iter().any(|&l| !(l >= 0.0)) {
        return Err(Error::InvalidParameters(format!("coefficients must be nonnegative: {lambda:?}")));
    }
    let norm: f64 = lambda.iter().map(|l| l * l).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameters(format!("Σλ² = {norm}, expected 1")));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidParameters(format!("θ = {theta} outside [0, π]")));
    }
    Ket::from_terms(
        shape(&[2, 2, 2]),
        &[
            (&[0, 0, 0], c(lambda[0])),
            (&[1, 0, 0], C64::from_polar(lambda[1], theta)),
            (&[1, 0, 1], c(lambda[2])),
            (&[1, 1, 0], c(lambda[3])),
            (&[1, 1, 1], c(lambda[4])),
        ],
    )
}

/// The orthonormal qutrit pair
/// `|x⟩ = (|0⟩ + ((1+√3i)/2)|1⟩ + |2⟩)/√3` and
/// `|y⟩ = (((−√3+i)/2)|0⟩ + i|1⟩ − i|2⟩)/√3`.
pub fn xy_vectors() -> (Ket, Ket) {
    let r3 = 3f64.sqrt();
    let n = 1.0 / r3;
    let x = Ket::new(shape(&[3]), vec![c(n), C64::new(0.5, r3 / 2.0) * n, c(n)]).expect("three amplitudes");
    let y = Ket::new(shape(&[3]), vec![C64::new(-r3 / 2.0, 0.5) * n, C64::new(0.0, n), C64::new(0.0, -n)])
        .expect("three amplitudes");
    (x, y)
}

fn bipartite_family(name: &str, prefix: &str, b0: &Ket, b1: &Ket) -> LabeledBasis {
    let sh = shape(&[2, 3]);
    let vectors = (0..4)
        .map(|j| {
            let s = sigma(j);
            let terms = [b0, b1]
                .iter()
                .enumerate()
                .map(|(l, b)| Term {
                    coefficient: FRAC_1_SQRT_2,
                    factors: vec![s.apply_ket(&qubit(l)).unwrap(), (*b).clone()],
                })
                .collect();
            DecomposedVector::from_terms(format!("{prefix}{j}"), &sh, Decomposition::per_site(terms))
                .expect("valid Schmidt decomposition")
        })
        .collect();
    let strict = EntanglementPredicate::StrictDef1;
    let ghz2 = EntanglementPredicate::GhzType { d: 2 };
    LabeledBasis::new(
        name,
        sh,
        vectors,
        vec![
            Claim::Orthonormal,
            Claim::MaximallyEntangled(strict.clone()),
            Claim::MaximallyEntangled(ghz2.clone()),
            Claim::Unextendible(strict),
            Claim::Unextendible(ghz2),
        ],
    )
    .expect("valid basis")
}

/// `(σ_i⊗I₃)(|00⟩ + |11⟩)/√2`, `i = 0..3`, labelled `phi0`…`phi3`.
pub fn umeb_2x3_type1() -> LabeledBasis {
    bipartite_family("umeb-2x3-1", "phi", &qudit(3, 0), &qudit(3, 1))
}

/// `(σ_j⊗I₃)(|0⟩|x⟩ + |1⟩|y⟩)/√2`, `j = 0..3`, labelled `psi0`…`psi3`.
pub fn umeb_2x3_type2() -> LabeledBasis {
    let (x, y) = xy_vectors();
    bipartite_family("umeb-2x3-2", "psi", &x, &y)
}

fn tripartite_claims() -> Vec<Claim> {
    let ghz2 = EntanglementPredicate::GhzType { d: 2 };
    vec![Claim::Orthonormal, Claim::MaximallyEntangled(ghz2.clone()), Claim::Unextendible(ghz2)]
}

/// Lifts a bipartite basis on `d₁⊗d₂` with equal Schmidt coefficients
/// `1/√d₁` to `d₁⊗d₂⊗d₃`: each `Σ_l λ_l |a_l⟩|b_l⟩` and each `j < d₃` yields
/// `Σ_l λ_l |a_l⟩|b_l⟩|j⊕l⟩`, with `⊕` addition mod `d₃`. Labels become
/// `"{label},{j}"`.
pub fn lift_umeb(base: &LabeledBasis, d3: usize) -> Result<LabeledBasis> {
    let dims = base.shape().dims();
    if dims.len() != 2 {
        return Err(Error::InvalidParameters(format!("lifting needs a bipartite basis, got {dims:?}")));
    }
    let (d1, d2) = (dims[0], dims[1]);
    if !(d1 <= d2 && d2 <= d3) {
        return Err(Error::InvalidParameters(format!("need d1 <= d2 <= d3, got {d1}, {d2}, {d3}")));
    }
    let target = 1.0 / (d1 as f64).sqrt();
    let sh = SystemShape::new(vec![d1, d2, d3])?;
    let mut vectors = Vec::with_capacity(base.len() * d3);
    for v in base.vectors() {
        let dec = v.decomposition().ok_or_else(|| {
            Error::InvalidDecomposition(format!("vector {:?} carries no term decomposition", v.label()))
        })?;
        if dec.grouping != vec![vec![0], vec![1]] {
            return Err(Error::InvalidDecomposition(format!("vector {:?}: grouping must be [[0],[1]]", v.label())));
        }
        if dec.terms.len() != d1 {
            return Err(Error::InvalidDecomposition(format!(
                "vector {:?} has {} terms, expected {d1}",
                v.label(),
                dec.terms.len()
            )));
        }
        if let Some(t) = dec.terms.iter().find(|t| (t.coefficient - target).abs() > 1e-10) {
            return Err(Error::InvalidDecomposition(format!(
                "vector {:?}: coefficient {} differs from 1/√{d1}",
                v.label(),
                t.coefficient
            )));
        }
        for j in 0..d3 {
            let terms = dec
                .terms
                .iter()
                .enumerate()
                .map(|(l, t)| {
                    let mut factors = t.factors.clone();
                    factors.push(qudit(d3, (j + l) % d3));
                    Term { coefficient: t.coefficient, factors }
                })
                .collect();
            vectors.push(DecomposedVector::from_terms(
                format!("{},{j}", v.label()),
                &sh,
                Decomposition::per_site(terms),
            )?);
        }
    }
    let ghz = EntanglementPredicate::GhzType { d: d1 };
    let claims = vec![Claim::Orthonormal, Claim::MaximallyEntangled(ghz.clone()), Claim::Unextendible(ghz)];
    LabeledBasis::new(format!("{}-lift{d3}", base.name()), sh, vectors, claims)
}

fn tripartite_family(name: &str, prefix: &str, b0: &Ket, b1: &Ket) -> LabeledBasis {
    let sh = shape(&[2, 3, 3]);
    let id3 = Operator::identity(3);
    let mut vectors = Vec::with_capacity(12);
    for i in 0..4 {
        let s = sigma(i);
        for j in 0..3 {
            let core = qubit(0).kron(b0).kron(&qudit(3, j));
            let shifted = qubit(1).kron(b1).kron(&qudit(3, (j + 1) % 3));
            let sum: Vec<C64> = core.amps().iter().zip(shifted.amps()).map(|(a, b)| (a + b) * FRAC_1_SQRT_2).collect();
            let ket = apply_local(&[s.clone(), id3.clone(), id3.clone()], &Ket::new(sh.clone(), sum).unwrap()).unwrap();
            let terms = vec![
                Term { coefficient: FRAC_1_SQRT_2, factors: vec![s.apply_ket(&qubit(0)).unwrap(), b0.clone(), qudit(3, j)] },
                Term {
                    coefficient: FRAC_1_SQRT_2,
                    factors: vec![s.apply_ket(&qubit(1)).unwrap(), b1.clone(), qudit(3, (j + 1) % 3)],
                },
            ];
            vectors.push(
                DecomposedVector::with_terms(format!("{prefix}{i},{j}"), ket, Decomposition::per_site(terms))
                    .expect("valid decomposition"),
            );
        }
    }
    LabeledBasis::new(name, sh, vectors, tripartite_claims()).expect("valid basis")
}

/// `(σ_i⊗I₃⊗I₃)(|00j⟩ + |11(j⊕1)⟩)/√2` for `i = 0..3`, `j = 0..2`, labelled
/// `phi{i},{j}`.
pub fn umeb_2x3x3_first() -> LabeledBasis {
    tripartite_family("umeb-2x3x3-1", "phi", &qudit(3, 0), &qudit(3, 1))
}

/// `(σ_j⊗I₃⊗I₃)(|0⟩|x⟩|l⟩ + |1⟩|y⟩|l⊕1⟩)/√2` for `j = 0..3`, `l = 0..2`,
/// labelled `psi{j},{l}`.
pub fn umeb_2x3x3_second() -> LabeledBasis {
    let (x, y) = xy_vectors();
    tripartite_family("umeb-2x3x3-2", "psi", &x, &y)
}

/// Names accepted by [`by_name`].
pub const EXPORT_NAMES: [&str; 6] = ["meb8", "umeb-2x3-1", "umeb-2x3-2", "umeb-2x3x3-1", "umeb-2x3x3-2", "ghz3"];

pub fn by_name(name: &str) -> Result<LabeledBasis> {
    match name {
        "meb8" => Ok(meb8()),
        "umeb-2x3-1" => Ok(umeb_2x3_type1()),
        "umeb-2x3-2" => Ok(umeb_2x3_type2()),
        "umeb-2x3x3-1" => Ok(umeb_2x3x3_first()),
        "umeb-2x3x3-2" => Ok(umeb_2x3x3_second()),
        "ghz3" => {
            let v = meb8().vectors()[0].clone();
            let v = DecomposedVector { label: "ghz".into(), ..v };
            LabeledBasis::new(
                "ghz3",
                shape(&[2, 2, 2]),
                vec![v],
                vec![Claim::Orthonormal, Claim::MaximallyEntangled(EntanglementPredicate::StrictDef1)],
            )
        }
        other => Err(Error::InvalidParameters(format!(
            "unknown construction {other:?}; expected one of {}",
            EXPORT_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{is_maximally_entangled, schmidt_coefficients};
    use crate::qstate::{gram_matrix, numerical_rank, partial_trace, Bipartition, RANK_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gram_residual(b: &LabeledBasis) -> f64 {
        gram_matrix(&b.kets()).unwrap().max_abs_diff(&Operator::identity(b.len())).unwrap()
    }

    fn all_bases() -> Vec<LabeledBasis> {
        EXPORT_NAMES.iter().map(|n| by_name(n).unwrap()).collect()
    }

    #[test]
    fn pauli_matrices() {
        let m = pauli(1).unwrap();
        assert_eq!(m.get(0, 1), c(1.0));
        assert_eq!(m.get(0, 0), c(0.0));
        let y = pauli(2).unwrap();
        assert_eq!(y.get(0, 1), C64::new(0.0, -1.0));
        assert_eq!(y.get(1, 0), C64::new(0.0, 1.0));
        assert_eq!(pauli(0).unwrap(), Operator::identity(2));
        for a in 0..4 {
            let p = pauli(a).unwrap();
            assert!(p.is_unitary(0.0) && p.is_hermitian(0.0));
        }
        assert!(matches!(pauli(4), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn ghz_state() {
        let g = ghz3();
        assert!((g.norm() - 1.0).abs() < 1e-15);
        let one = Ket::basis(shape(&[2, 2, 2]), &[1, 1, 1]).unwrap();
        assert!((inner(&g, &one).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-16);
    }

    #[test]
    fn meb8_vectors() {
        let b = meb8();
        assert_eq!(b.len(), 8);
        let h = c(FRAC_1_SQRT_2);
        let phi4 = Ket::from_terms(shape(&[2, 2, 2]), &[(&[0, 0, 0], h), (&[1, 1, 1], -h)]).unwrap();
        assert_eq!(b.get("phi4").unwrap().ket(), &phi4);
        let phi2 = Ket::from_terms(shape(&[2, 2, 2]), &[(&[0, 0, 1], h), (&[1, 1, 0], h)]).unwrap();
        assert_eq!(b.get("phi2").unwrap().ket(), &phi2);
        assert!(gram_residual(&b) < 1e-12);
        assert_eq!(numerical_rank(&b.kets(), RANK_TOL).unwrap(), 8);
        for v in b.vectors() {
            let verdict = is_maximally_entangled(v.ket(), &EntanglementPredicate::StrictDef1, 1e-12).unwrap();
            assert!(verdict.holds && verdict.max_residual() < 1e-12);
        }
    }

    #[test]
    fn canonical_form_specializations() {
        let h = FRAC_1_SQRT_2;
        let g = canonical_three_qubit([h, 0.0, 0.0, 0.0, h], 0.0).unwrap();
        assert!(g.max_abs_diff(&ghz3()).unwrap() < 1e-16);
        let p = canonical_three_qubit([1.0, 0.0, 0.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(p, Ket::basis(shape(&[2, 2, 2]), &[0, 0, 0]).unwrap());
        assert!(canonical_three_qubit([1.0, 1.0, 0.0, 0.0, 0.0], 0.0).is_err());
        assert!(canonical_three_qubit([-1.0, 0.0, 0.0, 0.0, 0.0], 0.0).is_err());
        assert!(canonical_three_qubit([1.0, 0.0, 0.0, 0.0, 0.0], 4.0).is_err());
    }

    #[test]
    fn canonical_form_reduced_state_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let mut l: [f64; 5] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
            let n = l.iter().map(|x| x * x).sum::<f64>().sqrt();
            l.iter_mut().for_each(|x| *x /= n);
            let theta = rng.random_range(0.0..std::f64::consts::PI);
            let v = canonical_three_qubit(l, theta).unwrap();
            let rho = partial_trace(&v, &Bipartition::new(v.shape().clone(), &[0]).unwrap()).unwrap();
            let expected = Operator::from_rows(&[
                vec![c(l[0] * l[0]), C64::from_polar(l[0] * l[1], -theta)],
                vec![C64::from_polar(l[0] * l[1], theta), c(l[1..].iter().map(|x| x * x).sum())],
            ])
            .unwrap();
            assert!(rho.max_abs_diff(&expected).unwrap() < 1e-14);
        }
    }

    #[test]
    fn xy_pair_is_orthonormal() {
        let (x, y) = xy_vectors();
        assert!((x.norm() - 1.0).abs() < 1e-15);
        assert!((y.norm() - 1.0).abs() < 1e-15);
        assert!(inner(&x, &y).unwrap().norm() < 1e-15);
    }

    #[test]
    fn bipartite_families() {
        for b in [umeb_2x3_type1(), umeb_2x3_type2()] {
            assert!(gram_residual(&b) < 1e-12);
            for v in b.vectors() {
                let sp = schmidt_coefficients(v.ket(), &Bipartition::new(b.shape().clone(), &[0]).unwrap()).unwrap();
                for x in &sp.coefficients[..2] {
                    assert!((x - FRAC_1_SQRT_2).abs() < 1e-12);
                }
            }
        }
        let h = c(FRAC_1_SQRT_2);
        let phi0 = Ket::from_terms(shape(&[2, 3]), &[(&[0, 0], h), (&[1, 1], h)]).unwrap();
        assert_eq!(umeb_2x3_type1().vectors()[0].ket(), &phi0);
        let z = inner(umeb_2x3_type2().vectors()[0].ket(), &phi0).unwrap();
        assert!((z.norm() - 1.0 / 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bell_lift_to_three_qubits() {
        let sh = shape(&[2, 2]);
        let terms = (0..2).map(|l| Term { coefficient: FRAC_1_SQRT_2, factors: vec![qubit(l), qubit(l)] }).collect();
        let bell = DecomposedVector::from_terms("bell", &sh, Decomposition::per_site(terms)).unwrap();
        let base = LabeledBasis::new("bell", sh, vec![bell], vec![]).unwrap();
        let lifted = lift_umeb(&base, 2).unwrap();
        let h = c(FRAC_1_SQRT_2);
        let s3 = shape(&[2, 2, 2]);
        let e0 = Ket::from_terms(s3.clone(), &[(&[0, 0, 0], h), (&[1, 1, 1], h)]).unwrap();
        let e1 = Ket::from_terms(s3, &[(&[0, 0, 1], h), (&[1, 1, 0], h)]).unwrap();
        assert_eq!(lifted.kets(), vec![e0, e1]);
        assert_eq!(lifted.vectors()[1].label(), "bell,1");
    }

    #[test]
    fn lift_rejects_bad_inputs() {
        let b = umeb_2x3_type1();
        assert!(lift_umeb(&b, 2).is_err());
        let plain = LabeledBasis::new(
            "plain",
            b.shape().clone(),
            b.vectors().iter().map(|v| DecomposedVector::plain(v.label(), v.ket().clone())).collect(),
            vec![],
        )
        .unwrap();
        assert!(matches!(lift_umeb(&plain, 3), Err(Error::InvalidDecomposition(_))));
        let sh = shape(&[2, 3]);
        let uneven = Decomposition::per_site(vec![
            Term { coefficient: 0.8, factors: vec![qubit(0), qudit(3, 0)] },
            Term { coefficient: 0.6, factors: vec![qubit(1), qudit(3, 1)] },
        ]);
        let v = DecomposedVector::from_terms("v", &sh, uneven).unwrap();
        let base = LabeledBasis::new("u", sh, vec![v], vec![]).unwrap();
        assert!(matches!(lift_umeb(&base, 3), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn decomposition_validation() {
        let sh = shape(&[2, 3]);
        let ascending = Decomposition::per_site(vec![
            Term { coefficient: 0.6, factors: vec![qubit(0), qudit(3, 0)] },
            Term { coefficient: 0.8, factors: vec![qubit(1), qudit(3, 1)] },
        ]);
        assert!(DecomposedVector::from_terms("v", &sh, ascending).is_err());
        let overlapping = Decomposition::per_site(vec![
            Term { coefficient: 0.8, factors: vec![qubit(0), qudit(3, 0)] },
            Term { coefficient: 0.6, factors: vec![qubit(0), qudit(3, 1)] },
        ]);
        assert!(DecomposedVector::from_terms("v", &sh, overlapping).is_err());
        let good = Decomposition::per_site(vec![Term { coefficient: 1.0, factors: vec![qubit(0), qudit(3, 0)] }]);
        let wrong_ket = Ket::basis(sh, &[1, 1]).unwrap();
        assert!(DecomposedVector::with_terms("v", wrong_ket, good).is_err());
    }

    #[test]
    fn tripartite_examples() {
        let first = umeb_2x3x3_first();
        let h = c(FRAC_1_SQRT_2);
        let phi02 = Ket::from_terms(shape(&[2, 3, 3]), &[(&[0, 0, 2], h), (&[1, 1, 0], h)]).unwrap();
        assert_eq!(first.get("phi0,2").unwrap().ket(), &phi02);
        let second = umeb_2x3x3_second();
        let (x, y) = xy_vectors();
        let psi00: Vec<C64> = qubit(0)
            .kron(&x)
            .kron(&qudit(3, 0))
            .amps()
            .iter()
            .zip(qubit(1).kron(&y).kron(&qudit(3, 1)).amps())
            .map(|(a, b)| (a + b) * FRAC_1_SQRT_2)
            .collect();
        assert!(second.get("psi0,0").unwrap().ket().amps().iter().zip(&psi00).all(|(a, b)| (a - b).norm() < 1e-15));
        let z = inner(first.get("phi0,0").unwrap().ket(), second.get("psi0,0").unwrap().ket()).unwrap();
        let expected = C64::new(1.0, 1.0) / (2.0 * 3f64.sqrt());
        assert!((z - expected).norm() < 1e-15);
        assert!((z.norm() - 1.0 / 6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tripartite_predicate_split() {
        let g2 = EntanglementPredicate::GhzType { d: 2 };
        for b in [umeb_2x3x3_first(), umeb_2x3x3_second()] {
            for v in b.vectors() {
                assert!(is_maximally_entangled(v.ket(), &g2, 1e-12).unwrap().holds);
                let strict = is_maximally_entangled(v.ket(), &EntanglementPredicate::StrictDef1, 1e-8).unwrap();
                assert!(!strict.holds);
                let r = strict.residual_on("{2}|{1,3}").unwrap();
                assert!((r - 1.0 / 6f64.sqrt()).abs() < 1e-12, "{}: {r}", v.label());
            }
        }
    }

    #[test]
    fn every_generated_basis_is_orthonormal_and_reconstructs() {
        for b in all_bases() {
            assert!(gram_residual(&b) < 1e-12, "{}", b.name());
            for v in b.vectors() {
                let dec = v.decomposition().expect("generated vectors carry terms");
                let err = dec.reconstruct(b.shape()).unwrap().max_abs_diff(v.ket()).unwrap();
                assert!(err < 1e-12);
            }
        }
    }

    #[test]
    fn lifts_coincide_with_explicit_bases() {
        for (base, explicit) in [(umeb_2x3_type1(), umeb_2x3x3_first()), (umeb_2x3_type2(), umeb_2x3x3_second())] {
            let lifted = lift_umeb(&base, 3).unwrap();
            assert_eq!(lifted.len(), 12);
            for (a, b) in lifted.vectors().iter().zip(explicit.vectors()) {
                assert_eq!(a.label(), b.label());
                assert!(a.ket().max_abs_diff(b.ket()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn claims_round_trip() {
        for b in all_bases() {
            for claim in b.claims() {
                assert_eq!(&Claim::parse(&claim.name(), b.shape()).unwrap(), claim);
            }
        }
        assert!(Claim::parse("pretty", &shape(&[2, 2])).is_err());
        assert!(by_name("nope").is_err());
    }

    #[test]
    fn basis_invariants() {
        let sh = shape(&[2, 2]);
        let v = DecomposedVector::plain("a", Ket::basis(sh.clone(), &[0, 0]).unwrap());
        assert!(matches!(
            LabeledBasis::new("dup", sh.clone(), vec![v.clone(), v.clone()], vec![]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(LabeledBasis::new("empty", sh, vec![], vec![]), Err(Error::Empty)));
        let other = DecomposedVector::plain("b", Ket::basis(shape(&[2, 3]), &[0, 0]).unwrap());
        assert!(LabeledBasis::new("mixed", shape(&[2, 2]), vec![v, other], vec![]).is_err());
    }
}
