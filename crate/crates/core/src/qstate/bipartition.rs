use serde::Serialize;

use crate::qstate::{Ket, Operator, SystemShape};
use crate::{Error, Result, C64};

/// A split of the subsystems into `part_a` and its complement.
///
/// Subsystem indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Bipartition {
    #[serde(skip)]
    shape: SystemShape,
    part_a: Vec<usize>,
}

impl Bipartition {
    pub fn new(shape: SystemShape, part_a: &[usize]) -> Result<Self> {
        let mut part: Vec<usize> = part_a.to_vec();
        part.sort_unstable();
        part.dedup();
        let k = shape.len();
        if part.is_empty() || part.len() != part_a.len() || part.len() >= k || part.iter().any(|&i| i >= k) {
            return Err(Error::InvalidBipartition { dims: shape.dims().to_vec(), part_a: part_a.to_vec() });
        }
        Ok(Bipartition { shape, part_a: part })
    }

    /// Every unordered bipartition once, oriented so `part_a` is the side
    /// with the smaller Hilbert-space dimension. Ties keep the side that
    /// contains the lowest-numbered subsystem.
    pub fn all_cuts(shape: &SystemShape) -> Vec<Bipartition> {
        let k = shape.len();
        let full = (1usize << k) - 1;
        let mut cuts = Vec::new();
        for mask in 1..full {
            let complement = full ^ mask;
            // each unordered pair once: the mask containing subsystem 0
            if mask & 1 == 0 {
                continue;
            }
            let side = |m: usize| -> Vec<usize> { (0..k).filter(|i| m >> i & 1 == 1).collect() };
            let cut = Bipartition { shape: shape.clone(), part_a: side(mask) };
            let chosen = if cut.dim_a() <= cut.dim_b() {
                cut
            } else {
                Bipartition { shape: shape.clone(), part_a: side(complement) }
            };
            cuts.push(chosen);
        }
        cuts.sort_by(|a, b| (a.part_a.len(), &a.part_a).cmp(&(b.part_a.len(), &b.part_a)));
        cuts
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn part_a(&self) -> &[usize] {
        &self.part_a
    }

    pub fn part_b(&self) -> Vec<usize> {
        (0..self.shape.len()).filter(|i| !self.part_a.contains(i)).collect()
    }

    pub fn dim_a(&self) -> usize {
        self.part_a.iter().map(|&i| self.shape.dims()[i]).product()
    }

    pub fn dim_b(&self) -> usize {
        self.shape.total() / self.dim_a()
    }

    /// The same cut, oriented onto the smaller-dimension side (ties keep
    /// `part_a`).
    pub fn reduced_side(&self) -> Bipartition {
        if self.dim_a() <= self.dim_b() {
            self.clone()
        } else {
            Bipartition { shape: self.shape.clone(), part_a: self.part_b() }
        }
    }

    /// Human-readable label with one-based subsystem numbers, e.g. `{2}|{1,3}`.
    pub fn label(&self) -> String {
        let fmt = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        format!("{{{}}}|{{{}}}", fmt(&self.part_a), fmt(&self.part_b()))
    }
}

/// Precomputed index map from flat amplitudes to the `dim_a × dim_b`
/// coefficient matrix of a cut.
#[derive(Debug, Clone)]
pub struct CutMap {
    dim_a: usize,
    dim_b: usize,
    /// `slots[flat] = a * dim_b + b`
    slots: Vec<usize>,
}

impl CutMap {
    pub fn new(cut: &Bipartition) -> Self {
        let shape = cut.shape();
        let part_b = cut.part_b();
        let dims = shape.dims();
        let dim_a = cut.dim_a();
        let dim_b = cut.dim_b();
        let slots = (0..shape.total())
            .map(|flat| {
                let labels = shape.labels(flat);
                let a = cut.part_a().iter().fold(0, |acc, &i| acc * dims[i] + labels[i]);
                let b = part_b.iter().fold(0, |acc, &i| acc * dims[i] + labels[i]);
                a * dim_b + b
            })
            .collect();
        CutMap { dim_a, dim_b, slots }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Grouped coefficient matrix, row-major `dim_a × dim_b`.
    pub fn coefficients(&self, amps: &[C64]) -> Vec<C64> {
        let mut m = vec![C64::new(0.0, 0.0); amps.len()];
        for (flat, &slot) in self.slots.iter().enumerate() {
            m[slot] = amps[flat];
        }
        m
    }

    /// `Tr_B |v⟩⟨v|` as the Gram matrix `M M†` of the coefficient matrix.
    pub fn reduce(&self, amps: &[C64]) -> Operator {
        let m = self.coefficients(amps);
        let (da, db) = (self.dim_a, self.dim_b);
        let mut rho = Operator::zeros(da, da);
        for i in 0..da {
            let ri = &m[i * db..(i + 1) * db];
            for j in i..da {
                let rj = &m[j * db..(j + 1) * db];
                let z: C64 = ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum();
                rho.set(i, j, z);
                rho.set(j, i, z.conj());
            }
        }
        rho
    }
}

/// Reduced state `ρ_A = Tr_Ā |v⟩⟨v|` on `cut.part_a()`.
pub fn partial_trace(v: &Ket, cut: &Bipartition) -> Result<Operator> {
    if v.shape() != cut.shape() {
        return Err(Error::ShapeMismatch { left: v.shape().dims().to_vec(), right: cut.shape().dims().to_vec() });
    }
    v.ensure_unit(1e-10)?;
    Ok(CutMap::new(cut).reduce(v.amps()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::testutil::random_ket;
    use crate::qstate::hermitian_eigenvalues;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn cut_enumeration() {
        let s = SystemShape::new(vec![2, 3, 3]).unwrap();
        let cuts = Bipartition::all_cuts(&s);
        let parts: Vec<_> = cuts.iter().map(|c| c.part_a().to_vec()).collect();
        assert_eq!(parts, vec![vec![0], vec![1], vec![2]]);
        let s = SystemShape::new(vec![2, 3]).unwrap();
        assert_eq!(Bipartition::all_cuts(&s).len(), 1);
        let s = SystemShape::new(vec![2, 2, 2, 2]).unwrap();
        // 4 singletons + 3 balanced pairs
        assert_eq!(Bipartition::all_cuts(&s).len(), 7);
        let s = SystemShape::new(vec![3, 2]).unwrap();
        assert_eq!(Bipartition::all_cuts(&s)[0].part_a(), &[1]);
    }

    #[test]
    fn invalid_bipartitions() {
        let s = SystemShape::new(vec![2, 2]).unwrap();
        assert!(Bipartition::new(s.clone(), &[]).is_err());
        assert!(Bipartition::new(s.clone(), &[0, 1]).is_err());
        assert!(Bipartition::new(s.clone(), &[2]).is_err());
        assert!(Bipartition::new(s, &[0, 0]).is_err());
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let s = SystemShape::new(vec![2, 2]).unwrap();
        let v = Ket::basis(s.clone(), &[0, 0]).unwrap();
        let rho = partial_trace(&v, &Bipartition::new(s, &[0]).unwrap()).unwrap();
        assert_eq!(rho, Operator::diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn ghz_reduces_to_maximally_mixed() {
        let s = SystemShape::new(vec![2, 2, 2]).unwrap();
        let v = Ket::from_terms(s.clone(), &[(&[0, 0, 0], c(H)), (&[1, 1, 1], c(H))]).unwrap();
        let rho = partial_trace(&v, &Bipartition::new(s, &[0]).unwrap()).unwrap();
        assert!(rho.max_abs_diff(&Operator::diagonal(&[0.5, 0.5])).unwrap() < 1e-15);
    }

    #[test]
    fn middle_qutrit_of_embedded_ghz() {
        let s = SystemShape::new(vec![2, 3, 3]).unwrap();
        let v = Ket::from_terms(s.clone(), &[(&[0, 0, 0], c(H)), (&[1, 1, 1], c(H))]).unwrap();
        let rho = partial_trace(&v, &Bipartition::new(s, &[1]).unwrap()).unwrap();
        assert!(rho.max_abs_diff(&Operator::diagonal(&[0.5, 0.5, 0.0])).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_shape_mismatch() {
        let v = Ket::basis(SystemShape::new(vec![2, 2]).unwrap(), &[0, 0]).unwrap();
        let cut = Bipartition::new(SystemShape::new(vec![2, 3]).unwrap(), &[0]).unwrap();
        assert!(matches!(partial_trace(&v, &cut), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn trace_and_schmidt_symmetry_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dims in [vec![2, 3], vec![2, 2, 2], vec![2, 3, 3], vec![3, 2, 2, 2]] {
            let s = SystemShape::new(dims).unwrap();
            for _ in 0..20 {
                let v = random_ket(&s, &mut rng);
                for cut in Bipartition::all_cuts(&s) {
                    let ra = partial_trace(&v, &cut).unwrap();
                    let flipped = Bipartition::new(s.clone(), &cut.part_b()).unwrap();
                    let rb = partial_trace(&v, &flipped).unwrap();
                    assert!((ra.trace() - c(1.0)).norm() < 1e-12);
                    assert!(ra.is_hermitian(1e-15));
                    let ea = hermitian_eigenvalues(&ra).unwrap();
                    let eb = hermitian_eigenvalues(&rb).unwrap();
                    assert!(ea.iter().all(|&e| e > -1e-12));
                    for (x, y) in ea.iter().zip(&eb) {
                        assert!((x - y).abs() < 1e-10);
                    }
                    assert!(eb[ea.len()..].iter().all(|e| e.abs() < 1e-10));
                }
            }
        }
    }

    #[test]
    fn labels_are_one_based() {
        let s = SystemShape::new(vec![2, 3, 3]).unwrap();
        assert_eq!(Bipartition::new(s, &[1]).unwrap().label(), "{2}|{1,3}");
    }
}
