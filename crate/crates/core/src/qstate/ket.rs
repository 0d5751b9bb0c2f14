use crate::qstate::SystemShape;
use crate::{Error, Result, C64};

/// Amplitude vector over a [`SystemShape`]. Not necessarily normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    shape: SystemShape,
    amps: Vec<C64>,
}

impl Ket {
    pub fn new(shape: SystemShape, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != shape.total() {
            return Err(Error::LengthMismatch { expected: shape.total(), got: amps.len() });
        }
        if let Some(index) = amps.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Ket { shape, amps })
    }

    pub fn zero(shape: SystemShape) -> Self {
        let amps = vec![C64::new(0.0, 0.0); shape.total()];
        Ket { shape, amps }
    }

    /// Computational basis vector `|labels⟩`.
    pub fn basis(shape: SystemShape, labels: &[usize]) -> Result<Self> {
        let index = shape.flat_index(labels)?;
        let mut ket = Ket::zero(shape);
        ket.amps[index] = C64::new(1.0, 0.0);
        Ok(ket)
    }

    /// Builds a ket from `(labels, amplitude)` pairs.
    pub fn from_terms(shape: SystemShape, terms: &[(&[usize], C64)]) -> Result<Self> {
        let mut ket = Ket::zero(shape);
        for (labels, amp) in terms {
            let index = ket.shape.flat_index(labels)?;
            ket.amps[index] += amp;
        }
        Ok(ket)
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn ensure_unit(&self, tol: f64) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() <= tol {
            Ok(())
        } else {
            Err(Error::NotUnit { norm })
        }
    }

    /// Rescales to unit norm; rejects vectors with norm at most `1e-6`.
    pub fn normalized(&self) -> Result<Ket> {
        let norm = self.norm();
        if norm <= 1e-6 {
            return Err(Error::Degenerate { norm });
        }
        Ok(self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Ket {
        Ket { shape: self.shape.clone(), amps: self.amps.iter().map(|z| z * factor).collect() }
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &Ket) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Ket) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    pub(crate) fn check_shape(&self, other: &Ket) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                left: self.shape.dims().to_vec(),
                right: other.shape.dims().to_vec(),
            });
        }
        Ok(())
    }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner(a: &Ket, b: &Ket) -> Result<C64> {
    a.check_shape(b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}
