use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered subsystem dimensions of a composite space.
///
/// Flat indices are big-endian: in `2⊗3⊗3` the label `(i, j, l)` sits at
/// `9i + 3j + l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SystemShape {
    dims: Vec<usize>,
    total: usize,
}

impl SystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidShape { dims });
        }
        let total = dims.iter().product();
        Ok(SystemShape { dims, total })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Number of subsystems.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn min_dim(&self) -> usize {
        *self.dims.iter().min().expect("shape is nonempty")
    }

    /// Row-major stride of subsystem `site`.
    pub fn stride(&self, site: usize) -> usize {
        self.dims[site + 1..].iter().product()
    }

    pub fn flat_index(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} subsystems",
                labels.len(),
                self.dims.len()
            )));
        }
        let mut flat = 0;
        for (&label, &dim) in labels.iter().zip(&self.dims) {
            if label >= dim {
                return Err(Error::OutOfRange { index: label, bound: dim });
            }
            flat = flat * dim + label;
        }
        Ok(flat)
    }

    pub fn labels(&self, mut flat: usize) -> Vec<usize> {
        let mut labels = vec![0; self.dims.len()];
        for (slot, &dim) in labels.iter_mut().zip(&self.dims).rev() {
            *slot = flat % dim;
            flat /= dim;
        }
        labels
    }

    pub fn concat(&self, other: &SystemShape) -> SystemShape {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        SystemShape::new(dims).expect("concatenation of valid shapes")
    }
}

impl TryFrom<Vec<usize>> for SystemShape {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        SystemShape::new(dims)
    }
}

impl From<SystemShape> for Vec<usize> {
    fn from(shape: SystemShape) -> Self {
        shape.dims
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_endian_indexing() {
        let s = SystemShape::new(vec![2, 3, 3]).unwrap();
        assert_eq!(s.total(), 18);
        assert_eq!(s.flat_index(&[1, 2, 0]).unwrap(), 9 + 6);
        assert_eq!(s.labels(15), vec![1, 2, 0]);
        for flat in 0..18 {
            assert_eq!(s.flat_index(&s.labels(flat)).unwrap(), flat);
        }
        assert_eq!(s.stride(0), 9);
        assert_eq!(s.stride(2), 1);
    }

    #[test]
    fn rejects_trivial_dimensions() {
        assert!(SystemShape::new(vec![2, 1]).is_err());
        assert!(SystemShape::new(vec![]).is_err());
        assert!(SystemShape::new(vec![2, 2]).unwrap().flat_index(&[0, 2]).is_err());
    }
}
