use crate::qstate::Ket;
use crate::{Error, Result, C64};

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl Operator {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Operator { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Operator::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Operator { rows, cols, entries: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Operator::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Operator::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = C64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn scaled(&self, factor: C64) -> Operator {
        Operator {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn adjoint(&self) -> Operator {
        let mut out = Operator::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Operator::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product on raw amplitudes.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn apply_ket(&self, v: &Ket) -> Result<Ket> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("non-square operator on a ket".into()));
        }
        Ket::new(v.shape().clone(), self.apply(v.amps())?)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("operator sizes differ".into()));
        }
        Ok(Operator {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sqr().sqrt()
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        Ok(self.sub(other)?.entries.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `M − M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .and_then(|p| p.max_abs_diff(&Operator::identity(self.rows)))
                .is_ok_and(|d| d <= tol)
    }
}

/// Tensor product in the big-endian index convention.
///
/// Mixing kets and operators is ruled out by the type system.
pub trait Kron<Rhs = Self> {
    type Output;
    fn kron(&self, rhs: &Rhs) -> Self::Output;
}

impl Kron for Operator {
    type Output = Operator;

    fn kron(&self, rhs: &Operator) -> Operator {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Operator::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.entries[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }
}

impl Kron for Ket {
    type Output = Ket;

    fn kron(&self, rhs: &Ket) -> Ket {
        let amps = self.amps().iter().flat_map(|a| rhs.amps().iter().map(move |b| a * b)).collect();
        Ket::new(self.shape().concat(rhs.shape()), amps).expect("kron of valid kets")
    }
}

/// `(U₁⊗…⊗U_k)|v⟩`, applied one site at a time.
pub fn apply_local(ops: &[Operator], v: &Ket) -> Result<Ket> {
    let shape = v.shape();
    if ops.len() != shape.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} local operators for {} subsystems",
            ops.len(),
            shape.len()
        )));
    }
    let mut amps = v.amps().to_vec();
    let mut scratch = vec![C64::new(0.0, 0.0); amps.len()];
    for (site, (op, &dim)) in ops.iter().zip(shape.dims()).enumerate() {
        if op.rows != dim || op.cols != dim {
            return Err(Error::DimensionMismatch(format!(
                "site {site}: {}x{} operator on dimension {dim}",
                op.rows, op.cols
            )));
        }
        let inner = shape.stride(site);
        let outer = amps.len() / (dim * inner);
        for o in 0..outer {
            let base = o * dim * inner;
            for r in 0..inner {
                for i in 0..dim {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..dim {
                        acc += op.get(i, j) * amps[base + j * inner + r];
                    }
                    scratch[base + i * inner + r] = acc;
                }
            }
        }
        std::mem::swap(&mut amps, &mut scratch);
    }
    Ket::new(shape.clone(), amps)
}

/// `|v⟩⟨v|` for a unit ket.
pub fn density(v: &Ket) -> Result<Operator> {
    v.ensure_unit(1e-10)?;
    let n = v.len();
    let a = v.amps();
    let mut out = Operator::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.entries[i * n + j] = a[i] * a[j].conj();
        }
    }
    Ok(out)
}
