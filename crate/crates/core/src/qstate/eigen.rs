use crate::qstate::Operator;
use crate::{Error, Result, C64};

/// Largest matrix accepted by [`hermitian_eigenvalues`].
pub const EIGEN_SIZE_LIMIT: usize = 32;

const HERMITIAN_TOL: f64 = 1e-10;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix in descending order.
///
/// Cyclic complex Jacobi: each rotation first removes the phase of the pivot
/// `a_pq` and then applies a real plane rotation zeroing it. Sweeps continue
/// until the off-diagonal Frobenius norm drops below `1e-13`.
pub fn hermitian_eigenvalues(m: &Operator) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n > EIGEN_SIZE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: EIGEN_SIZE_LIMIT });
    }
    let deviation = m.hermiticity_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }

    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    let mut a: Vec<C64> = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
        }
    }

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) < OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, n, p, q);
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    // phase = e^{iφ} with a_pq = r e^{iφ}
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane; A ← G† A G.
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * g_pp + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::testutil::random_unitary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_inputs() {
        let eig = hermitian_eigenvalues(&Operator::diagonal(&[1.0 / 3.0; 3])).unwrap();
        assert!(eig.iter().all(|e| (e - 1.0 / 3.0).abs() < 1e-15));
        let eig = hermitian_eigenvalues(&Operator::diagonal(&[0.5, 0.0, 0.5])).unwrap();
        assert_eq!(eig, vec![0.5, 0.5, 0.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = Operator::from_rows(&[
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eigenvalues(&y).unwrap();
        assert!((eig[0] - 1.0).abs() < 1e-14 && (eig[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn recovers_spectrum_of_rotated_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3, 6, 9, 16] {
            for _ in 0..10 {
                let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
                let u = random_unitary(n, &mut rng);
                let m = u.matmul(&Operator::diagonal(&d)).unwrap().matmul(&u.adjoint()).unwrap();
                let eig = hermitian_eigenvalues(&m).unwrap();
                d.sort_by(|x, y| y.total_cmp(x));
                for (e, x) in eig.iter().zip(&d) {
                    assert!((e - x).abs() < 1e-10, "{eig:?} vs {d:?}");
                }
                let tr: f64 = eig.iter().sum();
                assert!((tr - m.trace().re).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_and_oversized() {
        let m = Operator::from_rows(&[
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            hermitian_eigenvalues(&Operator::identity(33)),
            Err(Error::TooLarge { .. })
        ));
    }
}
