use crate::qstate::{inner, Ket, Operator};
use crate::{Error, Result, C64};

/// Default numerical-rank tolerance.
pub const RANK_TOL: f64 = 1e-10;
/// Default orthogonality tolerance.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// `G_ij = ⟨v_i|v_j⟩`.
pub fn gram_matrix(vs: &[Ket]) -> Result<Operator> {
    let first = vs.first().ok_or(Error::Empty)?;
    vs.iter().try_for_each(|v| first.check_shape(v))?;
    let n = vs.len();
    let mut g = Operator::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = inner(&vs[i], &vs[j])?;
            g.set(i, j, z);
            g.set(j, i, z.conj());
        }
    }
    Ok(g)
}

fn project_out(w: &mut [C64], basis: &[Vec<C64>]) {
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let p: C64 = q.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
            w.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
        }
    }
}

fn norm(w: &[C64]) -> f64 {
    w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormalizes `vs`, dropping vectors whose residual falls below
/// `tol` relative to their original norm.
fn orthonormalize(vs: &[Ket], tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vs {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v.amps().to_vec();
        project_out(&mut w, &basis);
        let n = norm(&w);
        if n > tol * scale.max(1.0) {
            w.iter_mut().for_each(|x| *x /= n);
            basis.push(w);
        }
    }
    basis
}

/// Numerical rank of a list of kets.
pub fn numerical_rank(vs: &[Ket], tol: f64) -> Result<usize> {
    let first = vs.first().ok_or(Error::Empty)?;
    vs.iter().try_for_each(|v| first.check_shape(v))?;
    Ok(orthonormalize(vs, tol).len())
}

/// Orthonormal basis of the orthogonal complement of `span(vs)` with the
/// default rank tolerance.
pub fn orthonormal_complement(vs: &[Ket]) -> Result<Vec<Ket>> {
    orthonormal_complement_with(vs, RANK_TOL)
}

/// Orthonormal complement with an explicit rank tolerance.
///
/// The complement is grown greedily from computational basis vectors: at
/// each step the candidate with the largest residual after projection is
/// accepted, so the result is well conditioned. Output length is
/// `total − rank`.
pub fn orthonormal_complement_with(vs: &[Ket], rank_tol: f64) -> Result<Vec<Ket>> {
    let first = vs.first().ok_or(Error::Empty)?;
    vs.iter().try_for_each(|v| first.check_shape(v))?;
    let shape = first.shape().clone();
    let total = shape.total();

    let mut basis = orthonormalize(vs, rank_tol);
    if basis.len() < vs.len() {
        return Err(Error::Dependent { rank: basis.len(), count: vs.len() });
    }
    let rank = basis.len();

    let mut complement: Vec<Vec<C64>> = Vec::with_capacity(total - rank);
    let mut used = vec![false; total];
    while rank + complement.len() < total {
        let mut best: Option<(usize, Vec<C64>, f64)> = None;
        for (k, _) in used.iter().enumerate().filter(|(_, &u)| !u) {
            let mut w = vec![C64::new(0.0, 0.0); total];
            w[k] = C64::new(1.0, 0.0);
            project_out(&mut w, &basis);
            let n = norm(&w);
            if best.as_ref().is_none_or(|(_, _, bn)| n > *bn) {
                best = Some((k, w, n));
            }
        }
        let (k, mut w, n) = best.expect("complement not yet full");
        used[k] = true;
        w.iter_mut().for_each(|x| *x /= n);
        basis.push(w.clone());
        complement.push(w);
    }

    complement.into_iter().map(|amps| Ket::new(shape.clone(), amps)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::SystemShape;
    use crate::qstate::testutil::random_ket;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn bell_family() -> Vec<Ket> {
        let s = SystemShape::new(vec![2, 3]).unwrap();
        vec![
            Ket::from_terms(s.clone(), &[(&[0, 0], c(H)), (&[1, 1], c(H))]).unwrap(),
            Ket::from_terms(s.clone(), &[(&[1, 0], c(H)), (&[0, 1], c(H))]).unwrap(),
            Ket::from_terms(s.clone(), &[(&[1, 0], C64::new(0.0, H)), (&[0, 1], C64::new(0.0, -H))]).unwrap(),
            Ket::from_terms(s, &[(&[0, 0], c(H)), (&[1, 1], c(-H))]).unwrap(),
        ]
    }

    #[test]
    fn gram_of_duplicates_is_rank_deficient() {
        let v = bell_family();
        let dup = vec![v[0].clone(), v[0].clone()];
        let g = gram_matrix(&dup).unwrap();
        assert!((g.get(0, 1) - c(1.0)).norm() < 1e-15);
        assert_eq!(numerical_rank(&dup, RANK_TOL).unwrap(), 1);
        assert!(matches!(gram_matrix(&[]), Err(Error::Empty)));
    }

    #[test]
    fn complement_of_bell_family_in_2x3() {
        let vs = bell_family();
        let comp = orthonormal_complement(&vs).unwrap();
        assert_eq!(comp.len(), 2);
        let s = vs[0].shape().clone();
        // span{|02⟩, |12⟩}: all weight on the j = 2 slot
        for k in &comp {
            for flat in 0..6 {
                if s.labels(flat)[1] != 2 {
                    assert!(k.amps()[flat].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn dependent_input_reports_rank() {
        let mut vs = bell_family();
        vs.push(vs[0].scaled(c(2.0)));
        assert_eq!(orthonormal_complement(&vs), Err(Error::Dependent { rank: 4, count: 5 }));
    }

    #[test]
    fn complement_spans_remainder_of_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = SystemShape::new(vec![2, 3, 3]).unwrap();
        for m in [1, 5, 12, 17] {
            let vs: Vec<Ket> = (0..m).map(|_| random_ket(&s, &mut rng)).collect();
            let comp = orthonormal_complement(&vs).unwrap();
            assert_eq!(comp.len(), 18 - m);
            for k in &comp {
                for v in &vs {
                    assert!(inner(k, v).unwrap().norm() < ORTHOGONALITY_TOL);
                }
            }
            let g = gram_matrix(&comp).unwrap();
            assert!(g.max_abs_diff(&Operator::identity(comp.len())).unwrap() < ORTHOGONALITY_TOL);
            let mut all = vs.clone();
            all.extend(comp);
            assert_eq!(numerical_rank(&all, RANK_TOL).unwrap(), 18);
        }
    }
}
