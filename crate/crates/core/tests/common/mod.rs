//! Brute-force reference computations shared by the integration tests.
//! Everything here works on raw amplitude slices with explicit index loops
//! and does not call into the library's linear algebra.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Mixed-radix digits of `flat`, most significant first.
pub fn digits(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = flat % dims[k];
        flat /= dims[k];
    }
    out
}

fn subindex(labels: &[usize], sites: &[usize], dims: &[usize]) -> usize {
    sites.iter().fold(0, |acc, &s| acc * dims[s] + labels[s])
}

/// `Tr_B |ψ⟩⟨ψ|` for the sites in `a`, as a dense row-major matrix.
pub fn reduced_state(psi: &[C64], dims: &[usize], a: &[usize]) -> (usize, Vec<C64>) {
    let b: Vec<usize> = (0..dims.len()).filter(|s| !a.contains(s)).collect();
    let da: usize = a.iter().map(|&s| dims[s]).product();
    let db: usize = b.iter().map(|&s| dims[s]).product();
    let mut m = vec![C64::new(0.0, 0.0); da * db];
    for (flat, amp) in psi.iter().enumerate() {
        let l = digits(flat, dims);
        m[subindex(&l, a, dims) * db + subindex(&l, &b, dims)] = *amp;
    }
    let mut rho = vec![C64::new(0.0, 0.0); da * da];
    for i in 0..da {
        for j in 0..da {
            rho[i * da + j] = (0..db).map(|k| m[i * db + k] * m[j * db + k].conj()).sum();
        }
    }
    (da, rho)
}

/// Every nonempty proper subset of sites that contains site 0, one per
/// unordered bipartition.
pub fn cuts(n: usize) -> Vec<Vec<usize>> {
    (1..(1usize << n) - 1)
        .filter(|mask| mask & 1 == 1)
        .map(|mask| (0..n).filter(|s| mask >> s & 1 == 1).collect())
        .collect()
}

/// `‖ρ − I/d‖_F` on the cut `a`.
pub fn uniform_residual(psi: &[C64], dims: &[usize], a: &[usize]) -> f64 {
    let (d, rho) = reduced_state(psi, dims, a);
    let b: Vec<usize> = (0..dims.len()).filter(|s| !a.contains(s)).collect();
    let db: usize = b.iter().map(|&s| dims[s]).product();
    // The smaller side carries the nontrivial condition.
    if db < d {
        return uniform_residual(psi, dims, &b);
    }
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 / d as f64 } else { 0.0 };
            s += (rho[i * d + j] - target).norm_sqr();
        }
    }
    s.sqrt()
}

/// Sum over all bipartitions of `‖ρ − I/d_min‖²`.
pub fn strict_defect(psi: &[C64], dims: &[usize]) -> f64 {
    cuts(dims.len()).iter().map(|a| uniform_residual(psi, dims, a).powi(2)).sum()
}

/// Sum over all bipartitions of `‖ρ² − ρ/d‖²`.
pub fn ghz_defect(psi: &[C64], dims: &[usize], d: usize) -> f64 {
    let mut total = 0.0;
    for a in cuts(dims.len()) {
        let (n, rho) = reduced_state(psi, dims, &a);
        for i in 0..n {
            for j in 0..n {
                let sq: C64 = (0..n).map(|k| rho[i * n + k] * rho[k * n + j]).sum();
                total += (sq - rho[i * n + j] / d as f64).norm_sqr();
            }
        }
    }
    total
}

/// Cut defect on the set `a` whose dimension equals `d`: `‖ρ_A − I/d‖²`.
pub fn cut_defect_full_rank(psi: &[C64], dims: &[usize], a: &[usize]) -> f64 {
    let (d, rho) = reduced_state(psi, dims, a);
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 / d as f64 } else { 0.0 };
            s += (rho[i * d + j] - target).norm_sqr();
        }
    }
    s
}

pub fn gaussian_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// Projects `v` onto the orthogonal complement of the orthonormal `basis`
/// and normalizes.
pub fn project_out(mut v: Vec<C64>, basis: &[Vec<C64>]) -> Vec<C64> {
    for _ in 0..2 {
        for b in basis {
            let c = inner(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let n = norm(&v);
    v.iter().map(|x| x / n).collect()
}

/// Orthonormal basis of the complement of `basis` by Gram-Schmidt over the
/// computational basis.
pub fn complement_frame(basis: &[Vec<C64>], total: usize) -> Vec<Vec<C64>> {
    let mut span: Vec<Vec<C64>> = basis.to_vec();
    let mut frame = Vec::new();
    for k in 0..total {
        let mut e = vec![C64::new(0.0, 0.0); total];
        e[k] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &span {
                let c = inner(b, &e);
                for (x, y) in e.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&e);
        if n > 1e-6 {
            let u: Vec<C64> = e.iter().map(|x| x / n).collect();
            span.push(u.clone());
            frame.push(u);
        }
    }
    frame
}

pub fn max_gram_residual(vs: &[Vec<C64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner(a, b) - target).norm());
        }
    }
    worst
}
