//! Dense complex eigenvalues: Householder reduction to Hessenberg form
//! followed by single-shift QR with Wilkinson shifts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Upper Hessenberg matrix unitarily similar to `a`.
pub fn hessenberg(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- (I - 2vv^H/|v|^2) H (I - 2vv^H/|v|^2)
        for j in 0..n {
            let mut dot = zero();
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + idx, j)];
            }
            let f = dot * (2.0 / vnorm2);
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= vi * f;
            }
        }
        for i in 0..n {
            let mut dot = zero();
            for (idx, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + idx)] * vi;
            }
            let f = dot * (2.0 / vnorm2);
            for (idx, vi) in v.iter().enumerate() {
                h[(i, k + 1 + idx)] -= f * vi.conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = zero();
        }
    }
    h
}

/// Rotation (c, s) with c real such that [c s; -conj(s) c] (a, b)^T = (r, 0)^T.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let norm = a.norm().hypot(b.norm());
    if norm == 0.0 {
        return (1.0, zero());
    }
    if a.norm() == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let c = a.norm() / norm;
    let s = (a / a.norm()) * b.conj() / norm;
    (c, s)
}

/// Eigenvalue of the trailing 2x2 block closer to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a square complex matrix, unordered.
pub fn eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Size(format!("eigenvalues need a square matrix, got {}x{}", n, a.ncols())));
    }
    if a.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Eigensolver("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(a);
    let scale = h.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut hi = n - 1;
    let mut iter = 0;
    let mut rots = Vec::with_capacity(n);
    while hi > 0 {
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let reference = if diag == 0.0 { scale } else { diag };
            if sub <= f64::EPSILON * reference {
                h[(lo, lo - 1)] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::Eigensolver(format!("QR iteration stalled at index {hi}")));
        }
        let mu = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        rots.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = zero();
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            for i in lo..=(k + 1) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + s.conj() * y;
                h[(i, k + 1)] = -s * x + y * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// Unit eigenvector of `a` for an eigenvalue estimate `lambda` by inverse
/// iteration with a slightly perturbed shift.
pub fn inverse_iteration(a: &DMatrix<Complex64>, lambda: Complex64) -> Result<DVector<Complex64>> {
    let n = a.nrows();
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let shift = lambda + Complex64::new(1e-13 * scale, 1e-13 * scale);
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.lu();
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.3 - 0.05 * i as f64));
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..4 {
        let next = lu
            .solve(&v)
            .ok_or_else(|| Error::Singular("inverse iteration hit an exactly singular shift".into()))?;
        let norm = next.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Eigensolver("inverse iteration diverged".into()));
        }
        v = next / Complex64::new(norm, 0.0);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn matched_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
        let mut used = vec![false; b.len()];
        let mut worst: f64 = 0.0;
        for x in a {
            let (j, d) = b
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, y)| (j, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            used[j] = true;
            worst = worst.max(d);
        }
        worst
    }

    #[test]
    fn hessenberg_preserves_spectrum_and_shape() {
        let a = random_matrix(7, 1);
        let h = hessenberg(&a);
        for i in 2..7 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], zero());
            }
        }
        assert!((a.trace() - h.trace()).norm() < 1e-13);
        assert!((a.norm() - h.norm()).abs() < 1e-13);
    }

    #[test]
    fn agrees_with_reference_schur() {
        for (n, seed) in [(1, 3), (2, 4), (5, 5), (12, 6), (30, 7)] {
            let a = random_matrix(n, seed);
            let ours = eigenvalues(&a).unwrap();
            let reference = nalgebra::Schur::new(a.clone()).eigenvalues().unwrap();
            let theirs: Vec<Complex64> = reference.iter().copied().collect();
            assert!(matched_distance(&ours, &theirs) < 1e-11, "n = {n}");
        }
    }

    #[test]
    fn triangular_and_defective_inputs() {
        let mut a = DMatrix::from_element(3, 3, zero());
        a[(0, 0)] = Complex64::new(1.0, 2.0);
        a[(1, 1)] = Complex64::new(-3.0, 0.0);
        a[(2, 2)] = Complex64::new(0.5, 0.5);
        a[(0, 2)] = Complex64::new(4.0, 0.0);
        let mut e = eigenvalues(&a).unwrap();
        e.sort_by(|x, y| x.re.total_cmp(&y.re));
        assert_eq!(e[0], Complex64::new(-3.0, 0.0));
        // Jordan block: eigenvalue 2 twice.
        let j = DMatrix::from_row_slice(2, 2, &[Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0), zero(), Complex64::new(2.0, 0.0)]);
        for v in eigenvalues(&j).unwrap() {
            assert!((v - 2.0).norm() < 1e-12);
        }
        // Rotation matrix: +-i.
        let r = DMatrix::from_row_slice(2, 2, &[zero(), Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), zero()]);
        let mut e = eigenvalues(&r).unwrap();
        e.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((e[0] + Complex64::i()).norm() < 1e-14 && (e[1] - Complex64::i()).norm() < 1e-14);
    }

    #[test]
    fn inverse_iteration_residual() {
        let a = random_matrix(6, 9);
        for lambda in eigenvalues(&a).unwrap() {
            let v = inverse_iteration(&a, lambda).unwrap();
            let residual = (&a * &v - &v * lambda).norm();
            assert!(residual < 1e-10, "{residual}");
        }
    }
}
