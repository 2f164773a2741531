use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

use super::matrix::QuaternionMatrix;

/// Relative distance below which two eigenvalues count as equal.
const DEGENERACY_TOL: f64 = 1e-8;
/// Relative residual above which conjugate pairing is reported as failed.
const PAIRING_TOL: f64 = 1e-6;
/// Relative column norm below which QR declares the input singular.
const QR_SINGULAR_TOL: f64 = 1e-10;

fn lexicographic(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// The partner (-conj(b), conj(a)) of a vector (a, b) of interleaved pairs:
/// the second column of the quaternion column whose first column is `v`.
fn partner(v: &DVector<Complex64>) -> DVector<Complex64> {
    let mut w = DVector::zeros(v.len());
    for p in 0..v.len() / 2 {
        w[2 * p] = -v[2 * p + 1].conj();
        w[2 * p + 1] = v[2 * p].conj();
    }
    w
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Groups a spectrum that should be closed under conjugation into pairs
/// (greedy, smallest |l_i - conj(l_j)| first) and returns one representative
/// per pair in the closed upper half-plane, sorted lexicographically, with
/// the largest pairing residual.
pub fn pair_conjugates(spectrum: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    if spectrum.len() % 2 != 0 {
        return Err(Error::Size(format!("odd spectrum length {}", spectrum.len())));
    }
    let n = spectrum.len();
    let mut candidates = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            candidates.push(((spectrum[i] - spectrum[j].conj()).norm(), i, j));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut used = vec![false; n];
    let mut reps = Vec::with_capacity(n / 2);
    let mut residual: f64 = 0.0;
    for (d, i, j) in candidates {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        residual = residual.max(d);
        let mid = (spectrum[i] + spectrum[j].conj()) * 0.5;
        reps.push(Complex64::new(mid.re, mid.im.abs()));
        if reps.len() == n / 2 {
            break;
        }
    }
    reps.sort_by(lexicographic);
    Ok((reps, residual))
}

/// The N eigenvalues of a quaternion matrix in the closed upper half-plane,
/// sorted lexicographically.
pub fn quat_eigenvalues(m: &QuaternionMatrix) -> Result<Vec<Complex64>> {
    m.dim()?;
    let spectrum = linalg::eigenvalues(m.rep())?;
    let (reps, residual) = pair_conjugates(&spectrum)?;
    let scale = m.rep().norm().max(f64::MIN_POSITIVE);
    if residual > PAIRING_TOL * scale {
        return Err(Error::Eigensolver(format!(
            "conjugate pairing residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(reps)
}

/// Q R factorization with Q having orthonormal quaternion columns and R
/// upper triangular with real positive diagonal. M may be tall.
pub fn quat_qr(m: &QuaternionMatrix) -> Result<(QuaternionMatrix, QuaternionMatrix)> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows < cols {
        return Err(Error::Size(format!("QR needs rows >= cols, got {rows}x{cols}")));
    }
    let a = m.rep();
    let scale = (0..cols)
        .map(|j| a.column(2 * j).norm())
        .fold(0.0, f64::max);
    let mut q = DMatrix::<Complex64>::zeros(2 * rows, 2 * cols);
    for j in 0..cols {
        let mut v: DVector<Complex64> = a.column(2 * j).into_owned();
        // Two passes of modified Gram-Schmidt for stability.
        for _ in 0..2 {
            for c in 0..2 * j {
                let qc = q.column(c);
                let proj = qc.dotc(&v);
                v -= qc * proj;
            }
        }
        let norm = v.norm();
        if !(norm > QR_SINGULAR_TOL * scale) {
            return Err(Error::Singular(format!("column {j} collapsed during orthogonalization")));
        }
        v /= Complex64::new(norm, 0.0);
        let w = partner(&v);
        q.set_column(2 * j, &v);
        q.set_column(2 * j + 1, &w);
    }
    let mut r = q.adjoint() * a;
    for bj in 0..cols {
        for bi in bj + 1..cols {
            for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                r[(2 * bi + dr, 2 * bj + dc)] = Complex64::new(0.0, 0.0);
            }
        }
        // The diagonal block is the real column norm.
        let d = r[(2 * bj, 2 * bj)].re;
        r[(2 * bj, 2 * bj)] = Complex64::new(d, 0.0);
        r[(2 * bj + 1, 2 * bj + 1)] = Complex64::new(d, 0.0);
        r[(2 * bj, 2 * bj + 1)] = Complex64::new(0.0, 0.0);
        r[(2 * bj + 1, 2 * bj)] = Complex64::new(0.0, 0.0);
    }
    Ok((QuaternionMatrix::from_rep_unchecked(q), QuaternionMatrix::from_rep_unchecked(r)))
}

/// Unitary whose first column pair is (v, partner(v)), completed by
/// orthogonalizing standard basis pairs.
fn complete_unitary(v: &DVector<Complex64>) -> DMatrix<Complex64> {
    let n2 = v.len();
    let mut cols: Vec<DVector<Complex64>> = vec![v.clone(), partner(v)];
    let mut e = 0;
    while cols.len() < n2 {
        let mut u = DVector::<Complex64>::zeros(n2);
        u[2 * e] = Complex64::new(1.0, 0.0);
        e += 1;
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&u);
                u -= c * proj;
            }
        }
        let norm = u.norm();
        // A basis pair nearly inside the current span is skipped; at least
        // one pair per step has norm >= 1/sqrt(dim).
        if norm < 0.5 / (n2 as f64).sqrt() {
            continue;
        }
        u /= Complex64::new(norm, 0.0);
        let w = partner(&u);
        cols.push(u);
        cols.push(w);
    }
    DMatrix::from_columns(&cols)
}

/// Schur form M = U S U^H with U unitary and S upper triangular with
/// diagonal blocks diag(z, conj(z)), z in the closed upper half-plane in
/// lexicographic order.
pub fn quat_schur(m: &QuaternionMatrix) -> Result<(QuaternionMatrix, QuaternionMatrix)> {
    let n = m.dim()?;
    let eig = quat_eigenvalues(m)?;
    let scale = m.rep().norm().max(f64::MIN_POSITIVE);
    for w in eig.windows(2) {
        if (w[0] - w[1]).norm() < DEGENERACY_TOL * scale {
            return Err(Error::Degenerate(format!("eigenvalues {} and {} coincide", w[0], w[1])));
        }
    }
    let mut s = m.rep().clone();
    let mut u = DMatrix::<Complex64>::identity(2 * n, 2 * n);
    for (step, &lambda) in eig.iter().enumerate() {
        let off = 2 * step;
        let size = 2 * n - off;
        let block = s.view((off, off), (size, size)).into_owned();
        let v = linalg::inverse_iteration(&block, lambda)?;
        let w = complete_unitary(&v);
        let mut full = DMatrix::<Complex64>::identity(2 * n, 2 * n);
        full.view_mut((off, off), (size, size)).copy_from(&w);
        s = full.adjoint() * s * &full;
        u *= &full;
        for i in off + 2..2 * n {
            s[(i, off)] = Complex64::new(0.0, 0.0);
            s[(i, off + 1)] = Complex64::new(0.0, 0.0);
        }
    }
    for b in 0..n {
        let z = s[(2 * b, 2 * b)];
        s[(2 * b, 2 * b + 1)] = Complex64::new(0.0, 0.0);
        s[(2 * b + 1, 2 * b)] = Complex64::new(0.0, 0.0);
        s[(2 * b + 1, 2 * b + 1)] = z.conj();
        for bj in 0..b {
            for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                s[(2 * b + dr, 2 * bj + dc)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    // The leading entry of each block is z or conj(z); fix the half-plane.
    for b in 0..n {
        if s[(2 * b, 2 * b)].im < 0.0 {
            // Swap the two columns and rows of the pair: conjugate by the
            // quaternion j, which maps diag(z, conj z) to diag(conj z, z).
            let mut jmat = DMatrix::<Complex64>::identity(2 * n, 2 * n);
            jmat[(2 * b, 2 * b)] = Complex64::new(0.0, 0.0);
            jmat[(2 * b + 1, 2 * b + 1)] = Complex64::new(0.0, 0.0);
            jmat[(2 * b, 2 * b + 1)] = Complex64::new(-1.0, 0.0);
            jmat[(2 * b + 1, 2 * b)] = Complex64::new(1.0, 0.0);
            s = jmat.adjoint() * s * &jmat;
            u *= &jmat;
        }
    }
    Ok((QuaternionMatrix::from_rep_unchecked(u), QuaternionMatrix::from_rep_unchecked(s)))
}

/// Simultaneous triangularization M_a = U_a S_a U_{a+1}^H (U_{n+1} = U_1).
#[derive(Clone, Debug)]
pub struct GeneralizedSchur {
    pub u: Vec<QuaternionMatrix>,
    pub s: Vec<QuaternionMatrix>,
}

impl GeneralizedSchur {
    /// Products of the diagonal entries: the eigenvalues of M_1 ... M_n.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let dim = self.s[0].rows();
        (0..dim)
            .map(|b| {
                self.s
                    .iter()
                    .map(|s| s.rep()[(2 * b, 2 * b)])
                    .fold(Complex64::new(1.0, 0.0), |acc, z| acc * z)
            })
            .collect()
    }

    /// Largest relative Frobenius error of U_a S_a U_{a+1}^H against M_a.
    pub fn reconstruction_error(&self, ms: &[QuaternionMatrix]) -> f64 {
        let n = ms.len();
        (0..n)
            .map(|a| {
                let rebuilt = &(&self.u[a] * &self.s[a]) * &self.u[(a + 1) % n].adjoint();
                rebuilt.relative_distance(&ms[a])
            })
            .fold(0.0, f64::max)
    }
}

/// Generalized Schur decomposition of a chain of square quaternion matrices.
///
/// The Schur form S of the product fixes U_1; a backward chain of QR
/// factorizations M_n U_1 = U_n S_n, M_a U_{a+1} = U_a S_a (a = n-1..2)
/// produces the rest, and S_1 = S (S_2 ... S_n)^{-1} by triangular solves.
pub fn quat_generalized_schur(ms: &[QuaternionMatrix]) -> Result<GeneralizedSchur> {
    let n = ms.len();
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one matrix".into()));
    }
    let dim = ms[0].dim()?;
    for m in ms {
        if m.dim()? != dim {
            return Err(Error::Size("all matrices must share one dimension".into()));
        }
    }
    let mut product = ms[0].clone();
    for m in &ms[1..] {
        product = &product * m;
    }
    let (u1, schur) = quat_schur(&product)?;
    if n == 1 {
        return Ok(GeneralizedSchur { u: vec![u1], s: vec![schur] });
    }
    let mut u = vec![QuaternionMatrix::identity(dim); n];
    let mut s = vec![QuaternionMatrix::identity(dim); n];
    u[0] = u1;
    let mut next = u[0].clone();
    for a in (1..n).rev() {
        let (q, r) = quat_qr(&(&ms[a] * &next))?;
        u[a] = q;
        s[a] = r;
        next = u[a].clone();
    }
    let mut tail = s[1].clone();
    for sa in &s[2..] {
        tail = &tail * sa;
    }
    // S_1 T = S with T upper triangular  <=>  T^T S_1^T = S^T (lower solve).
    let scale = max_abs(tail.rep());
    for i in 0..2 * dim {
        if !(tail.rep()[(i, i)].norm() > 1e-300_f64.max(1e-14 * scale)) {
            return Err(Error::Singular("triangular factor has a vanishing diagonal".into()));
        }
    }
    let s1t = tail
        .rep()
        .transpose()
        .solve_lower_triangular(&schur.rep().transpose())
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let mut s1 = s1t.transpose();
    for bj in 0..dim {
        for bi in bj + 1..dim {
            for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                s1[(2 * bi + dr, 2 * bj + dc)] = Complex64::new(0.0, 0.0);
            }
        }
        s1[(2 * bj, 2 * bj + 1)] = Complex64::new(0.0, 0.0);
        s1[(2 * bj + 1, 2 * bj)] = Complex64::new(0.0, 0.0);
    }
    s[0] = QuaternionMatrix::from_rep_unchecked(s1);
    Ok(GeneralizedSchur { u, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatlin::Quaternion;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn is_block_upper(s: &QuaternionMatrix) -> bool {
        let n = s.rows();
        (0..n).all(|i| (0..i).all(|j| s.get(i, j).norm() == 0.0))
    }

    #[test]
    fn diagonal_quaternion_eigenvalue() {
        let m = QuaternionMatrix::from_fn(1, 1, |_, _| Quaternion::from_parts(1.0, 2.0, 0.0, 0.0));
        let e = quat_eigenvalues(&m).unwrap();
        assert!((e[0] - Complex64::new(1.0, 2.0)).norm() < 1e-14);
        let lower = QuaternionMatrix::from_fn(1, 1, |_, _| Quaternion::from_parts(1.0, -2.0, 0.0, 0.0));
        assert!((quat_eigenvalues(&lower).unwrap()[0] - Complex64::new(1.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn real_eigenvalue_has_even_multiplicity() {
        // diag(3, i): the real value 3 appears twice in the representation.
        let m = QuaternionMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Quaternion::from_parts(3.0, 0.0, 0.0, 0.0),
            (1, 1) => Quaternion::i(),
            (0, 1) => Quaternion::from_parts(0.5, 0.0, 1.0, 0.0),
            _ => Quaternion::zero(),
        });
        let spectrum = linalg::eigenvalues(m.rep()).unwrap();
        let near_three = spectrum.iter().filter(|z| (*z - 3.0).norm() < 1e-8).count();
        assert_eq!(near_three, 2);
        let e = quat_eigenvalues(&m).unwrap();
        assert!((e[0] - Complex64::i()).norm() < 1e-12);
        assert!((e[1] - 3.0).norm() < 1e-8);
    }

    #[test]
    fn qr_reconstructs_square_and_tall() {
        for (rows, cols, seed) in [(1, 1, 1), (4, 4, 2), (8, 8, 3), (6, 3, 4)] {
            let m = QuaternionMatrix::gaussian(rows, cols, &mut rng(seed));
            let (q, r) = quat_qr(&m).unwrap();
            assert!((&q * &r).relative_distance(&m) < 1e-12);
            assert!(q.unitarity_defect() < 1e-12);
            assert!(is_block_upper(&r));
            assert!(q.structure_defect() < 1e-13);
        }
        let single = QuaternionMatrix::from_fn(1, 1, |_, _| Quaternion::from_parts(0.0, 3.0, 4.0, 0.0));
        let (q, r) = quat_qr(&single).unwrap();
        assert!((r.get(0, 0) - Quaternion::from_parts(5.0, 0.0, 0.0, 0.0)).norm() < 1e-14);
        assert!((q.get(0, 0) - Quaternion::from_parts(0.0, 0.6, 0.8, 0.0)).norm() < 1e-15);
        assert!(matches!(quat_qr(&QuaternionMatrix::zeros(2, 2)), Err(Error::Singular(_))));
    }

    #[test]
    fn qr_of_unitary_is_diagonal() {
        let (u, _) = quat_qr(&QuaternionMatrix::gaussian(4, 4, &mut rng(5))).unwrap();
        let (_, r) = quat_qr(&u).unwrap();
        for i in 0..4 {
            assert!((r.get(i, i).norm() - 1.0).abs() < 1e-12);
            for j in i + 1..4 {
                assert!(r.get(i, j).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn schur_reconstructs_and_orders() {
        for (n, seed) in [(1, 6), (2, 7), (4, 8), (6, 9)] {
            let m = QuaternionMatrix::gaussian(n, n, &mut rng(seed));
            let (u, s) = quat_schur(&m).unwrap();
            assert!(u.unitarity_defect() < 1e-12);
            assert!((&(&u * &s) * &u.adjoint()).relative_distance(&m) < 1e-10);
            assert!(is_block_upper(&s));
            let eig = quat_eigenvalues(&m).unwrap();
            for b in 0..n {
                let d = s.get(b, b);
                assert_eq!(d.beta, Complex64::new(0.0, 0.0));
                assert!((d.alpha - eig[b]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn schur_of_canonical_form_is_trivial() {
        let s = QuaternionMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                Quaternion::from_parts(i as f64, 1.0 + i as f64, 0.0, 0.0)
            } else if i < j {
                Quaternion::from_parts(0.3, -0.2, 0.1, 0.4)
            } else {
                Quaternion::zero()
            }
        });
        let (u, t) = quat_schur(&s).unwrap();
        for i in 0..3 {
            assert!((u.get(i, i).norm() - 1.0).abs() < 1e-10);
            assert!((t.get(i, i).alpha - s.get(i, i).alpha).norm() < 1e-10);
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let m = QuaternionMatrix::from_fn(2, 2, |i, j| if i == j { Quaternion::i() } else { Quaternion::zero() });
        assert!(matches!(quat_schur(&m), Err(Error::Degenerate(_))));
    }

    #[test]
    fn generalized_schur_chain() {
        for (n, dim, seed) in [(1, 3, 10), (2, 2, 11), (3, 4, 12)] {
            let ms: Vec<_> = (0..n).map(|a| QuaternionMatrix::gaussian(dim, dim, &mut rng(seed * 10 + a as u64))).collect();
            let g = quat_generalized_schur(&ms).unwrap();
            assert!(g.reconstruction_error(&ms) < 1e-9);
            for u in &g.u {
                assert!(u.unitarity_defect() < 1e-12);
            }
            for s in &g.s {
                assert!(is_block_upper(s));
            }
            let mut product = ms[0].clone();
            for m in &ms[1..] {
                product = &product * m;
            }
            let direct = quat_eigenvalues(&product).unwrap();
            let mut ours = g.eigenvalues();
            ours.sort_by(lexicographic);
            for (a, b) in ours.iter().zip(&direct) {
                assert!((a - b).norm() < 1e-9 * b.norm().max(1.0));
            }
            let again = quat_generalized_schur(&ms).unwrap();
            for (x, y) in g.eigenvalues().iter().zip(again.eigenvalues()) {
                assert_eq!(*x, y);
            }
        }
    }
}
