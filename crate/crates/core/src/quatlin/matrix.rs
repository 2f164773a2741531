use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

use super::quaternion::Quaternion;

/// Quaternion matrix stored as its complex representation, a
/// (2 rows) x (2 cols) complex matrix made of 2x2 quaternion blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionMatrix {
    rep: DMatrix<Complex64>,
}

const STRUCTURE_TOL: f64 = 1e-12;

impl QuaternionMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rep: DMatrix::zeros(2 * rows, 2 * cols) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { rep: DMatrix::identity(2 * dim, 2 * dim) }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Quaternion>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Matrix with independent entries whose alpha and beta parts are
    /// standard complex Gaussians, E|alpha|^2 = E|beta|^2 = 1.
    pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut draw = || {
            let v: f64 = StandardNormal.sample(rng);
            v * s
        };
        Self::from_fn(rows, cols, |_, _| {
            Quaternion::from_parts(draw(), draw(), draw(), draw())
        })
    }

    /// Wraps a complex representation after checking its block pattern to
    /// 1e-12 relative, then symmetrizes it exactly.
    pub fn from_rep(rep: DMatrix<Complex64>) -> Result<Self> {
        if rep.nrows() % 2 != 0 || rep.ncols() % 2 != 0 {
            return Err(Error::Size(format!(
                "representation must have even dimensions, got {}x{}",
                rep.nrows(),
                rep.ncols()
            )));
        }
        let scale = rep.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut m = Self { rep };
        for bi in 0..m.rows() {
            for bj in 0..m.cols() {
                let (r, c) = (2 * bi, 2 * bj);
                let a = m.rep[(r, c)];
                let b = -m.rep[(r, c + 1)];
                let mismatch = (m.rep[(r + 1, c)] - b.conj()).norm().max((m.rep[(r + 1, c + 1)] - a.conj()).norm());
                if mismatch > STRUCTURE_TOL * scale {
                    return Err(Error::InvalidParameter(format!(
                        "block ({bi}, {bj}) violates the quaternion pattern by {mismatch:e}"
                    )));
                }
                let avg_a = (a + m.rep[(r + 1, c + 1)].conj()) * 0.5;
                let avg_b = (b + m.rep[(r + 1, c)].conj()) * 0.5;
                m.set(bi, bj, Quaternion::new(avg_a, avg_b));
            }
        }
        Ok(m)
    }

    /// Largest deviation from the block pattern, relative to the largest entry.
    pub fn structure_defect(&self) -> f64 {
        let scale = self.rep.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for bi in 0..self.rows() {
            for bj in 0..self.cols() {
                let (r, c) = (2 * bi, 2 * bj);
                let d1 = (self.rep[(r + 1, c)] + self.rep[(r, c + 1)].conj()).norm();
                let d2 = (self.rep[(r + 1, c + 1)] - self.rep[(r, c)].conj()).norm();
                worst = worst.max(d1).max(d2);
            }
        }
        worst / scale
    }

    pub fn rows(&self) -> usize {
        self.rep.nrows() / 2
    }

    pub fn cols(&self) -> usize {
        self.rep.ncols() / 2
    }

    /// N for a square N x N matrix.
    pub fn dim(&self) -> Result<usize> {
        if self.rows() != self.cols() {
            return Err(Error::Size(format!("expected a square matrix, got {}x{}", self.rows(), self.cols())));
        }
        Ok(self.rows())
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        Quaternion::new(self.rep[(2 * i, 2 * j)], -self.rep[(2 * i, 2 * j + 1)])
    }

    pub fn set(&mut self, i: usize, j: usize, x: Quaternion) {
        let b = x.block();
        for r in 0..2 {
            for c in 0..2 {
                self.rep[(2 * i + r, 2 * j + c)] = b[(r, c)];
            }
        }
    }

    pub fn rep(&self) -> &DMatrix<Complex64> {
        &self.rep
    }

    pub fn into_rep(self) -> DMatrix<Complex64> {
        self.rep
    }

    /// Wraps a product or combination of representations, which keeps the
    /// block pattern up to rounding.
    pub(crate) fn from_rep_unchecked(rep: DMatrix<Complex64>) -> Self {
        debug_assert!(rep.nrows() % 2 == 0 && rep.ncols() % 2 == 0);
        Self { rep }
    }

    pub fn adjoint(&self) -> Self {
        Self { rep: self.rep.adjoint() }
    }

    /// Quaternionic Frobenius norm sqrt(sum |x_ij|^2).
    pub fn frobenius_norm(&self) -> f64 {
        self.rep.norm() / std::f64::consts::SQRT_2
    }

    /// ||self - other||_F / ||other||_F.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        (&self.rep - &other.rep).norm() / other.rep.norm()
    }

    /// max |U^H U - I| entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.rep.adjoint() * &self.rep;
        let id = DMatrix::<Complex64>::identity(g.nrows(), g.ncols());
        (g - id).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Complex representation columns 2j and 2j+1 as one quaternion column.
    pub fn column(&self, j: usize) -> Self {
        Self { rep: self.rep.columns(2 * j, 2).into_owned() }
    }
}

impl Mul for &QuaternionMatrix {
    type Output = QuaternionMatrix;
    fn mul(self, rhs: &QuaternionMatrix) -> QuaternionMatrix {
        assert_eq!(self.cols(), rhs.rows(), "quaternion matrix product shape mismatch");
        QuaternionMatrix { rep: &self.rep * &rhs.rep }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn blocks_round_trip() {
        let x = Quaternion::from_parts(1.0, 2.0, -3.0, 0.5);
        let mut m = QuaternionMatrix::zeros(2, 3);
        m.set(1, 2, x);
        assert_eq!(m.get(1, 2), x);
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 3);
        assert!(m.dim().is_err());
        assert_eq!(m.structure_defect(), 0.0);
    }

    #[test]
    fn products_match_quaternion_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = QuaternionMatrix::gaussian(3, 2, &mut rng);
        let b = QuaternionMatrix::gaussian(2, 4, &mut rng);
        let c = &a * &b;
        for i in 0..3 {
            for j in 0..4 {
                let want = (0..2).fold(Quaternion::zero(), |acc, k| acc + a.get(i, k) * b.get(k, j));
                assert!((c.get(i, j) - want).norm() < 1e-14);
            }
        }
        assert!(c.structure_defect() < 1e-15);
    }

    #[test]
    fn j_symmetry_of_the_representation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = QuaternionMatrix::gaussian(3, 3, &mut rng);
        let mut j = DMatrix::<Complex64>::zeros(6, 6);
        for b in 0..3 {
            j[(2 * b, 2 * b + 1)] = Complex64::new(-1.0, 0.0);
            j[(2 * b + 1, 2 * b)] = Complex64::new(1.0, 0.0);
        }
        let conj = m.rep().map(|v| v.conj());
        let rhs = &j * conj * j.transpose();
        assert!((rhs - m.rep()).norm() < 1e-15);
    }

    #[test]
    fn from_rep_rejects_broken_pattern() {
        let mut rep = DMatrix::<Complex64>::zeros(2, 2);
        rep[(0, 0)] = Complex64::new(1.0, 0.0);
        assert!(QuaternionMatrix::from_rep(rep.clone()).is_err());
        rep[(1, 1)] = Complex64::new(1.0, 0.0);
        assert_eq!(QuaternionMatrix::from_rep(rep).unwrap(), QuaternionMatrix::identity(1));
        assert!(QuaternionMatrix::from_rep(DMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn gaussian_entry_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = QuaternionMatrix::gaussian(60, 60, &mut rng);
        let mean_sq = m.frobenius_norm().powi(2) / 3600.0;
        assert!((mean_sq - 2.0).abs() < 0.1, "{mean_sq}");
    }
}
