use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix2;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Quaternion {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Quaternion {
    pub const fn new(alpha: Complex64, beta: Complex64) -> Self {
        Self { alpha, beta }
    }

    /// Quaternion from real coordinates a + b i + c j + d k.
    pub fn from_parts(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(Complex64::new(a, b), Complex64::new(c, d))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, Complex64::new(0.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_parts(1.0, 0.0, 0.0, 0.0)
    }

    pub fn i() -> Self {
        Self::from_parts(0.0, 1.0, 0.0, 0.0)
    }

    pub fn j() -> Self {
        Self::from_parts(0.0, 0.0, 1.0, 0.0)
    }

    pub fn k() -> Self {
        Self::from_parts(0.0, 0.0, 0.0, 1.0)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.alpha.conj(), -self.beta)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self::new(self.alpha * t, self.beta * t)
    }

    pub fn block(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.alpha, -self.beta, self.beta.conj(), self.alpha.conj())
    }

    /// Inverse of a block of the representation's pattern.
    pub fn from_block(b: &Matrix2<Complex64>) -> Self {
        Self::new(b[(0, 0)], -b[(0, 1)])
    }
}

/// Product in the quaternion algebra.
pub fn quat_multiply(x: Quaternion, y: Quaternion) -> Quaternion {
    Quaternion::new(
        x.alpha * y.alpha - x.beta * y.beta.conj(),
        x.beta * y.alpha.conj() + x.alpha * y.beta,
    )
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        quat_multiply(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.alpha, -self.beta)
    }
}
