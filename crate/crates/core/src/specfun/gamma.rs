//! Log-gamma, digamma and trigamma.
//!
//! All routines shift the argument upward by the recurrence until the
//! Stirling series is accurate, then undo the shift.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// B_{2k} for k = 1..8.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const SHIFT_TO: f64 = 10.0;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn stirling_complex(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        corr += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * (z.ln() - 1.0) + (HALF_LN_2PI - 0.5) + corr
}

/// Logarithm of sin(pi z) that does not overflow for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = z * PI;
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    // sin w = e^{-iw}(e^{2iw} - 1)/(2i) for Im w > 0, mirror image otherwise.
    let i = Complex64::i();
    if w.im > 0.0 {
        -i * w + (-(2.0 * i * w).exp()).ln_1p_c() - (2.0 * i).ln() + Complex64::new(0.0, PI)
    } else {
        i * w + (-(-2.0 * i * w).exp()).ln_1p_c() - (2.0 * i).ln()
    }
}

trait Ln1p {
    fn ln_1p_c(self) -> Complex64;
}

impl Ln1p for Complex64 {
    fn ln_1p_c(self) -> Complex64 {
        if self.norm() < 1e-4 {
            self - self * self / 2.0 + self * self * self / 3.0
        } else {
            (self + 1.0).ln()
        }
    }
}

/// Log-gamma on the branch that is continuous in the right half-plane and
/// real on the positive axis.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(z.re));
    }
    if z.re < 0.5 {
        // Reflection: ln G(z) = ln pi - ln sin(pi z) - ln G(1 - z).
        let rest = log_gamma_complex(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - rest);
    }
    Ok(log_gamma_right(z))
}

/// Log-gamma for Re z >= 0.5 without error handling; hot path of the
/// contour integrals.
pub(crate) fn log_gamma_right(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm_sqr() < SHIFT_TO * SHIFT_TO {
        shift += z.ln();
        z += 1.0;
    }
    stirling_complex(z) - shift
}

/// ln |Gamma(x)| for real x.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        let s = (PI * x).sin().abs();
        return PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let mut x = x;
    let mut prod = 1.0;
    while x < SHIFT_TO {
        prod *= x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        corr += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * (x.ln() - 1.0) + (HALF_LN_2PI - 0.5) + corr - prod.ln()
}

/// Gamma(x) for real x, overflowing to infinity past x ~ 171.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        return ln_gamma(x).exp();
    }
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    PI / ((PI * x).sin() * gamma(1.0 - x))
}

/// Digamma psi(x) for x > 0.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT_TO {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut corr = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        corr += b / (2.0 * (k as f64 + 1.0)) * pow;
        pow *= inv2;
    }
    acc + x.ln() - 0.5 / x - corr
}

/// Trigamma psi'(x) for x > 0.
pub fn trigamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT_TO {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut corr = 0.0;
    for b in BERNOULLI_EVEN {
        corr += b * pow;
        pow *= inv2;
    }
    acc + inv + 0.5 * inv2 + corr
}
