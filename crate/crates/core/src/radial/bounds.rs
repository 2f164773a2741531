use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::specfun::{constant_c, ln_gamma};
use crate::types::{Beta, EnsembleSpec};

/// Multiplier of the next-order term used as uncertainty band.
pub const DEFAULT_BAND_MULTIPLIER: f64 = 5.0;

/// Displayed terms of an asymptotic lower and upper bound, plus a band of
/// half-width `band` standing in for the unspecified remainder.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundBand {
    pub lower_log: f64,
    pub upper_log: f64,
    pub band: f64,
}

impl BoundBand {
    pub fn lower_with_band(&self) -> f64 {
        self.lower_log - self.band
    }

    pub fn upper_with_band(&self) -> f64 {
        self.upper_log + self.band
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lower_with_band() && value <= self.upper_with_band()
    }
}

/// Limit of ln P_hole / r^{4/n} for the infinite ensemble.
pub fn hole_leading_coefficient(beta: Beta, n: usize) -> f64 {
    match beta {
        Beta::Complex => -(n as f64) / 4.0,
        Beta::Quaternion => -(n as f64) / 8.0,
    }
}

/// Limit of ln P{N >= q} / (q^2 ln q).
pub fn overcrowding_leading_coefficient(beta: Beta, n: usize) -> f64 {
    match beta {
        Beta::Complex => -(n as f64) / 2.0,
        Beta::Quaternion => -(n as f64),
    }
}

fn require_infinite(spec: &EnsembleSpec) -> Result<()> {
    spec.validate()?;
    if spec.dim().is_some() {
        return Err(Error::InvalidParameter("bounds refer to the infinite ensemble".into()));
    }
    Ok(())
}

/// Hole-probability bounds of the infinite ensemble with band c ln r.
///
/// The lower bound is derived for integer r^2; it is evaluated here at real r.
pub fn hole_bounds_infinite(spec: &EnsembleSpec, r: f64, band_multiplier: f64) -> Result<BoundBand> {
    require_infinite(spec)?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be > 0, got {r}")));
    }
    let n = spec.n() as f64;
    let r2n = r.powf(2.0 / n);
    let r4n = r2n * r2n;
    let ln_r2n = (2.0 / n) * r.ln();
    let sum_m = spec.sum_m();
    let (lower, upper) = match spec.beta {
        Beta::Complex => {
            let mut constant = 0.0;
            for &m in &spec.m {
                constant += constant_c(m)? - m + ln_gamma(m + 1.0) + 4f64.ln();
            }
            let upper = -n / 4.0 * r4n + n * sum_m * r2n;
            let lower = -n / 4.0 * r4n - n / 2.0 * r2n * ln_r2n - constant * r2n;
            (lower, upper)
        }
        Beta::Quaternion => {
            let mut constant = 0.0;
            for &m in &spec.m {
                constant += constant_c((m - 1.0) / 2.0)? + constant_c(m / 2.0)? + ln_gamma(m + 1.0)
                    - m * (1.0 + LN_2)
                    - 0.5
                    + 1.5 * LN_2;
            }
            let upper = -n / 8.0 * r4n + r2n / 2.0 * (sum_m + n / 2.0);
            let lower = -n / 8.0 * r4n - n / 4.0 * r2n * ln_r2n - 0.5 * constant * r2n;
            (lower, upper)
        }
    };
    Ok(BoundBand {
        lower_log: lower,
        upper_log: upper,
        band: band_multiplier * r.ln().max(1.0),
    })
}

/// Overcrowding bounds of the infinite ensemble with band c q.
pub fn overcrowding_bounds(spec: &EnsembleSpec, r: f64, q: usize, band_multiplier: f64) -> Result<BoundBand> {
    require_infinite(spec)?;
    if q < 2 {
        return Err(Error::InvalidParameter(format!("overcrowding bounds need q >= 2, got {q}")));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be > 0, got {r}")));
    }
    let n = spec.n() as f64;
    let qf = q as f64;
    let q2 = qf * qf;
    let qlq = qf * qf.ln();
    let q2lq = q2 * qf.ln();
    let ln_r = r.ln();
    let sum_m = spec.sum_m();
    let (lower, upper) = match spec.beta {
        Beta::Complex => (
            -n / 2.0 * q2lq + (n / 4.0 + ln_r - n / 2.0 * LN_2) * q2 - (sum_m + n / 2.0) * qlq,
            -n / 2.0 * q2lq + (3.0 * n / 4.0 + ln_r) * q2 + (2.0 - sum_m) * qlq,
        ),
        Beta::Quaternion => (
            -n * q2lq + (n / 2.0 - 2.0 * n * LN_2 + 2.0 * ln_r) * q2 - (sum_m + n) * qlq,
            -n * q2lq + (1.5 * n - n * LN_2 + 2.0 * ln_r) * q2 + (2.0 - (sum_m + n / 2.0)) * qlq,
        ),
    };
    Ok(BoundBand {
        lower_log: lower,
        upper_log: upper,
        band: band_multiplier * qf,
    })
}
