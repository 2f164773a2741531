use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;
use crate::types::{Beta, EnsembleSpec};

use super::counting::counting_distribution_ln_tol;

/// ln(2e-16): infinite-ensemble truncation level for hole probabilities.
const HOLE_LN_TOL: f64 = -36.0;

/// ln P{no eigenvalue in the disk of radius r}.
///
/// The finite ensemble is an exact product over its N modes. For the
/// infinite ensemble the product is truncated once the neglected modes can
/// change the logarithm by less than about 2e-16.
pub fn hole_probability_exact(spec: &EnsembleSpec, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    if r == 0.0 {
        spec.validate()?;
        return Ok(0.0);
    }
    let dist = counting_distribution_ln_tol(spec, r, HOLE_LN_TOL)?;
    Ok(dist.ln_prob_none())
}

/// Large-r approximation of [`hole_probability_exact`] for finite N:
/// the Luke leading term of every factor multiplied out.
pub fn hole_asymptotic_finite_n(spec: &EnsembleSpec, r: f64) -> Result<f64> {
    let dim = spec.finite_dim()?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!("asymptotic hole needs r > 0, got {r}")));
    }
    let n = spec.n() as f64;
    let nn = dim as f64;
    let mut ln_prod_gamma = 0.0;
    for k in 1..=dim {
        ln_prod_gamma += spec.shapes(k).iter().map(|&a| ln_gamma(a)).sum::<f64>();
    }
    let power = match spec.beta {
        Beta::Complex => nn * (nn + (2.0 * spec.sum_m() - 1.0) / n),
        Beta::Quaternion => nn * (2.0 * nn + 1.0 + (2.0 * spec.sum_m() - 1.0) / n),
    };
    Ok(0.5 * nn * (n - 1.0) * (2.0 * PI).ln() - 0.5 * nn * n.ln() - ln_prod_gamma
        - n * nn * r.powf(2.0 / n)
        + power * r.ln())
}
