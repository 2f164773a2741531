use crate::error::{Error, Result};
use crate::specfun::ln_gamma;
use crate::types::EnsembleSpec;

use super::law::RadialLaw;

/// Largest dimension accepted by the permanent-based density.
pub const PERMANENT_MAX_DIM: usize = 8;

/// Permanent of a square matrix given by rows (Ryser's formula).
pub fn permanent(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 1.0;
    }
    let mut total = 0.0;
    for subset in 1u32..(1 << n) {
        let mut prod = 1.0;
        for row in a {
            let s: f64 = (0..n).filter(|j| subset >> j & 1 == 1).map(|j| row[j]).sum();
            prod *= s;
        }
        let sign = if (n - subset.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * prod;
    }
    total
}

/// Joint density of the unordered moduli r_1..r_N (not squared):
/// (1/N!) per[q_j(r_i^2)] prod_i 2 r_i, with q_j the density of mode j.
pub fn permanental_joint_density(spec: &EnsembleSpec, radii: &[f64]) -> Result<f64> {
    let dim = spec.finite_dim()?;
    if dim > PERMANENT_MAX_DIM {
        return Err(Error::Size(format!("permanental density limited to N <= {PERMANENT_MAX_DIM}")));
    }
    if radii.len() != dim {
        return Err(Error::InvalidParameter(format!("expected {dim} radii, got {}", radii.len())));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Domain("radii must be > 0".into()));
    }
    let laws = (1..=dim)
        .map(|k| RadialLaw::for_mode(spec, k))
        .collect::<Result<Vec<_>>>()?;
    let mut matrix = Vec::with_capacity(dim);
    for &r in radii {
        matrix.push(laws.iter().map(|law| law.density(r * r)).collect::<Result<Vec<_>>>()?);
    }
    let jacobian: f64 = radii.iter().map(|r| 2.0 * r).product();
    Ok(permanent(&matrix) * jacobian / ln_gamma(dim as f64 + 1.0).exp())
}
