use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::specfun::{self, ln_gamma, MeijerParams};
use crate::types::EnsembleSpec;

/// Law of one squared modulus: a product of independent Gamma(shape, 1).
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RadialLaw {
    pub shape_params: Vec<f64>,
    pub mode_index: usize,
}

impl RadialLaw {
    pub fn new(shape_params: Vec<f64>, mode_index: usize) -> Result<Self> {
        if shape_params.is_empty() || shape_params.iter().any(|a| !(a.is_finite() && *a >= 1.0)) {
            return Err(Error::InvalidParameter(format!("radial shapes must be >= 1: {shape_params:?}")));
        }
        if mode_index == 0 {
            return Err(Error::InvalidParameter("mode index starts at 1".into()));
        }
        Ok(Self { shape_params, mode_index })
    }

    /// The k-th mode (k >= 1) of an ensemble.
    pub fn for_mode(spec: &EnsembleSpec, k: usize) -> Result<Self> {
        Self::new(spec.shapes(k), k)
    }

    pub fn mean(&self) -> f64 {
        self.shape_params.iter().product()
    }

    pub fn ln_density(&self, x: f64) -> Result<f64> {
        let b: Vec<f64> = self.shape_params.iter().map(|a| a - 1.0).collect();
        let norm: f64 = self.shape_params.iter().map(|&a| ln_gamma(a)).sum();
        Ok(specfun::ln_meijer_g(&MeijerParams::g0n(b), x)? - norm)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        self.ln_density(x).map(f64::exp)
    }

    /// (ln P{Y <= x}, ln P{Y > x}).
    pub fn ln_tails(&self, x: f64) -> Result<(f64, f64)> {
        specfun::ln_gamma_product_tails(&self.shape_params, x, specfun::meijer::DEFAULT_REL_TOL)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.shape_params
            .iter()
            .map(|&a| Gamma::new(a, 1.0).expect("validated shape").sample(rng))
            .product()
    }
}

/// Density of the squared modulus at x >= 0.
pub fn radial_density(law: &RadialLaw, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("radial density needs x >= 0, got {x}")));
    }
    law.density(x)
}
