//! Matrix-level samplers for induced Ginibre factors and their products.
//!
//! The induced density det(M^H M)^m e^{-Tr M^H M} depends on singular values
//! only, so a factor is a Laguerre singular-value draw composed with two
//! independent Haar factors. Quaternion factors follow
//! [det M]^m e^{-(1/2) Tr M^H M} on the complex representation, which makes
//! alpha and beta of every entry standard complex Gaussians at m = 0.

mod factors;
mod haar;
mod metropolis;
mod product;

use serde::{Deserialize, Serialize};

pub use factors::{
    complex_gaussian, laguerre_eigenvalues, sample_complex_factor, sample_induced_complex,
    sample_induced_quaternion, sample_quaternion_factor,
};
pub use haar::{haar_symplectic, haar_unitary};
pub use metropolis::{metropolis_reference_sampler, MetropolisRun, MetropolisSettings};
pub use product::{
    sample_product_eigenvalues, samples_to_csv, write_samples, EigenSample, SampleSidecar,
};

use crate::error::{Error, Result};
use crate::types::{Beta, EnsembleSpec};

/// How one induced factor is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerMethod {
    /// Plain Gaussian entries; m = 0 only.
    DirectGaussian,
    /// Laguerre singular values between Haar factors; any real m >= 0.
    SvdComposition,
    /// Haar factor times the triangular factor of a rectangular Gaussian:
    /// integer m for beta = 2, even integer m for beta = 4.
    RectangularChain,
    /// Random-walk Metropolis on the matrix entries; slow reference.
    MetropolisOracle,
}

impl SamplerMethod {
    pub fn name(self) -> &'static str {
        match self {
            SamplerMethod::DirectGaussian => "direct-gaussian",
            SamplerMethod::SvdComposition => "svd-composition",
            SamplerMethod::RectangularChain => "rectangular-chain",
            SamplerMethod::MetropolisOracle => "metropolis-oracle",
        }
    }

    /// Checks that the method can realize parameter m for the given beta.
    pub fn check(self, beta: Beta, m: f64) -> Result<()> {
        let ok = match self {
            SamplerMethod::DirectGaussian => m == 0.0,
            SamplerMethod::SvdComposition | SamplerMethod::MetropolisOracle => m >= 0.0 && m.is_finite(),
            SamplerMethod::RectangularChain => match beta {
                Beta::Complex => m >= 0.0 && m.fract() == 0.0,
                Beta::Quaternion => m >= 0.0 && (m / 2.0).fract() == 0.0,
            },
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "method {} cannot realize m = {m} for beta = {}",
                self.name(),
                beta.value()
            )))
        }
    }
}

/// Product sampler settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub spec: EnsembleSpec,
    pub seed: u64,
    pub method: SamplerMethod,
    pub workers: usize,
    pub metropolis: MetropolisSettings,
}

impl SamplerConfig {
    pub fn new(spec: EnsembleSpec, seed: u64, method: SamplerMethod) -> Self {
        Self { spec, seed, method, workers: 1, metropolis: MetropolisSettings::default() }
    }

    /// SvdComposition, which covers every valid spec.
    pub fn with_default_method(spec: EnsembleSpec, seed: u64) -> Self {
        Self::new(spec, seed, SamplerMethod::SvdComposition)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.finite_dim()?;
        for &m in &self.spec.m {
            self.method.check(self.spec.beta, m)?;
        }
        Ok(())
    }
}
