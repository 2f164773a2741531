//! Eigenvalue statistics of products of induced Ginibre matrices.
//!
//! The crate covers complex (beta = 2) and quaternion (beta = 4) products:
//! Meijer G weights, correlation kernels, radial laws, hole and overcrowding
//! probabilities, quaternion linear algebra and matrix-level samplers.

pub mod ensembles;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod quad;
pub mod quatlin;
pub mod radial;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod types;

pub use ensembles::{EigenSample, SamplerConfig, SamplerMethod};
pub use error::{Error, Result};
pub use kernels::KernelSpec;
pub use quatlin::{GeneralizedSchur, Quaternion, QuaternionMatrix};
pub use radial::{BoundBand, CountingDistribution, RadialLaw};
pub use specfun::MeijerParams;
pub use types::{Beta, EnsembleSpec, MatrixSize};
