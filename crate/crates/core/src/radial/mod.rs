//! Radial laws of the eigenvalue moduli and the hole and overcrowding
//! probabilities derived from them.
//!
//! The squared moduli of the eigenvalues are distributed as independent
//! products of gamma variables, one product per mode k = 1..N. Every
//! probability here is returned as a natural logarithm.
//!
//! Radius convention: laws and densities are stated for squared radii
//! y = r^2. The only exception is [`permanental_joint_density`], which is a
//! density in the radii r_i themselves and includes the Jacobian prod 2 r_i.

mod bounds;
mod counting;
mod hole;
mod law;
mod permanental;
mod sampling;

pub use bounds::{
    hole_bounds_infinite, hole_leading_coefficient, overcrowding_bounds,
    overcrowding_leading_coefficient, BoundBand, DEFAULT_BAND_MULTIPLIER,
};
pub use counting::{
    counting_distribution, counting_distribution_for_overcrowding, counting_distribution_ln_tol,
    overcrowding_exact, CountingDistribution,
};
pub use hole::{hole_asymptotic_finite_n, hole_probability_exact};
pub use law::{radial_density, RadialLaw};
pub use permanental::{permanent, permanental_joint_density, PERMANENT_MAX_DIM};
pub use sampling::{sample_radii, sample_radii_workers};
