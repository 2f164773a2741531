use crate::error::Result;
use crate::rng::{map_replicas, replica_rng};
use crate::types::EnsembleSpec;

use super::law::RadialLaw;

/// `count` rows of N squared radii, row i drawn from replica stream i.
pub fn sample_radii(spec: &EnsembleSpec, seed: u64, count: usize) -> Result<Vec<Vec<f64>>> {
    sample_radii_workers(spec, seed, count, 1)
}

/// As [`sample_radii`], spread over `workers` threads with identical output.
pub fn sample_radii_workers(
    spec: &EnsembleSpec,
    seed: u64,
    count: usize,
    workers: usize,
) -> Result<Vec<Vec<f64>>> {
    let dim = spec.finite_dim()?;
    let laws = (1..=dim)
        .map(|k| RadialLaw::for_mode(spec, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(map_replicas(count, workers, |row| {
        let mut rng = replica_rng(seed, row as u64);
        laws.iter().map(|law| law.sample(&mut rng)).collect()
    }))
}
