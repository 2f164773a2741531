use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::quatlin::{quat_eigenvalues, QuaternionMatrix};
use crate::rng::{map_replicas, replica_rng};
use crate::types::{Beta, EnsembleSpec};

use super::factors::{sample_complex_factor, sample_quaternion_factor};
use super::{SamplerConfig, SamplerMethod};

/// Eigenvalues of one product draw: N values for beta = 2, the N
/// upper-half-plane representatives for beta = 4 (sorted lexicographically).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenSample {
    pub replica: usize,
    pub seed: u64,
    pub eigenvalues: Vec<Complex64>,
}

impl EigenSample {
    /// Squared moduli in increasing order.
    pub fn sorted_squared_moduli(&self) -> Vec<f64> {
        let mut r: Vec<f64> = self.eigenvalues.iter().map(|z| z.norm_sqr()).collect();
        r.sort_by(f64::total_cmp);
        r
    }
}

fn lexicographic(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn one_replica(config: &SamplerConfig, replica: usize) -> Result<EigenSample> {
    let spec = &config.spec;
    let dim = spec.finite_dim()?;
    let mut rng = replica_rng(config.seed, replica as u64);
    let eigenvalues = match spec.beta {
        Beta::Complex => {
            let mut product = DMatrix::<Complex64>::identity(dim, dim);
            for &m in &spec.m {
                product *= sample_complex_factor(dim, m, config.method, &mut rng)?;
            }
            let mut e = linalg::eigenvalues(&product)?;
            e.sort_by(lexicographic);
            e
        }
        Beta::Quaternion => {
            let mut product = QuaternionMatrix::identity(dim);
            for &m in &spec.m {
                product = &product * &sample_quaternion_factor(dim, m, config.method, &mut rng)?;
            }
            quat_eigenvalues(&product)?
        }
    };
    Ok(EigenSample { replica, seed: config.seed, eigenvalues })
}

/// `count` independent product draws, replica i on stream i of the seed.
pub fn sample_product_eigenvalues(config: &SamplerConfig, count: usize) -> Result<Vec<EigenSample>> {
    config.validate()?;
    if count == 0 {
        return Err(Error::InvalidParameter("count must be >= 1".into()));
    }
    if config.method == SamplerMethod::MetropolisOracle && config.spec.n() != 1 {
        return Err(Error::InvalidParameter("the Metropolis oracle samples one factor".into()));
    }
    let results = map_replicas(count, config.workers, |r| {
        one_replica(config, r).map_err(|e| Error::Replica { replica: r, source: Box::new(e) })
    });
    results.into_iter().collect()
}

/// Run description stored next to a sample dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSidecar {
    pub schema: String,
    pub spec: EnsembleSpec,
    pub seed: u64,
    pub method: SamplerMethod,
    pub count: usize,
    pub workers: usize,
    pub tool_version: String,
}

impl SampleSidecar {
    pub fn new(config: &SamplerConfig, count: usize) -> Self {
        Self {
            schema: "sample_v1".into(),
            spec: config.spec.clone(),
            seed: config.seed,
            method: config.method,
            count,
            workers: config.workers,
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

/// CSV with header `replica,re_1,im_1,...` and one row per replica.
pub fn samples_to_csv(samples: &[EigenSample]) -> String {
    let width = samples.first().map_or(0, |s| s.eigenvalues.len());
    let mut out = String::from("replica");
    for k in 1..=width {
        let _ = write!(out, ",re_{k},im_{k}");
    }
    out.push('\n');
    for s in samples {
        let _ = write!(out, "{}", s.replica);
        for z in &s.eigenvalues {
            let _ = write!(out, ",{},{}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

/// Writes the CSV dump to `path` and the sidecar to `<path>.sidecar.json`.
pub fn write_samples(path: &Path, samples: &[EigenSample], sidecar: &SampleSidecar) -> Result<()> {
    std::fs::write(path, samples_to_csv(samples))?;
    let mut side = path.as_os_str().to_owned();
    side.push(".sidecar.json");
    std::fs::write(side, serde_json::to_string_pretty(sidecar)?)?;
    Ok(())
}
