use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::replica_rng;
use crate::types::{Beta, EnsembleSpec};

/// Chain lengths in sweeps; one sweep proposes an update of every entry once.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetropolisSettings {
    pub burn_in: usize,
    pub thin: usize,
    pub initial_step: f64,
}

impl Default for MetropolisSettings {
    fn default() -> Self {
        Self { burn_in: 400, thin: 4, initial_step: 1.0 }
    }
}

/// Draws of a Metropolis chain with its post-burn-in acceptance rate.
#[derive(Clone, Debug)]
pub struct MetropolisRun {
    /// Complex matrices (beta = 2) or complex representations (beta = 4).
    pub draws: Vec<DMatrix<Complex64>>,
    pub acceptance_rate: f64,
    pub step: f64,
}

struct Target {
    beta: Beta,
    dim: usize,
    m: f64,
}

impl Target {
    /// Real coordinates per entry.
    fn width(&self) -> usize {
        match self.beta {
            Beta::Complex => 2,
            Beta::Quaternion => 4,
        }
    }

    fn matrix(&self, x: &[f64]) -> DMatrix<Complex64> {
        let n = self.dim;
        match self.beta {
            Beta::Complex => DMatrix::from_fn(n, n, |i, j| {
                let o = 2 * (i * n + j);
                Complex64::new(x[o], x[o + 1])
            }),
            Beta::Quaternion => {
                let mut rep = DMatrix::zeros(2 * n, 2 * n);
                for i in 0..n {
                    for j in 0..n {
                        let o = 4 * (i * n + j);
                        let a = Complex64::new(x[o], x[o + 1]);
                        let b = Complex64::new(x[o + 2], x[o + 3]);
                        rep[(2 * i, 2 * j)] = a;
                        rep[(2 * i, 2 * j + 1)] = -b;
                        rep[(2 * i + 1, 2 * j)] = b.conj();
                        rep[(2 * i + 1, 2 * j + 1)] = a.conj();
                    }
                }
                rep
            }
        }
    }

    /// m ln det(M^H M) - Tr M^H M (complex) or m ln det M - sum |x_ij|^2
    /// (quaternion, determinant of the representation); -inf when singular.
    fn ln_density(&self, x: &[f64]) -> f64 {
        let quadratic: f64 = x.iter().map(|v| v * v).sum();
        if self.m == 0.0 {
            return -quadratic;
        }
        let det = self.matrix(x).determinant();
        let ln_abs = det.norm().ln();
        if !ln_abs.is_finite() {
            return f64::NEG_INFINITY;
        }
        let power = match self.beta {
            Beta::Complex => 2.0 * self.m,
            Beta::Quaternion => self.m,
        };
        power * ln_abs - quadratic
    }
}

/// Random-walk Metropolis targeting the induced density, updating one
/// entry per proposal. The step is tuned during burn-in towards an
/// acceptance rate in [0.2, 0.5] and frozen afterwards.
pub(crate) fn metropolis_chain<R: Rng + ?Sized>(
    beta: Beta,
    dim: usize,
    m: f64,
    settings: &MetropolisSettings,
    count: usize,
    rng: &mut R,
) -> MetropolisRun {
    let target = Target { beta, dim, m };
    let w = target.width();
    let entries = dim * dim;
    let mut x: Vec<f64> = (0..w * entries)
        .map(|_| {
            let v: f64 = StandardNormal.sample(rng);
            v * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    let mut current = target.ln_density(&x);
    let mut step = settings.initial_step;
    let mut window_accepts = 0usize;
    let mut window_total = 0usize;
    let mut accepts = 0usize;
    let mut total = 0usize;
    let mut draws = Vec::with_capacity(count);
    let sweeps = settings.burn_in + count * settings.thin.max(1);
    let mut proposal = x.clone();
    for sweep in 0..sweeps {
        let burning = sweep < settings.burn_in;
        for _ in 0..entries {
            let e = rng.random_range(0..entries);
            proposal.copy_from_slice(&x);
            for c in 0..w {
                let z: f64 = StandardNormal.sample(rng);
                proposal[w * e + c] += step * z;
            }
            let candidate = target.ln_density(&proposal);
            let accept = candidate.is_finite() && {
                let u: f64 = rng.random();
                u.ln() < candidate - current
            };
            if accept {
                std::mem::swap(&mut x, &mut proposal);
                current = candidate;
            }
            if burning {
                window_accepts += accept as usize;
                window_total += 1;
                if window_total == 100 {
                    let rate = window_accepts as f64 / window_total as f64;
                    if rate > 0.5 {
                        step *= 1.15;
                    } else if rate < 0.2 {
                        step /= 1.15;
                    }
                    window_accepts = 0;
                    window_total = 0;
                }
            } else {
                accepts += accept as usize;
                total += 1;
            }
        }
        if !burning && (sweep + 1 - settings.burn_in) % settings.thin.max(1) == 0 {
            draws.push(target.matrix(&x));
        }
    }
    MetropolisRun {
        draws,
        acceptance_rate: if total > 0 { accepts as f64 / total as f64 } else { 0.0 },
        step,
    }
}

/// `count` thinned draws of one induced factor (spec with a single factor).
pub fn metropolis_reference_sampler(
    spec: &EnsembleSpec,
    seed: u64,
    settings: &MetropolisSettings,
    count: usize,
) -> Result<MetropolisRun> {
    let dim = spec.finite_dim()?;
    if spec.n() != 1 {
        return Err(Error::InvalidParameter("the Metropolis reference sampler takes one factor".into()));
    }
    Ok(metropolis_chain(spec.beta, dim, spec.m[0], settings, count, &mut replica_rng(seed, 0)))
}
