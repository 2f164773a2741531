//! Verification runs that compare sampled, exact and asymptotic quantities.

use ginprod_core::ensembles::sample_product_eigenvalues;
use ginprod_core::quad::integrate_composite;
use ginprod_core::radial::{
    counting_distribution_for_overcrowding, hole_asymptotic_finite_n, hole_bounds_infinite, hole_probability_exact,
    overcrowding_bounds, overcrowding_exact, overcrowding_leading_coefficient, sample_radii_workers, RadialLaw,
    DEFAULT_BAND_MULTIPLIER,
};
use ginprod_core::stats::{binomial_interval_99, bonferroni, kolmogorov_survival, ks_two_sample};
use ginprod_core::{EigenSample, EnsembleSpec, SamplerConfig};

use crate::error::{HarnessError, HarnessResult};
use crate::report::{ExperimentReport, Quantity, Seeds, Table};

/// Family level of every statistical check.
pub const ALPHA: f64 = 0.01;
/// Offset between the matrix seed and the seed of the gamma-product radii.
pub const RADII_SEED_OFFSET: u64 = 0x5eed_0f_7ad11;
/// Monte Carlo hole estimates need an expected count of at least this many holes.
pub const MIN_EXPECTED_HOLES: f64 = 10.0;

/// D such that the two-sample KS test rejects above it at level `alpha`.
pub fn ks_critical_value(alpha: f64, effective_n: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_survival(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sq = effective_n.sqrt();
    0.5 * (lo + hi) / (sq + 0.12 + 0.11 / sq)
}

/// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, by composite Gauss–Legendre.
pub fn bessel_k(nu: f64, z: f64) -> f64 {
    let t_max = (700.0 / z).max(1.0).acosh() + 1.0;
    integrate_composite(|t| (-z * t.cosh()).exp() * (nu * t).cosh(), 0.0, t_max, 200, 20)
}

fn sorted_matrix_radii(samples: &[EigenSample]) -> Vec<Vec<f64>> {
    samples.iter().map(EigenSample::sorted_squared_moduli).collect()
}

/// Two-sample KS per mode with the level split over the N modes.
pub fn run_radial_verification(
    spec: &EnsembleSpec,
    samples: usize,
    seed: u64,
    workers: usize,
) -> HarnessResult<ExperimentReport> {
    let dim = spec.finite_dim()?;
    radial_verification_at_level(spec, samples, seed, workers, bonferroni(ALPHA, dim))
}

/// As [`run_radial_verification`] with an explicit per-mode level, for
/// grids that share one Bonferroni family.
pub fn radial_verification_at_level(
    spec: &EnsembleSpec,
    samples: usize,
    seed: u64,
    workers: usize,
    level: f64,
) -> HarnessResult<ExperimentReport> {
    if samples == 0 {
        return Err(HarnessError::Usage("radial verification needs at least one sample".into()));
    }
    let dim = spec.finite_dim()?;
    let config = SamplerConfig::with_default_method(spec.clone(), seed).with_workers(workers);
    let matrix = sorted_matrix_radii(&sample_product_eigenvalues(&config, samples)?);
    let mut gamma = sample_radii_workers(spec, seed ^ RADII_SEED_OFFSET, samples, workers)?;
    for row in &mut gamma {
        row.sort_by(f64::total_cmp);
    }
    let mut report = ExperimentReport::new("radial", Some(spec.clone()), Seeds { master_seed: seed, workers });
    let critical = ks_critical_value(level, samples as f64 / 2.0);
    for k in 0..dim {
        let a: Vec<f64> = matrix.iter().map(|r| r[k]).collect();
        let b: Vec<f64> = gamma.iter().map(|r| r[k]).collect();
        let t = ks_two_sample(&a, &b)?;
        let mut q = Quantity::banded(t.statistic, 0.0, critical);
        q.statistic = Some(t.statistic);
        q.p_value = Some(t.p_value);
        q.pass = Some(t.p_value > level);
        report.insert(format!("mode_{}", k + 1), q);
    }
    let total: f64 = matrix.iter().map(|r| r.iter().sum::<f64>()).sum::<f64>() / samples as f64;
    let exact: f64 = (1..=dim).map(|k| RadialLaw::for_mode(spec, k).map(|l| l.mean())).sum::<Result<f64, _>>()?;
    report.insert("mean_sum_squared_moduli", Quantity::exact(total, exact));
    Ok(report)
}

/// Fraction of samples with no eigenvalue of modulus below r.
pub fn empirical_hole_fraction(samples: &[EigenSample], r: f64) -> f64 {
    let holes = samples.iter().filter(|s| s.eigenvalues.iter().all(|z| z.norm() >= r)).count();
    holes as f64 / samples.len() as f64
}

fn key(r: f64) -> String {
    format!("r={r}")
}

/// Exact, asymptotic, Monte Carlo and bound columns of the hole probability.
///
/// Monte Carlo runs only for finite N and `samples > 0`, and each row is
/// marked unreachable (NA) when the exact value is below 10 / samples.
pub fn run_hole_table(
    spec: &EnsembleSpec,
    r_values: &[f64],
    samples: usize,
    seed: u64,
    workers: usize,
) -> HarnessResult<ExperimentReport> {
    if r_values.is_empty() {
        return Err(HarnessError::Usage("hole table needs at least one radius".into()));
    }
    if let Some(bad) = r_values.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(HarnessError::Usage(format!("radii must be positive, got {bad}")));
    }
    let finite = spec.dim().is_some();
    let draws = if finite && samples > 0 {
        let config = SamplerConfig::with_default_method(spec.clone(), seed).with_workers(workers);
        Some(sample_product_eigenvalues(&config, samples)?)
    } else {
        None
    };
    let mut report = ExperimentReport::new("hole", Some(spec.clone()), Seeds { master_seed: seed, workers });
    let mut table = Table::new(&[
        "r",
        "exact_log",
        "asymptotic_log",
        "empirical",
        "ci_lower",
        "ci_upper",
        "bound_lower",
        "bound_upper",
        "band",
    ]);
    for &r in r_values {
        let exact = hole_probability_exact(spec, r)?;
        let mut row = vec![Some(r), Some(exact), None, None, None, None, None, None, None];
        if finite {
            let asym = hole_asymptotic_finite_n(spec, r)?;
            row[2] = Some(asym);
            report.insert(format!("{}/asymptotic_log", key(r)), Quantity::exact(asym, exact));
        } else {
            let b = hole_bounds_infinite(spec, r, DEFAULT_BAND_MULTIPLIER)?;
            row[6] = Some(b.lower_log);
            row[7] = Some(b.upper_log);
            row[8] = Some(b.band);
            report.insert(format!("{}/exact_log", key(r)), Quantity::banded(exact, b.lower_with_band(), b.upper_with_band()));
        }
        if let Some(draws) = &draws {
            let p0 = exact.exp();
            if p0 * draws.len() as f64 >= MIN_EXPECTED_HOLES {
                let freq = empirical_hole_fraction(draws, r);
                let ci = binomial_interval_99(p0, draws.len());
                row[3] = Some(freq);
                row[4] = Some(ci.lower);
                row[5] = Some(ci.upper);
                let mut q = Quantity::exact(freq, p0);
                q.interval = Some(ci);
                q.pass = Some(ci.contains(freq));
                report.insert(format!("{}/empirical", key(r)), q);
            }
        }
        table.push(row);
    }
    report.table = Some(table);
    Ok(report)
}

/// Exact ln P{N >= q} next to the overcrowding bounds.
///
/// For the infinite ensemble `q0` is the smallest listed q (>= 2) from
/// which every listed value lies inside its band; rows below q0 carry no
/// pass flag.
pub fn run_overcrowding_table(spec: &EnsembleSpec, r: f64, q_values: &[usize]) -> HarnessResult<ExperimentReport> {
    if q_values.is_empty() {
        return Err(HarnessError::Usage("overcrowding table needs at least one q".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(HarnessError::Usage(format!("radius must be positive, got {r}")));
    }
    let mut qs = q_values.to_vec();
    qs.sort_unstable();
    qs.dedup();
    let infinite = spec.dim().is_none();
    let lead = overcrowding_leading_coefficient(spec.beta, spec.n());
    let mut report = ExperimentReport::new("overcrowding", Some(spec.clone()), Seeds { master_seed: 0, workers: 1 });
    let mut table = Table::new(&["q", "exact_log", "bound_lower", "bound_upper", "band", "normalized"]);
    let mut banded = Vec::new();
    for &q in &qs {
        let exact = if q == 0 {
            0.0
        } else {
            let dist = counting_distribution_for_overcrowding(spec, r, q)?;
            overcrowding_exact(&dist, q)
        };
        let mut row = vec![Some(q as f64), Some(exact), None, None, None, None];
        if q >= 2 {
            let qf = q as f64;
            let normalized = exact / (qf * qf * qf.ln());
            row[5] = Some(normalized);
            report.insert(format!("q={q}/normalized"), Quantity::exact(normalized, lead));
            if infinite {
                let b = overcrowding_bounds(spec, r, q, DEFAULT_BAND_MULTIPLIER)?;
                row[2] = Some(b.lower_log);
                row[3] = Some(b.upper_log);
                row[4] = Some(b.band);
                banded.push((q, Quantity::banded(exact, b.lower_with_band(), b.upper_with_band())));
            }
        }
        table.push(row);
    }
    if infinite && !banded.is_empty() {
        let first_inside = banded.iter().rposition(|(_, q)| q.pass == Some(false)).map_or(0, |i| i + 1);
        let q0 = banded.get(first_inside).map(|(q, _)| *q);
        for (i, (q, mut quantity)) in banded.into_iter().enumerate() {
            if i < first_inside {
                quantity.pass = None;
            }
            report.insert(format!("q={q}/exact_log"), quantity);
        }
        let (lo, hi) = (*qs.first().unwrap_or(&0) as f64, *qs.last().unwrap_or(&0) as f64);
        report.insert("q0", Quantity::banded(q0.map_or(f64::NAN, |q| q as f64), lo, hi));
    }
    report.table = Some(table);
    Ok(report)
}
