//! Kolmogorov–Smirnov, chi-square and binomial tools for Monte Carlo checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::regularized_upper_gamma;

/// z with P{Z > z} = 0.005 for a standard normal Z.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Test statistic with its p-value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// P{K > lambda} for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(d: f64, effective_n: f64) -> f64 {
    let sq = effective_n.sqrt();
    kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)
}

fn sorted(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::InvalidParameter("sample must be nonempty".into()));
    }
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidParameter("sample contains NaN".into()));
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    Ok(s)
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic distribution and
/// the usual small-sample correction of the effective size.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(TestResult { statistic: d, p_value: ks_p_value(d, na * nb / (na + nb)) })
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<TestResult> {
    let s = sorted(sample)?;
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    Ok(TestResult { statistic: d, p_value: ks_p_value(d, n) })
}

/// Pearson chi-square goodness of fit against expected counts.
pub fn chi_square(observed: &[f64], expected: &[f64], fitted_parameters: usize) -> Result<TestResult> {
    if observed.len() != expected.len() || observed.len() <= fitted_parameters + 1 {
        return Err(Error::InvalidParameter("chi-square needs matching bins and positive degrees of freedom".into()));
    }
    if expected.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidParameter("expected counts must be > 0".into()));
    }
    let stat: f64 = observed.iter().zip(expected).map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = (observed.len() - 1 - fitted_parameters) as f64;
    Ok(TestResult { statistic: stat, p_value: regularized_upper_gamma(dof / 2.0, stat / 2.0)? })
}

/// Two-sample chi-square homogeneity test on shared bins.
pub fn chi_square_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::InvalidParameter("two-sample chi-square needs matching bins".into()));
    }
    let (na, nb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let mut stat = 0.0;
    let mut bins = 0usize;
    for (x, y) in a.iter().zip(b) {
        if x + y > 0.0 {
            stat += (ka * x - kb * y).powi(2) / (x + y);
            bins += 1;
        }
    }
    if bins < 2 {
        return Err(Error::InvalidParameter("need at least two occupied bins".into()));
    }
    let dof = (bins - 1) as f64;
    Ok(TestResult { statistic: stat, p_value: regularized_upper_gamma(dof / 2.0, stat / 2.0)? })
}

/// Normal-approximation confidence interval for a binomial proportion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomialInterval {
    pub lower: f64,
    pub upper: f64,
}

impl BinomialInterval {
    pub fn contains(&self, p: f64) -> bool {
        (self.lower..=self.upper).contains(&p)
    }
}

/// 99% interval p0 -/+ z sqrt(p0 (1 - p0) / n) around a reference proportion.
pub fn binomial_interval_99(p0: f64, trials: usize) -> BinomialInterval {
    let half = Z_99 * (p0 * (1.0 - p0) / trials as f64).sqrt();
    BinomialInterval { lower: (p0 - half).max(0.0), upper: (p0 + half).min(1.0) }
}

/// Per-test level for `tests` simultaneous tests at family level `alpha`.
pub fn bonferroni(alpha: f64, tests: usize) -> f64 {
    alpha / tests.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_tail_values() {
        // Standard table: P{K > 1.36} ~ 0.049, P{K > 1.63} ~ 0.0098.
        assert!((kolmogorov_survival(1.36) - 0.0494).abs() < 5e-4);
        assert!((kolmogorov_survival(1.628) - 0.0100).abs() < 3e-4);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn two_sample_statistic_by_hand() {
        let r = ks_two_sample(&[1.0, 2.0, 3.0], &[1.5, 2.5, 3.5, 4.5]).unwrap();
        // After x = 3: 1 - 2/4 = 0.5.
        assert!((r.statistic - 0.5).abs() < 1e-15);
        let same = ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert_eq!(same.p_value, 1.0);
    }

    #[test]
    fn one_sample_uniform_grid() {
        let s: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let r = ks_one_sample(&s, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((r.statistic - 0.005).abs() < 1e-12);
        assert!(r.p_value > 0.99);
    }

    #[test]
    fn chi_square_known_value() {
        let r = chi_square(&[10.0, 20.0, 30.0], &[20.0, 20.0, 20.0], 0).unwrap();
        assert!((r.statistic - 10.0).abs() < 1e-12);
        assert!((r.p_value - (-5.0f64).exp()).abs() < 1e-12);
        let h = chi_square_two_sample(&[5.0, 5.0], &[5.0, 5.0]).unwrap();
        assert_eq!(h.statistic, 0.0);
    }

    #[test]
    fn interval_and_correction() {
        let ci = binomial_interval_99(0.25, 10_000);
        assert!(ci.contains(0.25) && !ci.contains(0.27));
        assert_eq!(bonferroni(0.01, 4), 0.0025);
    }
}
