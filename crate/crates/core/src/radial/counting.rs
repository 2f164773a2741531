use crate::error::{Error, Result};
use crate::types::{Beta, EnsembleSpec};

use super::law::RadialLaw;

/// Per-mode probabilities p_k = P{R_k^2 < r^2} of the independent modes.
///
/// For the infinite ensemble the modes beyond `truncation_k` are dropped and
/// `tail_bound` certifies sum_{k > K} p_k. The bound uses the size-biasing
/// inequality p_{k+1} <= p_k r^2 / prod_a (k + m_a) (squared for quaternions),
/// whose ratios decrease in k, so the tail is dominated by a geometric series.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CountingDistribution {
    pub p: Vec<f64>,
    pub ln_p: Vec<f64>,
    /// ln(1 - p_k), kept separately for accuracy when p_k is close to 1.
    pub ln_q: Vec<f64>,
    pub truncation_k: usize,
    pub tail_bound: f64,
    pub ln_tail_bound: f64,
}

const MAX_MODES: usize = 2_000_000;

impl CountingDistribution {
    /// Modes with given inside probabilities and no truncated tail.
    pub fn from_probabilities(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidParameter("probabilities must lie in [0, 1]".into()));
        }
        let ln_p = p.iter().map(|v| v.ln()).collect();
        let ln_q = p.iter().map(|v| (-v).ln_1p()).collect();
        Ok(Self {
            truncation_k: p.len(),
            p,
            ln_p,
            ln_q,
            tail_bound: 0.0,
            ln_tail_bound: f64::NEG_INFINITY,
        })
    }

    /// ln P{no mode inside}.
    pub fn ln_prob_none(&self) -> f64 {
        self.ln_q.iter().sum()
    }

    /// E[count] over the retained modes.
    pub fn expected_count(&self) -> f64 {
        self.p.iter().sum()
    }

    fn push(&mut self, ln_p: f64, ln_q: f64) {
        self.p.push(ln_p.exp());
        self.ln_p.push(ln_p);
        self.ln_q.push(ln_q);
        self.truncation_k = self.p.len();
    }
}

/// ln of the ratio bound p_{k+1} / p_k.
fn ln_ratio_bound(spec: &EnsembleSpec, k: usize, r2: f64) -> f64 {
    let ln_r2 = r2.ln();
    match spec.beta {
        Beta::Complex => ln_r2 - spec.m.iter().map(|m| (k as f64 + m).ln()).sum::<f64>(),
        Beta::Quaternion => {
            2.0 * ln_r2
                - spec
                    .m
                    .iter()
                    .map(|m| (2.0 * k as f64 + m).ln() + (2.0 * k as f64 + 1.0 + m).ln())
                    .sum::<f64>()
        }
    }
}

/// ln of the certified bound on sum_{j > k} p_j given p_k.
fn ln_tail_after(spec: &EnsembleSpec, k: usize, r2: f64, ln_pk: f64) -> Option<f64> {
    let ln_rho = ln_ratio_bound(spec, k, r2);
    if ln_rho >= (0.5f64).ln() {
        return None;
    }
    Some(ln_pk + ln_rho - (-ln_rho.exp()).ln_1p())
}

fn empty() -> CountingDistribution {
    CountingDistribution {
        p: Vec::new(),
        ln_p: Vec::new(),
        ln_q: Vec::new(),
        truncation_k: 0,
        tail_bound: 0.0,
        ln_tail_bound: f64::NEG_INFINITY,
    }
}

/// Modes until `stop(dist, ln_tail)` accepts the certified tail.
fn build<F>(spec: &EnsembleSpec, r: f64, mut stop: F) -> Result<CountingDistribution>
where
    F: FnMut(&CountingDistribution, f64) -> bool,
{
    spec.validate()?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
    }
    let r2 = r * r;
    let mut dist = empty();
    if r == 0.0 {
        if let Some(dim) = spec.dim() {
            for _ in 0..dim {
                dist.push(f64::NEG_INFINITY, 0.0);
            }
        }
        return Ok(dist);
    }
    match spec.dim() {
        Some(dim) => {
            for k in 1..=dim {
                let (lp, lq) = RadialLaw::for_mode(spec, k)?.ln_tails(r2)?;
                dist.push(lp, lq);
            }
        }
        None => {
            for k in 1..=MAX_MODES {
                let (lp, lq) = RadialLaw::for_mode(spec, k)?.ln_tails(r2)?;
                dist.push(lp, lq);
                if let Some(ln_tail) = ln_tail_after(spec, k, r2, lp) {
                    if stop(&dist, ln_tail) {
                        dist.ln_tail_bound = ln_tail;
                        dist.tail_bound = ln_tail.exp();
                        return Ok(dist);
                    }
                }
            }
            return Err(Error::Truncation(format!(
                "tail not certified within {MAX_MODES} modes at r = {r}"
            )));
        }
    }
    Ok(dist)
}

/// Per-mode inside probabilities with the truncated tail below `tol`.
pub fn counting_distribution(spec: &EnsembleSpec, r: f64, tol: f64) -> Result<CountingDistribution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be > 0, got {tol}")));
    }
    counting_distribution_ln_tol(spec, r, tol.ln())
}

/// As [`counting_distribution`] with the tolerance given by its logarithm,
/// for tolerances below the double-precision range.
pub fn counting_distribution_ln_tol(spec: &EnsembleSpec, r: f64, ln_tol: f64) -> Result<CountingDistribution> {
    build(spec, r, |_, ln_tail| ln_tail < ln_tol)
}

/// Distribution accurate enough that ln P{N >= q} carries a relative error
/// below e^{-40}: at least q modes, and a tail far below P{modes 1..q inside},
/// which is itself a lower bound for P{N >= q}.
pub fn counting_distribution_for_overcrowding(
    spec: &EnsembleSpec,
    r: f64,
    q: usize,
) -> Result<CountingDistribution> {
    build(spec, r, |dist, ln_tail| {
        dist.truncation_k >= q && ln_tail < dist.ln_p[..q].iter().sum::<f64>() - 40.0
    })
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln P{N >= q} over the retained modes (Poisson-binomial dynamic programme
/// in the log domain). Modes past the truncation can only add at most
/// `tail_bound` to the probability.
pub fn overcrowding_exact(dist: &CountingDistribution, q: usize) -> f64 {
    if q == 0 {
        return 0.0;
    }
    // state[j] = ln P{j modes inside so far} for j < q, state[q] = ln P{>= q}.
    let mut state = vec![f64::NEG_INFINITY; q + 1];
    state[0] = 0.0;
    for (&lp, &lq) in dist.ln_p.iter().zip(&dist.ln_q) {
        state[q] = log_add(state[q], state[q - 1] + lp);
        for j in (1..q).rev() {
            state[j] = log_add(state[j] + lq, state[j - 1] + lp);
        }
        state[0] += lq;
    }
    state[q]
}
