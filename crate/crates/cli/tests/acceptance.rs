//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run a subset with `ACCEPTANCE_ONLY=3,4 cargo test -p ginprod-cli --test acceptance`.
//! Criteria listed in `KNOWN_GAPS` are reported as FAIL but do not fail the
//! process; the README explains each gap.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ginprod_cli::harness::{bessel_k, empirical_hole_fraction, radial_verification_at_level, run_overcrowding_table};
use ginprod_core::ensembles::sample_product_eigenvalues;
use ginprod_core::kernels::{correlation_rho_ell, kernel_kn, kernel_sn_quaternion, weight, KernelSpec};
use ginprod_core::linalg::eigenvalues;
use ginprod_core::quad::{integrate_composite, integrate_disk};
use ginprod_core::quatlin::{pair_conjugates, quat_generalized_schur, QuaternionMatrix};
use ginprod_core::radial::{
    counting_distribution, hole_asymptotic_finite_n, hole_bounds_infinite, hole_leading_coefficient,
    hole_probability_exact, overcrowding_leading_coefficient, DEFAULT_BAND_MULTIPLIER,
};
use ginprod_core::rng::replica_rng;
use ginprod_core::specfun::{constant_c, euler_maclaurin_klogk_sum, euler_maclaurin_log_sum, ln_gamma, ln_meijer_g0n};
use ginprod_core::stats::{binomial_interval_99, bonferroni};
use ginprod_core::{Beta, EnsembleSpec, MatrixSize, SamplerConfig};
use num_complex::Complex64;

const KNOWN_GAPS: &[u32] = &[5, 8];

const C1_REL_TOL: f64 = 1e-10;
const C2_REL_TOL: f64 = 1e-8;
const C3_SAMPLES: usize = 20_000;
const C3_ALPHA: f64 = 0.01;
const C4_REPLICAS: usize = 100_000;
const C4_TARGET_HOLE: f64 = 0.2;
const C5_CONSTANT_TOL: f64 = 1e-8;
/// O(1/n): n |error| may move by at most this factor per decade.
const C5_ONE_OVER_N_SPREAD: f64 = 1.5;
/// O(1): the error must settle, so each decade's change is at most half the previous one.
const C5_SETTLING_RATIO: f64 = 0.5;
/// Bounded: no value along r = 5..40 exceeds the one at r = 5 by more than this factor.
const C6_GROWTH: f64 = 1.5;
const C6_IDENTITY_TOL: f64 = 1e-12;
const C7_START_R: f64 = 8.0;
const C7_BUDGET: Duration = Duration::from_secs(20);
const C8_REL_TOL: f64 = 0.15;
const C9_RECONSTRUCTION_TOL: f64 = 1e-9;
const C9_PAIRING_TOL: f64 = 1e-8;
const C10_TRACE_TOL: f64 = 1e-5;
const C10_DISK_TOL: f64 = 1e-6;
const C10_REPRODUCING_TOL: f64 = 1e-5;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Q(a, x) as a ratio of two quadratures of t^{a-1} e^{-t} in t = e^u.
fn upper_gamma_by_quadrature(a: f64, x: f64) -> f64 {
    let f = |u: f64| (a * u - u.exp()).exp();
    let top = 6.5 + a.max(1.0).ln() + (a + 40.0).ln().max(x.ln());
    let tail = integrate_composite(f, x.ln(), top, 200, 20);
    let whole = integrate_composite(f, -60.0 / a.max(0.5), top, 400, 20);
    tail / whole
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [0.0, 1.0, 2.5] {
        for dim in [1, 2, 5] {
            let spec = EnsembleSpec::complex(dim, vec![m]).unwrap();
            for r in [0.5, 1.0, 2.0] {
                let exact = hole_probability_exact(&spec, r).unwrap().exp();
                let oracle: f64 = (1..=dim).map(|k| upper_gamma_by_quadrature(k as f64 + m, r * r)).product();
                worst = worst.max(((exact - oracle) / oracle).abs());
            }
        }
    }
    outcome(worst <= C1_REL_TOL, format!("worst relative error {worst:.2e} (tol {C1_REL_TOL:e})"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for (a, b) in [(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)] {
        for i in 0..=60 {
            let x = 0.01 * 5000f64.powf(i as f64 / 60.0);
            let g = ln_meijer_g0n(&[a, b], x).unwrap().exp();
            let oracle = 2.0 * x.powf(0.5 * (a + b)) * bessel_k(a - b, 2.0 * x.sqrt());
            worst = worst.max(((g - oracle) / oracle).abs());
        }
    }
    outcome(worst <= C2_REL_TOL, format!("worst relative error {worst:.2e} over 183 points (tol {C2_REL_TOL:e})"))
}

/// Nondecreasing m-tuples of length n from `values` (the radial law depends
/// only on the multiset of parameters).
fn multisets(values: &[f64], n: usize) -> Vec<Vec<f64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        for mut rest in multisets(&values[i..], n - 1) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let mut grid = Vec::new();
    for n in 1..=3 {
        for m in multisets(&[0.0, 1.0, 2.0], n) {
            for dim in 1..=5 {
                grid.push(EnsembleSpec::complex(dim, m.clone()).unwrap());
            }
        }
    }
    for n in 1..=2 {
        for m in multisets(&[0.0, 1.0], n) {
            for dim in 1..=3 {
                grid.push(EnsembleSpec::quaternion(dim, m.clone()).unwrap());
            }
        }
    }
    let tests: usize = grid.iter().map(|s| s.dim().unwrap()).sum();
    let level = bonferroni(C3_ALPHA, tests);
    let mut failures = Vec::new();
    let mut min_p = f64::INFINITY;
    for (i, spec) in grid.iter().enumerate() {
        let rep = radial_verification_at_level(spec, C3_SAMPLES, 1000 + i as u64, workers(), level).unwrap();
        for (name, q) in &rep.quantities {
            if let Some(p) = q.p_value {
                min_p = min_p.min(p);
            }
            if q.pass == Some(false) {
                failures.push(format!("beta={} N={} m={:?} {name}", spec.beta.value(), spec.dim().unwrap(), spec.m));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} specs, {tests} mode tests at per-test level {level:.1e}; min p = {min_p:.2e}; failures: {failures:?}",
            grid.len()
        ),
    )
}

/// r with exact hole probability `target`, by bisection in r.
fn radius_for_hole(spec: &EnsembleSpec, target: f64) -> f64 {
    let (mut lo, mut hi) = (1e-3, 50.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if hole_probability_exact(spec, mid).unwrap() > target.ln() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_4() -> Outcome {
    let specs = [
        EnsembleSpec::complex(2, vec![0.0]).unwrap(),
        EnsembleSpec::complex(3, vec![0.0, 1.0]).unwrap(),
        EnsembleSpec::complex(5, vec![1.0]).unwrap(),
        EnsembleSpec::quaternion(2, vec![0.0]).unwrap(),
        EnsembleSpec::quaternion(2, vec![0.0, 1.0]).unwrap(),
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let r = radius_for_hole(spec, C4_TARGET_HOLE);
        let p0 = hole_probability_exact(spec, r).unwrap().exp();
        assert!((0.05..=0.5).contains(&p0));
        let config = SamplerConfig::with_default_method(spec.clone(), 500 + i as u64).with_workers(workers());
        let draws = sample_product_eigenvalues(&config, C4_REPLICAS).unwrap();
        let freq = empirical_hole_fraction(&draws, r);
        let ci = binomial_interval_99(p0, C4_REPLICAS);
        pass &= ci.contains(freq);
        lines.push(format!(
            "beta={} N={} m={:?} r={r:.4}: {freq:.4} in [{:.4}, {:.4}]",
            spec.beta.value(),
            spec.dim().unwrap(),
            spec.m,
            ci.lower,
            ci.upper
        ));
    }
    outcome(pass, lines.join("; "))
}

fn criterion_5() -> Outcome {
    let ms = [0.0, 0.5, 1.0, 2.0, 5.0];
    let worst_c = ms
        .iter()
        .map(|&m| (constant_c(m).unwrap() - (0.5 * (2.0 * std::f64::consts::PI).ln() - ln_gamma(m + 1.0))).abs())
        .fold(0.0, f64::max);
    let ns = [100u64, 1000, 10_000];
    let mut log_ok = true;
    let mut klogk_ok = true;
    let mut drift = Vec::new();
    for &m in &ms {
        let scaled: Vec<f64> =
            ns.iter().map(|&n| n as f64 * euler_maclaurin_log_sum(m, n).unwrap().error().abs()).collect();
        for w in scaled.windows(2) {
            log_ok &= w[1] <= C5_ONE_OVER_N_SPREAD * w[0] && w[0] <= C5_ONE_OVER_N_SPREAD * w[1];
        }
        let errs: Vec<f64> = ns.iter().map(|&n| euler_maclaurin_klogk_sum(m, n).unwrap().error()).collect();
        let (d1, d2) = (errs[1] - errs[0], errs[2] - errs[1]);
        klogk_ok &= d2.abs() <= C5_SETTLING_RATIO * d1.abs();
        drift.push(format!("{d2:.4}"));
    }
    let pass = worst_c <= C5_CONSTANT_TOL && log_ok && klogk_ok;
    outcome(
        pass,
        format!(
            "C(m) worst {worst_c:.1e}; log-sum n*error steady: {log_ok}; k log k error settles: {klogk_ok} \
             (change from n=1e3 to 1e4 per m: {drift:?}; ln(10)/12 = {:.4})",
            10f64.ln() / 12.0
        ),
    )
}

fn criterion_6() -> Outcome {
    let single = EnsembleSpec::complex(1, vec![0.0]).unwrap();
    let mut identity: f64 = 0.0;
    for r in [0.5, 1.0, 5.0, 10.0, 20.0, 40.0] {
        let e = hole_probability_exact(&single, r).unwrap();
        let a = hole_asymptotic_finite_n(&single, r).unwrap();
        identity = identity.max(((e - a) / e).abs());
    }
    let mut pass = identity <= C6_IDENTITY_TOL;
    let mut lines = vec![format!("n=1 N=1 identity error {identity:.1e}")];
    for beta in [Beta::Complex, Beta::Quaternion] {
        for dim in [1, 2] {
            for m in [vec![0.0, 0.0], vec![0.0, 1.0]] {
                let spec = EnsembleSpec::new(beta, MatrixSize::Finite(dim), m.clone()).unwrap();
                let q: Vec<f64> = [5.0f64, 10.0, 20.0, 40.0]
                    .iter()
                    .map(|&r| {
                        let e = hole_probability_exact(&spec, r).unwrap();
                        let a = hole_asymptotic_finite_n(&spec, r).unwrap();
                        r * ((e - a).exp() - 1.0).abs()
                    })
                    .collect();
                let bounded = q.iter().all(|v| v.is_finite() && *v <= C6_GROWTH * q[0]);
                pass &= bounded;
                lines.push(format!("beta={} N={dim} m={m:?}: {:.3?}", beta.value(), q));
            }
        }
    }
    outcome(pass, lines.join("; "))
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for beta in [Beta::Complex, Beta::Quaternion] {
        for n in [1usize, 2] {
            let spec = EnsembleSpec::new(beta, MatrixSize::Infinite, vec![0.0; n]).unwrap();
            let lead = hole_leading_coefficient(beta, n);
            let started = Instant::now();
            let mut r = C7_START_R;
            let mut ratios: Vec<(f64, f64)> = Vec::new();
            let mut in_band = true;
            while started.elapsed() < C7_BUDGET {
                let Ok(exact) = hole_probability_exact(&spec, r) else { break };
                let b = hole_bounds_infinite(&spec, r, DEFAULT_BAND_MULTIPLIER).unwrap();
                in_band &= b.contains(exact);
                ratios.push((r, exact / r.powf(4.0 / n as f64)));
                r *= 2.0;
            }
            let monotone = ratios.windows(2).all(|w| (w[1].1 - lead).abs() < (w[0].1 - lead).abs());
            let ok = ratios.len() >= 3 && monotone && in_band;
            pass &= ok;
            let (r_last, last) = ratios.last().copied().unwrap_or((f64::NAN, f64::NAN));
            lines.push(format!(
                "beta={} n={n}: largest r={r_last} ratio {last:.5} (limit {lead}), {} radii, monotone {monotone}, in bands {in_band}",
                beta.value(),
                ratios.len()
            ));
        }
    }
    outcome(pass, lines.join("; "))
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for beta in [Beta::Complex, Beta::Quaternion] {
        for n in [1usize, 2] {
            let spec = EnsembleSpec::new(beta, MatrixSize::Infinite, vec![0.0; n]).unwrap();
            let lead = overcrowding_leading_coefficient(beta, n);
            let rep = run_overcrowding_table(&spec, 1.0, &[5, 10, 20, 40]).unwrap();
            let normalized = rep.quantities["q=40/normalized"].estimate;
            let rel = ((normalized - lead) / lead).abs();
            let q0 = rep.quantities["q0"].estimate;
            pass &= rel <= C8_REL_TOL && rep.passed();
            lines.push(format!(
                "beta={} n={n}: normalized {normalized:.4} vs {lead} ({:.1}% off), q0 = {q0}",
                beta.value(),
                100.0 * rel
            ));
        }
    }
    outcome(pass, lines.join("; "))
}

fn criterion_9() -> Outcome {
    let mut worst_rec: f64 = 0.0;
    for i in 0..100u64 {
        let mut rng = replica_rng(9, i);
        let n = 1 + (i % 3) as usize;
        let dim = 1 + ((i / 3) % 4) as usize;
        let ms: Vec<QuaternionMatrix> = (0..n).map(|_| QuaternionMatrix::gaussian(dim, dim, &mut rng)).collect();
        worst_rec = worst_rec.max(quat_generalized_schur(&ms).unwrap().reconstruction_error(&ms));
    }
    let mut worst_pair: f64 = 0.0;
    for i in 0..1000u64 {
        let dim = 1 + (i % 6) as usize;
        let m = QuaternionMatrix::gaussian(dim, dim, &mut replica_rng(99, i));
        let (_, residual) = pair_conjugates(&eigenvalues(m.rep()).unwrap()).unwrap();
        worst_pair = worst_pair.max(residual / m.rep().norm());
    }
    let mut antisym = true;
    for (dim, m) in [(1, vec![0.0]), (3, vec![0.0, 1.0]), (4, vec![2.0])] {
        let ks = KernelSpec::new(EnsembleSpec::quaternion(dim, m).unwrap());
        for i in 0..20u64 {
            let mut rng = replica_rng(7, i);
            let g = QuaternionMatrix::gaussian(1, 1, &mut rng).get(0, 0);
            let (z, zeta) = (g.alpha, g.beta);
            antisym &= kernel_sn_quaternion(&ks, z, zeta).unwrap() == -kernel_sn_quaternion(&ks, zeta, z).unwrap();
        }
    }
    let one = KernelSpec::new(EnsembleSpec::quaternion(1, vec![0.0]).unwrap());
    let (z, zeta) = (Complex64::new(0.3, -1.1), Complex64::new(2.0, 0.7));
    let reduction = kernel_sn_quaternion(&one, z, zeta).unwrap() == (zeta - z) / (2.0 * std::f64::consts::PI);
    let pass = worst_rec <= C9_RECONSTRUCTION_TOL && worst_pair <= C9_PAIRING_TOL && antisym && reduction;
    outcome(
        pass,
        format!(
            "Schur reconstruction {worst_rec:.1e}; pairing residual {worst_pair:.1e}; antisymmetry exact {antisym}; single-mode reduction exact {reduction}"
        ),
    )
}

fn disk_integral(ks: &KernelSpec, r_max: f64) -> f64 {
    let angles = if ks.spec.beta == Beta::Complex { 1 } else { 16 };
    let panels = ((r_max / 2.0).ceil() as usize).max(4);
    integrate_disk(|w| Complex64::new(correlation_rho_ell(ks, &[w]).unwrap(), 0.0), r_max, panels, 10, angles).re
}

fn criterion_10() -> Outcome {
    let mut worst_trace: f64 = 0.0;
    let mut worst_disk: f64 = 0.0;
    for beta in [Beta::Complex, Beta::Quaternion] {
        for dim in 1..=3usize {
            for m in [vec![0.0], vec![1.0], vec![0.0, 0.0], vec![0.0, 1.0]] {
                let spec = EnsembleSpec::new(beta, MatrixSize::Finite(dim), m).unwrap();
                let ks = KernelSpec::new(spec.clone());
                let total = disk_integral(&ks, 40.0);
                worst_trace = worst_trace.max((total / dim as f64 - 1.0).abs());
                let r = 1.3;
                let expected = counting_distribution(&spec, r, 1e-15).unwrap().expected_count();
                worst_disk = worst_disk.max((disk_integral(&ks, r) / expected - 1.0).abs());
            }
        }
    }
    let mut worst_rep: f64 = 0.0;
    for m in [vec![0.0], vec![0.0, 1.0]] {
        let spec = EnsembleSpec::complex(3, m).unwrap();
        let ks = KernelSpec::new(spec.clone());
        let (z, zeta) = (Complex64::new(0.7, -0.4), Complex64::new(-1.1, 0.3));
        let got = integrate_disk(
            |w| kernel_kn(&ks, z, w).unwrap() * kernel_kn(&ks, w, zeta).unwrap() * weight(&spec.m, w).unwrap(),
            40.0,
            20,
            10,
            8,
        );
        let want = kernel_kn(&ks, z, zeta).unwrap();
        worst_rep = worst_rep.max((got - want).norm() / want.norm());
    }
    let pass = worst_trace <= C10_TRACE_TOL && worst_disk <= C10_DISK_TOL && worst_rep <= C10_REPRODUCING_TOL;
    outcome(
        pass,
        format!("trace {worst_trace:.1e}; disk count {worst_disk:.1e}; reproducing {worst_rep:.1e}"),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(u32, &str, Option<Duration>, Check); 10] = [
        (1, "exact hole, single factor", Some(Duration::from_secs(1)), criterion_1),
        (2, "Meijer G against Bessel K", Some(Duration::from_secs(10)), criterion_2),
        (3, "radial law", Some(Duration::from_secs(600)), criterion_3),
        (4, "Monte Carlo hole", Some(Duration::from_secs(300)), criterion_4),
        (5, "C(m) and Euler-Maclaurin sums", Some(Duration::from_secs(5)), criterion_5),
        (6, "finite-N hole asymptotics", None, criterion_6),
        (7, "infinite-N hole limit", None, criterion_7),
        (8, "overcrowding", None, criterion_8),
        (9, "quaternion structure", None, criterion_9),
        (10, "kernel consistency", None, criterion_10),
    ];
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut unexpected = 0;
    for (id, name, limit, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        let elapsed = started.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = result.pass && in_time;
        let verdict = match (pass, KNOWN_GAPS.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known gap)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        let budget = limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        println!("criterion {id:>2} {verdict}: {name} [{:.2}s{budget}] {}", elapsed.as_secs_f64(), result.detail);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
