//! Property suites aggregated by `ginprod verify`.

use clap::ValueEnum;
use ginprod_core::kernels::{correlation_rho_ell, kernel_sn_quaternion, KernelSpec};
use ginprod_core::linalg::eigenvalues;
use ginprod_core::quad::integrate_disk;
use ginprod_core::quatlin::{pair_conjugates, quat_generalized_schur, QuaternionMatrix};
use ginprod_core::radial::hole_probability_exact;
use ginprod_core::rng::replica_rng;
use ginprod_core::specfun::{constant_c, ln_gamma, ln_meijer_g0n, regularized_lower_gamma, regularized_upper_gamma};
use ginprod_core::{Beta, EnsembleSpec, MatrixSize};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::HarnessResult;
use crate::harness::{bessel_k, run_hole_table, run_overcrowding_table, run_radial_verification};
use crate::report::{ExperimentReport, Quantity, Seeds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Radial,
    Hole,
    Overcrowding,
    Quatlin,
    Kernels,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Specfun,
                Suite::Radial,
                Suite::Hole,
                Suite::Overcrowding,
                Suite::Quatlin,
                Suite::Kernels,
            ],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Radial => "radial",
            Suite::Hole => "hole",
            Suite::Overcrowding => "overcrowding",
            Suite::Quatlin => "quatlin",
            Suite::Kernels => "kernels",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub workers: usize,
    pub tol: f64,
}

/// One report with quantities named `<suite>/<check>`.
pub fn run_verify(suite: Suite, opts: &VerifyOptions) -> HarnessResult<ExperimentReport> {
    let mut report = ExperimentReport::new(
        format!("verify/{}", suite.name()),
        None,
        Seeds { master_seed: opts.seed, workers: opts.workers },
    );
    for s in suite.members() {
        let part = match s {
            Suite::Specfun => specfun_suite(opts)?,
            Suite::Radial => radial_suite(opts)?,
            Suite::Hole => hole_suite(opts)?,
            Suite::Overcrowding => overcrowding_suite()?,
            Suite::Quatlin => quatlin_suite(opts)?,
            Suite::Kernels => kernels_suite(opts)?,
            Suite::All => unreachable!("expanded by members"),
        };
        for (name, q) in part {
            report.insert(format!("{}/{name}", s.name()), q);
        }
    }
    Ok(report)
}

type Checks = Vec<(String, Quantity)>;

fn label(spec: &EnsembleSpec) -> String {
    let m: Vec<String> = spec.m.iter().map(|v| v.to_string()).collect();
    let size = spec.dim().map_or("inf".to_string(), |d| d.to_string());
    format!("beta{}_N{size}_m{}", spec.beta.value(), m.join("-"))
}

fn specfun_suite(opts: &VerifyOptions) -> HarnessResult<Checks> {
    let mut out = Checks::new();
    for (a, b) in [(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)] {
        for x in [0.01, 1.0, 50.0] {
            let g = ln_meijer_g0n(&[a, b], x)?.exp();
            let oracle = 2.0 * x.powf(0.5 * (a + b)) * bessel_k(a - b, 2.0 * x.sqrt());
            out.push((format!("bessel_a{a}_b{b}_x{x}"), Quantity::within(g, oracle, opts.tol)));
        }
    }
    for m in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let closed = 0.5 * (2.0 * std::f64::consts::PI).ln() - ln_gamma(m + 1.0);
        out.push((format!("constant_c_m{m}"), Quantity::within(constant_c(m)?, closed, opts.tol)));
    }
    for (a, x) in [(0.5, 0.1), (3.0, 2.5), (40.0, 45.0)] {
        let total = regularized_lower_gamma(a, x)? + regularized_upper_gamma(a, x)?;
        out.push((format!("incomplete_gamma_a{a}_x{x}"), Quantity::within(total, 1.0, 1e-13)));
    }
    Ok(out)
}

fn radial_suite(opts: &VerifyOptions) -> HarnessResult<Checks> {
    let mut out = Checks::new();
    let specs = [
        EnsembleSpec::complex(2, vec![0.0])?,
        EnsembleSpec::complex(3, vec![0.0, 1.0])?,
        EnsembleSpec::quaternion(2, vec![0.0])?,
    ];
    for spec in specs {
        let rep = run_radial_verification(&spec, opts.samples, opts.seed, opts.workers)?;
        for (name, q) in rep.quantities {
            out.push((format!("{}/{name}", label(&spec)), q));
        }
    }
    Ok(out)
}

fn hole_suite(opts: &VerifyOptions) -> HarnessResult<Checks> {
    let mut out = Checks::new();
    for m in [0.0, 1.0, 2.5] {
        for dim in [1, 2, 5] {
            let spec = EnsembleSpec::complex(dim, vec![m])?;
            for r in [0.5, 1.0, 2.0] {
                let exact = hole_probability_exact(&spec, r)?;
                let mut reference = 0.0;
                for k in 1..=dim {
                    reference += regularized_upper_gamma(k as f64 + m, r * r)?.ln();
                }
                out.push((format!("{}/r{r}", label(&spec)), Quantity::within(exact, reference, 1e-10)));
            }
        }
    }
    let spec = EnsembleSpec::complex(2, vec![0.0])?;
    let rep = run_hole_table(&spec, &[1.0], opts.samples, opts.seed, opts.workers)?;
    for (name, q) in rep.quantities {
        if name.ends_with("empirical") {
            out.push((format!("{}/{name}", label(&spec)), q));
        }
    }
    Ok(out)
}

fn overcrowding_suite() -> HarnessResult<Checks> {
    let mut out = Checks::new();
    for beta in [Beta::Complex, Beta::Quaternion] {
        let spec = EnsembleSpec::new(beta, MatrixSize::Infinite, vec![0.0])?;
        let rep = run_overcrowding_table(&spec, 1.0, &[5, 10, 20, 40])?;
        for (name, q) in rep.quantities {
            out.push((format!("{}/{name}", label(&spec)), q));
        }
    }
    Ok(out)
}

fn quatlin_suite(opts: &VerifyOptions) -> HarnessResult<Checks> {
    let mut out = Checks::new();
    let mut worst_schur: f64 = 0.0;
    let mut worst_pairing: f64 = 0.0;
    for i in 0..20u64 {
        let mut rng = replica_rng(opts.seed, i);
        let n = 1 + (i % 3) as usize;
        let dim = 1 + (i % 4) as usize;
        let ms: Vec<QuaternionMatrix> = (0..n).map(|_| QuaternionMatrix::gaussian(dim, dim, &mut rng)).collect();
        worst_schur = worst_schur.max(quat_generalized_schur(&ms)?.reconstruction_error(&ms));
        let spectrum = eigenvalues(ms[0].rep())?;
        let (_, residual) = pair_conjugates(&spectrum)?;
        worst_pairing = worst_pairing.max(residual / ms[0].rep().norm());
    }
    out.push(("generalized_schur_reconstruction".into(), Quantity::banded(worst_schur, 0.0, 1e-9)));
    out.push(("conjugate_pairing_residual".into(), Quantity::banded(worst_pairing, 0.0, 1e-8)));
    Ok(out)
}

fn kernels_suite(opts: &VerifyOptions) -> HarnessResult<Checks> {
    let mut out = Checks::new();
    let q = KernelSpec::new(EnsembleSpec::quaternion(3, vec![0.0, 1.0])?).with_rel_tol(opts.tol);
    let (z, zeta) = (Complex64::new(0.3, -0.8), Complex64::new(-1.2, 0.4));
    let asym = kernel_sn_quaternion(&q, z, zeta)? + kernel_sn_quaternion(&q, zeta, z)?;
    out.push(("sn_antisymmetry".into(), Quantity::banded(asym.norm(), 0.0, 0.0)));
    let one = KernelSpec::new(EnsembleSpec::quaternion(1, vec![0.0])?);
    let s1 = kernel_sn_quaternion(&one, z, zeta)?;
    let want = (zeta - z) / (2.0 * std::f64::consts::PI);
    out.push(("sn_single_mode".into(), Quantity::within(s1.re, want.re, 1e-15)));
    let c = KernelSpec::new(EnsembleSpec::complex(2, vec![0.0])?);
    let total = integrate_disk(|w| Complex64::new(correlation_rho_ell(&c, &[w]).unwrap_or(f64::NAN), 0.0), 12.0, 24, 12, 1);
    out.push(("rho1_total_beta2_N2".into(), Quantity::within(total.re, 2.0, 1e-5)));
    Ok(out)
}
