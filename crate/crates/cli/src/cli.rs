//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ginprod_core::ensembles::{sample_product_eigenvalues, samples_to_csv};
use ginprod_core::kernels::{correlation_rho_ell, kernel_complex, kernel_sn_quaternion, KernelSpec};
use ginprod_core::quatlin::{quat_generalized_schur, Quaternion, QuaternionMatrix};
use ginprod_core::radial::sample_radii_workers;
use ginprod_core::specfun::{constant_c, euler_maclaurin_klogk_sum, euler_maclaurin_log_sum, ln_gamma};
use ginprod_core::{Beta, EnsembleSpec, MatrixSize, SamplerConfig, SamplerMethod};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{HarnessError, HarnessResult};
use crate::harness::{run_hole_table, run_overcrowding_table};
use crate::report::{ExperimentReport, Quantity, RunSidecar, Seeds, Table, SIDECAR_SCHEMA, TOOL_VERSION};
use crate::verify::{run_verify, Suite, VerifyOptions};

pub const TOL_ENV: &str = "GINPROD_DEFAULT_TOL";
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "ginprod", version, about = "Eigenvalue statistics of products of induced Ginibre matrices")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Symmetry class: 2 (complex) or 4 (quaternion).
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=4))]
    beta: u32,
    /// Number of factors; a single --m value is repeated n times.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Matrix size N, or `inf` for the limiting ensemble.
    #[arg(long, global = true, default_value = "2")]
    dims: String,
    /// Induced parameters m_1,...,m_n.
    #[arg(long, global = true, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    m: Vec<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; a sidecar is written next to it as <out>.sidecar.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Relative tolerance; defaults to $GINPROD_DEFAULT_TOL or 1e-8.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Record wall time in reports (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    DirectGaussian,
    SvdComposition,
    RectangularChain,
    MetropolisOracle,
}

impl From<MethodArg> for SamplerMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::DirectGaussian => SamplerMethod::DirectGaussian,
            MethodArg::SvdComposition => SamplerMethod::SvdComposition,
            MethodArg::RectangularChain => SamplerMethod::RectangularChain,
            MethodArg::MetropolisOracle => SamplerMethod::MetropolisOracle,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump eigenvalues of product matrices.
    Sample {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::SvdComposition)]
        method: MethodArg,
    },
    /// Dump squared radii drawn from the gamma-product laws.
    Radii {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Hole probability table: exact, asymptotic, Monte Carlo, bounds.
    Hole {
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        /// Monte Carlo replicas (0 disables the empirical column).
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Overcrowding table ln P{N(r) >= q}.
    Overcrowd {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        q: Vec<usize>,
    },
    /// Kernel and one-point density on a square grid.
    Kernel {
        /// Grid covers [-extent, extent]^2.
        #[arg(long, default_value_t = 2.0)]
        extent: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
    },
    /// Run property suites; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// C(m) and the Euler–Maclaurin sums against direct summation.
    Constants {
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        terms: Vec<u64>,
    },
    /// Generalized quaternion Schur decomposition of matrices in a JSON file.
    Schur {
        #[arg(long)]
        input: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sample { .. } => "sample",
            Command::Radii { .. } => "radii",
            Command::Hole { .. } => "hole",
            Command::Overcrowd { .. } => "overcrowd",
            Command::Kernel { .. } => "kernel",
            Command::Verify { .. } => "verify",
            Command::Constants { .. } => "constants",
            Command::Schur { .. } => "schur",
        }
    }

    fn uses_spec(&self) -> bool {
        !matches!(self, Command::Verify { .. } | Command::Constants { .. } | Command::Schur { .. })
    }
}

/// JSON input of `schur`: quaternion entries as {"alpha": [re, im], "beta": [re, im]}.
#[derive(Debug, Deserialize)]
pub struct SchurInput {
    pub matrices: Vec<Vec<Vec<Quaternion>>>,
}

struct Output {
    body: String,
    failed: bool,
}

fn resolve_tol(flag: Option<f64>) -> HarnessResult<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(v) => v
                .trim()
                .parse::<f64>()
                .map_err(|_| HarnessError::Usage(format!("{TOL_ENV} must be a number, got {v:?}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(HarnessError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

fn build_spec(g: &GlobalArgs) -> HarnessResult<EnsembleSpec> {
    let beta = Beta::from_value(g.beta).map_err(|e| HarnessError::Usage(e.to_string()))?;
    let size = match g.dims.trim() {
        "inf" | "infinite" => MatrixSize::Infinite,
        s => MatrixSize::Finite(
            s.parse().map_err(|_| HarnessError::Usage(format!("--dims must be an integer or `inf`, got {s:?}")))?,
        ),
    };
    let m = match (g.n, g.m.len()) {
        (None, _) => g.m.clone(),
        (Some(n), 1) => vec![g.m[0]; n],
        (Some(n), len) if n == len => g.m.clone(),
        (Some(n), len) => {
            return Err(HarnessError::Usage(format!("--n {n} does not match {len} values of --m")));
        }
    };
    EnsembleSpec::new(beta, size, m).map_err(|e| HarnessError::Usage(e.to_string()))
}

fn render(report: &ExperimentReport, format: Format) -> HarnessResult<String> {
    Ok(match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json()?,
    })
}

fn grid_table(spec: &EnsembleSpec, extent: f64, points: usize, tol: f64) -> HarnessResult<Table> {
    if points < 2 || !(extent > 0.0) {
        return Err(HarnessError::Usage("kernel grid needs --points >= 2 and --extent > 0".into()));
    }
    let ks = KernelSpec::new(spec.clone()).with_rel_tol(tol.min(1e-8));
    let mut table = Table::new(&["re", "im", "kernel_re", "kernel_im", "rho1"]);
    let step = 2.0 * extent / (points - 1) as f64;
    for i in 0..points {
        for j in 0..points {
            let z = Complex64::new(-extent + i as f64 * step, -extent + j as f64 * step);
            let k = match spec.beta {
                Beta::Complex => kernel_complex(&ks, z, z)?,
                Beta::Quaternion => kernel_sn_quaternion(&ks, z, z.conj())?,
            };
            let rho = correlation_rho_ell(&ks, &[z])?;
            table.push(vec![Some(z.re), Some(z.im), Some(k.re), Some(k.im), Some(rho)]);
        }
    }
    Ok(table)
}

fn constants_table(ms: &[f64], terms: &[u64]) -> HarnessResult<Table> {
    let mut table = Table::new(&["m", "n", "constant_c", "constant_c_closed", "log_sum_error", "klogk_sum_error"]);
    for &m in ms {
        let c = constant_c(m)?;
        let closed = 0.5 * (2.0 * std::f64::consts::PI).ln() - ln_gamma(m + 1.0);
        for &n in terms {
            let log_err = euler_maclaurin_log_sum(m, n)?.error();
            let klogk_err = euler_maclaurin_klogk_sum(m, n)?.error();
            table.push(vec![Some(m), Some(n as f64), Some(c), Some(closed), Some(log_err), Some(klogk_err)]);
        }
    }
    Ok(table)
}

fn schur_report(path: &Path, tol: f64) -> HarnessResult<ExperimentReport> {
    let text = std::fs::read_to_string(path)?;
    let input: SchurInput =
        serde_json::from_str(&text).map_err(|e| HarnessError::Usage(format!("cannot parse {}: {e}", path.display())))?;
    if input.matrices.is_empty() {
        return Err(HarnessError::Usage("schur input holds no matrices".into()));
    }
    let mut ms = Vec::with_capacity(input.matrices.len());
    for rows in &input.matrices {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(HarnessError::Usage("every matrix must be square and nonempty".into()));
        }
        if ms.first().is_some_and(|m: &QuaternionMatrix| m.rows() != dim) {
            return Err(HarnessError::Usage("all matrices must share one size".into()));
        }
        ms.push(QuaternionMatrix::from_fn(dim, dim, |i, j| rows[i][j]));
    }
    let g = quat_generalized_schur(&ms)?;
    let mut report = ExperimentReport::new("schur", None, Seeds { master_seed: 0, workers: 1 });
    report.insert("reconstruction_error", Quantity::banded(g.reconstruction_error(&ms), 0.0, tol));
    let mut columns = vec!["index".to_string(), "eig_re".into(), "eig_im".into()];
    for a in 1..=ms.len() {
        columns.push(format!("s{a}_re"));
        columns.push(format!("s{a}_im"));
    }
    let mut table = Table { columns, rows: Vec::new() };
    for (b, eig) in g.eigenvalues().iter().enumerate() {
        let mut row = vec![Some(b as f64), Some(eig.re), Some(eig.im)];
        for s in &g.s {
            let d = s.get(b, b).alpha;
            row.push(Some(d.re));
            row.push(Some(d.im));
        }
        table.push(row);
    }
    report.table = Some(table);
    Ok(report)
}

fn execute(cli: &Cli, tol: f64, spec: Option<&EnsembleSpec>) -> HarnessResult<Output> {
    let g = &cli.global;
    let spec_ref = || spec.expect("spec resolved for this command");
    let started = Instant::now();
    let finish = |mut report: ExperimentReport| -> HarnessResult<Output> {
        if g.timing {
            report.runtime_ms = Some(started.elapsed().as_millis() as u64);
        }
        Ok(Output { failed: !report.passed(), body: render(&report, g.format)? })
    };
    match &cli.command {
        Command::Sample { count, method } => {
            if *count == 0 {
                return Err(HarnessError::Usage("--count must be >= 1".into()));
            }
            let config = SamplerConfig::new(spec_ref().clone(), g.seed, (*method).into()).with_workers(g.workers);
            config.validate().map_err(|e| HarnessError::Usage(e.to_string()))?;
            let samples = sample_product_eigenvalues(&config, *count)?;
            let body = match g.format {
                Format::Csv => samples_to_csv(&samples),
                Format::Json => serde_json::to_string_pretty(&samples)? + "\n",
            };
            Ok(Output { body, failed: false })
        }
        Command::Radii { count } => {
            if *count == 0 {
                return Err(HarnessError::Usage("--count must be >= 1".into()));
            }
            let rows = sample_radii_workers(spec_ref(), g.seed, *count, g.workers)?;
            let body = match g.format {
                Format::Csv => {
                    let width = rows.first().map_or(0, Vec::len);
                    let header: Vec<String> = (1..=width).map(|k| format!("r2_{k}")).collect();
                    let mut t = Table::new(&[]);
                    t.columns = std::iter::once("replica".to_string()).chain(header).collect();
                    for (i, row) in rows.iter().enumerate() {
                        t.push(std::iter::once(Some(i as f64)).chain(row.iter().map(|v| Some(*v))).collect());
                    }
                    t.to_csv()
                }
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            };
            Ok(Output { body, failed: false })
        }
        Command::Hole { r, samples } => {
            let report = run_hole_table(spec_ref(), r, *samples, g.seed, g.workers)?;
            Ok(Output { failed: false, ..finish(report)? })
        }
        Command::Overcrowd { r, q } => {
            let report = run_overcrowding_table(spec_ref(), *r, q)?;
            Ok(Output { failed: false, ..finish(report)? })
        }
        Command::Kernel { extent, points } => {
            let mut report = ExperimentReport::new("kernel", Some(spec_ref().clone()), Seeds { master_seed: g.seed, workers: 1 });
            report.table = Some(grid_table(spec_ref(), *extent, *points, tol)?);
            finish(report)
        }
        Command::Verify { suite, samples } => {
            if *samples == 0 {
                return Err(HarnessError::Usage("--samples must be >= 1".into()));
            }
            let opts = VerifyOptions { seed: g.seed, samples: *samples, workers: g.workers, tol };
            finish(run_verify(*suite, &opts)?)
        }
        Command::Constants { terms } => {
            if terms.is_empty() || terms.contains(&0) {
                return Err(HarnessError::Usage("--terms must list positive integers".into()));
            }
            let mut report = ExperimentReport::new("constants", None, Seeds { master_seed: 0, workers: 1 });
            report.table = Some(constants_table(&g.m, terms)?);
            finish(report)
        }
        Command::Schur { input } => finish(schur_report(input, tol)?),
    }
}

fn write_outputs(cli: &Cli, argv: &[String], tol: f64, spec: Option<EnsembleSpec>, body: &str) -> HarnessResult<()> {
    let g = &cli.global;
    let sidecar = RunSidecar {
        schema: SIDECAR_SCHEMA.into(),
        command: cli.command.name().into(),
        argv: argv.to_vec(),
        spec,
        seed: g.seed,
        workers: g.workers,
        tol,
        tool_version: TOOL_VERSION.into(),
    };
    match &g.out {
        Some(path) => {
            std::fs::write(path, body)?;
            let mut side = path.as_os_str().to_owned();
            side.push(".sidecar.json");
            std::fs::write(side, serde_json::to_string_pretty(&sidecar)? + "\n")?;
        }
        None => {
            print!("{body}");
            eprintln!("sidecar: {}", serde_json::to_string(&sidecar)?);
        }
    }
    Ok(())
}

/// Parses `argv` (program name first), runs the command and returns the exit code:
/// 0 on success, 1 on computation or verification failure, 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let result = (|| {
        let tol = resolve_tol(cli.global.tol)?;
        let spec = if cli.command.uses_spec() { Some(build_spec(&cli.global)?) } else { None };
        let out = execute(&cli, tol, spec.as_ref())?;
        write_outputs(&cli, &argv, tol, spec, &out.body)?;
        Ok::<bool, HarnessError>(out.failed)
    })();
    match result {
        Ok(false) => 0,
        Ok(true) => {
            eprintln!("error: verification failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
