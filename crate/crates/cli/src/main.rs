//! `painleve`: identity checks, trajectories and total integrals from the
//! command line.
//!
//! Exit codes: 0 success; 2 a check failed; 3 internal numeric error in the
//! identity suites; 4 parameters outside the two Ablowitz–Segur families;
//! 5 integrator failure; 64 malformed command line; 74 output not writable.

mod literal;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use painleve::identities::{full_suite, parametrix_suite, with_tolerance};
use painleve::totals::{period_averaged_total, raw_total, sweep, tail_fit_total};
use painleve::{pii_ode, ASParameters, Complex, Family, Grid, PIIProblem, SolverConfig};

use literal::parse_complex;
use output::{Format, Report};

const EXIT_FAIL: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_FAMILY: u8 = 4;
const EXIT_INTEGRATOR: u8 = 5;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "painleve", version, about = "Ablowitz-Segur solutions of Painleve II and their total integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every algebraic identity over a parameter grid.
    VerifyIdentities(IdentityArgs),
    /// Run only the Bessel-parametrix identities.
    ParametrixCheck(IdentityArgs),
    /// Sample u and u' on a uniform grid from --xmin to the anchor.
    Solve(SolveArgs),
    /// Total integral of u compared with its closed form.
    Integral(IntegralArgs),
    /// Total integrals over a grid of (alpha, k), computed concurrently.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a provenance block (version, tolerances, grid) to JSON output.
    #[arg(long)]
    seed_report: bool,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    alpha: Complex,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    k: Complex,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Real-axis anchor where the summed asymptotic series takes over.
    #[arg(long = "anchor-L", default_value_t = 12.0)]
    anchor_l: f64,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig, String> {
        let cfg = SolverConfig { anchor_l: self.anchor_l, rel_tol: self.rtol, ..SolverConfig::default() };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, value_parser = parse_grid, default_value = "default")]
    grid: Grid,
    /// Replace every identity's tolerance with this value.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    xmin: f64,
    /// Number of grid points, both ends included.
    #[arg(long, default_value_t = 201)]
    npoints: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Averaged,
    Raw,
    TailFit,
}

#[derive(Args)]
struct TotalArgs {
    #[arg(long, default_value_t = 150.0)]
    xbase: f64,
    #[arg(long, default_value_t = 8)]
    nsamples: usize,
    #[arg(long, default_value_t = 2e-3)]
    tol: f64,
}

#[derive(Args)]
struct IntegralArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    total: TotalArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Averaged)]
    method: MethodArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in cell grid, used unless --alphas and --ks are given.
    #[arg(long, value_parser = parse_grid, default_value = "default")]
    grid: Grid,
    /// Comma-separated alphas; with --ks forms a Cartesian grid.
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    ks: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    total: TotalArgs,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Include per-cell wall time (makes the output non-reproducible).
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse::<Grid>().map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> Result<Vec<Complex>, String> {
    s.split(',').map(parse_complex).collect()
}

/// Built-in sweep cells. Real cells use k = f·cos πα.
fn sweep_cells(grid: Grid) -> Vec<(Complex, Complex)> {
    let real = |alphas: &[f64], fracs: &[f64]| -> Vec<(Complex, Complex)> {
        alphas
            .iter()
            .flat_map(|&a| fracs.iter().map(move |&f| (Complex::new(a, 0.0), Complex::new(f * (PI * a).cos(), 0.0))))
            .collect()
    };
    match grid {
        Grid::Minimal => real(&[0.0], &[0.5]),
        Grid::Default => real(&[-0.25, 0.0, 0.25], &[-0.5, 0.3, 0.8]),
        Grid::Dense => {
            let mut v = real(&[-0.4, -0.2, 0.0, 0.2, 0.4], &[-0.9, -0.5, 0.0, 0.5, 0.9]);
            for a in [0.1, 0.3] {
                for k in [-0.7, 0.4] {
                    v.push((Complex::new(0.0, a), Complex::new(0.0, k)));
                }
            }
            v
        }
    }
}

/// Outcome of a command: the report to print and the exit code.
type Outcome = Result<(Report, u8), (String, u8)>;

fn check_family(alpha: Complex, k: Complex) -> Result<(), (String, u8)> {
    match ASParameters::new(alpha, k).family {
        Family::RealAS | Family::ImaginaryAS => Ok(()),
        Family::HMBoundary => {
            Err((format!("alpha = {alpha}, k = {k} is on the Hastings-McLeod boundary"), EXIT_FAMILY))
        }
        Family::Other => {
            Err((format!("alpha = {alpha}, k = {k} is outside both Ablowitz-Segur families"), EXIT_FAMILY))
        }
    }
}

fn usage(e: String) -> (String, u8) {
    (e, EXIT_USAGE)
}

fn integrator(e: painleve::Error) -> (String, u8) {
    (e.to_string(), EXIT_INTEGRATOR)
}

fn run_identities(args: &IdentityArgs, parametrix_only: bool) -> Outcome {
    let reps = if parametrix_only { parametrix_suite(args.grid) } else { full_suite(args.grid) };
    let mut reps = reps.map_err(|e| (e.to_string(), EXIT_INTERNAL))?;
    if let Some(t) = args.tol {
        reps = with_tolerance(reps, t);
    }
    let pass = reps.iter().all(|r| r.pass);
    let name = if parametrix_only { "parametrix-check" } else { "verify-identities" };
    Ok((Report::identities(name, args.grid, reps), if pass { 0 } else { EXIT_FAIL }))
}

fn run_solve(args: &SolveArgs) -> Outcome {
    let cfg = args.solver.config().map_err(usage)?;
    if args.npoints < 2 {
        return Err(usage("--npoints must be at least 2".into()));
    }
    let ParamArgs { alpha, k } = args.params;
    check_family(alpha, k)?;
    let problem = PIIProblem::new(alpha, k).map_err(|e| (e.to_string(), EXIT_FAMILY))?;
    if !(args.xmin < cfg.anchor_l) {
        return Err(usage(format!("--xmin must be below the anchor {}", cfg.anchor_l)));
    }
    let traj = pii_ode::integrate(&problem, args.xmin, &cfg).map_err(integrator)?;
    let samples = traj.uniform_samples(args.npoints).map_err(integrator)?;
    Ok((Report::solve(alpha, k, cfg, samples), 0))
}

fn run_integral(args: &IntegralArgs) -> Outcome {
    let cfg = args.solver.config().map_err(usage)?;
    let ParamArgs { alpha, k } = args.params;
    check_family(alpha, k)?;
    let problem = PIIProblem::new(alpha, k).map_err(|e| (e.to_string(), EXIT_FAMILY))?;
    let t = &args.total;
    if !(t.xbase >= 40.0) || t.nsamples < 4 {
        return Err(usage("--xbase must be at least 40 and --nsamples at least 4".into()));
    }
    let res = match args.method {
        MethodArg::Averaged => period_averaged_total(&problem, t.xbase, t.nsamples, &cfg),
        MethodArg::Raw => raw_total(&problem, t.xbase, &cfg),
        MethodArg::TailFit => tail_fit_total(&problem, t.xbase, t.nsamples, &cfg),
    }
    .map_err(integrator)?;
    let pass = res.abs_error <= t.tol;
    Ok((Report::integral(alpha, k, cfg, t.nsamples, t.tol, res), if pass { 0 } else { EXIT_FAIL }))
}

fn run_sweep(args: &SweepArgs) -> Outcome {
    let cfg = args.solver.config().map_err(usage)?;
    let cells = match (&args.alphas, &args.ks) {
        (Some(a), Some(k)) => {
            let (a, k) = (parse_list(a).map_err(usage)?, parse_list(k).map_err(usage)?);
            a.iter().flat_map(|&x| k.iter().map(move |&y| (x, y))).collect()
        }
        (None, None) => sweep_cells(args.grid),
        _ => return Err(usage("--alphas and --ks must be given together".into())),
    };
    for &(a, k) in &cells {
        check_family(a, k)?;
    }
    let t = &args.total;
    if !(t.xbase >= 40.0) || t.nsamples < 4 {
        return Err(usage("--xbase must be at least 40 and --nsamples at least 4".into()));
    }
    let jobs = args.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(usage("--jobs must be at least 1".into()));
    }
    let rep = sweep(&cells, t.xbase, t.nsamples, &cfg, jobs).map_err(integrator)?;
    let pass = rep.rows.iter().all(|r| r.abs_error <= t.tol);
    Ok((Report::sweep(args.grid, cfg, t.nsamples, t.tol, rep, args.timings), if pass { 0 } else { EXIT_FAIL }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (outcome, out) = match &cli.command {
        Command::VerifyIdentities(a) => (run_identities(a, false), &a.output),
        Command::ParametrixCheck(a) => (run_identities(a, true), &a.output),
        Command::Solve(a) => (run_solve(a), &a.output),
        Command::Integral(a) => (run_integral(a), &a.output),
        Command::Sweep(a) => (run_sweep(a), &a.output),
    };
    match outcome {
        Ok((report, code)) => {
            if let Err(e) = report.write(out.format, out.out.as_deref(), out.seed_report) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_IO);
            }
            ExitCode::from(code)
        }
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
