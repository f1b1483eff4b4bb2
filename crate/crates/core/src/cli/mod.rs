//! Command-line front end: argument parsing, dataset assembly and exit codes.

mod output;

pub use output::{fmt_num, write_csv, write_json, Cell, ConfigEcho, Dataset, TOOL, VERSION};

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decoherence::{gamma_with, BathSpec, Route, DEFAULT_TOL};
use crate::error::Error;
use crate::estimation::{fi_sigma1, qfi_closed};
use crate::fit::geometric_grid;
use crate::optimizer::{maximize_qsnr, scan_cutoff, verify_maximum, OptimizationResult};
use crate::validation::{optimality_identity, triple_agreement, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;
pub const EXIT_BOUNDARY: i32 = 4;

pub const FIG1_S: [f64; 3] = [0.5, 1.0, 3.0];
pub const FIG1_OMEGA_C: [f64; 3] = [1e-2, 1.0, 1e2];
pub const FIG1_LEFT_TEMPERATURE: f64 = 1e2;
pub const FIG1_RIGHT_TEMPERATURE: f64 = 1e-2;
pub const FIG2_S: [f64; 3] = [0.5, 1.0, 3.0];
pub const FIG2_TEMPERATURES: [f64; 5] = [0.1, 0.5, 1.0, 5.0, 10.0];

const DEFAULT_TAU_RANGE: (f64, f64, usize) = (1e-2, 1e2, 41);
const DEFAULT_OMEGA_C_RANGE: (f64, f64, usize) = (1e-3, 1e3, 25);

#[derive(Parser, Debug)]
#[command(
    name = "ohmic-probe",
    version,
    about = "Dephasing qubit probe of an Ohmic-class bath: decoherence, QFI and optimal interaction times"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decoherence function at one or more interaction times.
    #[command(allow_negative_numbers = true)]
    Gamma {
        #[command(flatten)]
        bath: BathArgs,
        #[command(flatten)]
        times: TauArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Quantum Fisher information, sigma_x Fisher information and QSNR.
    #[command(allow_negative_numbers = true)]
    Qfi {
        #[command(flatten)]
        bath: BathArgs,
        #[command(flatten)]
        times: TauArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Interaction time maximising the QSNR.
    #[command(allow_negative_numbers = true)]
    Optimize {
        #[command(flatten)]
        bath: BathArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Optimal time and QSNR over a grid of cutoffs, with zero-temperature reference.
    #[command(allow_negative_numbers = true)]
    Scan {
        /// Ohmicity values, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = FIG2_S.to_vec())]
        s: Vec<f64>,
        /// Temperatures, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = FIG2_TEMPERATURES.to_vec())]
        temp: Vec<f64>,
        #[command(flatten)]
        cutoffs: CutoffArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Preset curve families (decoherence vs time, optimum vs cutoff).
    #[command(allow_negative_numbers = true)]
    Figures {
        #[arg(long, value_enum)]
        preset: Preset,
        #[command(flatten)]
        times: TauArgs,
        #[command(flatten)]
        cutoffs: CutoffArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluator agreement and measurement-optimality suites.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BathArgs {
    /// Ohmicity parameter s > 0.
    #[arg(long)]
    pub s: f64,
    /// Cutoff frequency omega_c > 0.
    #[arg(long)]
    pub omega_c: f64,
    /// Bath temperature T >= 0.
    #[arg(long)]
    pub temp: f64,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TauArgs {
    /// Interaction times, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub tau: Vec<f64>,
    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Number of geometrically spaced times in [tau-min, tau-max].
    #[arg(long)]
    pub tau_points: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CutoffArgs {
    #[arg(long)]
    pub omega_c_min: Option<f64>,
    #[arg(long)]
    pub omega_c_max: Option<f64>,
    /// Number of geometrically spaced cutoffs in [omega-c-min, omega-c-max].
    #[arg(long)]
    pub omega_c_points: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Relative tolerance of the series and quadrature evaluators.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Treat a maximum on the edge of the search domain as a failure.
    #[arg(long)]
    pub strict: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Auto,
    Closed,
    Series,
    Quadrature,
}

impl MethodArg {
    fn route(self) -> Route {
        match self {
            MethodArg::Auto => Route::Auto,
            MethodArg::Closed => Route::Closed,
            MethodArg::Series => Route::Series,
            MethodArg::Quadrature => Route::Quadrature,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Auto => "auto",
            MethodArg::Closed => "closed",
            MethodArg::Series => "series",
            MethodArg::Quadrature => "quadrature",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Gamma vs tau at T = 1e2 and T = 1e-2.
    Fig1,
    /// Gamma vs tau at T = 1e2.
    Fig1Left,
    /// Gamma vs tau at T = 1e-2.
    Fig1Right,
    /// Optimal time and QSNR vs cutoff.
    Fig2,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig1Left => "fig1-left",
            Preset::Fig1Right => "fig1-right",
            Preset::Fig2 => "fig2",
        }
    }
}

/// Failure of a run before any output is produced.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_non_convergence() {
            CliError::Numerical(e)
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NON_CONVERGENCE,
        }
    }
}

/// A finished run: the dataset plus anything that should affect the exit code.
#[derive(Debug, Default)]
pub struct Report {
    pub config: ConfigEcho,
    pub data: Dataset,
    /// Points that failed numerically; the rest of the dataset is still written.
    pub failures: Vec<String>,
    /// Optima found on the edge of their search domain.
    pub boundary_hits: Vec<String>,
}

impl Report {
    pub fn exit_code(&self, strict: bool) -> i32 {
        if !self.failures.is_empty() {
            EXIT_NON_CONVERGENCE
        } else if strict && !self.boundary_hits.is_empty() {
            EXIT_BOUNDARY
        } else {
            EXIT_OK
        }
    }
}

/// Parse `args` (program name first), run, write output. Returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap reports --help and --version as "errors" with exit code 0.
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_CONFIG };
        }
    };
    let common = cli.command.common().clone();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = match &e {
                CliError::Config(msg) => writeln!(stderr, "error: {msg}"),
                CliError::Numerical(err) => writeln!(stderr, "error: {err}"),
            };
            return e.exit_code();
        }
    };
    for w in &report.boundary_hits {
        let _ = writeln!(stderr, "warning: maximum on search-domain edge: {w}");
    }
    for f in &report.failures {
        let _ = writeln!(stderr, "error: {f}");
    }
    if let Err(e) = emit(&report, &common, stdout) {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_CONFIG;
    }
    report.exit_code(common.strict)
}

fn emit(report: &Report, common: &CommonArgs, stdout: &mut dyn Write) -> io::Result<()> {
    let write = |out: &mut dyn Write| match common.format {
        Format::Csv => write_csv(out, &report.config, &report.data),
        Format::Json => write_json(out, &report.config, &report.data),
    };
    match &common.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()
        }
        None => write(stdout),
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gamma { .. } => "gamma",
            Command::Qfi { .. } => "qfi",
            Command::Optimize { .. } => "optimize",
            Command::Scan { .. } => "scan",
            Command::Figures { .. } => "figures",
            Command::Validate { .. } => "validate",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Gamma { common, .. }
            | Command::Qfi { common, .. }
            | Command::Optimize { common, .. }
            | Command::Scan { common, .. }
            | Command::Figures { common, .. }
            | Command::Validate { common } => common,
        }
    }
}

/// Execute a parsed command.
pub fn run(command: &Command) -> Result<Report, CliError> {
    let common = command.common();
    if !(common.tol.is_finite() && common.tol > 0.0) {
        return Err(CliError::Config(format!(
            "--tol {} must be finite and > 0",
            common.tol
        )));
    }
    let mut config = ConfigEcho::default();
    config.add("command", command.name());

    let mut report = match command {
        Command::Gamma {
            bath,
            times,
            common,
        } => {
            let bath = bath_from(bath, &mut config)?;
            let taus = resolve_taus(times, None, &mut config)?;
            run_gamma(&bath, &taus, common)?
        }
        Command::Qfi {
            bath,
            times,
            common,
        } => {
            require_closed_route(common)?;
            let bath = bath_from(bath, &mut config)?;
            let taus = resolve_taus(times, None, &mut config)?;
            run_qfi(&bath, &taus)?
        }
        Command::Optimize { bath, common } => {
            require_closed_route(common)?;
            let bath = bath_from(bath, &mut config)?;
            run_optimize(&bath)?
        }
        Command::Scan {
            s,
            temp,
            cutoffs,
            common,
        } => {
            require_closed_route(common)?;
            check_list("--s", s, |x| x > 0.0)?;
            check_list("--temp", temp, |x| x >= 0.0)?;
            config.add_list("s", s);
            config.add_list("temp", temp);
            let grid = resolve_cutoffs(cutoffs, &mut config)?;
            cutoff_scan(s, temp, &grid)
        }
        Command::Figures {
            preset,
            times,
            cutoffs,
            common,
        } => {
            config.add("preset", preset.name());
            match preset {
                Preset::Fig2 => {
                    require_closed_route(common)?;
                    let grid = resolve_cutoffs(cutoffs, &mut config)?;
                    cutoff_scan(&FIG2_S, &FIG2_TEMPERATURES, &grid)
                }
                _ => {
                    let temps: &[f64] = match preset {
                        Preset::Fig1Left => &[FIG1_LEFT_TEMPERATURE],
                        Preset::Fig1Right => &[FIG1_RIGHT_TEMPERATURE],
                        _ => &[FIG1_LEFT_TEMPERATURE, FIG1_RIGHT_TEMPERATURE],
                    };
                    let taus = resolve_taus(times, Some(DEFAULT_TAU_RANGE), &mut config)?;
                    run_fig1(temps, &taus, common)?
                }
            }
        }
        Command::Validate { common } => run_validate(common.tol),
    };

    config.add("method", common.method.name());
    config.add_num("tol", common.tol);
    config.add("units", "_w0units");
    report.config = config;
    Ok(report)
}

fn bath_from(args: &BathArgs, config: &mut ConfigEcho) -> Result<BathSpec, CliError> {
    let bath = BathSpec::new(args.s, args.omega_c, args.temp)?;
    config.add_num("s", args.s);
    config.add_num("omega_c", args.omega_c);
    config.add_num("temp", args.temp);
    Ok(bath)
}

fn require_closed_route(common: &CommonArgs) -> Result<(), CliError> {
    match common.method {
        MethodArg::Auto | MethodArg::Closed => Ok(()),
        m => Err(CliError::Config(format!(
            "--method {} applies to decoherence values only (gamma, figures fig1*)",
            m.name()
        ))),
    }
}

fn check_list(flag: &str, xs: &[f64], ok: impl Fn(f64) -> bool) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(CliError::Config(format!("{flag} needs at least one value")));
    }
    match xs.iter().find(|&&x| !(x.is_finite() && ok(x))) {
        Some(bad) => Err(CliError::Config(format!(
            "{flag}: value {bad} out of range"
        ))),
        None => Ok(()),
    }
}

/// Geometric range from optional min/max/points flags, falling back to `default`.
fn resolve_range(
    names: [&'static str; 3],
    min: Option<f64>,
    max: Option<f64>,
    points: Option<usize>,
    default: Option<(f64, f64, usize)>,
    config: &mut ConfigEcho,
) -> Result<Option<Vec<f64>>, CliError> {
    let (lo, hi, n) = match (min, max, points, default) {
        (None, None, None, None) => return Ok(None),
        (None, None, None, Some(d)) => d,
        (Some(lo), Some(hi), Some(n), _) => (lo, hi, n),
        (lo, hi, n, Some(d)) => (lo.unwrap_or(d.0), hi.unwrap_or(d.1), n.unwrap_or(d.2)),
        _ => {
            return Err(CliError::Config(format!(
                "--{}, --{} and --{} must be given together",
                names[0].replace('_', "-"),
                names[1].replace('_', "-"),
                names[2].replace('_', "-")
            )))
        }
    };
    let valid =
        lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo && n >= 1 && (n == 1 || hi > lo);
    if !valid {
        return Err(CliError::Config(format!(
            "range [{lo}, {hi}] with {n} points is empty or not positive"
        )));
    }
    config.add_num(names[0], lo);
    config.add_num(names[1], hi);
    config.add(names[2], n.to_string());
    Ok(Some(geometric_grid(lo, hi, n)))
}

fn resolve_taus(
    args: &TauArgs,
    default: Option<(f64, f64, usize)>,
    config: &mut ConfigEcho,
) -> Result<Vec<f64>, CliError> {
    let has_range = args.tau_min.is_some() || args.tau_max.is_some() || args.tau_points.is_some();
    if !args.tau.is_empty() {
        if has_range {
            return Err(CliError::Config(
                "--tau cannot be combined with --tau-min/--tau-max/--tau-points".into(),
            ));
        }
        check_list("--tau", &args.tau, |x| x >= 0.0)?;
        config.add_list("tau", &args.tau);
        return Ok(args.tau.clone());
    }
    resolve_range(
        ["tau_min", "tau_max", "tau_points"],
        args.tau_min,
        args.tau_max,
        args.tau_points,
        default,
        config,
    )?
    .ok_or_else(|| CliError::Config("give --tau or --tau-min/--tau-max/--tau-points".into()))
}

fn resolve_cutoffs(args: &CutoffArgs, config: &mut ConfigEcho) -> Result<Vec<f64>, CliError> {
    Ok(resolve_range(
        ["omega_c_min", "omega_c_max", "omega_c_points"],
        args.omega_c_min,
        args.omega_c_max,
        args.omega_c_points,
        Some(DEFAULT_OMEGA_C_RANGE),
        config,
    )?
    .expect("default range present"))
}

fn run_gamma(bath: &BathSpec, taus: &[f64], common: &CommonArgs) -> Result<Report, CliError> {
    let mut data = Dataset::new(&["tau", "gamma", "method", "err_estimate"]);
    for &tau in taus {
        let g = gamma_with(common.method.route(), tau, bath, common.tol)?;
        data.push(vec![
            tau.into(),
            g.value.into(),
            g.method.as_str().into(),
            g.err_estimate.into(),
        ]);
    }
    Ok(Report {
        data,
        ..Report::default()
    })
}

fn run_qfi(bath: &BathSpec, taus: &[f64]) -> Result<Report, CliError> {
    let wc = bath.omega_c();
    let mut data = Dataset::new(&["tau", "qfi", "fi_sigma1", "qsnr"]);
    for &tau in taus {
        let h = qfi_closed(tau, bath)?;
        let f = fi_sigma1(tau, bath)?;
        data.push(vec![tau.into(), h.into(), f.into(), (wc * wc * h).into()]);
    }
    Ok(Report {
        data,
        ..Report::default()
    })
}

fn run_optimize(bath: &BathSpec) -> Result<Report, CliError> {
    let r = maximize_qsnr(bath)?;
    let verified = verify_maximum(bath, &r)?;
    let mut data = Dataset::new(&[
        "s",
        "omega_c",
        "temp",
        "tau_opt",
        "q_opt",
        "n_evals",
        "bracket_lo",
        "bracket_hi",
        "converged",
        "at_domain_edge",
        "verified",
    ]);
    data.push(vec![
        bath.s().into(),
        bath.omega_c().into(),
        bath.temperature().into(),
        r.tau_opt.into(),
        r.q_opt.into(),
        r.n_evals.into(),
        r.bracket[0].into(),
        r.bracket[1].into(),
        r.converged.into(),
        r.at_domain_edge.into(),
        verified.into(),
    ]);
    let mut report = Report {
        data,
        ..Report::default()
    };
    if r.at_domain_edge {
        report
            .boundary_hits
            .push(describe(bath.s(), bath.temperature(), bath.omega_c(), &r));
    }
    Ok(report)
}

fn describe(s: f64, t: f64, wc: f64, r: &OptimizationResult) -> String {
    format!("s={s} T={t} omega_c={wc}: tau_opt={}", r.tau_opt)
}

pub const SCAN_COLUMNS: [&str; 8] = [
    "s",
    "temp",
    "omega_c",
    "tau_opt",
    "q_opt",
    "q_opt_zero_temp",
    "converged",
    "at_domain_edge",
];

/// Optimal times over `grid` for every `(s, T)`, each row carrying the `T = 0`
/// optimum at the same cutoff. Failed points are reported and left out.
fn cutoff_scan(s_values: &[f64], temps: &[f64], grid: &[f64]) -> Report {
    let mut report = Report {
        data: Dataset::new(&SCAN_COLUMNS),
        ..Report::default()
    };
    for &s in s_values {
        let reference = scan_cutoff(s, 0.0, grid);
        for &t in temps {
            for ((wc, result), (_, zero)) in scan_cutoff(s, t, grid).into_iter().zip(&reference) {
                let (r, q0) = match (result, zero) {
                    (Ok(r), Ok(z)) => (r, z.q_opt),
                    (Err(e), _) => {
                        report
                            .failures
                            .push(format!("s={s} T={t} omega_c={wc}: {e}"));
                        continue;
                    }
                    (_, Err(e)) => {
                        report.failures.push(format!("s={s} T=0 omega_c={wc}: {e}"));
                        continue;
                    }
                };
                if r.at_domain_edge {
                    report.boundary_hits.push(describe(s, t, wc, &r));
                }
                report.data.push(vec![
                    s.into(),
                    t.into(),
                    wc.into(),
                    r.tau_opt.into(),
                    r.q_opt.into(),
                    q0.into(),
                    r.converged.into(),
                    r.at_domain_edge.into(),
                ]);
            }
        }
    }
    report
}

pub const FIG1_COLUMNS: [&str; 5] = ["s", "omega_c", "temp", "tau", "gamma"];

fn run_fig1(temps: &[f64], taus: &[f64], common: &CommonArgs) -> Result<Report, CliError> {
    let mut data = Dataset::new(&FIG1_COLUMNS);
    for &t in temps {
        for s in FIG1_S {
            for wc in FIG1_OMEGA_C {
                let bath = BathSpec::new(s, wc, t)?;
                for &tau in taus {
                    let g = gamma_with(common.method.route(), tau, &bath, common.tol)?;
                    data.push(vec![
                        s.into(),
                        wc.into(),
                        t.into(),
                        tau.into(),
                        g.value.into(),
                    ]);
                }
            }
        }
    }
    Ok(Report {
        data,
        ..Report::default()
    })
}

fn run_validate(tol: f64) -> Report {
    let mut report = Report {
        data: Dataset::new(&["suite", "checks", "passed", "failed", "worst_band_ratio"]),
        ..Report::default()
    };
    let suites: [SuiteReport; 2] = [triple_agreement(tol), optimality_identity()];
    for suite in suites {
        report.data.push(vec![
            suite.suite.into(),
            suite.checks.into(),
            (suite.checks - suite.failed).into(),
            suite.failed.into(),
            suite.worst_band_ratio.into(),
        ]);
        if let Some(f) = &suite.first_failure {
            report.failures.push(format!(
                "{}: {} failures, first at {f}",
                suite.suite, suite.failed
            ));
        }
    }
    report
}
