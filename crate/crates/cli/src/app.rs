//! Argument parsing and command dispatch.

use std::env;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use geogate::dynamics::{analyze_cyclic_evolution, EvolutionOptions, DEFAULT_STEPS};
use geogate::formulas::{conditional_phases, single_qubit_phases, TwoQubitParams};
use geogate::newton::NewtonOptions;
use geogate::phase::PhaseTriple;
use geogate::segment::{ControlState, RotatingFieldSegment};
use geogate::solvers::{sweep_single_qubit, Pin, SingleQubitProblem};
use geogate::Error;

use crate::config::{ConfigFile, Grid};
use crate::figures::{self, integrated_dynamic_phase, Figure};
use crate::table::{format_number, Cell, Table};
use crate::verify::{parse_suites, run_suite, VerifySettings};

/// Environment variable naming the default directory for CSV output.
pub const OUT_DIR_ENV: &str = "GEOGATE_OUT_DIR";

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "geogate", version, about = "Geometric-phase gate workbench")]
pub struct Cli {
    /// Plain-text `key = value` file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Integration steps per cycle.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Phase tolerance for numeric vs closed-form comparisons.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form and integrated phases of one cyclic evolution.
    Phases(PhasesArgs),
    /// Write a figure dataset as CSV.
    Figure(FigureArgs),
    /// Run invariant suites.
    Verify(VerifyArgs),
    /// Solve two-loop design equations.
    #[command(subcommand)]
    Solve(SolveKind),
}

#[derive(Debug, Args)]
pub struct PhasesArgs {
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub omega1: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// Coupling; with --delta, phases are conditional on the control state.
    #[arg(long = "J", alias = "j")]
    pub j: Option<f64>,
    #[arg(long)]
    pub delta: Option<u8>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig1, fig2, fig3a or fig3b.
    pub name: String,
    /// `start:stop:step` or `start:stop:nPOINTS`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// phases, gates, darkstates, multiloop or all.
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum SolveKind {
    /// Single-qubit two-loop scheme with one pinned unknown.
    Single(SingleArgs),
    /// Two-qubit two-loop scheme swept over ω.
    Twoqubit(TwoQubitArgs),
}

#[derive(Debug, Args)]
pub struct SingleArgs {
    /// Target geometric phase is -Γπ.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub omega1: Option<f64>,
    #[arg(long = "omega1-prime", alias = "omega1p")]
    pub omega1_prime: Option<f64>,
    #[arg(long)]
    pub pin_omega0: Option<f64>,
    #[arg(long)]
    pub pin_omega: Option<f64>,
    #[arg(long = "pin-omega0-prime", alias = "pin-omega0p")]
    pub pin_omega0_prime: Option<f64>,
    /// Sweep the pinned unknown (ω₀ unless --pin says otherwise).
    #[arg(long)]
    pub pin_grid: Option<String>,
    /// Which unknown --pin-grid sweeps: omega0, omega or omega0-prime.
    #[arg(long)]
    pub pin: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TwoQubitArgs {
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub omega1: Option<f64>,
    #[arg(long = "J", alias = "j")]
    pub j: Option<f64>,
    #[arg(long)]
    pub omega_grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A command failure carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_)
            | Error::NotNormalized { .. }
            | Error::NotUnitVector { .. }
            | Error::TooFewSteps { .. }
            | Error::Degenerate(_)
            | Error::Domain(_) => EXIT_DOMAIN,
            Error::NonCyclic { .. }
            | Error::OpenPath { .. }
            | Error::NoConvergence { .. }
            | Error::ConstraintViolated(_) => EXIT_FAILURE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Self::usage(message)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

/// Settings shared by every command after merging flags and the config file.
#[derive(Debug, Clone)]
struct Context {
    file: ConfigFile,
    steps: usize,
    tolerance: f64,
    out_dir: Option<PathBuf>,
}

impl Context {
    fn new(cli: &Cli) -> Result<Self, Failure> {
        let file = match &cli.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let steps = file.resolve(cli.steps, "steps", DEFAULT_STEPS)?;
        let tolerance = file.resolve(cli.tolerance, "tolerance", 1e-6)?;
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Failure::usage(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        let out_dir = file
            .get::<PathBuf>("out_dir")?
            .or_else(|| env::var_os(OUT_DIR_ENV).map(PathBuf::from));
        Ok(Self {
            file,
            steps,
            tolerance,
            out_dir,
        })
    }

    fn require(&self, flag: Option<f64>, key: &str) -> Result<f64, Failure> {
        self.file
            .resolve_opt(flag, key)?
            .ok_or_else(|| Failure::usage(format!("missing --{}", key.replace('_', "-"))))
    }

    fn evolution(&self) -> EvolutionOptions {
        EvolutionOptions::with_steps(self.steps)
    }

    /// Where a CSV goes: explicit path, else `<out_dir>/<default_name>`,
    /// else standard output.
    fn destination(
        &self,
        flag: Option<PathBuf>,
        default_name: &str,
    ) -> Result<Option<PathBuf>, Failure> {
        if let Some(p) = self.file.resolve_opt(flag, "out")? {
            return Ok(Some(p));
        }
        Ok(self.out_dir.as_ref().map(|d| d.join(default_name)))
    }
}

fn emit(
    table: &Table,
    destination: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<()> {
    match destination {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, table.to_csv())?;
            writeln!(err, "wrote {} rows to {}", table.rows.len(), path.display())
        }
        None => table.write_to(out),
    }
}

/// Parses `args` and runs the command, writing to the given sinks.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let ctx = Context::new(&cli)?;
    match cli.command {
        Command::Phases(args) => cmd_phases(&ctx, args, out),
        Command::Figure(args) => cmd_figure(&ctx, args, out, err),
        Command::Verify(args) => cmd_verify(&ctx, args, out),
        Command::Solve(SolveKind::Single(args)) => cmd_solve_single(&ctx, args, out, err),
        Command::Solve(SolveKind::Twoqubit(args)) => cmd_solve_twoqubit(&ctx, args, out, err),
    }
}

fn phase_line(out: &mut dyn Write, name: &str, closed: f64, numeric: f64) -> io::Result<()> {
    let pi = std::f64::consts::PI;
    writeln!(
        out,
        "{name:<8} {:>20} {:>20} {:>20} {:>20} {:>12}",
        format_number(closed),
        format_number(closed / pi),
        format_number(numeric),
        format_number(numeric / pi),
        format!("{:.3e}", (closed - numeric).abs()),
    )
}

fn cmd_phases(ctx: &Context, args: PhasesArgs, out: &mut dyn Write) -> CmdResult {
    let omega0 = ctx.require(args.omega0, "omega0")?;
    let omega1 = ctx.require(args.omega1, "omega1")?;
    let omega = ctx.require(args.omega, "omega")?;
    let j = ctx.file.resolve_opt(args.j, "j")?;
    let delta = ctx.file.resolve_opt(args.delta, "delta")?;

    let (closed, segment): (PhaseTriple, RotatingFieldSegment) = match (j, delta) {
        (None, None) => (
            single_qubit_phases(omega0, omega1, omega)?,
            RotatingFieldSegment::new(omega0, omega1, omega)?,
        ),
        (Some(j), Some(d)) => {
            let params = TwoQubitParams {
                omega0,
                omega1,
                omega,
                j,
                delta: ControlState::from_index(d)?,
            };
            (conditional_phases(&params)?, params.effective_segment()?)
        }
        _ => return Err(Failure::usage("--J and --delta go together")),
    };
    let chi = segment.chi()?;
    let evo = analyze_cyclic_evolution(&segment, &segment.cyclic_state()?, &ctx.evolution())?;
    let numeric = evo.phases;

    writeln!(
        out,
        "omega0 = {omega0}, omega1 = {}, omega = {omega}",
        segment.omega1
    )?;
    writeln!(
        out,
        "chi = {} rad = {} pi",
        format_number(chi),
        format_number(chi / std::f64::consts::PI)
    )?;
    writeln!(
        out,
        "{:<8} {:>20} {:>20} {:>20} {:>20} {:>12}",
        "phase", "closed [rad]", "closed [pi]", "numeric [rad]", "numeric [pi]", "|diff|"
    )?;
    phase_line(out, "gamma_g", closed.geometric, numeric.geometric)?;
    phase_line(out, "gamma_d", closed.dynamic, numeric.dynamic)?;
    phase_line(out, "gamma", closed.total, numeric.total)?;
    writeln!(
        out,
        "overlap arg = {} rad, cyclicity defect = {:.3e}",
        format_number(evo.overlap_phase),
        evo.defect.abs()
    )?;
    let worst = closed
        .max_abs_diff(&numeric)
        .max(evo.total_phase_mismatch());
    if worst < ctx.tolerance {
        writeln!(
            out,
            "match OK (max deviation {worst:.3e} < {:.1e})",
            ctx.tolerance
        )?;
        Ok(EXIT_OK)
    } else {
        writeln!(
            out,
            "match FAILED (max deviation {worst:.3e} >= {:.1e})",
            ctx.tolerance
        )?;
        Ok(EXIT_FAILURE)
    }
}

fn grid_from(
    ctx: &Context,
    flag: Option<String>,
    key: &str,
    default: Grid,
) -> Result<Grid, Failure> {
    match ctx.file.resolve_opt(flag, key)? {
        Some(spec) => Ok(spec.parse::<Grid>()?),
        None => Ok(default),
    }
}

fn cmd_figure(
    ctx: &Context,
    args: FigureArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let figure: Figure = args.name.parse()?;
    let grid = grid_from(ctx, args.grid, "grid", figure.default_grid())?;
    let data = figures::generate(figure, &grid)?;
    let destination = ctx.destination(args.out, &format!("{}.csv", figure.name()))?;
    emit(&data.table, destination, out, err)?;
    if data.failures > 0 {
        writeln!(
            err,
            "{} of {} rows failed",
            data.failures,
            data.table.rows.len()
        )?;
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &Context, args: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let suites = parse_suites(&args.suite)?;
    let defaults = VerifySettings::default();
    let settings = VerifySettings {
        steps: ctx.steps,
        tolerance: ctx.tolerance,
        seed: ctx.file.resolve(args.seed, "seed", defaults.seed)?,
    };
    let mut all_passed = true;
    for suite in suites {
        let report = match run_suite(suite, &settings) {
            Ok(r) => r,
            Err(e) => {
                writeln!(out, "FAIL {} (error: {e})", suite.name())?;
                all_passed = false;
                continue;
            }
        };
        for check in &report.checks {
            writeln!(out, "  [{}] {check}", suite.name())?;
        }
        writeln!(out, "{}", report.summary())?;
        all_passed &= report.passed();
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_FAILURE })
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::NoConvergence { .. } => "no_convergence",
        Error::Domain(_) => "domain",
        Error::ConstraintViolated(_) => "constraint_violated",
        Error::NonCyclic { .. } => "non_cyclic",
        _ => "error",
    }
}

fn cmd_solve_single(
    ctx: &Context,
    args: SingleArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let gamma = ctx.require(args.gamma, "gamma")?;
    let omega1 = ctx.file.resolve(args.omega1, "omega1", 1.0)?;
    let omega1p = ctx
        .file
        .resolve(args.omega1_prime, "omega1_prime", omega1)?;
    let pins = [
        (
            "omega0",
            ctx.file.resolve_opt(args.pin_omega0, "pin_omega0")?,
        ),
        ("omega", ctx.file.resolve_opt(args.pin_omega, "pin_omega")?),
        (
            "omega0_prime",
            ctx.file
                .resolve_opt(args.pin_omega0_prime, "pin_omega0_prime")?,
        ),
    ];
    let pin_grid = ctx.file.resolve_opt(args.pin_grid, "pin_grid")?;
    let given: Vec<_> = pins.iter().filter(|(_, v)| v.is_some()).collect();

    let (pin_name, values): (String, Vec<f64>) =
        match (given.as_slice(), pin_grid) {
            ([(name, Some(v))], None) => (name.to_string(), vec![*v]),
            ([], Some(spec)) => {
                let name = ctx
                    .file
                    .resolve(args.pin, "pin", "omega0".to_string())?
                    .replace('-', "_");
                (name, spec.parse::<Grid>()?.0)
            }
            ([], None) => ("omega0".to_string(), vec![0.6]),
            _ => return Err(Failure::usage(
                "give exactly one of --pin-omega0, --pin-omega, --pin-omega0-prime or --pin-grid",
            )),
        };
    let pin = match pin_name.as_str() {
        "omega0" => Pin::Omega0(values[0]),
        "omega" => Pin::Omega(values[0]),
        "omega0_prime" | "omega0p" => Pin::Omega0Prime(values[0]),
        other => return Err(Failure::usage(format!("unknown pinned unknown `{other}`"))),
    };
    let template = SingleQubitProblem {
        gamma,
        omega1,
        omega1p,
        pin,
    };
    // Domain errors (e.g. Γ outside (0, 2)) abort before the sweep.
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(Error::Domain(format!("target Γ must lie in (0, 2), got {gamma}")).into());
    }

    let mut table = Table::new(&[
        "pin",
        "pin_value",
        "omega",
        "omega0",
        "omega0_prime",
        "omega1",
        "omega1_prime",
        "residual_max",
        "gamma",
        "dynamic_phase",
        "status",
    ]);
    let mut solved = 0;
    for point in sweep_single_qubit(&template, &values, &NewtonOptions::default()) {
        let mut row: Vec<Cell> = vec![pin_name.as_str().into(), point.parameter.into()];
        match &point.result {
            Ok(sol) => {
                let phases = sol.plan.integrate(None, &ctx.evolution());
                let (dynamic, status) = match &phases {
                    Ok(p) => (Cell::Num(p.total.dynamic), "ok"),
                    Err(e) => (Cell::Empty, status_of(e)),
                };
                if phases.is_ok() {
                    solved += 1;
                }
                row.extend([
                    sol.plan.loop1.omega.into(),
                    sol.plan.loop1.omega0.into(),
                    sol.plan.loop2.omega0.into(),
                    sol.plan.loop1.omega1.into(),
                    sol.plan.loop2.omega1.into(),
                    sol.max_residual().into(),
                    sol.gamma_coefficients()[0].into(),
                    dynamic,
                    status.into(),
                ]);
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(Cell::Empty, 8));
                row.push(status_of(e).into());
            }
        }
        table.push(row);
    }
    emit(
        &table,
        ctx.destination(args.out, "solve_single.csv")?,
        out,
        err,
    )?;
    if solved == 0 {
        writeln!(err, "no row solved")?;
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_solve_twoqubit(
    ctx: &Context,
    args: TwoQubitArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let omega0 = ctx
        .file
        .resolve(args.omega0, "omega0", figures::FIG3_OMEGA0)?;
    let omega1 = ctx
        .file
        .resolve(args.omega1, "omega1", figures::FIG3_OMEGA1)?;
    let j = ctx.file.resolve(args.j, "j", figures::FIG3_J)?;
    let grid = grid_from(
        ctx,
        args.omega_grid,
        "omega_grid",
        Figure::Fig3a.default_grid(),
    )?;
    let points = geogate::solvers::solve_two_qubit_two_loop(
        omega0,
        omega1,
        j,
        &grid.0,
        &NewtonOptions::default(),
    )?;

    let mut table = Table::new(&[
        "omega",
        "omega_prime",
        "omega0_prime",
        "omega1_prime",
        "eta",
        "residual_max",
        "gamma0",
        "gamma1",
        "nontrivial",
        "dynamic_phase",
        "alternatives",
        "status",
    ]);
    let mut solved = 0;
    for point in &points {
        let mut row: Vec<Cell> = vec![point.parameter.into()];
        match &point.result {
            Ok(sol) => {
                let l2 = &sol.plan.loop2;
                let gammas = sol.gamma_coefficients();
                let (dynamic, status) = match integrated_dynamic_phase(point, &ctx.evolution()) {
                    Ok(d) => (Cell::Num(d), "ok"),
                    Err(e) => (Cell::Empty, status_of(&e)),
                };
                if status == "ok" {
                    solved += 1;
                }
                row.extend([
                    l2.omega.into(),
                    l2.omega0.into(),
                    l2.omega1.into(),
                    sol.plan.eta.into(),
                    sol.max_residual().into(),
                    gammas[0].into(),
                    gammas[1].into(),
                    sol.nontrivial().into(),
                    dynamic,
                    (point.alternatives.len() as f64).into(),
                    status.into(),
                ]);
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(Cell::Empty, 10));
                row.push(status_of(e).into());
            }
        }
        table.push(row);
    }
    emit(
        &table,
        ctx.destination(args.out, "solve_twoqubit.csv")?,
        out,
        err,
    )?;
    if solved == 0 {
        writeln!(err, "no row solved")?;
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}
