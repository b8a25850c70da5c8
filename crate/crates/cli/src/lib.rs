//! Command-line workflows for the `exec-hyper` solver: solve, trajectory,
//! sweep-k, verify and shoot-plot. Every workflow writes to a caller-supplied
//! sink so it can be driven from tests as well as from `main`.

pub mod config;
mod error;
pub mod format;

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use exec_hyper::solver::{closed_form_k1, sample_trajectory, shooting_lhs, solve_v0, ROOT_TOL};
use exec_hyper::verify::{cross_validate, integrate_first_order, reduction_check};
use exec_hyper::{legendre_check, solve, Error, ModelParams, SolveReport, TrajectoryPoint};

pub use config::{CliConfig, Command, Format};
pub use error::CliError;
use format::{write_comment, write_row};

/// RK4 steps for the `verify` oracles.
pub const VERIFY_STEPS: usize = 4096;
/// Shoot-plot spans this factor on either side of the root.
const SHOOT_PLOT_SPAN: f64 = 10.0;
/// Without a root, the span around the constant-speed guess `X/T`.
const SHOOT_PLOT_SPAN_NO_ROOT: f64 = 1e3;

pub mod tolerances {
    pub const BOUNDARY_X0: f64 = 1e-6;
    pub const BOUNDARY_XT: f64 = 1e-9;
    pub const BELTRAMI: f64 = 1e-6;
    pub const ORACLE: f64 = 1e-5;
    pub const REDUCTION: f64 = 1e-4;
    pub const CLOSED_FORM: f64 = 1e-7;
    pub const RK4_START: f64 = 1e-4;
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Error payload written to JSON outputs.
pub fn error_json(err: &CliError) -> serde_json::Value {
    json!({ "error": { "kind": err.kind(), "message": err.to_string() } })
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// JSON shape of a solve: shooting diagnostics hoisted to the top level.
#[derive(Debug, Serialize)]
pub struct SolveOutput<'a> {
    pub params: &'a ModelParams,
    pub v0: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub cost: f64,
    pub checks: &'a exec_hyper::SolveChecks,
    pub trajectory: &'a [TrajectoryPoint],
}

impl<'a> From<&'a SolveReport> for SolveOutput<'a> {
    fn from(r: &'a SolveReport) -> Self {
        Self {
            params: &r.params,
            v0: r.shooting.v0,
            residual: r.shooting.residual,
            iterations: r.shooting.iterations,
            bracket: r.shooting.bracket,
            cost: r.cost,
            checks: &r.checks,
            trajectory: &r.trajectory.points,
        }
    }
}

fn write_trajectory_csv(out: &mut dyn Write, points: &[TrajectoryPoint]) -> CliResult<()> {
    writeln!(out, "t,x,v,beltrami_residual")?;
    for q in points {
        write_row(out, &[q.t, q.x, q.v, q.beltrami_residual])?;
    }
    Ok(())
}

pub fn run_solve(cfg: &CliConfig, out: &mut dyn Write) -> CliResult<()> {
    let report = solve(&cfg.params, cfg.n_samples)?;
    log::info!("v0 = {} (residual {:e})", report.shooting.v0, report.shooting.residual);
    match cfg.format() {
        Format::Json => write_json(out, &SolveOutput::from(&report)),
        Format::Csv => write_trajectory_csv(out, &report.trajectory.points),
    }
}

pub fn run_trajectory(cfg: &CliConfig, out: &mut dyn Write) -> CliResult<()> {
    let shooting = solve_v0(&cfg.params)?;
    let traj = sample_trajectory(&cfg.params, shooting.v0, cfg.n_samples)?;
    match cfg.format() {
        Format::Csv => write_trajectory_csv(out, &traj.points),
        Format::Json => write_json(out, &traj.points),
    }
}

#[derive(Debug, Serialize)]
struct SweepEntry {
    k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    v0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trajectory: Option<Vec<TrajectoryPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<serde_json::Value>,
}

/// Solves each k concurrently; output order follows `k_list`. Returns
/// `Ok(false)` if any k failed (its error is reported in-band and on stderr).
pub fn run_sweep_k(cfg: &CliConfig, out: &mut dyn Write) -> CliResult<bool> {
    type Solved = Result<(f64, Vec<TrajectoryPoint>), Error>;
    let results: Vec<(f64, Solved)> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .k_list
            .iter()
            .map(|&k| {
                let p = ModelParams { k, ..cfg.params };
                let n = cfg.n_samples;
                scope.spawn(move || {
                    let r = solve_v0(&p).and_then(|s| Ok((s.v0, sample_trajectory(&p, s.v0, n)?.points)));
                    (k, r)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });

    let mut all_ok = true;
    for (k, r) in &results {
        if let Err(e) = r {
            all_ok = false;
            eprintln!("error: k = {k}: {e}");
        }
    }

    match cfg.format() {
        Format::Csv => {
            writeln!(out, "k,t,x,v")?;
            for (k, r) in &results {
                match r {
                    Ok((_, points)) => {
                        for q in points {
                            write_row(out, &[*k, q.t, q.x, q.v])?;
                        }
                    }
                    Err(e) => write_comment(out, &format!("error k={} kind={}: {e}", format::csv_cell(*k), e.kind()))?,
                }
            }
        }
        Format::Json => {
            let entries: Vec<SweepEntry> = results
                .into_iter()
                .map(|(k, r)| match r {
                    Ok((v0, points)) => SweepEntry { k, v0: Some(v0), trajectory: Some(points), error: None },
                    Err(e) => {
                        let err = CliError::Solver(e);
                        SweepEntry { k, v0: None, trajectory: None, error: Some(error_json(&err)["error"].clone()) }
                    }
                })
                .collect();
            write_json(out, &entries)?;
        }
    }
    Ok(all_ok)
}

/// Samples of the shooting function on a logarithmic grid, plus the root or
/// the reason there is none.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShootPlot {
    pub samples: Vec<(f64, f64)>,
    pub root: Option<f64>,
    /// Zero-speed boundary time when the horizon is at or beyond it.
    pub no_root_boundary: Option<f64>,
    pub horizon: f64,
}

pub fn shoot_plot_data(params: &ModelParams, n: usize) -> CliResult<ShootPlot> {
    params.validate()?;
    let (root, no_root_boundary) = match solve_v0(params) {
        Ok(s) => (Some(s.v0), None),
        Err(Error::NoRoot { boundary_time, .. }) => (None, Some(boundary_time)),
        Err(e) => return Err(e.into()),
    };
    let (center, span) = match root {
        Some(v0) => (v0, SHOOT_PLOT_SPAN),
        None => (params.holdings / params.horizon, SHOOT_PLOT_SPAN_NO_ROOT),
    };
    let (lo, hi) = ((center / span).ln(), (center * span).ln());
    let samples = (0..n)
        .map(|i| {
            let v0 = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
            Ok((v0, shooting_lhs(params, v0)?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ShootPlot { samples, root, no_root_boundary, horizon: params.horizon })
}

pub fn run_shoot_plot(cfg: &CliConfig, out: &mut dyn Write) -> CliResult<()> {
    let plot = shoot_plot_data(&cfg.params, cfg.n_samples)?;
    match cfg.format() {
        Format::Json => write_json(out, &plot),
        Format::Csv => {
            writeln!(out, "v0,lhs")?;
            for &(v0, lhs) in &plot.samples {
                write_row(out, &[v0, lhs])?;
            }
            let t = format::csv_cell(plot.horizon);
            match (plot.root, plot.no_root_boundary) {
                (Some(v0), _) => write_comment(out, &format!("root v0={} T={t}", format::csv_cell(v0)))?,
                (None, Some(b)) => write_comment(out, &format!("no-root boundary_time={} T={t}", format::csv_cell(b)))?,
                (None, None) => unreachable!("shoot plot without root or boundary"),
            }
            Ok(())
        }
    }
}

/// One named verification residual against its limit.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub value: f64,
    pub limit: f64,
    /// `"<"` for residuals that must stay below the limit, `">"` for
    /// quantities that must exceed it.
    pub relation: &'static str,
    pub pass: bool,
}

impl CheckOutcome {
    fn below(value: f64, limit: f64) -> Self {
        Self { value, limit, relation: "<", pass: value < limit }
    }

    fn above(value: f64, limit: f64) -> Self {
        Self { value, limit, relation: ">", pass: value > limit }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub params: ModelParams,
    pub v0: f64,
    pub checks: std::collections::BTreeMap<&'static str, CheckOutcome>,
    pub pass: bool,
}

pub fn verify_report(params: &ModelParams, n_samples: usize) -> CliResult<VerifyOutput> {
    use tolerances::*;
    let report = solve(params, n_samples)?;
    let v0 = report.shooting.v0;
    let p = params;
    let anchor = p.k * p.eta * v0.powf(p.k + 1.0);

    let mut checks = std::collections::BTreeMap::new();
    checks.insert(
        "shooting_residual",
        CheckOutcome::below(report.shooting.residual.abs(), ROOT_TOL * p.horizon.max(1.0)),
    );
    checks.insert("boundary_x0_error", CheckOutcome::below(report.checks.boundary_x0_error, BOUNDARY_X0));
    checks.insert("boundary_xT_error", CheckOutcome::below(report.checks.boundary_xt_error, BOUNDARY_XT));
    checks.insert(
        "beltrami_max_residual",
        CheckOutcome::below(report.checks.beltrami_max_residual, BELTRAMI * anchor.max(1.0)),
    );

    let legendre_min = report
        .trajectory
        .points
        .iter()
        .filter(|q| q.v > 0.0)
        .map(|q| legendre_check(p, q.v))
        .fold(f64::INFINITY, f64::min);
    checks.insert("legendre_min", CheckOutcome::above(legendre_min, 0.0));

    checks.insert("oracle_max_deviation", CheckOutcome::below(cross_validate(p, &report, VERIFY_STEPS)?, ORACLE));
    let sol = integrate_first_order(p, v0, VERIFY_STEPS)?;
    checks.insert("reduction_residual", CheckOutcome::below(reduction_check(p, &sol)?, REDUCTION));
    checks.insert("rk4_x0_error", CheckOutcome::below((sol.x_values[0] - p.holdings).abs(), RK4_START));

    if p.k == 1.0 {
        let dev = report
            .trajectory
            .points
            .iter()
            .map(|q| closed_form_k1(p, q.t).map(|x| (x - q.x).abs()))
            .collect::<Result<Vec<_>, Error>>()?
            .into_iter()
            .fold(0.0, f64::max);
        checks.insert("closed_form_max_deviation", CheckOutcome::below(dev, CLOSED_FORM));
    }

    let pass = checks.values().all(|c| c.pass);
    Ok(VerifyOutput { params: *p, v0, checks, pass })
}

pub fn run_verify(cfg: &CliConfig, out: &mut dyn Write) -> CliResult<bool> {
    let v = verify_report(&cfg.params, cfg.n_samples)?;
    for (name, c) in v.checks.iter().filter(|(_, c)| !c.pass) {
        log::warn!("check {name} failed: {} {} {}", c.value, c.relation, c.limit);
    }
    write_json(out, &v)?;
    Ok(v.pass)
}

/// Dispatch a validated config. `Ok(false)` means the command ran but some
/// computation or check did not pass.
pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> CliResult<bool> {
    cfg.validate()?;
    match cfg.command {
        Command::Solve => run_solve(cfg, out).map(|_| true),
        Command::Trajectory => run_trajectory(cfg, out).map(|_| true),
        Command::SweepK => run_sweep_k(cfg, out),
        Command::Verify => run_verify(cfg, out),
        Command::ShootPlot => run_shoot_plot(cfg, out).map(|_| true),
    }
}

/// Full CLI entry point: parse `args`, run, and return the exit status.
/// Output goes to `--output` when given and to `stdout` otherwise.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match config::parse_args(args) {
        Ok(cfg) => cfg,
        Err(config::ParseOutcome::Clap(e)) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
        Err(config::ParseOutcome::Cli { error, json }) => {
            let _ = writeln!(stderr, "error: {error}");
            if json {
                let _ = write_json(stdout, &error_json(&error));
            }
            return error.exit_code();
        }
    };

    let mut file;
    let out: &mut dyn Write = match &cfg.output {
        Some(path) => match std::fs::File::create(path) {
            Ok(f) => {
                file = io::BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", display(path));
                return 1;
            }
        },
        None => stdout,
    };

    let code = match run(&cfg, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(error) => {
            let _ = writeln!(stderr, "error: {error}");
            if cfg.format() == Format::Json {
                let _ = write_json(out, &error_json(&error));
            }
            error.exit_code()
        }
    };
    if let Err(e) = out.flush() {
        let _ = writeln!(stderr, "error: i/o: {e}");
        return 1;
    }
    code
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
