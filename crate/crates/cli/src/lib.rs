//! Command-line front end for the single-defect walk: evolutions,
//! closed-form stationary solutions, verification reports, and phase-grid
//! sweeps, written as CSV or JSON with byte-deterministic formatting.

pub mod report;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qw_core::analytic::{
    Branch, build_solution, lambda_sq_components, phi_grid, stationary_measure,
};
use qw_core::walk::{
    Amplitude, WalkState, build_wojcik_coin_field, evolve, measure, time_averaged_measure,
};
use qw_core::{Error, Measure};

use report::{ComplexParts, Tolerances, build_report};

/// Deterministic shortest round-trip decimal rendering, shared by the CSV
/// and JSON writers.
fn fmt_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

#[derive(Debug, Parser)]
#[command(
    name = "qw",
    version,
    about = "Quantum walks on the line with one phase defect: simulate, solve, verify, sweep"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve an origin-localized state and write the site measure.
    Evolve(EvolveConfig),
    /// Write the closed-form stationary solution(s) at one phase.
    Stationary(StationaryConfig),
    /// Run the residual verification suite and write a report.
    Verify(VerifyConfig),
    /// Tabulate the closed-form quantities over a phase grid.
    Sweep(SweepConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    /// Lower origin component +i alpha.
    PlusI,
    /// Lower origin component -i alpha.
    MinusI,
    /// Both branches.
    Both,
}

impl BranchArg {
    fn branches(self) -> Vec<Branch> {
        match self {
            BranchArg::PlusI => vec![Branch::PlusI],
            BranchArg::MinusI => vec![Branch::MinusI],
            BranchArg::Both => vec![Branch::PlusI, Branch::MinusI],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct EvolveConfig {
    /// Defect phase, in the open interval (0, 1).
    #[arg(long)]
    pub phi: f64,
    /// Chirality pairing of the initial origin state [alpha, +-i alpha].
    #[arg(long, value_enum, default_value_t = BranchArg::PlusI)]
    pub branch: BranchArg,
    /// Real part of the origin amplitude scale.
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub alpha_re: f64,
    /// Imaginary part of the origin amplitude scale.
    #[arg(long, default_value_t = 0.0)]
    pub alpha_im: f64,
    /// Lattice half-width L; sites run over [-L, L].
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(i64).range(1..))]
    pub half_width: i64,
    /// Number of steps; the final-time measure is written.
    #[arg(long, conflicts_with = "horizon")]
    pub steps: Option<u64>,
    /// Average the measure over the first HORIZON times instead of
    /// reporting a final-time measure.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub horizon: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StationaryConfig {
    /// Defect phase, in the open interval (0, 1).
    #[arg(long)]
    pub phi: f64,
    #[arg(long, value_enum, default_value_t = BranchArg::Both)]
    pub branch: BranchArg,
    /// Real part of the origin amplitude scale.
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub alpha_re: f64,
    /// Imaginary part of the origin amplitude scale.
    #[arg(long, default_value_t = 0.0)]
    pub alpha_im: f64,
    /// Measure table extent; rows cover |x| <= half-width.
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(i64).range(1..))]
    pub half_width: i64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyConfig {
    /// Verify a single phase instead of a grid.
    #[arg(long, conflicts_with = "grid")]
    pub phi: Option<f64>,
    /// Verify a uniform open-interval grid with this many phases.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid: Option<u64>,
    /// Override every residual tolerance with one value.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepConfig {
    /// Number of grid phases, uniform over the open interval.
    #[arg(long, default_value_t = 97, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Terminal outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// The verification report was written but not every record passed.
    VerificationFailed,
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::BoundaryLeak { .. } => 3,
            Error::SingularParameter { .. } => 4,
            _ => 2,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self {
            code: 2,
            message: format!("io error: {err}"),
        }
    }
}

fn emit(output: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MeasureRow {
    pub x: i64,
    pub mu: f64,
}

fn measure_rows(m: &Measure) -> Vec<MeasureRow> {
    m.iter().map(|(x, mu)| MeasureRow { x, mu }).collect()
}

fn measure_csv(m: &Measure) -> String {
    let mut out = String::from("x,mu\n");
    for (x, mu) in m.iter() {
        let _ = writeln!(out, "{x},{}", fmt_f64(mu));
    }
    out
}

fn to_json_line(value: &impl Serialize) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new(2, format!("serialization error: {e}")))?;
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvolveDocument {
    pub phi: f64,
    pub branch: String,
    pub half_width: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    pub measure: Vec<MeasureRow>,
}

fn single_branch(arg: BranchArg) -> Result<Branch, CliError> {
    match arg {
        BranchArg::PlusI => Ok(Branch::PlusI),
        BranchArg::MinusI => Ok(Branch::MinusI),
        BranchArg::Both => Err(CliError::new(2, "evolve needs a single branch, not both")),
    }
}

fn origin_state(alpha: Complex64, branch: Branch) -> Result<Amplitude, CliError> {
    if alpha.norm() == 0.0 {
        return Err(CliError::new(
            2,
            "alpha must be nonzero for an origin-localized state",
        ));
    }
    // Normalize [alpha, +-i alpha] to unit weight.
    let scale = 1.0 / (std::f64::consts::SQRT_2 * alpha.norm());
    Ok(Amplitude::new(alpha * scale, branch.beta(alpha) * scale))
}

pub fn cmd_evolve(cfg: &EvolveConfig) -> Result<Outcome, CliError> {
    let branch = single_branch(cfg.branch)?;
    let field = build_wojcik_coin_field(cfg.phi)?;
    let alpha = Complex64::new(cfg.alpha_re, cfg.alpha_im);
    let init = WalkState::localized(cfg.half_width, origin_state(alpha, branch)?);

    let (m, steps, horizon) = match cfg.horizon {
        Some(h) => {
            let m = time_averaged_measure(&init, &field, h)?;
            (m, None, Some(h))
        }
        None => {
            let n = cfg.steps.unwrap_or(100);
            if cfg.half_width < n as i64 {
                return Err(CliError::new(
                    3,
                    format!(
                        "half-width {} is smaller than the step count {n}: the light cone is guaranteed to reach the boundary",
                        cfg.half_width
                    ),
                ));
            }
            let last = evolve(&init, &field, n);
            if last.boundary_leak() {
                return Err(Error::BoundaryLeak {
                    fraction: last.edge_fraction(),
                }
                .into());
            }
            (measure(&last), Some(n), None)
        }
    };

    let content = match cfg.format {
        Format::Csv => measure_csv(&m),
        Format::Json => to_json_line(&EvolveDocument {
            phi: cfg.phi,
            branch: branch.label().to_string(),
            half_width: cfg.half_width,
            steps,
            horizon,
            measure: measure_rows(&m),
        })?,
    };
    emit(cfg.output.as_ref(), &content)?;
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub phi: f64,
    pub branch: String,
    pub lambda_sq: ComplexParts,
    pub theta_s: ComplexParts,
    pub theta_s_abs_sq: f64,
    pub gamma: f64,
    pub decay_class: String,
    pub measure: Vec<MeasureRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StationaryDocument {
    pub phi: f64,
    pub alpha: ComplexParts,
    pub solutions: Vec<SolutionDocument>,
}

/// Largest measure-table extent that keeps `|theta_s|^(2L)` finite.
fn measure_extent_cap(theta_s_abs_sq: f64, half_width: i64) -> Result<(), CliError> {
    let lg = theta_s_abs_sq.log10();
    if lg > 1e-9 {
        let cap = (307.0 / lg).floor() as i64;
        if half_width > cap {
            return Err(CliError::new(
                2,
                format!(
                    "half-width {half_width} overflows the growing measure; the largest representable extent at this phase is {cap}"
                ),
            ));
        }
    }
    Ok(())
}

pub fn cmd_stationary(cfg: &StationaryConfig) -> Result<Outcome, CliError> {
    let alpha = Complex64::new(cfg.alpha_re, cfg.alpha_im);
    let mut solutions = Vec::new();
    for branch in cfg.branch.branches() {
        let sol = build_solution(cfg.phi, branch, alpha)?;
        measure_extent_cap(sol.theta_s_abs_sq, cfg.half_width)?;
        let rows: Vec<MeasureRow> = (-cfg.half_width..=cfg.half_width)
            .map(|x| MeasureRow {
                x,
                mu: stationary_measure(&sol, x),
            })
            .collect();
        solutions.push(SolutionDocument {
            phi: cfg.phi,
            branch: branch.label().to_string(),
            lambda_sq: sol.lambda_sq.into(),
            theta_s: sol.theta_s.into(),
            theta_s_abs_sq: sol.theta_s_abs_sq,
            gamma: sol.gamma,
            decay_class: sol.decay_class.label().to_string(),
            measure: rows,
        });
    }

    let content = match cfg.format {
        Format::Json => to_json_line(&StationaryDocument {
            phi: cfg.phi,
            alpha: alpha.into(),
            solutions,
        })?,
        Format::Csv => {
            let mut out = String::from("phi,branch,x,mu\n");
            for sol in &solutions {
                for row in &sol.measure {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_f64(sol.phi),
                        sol.branch,
                        row.x,
                        fmt_f64(row.mu)
                    );
                }
            }
            out
        }
    };
    emit(cfg.output.as_ref(), &content)?;
    Ok(Outcome::Success)
}

pub fn cmd_verify(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let phis = match (cfg.phi, cfg.grid) {
        (Some(phi), None) => vec![phi],
        (None, Some(grid)) => phi_grid(grid as usize),
        (None, None) => phi_grid(97),
        (Some(_), Some(_)) => unreachable!("clap rejects --phi with --grid"),
    };
    let tolerances = match cfg.tolerance {
        Some(t) if t > 0.0 => Tolerances::uniform(t),
        Some(t) => {
            return Err(CliError::new(
                2,
                format!("tolerance must be positive, got {t}"),
            ));
        }
        None => Tolerances::default(),
    };
    let alpha = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let report = build_report(&phis, alpha, tolerances)?;
    let all_pass = report.all_pass;
    emit(cfg.output.as_ref(), &to_json_line(&report)?)?;
    if all_pass {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::VerificationFailed)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub phi: f64,
    pub branch: String,
    pub theta_s_abs_sq: f64,
    pub gamma: f64,
    pub cos2xi: f64,
    pub sin2xi: f64,
    pub decay_class: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepDocument {
    pub grid_points: u64,
    pub rows: Vec<SweepRow>,
}

pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Outcome, CliError> {
    let alpha = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut rows = Vec::new();
    for phi in phi_grid(cfg.grid as usize) {
        for branch in Branch::ALL {
            let sol = build_solution(phi, branch, alpha)?;
            let (cos2xi, sin2xi) = lambda_sq_components(phi, branch)?;
            rows.push(SweepRow {
                phi,
                branch: branch.label().to_string(),
                theta_s_abs_sq: sol.theta_s_abs_sq,
                gamma: sol.gamma,
                cos2xi,
                sin2xi,
                decay_class: sol.decay_class.label().to_string(),
            });
        }
    }

    let content = match cfg.format {
        Format::Csv => {
            let mut out =
                String::from("phi,branch,theta_s_abs_sq,gamma,cos2xi,sin2xi,decay_class\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    fmt_f64(r.phi),
                    r.branch,
                    fmt_f64(r.theta_s_abs_sq),
                    fmt_f64(r.gamma),
                    fmt_f64(r.cos2xi),
                    fmt_f64(r.sin2xi),
                    r.decay_class
                );
            }
            out
        }
        Format::Json => to_json_line(&SweepDocument {
            grid_points: cfg.grid,
            rows,
        })?,
    };
    emit(cfg.output.as_ref(), &content)?;
    Ok(Outcome::Success)
}

/// Dispatch a parsed command line.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Evolve(cfg) => cmd_evolve(cfg),
        Command::Stationary(cfg) => cmd_stationary(cfg),
        Command::Verify(cfg) => cmd_verify(cfg),
        Command::Sweep(cfg) => cmd_sweep(cfg),
    }
}
