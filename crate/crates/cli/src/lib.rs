//! Command-line front end: parses problem files, dispatches to the library
//! and emits JSON reports on standard output with a one-line summary on
//! standard error.
//!
//! Exit status: 0 on success, 1 when a report fails its verification, 2 on
//! input errors (unreadable or invalid files, violated preconditions).

pub mod commands;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use conegen::tolerance::parse_tol;
use conegen::Tolerances;

pub use problem::{parse_problem, ProblemFile};
pub use report::{parse_report, Report, ReportBody};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Library(#[from] conegen::Error),
}

impl InputError {
    /// Solver failures are not the caller's fault; everything else is.
    pub fn exit_code(&self) -> i32 {
        match self {
            InputError::Library(conegen::Error::Solver(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "conegen", version, about = "Cone-ordered optimization toolkit")]
pub struct Cli {
    /// Membership tolerance; overrides CONEGEN_TOL.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_override: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct ProblemArg {
    /// Problem file (JSON).
    #[arg(long)]
    pub problem: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct PointArgs {
    /// Problem file (JSON).
    #[arg(long)]
    pub problem: PathBuf,
    /// Comma-separated coordinates, e.g. "1,-2.5".
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order-interval gauge of a point (and equivalence constant if `v` is given).
    Gauge(PointArgs),
    /// Gerstewitz functional value at a point.
    Scalarize(PointArgs),
    /// Subdifferential of the Gerstewitz functional at a point.
    Subdiff(PointArgs),
    /// Exact penalty equivalence on a finite ground set.
    Penalize {
        /// Problem file (JSON).
        #[arg(long)]
        problem: PathBuf,
        /// Penalty parameter; defaults to 1.1 times the rank.
        #[arg(long = "L", value_name = "L", allow_hyphen_values = true)]
        l: Option<f64>,
    },
    /// Cone-minimal points of a finite value set.
    Minimal(ProblemArg),
    /// Primal and dual solves with the duality gap and Slater check.
    Duality(ProblemArg),
    /// Stationarity certificate at a point, or a refusal.
    Certify(PointArgs),
    /// Hausdorff distance of two polytopes via support functions.
    Hausdorff {
        /// Vertex list of the first polytope.
        #[arg(long)]
        a: PathBuf,
        /// Vertex list of the second polytope.
        #[arg(long)]
        b: PathBuf,
        /// Number of sampled directions outside the plane.
        #[arg(long)]
        grid: Option<usize>,
        /// Seed of the sampled directions.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Worked demonstrations.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Elastic-plastic torsion on a 1-D grid.
    Torsion {
        /// Interior grid points.
        #[arg(long, default_value_t = 12)]
        grid: usize,
        /// Right-hand side of the torsion equation.
        #[arg(long, default_value_t = 8.0)]
        load: f64,
    },
    /// Monotone affine variational inequality on the unit box.
    Vi {
        /// Seed of the random instance.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of variables.
        #[arg(long, default_value_t = 8)]
        dim: usize,
    },
}

fn tolerances(cli: &Cli) -> Result<Tolerances, InputError> {
    let base = Tolerances::from_env().map_err(InputError::Argument)?;
    match &cli.tol_override {
        Some(raw) => Ok(base.with_membership(
            parse_tol(raw).map_err(|e| InputError::Argument(format!("--tol-override: {e}")))?,
        )),
        None => Ok(base),
    }
}

/// Runs one command; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let outcome =
        tolerances(&cli).and_then(|tols| commands::execute(&cli.command, &tols).map(|r| (r, tols)));
    match outcome {
        Ok(((body, passed, summary), tols)) => {
            let report = Report {
                version: report::REPORT_VERSION,
                tolerance: tols.membership,
                passed,
                body,
            };
            let _ = writeln!(out, "{}", report::to_json(&report));
            let _ = writeln!(err, "{summary}");
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
