//! `curvemf`: invariants, generic projections and matrix factorizations of
//! curve singularities from the command line.
//!
//! Exit status: 0 when every check in the report holds, 1 when a check fails
//! or a computation errors out, 2 on usage and input errors.

mod commands;
mod files;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "curvemf",
    version,
    about = "Exact invariants and matrix factorizations of curve singularities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Print the report as JSON with sorted keys.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Working truncation order in t.
    #[arg(long, value_name = "N")]
    pub trunc: Option<usize>,
    /// Value for a family parameter, e.g. `--param s6=1/2`. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct PlaneArgs {
    /// Projection plane as 2n comma-separated coefficients of the two
    /// linear forms, e.g. `1,0,0,0,1,1`.
    #[arg(long, value_name = "Z1,...,Z2N", conflicts_with = "auto_plane")]
    pub plane: Option<String>,
    /// Pick the first generic plane (the default without `--plane`).
    #[arg(long)]
    pub auto_plane: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Multiplicity, semigroup of values, δ and Puiseux data.
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Planes of the cone of secants and the first generic projections.
    Cone5 {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Project a branch to the plane.
    Project {
        file: PathBuf,
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Implicit equation of a plane projection.
    Implicitize {
        file: PathBuf,
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Matrix factorization presenting the ring of the branch over a
    /// projection.
    Matfact {
        file: PathBuf,
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        common: Common,
        /// Entry degree cap in x, y (default: total degree of F).
        #[arg(long, value_name = "D")]
        degree: Option<u32>,
        /// Also write the factorization as a `.mf` file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check a matrix factorization read from a `.mf` file.
    VerifyMf {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Whether a module read from a `.module` file is closed under
    /// multiplication.
    IsAlgebra {
        file: PathBuf,
        /// 1-based index of the generator playing the unit.
        #[arg(long, default_value_t = 1, value_name = "I")]
        identity: usize,
    },
    /// Equivalence of two matrix factorizations of the same F.
    EquivMf {
        left: PathBuf,
        right: PathBuf,
        /// Degree cap for the intertwining matrices.
        #[arg(long, default_value_t = 2, value_name = "D")]
        degree: u32,
    },
    /// Whether a plane projection of a branch is generic.
    CheckGeneric {
        file: PathBuf,
        #[command(flatten)]
        plane: PlaneArgs,
        /// Plane parametrization x(t), given together with `--y`.
        #[arg(long, requires = "y", conflicts_with_all = ["plane", "auto_plane"])]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = match cli.cmd {
        Cmd::Invariants { file, common } => commands::invariants(&file, &common),
        Cmd::Cone5 { file, common } => commands::cone5(&file, &common),
        Cmd::Project {
            file,
            plane,
            common,
        } => commands::project(&file, &plane, &common),
        Cmd::Implicitize {
            file,
            plane,
            common,
        } => commands::implicitize(&file, &plane, &common),
        Cmd::Matfact {
            file,
            plane,
            common,
            degree,
            out,
        } => commands::matfact(&file, &plane, &common, degree, out.as_deref()),
        Cmd::VerifyMf { file, common } => commands::verify_mf(&file, &common),
        Cmd::IsAlgebra { file, identity } => commands::is_algebra(&file, identity),
        Cmd::EquivMf {
            left,
            right,
            degree,
        } => commands::equiv_mf(&left, &right, degree),
        Cmd::CheckGeneric {
            file,
            plane,
            x,
            y,
            common,
        } => commands::check_generic(&file, &plane, x.zip(y), &common),
    };
    match out {
        Ok(report) => {
            if cli.json {
                println!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            ExitCode::from(if report.checks_pass() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("curvemf: {e}");
            ExitCode::from(e.code())
        }
    }
}
