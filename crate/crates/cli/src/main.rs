//! `swgeo`: experiment harness for Wasserstein and sliced Wasserstein geodesics.
//!
//! Every command writes a CSV table (or an SVG plot with `--format svg`) whose
//! first line records the command, the crate version and every resolved
//! parameter. Failed checks exit with status 1, usage and I/O errors with 2.

mod commands;
mod family;
mod output;
mod params;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use commands::{Common, Ctx};
use params::Params;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "swgeo", version, about = "Wasserstein and sliced Wasserstein geodesic experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file (default: standard output)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for Monte-Carlo directions
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Number of directions (quadrature nodes or Monte-Carlo samples)
    #[arg(long, global = true)]
    dirs: Option<String>,
    /// Direction rule: beta (quadrature in s(theta)) or mc
    #[arg(long, global = true)]
    quad: Option<String>,
    /// key=value file supplying defaults for any long flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Execution mode: par or seq (results are identical)
    #[arg(long, global = true)]
    exec: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Density breakpoints of the one-dimensional family mu_t
    Density {
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        /// t values: list, lin:a:b:n or log:a:b:n
        #[arg(long = "t")]
        t: Option<String>,
    },
    /// W_p, SW_p,q and their ratio along the shell curve, with a log-log slope fit
    Nonequiv {
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        d: Option<String>,
        #[arg(long = "t")]
        t: Option<String>,
    },
    /// W_p(nu_t, nu_0) near t = 0 with a fitted Hölder exponent
    Holder {
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        d: Option<String>,
        #[arg(long = "t")]
        t: Option<String>,
    },
    /// Masses of the two shells along the curve
    Hopping {
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long = "t")]
        t: Option<String>,
    },
    /// The planar example: an atom at the origin against the unit circle
    Circle {
        #[arg(long = "t")]
        t: Option<String>,
        #[arg(long)]
        q: Option<String>,
    },
    /// The dimensional constant C_d,q by quadrature and by Monte Carlo
    Cdq {
        /// comma-separated dimensions
        #[arg(long)]
        d: Option<String>,
        /// comma-separated orders (inf allowed)
        #[arg(long)]
        q: Option<String>,
        /// quadrature nodes
        #[arg(long)]
        nodes: Option<String>,
    },
    /// Constant-speed check of a curve given by a family spec
    GeodesicCheck {
        /// e.g. "nu(alpha=0.5,d=3,x=0)|dilate(a=2)|translate(y=e2,z=0)"
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Distance between two measures read from files
    Distance {
        /// one-dimensional measure file (give twice)
        #[arg(long = "measure-file")]
        measure_file: Vec<PathBuf>,
        /// shell mixture file (give twice)
        #[arg(long = "shell-file")]
        shell_file: Vec<PathBuf>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Density { .. } => "density",
            Command::Nonequiv { .. } => "nonequiv",
            Command::Holder { .. } => "holder",
            Command::Hopping { .. } => "hopping",
            Command::Circle { .. } => "circle",
            Command::Cdq { .. } => "cdq",
            Command::GeodesicCheck { .. } => "geodesic-check",
            Command::Distance { .. } => "distance",
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let params = Params::from_file(cli.config.as_deref())?;
    let format = match cli.format {
        Some(f) => f,
        None => match params.config_value("format") {
            Some(v) => Format::from_str(v, true).map_err(|e| anyhow::anyhow!("format: {e}"))?,
            None => Format::Csv,
        },
    };
    let out = cli.out.clone().or_else(|| params.config_value("out").map(PathBuf::from));
    let common = Common { seed: cli.seed, dirs: cli.dirs, quad: cli.quad, exec: cli.exec };
    let mut ctx = Ctx::new(params, common)?;
    let name = cli.command.name();
    let report = match cli.command {
        Command::Density { alpha, beta, t } => commands::density(&mut ctx, &commands::DensityArgs { alpha, beta, t }),
        Command::Nonequiv { alpha, p, q, d, t } => {
            commands::nonequiv(&mut ctx, &commands::NonequivArgs { alpha, p, q, d, t })
        }
        Command::Holder { alpha, p, d, t } => commands::holder(&mut ctx, &commands::HolderArgs { alpha, p, d, t }),
        Command::Hopping { alpha, t } => commands::hopping(&mut ctx, &commands::HoppingArgs { alpha, t }),
        Command::Circle { t, q } => commands::circle(&mut ctx, &commands::CircleArgs { t, q }),
        Command::Cdq { d, q, nodes } => commands::cdq(&mut ctx, &commands::CdqArgs { d, q, nodes }),
        Command::GeodesicCheck { family, p, q, grid, tol } => {
            commands::geodesic_check(&mut ctx, &commands::GeodesicArgs { family, p, q, grid, tol })
        }
        Command::Distance { measure_file, shell_file, p, q } => {
            commands::distance(&mut ctx, &commands::DistanceArgs { measure_file, shell_file, p, q })
        }
    }
    .with_context(|| format!("swgeo {name}"))?;

    let header = format!("# swgeo {name} {} {}", env!("CARGO_PKG_VERSION"), ctx.params.summary());
    let text = match format {
        Format::Csv => report.to_csv(&header),
        Format::Svg => report.to_svg(&header),
    };
    match &out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes()).context("writing to standard output")?,
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("check {} FAILED: {}", c.name, c.detail);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
