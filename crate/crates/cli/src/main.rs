mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isodrum::spectra::DEFAULT_SEED;
use isodrum::tiling::SignConvention;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "isodrum", version, about = "Isospectral drums: gluing families, transplantation, assembly and grid spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List shipped families with tile counts, signatures and status.
    Families {
        #[arg(long)]
        family: Option<String>,
    },
    /// Solve for the transplantation space of a family.
    Transplant {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value = "dirichlet")]
        convention: SignConvention,
        /// Pair the left graph with itself.
        #[arg(long)]
        self_pair: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unfold one side of a family in the plane and list tile polygons.
    Unfold2d {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        side: SideArgs,
        #[arg(long, default_value = "right-isosceles")]
        base: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble one side in space and optionally write its boundary mesh.
    Build3d {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        side: SideArgs,
        #[arg(long, default_value = "simplex")]
        base: String,
        /// Extrude a planar unfolding to a prism of this height instead.
        #[arg(long)]
        prism: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Lowest grid eigenvalues of one side, as CSV.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        side: SideArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Eigenvalues of both sides with their differences, as CSV.
    Compare {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Rebuild one of the published eigenvalue tables.
    Report {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Shipped family id (see `families`) or a gluing file.
    #[arg(long)]
    family: String,
}

#[derive(Args, Debug)]
struct SideArgs {
    #[arg(long, default_value = "A")]
    class: Class,
    /// Tile placed first, on the base tile itself.
    #[arg(long, default_value_t = 0)]
    root: usize,
}

#[derive(Args, Debug)]
struct DomainArgs {
    /// simplex, wall, cube, right-isosceles, 30-60-90, equilateral or a tetrahedron file.
    #[arg(long, default_value = "simplex")]
    base: String,
    #[arg(long)]
    prism: Option<f64>,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    h: f64,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long, default_value_t = 25)]
    modes: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Class {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Obj,
    Stl,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let msg = first.trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(msg.to_string()).line());
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::FAILURE
        }
    }
}
