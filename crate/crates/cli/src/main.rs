//! `mvtop`: checks, homotopy searches and covering invariants for
//! multi-valued maps between finite spaces.
//!
//! Spaces and maps are given either as JSON files or as catalog names
//! (`circle4`, `fence:3`, `antipodal_pairing`, ...). Every command prints a
//! JSON report; the exit code is 0 when the property holds or the value is
//! decided, 1 when it fails, 2 on bad input and 3 when a search budget left
//! the answer unknown.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvtop_core::homotopy::DEFAULT_BUDGET;

use report::Status;

#[derive(Parser, Debug)]
#[command(
    name = "mvtop",
    version,
    about = "Multi-valued maps on finite topological spaces"
)]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a property of a space or a map.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Decide m-homotopy between two maps, null-homotopy, or contractibility.
    Homotopy(HomotopyArgs),
    /// Compute a covering invariant.
    #[command(subcommand)]
    Invariant(InvariantCmd),
    /// Lifting problems for a map.
    #[command(subcommand)]
    Fibration(FibrationCmd),
    /// The catalog of standard spaces and maps.
    #[command(subcommand)]
    Models(ModelsCmd),
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Validate a neighborhood table.
    Space {
        #[arg(long)]
        space: String,
    },
    /// Upper and lower semicontinuity.
    Continuity {
        #[arg(long)]
        map: String,
    },
    /// Whether `--section` is an m-section of `--map`.
    Section {
        #[arg(long)]
        map: String,
        #[arg(long)]
        section: String,
    },
    /// Injectivity, surjectivity and m-homeomorphism.
    Homeomorphism {
        #[arg(long)]
        map: String,
    },
    /// m-pathwise connectivity.
    Connected {
        #[arg(long)]
        space: String,
    },
}

#[derive(Args, Debug, Clone)]
struct SearchArgs {
    /// Per-search budget; defaults to $MVTOP_BUDGET.
    #[arg(long, env = "MVTOP_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Use worker threads. Reports are identical either way.
    #[arg(long)]
    parallel: bool,
    /// Null-homotopies may only end at constants with one-point values.
    #[arg(long)]
    singleton_constants: bool,
    /// Write the certificates to this file.
    #[arg(long, value_name = "PATH")]
    emit_certificate: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum StrategyArg {
    Minimal,
    Reduced,
    Direct,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["f", "null", "contractible"])))]
struct HomotopyArgs {
    #[arg(long, requires = "g")]
    f: Option<String>,
    #[arg(long)]
    g: Option<String>,
    /// Is this map homotopic to a constant?
    #[arg(long, value_name = "MAP")]
    null: Option<String>,
    /// Is the identity of this space null-homotopic?
    #[arg(long, value_name = "SPACE")]
    contractible: Option<String>,
    #[arg(long, value_enum, default_value = "minimal")]
    strategy: StrategyArg,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    /// Compare α∘ρ₁ with α∘ρ₂.
    Repaired,
    /// Compare α∘ρ₁ with ρ₂ (needs Y = X).
    Literal,
}

#[derive(Subcommand, Debug)]
enum InvariantCmd {
    /// Homotopic distance of two maps.
    Dm {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Category of a space.
    Catm {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Category of a map.
    CatmMap {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Topological complexity of a space.
    Tmc {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Topological complexity of a surjective map.
    TmcMap {
        #[arg(long)]
        map: String,
        #[arg(long, value_enum, default_value = "repaired")]
        mode: ModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Sectional category of a map.
    Msecat {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand, Debug)]
enum FibrationCmd {
    /// Solve every square of a suite file.
    Check {
        #[arg(long)]
        suite: PathBuf,
        /// Per-square budget; defaults to $MVTOP_BUDGET.
        #[arg(long, env = "MVTOP_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Write the fillers to this file.
        #[arg(long, value_name = "PATH")]
        emit_certificate: Option<PathBuf>,
    },
    /// Structural fibration certificate of a map.
    Certificate {
        #[arg(long)]
        map: String,
    },
}

#[derive(Subcommand, Debug)]
enum ModelsCmd {
    /// List catalog spaces and maps.
    List,
    /// Print a catalog space or map as JSON.
    Emit { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Models(ModelsCmd::Emit { name }) = &cli.command {
        return match commands::emit(name, cli.pretty) {
            Ok(text) => {
                print(&text);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let report = commands::run(&cli.command);
    let text = if cli.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .expect("reports serialize");
    print(&text);
    if report.status == Status::Error {
        if let Some(msg) = report.result.get("message").and_then(|m| m.as_str()) {
            eprintln!("error: {msg}");
        }
    }
    ExitCode::from(report.status.exit_code() as u8)
}

/// Prints a line, ignoring a closed pipe.
fn print(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}
