//! `voa-char`: exact characters of Heisenberg and lattice VOA states and
//! their p-adic limits.
//!
//! Exit codes: 0 success, 1 invalid input, 2 disagreement or failed check.

mod commands;
mod render;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Report};

#[derive(Parser, Debug)]
#[command(
    name = "voa-char",
    version,
    about = "Exact VOA characters and p-adic limits"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// f-image of a square-bracket word `h[-k_1]...h[-k_m] 1`.
    Character {
        /// Comma-separated indices, e.g. `3,1`.
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 10)]
        qprec: usize,
        #[arg(long, value_enum, default_value_t = commands::Algo::Partition)]
        algo: commands::Algo,
    },
    /// Closed form for `h[-r] h[-1]^t 1` with `r, t` odd.
    ClosedForm {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 10)]
        qprec: usize,
    },
    /// Limit character of `u_{l,t}` with stage convergence table.
    HeisenbergLimit(LimitArgs),
    /// Character of `v_{r,t}` in a lattice VOA.
    LatticeCharacter {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 10)]
        qprec: usize,
        #[arg(long, value_enum, default_value_t = commands::LatticeAlgo::Closed)]
        algo: commands::LatticeAlgo,
    },
    /// Limit character in a lattice VOA with stage convergence table.
    LatticeLimit {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        limit: LimitArgs,
    },
    /// Run a verification suite and emit a pass/fail report.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LimitArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub l: u64,
    #[arg(long)]
    pub t: u64,
    #[arg(long, default_value_t = 10)]
    pub qprec: usize,
    /// p-adic precision: results are certified mod p^m.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Last stage compared against the limit.
    #[arg(long, default_value_t = 2)]
    pub a_max: u32,
}

#[derive(Args, Debug, Clone)]
pub struct LatticeArgs {
    /// Built-in lattice.
    #[arg(long, value_enum, conflicts_with = "gram")]
    pub lattice: Option<commands::BuiltinLattice>,
    /// Gram matrix file: `d` on the first line, then `d` rows of `d` integers.
    #[arg(long)]
    pub gram: Option<PathBuf>,
    /// Direction `α0` in basis coordinates, e.g. `1,0,0,0,0,0,0,0`; defaults
    /// to the first basis vector.
    #[arg(long)]
    pub direction: Option<String>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("VOA_CHAR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Invalid(format!(
            "VOA_CHAR_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Character { word, qprec, algo } => commands::character(word, *qprec, *algo),
        Command::ClosedForm { r, t, qprec } => commands::closed_form(*r, *t, *qprec),
        Command::HeisenbergLimit(args) => commands::heisenberg_limit(args),
        Command::LatticeCharacter {
            lattice,
            r,
            t,
            qprec,
            algo,
        } => commands::lattice_character(lattice, *r, *t, *qprec, *algo),
        Command::LatticeLimit { lattice, limit } => commands::lattice_limit(lattice, limit),
        Command::Verify { suite } => Ok(verify::run(*suite)),
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => report.text.clone(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!(
                    "error: {}",
                    report.failure.as_deref().unwrap_or("a check failed")
                );
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
