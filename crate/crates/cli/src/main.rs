//! `campanato`: command-line driver for the oscillation toolkit.
//!
//! Exit codes: 0 on success, 2 for usage, parse and IO errors, 3 when a
//! numerical procedure fails.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use campanato_core::MaximalMode;
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "campanato", version, about = "Mean-oscillation experiments on dyadic grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the quasi-norm of a grid function in a space.
    Norm {
        /// Space descriptor, e.g. `lp:p=2` or `wlp:p=2,w=weight.txt`.
        space: String,
        file: PathBuf,
    },
    /// Run an equivalence experiment described by a config file.
    Equivalence { config: PathBuf },
    /// Sparse family of the stopping-time decomposition, plus its domination constant.
    Sparse {
        file: PathBuf,
        /// Root cube as `corner[,corner]:side`; defaults to the whole grid.
        #[arg(long)]
        cube: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate a condition checker and print its report as JSON.
    ///
    /// Conditions: `ax SPACE`, `ap WEIGHT p=P`, `ap1 WEIGHT p=P`,
    /// `young delta2|nabla2 SPACE`, `phi DESCRIPTOR`, `loghoelder EXPONENT`.
    Check {
        condition: String,
        args: Vec<String>,
        /// Grid dimension for checks that build their own grid.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Grid level for checks that build their own grid.
        #[arg(long, default_value_t = 6)]
        level: u32,
        /// Random subsets per cube for `ap1`.
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write a corpus member as a grid function file.
    Corpus {
        /// Standard member name or a generator spec such as `power:theta=0.5`.
        name: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        level: u32,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Apply the maximal operator to a grid function.
    Maximal {
        file: PathBuf,
        #[arg(long, default_value_t = MaximalMode::Full)]
        mode: MaximalMode,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("OSC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("OSC_THREADS must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        bail!("OSC_THREADS must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    match cli.command {
        Command::Norm { space, file } => commands::norm(&space, &file),
        Command::Equivalence { config } => commands::equivalence(&config),
        Command::Sparse {
            file,
            cube,
            alpha,
            output,
        } => commands::sparse(&file, cube.as_deref(), alpha, output.as_deref()),
        Command::Check {
            condition,
            args,
            n,
            level,
            budget,
            output,
        } => commands::check(&condition, &args, n, level, budget, output.as_deref()),
        Command::Corpus {
            name,
            n,
            level,
            output,
        } => commands::corpus(&name, n, level, output.as_deref()),
        Command::Maximal { file, mode, output } => commands::maximal(&file, mode, output.as_deref()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let numeric = err
        .chain()
        .filter_map(|e| e.downcast_ref::<campanato_core::Error>())
        .any(campanato_core::Error::is_numeric);
    if numeric {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("campanato: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
