//! `rsdl`: discrete logarithms in GF(q^h) from the command line.

mod commands;
mod context;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] rsdl::Error),
}

impl CliError {
    /// I/O 2, rank deficiency 3, verification 4, budget 5, anything else 1.
    pub fn exit_code(&self) -> u8 {
        use rsdl::Error as E;
        match self {
            CliError::Io(_) | CliError::Core(E::Io(_) | E::Parse(_)) => 2,
            CliError::Core(E::RankDeficient { .. }) => 3,
            CliError::Core(E::Verification(_)) => 4,
            CliError::Core(E::BudgetExhausted { .. }) => 5,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rsdl",
    version,
    about = "Discrete logarithms in GF(q^h) via Reed-Solomon decoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CtxArg {
    /// Context file written by `setup`.
    #[arg(long, default_value = "rsdl.toml")]
    ctx: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a field, factor q^h - 1 and write a context file.
    Setup {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        h: usize,
        /// Coefficients of Q, lowest degree first, or `auto`.
        #[arg(long = "Q", default_value = "auto")]
        q: String,
        #[arg(long, default_value = "fq")]
        mode: String,
        /// Helper-field degree (mode hf).
        #[arg(long)]
        e: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest prime power solved by Pohlig-Hellman.
        #[arg(long)]
        threshold: Option<u64>,
        #[arg(long, default_value = "rsdl.toml")]
        out: PathBuf,
    },
    /// Collect relations into a relation file, merging with its contents.
    Collect {
        #[command(flatten)]
        ctx: CtxArg,
        #[arg(long, default_value = "relations.txt")]
        out: PathBuf,
        /// Exponent range `a:b`; defaults to resuming after the file's cursor.
        #[arg(long)]
        range: Option<String>,
        /// Stop after this many new relations.
        #[arg(long)]
        count: Option<usize>,
        /// Sample exponents at random instead of scanning.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Maximum number of exponents tried.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve for the factor-base logarithms and write a verified table.
    Solve {
        #[command(flatten)]
        ctx: CtxArg,
        #[arg(long, default_value = "relations.txt")]
        relations: PathBuf,
        #[arg(long, default_value = "table.txt")]
        out: PathBuf,
        #[arg(long)]
        threshold: Option<u64>,
    },
    /// Logarithm of one element, e.g. `--target "X^2+1"`.
    Log {
        #[command(flatten)]
        ctx: CtxArg,
        #[arg(long, default_value = "table.txt")]
        table: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Success probability of one decoding attempt.
    Estimate {
        #[command(flatten)]
        ctx: CtxArg,
    },
    /// Re-check a table and/or relation file.
    Verify {
        #[command(flatten)]
        ctx: CtxArg,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        relations: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Setup {
            p,
            h,
            q,
            mode,
            e,
            seed,
            threshold,
            out,
        } => commands::setup(p, h, &q, &mode, e, seed, threshold, &out),
        Command::Collect {
            ctx,
            out,
            range,
            count,
            random,
            workers,
            budget,
            seed,
        } => commands::collect(
            &ctx.ctx,
            &out,
            range.as_deref(),
            count,
            random,
            workers,
            budget,
            seed,
        ),
        Command::Solve {
            ctx,
            relations,
            out,
            threshold,
        } => commands::solve(&ctx.ctx, &relations, &out, threshold),
        Command::Log {
            ctx,
            table,
            target,
            budget,
            seed,
        } => commands::log(&ctx.ctx, &table, &target, budget, seed),
        Command::Estimate { ctx } => commands::estimate(&ctx.ctx),
        Command::Verify {
            ctx,
            table,
            relations,
        } => commands::verify(&ctx.ctx, table.as_deref(), relations.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
