//! `maxmin`: solve max-min LPs exactly, run the local algorithm, generate
//! and verify lower-bound instances.
//!
//! Exit codes: 0 success, 2 input error, 3 unsupported instance,
//! 4 verification failure, 5 resource budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maxmin_core::lowerbound::GirthBudget;
use thiserror::Error;

mod commands;
mod manifest;
mod verify;

use commands::{GenArgs, RunLocalArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Budget(_) => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "maxmin", version, about = "Exact max-min LPs and local approximation")]
struct Cli {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance exactly and print omega* and x.
    Solve { instance: PathBuf },
    /// Run the local algorithm and check it against the exact optimum.
    RunLocal {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        delta_i: usize,
        #[arg(long)]
        delta_k: usize,
        #[arg(long = "L")]
        l: usize,
        /// Write every distinct subproblem as an instance document here.
        #[arg(long)]
        emit_subproblems: Option<PathBuf>,
    },
    /// Generate S, the requested S_k and a manifest.
    GenLowerbound {
        #[arg(long)]
        d_i: usize,
        #[arg(long)]
        d_k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Skeleton objective of S to centre an S_k on (repeatable). Defaults to the first.
        #[arg(long)]
        sk: Vec<usize>,
        #[arg(long, default_value_t = GirthBudget::default().max_vertices)]
        max_vertices: usize,
        #[arg(long, default_value_t = GirthBudget::default().attempts_per_lift)]
        attempts_per_lift: usize,
        /// Growth is measured from radius `growth_j * (4s + 2)` (only when s >= 1).
        #[arg(long, default_value_t = 3)]
        growth_j: u32,
        /// Also solve S exactly (slow for large skeletons).
        #[arg(long)]
        solve: bool,
    },
    /// Re-run every check on a gen-lowerbound directory.
    Verify { dir: PathBuf },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let manifest = match cli.command {
        Command::Solve { instance } => commands::solve(&instance)?,
        Command::RunLocal {
            instance,
            delta_i,
            delta_k,
            l,
            emit_subproblems,
        } => commands::run_local(&RunLocalArgs {
            instance: &instance,
            delta_i,
            delta_k,
            l,
            emit_subproblems: emit_subproblems.as_deref(),
        })?,
        Command::GenLowerbound {
            d_i,
            d_k,
            s,
            r,
            seed,
            out,
            sk,
            max_vertices,
            attempts_per_lift,
            growth_j,
            solve,
        } => commands::gen_lowerbound(GenArgs {
            d_i,
            d_k,
            s,
            r,
            seed,
            out,
            sk,
            max_vertices,
            attempts_per_lift,
            growth_j,
            solve,
        })?,
        Command::Verify { dir } => {
            let report = verify::verify(&dir)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.summary());
            }
            return Ok(report.exit_status);
        }
    };
    if cli.json {
        print!("{}", manifest.to_json());
    } else {
        print!("{}", manifest.summary());
        if manifest.command == "run-local" {
            let verdict = if manifest.exit_status == 0 { "PASS" } else { "FAIL" };
            println!("ratio check: {verdict}");
        }
    }
    Ok(manifest.exit_status)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("maxmin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
