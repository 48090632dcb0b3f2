use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use stiefelsync::{Config, Method, StepNorm, StepRule};

mod matchfile;
mod oracle;
mod solve;
mod synth;

#[derive(Parser)]
#[command(
    name = "stiefelsync",
    version,
    about = "Sparse Stiefel-manifold solvers and permutation synchronisation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronise the pairwise matches in a JSON match file.
    Solve(solve::SolveArgs),
    /// Run methods on synthetic instances and write one CSV row per (instance, method).
    Synth(synth::SynthArgs),
    /// Check solver results against an eigendecomposition on random instances.
    OracleCheck(oracle::OracleArgs),
}

/// Solver settings shared by all subcommands.
#[derive(Args, Clone, Debug, Serialize)]
pub struct SolverArgs {
    /// Exponent of the sparsity objective.
    #[arg(long, default_value_t = 3)]
    pub p: u32,
    /// Relative tolerance of the convergence test on f.
    #[arg(long, default_value_t = 1e-5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Norm whose inverse is the rotation step: max_row_sum or max_entry.
    #[arg(long, default_value = "max_row_sum", value_parser = parse_step_norm)]
    pub step_norm: StepNorm,
    /// Also require ‖WU − U(UᵀWU)‖_F ≤ tol·‖W‖_F before stopping.
    #[arg(long)]
    pub residual_tol: Option<f64>,
}

fn parse_step_norm(s: &str) -> Result<StepNorm, String> {
    s.parse().map_err(|e: stiefelsync::Error| e.to_string())
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: stiefelsync::Error| e.to_string())
}

impl SolverArgs {
    pub fn config(&self, method: Method, seed: u64) -> anyhow::Result<Config> {
        let cfg = Config {
            p: self.p,
            epsilon: self.epsilon,
            max_iter: self.max_iter,
            method,
            seed,
            step_rule: StepRule::InfNormInverse,
            step_norm: self.step_norm,
            residual_tol: self.residual_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Writes the resolved configuration of a run to stderr as one JSON line.
pub fn echo_config(command: &str, args: &impl Serialize) {
    let line = serde_json::json!({ "command": command, "config": args });
    eprintln!("{line}");
}

pub fn read_utf8(path: &PathBuf) -> anyhow::Result<String> {
    use anyhow::Context;
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Synth(args) => synth::run(&args),
        Command::OracleCheck(args) => oracle::run(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
