use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;
use stiefelsync::{synchronise, Error, Method};

use crate::matchfile::MatchFile;
use crate::{echo_config, parse_method, read_utf8, SolverArgs};

pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    /// JSON match file.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Universe size.
    #[arg(long, short)]
    pub d: usize,
    #[arg(long, default_value = "sparse", value_parser = parse_method)]
    pub method: Method,
    #[arg(long, env = "STIEFELSYNC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Where to write the universe matching; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Serialize)]
struct Summary {
    method: Method,
    k: usize,
    d: usize,
    m_total: usize,
    iterations: usize,
    converged: bool,
    objective_f: f64,
    objective_g: f64,
    matching_objective: f64,
    objective_norm: f64,
    runtime_ms: f64,
}

pub fn run(args: &SolveArgs) -> Result<u8> {
    echo_config("solve", args);
    let cfg = args.solver.config(args.method, args.seed)?;
    let matches = MatchFile::parse(&read_utf8(&args.input)?)?.into_match_set()?;

    let res = match synchronise(&matches, args.d, &cfg) {
        Ok(res) => res,
        Err(e @ (Error::UniverseTooSmall { .. } | Error::UniverseTooLarge { .. })) => {
            eprintln!("infeasible: {e}");
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e.into()),
    };

    let json = serde_json::to_string_pretty(&res.universe)?;
    match &args.output {
        Some(path) => std::fs::write(path, json + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{json}"),
    }

    let summary = Summary {
        method: args.method,
        k: matches.k(),
        d: args.d,
        m_total: matches.total_points(),
        iterations: res.report.iterations,
        converged: res.report.converged,
        objective_f: res.report.objective_f,
        objective_g: res.report.objective_g,
        matching_objective: res.matching_objective,
        objective_norm: res.normalized_objective,
        runtime_ms: res.report.runtime_ms,
    };
    let line = serde_json::to_string(&summary)?;
    if args.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }

    if res.report.converged {
        Ok(0)
    } else {
        eprintln!(
            "warning: solver stopped after {} iterations without converging",
            res.report.iterations
        );
        Ok(EXIT_NOT_CONVERGED)
    }
}
