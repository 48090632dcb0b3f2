use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use stiefelsync::datagen::{generate_instance, GenConfig};
use stiefelsync::metrics::evaluate;
use stiefelsync::{synchronise, Method};

use crate::{echo_config, parse_method, SolverArgs};

#[derive(Args, Debug, Serialize)]
pub struct SynthArgs {
    /// Universe size; a comma list makes this the swept parameter.
    #[arg(long, default_value = "30")]
    pub d: String,
    /// Number of objects; a comma list makes this the swept parameter.
    #[arg(long, default_value = "5")]
    pub k: String,
    /// Observation rate; a comma list makes this the swept parameter.
    #[arg(long, default_value = "0.9")]
    pub rho: String,
    /// Error rate; a comma list makes this the swept parameter.
    #[arg(long, default_value = "0.3")]
    pub sigma: String,
    /// Instance seeds, e.g. `1..5` (inclusive) or `1,4,9`.
    #[arg(long, env = "STIEFELSYNC_SEED", default_value = "1..5")]
    pub seeds: String,
    #[arg(long, default_value = "plain,sparse")]
    pub methods: String,
    /// CSV destination; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Append rows to an existing file instead of overwriting it.
    #[arg(long)]
    pub append: bool,
    /// Instances solved concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Fill the runtime_ms column with measured times. Off by default so
    /// reruns produce identical files.
    #[arg(long)]
    pub record_runtime: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchmarkRow {
    pub instance_id: usize,
    pub method: Method,
    pub k: usize,
    pub d: usize,
    pub rho: f64,
    pub sigma: f64,
    pub seed: u64,
    pub m_total: usize,
    pub fscore: f64,
    pub precision: f64,
    pub recall: f64,
    pub objective_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub runtime_ms: f64,
}

fn parse_list<T: std::str::FromStr>(name: &str, text: &str) -> Result<Vec<T>> {
    let items: Result<Vec<T>, _> = text.split(',').map(|s| s.trim().parse::<T>()).collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => bail!("invalid value list for --{name}: '{text}'"),
    }
}

pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let (lo, hi): (u64, u64) = (
                lo.trim()
                    .parse()
                    .with_context(|| format!("invalid seed range '{part}'"))?,
                hi.trim()
                    .parse()
                    .with_context(|| format!("invalid seed range '{part}'"))?,
            );
            if lo > hi {
                bail!("empty seed range '{part}'");
            }
            seeds.extend(lo..=hi);
        } else {
            seeds.push(
                part.parse()
                    .with_context(|| format!("invalid seed '{part}'"))?,
            );
        }
    }
    Ok(seeds)
}

/// One generator configuration per (sweep value, seed), in output order.
pub fn expand(args: &SynthArgs) -> Result<Vec<GenConfig>> {
    let ds: Vec<usize> = parse_list("d", &args.d)?;
    let ks: Vec<usize> = parse_list("k", &args.k)?;
    let rhos: Vec<f64> = parse_list("rho", &args.rho)?;
    let sigmas: Vec<f64> = parse_list("sigma", &args.sigma)?;
    let swept = [ds.len(), ks.len(), rhos.len(), sigmas.len()]
        .iter()
        .filter(|&&n| n > 1)
        .count();
    if swept > 1 {
        bail!("only one of --d, --k, --rho, --sigma may be a list");
    }
    let seeds = parse_seeds(&args.seeds)?;
    let mut out = Vec::new();
    for &d in &ds {
        for &k in &ks {
            for &rho in &rhos {
                for &sigma in &sigmas {
                    for &seed in &seeds {
                        let gen = GenConfig {
                            d,
                            k,
                            rho,
                            sigma,
                            seed,
                        };
                        gen.validate()?;
                        out.push(gen);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn rows_for(
    id: usize,
    gen: &GenConfig,
    methods: &[Method],
    args: &SynthArgs,
) -> Result<Vec<BenchmarkRow>> {
    let inst = generate_instance(gen)?;
    methods
        .iter()
        .map(|&method| {
            let cfg = args.solver.config(method, gen.seed)?;
            let res = synchronise(&inst.noisy, gen.d, &cfg)
                .with_context(|| format!("instance {id} (seed {}), method {method}", gen.seed))?;
            let eval = evaluate(&res.universe, &inst.ground_truth)?;
            Ok(BenchmarkRow {
                instance_id: id,
                method,
                k: gen.k,
                d: gen.d,
                rho: gen.rho,
                sigma: gen.sigma,
                seed: gen.seed,
                m_total: inst.noisy.total_points(),
                fscore: eval.fscore,
                precision: eval.precision,
                recall: eval.recall,
                objective_norm: res.normalized_objective,
                iterations: res.report.iterations,
                converged: res.report.converged,
                runtime_ms: if args.record_runtime {
                    res.report.runtime_ms
                } else {
                    0.0
                },
            })
        })
        .collect()
}

pub fn run(args: &SynthArgs) -> Result<u8> {
    echo_config("synth", args);
    let methods: Vec<Method> = args
        .methods
        .split(',')
        .map(|s| parse_method(s).map_err(anyhow::Error::msg))
        .collect::<Result<_>>()?;
    let gens = expand(args)?;
    if args.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()?;
    let rows: Vec<Vec<BenchmarkRow>> = pool.install(|| {
        gens.par_iter()
            .enumerate()
            .map(|(id, gen)| rows_for(id, gen, &methods, args))
            .collect::<Result<_>>()
    })?;

    let (sink, header): (Box<dyn Write>, bool) = match &args.output {
        Some(path) => {
            let has_content = args.append && path.metadata().map(|m| m.len() > 0).unwrap_or(false);
            let file = OpenOptions::new()
                .create(true)
                .write(true)
                .append(args.append)
                .truncate(!args.append)
                .open(path)
                .with_context(|| format!("cannot open {}", path.display()))?;
            (Box::new(file), !has_content)
        }
        None => (Box::new(std::io::stdout().lock()), true),
    };
    write_rows(sink, header, rows.iter().flatten())
}

fn write_rows<'a>(
    sink: Box<dyn Write>,
    header: bool,
    rows: impl Iterator<Item = &'a BenchmarkRow>,
) -> Result<u8> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(header)
        .from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(0)
}
