use anyhow::{bail, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use stiefelsync::linalg::random::random_orthogonal;
use stiefelsync::stiefel::{orthogonal_iteration_observed, sparse_orthogonal_iteration_observed};
use stiefelsync::{
    eigen_oracle, initial_point, subspace_distance, Matrix, Method, Problem, Stiefel,
};

use crate::{echo_config, SolverArgs};

pub const EXIT_VIOLATION: u8 = 4;

const RESIDUAL_TOL: f64 = 1e-11;
const VALUE_TOL: f64 = 1e-6;
const SUBSPACE_TOL: f64 = 1e-6;
const SEQUENCE_TOL: f64 = 1e-8;
const ORTHO_TOL: f64 = 1e-8;
const TRACE_TOL: f64 = 1e-8;

#[derive(Args, Debug, Serialize)]
pub struct OracleArgs {
    #[arg(long, short)]
    pub m: usize,
    #[arg(long, short)]
    pub d: usize,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    /// Seed of the first trial; trial `t` uses `seed + t`.
    #[arg(long, env = "STIEFELSYNC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Default, Serialize)]
struct Residuals {
    trials: usize,
    max_value_error: f64,
    max_subspace_residual: f64,
    max_sequence_distance: f64,
    max_orthonormality_error: f64,
    max_trace_error: f64,
    failing_seeds: Vec<u64>,
}

/// Symmetric PSD matrix with spectrum in `[1.1, 2.1]` on a random
/// `d`-dimensional subspace and `[0, 1]` elsewhere.
fn spiked(rng: &mut ChaCha8Rng, m: usize, d: usize) -> Result<Problem> {
    let v = random_orthogonal::<f64, _>(rng, m)?;
    let lambda: Vec<f64> = (0..m)
        .map(|i| {
            if i < d {
                rng.random_range(1.1..=2.1)
            } else {
                rng.random_range(0.0..=1.0)
            }
        })
        .collect();
    let raw = Matrix::from_fn(m, m, |i, j| v[(i, j)] * lambda[j]).matmul(&v.transpose())?;
    Ok(Problem::from_symmetric(Matrix::from_fn(m, m, |i, j| {
        0.5 * (raw[(i, j)] + raw[(j, i)])
    }))?)
}

fn trial(args: &OracleArgs, seed: u64, acc: &mut Residuals) -> Result<Vec<String>> {
    let (m, d) = (args.m, args.d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = spiked(&mut rng, m, d)?;
    let oracle = eigen_oracle(&w)?;
    let (target, basis) = (oracle.leading_sum(d), oracle.leading_vectors(d));
    let u0 = initial_point(m, d, seed)?;

    let mut problems = Vec::new();
    let mut paths: Vec<Vec<Stiefel>> = vec![Vec::new(), Vec::new()];
    for (slot, method) in [Method::Plain, Method::Sparse].into_iter().enumerate() {
        let cfg = args.solver.config(method, seed)?;
        let path = &mut paths[slot];
        let mut record = |_: usize, u: &Stiefel| path.push(u.clone());
        let rep = match method {
            Method::Plain => orthogonal_iteration_observed(&w, &u0, &cfg, &mut record)?,
            _ => sparse_orthogonal_iteration_observed(&w, &u0, &cfg, &mut record)?,
        };
        let value = (rep.objective_f - target).abs() / target.abs().max(f64::MIN_POSITIVE);
        let dist = subspace_distance(&rep.u_star, &basis)?;
        let ortho = rep.u_star.orthonormality_error();
        acc.max_value_error = acc.max_value_error.max(value);
        acc.max_subspace_residual = acc.max_subspace_residual.max(dist);
        acc.max_orthonormality_error = acc.max_orthonormality_error.max(ortho);
        if !rep.converged {
            problems.push(format!(
                "{method}: no convergence in {} iterations",
                rep.iterations
            ));
        }
        if !(value <= VALUE_TOL) {
            problems.push(format!("{method}: f error {value:e}"));
        }
        if !(dist <= SUBSPACE_TOL) {
            problems.push(format!("{method}: subspace distance {dist:e}"));
        }
        if !(ortho <= ORTHO_TOL) {
            problems.push(format!("{method}: orthonormality error {ortho:e}"));
        }
        if d == m {
            let trace = w.entries().trace();
            let err = (rep.objective_f - trace).abs() / trace.abs().max(1.0);
            acc.max_trace_error = acc.max_trace_error.max(err);
            if !(err <= TRACE_TOL) {
                problems.push(format!("{method}: f differs from tr(W) by {err:e}"));
            }
        }
    }

    for (t, (a, b)) in paths[0].iter().zip(&paths[1]).enumerate() {
        let dist = subspace_distance(a, b)?;
        acc.max_sequence_distance = acc.max_sequence_distance.max(dist);
        if !(dist <= SEQUENCE_TOL) {
            problems.push(format!(
                "iterate {}: plain and sparse subspaces differ by {dist:e}",
                t + 1
            ));
            break;
        }
    }
    Ok(problems)
}

pub fn run(args: &OracleArgs) -> Result<u8> {
    let mut args = OracleArgs {
        solver: args.solver.clone(),
        ..*args
    };
    args.solver.residual_tol.get_or_insert(RESIDUAL_TOL);
    echo_config("oracle-check", &args);
    if args.d == 0 || args.d > args.m {
        bail!("need m >= d >= 1, got m = {}, d = {}", args.m, args.d);
    }

    let mut acc = Residuals::default();
    for t in 0..args.trials {
        let seed = args.seed.wrapping_add(t as u64);
        let problems = trial(&args, seed, &mut acc)?;
        acc.trials += 1;
        if !problems.is_empty() {
            eprintln!("violation at seed {seed}: {}", problems.join("; "));
            acc.failing_seeds.push(seed);
        }
    }
    println!("{}", serde_json::to_string(&acc)?);
    Ok(if acc.failing_seeds.is_empty() {
        0
    } else {
        EXIT_VIOLATION
    })
}
