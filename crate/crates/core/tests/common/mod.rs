#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stiefelsync::linalg::random::{random_orthogonal, random_stiefel};
use stiefelsync::{
    check_cycle_consistency, synchronise, Config, Matrix, PairwiseMatchSet, Problem, Stiefel, Sync,
};

/// `W = V diag(λ) Vᵀ` for a random orthogonal `V`, with the top `d`
/// eigenvalues drawn from `[1.1, 2.1]` and the rest from `[0, 1]`, so the
/// gap `λ_d − λ_{d+1}` is at least 0.1.
pub struct GappedPsd {
    pub w: Problem,
    pub top_sum: f64,
    pub dominant: Stiefel,
}

pub fn gapped_psd(rng: &mut ChaCha8Rng, m: usize, d: usize) -> GappedPsd {
    let v = random_orthogonal::<f64, _>(rng, m).unwrap();
    let lambda: Vec<f64> = (0..m)
        .map(|i| {
            if i < d {
                rng.random_range(1.1..=2.1)
            } else {
                rng.random_range(0.0..=1.0)
            }
        })
        .collect();
    let vl = Matrix::from_fn(m, m, |i, j| v[(i, j)] * lambda[j]);
    let raw = vl.matmul(&v.transpose()).unwrap();
    let sym = Matrix::from_fn(m, m, |i, j| 0.5 * (raw[(i, j)] + raw[(j, i)]));
    let dominant = Stiefel::new(Matrix::from_fn(m, d, |i, j| v[(i, j)])).unwrap();
    GappedPsd {
        w: Problem::from_symmetric(sym).unwrap(),
        top_sum: lambda[..d].iter().sum(),
        dominant,
    }
}

/// Random PSD matrix `G Gᵀ / m` with no gap control.
pub fn random_psd(rng: &mut ChaCha8Rng, m: usize) -> Problem {
    let g = stiefelsync::linalg::random::gaussian_matrix::<f64, _>(rng, m, m);
    let raw = g.matmul(&g.transpose()).unwrap().scale(1.0 / m as f64);
    Problem::from_symmetric(Matrix::from_fn(m, m, |i, j| {
        0.5 * (raw[(i, j)] + raw[(j, i)])
    }))
    .unwrap()
}

/// `W = V Vᵀ` for a random `V ∈ St(m, d)`.
pub fn projector(rng: &mut ChaCha8Rng, m: usize, d: usize) -> (Problem, Stiefel) {
    let v = random_stiefel::<f64, _>(rng, m, d).unwrap();
    let raw = v.matmul(&v.transpose()).unwrap();
    let w = Problem::from_symmetric(Matrix::from_fn(m, m, |i, j| {
        0.5 * (raw[(i, j)] + raw[(j, i)])
    }))
    .unwrap();
    (w, v)
}

/// Tight configuration used where the result is compared against an
/// oracle to `1e-6`.
pub fn tight(method: stiefelsync::Method, seed: u64) -> Config {
    Config {
        residual_tol: Some(1e-11),
        ..Config::default().with_method(method).with_seed(seed)
    }
}

/// Synchronises and asserts the output is cycle-consistent.
pub fn checked_sync(matches: &PairwiseMatchSet, d: usize, cfg: &Config) -> Sync {
    let res = synchronise(matches, d, cfg).unwrap();
    assert!(check_cycle_consistency(&res.universe.to_match_set()));
    res
}
