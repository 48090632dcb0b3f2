//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stiefelsync::datagen::{generate_instance, GenConfig, SyntheticInstance};
use stiefelsync::linalg::random::{gaussian_matrix, random_orthogonal, random_stiefel};
use stiefelsync::metrics::evaluate;
use stiefelsync::stiefel::{initial_point, rotation_step, sparse_step, StepNorm};
use stiefelsync::{
    brute_force_assignment, build_z, check_cycle_consistency, objective_f, orthogonal_iteration,
    solve, solve_max_assignment, sparse_orthogonal_iteration, step_size, subspace_distance,
    symmetric_eigen, synchronise, thin_qr_unique, Config, Matrix, Method, PairwiseMatchSet, Report,
};

use common::{gapped_psd, projector, random_psd, tight};

/// Bookkeeping shared across criteria for the suite-wide checks.
#[derive(Default)]
struct Tally {
    solves: usize,
    unconverged: Vec<String>,
    syncs: usize,
    inconsistent: Vec<String>,
}

impl Tally {
    fn solve(&mut self, label: &str, report: Report) -> Report {
        self.solves += 1;
        if !report.converged || report.iterations > 1000 {
            self.unconverged
                .push(format!("{label} ({} it)", report.iterations));
        }
        report
    }

    fn sync(
        &mut self,
        label: &str,
        matches: &PairwiseMatchSet,
        d: usize,
        cfg: &Config,
    ) -> stiefelsync::Sync {
        let res = synchronise(matches, d, cfg).unwrap();
        self.syncs += 1;
        if !check_cycle_consistency(&res.universe.to_match_set()) {
            self.inconsistent.push(label.to_string());
        }
        self.solve(label, res.report.clone());
        res
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn criterion_1(t: &mut Tally) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let (mut worst_f, mut worst_dist) = (0.0f64, 0.0f64);
    for trial in 0..50u64 {
        let m = rng.random_range(10..=60);
        let d = rng.random_range(2..=10);
        let inst = gapped_psd(&mut rng, m, d);
        let oracle = stiefelsync::eigen_oracle(&inst.w).unwrap();
        let oracle_sum = oracle.leading_sum(d);
        assert!((oracle_sum - inst.top_sum).abs() <= 1e-9 * inst.top_sum);
        for method in [Method::Plain, Method::Sparse] {
            let cfg = tight(method, trial);
            let u0 = initial_point(m, d, trial).unwrap();
            let rep = t.solve(
                &format!("c1 {method} #{trial}"),
                solve(&inst.w, &u0, &cfg).unwrap(),
            );
            worst_f = worst_f.max((rep.objective_f - oracle_sum).abs() / oracle_sum);
            worst_dist =
                worst_dist.max(subspace_distance(&rep.u_star, &oracle.leading_vectors(d)).unwrap());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_f <= 1e-6 && worst_dist <= 1e-6,
        format!(
            "max rel f error {worst_f:.2e}, max subspace distance {worst_dist:.2e}, {secs:.2}s"
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let m = rng.random_range(8..=30);
        let d = rng.random_range(2..=6);
        let w = random_psd(&mut rng, m).entries().clone();
        let u0 = random_stiefel::<f64, _>(&mut rng, m, d).unwrap();
        let (mut a, mut b) = (u0.clone(), u0);
        for _ in 0..200 {
            let x = gaussian_matrix::<f64, _>(&mut rng, d, d);
            a = thin_qr_unique(&w.matmul(&a).unwrap().matmul(&x).unwrap())
                .unwrap()
                .0;
            b = thin_qr_unique(&w.matmul(&b).unwrap()).unwrap().0;
            worst = worst.max(subspace_distance(&a, &b).unwrap());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max per-iteration subspace distance {worst:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let m = rng.random_range(4..=25);
        let d = rng.random_range(2..=m.min(6));
        let p = 3 + (trial % 2);
        let (w, v) = projector(&mut rng, m, d);
        let q = random_orthogonal::<f64, _>(&mut rng, d).unwrap();
        let u = v.rotate(&q).unwrap();
        let (full, alpha) = sparse_step(&w, &u, p, StepNorm::default()).unwrap();
        assert_eq!(alpha, step_size(&u, p));
        let simplified = rotation_step(&u, p, alpha).unwrap();
        worst = worst.max(full.sub(&simplified).unwrap().max_abs());
    }
    outcome(
        worst <= 1e-10,
        format!("max entrywise difference {worst:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut worst = f64::INFINITY;
    for trial in 0..1000 {
        let m = rng.random_range(2..=20);
        let d = rng.random_range(1..=m.min(8));
        let p = if trial % 2 == 0 { 3 } else { 4 };
        let u = random_stiefel::<f64, _>(&mut rng, m, d).unwrap();
        let alpha = if trial % 3 == 0 {
            rng.random_range(0.01..100.0)
        } else {
            step_size(&u, p)
        };
        let z = build_z(&u, p, alpha);
        let gram = z.transpose().matmul(&z).unwrap();
        let eig = symmetric_eigen(&gram).unwrap();
        worst = worst.min(eig.values.last().unwrap().max(0.0).sqrt());
    }
    outcome(
        worst >= 1.0 - 1e-12,
        format!("min singular value {worst:.15}"),
    )
}

fn instance(d: usize, k: usize, rho: f64, sigma: f64, seed: u64) -> SyntheticInstance {
    generate_instance(&GenConfig {
        d,
        k,
        rho,
        sigma,
        seed,
    })
    .unwrap()
}

fn criterion_5_and_10(t: &mut Tally) -> (Outcome, Outcome) {
    let (mut wins, mut worst_dist, mut worst_gap) = (0, 0.0f64, 0.0f64);
    for seed in 1..=20u64 {
        let inst = instance(30, 5, 0.9, 0.3, seed);
        let base = Config::default().with_seed(seed);
        let plain = t.sync(
            &format!("c5 plain #{seed}"),
            &inst.noisy,
            30,
            &base.clone().with_method(Method::Plain),
        );
        let sparse = t.sync(&format!("c5 sparse #{seed}"), &inst.noisy, 30, &base);
        if sparse.report.objective_g > plain.report.objective_g {
            wins += 1;
        }

        let ts = t.sync(
            &format!("c10 two_stage #{seed}"),
            &inst.noisy,
            30,
            &base.clone().with_method(Method::TwoStage),
        );
        worst_dist =
            worst_dist.max(subspace_distance(&sparse.report.u_star, &ts.report.u_star).unwrap());
        let (gs, gt) = (sparse.report.objective_g, ts.report.objective_g);
        worst_gap = worst_gap.max((gt - gs).abs() / gs.abs());
    }
    (
        outcome(
            wins >= 18,
            format!("g3(sparse) > g3(plain) on {wins}/20 instances"),
        ),
        outcome(
            worst_dist <= 1e-6 && worst_gap <= 0.05,
            format!(
                "max subspace distance {worst_dist:.2e}, max relative g3 difference {:.2}%",
                worst_gap * 100.0
            ),
        ),
    )
}

fn criterion_6(t: &mut Tally) -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for (k, d) in [
        (2, 2),
        (3, 5),
        (5, 10),
        (8, 12),
        (10, 20),
        (15, 25),
        (20, 30),
    ] {
        for seed in 0..3u64 {
            let inst = instance(d, k, 1.0, 0.0, seed);
            let res = t.sync(
                &format!("c6 k={k} d={d} #{seed}"),
                &inst.noisy,
                d,
                &Config::default().with_seed(seed),
            );
            let f = evaluate(&res.universe, &inst.ground_truth).unwrap().fscore;
            runs += 1;
            if f != 1.0 {
                failures.push(format!("k={k} d={d} seed={seed} f={f}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{}/{runs} exact recoveries {failures:?}",
            runs - failures.len()
        ),
    )
}

fn criterion_7(t: &mut Tally) -> Outcome {
    let (mut plain, mut sparse) = (0.0, 0.0);
    for seed in 1..=5u64 {
        let inst = instance(20, 10, 0.9, 0.3, seed);
        let base = Config::default().with_seed(seed);
        let p = t.sync(
            &format!("c7 plain #{seed}"),
            &inst.noisy,
            20,
            &base.clone().with_method(Method::Plain),
        );
        let s = t.sync(&format!("c7 sparse #{seed}"), &inst.noisy, 20, &base);
        plain += evaluate(&p.universe, &inst.ground_truth).unwrap().fscore / 5.0;
        sparse += evaluate(&s.universe, &inst.ground_truth).unwrap().fscore / 5.0;
    }
    outcome(
        sparse >= plain,
        format!("mean fscore sparse {sparse:.4}, plain {plain:.4}"),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let (mut checked, mut mismatches) = (0, 0);
    for m in 1..=4 {
        for d in m..=6 {
            for _ in 0..500 {
                let c = Matrix::from_fn(m, d, |_, _| rng.random_range(-1.0..1.0));
                let fast = solve_max_assignment(&c).unwrap();
                let brute = brute_force_assignment(&c).unwrap();
                checked += 1;
                if fast.score != brute.score || fast.row_to_col != brute.row_to_col {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0,
        format!("{checked} matrices, {mismatches} mismatches"),
    )
}

/// Extra synchronisation runs over mixed configurations so the
/// consistency check covers a broad set of inputs.
fn consistency_sweep(t: &mut Tally) {
    let mut seed = 5000;
    for &(d, k, rho, sigma) in &[
        (10, 4, 0.7, 0.2),
        (15, 6, 0.5, 0.4),
        (8, 3, 1.0, 0.5),
        (12, 8, 0.8, 0.1),
    ] {
        for method in Method::ALL {
            for _ in 0..4 {
                seed += 1;
                let inst = instance(d, k, rho, sigma, seed);
                let max_m = *inst.noisy.block_sizes().iter().max().unwrap();
                let cfg = Config::default().with_method(method).with_seed(seed);
                t.sync(
                    &format!("sweep {method} #{seed}"),
                    &inst.noisy,
                    d.max(max_m),
                    &cfg,
                );
            }
        }
    }
}

fn criterion_11_extra(t: &mut Tally) {
    // Default-configuration plain and sparse runs on the criterion-1 family.
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for trial in 0..50u64 {
        let m = rng.random_range(10..=60);
        let d = rng.random_range(2..=10);
        let inst = gapped_psd(&mut rng, m, d);
        let u0 = initial_point(m, d, trial).unwrap();
        let cfg = Config::default().with_seed(trial);
        t.solve(
            &format!("c11 plain #{trial}"),
            orthogonal_iteration(&inst.w, &u0, &cfg).unwrap(),
        );
        t.solve(
            &format!("c11 sparse #{trial}"),
            sparse_orthogonal_iteration(&inst.w, &u0, &cfg).unwrap(),
        );
        let f = objective_f(&inst.w, &u0).unwrap();
        assert!(f.is_finite());
    }
}

fn main() -> ExitCode {
    let mut t = Tally::default();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    results.push((1, "spectral optimality", criterion_1(&mut t)));
    results.push((2, "random-rotation equivalence", criterion_2()));
    results.push((3, "in-limit update identity", criterion_3()));
    results.push((4, "Z full rank", criterion_4()));
    let (c5, c10) = criterion_5_and_10(&mut t);
    results.push((5, "sparsity effect", c5));
    results.push((6, "perfect recovery", criterion_6(&mut t)));
    results.push((7, "fscore dominance", criterion_7(&mut t)));
    results.push((8, "LAP correctness", criterion_8()));
    consistency_sweep(&mut t);
    results.push((
        9,
        "cycle consistency",
        outcome(
            t.syncs >= 100 && t.inconsistent.is_empty(),
            format!(
                "{} synchronise calls, inconsistent: {:?}",
                t.syncs, t.inconsistent
            ),
        ),
    ));
    results.push((10, "two-stage parity", c10));
    criterion_11_extra(&mut t);
    results.push((
        11,
        "convergence budget",
        outcome(
            t.unconverged.is_empty(),
            format!("{} solves, unconverged: {:?}", t.solves, t.unconverged),
        ),
    ));

    let mut failed = 0;
    results.sort_by_key(|r| r.0);
    for (id, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id:>2} {name}: {}", o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
