use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{shape_err, Error, Result};
use crate::linalg::random::random_stiefel;
use crate::linalg::{thin_qr_unique, DenseMatrix, ProblemMatrix, StiefelPoint};
use crate::scalar::Scalar;
use crate::stiefel::config::{
    IterationRecord, Method, SolveReport, SolverConfig, StepNorm, StepRule,
};
use crate::stiefel::objective::{
    is_stationary, objective_f, objective_g, skew_gradient, step_size_for, z_from_skew,
};

/// Maximum number of step halvings tried by the backtracking rule.
pub const MAX_HALVINGS: usize = 30;

/// Callback invoked with `(iteration, iterate)` after every update.
pub type Observer<'a, T> = &'a mut dyn FnMut(usize, &StiefelPoint<T>);

/// Seeded standard-Gaussian `m×d` matrix orthonormalised by unique QR.
pub fn initial_point<T: Scalar>(m: usize, d: usize, seed: u64) -> Result<StiefelPoint<T>> {
    if d == 0 || d > m {
        return Err(shape_err("1 <= d <= m", format!("m = {m}, d = {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_stiefel(&mut rng, m, d)
}

/// One update of the sparsity-promoting iteration: the Q factor of
/// `W U Z(U)`. Returns the new iterate and the step size used.
pub fn sparse_step<T: Scalar>(
    w: &ProblemMatrix<T>,
    u: &StiefelPoint<T>,
    p: u32,
    norm: StepNorm,
) -> Result<(StiefelPoint<T>, T)> {
    check_dims(w, u)?;
    let skew = skew_gradient(u, p);
    let alpha = step_size_for(&skew, norm);
    let y = w.entries().matmul(u)?.matmul(&z_from_skew(&skew, alpha))?;
    Ok((thin_qr_unique(&y)?.0, alpha))
}

/// Rotation-only update `U Q` where `QR = Z(U)` for the given step size.
pub fn rotation_step<T: Scalar>(u: &StiefelPoint<T>, p: u32, alpha: T) -> Result<StiefelPoint<T>> {
    let z = z_from_skew(&skew_gradient(u, p), alpha);
    rotate_by_qr_of(u, &z)
}

fn rotate_by_qr_of<T: Scalar>(u: &StiefelPoint<T>, z: &DenseMatrix<T>) -> Result<StiefelPoint<T>> {
    let (q, _) = thin_qr_unique(z)?;
    Ok(StiefelPoint::new_unchecked(u.matmul(&q)?))
}

/// Orthogonal Iteration `V_{t+1}R_{t+1} = W V_t`.
pub fn orthogonal_iteration<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    subspace_iteration(w, u0, cfg, false, &mut |_, _| {})
}

pub fn orthogonal_iteration_observed<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
    observer: Observer<'_, T>,
) -> Result<SolveReport<T>> {
    subspace_iteration(w, u0, cfg, false, observer)
}

/// Sparsity-promoting Orthogonal Iteration `U_{t+1}R_{t+1} = W U_t Z(U_t)`.
///
/// The iterates span the same subspaces as plain Orthogonal Iteration from
/// the same start, so convergence is judged on `f` alone.
pub fn sparse_orthogonal_iteration<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    subspace_iteration(w, u0, cfg, true, &mut |_, _| {})
}

pub fn sparse_orthogonal_iteration_observed<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
    observer: Observer<'_, T>,
) -> Result<SolveReport<T>> {
    subspace_iteration(w, u0, cfg, true, observer)
}

fn check_dims<T: Scalar>(w: &ProblemMatrix<T>, u: &StiefelPoint<T>) -> Result<()> {
    if w.m() != u.m() {
        return Err(shape_err(
            format!("{} rows", w.m()),
            format!("{}x{}", u.m(), u.d()),
        ));
    }
    Ok(())
}

fn subspace_iteration<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
    sparse: bool,
    observer: Observer<'_, T>,
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    check_dims(w, u0)?;
    let start = Instant::now();
    let wm = w.entries();
    let w_norm = wm.frobenius_norm();
    let threshold = T::one() - cfg.epsilon;

    let mut u = u0.clone();
    let mut wu = wm.matmul(&u)?;
    let mut f_prev = u.dot(&wu)?;
    let mut reseeded = false;
    let mut converged = false;
    let mut iterations = 0;
    let mut history = Vec::new();

    while iterations < cfg.max_iter {
        iterations += 1;
        let (y, alpha) = if sparse {
            let skew = skew_gradient(&u, cfg.p);
            let alpha = step_size_for(&skew, cfg.step_norm);
            (wu.matmul(&z_from_skew(&skew, alpha))?, Some(alpha))
        } else {
            (wu, None)
        };
        let (next, _) = thin_qr_unique(&y)?;
        u = next;
        wu = wm.matmul(&u)?;
        let f_next = u.dot(&wu)?;
        history.push(IterationRecord {
            f: f_next,
            g: objective_g(&u, cfg.p),
            alpha,
        });
        observer(iterations, &u);

        if !(f_next > T::zero()) {
            // im(U) is orthogonal to im(W); restart once from a fresh draw.
            if reseeded {
                break;
            }
            reseeded = true;
            u = initial_point(u0.m(), u0.d(), cfg.seed.wrapping_add(1))?;
            wu = wm.matmul(&u)?;
            f_prev = u.dot(&wu)?;
            continue;
        }

        let ratio_ok = f_prev / f_next >= threshold;
        let residual_ok = match cfg.residual_tol {
            None => true,
            Some(tol) => invariant_residual(&u, &wu)? <= tol * w_norm,
        };
        if ratio_ok && residual_ok {
            converged = true;
            break;
        }
        f_prev = f_next;
    }

    finish(w, u, iterations, converged, cfg.p, start, history)
}

/// `‖WU − U(UᵀWU)‖_F` given `WU`.
fn invariant_residual<T: Scalar>(u: &DenseMatrix<T>, wu: &DenseMatrix<T>) -> Result<T> {
    let rayleigh = u.t_matmul(wu)?;
    Ok(wu.sub(&u.matmul(&rayleigh)?)?.frobenius_norm())
}

fn finish<T: Scalar>(
    w: &ProblemMatrix<T>,
    u: StiefelPoint<T>,
    iterations: usize,
    converged: bool,
    p: u32,
    start: Instant,
    history: Vec<IterationRecord<T>>,
) -> Result<SolveReport<T>> {
    Ok(SolveReport {
        objective_f: objective_f(w, &u)?,
        objective_g: objective_g(&u, p),
        u_star: u,
        iterations,
        converged,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        history,
    })
}

/// Rotates `U0` within its column span to increase `g`, via
/// `Q_{t+1}R_{t+1} = Z(U_t)`, `U_{t+1} = U_t Q_{t+1}`.
///
/// With [`StepRule::InfNormInverse`] exactly `cfg.max_iter` updates are made
/// (fewer only if a fixed point is reached). With [`StepRule::Backtracking`]
/// the step is halved until `g` does not decrease, and the loop stops once
/// `g(U_t)/g(U_{t+1}) ≥ 1 − ε`; if no step within [`MAX_HALVINGS`] halvings
/// is acceptable the current iterate is returned with `converged = false`.
///
/// `objective_f` in the report is `tr(UᵀU) = d` since no `W` is involved.
pub fn rotation_refinement<T: Scalar>(
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    rotation_refinement_observed(u0, cfg, &mut |_, _| {})
}

pub fn rotation_refinement_observed<T: Scalar>(
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
    observer: Observer<'_, T>,
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    let start = Instant::now();
    let mut u = u0.clone();
    let mut g = objective_g(&u, cfg.p);
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = cfg.step_rule == StepRule::InfNormInverse;

    while iterations < cfg.max_iter {
        let skew = skew_gradient(&u, cfg.p);
        if is_stationary(&skew) {
            converged = true;
            break;
        }
        let alpha0 = step_size_for(&skew, cfg.step_norm);
        iterations += 1;
        match cfg.step_rule {
            StepRule::InfNormInverse => {
                u = rotate_by_qr_of(&u, &z_from_skew(&skew, alpha0))?;
                g = objective_g(&u, cfg.p);
                history.push(IterationRecord {
                    f: T::lit(u.d() as f64),
                    g,
                    alpha: Some(alpha0),
                });
                observer(iterations, &u);
            }
            StepRule::Backtracking => {
                let mut alpha = alpha0;
                let mut accepted = None;
                for _ in 0..=MAX_HALVINGS {
                    let cand = rotate_by_qr_of(&u, &z_from_skew(&skew, alpha))?;
                    let g_cand = objective_g(&cand, cfg.p);
                    if g_cand >= g {
                        accepted = Some((cand, g_cand));
                        break;
                    }
                    alpha = alpha * T::lit(0.5);
                }
                let Some((cand, g_next)) = accepted else {
                    converged = false;
                    break;
                };
                u = cand;
                history.push(IterationRecord {
                    f: T::lit(u.d() as f64),
                    g: g_next,
                    alpha: Some(alpha),
                });
                observer(iterations, &u);
                let done = g_next - g <= cfg.epsilon * g_next.abs();
                g = g_next;
                if done {
                    converged = true;
                    break;
                }
            }
        }
    }

    let d = T::lit(u.d() as f64);
    Ok(SolveReport {
        objective_f: d,
        objective_g: g,
        u_star: u,
        iterations,
        converged,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        history,
    })
}

/// Orthogonal Iteration to find the dominant subspace, then rotation
/// refinement from that basis.
///
/// For [`Method::TwoStageBt`] (or a backtracking step rule) the second stage
/// runs to `g`-convergence; otherwise it runs for exactly as many iterations
/// as the first stage needed.
pub fn two_stage_solve<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    two_stage_solve_observed(w, u0, cfg, &mut |_, _| {})
}

pub fn two_stage_solve_observed<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
    observer: Observer<'_, T>,
) -> Result<SolveReport<T>> {
    let start = Instant::now();
    let stage1 = subspace_iteration(w, u0, cfg, false, &mut *observer)?;
    let offset = stage1.iterations;

    let mut cfg2 = cfg.clone();
    if cfg.method == Method::TwoStageBt || cfg.step_rule == StepRule::Backtracking {
        cfg2.step_rule = StepRule::Backtracking;
    } else {
        cfg2.step_rule = StepRule::InfNormInverse;
        cfg2.max_iter = stage1.iterations;
    }
    let stage2 =
        rotation_refinement_observed(&stage1.u_star, &cfg2, &mut |t, u| observer(offset + t, u))?;

    let mut history = stage1.history;
    history.extend(stage2.history.iter().map(|r| IterationRecord {
        f: stage1.objective_f,
        ..*r
    }));
    let mut report = finish(
        w,
        stage2.u_star,
        offset + stage2.iterations,
        stage1.converged && stage2.converged,
        cfg.p,
        start,
        history,
    )?;
    report.objective_g = stage2.objective_g;
    Ok(report)
}

/// Dispatches on `cfg.method`.
pub fn solve<T: Scalar>(
    w: &ProblemMatrix<T>,
    u0: &StiefelPoint<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    match cfg.method {
        Method::Plain => orthogonal_iteration(w, u0, cfg),
        Method::Sparse => sparse_orthogonal_iteration(w, u0, cfg),
        Method::TwoStage | Method::TwoStageBt => two_stage_solve(w, u0, cfg),
    }
}

/// [`solve`] from the seeded default start [`initial_point`].
pub fn solve_seeded<T: Scalar>(
    w: &ProblemMatrix<T>,
    d: usize,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    if d > w.m() {
        return Err(Error::UniverseTooLarge { d, m: w.m() });
    }
    let u0 = initial_point(w.m(), d, cfg.seed)?;
    solve(w, &u0, cfg)
}
