use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::StiefelPoint;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Orthogonal Iteration.
    Plain,
    /// Orthogonal Iteration with the sparsity-promoting rotation `Z(U)`.
    Sparse,
    /// Orthogonal Iteration followed by rotation refinement for as many
    /// iterations as the first stage took.
    TwoStage,
    /// Orthogonal Iteration followed by backtracking rotation refinement
    /// until the secondary objective converges.
    TwoStageBt,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Plain,
        Method::Sparse,
        Method::TwoStage,
        Method::TwoStageBt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Plain => "plain",
            Method::Sparse => "sparse",
            Method::TwoStage => "two_stage",
            Method::TwoStageBt => "two_stage_bt",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "plain" | "spectral" => Ok(Method::Plain),
            "sparse" => Ok(Method::Sparse),
            "two_stage" | "2_stage" => Ok(Method::TwoStage),
            "two_stage_bt" | "2_stage/bt" | "2_stage_bt" | "two_stage/bt" => Ok(Method::TwoStageBt),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

/// Matrix norm of `S = h − hᵀ` whose inverse is the step size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepNorm {
    /// Induced ∞-norm, the largest absolute row sum.
    #[default]
    MaxRowSum,
    /// Largest absolute entry. Gives steps up to `d − 1` times longer, which
    /// keep rotating the basis instead of settling.
    MaxEntry,
}

impl FromStr for StepNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "max_row_sum" | "row_sum" | "induced" => Ok(StepNorm::MaxRowSum),
            "max_entry" | "entrywise" | "max_abs" => Ok(StepNorm::MaxEntry),
            other => Err(Error::InvalidConfig(format!("unknown step norm '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `α = 1 / ‖h − hᵀ‖_∞`.
    InfNormInverse,
    /// Start from the inverse-max step and halve until `g` does not decrease.
    Backtracking,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<T> {
    /// Exponent of the secondary objective.
    pub p: u32,
    /// Relative tolerance of the ratio test `f(U_t)/f(U_{t+1}) ≥ 1 − ε`.
    pub epsilon: T,
    pub max_iter: usize,
    pub method: Method,
    pub seed: u64,
    pub step_rule: StepRule,
    pub step_norm: StepNorm,
    /// When set, subspace iterations additionally wait until the invariant
    /// subspace residual `‖WU − U(UᵀWU)‖_F` is at most `tol · ‖W‖_F`.
    pub residual_tol: Option<T>,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            p: 3,
            epsilon: T::lit(1e-5),
            max_iter: 1000,
            method: Method::Sparse,
            seed: 0,
            step_rule: StepRule::InfNormInverse,
            step_norm: StepNorm::MaxRowSum,
            residual_tol: None,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 3 {
            return Err(Error::InvalidConfig(format!(
                "p must be at least 3, got {}",
                self.p
            )));
        }
        if !(self.epsilon > T::zero() && self.epsilon < T::one()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        if let Some(tol) = self.residual_tol {
            if !(tol > T::zero()) {
                return Err(Error::InvalidConfig(format!(
                    "residual_tol must be positive, got {tol}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord<T> {
    pub f: T,
    pub g: T,
    /// Step size used by rotating updates; `None` for plain iterations.
    pub alpha: Option<T>,
}

#[derive(Clone, Debug)]
pub struct SolveReport<T> {
    pub u_star: StiefelPoint<T>,
    pub iterations: usize,
    pub converged: bool,
    pub objective_f: T,
    pub objective_g: T,
    pub runtime_ms: f64,
    pub history: Vec<IterationRecord<T>>,
}
