//! Large-deviation upper bounds on expected exit times from `(-h, h)` for
//! autoregressions `X_{n+1} = f(X_n) + ε ξ_{n+1}`.
//!
//! - [`model`]: map families, innovation laws, the recursion.
//! - [`action`]: path functionals and structural predicates.
//! - [`minimizer`]: grid dynamic program and coordinate-descent refinement.
//! - [`closed_forms`]: exact bounds for the piecewise-linear and quadratic families.
//! - [`montecarlo`]: simulated exit times and scaled statistics.
//! - [`stationary`]: the skew-normal stationary density of `f(x) = -|ax|`.
//! - [`cli`]: the command-line front end.

// `!(x < y)` is used on purpose to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod minimizer;
pub mod model;
pub mod montecarlo;
pub mod stationary;

pub use action::{
    l1_cost, lemma_predicates, quad_cost, stationarity_residual, CostKind, LemmaFlags, Path,
    PathCost,
};
pub use error::{Error, Result};
pub use minimizer::{grid_dp, min_action, refine, ActionResult, GridSolution, MinimizerConfig};
pub use model::{eval_map, sample_noise, step, MapSpec, NoiseSpec, ProcessConfig, ScaledKind};
pub use montecarlo::{estimate, scaling_curve, simulate_exit, ExitSample, McConfig, McEstimate};
