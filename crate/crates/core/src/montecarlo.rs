//! Monte Carlo exit times.
//!
//! Trial `i` draws its innovations from a ChaCha8 stream selected by `i`
//! under the run seed, so results do not depend on how trials are split
//! across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ProcessConfig, ScaledKind};

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McConfig {
    pub trials: u64,
    /// Per-trial step cap.
    pub max_steps: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            trials: 10_000,
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
            workers: 1,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::config("trials must be >= 1"));
        }
        if self.max_steps < 1 {
            return Err(Error::config("max_steps must be >= 1"));
        }
        if self.workers < 1 {
            return Err(Error::config("workers must be >= 1"));
        }
        Ok(())
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExitSample {
    pub steps: u64,
    /// The trial hit `max_steps` without exiting.
    pub censored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub epsilon: f64,
    pub trials: u64,
    pub censored: u64,
    pub mean_tau: f64,
    /// Standard error of `mean_tau`.
    pub stderr: f64,
    pub scaled_kind: ScaledKind,
    /// `q(ε) log(mean_tau)`, or `ε mean_tau` for Cauchy noise.
    pub scaled: f64,
    /// Delta-method standard error of `scaled`.
    pub scaled_stderr: f64,
    /// Set when censored trials make `mean_tau` a lower bound.
    pub lower_bound: bool,
}

fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// Runs one trial until `|X_n| >= h` or `n = max_steps`.
pub fn simulate_exit(cfg: &ProcessConfig, mc: &McConfig, trial_index: u64) -> ExitSample {
    let mut rng = trial_rng(mc.seed, trial_index);
    let h = cfg.half_width;
    let mut x = cfg.start;
    for n in 1..=mc.max_steps {
        x = cfg.step(x, cfg.noise.sample(&mut rng));
        if x.abs() >= h {
            return ExitSample {
                steps: n,
                censored: false,
            };
        }
    }
    ExitSample {
        steps: mc.max_steps,
        censored: true,
    }
}

/// Mean exit time over `mc.trials` trials and the scaled statistic.
pub fn estimate(cfg: &ProcessConfig, mc: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    mc.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(mc.workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start {} workers: {e}", mc.workers)))?;
    let samples: Vec<ExitSample> = pool.install(|| {
        (0..mc.trials)
            .into_par_iter()
            .map(|i| simulate_exit(cfg, mc, i))
            .collect()
    });

    // integer sums: exact, hence independent of reduction order
    let (sum, sum_sq, censored) = samples.iter().fold((0u128, 0u128, 0u64), |(s, q, c), t| {
        let n = t.steps as u128;
        (s + n, q + n * n, c + t.censored as u64)
    });
    if censored == mc.trials {
        return Err(Error::AllCensored {
            trials: mc.trials,
            max_steps: mc.max_steps,
        });
    }
    let n = mc.trials as f64;
    let mean = sum as f64 / n;
    let var = if mc.trials > 1 {
        ((sum_sq as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    let stderr = (var / n).sqrt();

    let eps = cfg.epsilon;
    let noise = &cfg.noise;
    let scaled = noise.scaled_statistic(eps, mean);
    let scaled_stderr = match noise.scaled_kind() {
        ScaledKind::LogScaled => noise.speed(eps) * stderr / mean,
        ScaledKind::LinearScaled => eps * stderr,
    };
    Ok(McEstimate {
        epsilon: eps,
        trials: mc.trials,
        censored,
        mean_tau: mean,
        stderr,
        scaled_kind: noise.scaled_kind(),
        scaled,
        scaled_stderr,
        lower_bound: censored > 0,
    })
}

/// One estimate per `ε`, all with the same seed. `epsilons` must be
/// positive and sorted descending.
pub fn scaling_curve(
    template: &ProcessConfig,
    epsilons: &[f64],
    mc: &McConfig,
) -> Result<Vec<McEstimate>> {
    if epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::config("epsilons must be positive"));
    }
    if epsilons.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::config("epsilons must be sorted in descending order"));
    }
    epsilons
        .iter()
        .map(|&eps| {
            let cfg = ProcessConfig {
                epsilon: eps,
                ..template.clone()
            };
            estimate(&cfg, mc)
        })
        .collect()
}
