//! Stationary density of `X_{n+1} = -|a X_n| + ε ξ_{n+1}` with Gaussian `ξ`
//! (a skew-normal law) and its `-ε² log` limit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Beyond this `|z|` the normal CDF tail is summed asymptotically.
const ASYMPTOTIC_CUTOFF: f64 = 8.0;

/// `log Φ(z)` for the standard normal CDF, finite for every finite `z`.
pub fn ln_normal_cdf(z: f64) -> f64 {
    if z < -ASYMPTOTIC_CUTOFF {
        // Φ(z) = φ(z)/|z| Σ_k (-1)^k (2k-1)!! / z^{2k}, truncated before the
        // terms start growing
        let z2 = z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=30 {
            let next = -term * (2 * k - 1) as f64 / z2;
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum += term;
        }
        -0.5 * z2 - LN_SQRT_2PI - (-z).ln() + sum.ln()
    } else if z > 0.0 {
        (-0.5 * libm::erfc(z * FRAC_1_SQRT_2)).ln_1p()
    } else {
        (0.5 * libm::erfc(-z * FRAC_1_SQRT_2)).ln()
    }
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// `(1/ε) √(2(1-a²)/π) exp(-½(1-a²)x²/ε²) Φ(-ax/ε)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndelDensity {
    a: f64,
    epsilon: f64,
}

impl AndelDensity {
    pub fn new(a: f64, epsilon: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!(
                "stationary density requires 0 < a < 1, got {a}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain(format!("epsilon must be > 0, got {epsilon}")));
        }
        Ok(AndelDensity { a, epsilon })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Standard deviation of the Gaussian factor, `ε / √(1 - a²)`.
    pub fn scale(&self) -> f64 {
        self.epsilon / (1.0 - self.a * self.a).sqrt()
    }

    /// Log-density as the sum of the logs of its three factors.
    pub fn ln_density(&self, x: f64) -> f64 {
        let (a, eps) = (self.a, self.epsilon);
        let k = 1.0 - a * a;
        -eps.ln() + 0.5 * (2.0 * k / PI).ln() - 0.5 * k * x * x / (eps * eps)
            + ln_normal_cdf(-a * x / eps)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.ln_density(x).exp()
    }
}

pub fn density(d: &AndelDensity, x: f64) -> f64 {
    d.density(x)
}

/// `-ε² log density(x)` for each `ε`; tends to `(1 - a²)/2` at `x = -1`.
pub fn log_limit(a: f64, x: f64, epsilons: &[f64]) -> Result<Vec<f64>> {
    epsilons
        .iter()
        .map(|&eps| {
            let d = AndelDensity::new(a, eps)?;
            Ok(-eps * eps * d.ln_density(x))
        })
        .collect()
}
