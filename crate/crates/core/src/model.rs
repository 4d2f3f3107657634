//! Map families, innovation distributions and the one-step recursion
//! `X_{n+1} = f(X_n) + ε ξ_{n+1}`.

use rand::Rng;
use rand_distr::{Cauchy, Distribution, Exp1, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abscissae closer than this to a kink are treated as non-differentiable.
pub const KINK_TOL: f64 = 1e-12;

/// The autoregression function `f`.
///
/// Every family is defined on the whole real line by extending its branch
/// formulas; `Tabulated` clamps to the end knot values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    /// `f(x) = a x`
    Linear { a: f64 },
    /// Zero on `(-b, b)`, `a (x ∓ b)` outside.
    DeadZone { a: f64, b: f64 },
    /// `a x` on `[-c, c]`, `±a c` outside.
    Saturated { a: f64, c: f64 },
    /// Zero for `x < 0`, `-a x` for `x >= 0`.
    HalfLine { a: f64 },
    /// `-b x` for `x < 0`, `-a x` for `x >= 0`.
    TwoSlope { a: f64, b: f64 },
    /// `f(x) = a |x|`
    AbsValue { a: f64 },
    /// `f(x) = a x²`
    Quadratic { a: f64 },
    /// Ricker map with its positive fixed point moved to the origin:
    /// `f(x) = (x + r) e^{-x} - r`.
    Ricker { r: f64 },
    /// Piecewise-linear interpolation through `(x, y)` knots.
    Tabulated { knots: Vec<[f64; 2]> },
}

/// Symmetry a family has by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Odd,
    Even,
    None,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "parameter {name} must be finite, got {v}"
        )))
    }
}

impl MapSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            MapSpec::Linear { .. } => "linear",
            MapSpec::DeadZone { .. } => "dead_zone",
            MapSpec::Saturated { .. } => "saturated",
            MapSpec::HalfLine { .. } => "half_line",
            MapSpec::TwoSlope { .. } => "two_slope",
            MapSpec::AbsValue { .. } => "abs_value",
            MapSpec::Quadratic { .. } => "quadratic",
            MapSpec::Ricker { .. } => "ricker",
            MapSpec::Tabulated { .. } => "tabulated",
        }
    }

    /// Checks the parameter domain of the family.
    pub fn validate(&self) -> Result<()> {
        match *self {
            MapSpec::Linear { a } | MapSpec::AbsValue { a } => {
                finite("a", a)?;
                if a.abs() >= 1.0 {
                    return Err(Error::domain(format!(
                        "{} requires |a| < 1, got a = {a}",
                        self.family_name()
                    )));
                }
            }
            MapSpec::DeadZone { a, b } => {
                finite("a", a)?;
                finite("b", b)?;
                if a.abs() > 1.0 || !(0.0..1.0).contains(&b) {
                    return Err(Error::domain(format!(
                        "dead_zone requires |a| <= 1 and 0 <= b < 1, got a = {a}, b = {b}"
                    )));
                }
                if a.abs() == 1.0 && b == 0.0 {
                    return Err(Error::domain("dead_zone with |a| = 1 requires b > 0"));
                }
            }
            MapSpec::Saturated { a, c } => {
                finite("a", a)?;
                finite("c", c)?;
                if !(a > 0.0 && a < 1.0) || !(c > 0.0 && c <= 1.0) {
                    return Err(Error::domain(format!(
                        "saturated requires 0 < a < 1 and 0 < c <= 1, got a = {a}, c = {c}"
                    )));
                }
            }
            MapSpec::HalfLine { a } => {
                finite("a", a)?;
                if !(a > 0.0 && a < 1.0) {
                    return Err(Error::domain(format!(
                        "half_line requires 0 < a < 1, got a = {a}"
                    )));
                }
            }
            MapSpec::TwoSlope { a, b } => {
                finite("a", a)?;
                finite("b", b)?;
                if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
                    return Err(Error::domain(format!(
                        "two_slope requires 0 < a, b < 1, got a = {a}, b = {b}"
                    )));
                }
            }
            MapSpec::Quadratic { a } => {
                finite("a", a)?;
                if a < 0.0 {
                    return Err(Error::domain(format!(
                        "quadratic requires a >= 0, got a = {a}"
                    )));
                }
            }
            MapSpec::Ricker { r } => {
                finite("r", r)?;
                if r <= 0.0 {
                    return Err(Error::domain(format!("ricker requires r > 0, got r = {r}")));
                }
            }
            MapSpec::Tabulated { ref knots } => {
                if knots.len() < 2 {
                    return Err(Error::domain("tabulated map needs at least two knots"));
                }
                for (i, k) in knots.iter().enumerate() {
                    if !k[0].is_finite() || !k[1].is_finite() {
                        return Err(Error::domain(format!("knot {i} is not finite")));
                    }
                }
                if knots.windows(2).any(|w| w[1][0] <= w[0][0]) {
                    return Err(Error::domain(
                        "tabulated knots must be strictly increasing in x",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Evaluates `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            MapSpec::Linear { a } => a * x,
            MapSpec::DeadZone { a, b } => {
                if x <= -b {
                    a * (x + b)
                } else if x >= b {
                    a * (x - b)
                } else {
                    0.0
                }
            }
            MapSpec::Saturated { a, c } => a * x.clamp(-c, c),
            MapSpec::HalfLine { a } => {
                if x < 0.0 {
                    0.0
                } else {
                    -a * x
                }
            }
            MapSpec::TwoSlope { a, b } => {
                if x < 0.0 {
                    -b * x
                } else {
                    -a * x
                }
            }
            MapSpec::AbsValue { a } => a * x.abs(),
            MapSpec::Quadratic { a } => a * x * x,
            MapSpec::Ricker { r } => (x + r) * (-x).exp() - r,
            MapSpec::Tabulated { ref knots } => interpolate(knots, x),
        }
    }

    /// Abscissae where `f` is not differentiable.
    pub fn kinks(&self) -> Vec<f64> {
        match *self {
            MapSpec::DeadZone { a, b } if b > 0.0 && a != 0.0 => vec![-b, b],
            MapSpec::Saturated { c, .. } => vec![-c, c],
            MapSpec::HalfLine { .. } => vec![0.0],
            MapSpec::TwoSlope { a, b } if a != b => vec![0.0],
            MapSpec::AbsValue { a } if a != 0.0 => vec![0.0],
            MapSpec::Tabulated { ref knots } => {
                let mut out = Vec::new();
                for (i, k) in knots.iter().enumerate() {
                    let left = if i == 0 { 0.0 } else { slope(knots[i - 1], *k) };
                    let right = if i + 1 == knots.len() {
                        0.0
                    } else {
                        slope(*k, knots[i + 1])
                    };
                    if left != right {
                        out.push(k[0]);
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// `f'(x)`, or `None` within [`KINK_TOL`] of a kink.
    pub fn derivative(&self, x: f64) -> Option<f64> {
        if self.kinks().iter().any(|k| (x - k).abs() <= KINK_TOL) {
            return None;
        }
        let d = match *self {
            MapSpec::Linear { a } => a,
            MapSpec::DeadZone { a, b } => {
                if x.abs() > b {
                    a
                } else {
                    0.0
                }
            }
            MapSpec::Saturated { a, c } => {
                if x.abs() < c {
                    a
                } else {
                    0.0
                }
            }
            MapSpec::HalfLine { a } => {
                if x < 0.0 {
                    0.0
                } else {
                    -a
                }
            }
            MapSpec::TwoSlope { a, b } => {
                if x < 0.0 {
                    -b
                } else {
                    -a
                }
            }
            MapSpec::AbsValue { a } => a * x.signum(),
            MapSpec::Quadratic { a } => 2.0 * a * x,
            MapSpec::Ricker { r } => (1.0 - x - r) * (-x).exp(),
            MapSpec::Tabulated { ref knots } => {
                let first = knots[0][0];
                let last = knots[knots.len() - 1][0];
                if x < first || x > last {
                    0.0
                } else {
                    let i = knots
                        .partition_point(|k| k[0] <= x)
                        .clamp(1, knots.len() - 1);
                    slope(knots[i - 1], knots[i])
                }
            }
        };
        Some(d)
    }

    /// Whether the origin is a fixed point (`|f(0)| <= 1e-12`).
    pub fn fixed_point_at_origin(&self) -> bool {
        self.eval(0.0).abs() <= 1e-12
    }

    /// Families that are contractive on `[-1, 1]` by construction.
    pub fn is_declared_contractive(&self) -> bool {
        match *self {
            MapSpec::Linear { .. }
            | MapSpec::Saturated { .. }
            | MapSpec::HalfLine { .. }
            | MapSpec::TwoSlope { .. }
            | MapSpec::AbsValue { .. } => true,
            MapSpec::DeadZone { a, .. } => a.abs() < 1.0,
            _ => false,
        }
    }

    pub fn declared_symmetry(&self) -> Symmetry {
        match *self {
            MapSpec::Linear { .. } | MapSpec::DeadZone { .. } | MapSpec::Saturated { .. } => {
                Symmetry::Odd
            }
            MapSpec::TwoSlope { a, b } if a == b => Symmetry::Odd,
            MapSpec::AbsValue { .. } | MapSpec::Quadratic { .. } => Symmetry::Even,
            _ => Symmetry::None,
        }
    }

    /// Families for which `x -> h x` maps the problem on `[-h, h]` onto the
    /// same family on `[-1, 1]` with unchanged parameters.
    pub fn closed_under_rescaling(&self) -> bool {
        matches!(self, MapSpec::Linear { .. } | MapSpec::AbsValue { .. })
    }
}

fn slope(p: [f64; 2], q: [f64; 2]) -> f64 {
    (q[1] - p[1]) / (q[0] - p[0])
}

fn interpolate(knots: &[[f64; 2]], x: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if x <= first[0] {
        return first[1];
    }
    if x >= last[0] {
        return last[1];
    }
    let i = knots.partition_point(|k| k[0] <= x);
    let (p, q) = (knots[i - 1], knots[i]);
    let t = (x - p[0]) / (q[0] - p[0]);
    p[1] + t * (q[1] - p[1])
}

/// Evaluates `f(x)` for the given map.
pub fn eval_map(map: &MapSpec, x: f64) -> f64 {
    map.eval(x)
}

/// How a Monte Carlo mean exit time is normalised for comparison with a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaledKind {
    /// `q(ε) log E τ`
    LogScaled,
    /// `ε E τ`
    LinearScaled,
}

/// Innovation distribution of `ξ`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    #[default]
    Gaussian,
    /// Density `(1/(2b)) e^{-|x|/b}`.
    Laplace { b: f64 },
    /// Standard Cauchy(0, 1).
    Cauchy,
    /// Difference of two independent Poisson(λ) variables.
    PoissonDiff { lambda: f64 },
}

impl NoiseSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            NoiseSpec::Gaussian => "gaussian",
            NoiseSpec::Laplace { .. } => "laplace",
            NoiseSpec::Cauchy => "cauchy",
            NoiseSpec::PoissonDiff { .. } => "poisson_diff",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseSpec::Laplace { b } if !(b > 0.0 && b.is_finite()) => {
                Err(Error::domain(format!("laplace requires b > 0, got {b}")))
            }
            NoiseSpec::PoissonDiff { lambda } if !(lambda > 0.0 && lambda.is_finite()) => Err(
                Error::domain(format!("poisson_diff requires lambda > 0, got {lambda}")),
            ),
            _ => Ok(()),
        }
    }

    /// Rate function of `εξ` at speed [`NoiseSpec::speed`]. Cauchy noise has
    /// no large deviation principle and returns `None`.
    pub fn rate(&self, z: f64) -> Option<f64> {
        match *self {
            NoiseSpec::Gaussian => Some(0.5 * z * z),
            NoiseSpec::Laplace { b } => Some(z.abs() / b),
            NoiseSpec::Cauchy => None,
            NoiseSpec::PoissonDiff { .. } => Some(z.abs()),
        }
    }

    /// Speed `q(ε)`. For Cauchy noise this is the linear normalisation `ε`
    /// applied to `E τ` itself.
    pub fn speed(&self, epsilon: f64) -> f64 {
        match self {
            NoiseSpec::Gaussian => epsilon * epsilon,
            NoiseSpec::Laplace { .. } | NoiseSpec::Cauchy => epsilon,
            NoiseSpec::PoissonDiff { .. } => epsilon / epsilon.ln().abs(),
        }
    }

    pub fn scaled_kind(&self) -> ScaledKind {
        match self {
            NoiseSpec::Cauchy => ScaledKind::LinearScaled,
            _ => ScaledKind::LogScaled,
        }
    }

    /// `q(ε) log(mean_tau)`, or `ε mean_tau` for Cauchy noise.
    pub fn scaled_statistic(&self, epsilon: f64, mean_tau: f64) -> f64 {
        match self.scaled_kind() {
            ScaledKind::LogScaled => self.speed(epsilon) * mean_tau.ln(),
            ScaledKind::LinearScaled => epsilon * mean_tau,
        }
    }

    /// One i.i.d. draw of `ξ`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseSpec::Gaussian => StandardNormal.sample(rng),
            NoiseSpec::Laplace { b } => {
                let e: f64 = Exp1.sample(rng);
                if rng.random::<bool>() {
                    b * e
                } else {
                    -b * e
                }
            }
            NoiseSpec::Cauchy => Cauchy::new(0.0, 1.0).expect("unit scale").sample(rng),
            NoiseSpec::PoissonDiff { lambda } => {
                let p = Poisson::new(lambda).expect("validated lambda");
                let x: f64 = p.sample(rng);
                let y: f64 = p.sample(rng);
                x - y
            }
        }
    }
}

/// Draws one innovation.
pub fn sample_noise<R: Rng + ?Sized>(noise: &NoiseSpec, rng: &mut R) -> f64 {
    noise.sample(rng)
}

/// Map, noise, noise level and the exit interval `(-h, h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessConfig {
    pub map: MapSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
    pub epsilon: f64,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[serde(default)]
    pub start: f64,
}

fn default_half_width() -> f64 {
    1.0
}

impl ProcessConfig {
    pub fn new(
        map: MapSpec,
        noise: NoiseSpec,
        epsilon: f64,
        half_width: f64,
        start: f64,
    ) -> Result<Self> {
        let cfg = ProcessConfig {
            map,
            noise,
            epsilon,
            half_width,
            start,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.map.validate()?;
        self.noise.validate()?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::config(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::config(format!(
                "half_width must be > 0, got {}",
                self.half_width
            )));
        }
        if !(self.start.abs() < self.half_width) {
            return Err(Error::config(format!(
                "start must satisfy |start| < half_width, got {}",
                self.start
            )));
        }
        Ok(())
    }

    /// `f(x) + ε ξ`.
    pub fn step(&self, x: f64, xi: f64) -> f64 {
        self.map.eval(x) + self.epsilon * xi
    }
}

/// One step of the recursion.
pub fn step(cfg: &ProcessConfig, x: f64, xi: f64) -> f64 {
    cfg.step(x, xi)
}
