//! Exact exit-action formulas for the map families that admit one.
//!
//! All values are already multiplied by the prefactor of the rate function,
//! i.e. they bound `limsup ε² log E τ` directly (or the noise-appropriate
//! scaling for [`noise_constants`]).

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::action::{analytic_lemma_flags, lemma_predicates};
use crate::error::{Error, Result};
use crate::model::{MapSpec, NoiseSpec, ScaledKind};

pub const QUADRATIC_CAVEAT: &str = "upper bound, N=2 only";

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

/// `h² (1 - a²) / 2`
pub fn linear_bound(a: f64, h: f64) -> Result<f64> {
    check(a.abs() < 1.0, || {
        format!("linear bound requires |a| < 1, got {a}")
    })?;
    check(h > 0.0 && h.is_finite(), || {
        format!("half-width must be > 0, got {h}")
    })?;
    Ok(h * h * (1.0 - a * a) / 2.0)
}

/// The N-step dead-zone quotient
/// `(1 + b (a - a^N)/(1 - a))² / ((1 - a^{2N}) / (1 - a²))`
/// (the exit action is half of it).
pub fn deadzone_quotient(a: f64, b: f64, n: usize) -> Result<f64> {
    check(a.abs() <= 1.0 && (0.0..1.0).contains(&b), || {
        format!("dead-zone quotient requires |a| <= 1, 0 <= b < 1, got a = {a}, b = {b}")
    })?;
    check(a.abs() != 1.0 || b > 0.0, || {
        "dead-zone quotient with |a| = 1 requires b > 0".into()
    })?;
    check(n >= 1, || "N must be >= 1".into())?;
    if a == 0.0 {
        return Ok(1.0);
    }
    if a == 1.0 {
        let nf = n as f64;
        return Ok((1.0 + (nf - 1.0) * b).powi(2) / nf);
    }
    let (drift, weight) = if (1.0 - a.abs()) < 1e-3 {
        // geometric sums directly; the ratio forms cancel badly near |a| = 1
        let drift: f64 = (1..n).map(|k| a.powi(k as i32)).sum();
        let weight: f64 = (0..n).map(|k| a.powi(2 * k as i32)).sum();
        (drift, weight)
    } else {
        let n = n as i32;
        (
            (a - a.powi(n)) / (1.0 - a),
            (1.0 - a.powi(2 * n)) / (1.0 - a * a),
        )
    };
    Ok((1.0 + drift * b).powi(2) / weight)
}

/// `½ min_{1<=N<=M} deadzone_quotient(a, b, N)` and the smallest minimising N.
pub fn deadzone_bound(a: f64, b: f64, max_len: usize) -> Result<(f64, usize)> {
    check(max_len >= 1, || "M must be >= 1".into())?;
    let mut best = (f64::INFINITY, 0);
    for n in 1..=max_len {
        let q = deadzone_quotient(a, b, n)?;
        if q < best.0 * (1.0 - 1e-12) {
            best = (q, n);
        }
    }
    Ok((0.5 * best.0, best.1))
}

/// Saturated map: `½((1 - ac)² + (1 - a²)c²)` for `c <= a`, else `½(1 - a²)`.
pub fn saturated_bound(a: f64, c: f64) -> Result<f64> {
    check(a > 0.0 && a < 1.0 && c > 0.0 && c <= 1.0, || {
        format!("saturated bound requires 0 < a < 1, 0 < c <= 1, got a = {a}, c = {c}")
    })?;
    Ok(saturated_unchecked(a, c))
}

fn saturated_unchecked(a: f64, c: f64) -> f64 {
    if c <= a {
        0.5 * ((1.0 - a * c).powi(2) + (1.0 - a * a) * c * c)
    } else {
        0.5 * (1.0 - a * a)
    }
}

/// Half-line map: `1 / (2 (1 + a²))`.
pub fn halfline_bound(a: f64) -> Result<f64> {
    check(a > 0.0 && a <= 1.0, || {
        format!("half-line bound requires 0 < a < 1, got {a}")
    })?;
    Ok(1.0 / (2.0 * (1.0 + a * a)))
}

/// Two-slope map: `½ min((1 - (ab)²)/(1 + a²), (1 - (ab)²)/(1 + b²))`.
pub fn twoslope_bound(a: f64, b: f64) -> Result<f64> {
    check(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0, || {
        format!("two-slope bound requires 0 < a, b < 1, got a = {a}, b = {b}")
    })?;
    let num = 1.0 - (a * b).powi(2);
    Ok(0.5 * (num / (1.0 + a * a)).min(num / (1.0 + b * b)))
}

/// `f(x) = a|x|`: `(1 - a²) / 2`.
pub fn absval_bound(a: f64) -> Result<f64> {
    check(a.abs() < 1.0, || {
        format!("abs-value bound requires |a| < 1, got {a}")
    })?;
    Ok((1.0 - a * a) / 2.0)
}

/// `f(x) = a x²`: `½` for `a <= 0.5`, `½(1/a - 1/(4a²))` above. The upper
/// branch is only the two-step infimum.
pub fn quadratic_bound(a: f64) -> Result<f64> {
    check(a >= 0.0 && a.is_finite(), || {
        format!("quadratic bound requires a >= 0, got {a}")
    })?;
    Ok(if a <= 0.5 {
        0.5
    } else {
        0.5 * (1.0 / a - 1.0 / (4.0 * a * a))
    })
}

pub fn quadratic_caveat(a: f64) -> Option<&'static str> {
    (a > 0.5).then_some(QUADRATIC_CAVEAT)
}

/// Whether a noise constant is an equality or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equality,
    UpperBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseConstant {
    pub kind: ScaledKind,
    pub value: f64,
    pub relation: Relation,
    /// The constant needs the map to be increasing, fixed at 0 and contractive.
    pub requires_monotone_map: bool,
}

/// Limits for non-Gaussian innovations on `[-1, 1]`.
pub fn noise_constants(noise: &NoiseSpec) -> Result<NoiseConstant> {
    noise.validate()?;
    match *noise {
        NoiseSpec::Gaussian => Err(Error::NotAConstant("gaussian")),
        NoiseSpec::Laplace { b } => Ok(NoiseConstant {
            kind: ScaledKind::LogScaled,
            value: 1.0 / b,
            relation: Relation::Equality,
            requires_monotone_map: false,
        }),
        NoiseSpec::Cauchy => Ok(NoiseConstant {
            kind: ScaledKind::LinearScaled,
            value: FRAC_PI_2,
            relation: Relation::UpperBound,
            requires_monotone_map: false,
        }),
        NoiseSpec::PoissonDiff { lambda } => Ok(NoiseConstant {
            kind: ScaledKind::LogScaled,
            value: lambda,
            relation: Relation::UpperBound,
            requires_monotone_map: true,
        }),
    }
}

/// A closed-form Gaussian exit bound for a map on `(-h, h)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForm {
    pub value: f64,
    pub n_star: Option<usize>,
    pub caveats: Vec<String>,
}

/// Dispatches to the family formula, rescaling `(-h, h)` to `(-1, 1)`.
///
/// Under `x = h u` every family with a formula maps to one with rescaled
/// parameters and the action picks up a factor `h²`.
pub fn gaussian_bound(map: &MapSpec, h: f64, max_len: usize) -> Result<ClosedForm> {
    map.validate()?;
    check(h > 0.0 && h.is_finite(), || {
        format!("half-width must be > 0, got {h}")
    })?;
    let h2 = h * h;
    let plain = |v: f64| ClosedForm {
        value: v,
        n_star: None,
        caveats: Vec::new(),
    };
    let cf = match *map {
        MapSpec::Linear { a } => plain(linear_bound(a, h)?),
        MapSpec::AbsValue { a } => plain(h2 * absval_bound(a)?),
        MapSpec::DeadZone { a, b } => {
            let b = b / h;
            check(b < 1.0, || {
                format!("dead zone half-width {} must be < h = {h}", b * h)
            })?;
            let (v, n) = deadzone_bound(a, b, max_len)?;
            ClosedForm {
                value: h2 * v,
                n_star: Some(n),
                caveats: Vec::new(),
            }
        }
        MapSpec::Saturated { a, c } => plain(h2 * saturated_unchecked(a, (c / h).min(1.0))),
        MapSpec::HalfLine { a } => plain(h2 * halfline_bound(a)?),
        MapSpec::TwoSlope { a, b } => plain(h2 * twoslope_bound(a, b)?),
        MapSpec::Quadratic { a } => {
            let a = a * h;
            ClosedForm {
                value: h2 * quadratic_bound(a)?,
                n_star: None,
                caveats: quadratic_caveat(a).into_iter().map(String::from).collect(),
            }
        }
        MapSpec::Ricker { .. } | MapSpec::Tabulated { .. } => {
            return Err(Error::NoClosedForm(map.family_name().to_string()))
        }
    };
    Ok(cf)
}

/// Poisson-difference single-jump bound `λ h`, valid for increasing,
/// contractive maps fixed at the origin on `[-1, 1]`.
pub fn poisson_bound(map: &MapSpec, lambda: f64, h: f64) -> Result<ClosedForm> {
    let c = noise_constants(&NoiseSpec::PoissonDiff { lambda })?;
    let flags = analytic_lemma_flags(map).unwrap_or_else(|| lemma_predicates(map));
    if !flags.monotone_paths() || (h != 1.0 && !map.closed_under_rescaling()) {
        return Err(Error::NoClosedForm(format!(
            "{} under poisson_diff noise",
            map.family_name()
        )));
    }
    Ok(ClosedForm {
        value: c.value * h,
        n_star: Some(1),
        caveats: Vec::new(),
    })
}
