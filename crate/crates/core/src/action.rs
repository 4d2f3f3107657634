//! Path-cost functionals, stationarity residuals and the structural
//! predicates (sign-constancy, symmetry, contraction) that justify
//! restricting the exit-path search space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MapSpec;

/// A finite exit path `y_0, ..., y_N` for the interval `(-h, h)`.
///
/// `|y_n| < h` for `n < N` and `|y_N| >= h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    points: Vec<f64>,
    half_width: f64,
}

impl Path {
    pub fn new(points: Vec<f64>, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::config(format!(
                "half_width must be > 0, got {half_width}"
            )));
        }
        if points.len() < 2 {
            return Err(Error::config("a path needs at least one step (N >= 1)"));
        }
        let last = points.len() - 1;
        for (index, &value) in points.iter().enumerate() {
            let ok = if index == last {
                value.is_finite() && value.abs() >= half_width
            } else {
                value.abs() < half_width
            };
            if !ok {
                return Err(Error::ConstraintViolation {
                    index,
                    value,
                    half_width,
                });
            }
        }
        Ok(Path { points, half_width })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn exit_point(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// The path reflected through the origin, keeping `y_0`.
    pub fn mirrored(&self) -> Path {
        let mut points: Vec<f64> = self.points.iter().map(|y| -y).collect();
        points[0] = self.points[0];
        Path {
            points,
            half_width: self.half_width,
        }
    }

    /// Drops leading steps that sit still at a fixed point `y_0 = f(y_0)`.
    /// Those steps cost nothing under either functional.
    pub fn trim_idle_prefix(&self, map: &MapSpec) -> Path {
        let y0 = self.points[0];
        if map.eval(y0) != y0 {
            return self.clone();
        }
        let idle = self.points[1..self.points.len() - 1]
            .iter()
            .take_while(|&&y| y == y0)
            .count();
        let mut points = vec![y0];
        points.extend_from_slice(&self.points[1 + idle..]);
        Path {
            points,
            half_width: self.half_width,
        }
    }

    pub(crate) fn points_mut(&mut self) -> &mut [f64] {
        &mut self.points
    }
}

/// Value of a path functional together with the increments
/// `s_n = y_n - f(y_{n-1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathCost {
    pub value: f64,
    pub increments: Vec<f64>,
}

/// Which functional to charge a path with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostKind {
    /// `½ Σ s_n²` (Gaussian innovations).
    Quadratic,
    /// `λ Σ |s_n|` (Poisson-difference innovations).
    L1 { lambda: f64 },
}

impl CostKind {
    /// Cost of a single increment.
    #[inline]
    pub fn step_cost(self, s: f64) -> f64 {
        match self {
            CostKind::Quadratic => 0.5 * s * s,
            CostKind::L1 { lambda } => lambda * s.abs(),
        }
    }

    pub fn path_cost(self, path: &Path, map: &MapSpec) -> PathCost {
        match self {
            CostKind::Quadratic => quad_cost(path, map),
            CostKind::L1 { lambda } => l1_cost(path, map, lambda),
        }
    }
}

fn increments(path: &Path, map: &MapSpec) -> Vec<f64> {
    path.points
        .windows(2)
        .map(|w| w[1] - map.eval(w[0]))
        .collect()
}

/// `½ Σ_{n=1}^{N} (y_n - f(y_{n-1}))²`
pub fn quad_cost(path: &Path, map: &MapSpec) -> PathCost {
    let increments = increments(path, map);
    let value = 0.5 * increments.iter().map(|s| s * s).sum::<f64>();
    PathCost { value, increments }
}

/// `λ Σ_{n=1}^{N} |y_n - f(y_{n-1})|`
pub fn l1_cost(path: &Path, map: &MapSpec, lambda: f64) -> PathCost {
    let increments = increments(path, map);
    let value = lambda * increments.iter().map(|s| s.abs()).sum::<f64>();
    PathCost { value, increments }
}

/// First-order optimality residuals of the quadratic functional,
/// `r_n = s_n - f'(y_n) s_{n+1}` for `n = 1..N-1`.
///
/// Entries are `None` where `y_n` sits on a kink of `f`.
pub fn stationarity_residual(path: &Path, map: &MapSpec) -> Vec<Option<f64>> {
    let s = increments(path, map);
    let y = path.points();
    (1..path.steps())
        .map(|n| map.derivative(y[n]).map(|d| s[n - 1] - d * s[n]))
        .collect()
}

/// Largest `|r_n|` over the differentiable interior points (0 if none).
pub fn max_stationarity_residual(path: &Path, map: &MapSpec) -> f64 {
    stationarity_residual(path, map)
        .into_iter()
        .flatten()
        .fold(0.0, |m, r| m.max(r.abs()))
}

/// Structural properties of `f` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaFlags {
    /// Nondecreasing with `f(0) = 0`: optimal paths keep one sign.
    pub increasing_fixed0: bool,
    /// `f(-x) = -f(x)`: both exit sides cost the same.
    pub odd: bool,
    /// `|f(x)| < |x|` off the origin.
    pub strictly_contractive: bool,
}

impl LemmaFlags {
    /// Hypotheses under which optimal paths are monotone.
    pub fn monotone_paths(&self) -> bool {
        self.increasing_fixed0 && self.strictly_contractive
    }
}

pub const PREDICATE_GRID: usize = 2001;
const PREDICATE_TOL: f64 = 1e-12;

/// Decides the flags by evaluating `f` on a uniform 2001-point grid over `[-1, 1]`.
pub fn lemma_predicates(map: &MapSpec) -> LemmaFlags {
    let m = (PREDICATE_GRID - 1) as f64;
    let half = (PREDICATE_GRID - 1) / 2;
    // symmetric by construction: x[PREDICATE_GRID - 1 - i] == -x[i]
    let xs: Vec<f64> = (0..PREDICATE_GRID)
        .map(|i| (2.0 * i as f64 - m) / m)
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| map.eval(x)).collect();

    let increasing = fs.windows(2).all(|w| w[1] >= w[0] - PREDICATE_TOL);
    let fixed0 = fs[half].abs() <= PREDICATE_TOL;
    let odd =
        (0..PREDICATE_GRID).all(|i| (fs[i] + fs[PREDICATE_GRID - 1 - i]).abs() <= PREDICATE_TOL);
    let strictly_contractive = xs
        .iter()
        .zip(&fs)
        .filter(|(x, _)| **x != 0.0)
        .all(|(x, f)| f.abs() < x.abs());

    LemmaFlags {
        increasing_fixed0: increasing && fixed0,
        odd,
        strictly_contractive,
    }
}

/// Flags read off the family formulas, where that is possible.
pub fn analytic_lemma_flags(map: &MapSpec) -> Option<LemmaFlags> {
    let flags = match *map {
        MapSpec::Linear { a } => LemmaFlags {
            increasing_fixed0: a >= 0.0,
            odd: true,
            strictly_contractive: a.abs() < 1.0,
        },
        MapSpec::DeadZone { a, b } => LemmaFlags {
            increasing_fixed0: a >= 0.0,
            odd: true,
            strictly_contractive: a.abs() < 1.0 || b > 0.0,
        },
        MapSpec::Saturated { .. } => LemmaFlags {
            increasing_fixed0: true,
            odd: true,
            strictly_contractive: true,
        },
        MapSpec::HalfLine { .. } => LemmaFlags {
            increasing_fixed0: false,
            odd: false,
            strictly_contractive: true,
        },
        MapSpec::TwoSlope { a, b } => LemmaFlags {
            increasing_fixed0: false,
            odd: a == b,
            strictly_contractive: true,
        },
        MapSpec::AbsValue { a } => LemmaFlags {
            increasing_fixed0: a == 0.0,
            odd: a == 0.0,
            strictly_contractive: true,
        },
        MapSpec::Quadratic { a } => LemmaFlags {
            increasing_fixed0: a == 0.0,
            odd: a == 0.0,
            strictly_contractive: a < 1.0,
        },
        MapSpec::Ricker { .. } | MapSpec::Tabulated { .. } => return None,
    };
    Some(flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(points: &[f64]) -> Path {
        Path::new(points.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn quad_cost_examples() {
        let c = quad_cost(&path(&[0.0, 1.0]), &MapSpec::Linear { a: 0.0 });
        assert_eq!(c.value, 0.5);

        let a: f64 = 0.6;
        let p = path(&[0.0, a / (1.0 + a * a), -1.0]);
        let c = quad_cost(&p, &MapSpec::HalfLine { a });
        assert!((c.value - 1.0 / (2.0 * (1.0 + a * a))).abs() < 1e-12);

        // Cauchy-Schwarz extremal: s proportional to (a, 1), scale (1+ab)/(1+a²).
        let (a, b) = (0.5, 0.2);
        let k = (1.0 + a * b) / (1.0 + a * a);
        let p = path(&[0.0, a * k, 1.0]);
        let c = quad_cost(&p, &MapSpec::DeadZone { a, b });
        assert!((c.value - 0.484).abs() < 1e-12, "{}", c.value);
        assert_eq!(c.increments.len(), 2);
    }

    #[test]
    fn l1_cost_examples() {
        let p = path(&[0.0, 1.0]);
        let lin = MapSpec::Linear { a: 0.5 };
        assert_eq!(l1_cost(&p, &lin, 1.0).value, 1.0);
        assert_eq!(l1_cost(&p, &lin, 2.0).value, 2.0);
        let p = path(&[0.0, 0.5, 1.0]);
        assert!((l1_cost(&p, &lin, 1.0).value - 1.25).abs() < 1e-15);
    }

    #[test]
    fn path_constraints() {
        assert!(matches!(
            Path::new(vec![0.0, 1.2, 1.0], 1.0),
            Err(Error::ConstraintViolation { index: 1, .. })
        ));
        assert!(matches!(
            Path::new(vec![0.0, 0.5], 1.0),
            Err(Error::ConstraintViolation { index: 1, .. })
        ));
        assert!(Path::new(vec![0.0], 1.0).is_err());
        assert!(Path::new(vec![0.0, -1.0], 1.0).is_ok());
    }

    #[test]
    fn residual_examples() {
        let a: f64 = 0.9;
        let map = MapSpec::HalfLine { a };
        let r = stationarity_residual(&path(&[0.0, a / (1.0 + a * a), -1.0]), &map);
        assert_eq!(r.len(), 1);
        assert!(r[0].unwrap().abs() < 1e-12);

        let r = stationarity_residual(&path(&[0.0, 0.0, -1.0]), &map);
        assert_eq!(r, vec![None]);

        let dz = MapSpec::DeadZone { a: 0.5, b: 0.2 };
        let r = stationarity_residual(&path(&[0.0, 0.2, 1.0]), &dz);
        assert_eq!(r, vec![None]);
    }

    #[test]
    fn geometric_path_is_stationary_for_linear() {
        // Optimal AR path to +1 in N steps: y_n ∝ a^{N-n} - a^{N+n}.
        let a: f64 = 0.6;
        let n = 6;
        let denom = 1.0 - a.powi(2 * n);
        let pts: Vec<f64> = (0..=n)
            .map(|k| (a.powi(n - k) - a.powi(n + k)) / denom)
            .collect();
        let p = path(&pts);
        let res = stationarity_residual(&p, &MapSpec::Linear { a });
        assert!(res.iter().all(|r| r.unwrap().abs() < 1e-12), "{res:?}");
        let cost = quad_cost(&p, &MapSpec::Linear { a }).value;
        assert!((cost - 0.5 * (1.0 - a * a) / denom).abs() < 1e-12);
    }

    #[test]
    fn predicate_examples() {
        let t = |i, o, c| LemmaFlags {
            increasing_fixed0: i,
            odd: o,
            strictly_contractive: c,
        };
        assert_eq!(
            lemma_predicates(&MapSpec::DeadZone { a: 0.5, b: 0.2 }),
            t(true, true, true)
        );
        assert_eq!(
            lemma_predicates(&MapSpec::AbsValue { a: 0.9 }),
            t(false, false, true)
        );
        assert_eq!(
            lemma_predicates(&MapSpec::HalfLine { a: 0.5 }),
            t(false, false, true)
        );
    }

    #[test]
    fn analytic_flags_agree_with_grid() {
        let maps = [
            MapSpec::Linear { a: 0.5 },
            MapSpec::Linear { a: -0.5 },
            MapSpec::DeadZone { a: 0.8, b: 0.2 },
            MapSpec::DeadZone { a: 1.0, b: 0.3 },
            MapSpec::DeadZone { a: -0.4, b: 0.1 },
            MapSpec::Saturated { a: 0.7, c: 0.3 },
            MapSpec::HalfLine { a: 0.3 },
            MapSpec::TwoSlope { a: 0.7, b: 0.3 },
            MapSpec::TwoSlope { a: 0.5, b: 0.5 },
            MapSpec::AbsValue { a: 0.0 },
            MapSpec::AbsValue { a: -0.9 },
            MapSpec::Quadratic { a: 0.5 },
            MapSpec::Quadratic { a: 1.5 },
        ];
        for m in maps {
            assert_eq!(
                analytic_lemma_flags(&m),
                Some(lemma_predicates(&m)),
                "{m:?}"
            );
        }
        assert_eq!(analytic_lemma_flags(&MapSpec::Ricker { r: 1.5 }), None);
    }

    #[test]
    fn mirror_and_trim() {
        let p = path(&[0.0, 0.0, 0.0, 0.3, 1.0]);
        let t = p.trim_idle_prefix(&MapSpec::Linear { a: 0.5 });
        assert_eq!(t.points(), &[0.0, 0.3, 1.0]);
        assert_eq!(p.mirrored().points(), &[0.0, 0.0, 0.0, -0.3, -1.0]);
        // no trimming when the start is not a fixed point
        let tab = MapSpec::Tabulated {
            knots: vec![[-1.0, 0.1], [1.0, 0.1]],
        };
        assert_eq!(p.trim_idle_prefix(&tab).steps(), 4);
    }
}
