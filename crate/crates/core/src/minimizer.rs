//! Numerical minimisation of the exit action
//! `inf_{1<=N<=M} inf { cost(y) : y_0 = x_0, |y_n| < h (n < N), |y_N| >= h }`.
//!
//! [`grid_dp`] solves the discretised problem exhaustively: interior points
//! live on a uniform grid over `(-h, h)` and the exit point is restricted to
//! `±h`. With `|f| < h` on the interval, the one-step cost of reaching
//! `|y| >= h` from `x` is minimised at the boundary, so this loses nothing.
//! [`refine`] polishes a grid path by coordinate descent and [`min_action`]
//! chains the two.

use serde::Serialize;

use crate::action::{analytic_lemma_flags, lemma_predicates, CostKind, LemmaFlags, Path};
use crate::error::{Error, Result};
use crate::model::MapSpec;

/// Relative tolerance for deciding that a horizon attains the infimum.
pub const N_STAR_REL_TOL: f64 = 1e-6;
pub const N_STAR_ABS_TOL: f64 = 1e-9;

/// Horizons whose grid value is within this relative distance of the best
/// are refined as candidates in [`min_action`].
const CANDIDATE_REL: f64 = 5e-3;
const MAX_CANDIDATES: usize = 3;

const NO_PARENT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizerConfig {
    /// Largest path length `M`.
    pub max_len: usize,
    /// Grid points over `[-h, h]`, endpoints included.
    pub grid: usize,
    pub refine_tol: f64,
    pub max_sweeps: usize,
    pub cost: CostKind,
    /// `y_0`.
    pub start: f64,
    /// Restrict the search to sign-constant (and, for contractive maps,
    /// monotone) paths when the map qualifies.
    pub reduce: bool,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        MinimizerConfig {
            max_len: 50,
            grid: 401,
            refine_tol: 1e-10,
            max_sweeps: 500,
            cost: CostKind::Quadratic,
            start: 0.0,
            reduce: false,
        }
    }
}

impl MinimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_len < 1 {
            return Err(Error::config("M must be >= 1"));
        }
        if self.grid < 11 {
            return Err(Error::config(format!(
                "grid must be >= 11, got {}",
                self.grid
            )));
        }
        if self.grid > u32::MAX as usize {
            return Err(Error::config("grid is too large"));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::config("refine_tol must be > 0"));
        }
        if self.max_sweeps < 1 {
            return Err(Error::config("max_sweeps must be >= 1"));
        }
        if let CostKind::L1 { lambda } = self.cost {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::domain(format!("lambda must be > 0, got {lambda}")));
            }
        }
        if !self.start.is_finite() {
            return Err(Error::config("start must be finite"));
        }
        Ok(())
    }
}

/// Minimal action, its argmin path and the resulting exit-time bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionResult {
    /// Infimum of the cost functional, prefactor included.
    pub value: f64,
    /// Smallest path length attaining `value` within tolerance.
    pub n_star: usize,
    pub path: Path,
    /// Upper bound on `limsup q(ε) log E τ`.
    pub bound: f64,
    /// False when refinement stopped at `max_sweeps`.
    pub converged: bool,
}

impl ActionResult {
    fn new(value: f64, n_star: usize, path: Path, converged: bool) -> Self {
        ActionResult {
            value,
            n_star,
            path,
            bound: value,
            converged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitSide {
    Plus,
    Minus,
}

impl ExitSide {
    fn index(self) -> usize {
        match self {
            ExitSide::Plus => 0,
            ExitSide::Minus => 1,
        }
    }

    fn sign(self) -> f64 {
        match self {
            ExitSide::Plus => 1.0,
            ExitSide::Minus => -1.0,
        }
    }
}

/// Constraints on the DP state space.
#[derive(Debug, Clone, Copy)]
struct Restriction {
    /// Only states with `sign * x >= 0`.
    sign: Option<f64>,
    /// Only transitions with `sign * x_next >= sign * x`.
    monotone: bool,
    sides: [bool; 2],
}

impl Restriction {
    const NONE: Restriction = Restriction {
        sign: None,
        monotone: false,
        sides: [true, true],
    };
}

#[derive(Debug, Clone)]
struct DpRun {
    /// `parents[(n - 2) * K + j]`: predecessor of state `j` at step `n`.
    parents: Vec<u32>,
    /// Per horizon `N = 1..=M` and side: best value and predecessor.
    exits: Vec<[(f64, u32); 2]>,
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Run(usize),
    /// Mirror of the plus side of a run (odd maps under reduction).
    MirrorOf(usize),
}

/// Output of [`grid_dp`]: the grid optimum plus per-horizon diagnostics.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub result: ActionResult,
    /// Grid infimum `C_N` for each horizon `N = 1..=M`.
    pub horizon_values: Vec<f64>,
    /// Grid infimum over paths exiting at `+h`.
    pub exit_plus: f64,
    /// Grid infimum over paths exiting at `-h`.
    pub exit_minus: f64,
    pub grid_step: f64,
    /// Whether a reduced search space was used.
    pub reduced: bool,
    xs: Vec<f64>,
    start: f64,
    half_width: f64,
    runs: Vec<DpRun>,
    /// `[horizon][side]` -> (value, source)
    table: Vec<[(f64, Source); 2]>,
}

impl GridSolution {
    /// Best grid path of exactly `horizon` steps.
    pub fn path_at(&self, horizon: usize) -> Path {
        let [p, m] = self.table[horizon - 1];
        let side = if m.0 < p.0 {
            ExitSide::Minus
        } else {
            ExitSide::Plus
        };
        self.path_at_side(horizon, side)
    }

    pub fn path_at_side(&self, horizon: usize, side: ExitSide) -> Path {
        match self.table[horizon - 1][side.index()].1 {
            Source::Run(r) => self.backtrack(r, horizon, side),
            Source::MirrorOf(r) => self.backtrack(r, horizon, ExitSide::Plus).mirrored(),
        }
    }

    fn backtrack(&self, run: usize, horizon: usize, side: ExitSide) -> Path {
        let k = self.xs.len();
        let run = &self.runs[run];
        let mut points = vec![0.0; horizon + 1];
        points[0] = self.start;
        points[horizon] = side.sign() * self.half_width;
        let mut idx = run.exits[horizon - 1][side.index()].1;
        for n in (1..horizon).rev() {
            points[n] = self.xs[idx as usize];
            if n >= 2 {
                idx = run.parents[(n - 2) * k + idx as usize];
            }
        }
        Path::new(points, self.half_width).expect("grid paths satisfy the exit constraints")
    }
}

/// Symmetric grid over `[-h, h]`; `x[G-1-i] == -x[i]` exactly.
fn symmetric_grid(h: f64, g: usize) -> Vec<f64> {
    let m = (g - 1) as f64;
    (0..g).map(|i| h * (2.0 * i as f64 - m) / m).collect()
}

fn reduction_flags(map: &MapSpec, h: f64, cfg: &MinimizerConfig) -> Option<LemmaFlags> {
    if !cfg.reduce || cfg.start != 0.0 {
        return None;
    }
    if h != 1.0 && !map.closed_under_rescaling() {
        return None;
    }
    let flags = analytic_lemma_flags(map).unwrap_or_else(|| lemma_predicates(map));
    flags.increasing_fixed0.then_some(flags)
}

fn run_dp(
    xs: &[f64],
    fx: &[f64],
    f_start: f64,
    h: f64,
    cfg: &MinimizerConfig,
    rs: Restriction,
) -> DpRun {
    let k = xs.len();
    let m = cfg.max_len;
    let cost = cfg.cost;
    let allowed: Vec<bool> = xs
        .iter()
        .map(|&x| rs.sign.is_none_or(|s| s * x >= 0.0))
        .collect();
    let exit_targets = [h, -h];

    let mut cur: Vec<f64> = xs
        .iter()
        .zip(&allowed)
        .map(|(&x, &ok)| {
            if ok {
                cost.step_cost(x - f_start)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let mut next = vec![f64::INFINITY; k];
    let mut parents = vec![NO_PARENT; k * m.saturating_sub(2)];
    let mut exits = Vec::with_capacity(m);

    let one_step = |side: usize| {
        if rs.sides[side] {
            (cost.step_cost(exit_targets[side] - f_start), NO_PARENT)
        } else {
            (f64::INFINITY, NO_PARENT)
        }
    };
    exits.push([one_step(0), one_step(1)]);

    for horizon in 2..=m {
        // exits after `horizon` steps leave from states of step horizon-1
        let mut ex = [(f64::INFINITY, NO_PARENT); 2];
        for (side, target) in exit_targets.iter().enumerate() {
            if !rs.sides[side] {
                continue;
            }
            for i in 0..k {
                let v = cur[i] + cost.step_cost(target - fx[i]);
                if v < ex[side].0 {
                    ex[side] = (v, i as u32);
                }
            }
        }
        exits.push(ex);
        if horizon == m {
            break;
        }
        let row = &mut parents[(horizon - 2) * k..(horizon - 1) * k];
        for j in 0..k {
            if !allowed[j] {
                next[j] = f64::INFINITY;
                continue;
            }
            let y = xs[j];
            let mut best = f64::INFINITY;
            let mut arg = NO_PARENT;
            for i in 0..k {
                if rs.monotone {
                    let s = rs.sign.unwrap_or(1.0);
                    if s * xs[i] > s * y {
                        continue;
                    }
                }
                let v = cur[i] + cost.step_cost(y - fx[i]);
                if v < best {
                    best = v;
                    arg = i as u32;
                }
            }
            next[j] = best;
            row[j] = arg;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    DpRun { parents, exits }
}

/// Exhaustive dynamic program over grid paths of length `1..=M`.
///
/// Fails with [`Error::MapNotContained`] if `|f(x)| >= h` at a grid point
/// of the open interval or at the start.
pub fn grid_dp(map: &MapSpec, h: f64, cfg: &MinimizerConfig) -> Result<GridSolution> {
    map.validate()?;
    cfg.validate()?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::config(format!("half_width must be > 0, got {h}")));
    }
    if !(cfg.start.abs() < h) {
        return Err(Error::config(format!(
            "start must satisfy |start| < half_width, got {}",
            cfg.start
        )));
    }
    let full = symmetric_grid(h, cfg.grid);
    let xs: Vec<f64> = full[1..full.len() - 1].to_vec();
    let fx: Vec<f64> = xs.iter().map(|&x| map.eval(x)).collect();
    for (&x, &f) in std::iter::once((&cfg.start, &map.eval(cfg.start))).chain(xs.iter().zip(&fx)) {
        if !(f.abs() < h) {
            return Err(Error::MapNotContained {
                x,
                fx: f.abs(),
                half_width: h,
            });
        }
    }
    let f_start = map.eval(cfg.start);

    let flags = reduction_flags(map, h, cfg);
    let mut runs = Vec::new();
    let mut table: Vec<[(f64, Source); 2]>;
    match flags {
        None => {
            let run = run_dp(&xs, &fx, f_start, h, cfg, Restriction::NONE);
            table = run
                .exits
                .iter()
                .map(|e| [(e[0].0, Source::Run(0)), (e[1].0, Source::Run(0))])
                .collect();
            runs.push(run);
        }
        Some(flags) => {
            let monotone = flags.strictly_contractive;
            let plus = run_dp(
                &xs,
                &fx,
                f_start,
                h,
                cfg,
                Restriction {
                    sign: Some(1.0),
                    monotone,
                    sides: [true, false],
                },
            );
            table = plus
                .exits
                .iter()
                .map(|e| [(e[0].0, Source::Run(0)), (e[0].0, Source::MirrorOf(0))])
                .collect();
            runs.push(plus);
            if !flags.odd {
                let minus = run_dp(
                    &xs,
                    &fx,
                    f_start,
                    h,
                    cfg,
                    Restriction {
                        sign: Some(-1.0),
                        monotone,
                        sides: [false, true],
                    },
                );
                for (row, e) in table.iter_mut().zip(&minus.exits) {
                    row[1] = (e[1].0, Source::Run(1));
                }
                runs.push(minus);
            }
        }
    }

    let horizon_values: Vec<f64> = table.iter().map(|r| r[0].0.min(r[1].0)).collect();
    let best = horizon_values.iter().copied().fold(f64::INFINITY, f64::min);
    let n_star = horizon_values
        .iter()
        .position(|&v| v <= best * (1.0 + N_STAR_REL_TOL) + N_STAR_ABS_TOL)
        .expect("some horizon attains the minimum")
        + 1;
    let exit_plus = table.iter().map(|r| r[0].0).fold(f64::INFINITY, f64::min);
    let exit_minus = table.iter().map(|r| r[1].0).fold(f64::INFINITY, f64::min);

    let mut sol = GridSolution {
        result: ActionResult::new(best, n_star, Path::new(vec![cfg.start, h], h)?, true),
        horizon_values,
        exit_plus,
        exit_minus,
        grid_step: 2.0 * h / (cfg.grid - 1) as f64,
        reduced: flags.is_some(),
        xs,
        start: cfg.start,
        half_width: h,
        runs,
        table,
    };
    // report the value of the path actually returned, which may sit within
    // the n_star tolerance above `best`
    let value = sol.horizon_values[n_star - 1];
    sol.result = ActionResult::new(value, n_star, sol.path_at(n_star), true);
    Ok(sol)
}

fn golden_section<F: Fn(f64) -> f64>(phi: &F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = phi(x1);
    let mut f2 = phi(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = phi(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = phi(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bracketed 1-D minimisation of `phi` on `[lo, hi]` starting from `t0`:
/// a local scan locates a bracket, golden section narrows it.
fn minimize_1d<F: Fn(f64) -> f64>(phi: &F, t0: f64, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    const SCAN: i32 = 4;
    let mut center = t0;
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(2 * SCAN as usize + 1);
    let mut b;
    let mut walks = 0;
    loop {
        pts.clear();
        for k in -SCAN..=SCAN {
            let t = (center + k as f64 * width).clamp(lo, hi);
            if pts.last().is_none_or(|p| p.0 != t) {
                pts.push((t, phi(t)));
            }
        }
        b = 0;
        for (i, p) in pts.iter().enumerate() {
            if p.1 < pts[b].1 {
                b = i;
            }
        }
        let at_edge = (b == 0 && pts[0].0 > lo) || (b == pts.len() - 1 && pts[b].0 < hi);
        walks += 1;
        if !at_edge || walks > 64 || pts[b].0 == center {
            break;
        }
        center = pts[b].0;
    }
    let left = pts[b.saturating_sub(1)].0;
    let right = pts[(b + 1).min(pts.len() - 1)].0;
    let tol = 1e-14 * (1.0 + hi.abs().max(lo.abs()));
    let (t, v) = golden_section(phi, left, right, tol);
    if v < pts[b].1 {
        (t, v)
    } else {
        pts[b]
    }
}

/// Coordinate descent on the interior points of `seed`, endpoints fixed.
///
/// Each `y_n` is re-optimised over `[-h + η, h - η]` against its two
/// adjacent cost terms. Stops when the largest move in a sweep is below
/// `refine_tol`, or after `max_sweeps` with `converged = false`.
pub fn refine(map: &MapSpec, seed: &Path, cfg: &MinimizerConfig) -> ActionResult {
    let h = seed.half_width();
    let eta = 1e-9 * h;
    let (lo, hi) = (-h + eta, h - eta);
    let width = h / 100.0;
    let cost = cfg.cost;
    let mut path = seed.clone();
    let n = path.steps();
    let mut converged = n < 2;

    if n >= 2 {
        let y = path.points_mut();
        for _ in 0..cfg.max_sweeps {
            let mut max_change: f64 = 0.0;
            for k in 1..n {
                let target = map.eval(y[k - 1]);
                let next = y[k + 1];
                let phi = |t: f64| cost.step_cost(t - target) + cost.step_cost(next - map.eval(t));
                let t0 = y[k].clamp(lo, hi);
                let v0 = phi(y[k]);
                let (t, v) = minimize_1d(&phi, t0, lo, hi, width);
                if v < v0 {
                    max_change = max_change.max((t - y[k]).abs());
                    y[k] = t;
                }
            }
            if max_change < cfg.refine_tol {
                converged = true;
                break;
            }
        }
    }
    let value = cost.path_cost(&path, map).value;
    ActionResult::new(value, n, path, converged)
}

/// Grid DP followed by refinement of the best grid paths and their mirrors.
///
/// `n_star` is the shortest refined path whose cost is within
/// `N_STAR_REL_TOL` of the best refined cost.
pub fn min_action(map: &MapSpec, h: f64, cfg: &MinimizerConfig) -> Result<ActionResult> {
    let sol = grid_dp(map, h, cfg)?;
    Ok(refine_candidates(map, &sol, cfg))
}

/// Refinement stage of [`min_action`] on an existing grid solution.
pub fn refine_candidates(map: &MapSpec, sol: &GridSolution, cfg: &MinimizerConfig) -> ActionResult {
    let best_grid = sol.result.value;
    let mut order: Vec<usize> = (1..=sol.horizon_values.len())
        .filter(|&n| sol.horizon_values[n - 1] <= best_grid * (1.0 + CANDIDATE_REL) + 1e-12)
        .collect();
    order.sort_by(|&a, &b| {
        sol.horizon_values[a - 1]
            .total_cmp(&sol.horizon_values[b - 1])
            .then(a.cmp(&b))
    });

    let mut seeds: Vec<Path> = Vec::new();
    for n in order {
        let p = sol.path_at(n).trim_idle_prefix(map);
        if !seeds.contains(&p) {
            seeds.push(p);
        }
        if seeds.len() == MAX_CANDIDATES {
            break;
        }
    }

    let mut refined: Vec<ActionResult> = Vec::with_capacity(2 * seeds.len());
    for seed in &seeds {
        refined.push(refine(map, seed, cfg));
        refined.push(refine(map, &seed.mirrored(), cfg));
    }
    let best = refined
        .iter()
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    let cutoff = best * (1.0 + N_STAR_REL_TOL) + N_STAR_ABS_TOL;
    let mut chosen = refined
        .into_iter()
        .filter(|r| r.value <= cutoff)
        .min_by(|a, b| a.n_star.cmp(&b.n_star).then(a.value.total_cmp(&b.value)))
        .expect("at least one candidate");
    // refinement never loses to the grid
    if chosen.value > best_grid {
        let p = sol.result.path.trim_idle_prefix(map);
        chosen = ActionResult::new(cfg.cost.path_cost(&p, map).value, p.steps(), p, true);
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{max_stationarity_residual, quad_cost};

    fn cfg() -> MinimizerConfig {
        MinimizerConfig::default()
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.grid = 10;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.max_len = 0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.refine_tol = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn linear_grid_value() {
        let sol = grid_dp(&MapSpec::Linear { a: 0.5 }, 1.0, &cfg()).unwrap();
        assert!(
            (sol.result.value - 0.375).abs() < 0.01,
            "{}",
            sol.result.value
        );
    }

    #[test]
    fn dead_zone_grid_value_and_horizon() {
        let sol = grid_dp(&MapSpec::DeadZone { a: 0.8, b: 0.2 }, 1.0, &cfg()).unwrap();
        assert!((sol.result.value - 0.4047).abs() < 0.01);
        assert_eq!(sol.result.n_star, 3);
        assert_eq!(sol.result.path.steps(), 3);
    }

    #[test]
    fn single_step_horizon() {
        let mut c = cfg();
        c.max_len = 1;
        for (map, h) in [
            (MapSpec::Linear { a: 0.5 }, 1.0),
            (
                MapSpec::Tabulated {
                    knots: vec![[-1.0, 0.2], [1.0, 0.2]],
                },
                1.0,
            ),
            (MapSpec::Ricker { r: 1.5 }, 0.5),
        ] {
            let f0 = map.eval(0.0);
            let expect = (0.5 * (h - f0).powi(2)).min(0.5 * (h + f0).powi(2));
            let sol = grid_dp(&map, h, &c).unwrap();
            assert!((sol.result.value - expect).abs() < 1e-15);
            assert_eq!(sol.result.n_star, 1);
            let r = min_action(&map, h, &c).unwrap();
            assert_eq!(r.path.steps(), 1);
        }
    }

    #[test]
    fn uncontained_map_is_rejected() {
        let err = grid_dp(&MapSpec::Quadratic { a: 2.0 }, 1.0, &cfg()).unwrap_err();
        match err {
            Error::MapNotContained { x, fx, .. } => assert!(fx >= 1.0 && x.abs() < 1.0),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn dp_value_matches_path_cost() {
        for (map, h) in [
            (MapSpec::Saturated { a: 0.8, c: 0.5 }, 0.7),
            (MapSpec::TwoSlope { a: 0.7, b: 0.3 }, 0.7),
            (MapSpec::Ricker { r: 0.6 }, 0.4),
        ] {
            let sol = grid_dp(&map, h, &cfg()).unwrap();
            let c = quad_cost(&sol.result.path, &map).value;
            assert!((c - sol.result.value).abs() < 1e-9, "{map:?}");
        }
    }

    #[test]
    fn horizon_values_nonincreasing_with_fixed_point() {
        for map in [
            MapSpec::Linear { a: 0.7 },
            MapSpec::HalfLine { a: 0.4 },
            MapSpec::Ricker { r: 1.5 },
        ] {
            let sol = grid_dp(&map, 0.5, &cfg()).unwrap();
            for w in sol.horizon_values.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "{map:?}");
            }
        }
    }

    #[test]
    fn refine_half_line() {
        let map = MapSpec::HalfLine { a: 0.9 };
        let r = min_action(&map, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0 / (2.0 * 1.81)).abs() < 1e-4, "{}", r.value);
        assert_eq!(r.n_star, 2);
        assert!((r.path.points()[1] - 0.9 / 1.81).abs() < 1e-6);
        assert!(max_stationarity_residual(&r.path, &map) < 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn refine_keeps_optimal_seed() {
        let a: f64 = 0.5;
        let n = 5;
        let d = 1.0 - a.powi(2 * n);
        let pts: Vec<f64> = (0..=n)
            .map(|k| (a.powi(n - k) - a.powi(n + k)) / d)
            .collect();
        let seed = Path::new(pts.clone(), 1.0).unwrap();
        let map = MapSpec::Linear { a };
        let r = refine(&map, &seed, &cfg());
        for (p, q) in r.path.points().iter().zip(&pts) {
            assert!((p - q).abs() <= 1e-8, "{p} vs {q}");
        }
        assert!(r.value <= quad_cost(&seed, &map).value + 1e-12);
    }

    #[test]
    fn refine_never_increases_cost() {
        let map = MapSpec::Ricker { r: 1.5 };
        let seed = Path::new(vec![0.0, 0.3, -0.2, 0.1, 0.5], 0.5).unwrap();
        let r = refine(&map, &seed, &cfg());
        assert!(r.value <= quad_cost(&seed, &map).value + 1e-12);
        assert!((quad_cost(&r.path, &map).value - r.value).abs() < 1e-9);
    }

    #[test]
    fn quadratic_beats_two_step_value() {
        let r = min_action(&MapSpec::Quadratic { a: 1.0 }, 1.0, &cfg()).unwrap();
        assert!(r.value <= 0.375 + 1e-6, "{}", r.value);
    }

    #[test]
    fn abs_value_action() {
        let r = min_action(&MapSpec::AbsValue { a: 0.9 }, 1.0, &cfg()).unwrap();
        assert!((r.value - 0.095).abs() < 0.002, "{}", r.value);
    }

    #[test]
    fn reduced_search_agrees_with_full() {
        let mut reduced = cfg();
        reduced.reduce = true;
        for map in [
            MapSpec::DeadZone { a: 0.8, b: 0.2 },
            MapSpec::Saturated { a: 0.6, c: 0.4 },
            MapSpec::Linear { a: 0.5 },
        ] {
            let full = grid_dp(&map, 1.0, &cfg()).unwrap();
            let red = grid_dp(&map, 1.0, &reduced).unwrap();
            assert!(red.reduced);
            assert!(
                (full.result.value - red.result.value).abs() < 1e-12,
                "{map:?}"
            );
            assert_eq!(full.result.n_star, red.result.n_star);
        }
        // h != 1 and not closed under rescaling: no reduction
        let sol = grid_dp(&MapSpec::DeadZone { a: 0.8, b: 0.2 }, 0.5, &reduced).unwrap();
        assert!(!sol.reduced);
    }

    #[test]
    fn l1_dead_zone_single_jump() {
        let mut c = cfg();
        c.cost = CostKind::L1 { lambda: 2.0 };
        let r = min_action(&MapSpec::DeadZone { a: 0.5, b: 0.2 }, 1.0, &c).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
        assert_eq!(r.n_star, 1);
    }
}
