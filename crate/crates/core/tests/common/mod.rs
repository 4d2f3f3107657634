#![allow(dead_code)]

use exitbound::MapSpec;

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Parameter grid for the six families with exact closed forms, at least 20
/// maps each.
pub fn closed_form_grid() -> Vec<MapSpec> {
    let mut maps = Vec::new();
    for a in linspace(-0.95, 0.95, 20) {
        maps.push(MapSpec::Linear { a });
    }
    for a in [0.2, 0.5, 0.8, 0.95] {
        for b in [0.1, 0.2, 0.3, 0.5, 0.7] {
            maps.push(MapSpec::DeadZone { a, b });
        }
    }
    for a in [0.2, 0.4, 0.6, 0.8, 0.95] {
        for c in [0.1, 0.3, 0.5, 0.8] {
            maps.push(MapSpec::Saturated { a, c });
        }
    }
    for a in linspace(0.05, 0.95, 20) {
        maps.push(MapSpec::HalfLine { a });
    }
    for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for b in [0.2, 0.4, 0.6, 0.8] {
            maps.push(MapSpec::TwoSlope { a, b });
        }
    }
    for a in linspace(-0.95, 0.95, 20) {
        maps.push(MapSpec::AbsValue { a });
    }
    maps
}

/// Quadratic maps with `a > 0.5` that keep the interior inside `(-1, 1)`.
pub fn quadratic_grid() -> Vec<MapSpec> {
    linspace(0.525, 1.0, 20)
        .into_iter()
        .map(|a| MapSpec::Quadratic { a })
        .collect()
}

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    rec(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}
