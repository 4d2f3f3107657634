mod common;

use exitbound::closed_forms::{deadzone_bound, linear_bound};
use exitbound::{grid_dp, min_action, quad_cost, refine, CostKind, MapSpec, MinimizerConfig, Path};
use proptest::prelude::*;

fn coarse() -> MinimizerConfig {
    MinimizerConfig {
        grid: 101,
        max_len: 12,
        ..MinimizerConfig::default()
    }
}

fn contained_map() -> impl Strategy<Value = MapSpec> {
    prop_oneof![
        (-0.95..0.95f64).prop_map(|a| MapSpec::Linear { a }),
        (0.0..1.0f64, 0.0..0.9f64).prop_map(|(a, b)| MapSpec::DeadZone { a, b }),
        (0.05..0.95f64, 0.05..1.0f64).prop_map(|(a, c)| MapSpec::Saturated { a, c }),
        (0.05..0.95f64).prop_map(|a| MapSpec::HalfLine { a }),
        (0.05..0.95f64, 0.05..0.95f64).prop_map(|(a, b)| MapSpec::TwoSlope { a, b }),
        (-0.95..0.95f64).prop_map(|a| MapSpec::AbsValue { a }),
        (0.0..1.0f64).prop_map(|a| MapSpec::Quadratic { a }),
    ]
}

/// Interior points in (-1, 1) followed by an exit at ±1.
fn exit_path() -> impl Strategy<Value = Path> {
    (prop::collection::vec(-0.99..0.99f64, 0..6), any::<bool>()).prop_map(|(mut pts, plus)| {
        pts.insert(0, 0.0);
        pts.push(if plus { 1.0 } else { -1.0 });
        Path::new(pts, 1.0).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn costs_are_nonnegative(map in contained_map(), path in exit_path(), lambda in 0.1..5.0f64) {
        prop_assert!(quad_cost(&path, &map).value >= 0.0);
        let l1 = CostKind::L1 { lambda }.path_cost(&path, &map).value;
        prop_assert!(l1 >= 0.0);
    }

    #[test]
    fn refinement_never_increases_cost(map in contained_map(), path in exit_path()) {
        let before = quad_cost(&path, &map).value;
        let r = refine(&map, &path, &coarse());
        prop_assert!(r.value <= before + 1e-12);
        prop_assert!((quad_cost(&r.path, &map).value - r.value).abs() < 1e-12);
    }

    #[test]
    fn horizon_values_never_increase_at_fixed_points(map in contained_map()) {
        prop_assume!(map.fixed_point_at_origin());
        let sol = grid_dp(&map, 1.0, &coarse()).unwrap();
        for w in sol.horizon_values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn dp_is_an_upper_bound_on_the_infimum(map in contained_map()) {
        let cfg = coarse();
        let sol = grid_dp(&map, 1.0, &cfg).unwrap();
        let refined = min_action(&map, 1.0, &cfg).unwrap();
        prop_assert!(refined.value <= sol.result.value + 1e-12);
        prop_assert!((quad_cost(&sol.result.path, &map).value - sol.result.value).abs() < 1e-9);
    }

    #[test]
    fn linear_scales_with_half_width(a in -0.9..0.9f64, h in 0.2..3.0f64) {
        let cfg = coarse();
        let unit = min_action(&MapSpec::Linear { a }, 1.0, &cfg).unwrap().value;
        let scaled = min_action(&MapSpec::Linear { a }, h, &cfg).unwrap().value;
        prop_assert!((scaled - h * h * unit).abs() <= 1e-6 * scaled.max(1e-12));
        prop_assert!((linear_bound(a, h).unwrap() - h * h * linear_bound(a, 1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn dead_zone_dominates_linear(a in 0.0..1.0f64, b in 0.01..0.9f64) {
        prop_assert!(linear_bound(a, 1.0).unwrap() <= deadzone_bound(a, b, 50).unwrap().0);
    }

    #[test]
    fn mirrored_paths_cost_the_same_under_odd_maps(a in -0.95..0.95f64, path in exit_path()) {
        let map = MapSpec::Linear { a };
        let c = quad_cost(&path, &map).value;
        let m = quad_cost(&path.mirrored(), &map).value;
        prop_assert!((c - m).abs() <= 1e-12 * c.max(1.0));
    }
}

#[test]
fn grid_doubling_changes_value_by_under_half_a_percent() {
    for map in [
        MapSpec::Linear { a: 0.5 },
        MapSpec::DeadZone { a: 0.8, b: 0.2 },
        MapSpec::Saturated { a: 0.8, c: 0.5 },
        MapSpec::HalfLine { a: 0.9 },
        MapSpec::TwoSlope { a: 0.7, b: 0.3 },
        MapSpec::Ricker { r: 1.5 },
    ] {
        let h = if matches!(map, MapSpec::Ricker { .. }) {
            0.5
        } else {
            1.0
        };
        let base = MinimizerConfig::default();
        let fine = MinimizerConfig {
            grid: 801,
            ..base.clone()
        };
        let v401 = grid_dp(&map, h, &base).unwrap().result.value;
        let v801 = grid_dp(&map, h, &fine).unwrap().result.value;
        assert!(
            (v401 - v801).abs() / v801 < 5e-3,
            "{map:?}: {v401} vs {v801}"
        );
    }
}

#[test]
fn closed_form_grid_is_large_enough() {
    let maps = common::closed_form_grid();
    for family in [
        "linear",
        "dead_zone",
        "saturated",
        "half_line",
        "two_slope",
        "abs_value",
    ] {
        assert!(
            maps.iter().filter(|m| m.family_name() == family).count() >= 20,
            "{family}"
        );
    }
    assert_eq!(common::quadratic_grid().len(), 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parsers_reject_garbage_without_panicking(s in ".{0,64}") {
        let _ = exitbound::cli::parse_epsilons(&s);
        let _ = exitbound::cli::parse_knots(&s);
        if let Ok(cfg) = exitbound::cli::parse_config(&s) {
            let _ = cfg.resolved();
        }
    }

    #[test]
    fn epsilon_lists_round_trip(eps in prop::collection::vec(1e-6..10.0f64, 1..8)) {
        let text: Vec<String> = eps.iter().map(|e| e.to_string()).collect();
        prop_assert_eq!(exitbound::cli::parse_epsilons(&text.join(",")).unwrap(), eps);
    }

    #[test]
    fn knot_lists_round_trip(ys in prop::collection::vec(-2.0..2.0f64, 2..8)) {
        let n = ys.len();
        let knots: Vec<[f64; 2]> = ys
            .iter()
            .enumerate()
            .map(|(i, &y)| [-1.0 + 2.0 * i as f64 / (n - 1) as f64, y])
            .collect();
        let text: Vec<String> = knots.iter().map(|k| format!("{}:{}", k[0], k[1])).collect();
        prop_assert_eq!(exitbound::cli::parse_knots(&text.join(",")).unwrap(), knots);
    }
}
