mod common;

use ldl_core::bargaining::{grid_size, radius_profile, SolutionOrdering};
use ldl_core::game::ndg_build;
use ldl_core::{
    radius_matrix, rl_functions, solve_solutions, stable_division, CostRule, DivisionRule, Frontier, Game, Population,
    PowerFrontier,
};
use proptest::prelude::*;

use common::random_frontier;

fn frontiers() -> Vec<PowerFrontier> {
    let mut f = vec![PowerFrontier::new(1.0, 3.0, 0.5).unwrap(), PowerFrontier::new(3.0, 1.0, 0.5).unwrap()];
    f.extend((0..10).map(|s| random_frontier(8000 + s)));
    f
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

#[test]
fn derivative_ratios_are_decreasing() {
    for f in frontiers() {
        let b = f.sbar();
        let xs: Vec<f64> = (1..1000).map(|i| b * i as f64 / 1000.0).collect();
        let g1: Vec<f64> = xs.iter().map(|&x| f.slope(x) / f.value(x)).collect();
        let g2: Vec<f64> = xs.iter().map(|&x| x * f.slope(x) - f.value(x)).collect();
        let g3: Vec<f64> = xs.iter().map(|&x| f.slope(x) + f.value(x) / x).collect();
        let g4: Vec<f64> = xs.iter().map(|&x| f.slope(x) + (f.value(x) / x).powi(2)).collect();
        for (name, g) in [("f'/f", g1), ("x f' - f", g2), ("f' + f/x", g3), ("f' + (f/x)^2", g4)] {
            assert!(strictly_decreasing(&g), "{name} not decreasing for {f:?}");
        }
    }
}

#[test]
fn intentional_solution_lies_between() {
    for f in frontiers() {
        let s = solve_solutions(&f).unwrap();
        assert!(s.ordering_holds(), "{f:?}: {s:?}");
        assert_ne!(s.ordering, SolutionOrdering::Coincident);
    }
}

#[test]
fn discrete_divisions_keep_the_ordering() {
    for f in frontiers().into_iter().take(6) {
        let s = solve_solutions(&f).unwrap();
        let u = stable_division(&f, 0.01, DivisionRule::Unintentional).unwrap();
        let i = stable_division(&f, 0.01, DivisionRule::Intentional).unwrap();
        let lo = u.x_star.min(s.egalitarian);
        let hi = u.x_star.max(s.egalitarian);
        assert!(i.x_star > lo - 0.01 && i.x_star < hi + 0.01, "{f:?}: {} not between {lo} and {hi}", i.x_star);
        assert!((u.x_star - s.nash).abs() < 0.05);
        assert!((i.x_star - s.intentional).abs() < 0.05);
    }
}

#[test]
fn binding_side_flips_at_the_stable_division() {
    for f in frontiers() {
        for rule in [DivisionRule::Unintentional, DivisionRule::Intentional] {
            let d = stable_division(&f, 0.01, rule).unwrap();
            let (lo, hi) = (d.m_star[0], *d.m_star.last().unwrap());
            for p in radius_profile(&f, 0.01, rule).unwrap() {
                if p.rl.m < lo {
                    assert!(p.binding.rightward(), "{f:?} {rule:?} m {}: {}", p.rl.m, p.binding);
                } else if p.rl.m > hi {
                    assert!(!p.binding.rightward(), "{f:?} {rule:?} m {}: {}", p.rl.m, p.binding);
                }
                if rule == DivisionRule::Intentional {
                    let expect = if p.binding.rightward() { Population::Alpha } else { Population::Beta };
                    assert_eq!(p.binding.driving(), expect);
                }
            }
        }
    }
}

#[test]
fn profile_matches_nash_demand_radius_matrix() {
    for f in frontiers().into_iter().take(4) {
        let delta = f.sbar() / 12.0;
        let l = grid_size(&f, delta).unwrap();
        let game = Game::Two(ndg_build(&f, l).unwrap());
        for (rule, cost_rule) in
            [(DivisionRule::Unintentional, CostRule::LogitUnintentional), (DivisionRule::Intentional, CostRule::LogitIntentionalTwoPop)]
        {
            let r = radius_matrix(&game, cost_rule).unwrap();
            let profile = radius_profile(&f, delta, rule).unwrap();
            assert_eq!(profile.len(), l - 1);
            for (i, p) in profile.iter().enumerate() {
                assert!((p.radius - r.radius(i)).abs() < 1e-12, "{rule:?} m {}: {} vs {}", i + 1, p.radius, r.radius(i));
            }
        }
    }
}

#[test]
fn sweep_errors_shrink() {
    let f = PowerFrontier::new(1.0, 3.0, 0.5).unwrap();
    let rows = ldl_core::convergence_sweep(&f, &[0.1, 0.05, 0.01], DivisionRule::Unintentional).unwrap();
    assert!(rows.windows(2).all(|w| w[1].error <= w[0].error + 1e-12));
    assert!(rows[2].error <= 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rl_terms_are_monotone(seed in 0u64..10_000, steps in 20usize..200) {
        let f = random_frontier(seed);
        let delta = f.sbar() / steps as f64;
        let l = grid_size(&f, delta).unwrap();
        let rl: Vec<_> = (1..l).map(|m| rl_functions(&f, delta, m).unwrap()).collect();
        let inc = |v: Vec<f64>| v.windows(2).all(|w| w[1] > w[0]);
        let dec = |v: Vec<f64>| v.windows(2).all(|w| w[1] < w[0]);
        prop_assert!(inc(rl.iter().filter_map(|r| r.r1).collect()));
        prop_assert!(inc(rl.iter().filter_map(|r| r.r2).collect()));
        prop_assert!(dec(rl.iter().filter_map(|r| r.l1).collect()));
        prop_assert!(dec(rl.iter().filter_map(|r| r.l2).collect()));
    }
}
