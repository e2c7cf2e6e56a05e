mod common;

use ldl_core::continuum::payoff_at;
use ldl_core::game::{
    distinct_triples, mixed_equilibrium, ndg_build, tech_game, validate_one_pop, validate_two_pop, SupportOutcome,
};
use ldl_core::{Game, OnePopGame, PowerFrontier, TwoPopGame};
use proptest::prelude::*;

use common::random_condition_a;

fn square(k: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(-20i32..=20, k * k)
        .prop_map(move |v| v.chunks(k).map(|r| r.iter().map(|&a| a as f64).collect()).collect())
}

proptest! {
    #[test]
    fn skew_identity(rows in square(4)) {
        let g = OnePopGame::new(rows).unwrap();
        for (i, j, k) in distinct_triples(4) {
            let lhs = g.mbp_margin(i, j, k) - g.mbp_margin(i, k, j);
            let rhs = (g.a(i, j) - g.a(j, i)) + (g.a(j, k) - g.a(k, j)) + (g.a(k, i) - g.a(i, k));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(g.skew(i, j, k), rhs);
        }
    }

    #[test]
    fn mbp_flag_matches_margins(rows in square(3)) {
        let g = OnePopGame::new(rows).unwrap();
        let all_positive = distinct_triples(3).all(|(i, j, k)| g.mbp_margin(i, j, k) > 0.0);
        prop_assert_eq!(validate_one_pop(&g).bandwagon, all_positive);
    }

    #[test]
    fn game_json_round_trip(a in square(3), b in square(3), two in any::<bool>()) {
        let game = if two { Game::Two(TwoPopGame::new(a, b).unwrap()) } else { Game::One(OnePopGame::new(a).unwrap()) };
        let back = Game::from_json(&game.to_json()).unwrap();
        prop_assert_eq!(back, game);
    }
}

#[test]
fn mixed_equilibria_are_indifferent() {
    let mut games = vec![tech_game(16.0, 16.0, 16.0, 1.0), tech_game(12.0, 16.0, 20.0, 2.0)];
    games.extend((0..20).map(|s| random_condition_a(500 + s, 3)));
    games.extend((0..5).map(|s| random_condition_a(900 + s, 4)));
    for g in &games {
        let k = g.k();
        for mask in 1u32..(1 << k) {
            let support: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
            let SupportOutcome::Equilibrium { weights } = mixed_equilibrium(g, &support).unwrap() else {
                panic!("condition A game lacks an equilibrium on {support:?}");
            };
            assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let v = payoff_at(g, support[0], &weights);
            for i in 0..k {
                let p = payoff_at(g, i, &weights);
                if support.contains(&i) {
                    assert!(weights[i] > 0.0);
                    assert!((p - v).abs() <= 1e-10, "support {support:?}: {p} vs {v}");
                } else {
                    assert_eq!(weights[i], 0.0);
                    assert!(p <= v + 1e-10);
                }
            }
        }
    }
}

#[test]
fn mixed_equilibrium_examples() {
    let g = OnePopGame::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let SupportOutcome::Equilibrium { weights } = mixed_equilibrium(&g, &[0, 1]).unwrap() else { panic!() };
    assert!((weights[0] - 1.0 / 3.0).abs() < 1e-15 && (weights[1] - 2.0 / 3.0).abs() < 1e-15);

    let t = tech_game(16.0, 16.0, 16.0, 1.0);
    let SupportOutcome::Equilibrium { weights } = mixed_equilibrium(&t, &[0, 1, 2]).unwrap() else { panic!() };
    assert!(weights.iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-15));
}

#[test]
fn degenerate_support_is_absent() {
    let g = OnePopGame::new(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
    match mixed_equilibrium(&g, &[0, 1]).unwrap() {
        SupportOutcome::Absent { reason } => assert!(reason.contains("degenerate"), "{reason}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn tech_game_bandwagon_threshold() {
    assert!(validate_one_pop(&tech_game(16.0, 16.0, 16.0, 1.0)).bandwagon);
    let d6 = validate_one_pop(&tech_game(16.0, 16.0, 16.0, 6.0));
    assert!(!d6.bandwagon);
    assert!(d6.violations.iter().any(|v| v.contains("bandwagon")));
    // 3d < min b is the boundary
    assert!(validate_one_pop(&tech_game(16.0, 16.0, 16.0, 5.0)).bandwagon);
    assert!(!validate_one_pop(&tech_game(15.0, 16.0, 16.0, 5.0)).bandwagon);
}

#[test]
fn ndg_satisfies_weak_bandwagon_and_conflict() {
    for l in [3, 6, 10] {
        let f = PowerFrontier::new(1.0, 3.0, 0.5).unwrap();
        let g = ndg_build(&f, l).unwrap();
        for m in 0..g.k() {
            let r = validate_two_pop(&g, m).unwrap();
            assert!(r.coordination && r.bandwagon, "L={l}: {:?}", r.violations);
            assert_eq!(r.conflict_of_interest, Some(true));
        }
        for i in 1..g.k() {
            assert!(g.alpha(i, i) > g.alpha(i - 1, i - 1));
            assert!(g.beta(i, i) < g.beta(i - 1, i - 1));
        }
    }
}

#[test]
fn transposed_tech_game_is_weak_bandwagon() {
    let t = tech_game(16.0, 16.0, 16.0, 1.0).rows();
    let tt: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| t[j][i]).collect()).collect();
    let g = TwoPopGame::new(t, tt).unwrap();
    let r = validate_two_pop(&g, 0).unwrap();
    assert!(r.coordination && r.bandwagon);
}

#[test]
fn large_games_scan_partial_supports() {
    let k = 9;
    let rows = (0..k).map(|i| (0..k).map(|j| if i == j { 10.0 } else { 0.0 }).collect()).collect();
    let r = validate_one_pop(&OnePopGame::new(rows).unwrap());
    assert!(r.partial);
    assert_eq!(r.supports.len(), k + k * (k - 1) / 2 + 1);
}

#[test]
fn malformed_games_are_rejected() {
    assert!(OnePopGame::new(vec![vec![1.0, 2.0], vec![3.0]]).is_err());
    assert!(OnePopGame::new(vec![vec![1.0, f64::NAN], vec![0.0, 1.0]]).is_err());
    assert!(Game::from_json(r#"{"type":"one_population","payoffs":[[1,0],[0]]}"#).is_err());
    assert!(Game::from_json(r#"{"type":"three_population"}"#).is_err());
}
