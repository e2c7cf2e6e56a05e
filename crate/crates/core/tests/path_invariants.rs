mod common;

use ldl_core::chain::PopulationGame;
use ldl_core::game::tech_game;
use ldl_core::path::{cp1_delta, cp1_formula, cp2_delta, cp2_direct, enumerate_block_paths, run_cost, straighten};
use ldl_core::{exit_bruteforce, exit_reduced, CostRule, Move, OnePopGame, Path, PopState};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_basin_state, random_condition_a};

const LOGIT: CostRule = CostRule::LogitUnintentional;

fn game_for(seed: u64) -> OnePopGame {
    if seed % 3 == 0 {
        tech_game(16.0, 16.0, 16.0, 1.0)
    } else {
        random_condition_a(seed, 3)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn run_cost_closed_form(seed in 0u64..200, n in 20u32..60, m in 0usize..3, pick in 0usize..2, rho in 1u32..6) {
        let g = game_for(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_basin_state(&mut rng, &g, n, m, n / 2);
        let k = (0..3).filter(|&l| l != m).nth(pick).unwrap();
        let p = Path::from_moves(&g, a.clone(), &vec![Move::single(m, k); rho as usize]).unwrap();
        // The closed form holds while the run stays in the basin.
        prop_assume!(p.states()[..p.len()].iter().all(|x| g.in_basin(x, m)));
        let direct = p.cost(&g, LOGIT).unwrap();
        let formula = run_cost(&g, &a, m, k, rho);
        prop_assert!((direct - formula).abs() <= 1e-9 * direct.abs().max(1.0), "{direct} vs {formula}");
    }

    #[test]
    fn move_order_identity(seed in 0u64..200, n in 20u32..60, m in 0usize..3) {
        let g = game_for(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let x = random_basin_state(&mut rng, &g, n, m, n / 2);
        let (i, j) = match m { 0 => (1, 2), 1 => (0, 2), _ => (0, 1) };
        let d = cp2_direct(&g, &x, m, i, j);
        prop_assume!(d.is_ok());
        let (d, f) = (d.unwrap(), cp2_delta(&g, n, m, i, j));
        prop_assert!((d - f).abs() <= 1e-9 * f.abs().max(1.0), "{d} vs {f}");
    }

    #[test]
    fn first_comparison_identity(seed in 0u64..200, n in 20u32..60) {
        let g = random_condition_a(seed, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(0..4);
        let rest: Vec<usize> = (0..4).filter(|&s| s != m).collect();
        let (i, k, l) = (rest[0], rest[1], rest[2]);
        let mut x = random_basin_state(&mut rng, &g, n, m, n / 2);
        if x.counts()[i] == 0 {
            x = x.shifted(m, i).unwrap();
        }
        prop_assume!(g.in_basin(&x, m));
        let d = cp1_delta(&g, &x, m, i, k, l);
        prop_assume!(d.is_ok());
        let (d, f) = (d.unwrap(), cp1_formula(&g, n, m, i, l));
        prop_assert!((d - f).abs() <= 1e-9 * f.abs().max(1.0), "{d} vs {f}");
    }
}

/// Random escape path: moves drawn uniformly until the state leaves the basin.
fn random_escape(rng: &mut ChaCha8Rng, g: &OnePopGame, n: u32, m: usize) -> Path<PopState> {
    loop {
        let mut x = PopState::convention(g.k(), n, m);
        let mut moves = Vec::new();
        while g.in_basin(&x, m) && moves.len() < 20 * n as usize {
            // Bias toward leaving m so the walk escapes in reasonable time.
            let mv = if rng.gen_bool(0.7) && x.counts()[m] > 0 {
                Move::single(m, (m + rng.gen_range(1..g.k())) % g.k())
            } else {
                let all = g.moves(&x);
                all[rng.gen_range(0..all.len())]
            };
            x = g.apply(&x, mv).unwrap();
            moves.push(mv);
        }
        if !g.in_basin(&x, m) {
            return Path::from_moves(g, PopState::convention(g.k(), n, m), &moves).unwrap();
        }
    }
}

#[test]
fn straightening_never_increases_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut fallbacks = 0;
    for trial in 0..150 {
        let g = game_for(trial);
        let n = rng.gen_range(6..=18);
        let m = rng.gen_range(0..3);
        let p = random_escape(&mut rng, &g, n, m);
        let before = p.cost(&g, LOGIT).unwrap();
        let s = straighten(&g, &p, m).unwrap();
        let after = s.path.cost(&g, LOGIT).unwrap();
        assert!(after <= before + 1e-9 * before.max(1.0), "trial {trial}: {after} > {before}");
        assert!(s.path.escapes(&g, m));
        assert!(s.path.moves().iter().all(|mv| mv.from == m));
        assert_eq!(s.path.first_exit(&g, m), Some(s.path.len()));
        fallbacks += usize::from(s.used_fallback);
    }
    // The constructive route should handle most paths on its own.
    assert!(fallbacks < 75, "{fallbacks} fallbacks");
}

#[test]
fn block_paths_leave_exactly_at_the_end() {
    for seed in 0..10 {
        let g = game_for(seed);
        for m in 0..3 {
            for spec in enumerate_block_paths(&g, 9, m).unwrap() {
                let p = spec.to_path(&g, 9, m).unwrap();
                assert_eq!(p.first_exit(&g, m), Some(p.len()), "{spec}");
            }
        }
    }
}

#[test]
fn reduced_equals_bruteforce_with_four_strategies() {
    for seed in 0..6 {
        let g = random_condition_a(3000 + seed, 4);
        for n in [5, 8, 10] {
            for m in 0..4 {
                let b = exit_bruteforce(&g, n, m, LOGIT).unwrap();
                let r = exit_reduced(&g, n, m).unwrap();
                assert_eq!(b.cost, r.cost, "seed {seed} n {n} m {m}");
            }
        }
    }
}

#[test]
fn two_by_two_edge_path() {
    let g = OnePopGame::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let p = Path::from_moves(&g, PopState::convention(2, 6, 0), &[Move::single(0, 1); 5]).unwrap();
    assert!((p.cost(&g, LOGIT).unwrap() - 5.0).abs() < 1e-12);
    assert!(Path::from_moves(&g, PopState::convention(2, 6, 0), &[]).unwrap().cost(&g, LOGIT).unwrap() == 0.0);
}
