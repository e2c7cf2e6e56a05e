mod common;

use ldl_core::chain::{basin, transition_probability, PopulationGame};
use ldl_core::game::{ndg_build, tech_game};
use ldl_core::{CostRule, Move, OnePopGame, PopState, PowerFrontier, TwoPopGame, TwoPopState};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_basin_state, random_condition_a};

const LOGIT: CostRule = CostRule::LogitUnintentional;

#[test]
fn basin_cost_ignores_source_strategy() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..200 {
        let g = if trial % 2 == 0 { tech_game(16.0, 16.0, 16.0, 1.0) } else { random_condition_a(trial, 3) };
        let n = rng.gen_range(6..=40);
        let m = rng.gen_range(0..3);
        let x = random_basin_state(&mut rng, &g, n, m, 1);
        for j in 0..3 {
            let expect = g.payoff(m, &x) - g.payoff(j, &x);
            for i in (0..3).filter(|&i| i != j && x.counts()[i] > 0) {
                let c = g.step_cost(LOGIT, &x, Move::single(i, j)).unwrap();
                assert!((c - expect).abs() <= 1e-12 * expect.abs().max(1.0), "{x} {i}->{j}: {c} vs {expect}");
            }
        }
    }
}

#[test]
fn probabilities_sum_to_one() {
    let g = tech_game(16.0, 16.0, 16.0, 1.0);
    let two = ndg_build(&PowerFrontier::new(1.0, 3.0, 0.5).unwrap(), 4).unwrap();
    for beta in [0.0, 1.0, 10.0] {
        for rule in [LOGIT, CostRule::Uniform, CostRule::BetterReply] {
            for x in g.states(5) {
                let out: Vec<(Move, f64)> =
                    g.transitions(rule, &x, beta).unwrap().into_iter().map(|(m, _, lp)| (m, lp.exp())).collect();
                // Every agent may also re-choose its own strategy, so no source loses more
                // than its share and the self-loop absorbs the rest.
                for i in (0..3).filter(|&i| x.counts()[i] > 0) {
                    let share = x.counts()[i] as f64 / 5.0;
                    let leaving: f64 = out.iter().filter(|(m, _)| m.from == i).map(|r| r.1).sum();
                    assert!(leaving > 0.0 && leaving <= share, "{x} from {i} rule {rule} beta {beta}: {leaving:e} vs {share}");
                }
                let stay = 1.0 - out.iter().map(|r| r.1).sum::<f64>();
                assert!(stay > 0.0 && stay <= 1.0);
            }
        }
        for x in two.states(3) {
            let total: f64 = two.transitions(LOGIT, &x, beta).unwrap().iter().map(|r| r.2.exp()).sum();
            assert!(total < 1.0 && total > 0.0);
        }
    }
}

#[test]
fn uniform_choice_at_zero_beta() {
    let g = tech_game(16.0, 16.0, 16.0, 1.0);
    let x = PopState::new(vec![3, 2, 1]).unwrap();
    for (mv, _, lp) in g.transitions(LOGIT, &x, 0.0).unwrap() {
        let expect = x.counts()[mv.from] as f64 / 6.0 / 3.0;
        assert!((lp.exp() - expect).abs() < 1e-15);
    }
}

#[test]
fn log_probability_rate_matches_cost() {
    let g = tech_game(16.0, 16.0, 16.0, 1.0);
    let beta = 50.0;
    for x in g.states(8) {
        for (mv, _, lp) in g.transitions(LOGIT, &x, beta).unwrap() {
            let pick = (x.counts()[mv.from] as f64 / 8.0).ln();
            let rate = -(lp - pick) / beta;
            let cost = g.step_cost(LOGIT, &x, mv).unwrap();
            assert!((rate - cost).abs() < 0.1, "{x} {mv}: rate {rate} vs cost {cost}");
        }
        if let Some(mv) = g.moves(&x).first() {
            let p = transition_probability(&g, LOGIT, &x, *mv, 1.0).unwrap();
            assert!(p > 0.0 && p <= 1.0);
        }
    }
}

#[test]
fn two_by_two_basin() {
    let g = OnePopGame::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let b: Vec<u32> = basin(&g, 6, 0).iter().map(|x| x.counts()[0]).collect();
    assert_eq!(b, vec![2, 3, 4, 5, 6]);
}

#[test]
fn zero_cost_within_basin_toward_convention() {
    let g = tech_game(16.0, 16.0, 16.0, 1.0);
    for x in basin(&g, 12, 0) {
        for i in (1..3).filter(|&i| x.counts()[i] > 0) {
            assert_eq!(g.step_cost(LOGIT, &x, Move::single(i, 0)).unwrap(), 0.0);
        }
    }
}

fn small_game() -> impl Strategy<Value = OnePopGame> {
    proptest::collection::vec(-10i32..=10, 9)
        .prop_map(|v| OnePopGame::new(v.chunks(3).map(|r| r.iter().map(|&a| a as f64).collect()).collect()).unwrap())
}

fn state(n: u32) -> impl Strategy<Value = PopState> {
    (0..=n, 0..=n).prop_filter_map("fits", move |(a, b)| (a + b <= n).then(|| PopState::new(vec![a, b, n - a - b]).unwrap()))
}

proptest! {
    #[test]
    fn step_cost_nonnegative_and_zero_on_best_responses(g in small_game(), x in state(9)) {
        let raw = g.raw_payoffs(&x);
        let best = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for mv in g.moves(&x) {
            let c = g.step_cost(LOGIT, &x, mv).unwrap();
            prop_assert!(c >= 0.0);
            prop_assert_eq!(c == 0.0, raw[mv.to] == best);
            let u = g.step_cost(CostRule::Uniform, &x, mv).unwrap();
            prop_assert_eq!(u, if raw[mv.to] == best { 0.0 } else { 1.0 });
            let b = g.step_cost(CostRule::BetterReply, &x, mv).unwrap();
            prop_assert!(b >= 0.0 && b <= c + 1e-12);
        }
    }

    #[test]
    fn two_pop_alpha_cost_depends_only_on_beta(
        a in proptest::collection::vec(-5i32..=5, 9),
        b in proptest::collection::vec(-5i32..=5, 9),
        xa1 in state(6), xa2 in state(6), xb in state(6),
    ) {
        let rows = |v: &[i32]| v.chunks(3).map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<Vec<f64>>>();
        let g = TwoPopGame::new(rows(&a), rows(&b)).unwrap();
        let s1 = TwoPopState::new(xa1.clone(), xb.clone()).unwrap();
        let s2 = TwoPopState::new(xa2.clone(), xb.clone()).unwrap();
        for from in 0..3 {
            for to in (0..3).filter(|&t| t != from) {
                if xa1.counts()[from] > 0 && xa2.counts()[from] > 0 {
                    let c1 = g.step_cost(LOGIT, &s1, Move::alpha(from, to)).unwrap();
                    let c2 = g.step_cost(LOGIT, &s2, Move::alpha(from, to)).unwrap();
                    prop_assert_eq!(c1, c2);
                }
            }
        }
    }

    #[test]
    fn path_cost_is_sum_of_steps(g in small_game(), moves in proptest::collection::vec((0usize..3, 0usize..3), 0..12)) {
        let mut x = PopState::new(vec![4, 4, 4]).unwrap();
        let mut total = 0.0;
        let mut applied = Vec::new();
        for (i, j) in moves {
            if i == j || x.counts()[i] == 0 {
                continue;
            }
            total += g.step_cost(LOGIT, &x, Move::single(i, j)).unwrap();
            x = x.shifted(i, j).unwrap();
            applied.push(Move::single(i, j));
        }
        let p = ldl_core::Path::from_moves(&g, PopState::new(vec![4, 4, 4]).unwrap(), &applied).unwrap();
        prop_assert!((p.cost(&g, LOGIT).unwrap() - total).abs() < 1e-9);
    }
}
