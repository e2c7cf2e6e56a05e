#![allow(dead_code)]

use ldl_core::game::validate_one_pop;
use ldl_core::{OnePopGame, PopState, PopulationGame, PowerFrontier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Integer-valued game with `k` strategies satisfying coordination, strict
/// bandwagon and the support conditions, drawn by rejection.
pub fn random_condition_a(seed: u64, k: usize) -> OnePopGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { rng.gen_range(8..=24) as f64 } else { rng.gen_range(-4..=6) as f64 }).collect())
            .collect();
        let g = OnePopGame::new(rows).expect("finite square matrix");
        if validate_one_pop(&g).holds() {
            return g;
        }
    }
}

/// Power-family frontier whose domain end is a whole multiple of 0.01.
pub fn random_frontier(seed: u64) -> PowerFrontier {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = rng.gen_range(0.5..4.0);
    let b = rng.gen_range(50..=400) as f64 / 100.0;
    let p = rng.gen_range(0.2..0.8);
    PowerFrontier::new(a, b, p).expect("valid power frontier")
}

/// A random state of size `n` in the basin of `m` with at least `room` agents on `m`.
pub fn random_basin_state(rng: &mut ChaCha8Rng, g: &OnePopGame, n: u32, m: usize, room: u32) -> PopState {
    loop {
        let k = g.k();
        let mut counts = vec![0u32; k];
        let others = rng.gen_range(0..=n - room);
        for _ in 0..others {
            counts[rng.gen_range(0..k)] += 1;
        }
        counts[m] += n - others;
        let x = PopState::new(counts).expect("state");
        if g.in_basin(&x, m) {
            return x;
        }
    }
}
