//! Fixtures shared by the solver benchmarks.

use ldl_core::game::{ndg_build, tech_game};
use ldl_core::{CostMatrix, OnePopGame, PowerFrontier, Provenance, TwoPopGame};

pub fn tech() -> OnePopGame {
    tech_game(16.0, 16.0, 16.0, 1.0)
}

pub fn panel_a() -> PowerFrontier {
    PowerFrontier::new(1.0, 3.0, 0.5).expect("valid frontier")
}

pub fn nash_demand(l: usize) -> TwoPopGame {
    ndg_build(&panel_a(), l).expect("valid grid")
}

/// Deterministic dense cost matrix with distinct off-diagonal entries.
pub fn cost_matrix(k: usize) -> CostMatrix {
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 0.0 } else { ((i * 7 + j * 13) % 17) as f64 + 1.0 + 0.01 * i as f64 }).collect())
        .collect();
    CostMatrix::from_rows(&rows, Provenance::ClosedForm).expect("square matrix")
}
