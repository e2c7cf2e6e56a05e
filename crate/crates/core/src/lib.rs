//! Escape costs, stochastic stability and evolutionary bargaining for
//! coordination games under logit-type choice rules.
//!
//! Strategies are 0-based throughout the library.

pub mod bargaining;
pub mod chain;
pub mod continuum;
pub mod error;
pub mod exit;
pub mod game;
pub mod limits;
pub mod path;
mod search;
pub mod stability;

pub use bargaining::{
    convergence_sweep, rl_functions, solve_solutions, stable_division, BargainingSolutions, DivisionRule, Frontier,
    PowerFrontier,
};
pub use chain::{CostRule, Move, PopState, Population, PopulationGame, TwoPopState};
pub use error::{Error, Result};
pub use exit::{exit_bruteforce, exit_limit_one_pop, exit_limit_two_pop, exit_reduced, EscapeResult, Provenance};
pub use game::{Game, GameSpec, OnePopGame, TwoPopGame};
pub use limits::Limits;
pub use path::Path;
pub use stability::{
    arborescence_root, invariant_measure, maxmin_test, radius_matrix, transition_cost_bruteforce, CostMatrix,
    RadiusMatrix, StabilityReport,
};
