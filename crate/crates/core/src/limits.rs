//! State-count caps shared by the searches, enumerations and chain solvers.

/// Environment variable that overrides every state-count cap at once.
pub const GUARDRAIL_ENV: &str = "LDL_GUARDRAIL_STATES";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// States a one-population search may touch.
    pub one_pop_states: u128,
    /// Joint states a two-population search may touch.
    pub two_pop_states: u128,
    /// States an exact invariant-measure solve may hold.
    pub measure_states: u128,
    /// Candidate block paths an enumeration may produce.
    pub block_paths: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            one_pop_states: 1_000_000,
            two_pop_states: 10_000_000,
            measure_states: 50_000,
            block_paths: 10_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with the state caps replaced by `LDL_GUARDRAIL_STATES` when set.
    pub fn from_env() -> Self {
        let mut l = Self::default();
        if let Some(v) = std::env::var(GUARDRAIL_ENV).ok().and_then(|s| s.trim().parse::<u128>().ok()) {
            l.one_pop_states = v;
            l.two_pop_states = v;
            l.measure_states = v;
        }
        l
    }
}
