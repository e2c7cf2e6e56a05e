//! Minimum-cost escape from a convention: exact search, the reduced block-path
//! search, and the infinite-population closed forms.

use serde::Serialize;

use crate::chain::{CostRule, PopState, Population, PopulationGame, TwoPopState};
use crate::error::{Error, Result};
use crate::game::{OnePopGame, TwoPopGame};
use crate::limits::Limits;
use crate::path::{enumerate_block_paths_with, BlockSpec, Path};
use crate::search::least_cost;

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Oracle,
    Reduced,
    ClosedForm,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Oracle => "oracle",
            Provenance::Reduced => "reduced",
            Provenance::ClosedForm => "closed_form",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness<S> {
    Path(Path<S>),
    Blocks(BlockSpec),
    /// Closed forms carry no path; see `targets`.
    Limit,
}

/// Escape cost toward one target in the limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetCost {
    pub target: usize,
    pub cost: f64,
    /// Population whose mistakes carry the escape (two populations only).
    pub driving: Option<Population>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EscapeResult<S> {
    /// Population size, `None` for the infinite-population limit.
    pub n: Option<u32>,
    pub convention: usize,
    pub rule: CostRule,
    pub cost: f64,
    /// `cost / n`, or the limit value itself.
    pub normalized: f64,
    pub provenance: Provenance,
    pub witness: Witness<S>,
    /// Minimising targets (limit only).
    pub argmin: Vec<usize>,
    pub driving: Option<Population>,
    /// Per-target limit costs (limit only).
    pub targets: Vec<TargetCost>,
}

impl<S> EscapeResult<S> {
    pub fn path(&self) -> Option<&Path<S>> {
        match &self.witness {
            Witness::Path(p) => Some(p),
            _ => None,
        }
    }
}

/// Exact minimum escape cost from `e_m` by Dijkstra over the basin.
pub fn exit_bruteforce<G: PopulationGame>(game: &G, n: u32, m: usize, rule: CostRule) -> Result<EscapeResult<G::State>> {
    exit_bruteforce_with(game, n, m, rule, &Limits::default())
}

pub fn exit_bruteforce_with<G: PopulationGame>(
    game: &G,
    n: u32,
    m: usize,
    rule: CostRule,
    limits: &Limits,
) -> Result<EscapeResult<G::State>> {
    game.check_rule_at(rule, m)?;
    let start = game.convention(n, m)?;
    let out = least_cost(
        game,
        rule,
        start,
        |x| game.in_basin(x, m),
        |x| !game.in_basin(x, m),
        game.search_cap(limits),
        "exit search",
    )?;
    let path = Path::from_states(game, out.states)?.costed(game, rule)?;
    Ok(EscapeResult {
        n: Some(n),
        convention: m,
        rule,
        cost: out.cost,
        normalized: out.cost / n as f64,
        provenance: Provenance::Oracle,
        witness: Witness::Path(path),
        argmin: Vec::new(),
        driving: None,
        targets: Vec::new(),
    })
}

/// Minimum over block paths only; equal to the exact minimum under the bandwagon
/// property.
pub fn exit_reduced(game: &OnePopGame, n: u32, m: usize) -> Result<EscapeResult<PopState>> {
    exit_reduced_with(game, n, m, &Limits::default())
}

pub fn exit_reduced_with(game: &OnePopGame, n: u32, m: usize, limits: &Limits) -> Result<EscapeResult<PopState>> {
    let rule = CostRule::LogitUnintentional;
    let mut best: Option<(f64, BlockSpec)> = None;
    for spec in enumerate_block_paths_with(game, n, m, limits)? {
        let c = spec.to_path(game, n, m)?.cost(game, rule)?;
        if best.as_ref().map_or(true, |(bc, _)| c < *bc) {
            best = Some((c, spec));
        }
    }
    let (cost, spec) = best.ok_or_else(|| Error::Numerical("no block path leaves the basin".into()))?;
    Ok(EscapeResult {
        n: Some(n),
        convention: m,
        rule,
        cost,
        normalized: cost / n as f64,
        provenance: Provenance::Reduced,
        witness: Witness::Blocks(spec),
        argmin: Vec::new(),
        driving: None,
        targets: Vec::new(),
    })
}

fn positive_gap(v: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Precondition(what()))
    }
}

/// Limit escape cost from `m` straight toward `j` in one population.
///
/// Logit: `(A_mm - A_jm)^2 / (2 ((A_mm - A_jm) + (A_jj - A_mj)))`.
/// Uniform: the threshold share `(A_mm - A_jm) / ((A_mm - A_jm) + (A_jj - A_mj))`.
pub fn pair_radius_one_pop(game: &OnePopGame, m: usize, j: usize, rule: CostRule) -> Result<f64> {
    let g1 = positive_gap(game.a(m, m) - game.a(j, m), || format!("A[{0}][{0}] must exceed A[{1}][{0}]", m + 1, j + 1))?;
    let g2 = positive_gap(game.a(j, j) - game.a(m, j), || format!("A[{0}][{0}] must exceed A[{1}][{0}]", j + 1, m + 1))?;
    match rule {
        CostRule::LogitUnintentional => Ok(0.5 * g1 * g1 / (g1 + g2)),
        CostRule::Uniform => Ok(g1 / (g1 + g2)),
        r => Err(Error::UnsupportedRule {
            rule: r.to_string(),
            reason: "no one-population limit formula for this rule".into(),
        }),
    }
}

fn argmins(targets: &[TargetCost]) -> (f64, Vec<usize>) {
    let best = targets.iter().map(|t| t.cost).fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * best.abs().max(1.0);
    (best, targets.iter().filter(|t| t.cost <= best + tol).map(|t| t.target).collect())
}

/// Infinite-population escape cost from `e_m`.
pub fn exit_limit_one_pop(game: &OnePopGame, m: usize, rule: CostRule) -> Result<EscapeResult<PopState>> {
    if !game.is_strict_nash(m) {
        return Err(Error::NotStrictNash(m + 1));
    }
    let targets = (0..game.k())
        .filter(|&j| j != m)
        .map(|j| Ok(TargetCost { target: j, cost: pair_radius_one_pop(game, m, j, rule)?, driving: None }))
        .collect::<Result<Vec<_>>>()?;
    let (best, argmin) = argmins(&targets);
    Ok(EscapeResult {
        n: None,
        convention: m,
        rule,
        cost: best,
        normalized: best,
        provenance: Provenance::ClosedForm,
        witness: Witness::Limit,
        argmin,
        driving: None,
        targets,
    })
}

/// Share of β on `j` at which α is indifferent between `m` and `j`.
pub fn zeta_alpha(game: &TwoPopGame, m: usize, j: usize) -> f64 {
    let a = game.alpha(m, m) - game.alpha(j, m);
    a / (a + (game.alpha(j, j) - game.alpha(m, j)))
}

/// Share of α on `j` at which β is indifferent between `m` and `j`.
pub fn zeta_beta(game: &TwoPopGame, m: usize, j: usize) -> f64 {
    let b = game.beta(m, m) - game.beta(m, j);
    b / (b + (game.beta(j, j) - game.beta(j, m)))
}

/// Cost of the escape toward `j` carried by β mistakes, and by α mistakes.
pub fn driven_costs(game: &TwoPopGame, m: usize, j: usize) -> (f64, f64) {
    let by_beta = (game.beta(m, m) - game.beta(m, j)) * zeta_alpha(game, m, j);
    let by_alpha = (game.alpha(m, m) - game.alpha(j, m)) * zeta_beta(game, m, j);
    (by_beta, by_alpha)
}

/// Limit escape cost from `m` toward `j` with two populations, and the population
/// whose mistakes carry it (`None` on an exact tie).
pub fn pair_radius_two_pop(game: &TwoPopGame, m: usize, j: usize, rule: CostRule) -> Result<(f64, Option<Population>)> {
    if m == j || m >= game.k() || j >= game.k() {
        return Err(Error::Precondition("need distinct strategies in range".into()));
    }
    if !game.is_strict_nash(m) || !game.is_strict_nash(j) {
        return Err(Error::Precondition(format!("strategies {} and {} must both be strict equilibria", m + 1, j + 1)));
    }
    let (by_beta, by_alpha) = driven_costs(game, m, j);
    match rule {
        CostRule::LogitUnintentional => Ok(if by_beta < by_alpha {
            (by_beta, Some(Population::Beta))
        } else if by_alpha < by_beta {
            (by_alpha, Some(Population::Alpha))
        } else {
            (by_alpha, None)
        }),
        CostRule::LogitIntentionalTwoPop => {
            game.check_rule_at(rule, m)?;
            if game.improving_alpha(m).contains(&j) {
                Ok((by_alpha, Some(Population::Alpha)))
            } else {
                Ok((by_beta, Some(Population::Beta)))
            }
        }
        r => Err(Error::UnsupportedRule {
            rule: r.to_string(),
            reason: "no two-population limit formula for this rule".into(),
        }),
    }
}

/// Infinite-population escape cost from convention `m` with two populations.
pub fn exit_limit_two_pop(game: &TwoPopGame, m: usize, rule: CostRule) -> Result<EscapeResult<TwoPopState>> {
    if !game.is_strict_nash(m) {
        return Err(Error::NotStrictNash(m + 1));
    }
    let targets = (0..game.k())
        .filter(|&j| j != m)
        .map(|j| {
            let (cost, driving) = pair_radius_two_pop(game, m, j, rule)?;
            Ok(TargetCost { target: j, cost, driving })
        })
        .collect::<Result<Vec<_>>>()?;
    let (best, argmin) = argmins(&targets);
    let driving = targets.iter().find(|t| t.target == argmin[0]).and_then(|t| t.driving);
    Ok(EscapeResult {
        n: None,
        convention: m,
        rule,
        cost: best,
        normalized: best,
        provenance: Provenance::ClosedForm,
        witness: Witness::Limit,
        argmin,
        driving,
        targets,
    })
}
