//! Discrete simplex states, per-step costs and revision probabilities.
//!
//! Payoffs are evaluated on raw counts, `sum_j A_ij c_j`, and only divided by
//! `n` when a cost is reported. Basin membership therefore compares the
//! unnormalised sums, which keeps integer games exact.

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{OnePopGame, TwoPopGame};
use crate::limits::Limits;

/// `C(n, k)` as u128, saturating on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of states of one population of size `n` over `k` strategies.
pub fn simplex_size(n: u32, k: usize) -> u128 {
    binomial(n as u64 + k as u64 - 1, k as u64 - 1)
}

/// Every state of one population, in rank order.
pub fn simplex_states(k: usize, n: u32) -> Vec<PopState> {
    (0..simplex_size(n, k)).map(|r| PopState::unrank(k, n, r).expect("rank in range")).collect()
}

/// Integer count vector on the discrete simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PopState {
    counts: Vec<u32>,
}

impl PopState {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidState("need at least two strategies".into()));
        }
        if counts.iter().map(|&c| c as u64).sum::<u64>() == 0 {
            return Err(Error::InvalidState("population size must be at least 1".into()));
        }
        Ok(Self { counts })
    }

    /// Every agent plays `m`.
    pub fn convention(k: usize, n: u32, m: usize) -> Self {
        let mut counts = vec![0; k];
        counts[m] = n;
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn n(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn fractions(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// One agent switches from `from` to `to`.
    pub fn shifted(&self, from: usize, to: usize) -> Result<Self> {
        if from >= self.k() || to >= self.k() || from == to {
            return Err(Error::InfeasibleMove(format!("{} -> {}", from + 1, to + 1)));
        }
        if self.counts[from] == 0 {
            return Err(Error::InfeasibleMove(format!("{} -> {}: nobody plays {}", from + 1, to + 1, from + 1)));
        }
        let mut counts = self.counts.clone();
        counts[from] -= 1;
        counts[to] += 1;
        Ok(Self { counts })
    }

    /// Colexicographic rank among all states with the same `n` and `k`.
    pub fn rank(&self) -> u128 {
        let mut pos = 0u64;
        let mut r = 0u128;
        for (i, &c) in self.counts[..self.k() - 1].iter().enumerate() {
            pos += c as u64;
            // bar i+1 sits after all stars of strategies 0..=i and the i earlier bars
            r += binomial(pos + i as u64, i as u64 + 1);
        }
        r
    }

    /// Inverse of [`PopState::rank`].
    pub fn unrank(k: usize, n: u32, mut r: u128) -> Result<Self> {
        if r >= simplex_size(n, k) {
            return Err(Error::InvalidState(format!("rank {r} out of range")));
        }
        let mut bars = vec![0u64; k - 1];
        let mut hi = n as u64 + k as u64 - 2;
        for i in (1..k).rev() {
            let mut b = hi;
            while binomial(b, i as u64) > r {
                b -= 1;
            }
            r -= binomial(b, i as u64);
            bars[i - 1] = b;
            hi = b.saturating_sub(1);
        }
        let mut counts = vec![0u32; k];
        let mut prev: i64 = -1;
        for (i, &b) in bars.iter().enumerate() {
            counts[i] = (b as i64 - prev - 1) as u32;
            prev = b as i64;
        }
        counts[k - 1] = (n as i64 + k as i64 - 2 - prev) as u32;
        Ok(Self { counts })
    }
}

impl fmt::Display for PopState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        write!(f, "({})", parts.join(","))
    }
}

/// Joint state of the α and β populations (equal sizes).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoPopState {
    pub alpha: PopState,
    pub beta: PopState,
}

impl TwoPopState {
    pub fn new(alpha: PopState, beta: PopState) -> Result<Self> {
        if alpha.k() != beta.k() || alpha.n() != beta.n() {
            return Err(Error::InvalidState("alpha and beta must have equal size and strategy count".into()));
        }
        Ok(Self { alpha, beta })
    }

    pub fn n(&self) -> u32 {
        self.alpha.n()
    }
}

impl fmt::Display for TwoPopState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} | {}]", self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    Single,
    Alpha,
    Beta,
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Population::Single => "single",
            Population::Alpha => "alpha",
            Population::Beta => "beta",
        })
    }
}

/// One agent of `population` switches from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub population: Population,
    pub from: usize,
    pub to: usize,
}

impl Move {
    pub fn single(from: usize, to: usize) -> Self {
        Self { population: Population::Single, from, to }
    }

    pub fn alpha(from: usize, to: usize) -> Self {
        Self { population: Population::Alpha, from, to }
    }

    pub fn beta(from: usize, to: usize) -> Self {
        Self { population: Population::Beta, from, to }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.population {
            Population::Single => write!(f, "{}->{}", self.from + 1, self.to + 1),
            p => write!(f, "{p}:{}->{}", self.from + 1, self.to + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostRule {
    LogitUnintentional,
    LogitIntentionalTwoPop,
    Uniform,
    BetterReply,
}

impl fmt::Display for CostRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostRule::LogitUnintentional => "logit",
            CostRule::LogitIntentionalTwoPop => "intentional",
            CostRule::Uniform => "uniform",
            CostRule::BetterReply => "better",
        })
    }
}

/// Cost of an agent currently on `from` choosing `to` (which may equal `from`),
/// given the raw payoff sums of its population. `allowed` restricts the
/// intentional rule; `None` means unrestricted.
fn choice_cost(rule: CostRule, raw: &[f64], n: f64, from: usize, to: usize, allowed: Option<&[bool]>) -> f64 {
    let best = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    match rule {
        CostRule::LogitUnintentional => (best - raw[to]) / n,
        CostRule::LogitIntentionalTwoPop => match allowed {
            Some(ok) if !ok[to] => f64::INFINITY,
            _ => (best - raw[to]) / n,
        },
        CostRule::Uniform => {
            if raw[to] == best {
                0.0
            } else {
                1.0
            }
        }
        CostRule::BetterReply => ((raw[from] - raw[to]) / n).max(0.0),
    }
}

/// Log-softmax of `-beta * cost` over the choices; infinite costs get `-inf`.
fn log_kernel(costs: &[f64], beta: f64) -> Vec<f64> {
    let lo = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let e = costs
        .iter()
        .map(|&c| if c.is_finite() { -beta * (c - lo) } else { f64::NEG_INFINITY })
        .collect::<Vec<_>>();
    let z = e.iter().map(|v| v.exp()).sum::<f64>().ln();
    e.into_iter().map(|v| v - z).collect()
}

fn best_set(raw: &[f64]) -> Vec<usize> {
    let best = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..raw.len()).filter(|&l| raw[l] == best).collect()
}

/// Operations the path searches and chain solvers need from a game.
pub trait PopulationGame: Sync {
    type State: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Send + Sync;

    fn strategies(&self) -> usize;

    /// The monomorphic state at `m`; fails unless `m` is a strict Nash equilibrium.
    fn convention(&self, n: u32, m: usize) -> Result<Self::State>;

    fn size(&self, x: &Self::State) -> u32;

    /// Feasible moves in increasing (population, from, to) order.
    fn moves(&self, x: &Self::State) -> Vec<Move>;

    fn apply(&self, x: &Self::State, mv: Move) -> Result<Self::State>;

    /// The single move leading from `x` to `y`, if any.
    fn move_between(&self, x: &Self::State, y: &Self::State) -> Option<Move>;

    fn step_cost(&self, rule: CostRule, x: &Self::State, mv: Move) -> Result<f64>;

    /// Weak basin membership: `m` is a best response for everyone involved.
    fn in_basin(&self, x: &Self::State, m: usize) -> bool;

    fn check_rule(&self, rule: CostRule) -> Result<()>;

    /// Rule check that may also depend on the convention being left.
    fn check_rule_at(&self, rule: CostRule, _m: usize) -> Result<()> {
        self.check_rule(rule)
    }

    /// Cap on states a search may touch.
    fn search_cap(&self, limits: &Limits) -> u128;

    /// Total number of states at size `n`.
    fn state_count(&self, n: u32) -> u128;

    /// Every state at size `n`, in rank order.
    fn states(&self, n: u32) -> Vec<Self::State>;

    /// Dense index of a state among [`PopulationGame::states`].
    fn index(&self, x: &Self::State) -> usize;

    /// Natural-log probabilities of every non-trivial transition out of `x`.
    fn transitions(&self, rule: CostRule, x: &Self::State, beta: f64) -> Result<Vec<(Move, Self::State, f64)>>;
}

impl OnePopGame {
    /// `sum_j A_ij c_j`.
    #[inline]
    pub fn raw_payoff(&self, i: usize, x: &PopState) -> f64 {
        (0..self.k()).map(|j| self.a(i, j) * x.counts[j] as f64).sum()
    }

    pub fn raw_payoffs(&self, x: &PopState) -> Vec<f64> {
        (0..self.k()).map(|i| self.raw_payoff(i, x)).collect()
    }

    /// Expected payoff `pi(i, x)`.
    pub fn payoff(&self, i: usize, x: &PopState) -> f64 {
        self.raw_payoff(i, x) / x.n() as f64
    }

    fn check_state(&self, x: &PopState) -> Result<()> {
        if x.k() != self.k() {
            return Err(Error::InvalidState(format!("state has {} strategies, game has {}", x.k(), self.k())));
        }
        Ok(())
    }
}

impl PopulationGame for OnePopGame {
    type State = PopState;

    fn strategies(&self) -> usize {
        self.k()
    }

    fn convention(&self, n: u32, m: usize) -> Result<PopState> {
        if m >= self.k() {
            return Err(Error::OutOfRange { index: m + 1, max: self.k() });
        }
        if !self.is_strict_nash(m) {
            return Err(Error::NotStrictNash(m + 1));
        }
        if n == 0 {
            return Err(Error::InvalidState("population size must be at least 1".into()));
        }
        Ok(PopState::convention(self.k(), n, m))
    }

    fn size(&self, x: &PopState) -> u32 {
        x.n()
    }

    fn moves(&self, x: &PopState) -> Vec<Move> {
        let k = self.k();
        let mut out = Vec::with_capacity(k * (k - 1));
        for i in (0..k).filter(|&i| x.counts[i] > 0) {
            for j in (0..k).filter(|&j| j != i) {
                out.push(Move::single(i, j));
            }
        }
        out
    }

    fn apply(&self, x: &PopState, mv: Move) -> Result<PopState> {
        if mv.population != Population::Single {
            return Err(Error::InfeasibleMove(format!("{mv} in a one-population game")));
        }
        x.shifted(mv.from, mv.to)
    }

    fn move_between(&self, x: &PopState, y: &PopState) -> Option<Move> {
        diff_move(x, y).map(|(i, j)| Move::single(i, j))
    }

    fn step_cost(&self, rule: CostRule, x: &PopState, mv: Move) -> Result<f64> {
        self.check_rule(rule)?;
        self.check_state(x)?;
        if mv.population != Population::Single || mv.from == mv.to || mv.to >= self.k() || mv.from >= self.k() {
            return Err(Error::InfeasibleMove(mv.to_string()));
        }
        if x.counts[mv.from] == 0 {
            return Err(Error::InfeasibleMove(format!("{mv} at {x}")));
        }
        let raw = self.raw_payoffs(x);
        Ok(choice_cost(rule, &raw, x.n() as f64, mv.from, mv.to, None))
    }

    fn in_basin(&self, x: &PopState, m: usize) -> bool {
        let pm = self.raw_payoff(m, x);
        (0..self.k()).all(|l| self.raw_payoff(l, x) <= pm)
    }

    fn check_rule(&self, rule: CostRule) -> Result<()> {
        if rule == CostRule::LogitIntentionalTwoPop {
            return Err(Error::UnsupportedRule {
                rule: rule.to_string(),
                reason: "the intentional rule needs two populations".into(),
            });
        }
        Ok(())
    }

    fn search_cap(&self, limits: &Limits) -> u128 {
        limits.one_pop_states
    }

    fn state_count(&self, n: u32) -> u128 {
        simplex_size(n, self.k())
    }

    fn states(&self, n: u32) -> Vec<PopState> {
        simplex_states(self.k(), n)
    }

    fn index(&self, x: &PopState) -> usize {
        x.rank() as usize
    }

    fn transitions(&self, rule: CostRule, x: &PopState, beta: f64) -> Result<Vec<(Move, PopState, f64)>> {
        self.check_rule(rule)?;
        let k = self.k();
        let n = x.n() as f64;
        let raw = self.raw_payoffs(x);
        let mut out = Vec::new();
        for i in (0..k).filter(|&i| x.counts[i] > 0) {
            let costs = (0..k).map(|l| choice_cost(rule, &raw, n, i, l, None)).collect::<Vec<_>>();
            let p = log_kernel(&costs, beta);
            let pick = (x.counts[i] as f64 / n).ln();
            for j in (0..k).filter(|&j| j != i && p[j].is_finite()) {
                out.push((Move::single(i, j), x.shifted(i, j)?, pick + p[j]));
            }
        }
        Ok(out)
    }
}

fn diff_move(x: &PopState, y: &PopState) -> Option<(usize, usize)> {
    if x.k() != y.k() {
        return None;
    }
    let (mut from, mut to) = (None, None);
    for i in 0..x.k() {
        match y.counts[i] as i64 - x.counts[i] as i64 {
            0 => {}
            -1 if from.is_none() => from = Some(i),
            1 if to.is_none() => to = Some(i),
            _ => return None,
        }
    }
    Some((from?, to?))
}

impl TwoPopGame {
    /// `sum_j A^α_ij c_β(j)`: raw payoff of an α agent on `i`.
    #[inline]
    pub fn raw_payoff_alpha(&self, i: usize, beta_counts: &PopState) -> f64 {
        (0..self.k()).map(|j| self.alpha(i, j) * beta_counts.counts()[j] as f64).sum()
    }

    /// `sum_i c_α(i) A^β_ij`: raw payoff of a β agent on `j`.
    #[inline]
    pub fn raw_payoff_beta(&self, j: usize, alpha_counts: &PopState) -> f64 {
        (0..self.k()).map(|i| alpha_counts.counts()[i] as f64 * self.beta(i, j)).sum()
    }

    pub fn payoff_alpha(&self, i: usize, x_beta: &PopState) -> f64 {
        self.raw_payoff_alpha(i, x_beta) / x_beta.n() as f64
    }

    pub fn payoff_beta(&self, j: usize, x_alpha: &PopState) -> f64 {
        self.raw_payoff_beta(j, x_alpha) / x_alpha.n() as f64
    }

    /// Raw payoffs of every strategy for the population making the move.
    fn raw_for(&self, pop: Population, x: &TwoPopState) -> Vec<f64> {
        match pop {
            Population::Alpha => (0..self.k()).map(|i| self.raw_payoff_alpha(i, &x.beta)).collect(),
            _ => (0..self.k()).map(|j| self.raw_payoff_beta(j, &x.alpha)).collect(),
        }
    }

    /// Strategies an agent of `pop` may choose under the intentional rule at `x`:
    /// those whose convention payoff is at least that of some current best response.
    pub fn permissible(&self, pop: Population, x: &TwoPopState) -> Vec<bool> {
        let raw = self.raw_for(pop, x);
        let diag = |l: usize| match pop {
            Population::Alpha => self.alpha(l, l),
            _ => self.beta(l, l),
        };
        let floor = best_set(&raw).into_iter().map(diag).fold(f64::INFINITY, f64::min);
        (0..self.k()).map(|l| diag(l) >= floor).collect()
    }

    fn side<'a>(&self, x: &'a TwoPopState, pop: Population) -> &'a PopState {
        match pop {
            Population::Alpha => &x.alpha,
            _ => &x.beta,
        }
    }
}

impl PopulationGame for TwoPopGame {
    type State = TwoPopState;

    fn strategies(&self) -> usize {
        self.k()
    }

    fn convention(&self, n: u32, m: usize) -> Result<TwoPopState> {
        if m >= self.k() {
            return Err(Error::OutOfRange { index: m + 1, max: self.k() });
        }
        if !self.is_strict_nash(m) {
            return Err(Error::NotStrictNash(m + 1));
        }
        if n == 0 {
            return Err(Error::InvalidState("population size must be at least 1".into()));
        }
        let e = PopState::convention(self.k(), n, m);
        Ok(TwoPopState { alpha: e.clone(), beta: e })
    }

    fn size(&self, x: &TwoPopState) -> u32 {
        x.n()
    }

    fn moves(&self, x: &TwoPopState) -> Vec<Move> {
        let k = self.k();
        let mut out = Vec::with_capacity(2 * k * (k - 1));
        for (pop, s) in [(Population::Alpha, &x.alpha), (Population::Beta, &x.beta)] {
            for i in (0..k).filter(|&i| s.counts[i] > 0) {
                for j in (0..k).filter(|&j| j != i) {
                    out.push(Move { population: pop, from: i, to: j });
                }
            }
        }
        out
    }

    fn apply(&self, x: &TwoPopState, mv: Move) -> Result<TwoPopState> {
        match mv.population {
            Population::Alpha => Ok(TwoPopState { alpha: x.alpha.shifted(mv.from, mv.to)?, beta: x.beta.clone() }),
            Population::Beta => Ok(TwoPopState { alpha: x.alpha.clone(), beta: x.beta.shifted(mv.from, mv.to)? }),
            Population::Single => Err(Error::InfeasibleMove(format!("{mv} in a two-population game"))),
        }
    }

    fn move_between(&self, x: &TwoPopState, y: &TwoPopState) -> Option<Move> {
        if x.alpha == y.alpha {
            diff_move(&x.beta, &y.beta).map(|(i, j)| Move::beta(i, j))
        } else if x.beta == y.beta {
            diff_move(&x.alpha, &y.alpha).map(|(i, j)| Move::alpha(i, j))
        } else {
            None
        }
    }

    fn step_cost(&self, rule: CostRule, x: &TwoPopState, mv: Move) -> Result<f64> {
        self.check_rule(rule)?;
        if mv.population == Population::Single || mv.from == mv.to || mv.from >= self.k() || mv.to >= self.k() {
            return Err(Error::InfeasibleMove(mv.to_string()));
        }
        if self.side(x, mv.population).counts[mv.from] == 0 {
            return Err(Error::InfeasibleMove(format!("{mv} at {x}")));
        }
        let raw = self.raw_for(mv.population, x);
        let allowed = (rule == CostRule::LogitIntentionalTwoPop).then(|| self.permissible(mv.population, x));
        Ok(choice_cost(rule, &raw, x.n() as f64, mv.from, mv.to, allowed.as_deref()))
    }

    fn in_basin(&self, x: &TwoPopState, m: usize) -> bool {
        let ra = self.raw_for(Population::Alpha, x);
        let rb = self.raw_for(Population::Beta, x);
        ra.iter().all(|&v| v <= ra[m]) && rb.iter().all(|&v| v <= rb[m])
    }

    fn check_rule(&self, _rule: CostRule) -> Result<()> {
        Ok(())
    }

    fn check_rule_at(&self, rule: CostRule, m: usize) -> Result<()> {
        if rule == CostRule::LogitIntentionalTwoPop && !self.conflict_of_interest(m) {
            return Err(Error::UnsupportedRule {
                rule: rule.to_string(),
                reason: format!("no conflict of interest at convention {}", m + 1),
            });
        }
        Ok(())
    }

    fn search_cap(&self, limits: &Limits) -> u128 {
        limits.two_pop_states
    }

    fn state_count(&self, n: u32) -> u128 {
        let s = simplex_size(n, self.k());
        s.saturating_mul(s)
    }

    fn states(&self, n: u32) -> Vec<TwoPopState> {
        let side = simplex_states(self.k(), n);
        let mut out = Vec::with_capacity(side.len() * side.len());
        for a in &side {
            for b in &side {
                out.push(TwoPopState { alpha: a.clone(), beta: b.clone() });
            }
        }
        out
    }

    fn index(&self, x: &TwoPopState) -> usize {
        let s = simplex_size(x.n(), self.k());
        (x.alpha.rank() * s + x.beta.rank()) as usize
    }

    fn transitions(&self, rule: CostRule, x: &TwoPopState, beta: f64) -> Result<Vec<(Move, TwoPopState, f64)>> {
        let k = self.k();
        let n = x.n() as f64;
        let mut out = Vec::new();
        for pop in [Population::Alpha, Population::Beta] {
            let raw = self.raw_for(pop, x);
            let allowed = (rule == CostRule::LogitIntentionalTwoPop).then(|| self.permissible(pop, x));
            let side = self.side(x, pop);
            for i in (0..k).filter(|&i| side.counts[i] > 0) {
                let costs = (0..k)
                    .map(|l| choice_cost(rule, &raw, n, i, l, allowed.as_deref()))
                    .collect::<Vec<_>>();
                let p = log_kernel(&costs, beta);
                let pick = (0.5 * side.counts[i] as f64 / n).ln();
                for j in (0..k).filter(|&j| j != i && p[j].is_finite()) {
                    let mv = Move { population: pop, from: i, to: j };
                    out.push((mv, self.apply(x, mv)?, pick + p[j]));
                }
            }
        }
        Ok(out)
    }
}

/// `P(x, x')` for the single transition `mv`.
pub fn transition_probability<G: PopulationGame>(
    game: &G,
    rule: CostRule,
    x: &G::State,
    mv: Move,
    beta: f64,
) -> Result<f64> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Precondition(format!("beta must be finite and nonnegative, got {beta}")));
    }
    Ok(game
        .transitions(rule, x, beta)?
        .into_iter()
        .find(|(m, _, _)| *m == mv)
        .map(|(_, _, lp)| lp.exp())
        .unwrap_or(0.0))
}

/// All states of size `n` inside the basin of `m`.
pub fn basin<G: PopulationGame>(game: &G, n: u32, m: usize) -> Vec<G::State> {
    game.states(n).into_iter().filter(|x| game.in_basin(x, m)).collect()
}
