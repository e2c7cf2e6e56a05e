//! Stochastic stability: radius and transition-cost matrices, the maxmin
//! sufficient tests, minimum in-trees and exact invariant measures.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{CostRule, PopulationGame};
use crate::error::{Error, Result};
use crate::exit::{pair_radius_one_pop, pair_radius_two_pop, Provenance};
use crate::game::Game;
use crate::limits::Limits;
use crate::search::least_cost;

/// Differences at or below this are treated as ties.
pub const NEAR_TIE: f64 = 1e-9;
const MAX_CYCLES: usize = 10_000;
const EXHAUSTIVE_MAX: usize = 9;
const DENSE_MAX: usize = 2000;
const POWER_RESIDUAL: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 1_000_000;

/// Square matrix of pairwise costs with an unset diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostMatrix {
    k: usize,
    values: Vec<f64>,
    provenance: Vec<Option<Provenance>>,
}

/// Infinite-population escape costs between conventions.
pub type RadiusMatrix = CostMatrix;

impl CostMatrix {
    pub fn new(k: usize) -> Self {
        Self { k, values: vec![f64::NAN; k * k], provenance: vec![None; k * k] }
    }

    /// Builds a complete matrix from rows; diagonal entries are ignored.
    pub fn from_rows(rows: &[Vec<f64>], provenance: Provenance) -> Result<Self> {
        let k = rows.len();
        let mut m = Self::new(k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Dimension(format!("row {} has {} entries, expected {k}", i + 1, row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if i != j {
                    m.set(i, j, v, provenance)?;
                }
            }
        }
        Ok(m)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64, provenance: Provenance) -> Result<()> {
        if i == j || i >= self.k || j >= self.k {
            return Err(Error::OutOfRange { index: i.max(j), max: self.k });
        }
        if v.is_nan() || v < 0.0 {
            return Err(Error::NonFinite { row: i, col: j });
        }
        self.values[i * self.k + j] = v;
        self.provenance[i * self.k + j] = Some(provenance);
        Ok(())
    }

    /// Entry `(i, j)`; NaN on the diagonal or when unset.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k + j]
    }

    pub fn provenance(&self, i: usize, j: usize) -> Option<Provenance> {
        self.provenance[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<Option<f64>>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| (i != j).then(|| self.get(i, j))).collect())
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        (0..self.k).all(|i| (0..self.k).all(|j| i == j || !self.get(i, j).is_nan()))
    }

    /// `min_{j != i} M_ij`.
    pub fn radius(&self, i: usize) -> f64 {
        (0..self.k).filter(|&j| j != i).map(|j| self.get(i, j)).fold(f64::INFINITY, f64::min)
    }

    fn require_complete(&self) -> Result<()> {
        if self.k < 2 || !self.is_complete() {
            return Err(Error::Precondition("need a complete off-diagonal matrix with at least two rows".into()));
        }
        Ok(())
    }
}

/// Closed-form escape cost for every ordered pair of conventions.
pub fn radius_matrix(game: &Game, rule: CostRule) -> Result<RadiusMatrix> {
    let k = match game {
        Game::One(g) => g.k(),
        Game::Two(g) => g.k(),
    };
    let mut out = CostMatrix::new(k);
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            let v = match game {
                Game::One(g) => pair_radius_one_pop(g, i, j, rule)?,
                Game::Two(g) => pair_radius_two_pop(g, i, j, rule)?.0,
            };
            out.set(i, j, v, Provenance::ClosedForm)?;
        }
    }
    Ok(out)
}

/// Exact least cost of reaching the basin of `j` from convention `i` at size `n`.
pub fn transition_cost_bruteforce<G: PopulationGame>(game: &G, n: u32, i: usize, j: usize, rule: CostRule) -> Result<f64> {
    transition_cost_bruteforce_with(game, n, i, j, rule, &Limits::default())
}

pub fn transition_cost_bruteforce_with<G: PopulationGame>(
    game: &G,
    n: u32,
    i: usize,
    j: usize,
    rule: CostRule,
    limits: &Limits,
) -> Result<f64> {
    if i == j || j >= game.strategies() {
        return Err(Error::Precondition(format!("need two distinct conventions, got {} and {}", i + 1, j + 1)));
    }
    game.check_rule_at(rule, i)?;
    let start = game.convention(n, i)?;
    let out = least_cost(
        game,
        rule,
        start,
        |_| true,
        |x| game.in_basin(x, j),
        game.search_cap(limits),
        &format!("transition search {} -> {} at n = {n}", i + 1, j + 1),
    )?;
    Ok(out.cost)
}

/// `C^(n)_ij / n` for every ordered pair, searched in parallel.
pub fn cost_matrix_bruteforce<G: PopulationGame>(game: &G, n: u32, rule: CostRule, limits: &Limits) -> Result<CostMatrix> {
    let k = game.strategies();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let costs = pairs
        .par_iter()
        .map(|&(i, j)| transition_cost_bruteforce_with(game, n, i, j, rule, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut out = CostMatrix::new(k);
    for (&(i, j), c) in pairs.iter().zip(costs) {
        out.set(i, j, c / n as f64, Provenance::Oracle)?;
    }
    Ok(out)
}

/// Row `i` is true exactly at the (near-)minimizers of `M_il`, `l != i`.
pub fn incidence(matrix: &CostMatrix) -> Vec<Vec<bool>> {
    (0..matrix.k())
        .map(|i| {
            let lo = matrix.radius(i);
            (0..matrix.k()).map(|j| j != i && matrix.get(i, j) - lo <= NEAR_TIE).collect()
        })
        .collect()
}

/// Simple cycles of the graph `i -> j` for `inc[i][j]`, each listed from its
/// smallest node. Enumeration stops after 10 000 cycles.
pub fn cycles(inc: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn walk(inc: &[Vec<bool>], start: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let u = *path.last().expect("nonempty");
        for v in 0..inc.len() {
            if out.len() >= MAX_CYCLES {
                return;
            }
            if !inc[u][v] || v < start {
                continue;
            }
            if v == start {
                out.push(path.clone());
            } else if !on[v] {
                on[v] = true;
                path.push(v);
                walk(inc, start, path, on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; inc.len()];
    for s in 0..inc.len() {
        on[s] = true;
        walk(inc, s, &mut vec![s], &mut on, &mut out);
        on[s] = false;
    }
    debug_assert!(inc.len() < 2 || inc.iter().any(|r| !r.iter().any(|&b| b)) || !out.is_empty());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArborescenceMode {
    Edmonds,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArborescenceResult {
    /// Minimum in-tree cost for each root.
    pub costs: Vec<f64>,
    /// Roots attaining the minimum.
    pub roots: Vec<usize>,
}

/// Minimum-cost out-arborescence of `root` over edges `(u, v, w)` (Chu-Liu/Edmonds).
fn edmonds(mut n: usize, mut root: usize, mut edges: Vec<(usize, usize, f64)>) -> Option<f64> {
    let mut total = 0.0;
    loop {
        let mut best = vec![f64::INFINITY; n];
        let mut pre = vec![usize::MAX; n];
        for &(u, v, w) in &edges {
            if u != v && w < best[v] {
                best[v] = w;
                pre[v] = u;
            }
        }
        if (0..n).any(|v| v != root && !best[v].is_finite()) {
            return None;
        }
        best[root] = 0.0;
        let mut id = vec![usize::MAX; n];
        let mut seen = vec![usize::MAX; n];
        let mut count = 0;
        for v in 0..n {
            total += best[v];
            let mut u = v;
            while seen[u] != v && id[u] == usize::MAX && u != root {
                seen[u] = v;
                u = pre[u];
            }
            if u != root && id[u] == usize::MAX {
                let mut x = pre[u];
                while x != u {
                    id[x] = count;
                    x = pre[x];
                }
                id[u] = count;
                count += 1;
            }
        }
        if count == 0 {
            return Some(total);
        }
        for v in 0..n {
            if id[v] == usize::MAX {
                id[v] = count;
                count += 1;
            }
        }
        edges = edges
            .into_iter()
            .filter(|&(u, v, _)| id[u] != id[v])
            .map(|(u, v, w)| (id[u], id[v], w - best[v]))
            .collect();
        n = count;
        root = id[root];
    }
}

fn exhaustive_tree(m: &CostMatrix, root: usize) -> f64 {
    let k = m.k();
    let others: Vec<usize> = (0..k).filter(|&v| v != root).collect();
    // parent choice for each non-root node, as an index into the other k - 1 nodes
    let mut digits = vec![0usize; others.len()];
    let parent_of = |v: usize, d: usize| if d < v { d } else { d + 1 };
    let mut best = f64::INFINITY;
    loop {
        let mut parent = vec![usize::MAX; k];
        for (slot, &v) in others.iter().enumerate() {
            parent[v] = parent_of(v, digits[slot]);
        }
        let reaches = others.iter().all(|&v| {
            let mut u = v;
            for _ in 0..k {
                if u == root {
                    return true;
                }
                u = parent[u];
            }
            u == root
        });
        if reaches {
            let c: f64 = others.iter().map(|&v| m.get(v, parent[v])).sum();
            best = best.min(c);
        }
        let mut slot = 0;
        loop {
            if slot == digits.len() {
                return best;
            }
            digits[slot] += 1;
            if digits[slot] < k - 1 {
                break;
            }
            digits[slot] = 0;
            slot += 1;
        }
    }
}

/// Cost of the cheapest tree in which every convention has a directed path to
/// `root`, with `costs[i][j]` the cost of edge `i -> j`.
pub fn min_in_tree(costs: &CostMatrix, root: usize, mode: ArborescenceMode) -> Result<f64> {
    costs.require_complete()?;
    let k = costs.k();
    if root >= k {
        return Err(Error::OutOfRange { index: root, max: k });
    }
    match mode {
        ArborescenceMode::Exhaustive => {
            if k > EXHAUSTIVE_MAX {
                return Err(Error::Precondition(format!("exhaustive in-tree search refuses {k} > {EXHAUSTIVE_MAX} nodes")));
            }
            Ok(exhaustive_tree(costs, root))
        }
        ArborescenceMode::Edmonds => {
            // reverse every edge so the in-tree becomes an out-arborescence
            let edges = (0..k)
                .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (j, i)))
                .map(|(u, v)| (u, v, costs.get(v, u)))
                .collect();
            edmonds(k, root, edges).ok_or_else(|| Error::Numerical("no spanning in-tree".into()))
        }
    }
}

/// Roots whose minimum in-tree is cheapest.
pub fn arborescence_root(costs: &CostMatrix, mode: ArborescenceMode) -> Result<ArborescenceResult> {
    let all = (0..costs.k()).map(|r| min_in_tree(costs, r, mode)).collect::<Result<Vec<_>>>()?;
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    let roots = (0..all.len()).filter(|&r| all[r] - lo <= NEAR_TIE).collect();
    Ok(ArborescenceResult { costs: all, roots })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// `min_j R_ij` per convention.
    pub radii: Vec<f64>,
    /// Maximizers of the radius, within the near-tie tolerance.
    pub candidates: Vec<usize>,
    /// `max_{j} R_{j i*} < min_{j} R_{i* j}`.
    pub local_resistance: bool,
    /// The incidence graph has exactly one cycle and it passes through `i*`.
    pub unique_cycle: bool,
    pub cycles: Vec<Vec<usize>>,
    /// Set when one of the sufficient tests passes.
    pub stable: Option<usize>,
    pub arborescence: Option<ArborescenceResult>,
    pub measure_trace: Option<Vec<MeasurePoint>>,
}

impl StabilityReport {
    pub fn conclusive(&self) -> bool {
        self.stable.is_some()
    }
}

/// Sufficient stability tests on a radius (or normalized cost) matrix.
pub fn maxmin_report(matrix: &CostMatrix) -> Result<StabilityReport> {
    matrix.require_complete()?;
    let k = matrix.k();
    let radii: Vec<f64> = (0..k).map(|i| matrix.radius(i)).collect();
    let top = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let candidates: Vec<usize> = (0..k).filter(|&i| top - radii[i] <= NEAR_TIE).collect();
    let cyc = cycles(&incidence(matrix));
    let (mut local_resistance, mut unique_cycle) = (false, false);
    if let [star] = candidates[..] {
        let inflow = (0..k).filter(|&j| j != star).map(|j| matrix.get(j, star)).fold(f64::NEG_INFINITY, f64::max);
        local_resistance = inflow < radii[star] - NEAR_TIE;
        unique_cycle = cyc.len() == 1 && cyc[0].contains(&star);
    }
    let stable = (local_resistance || unique_cycle).then(|| candidates[0]);
    Ok(StabilityReport {
        radii,
        candidates,
        local_resistance,
        unique_cycle,
        cycles: cyc,
        stable,
        arborescence: None,
        measure_trace: None,
    })
}

/// Maxmin tests on the closed-form radius matrix.
pub fn maxmin_test(game: &Game, rule: CostRule) -> Result<StabilityReport> {
    maxmin_report(&radius_matrix(game, rule)?)
}

/// Maxmin tests, falling back to minimum in-trees of the brute-force `C^(n)/n`
/// when neither sufficient test passes.
pub fn maxmin_test_or_oracle(game: &Game, rule: CostRule, n: u32, limits: &Limits) -> Result<StabilityReport> {
    let mut report = maxmin_test(game, rule)?;
    if !report.conclusive() {
        let costs = match game {
            Game::One(g) => cost_matrix_bruteforce(g, n, rule, limits)?,
            Game::Two(g) => cost_matrix_bruteforce(g, n, rule, limits)?,
        };
        report.arborescence = Some(arborescence_root(&costs, ArborescenceMode::Edmonds)?);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Grassmann-Taksar-Heyman elimination in floating point.
    Gth,
    /// The same elimination on log-probabilities, used when weights underflow.
    GthLog,
    PowerIteration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure<S> {
    pub n: u32,
    pub beta: f64,
    pub rule: CostRule,
    /// States in index order.
    pub states: Vec<S>,
    pub probs: Vec<f64>,
    pub method: SolveMethod,
}

impl<S: PartialEq> Measure<S> {
    pub fn mass(&self, x: &S) -> f64 {
        self.states.iter().position(|s| s == x).map_or(0.0, |i| self.probs[i])
    }

    pub fn argmax(&self) -> &S {
        let i = (0..self.probs.len())
            .max_by(|&a, &b| self.probs[a].total_cmp(&self.probs[b]))
            .expect("nonempty measure");
        &self.states[i]
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

fn log_sum(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::NEG_INFINITY, log_add)
}

/// Below this a product of positive entries has lost precision or vanished.
const SAFE_MIN: f64 = 1e-280;

/// Product of nonnegative entries, `None` once a positive product leaves the normal range.
fn safe_mul(a: f64, b: f64) -> Option<f64> {
    checked(a * b, a == 0.0 || b == 0.0)
}

fn checked(v: f64, exact_zero: bool) -> Option<f64> {
    (v >= SAFE_MIN || v == 0.0 && exact_zero).then_some(v)
}

/// Stationary vector from off-diagonal rates; `None` when any intermediate underflows.
fn gth(mut p: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = p.len();
    for k in (1..n).rev() {
        let s: f64 = p[k][..k].iter().sum();
        if !s.is_normal() {
            return None;
        }
        for i in 0..k {
            p[i][k] = checked(p[i][k] / s, p[i][k] == 0.0)?;
        }
        for i in 0..k {
            let pik = p[i][k];
            if pik == 0.0 {
                continue;
            }
            let (head, tail) = p.split_at_mut(k);
            let row_k = &tail[0];
            for j in 0..k {
                if j != i {
                    head[i][j] += safe_mul(pik, row_k[j])?;
                }
            }
        }
    }
    let mut pi = vec![0.0; n];
    pi[0] = 1.0;
    for k in 1..n {
        pi[k] = (0..k).map(|i| safe_mul(pi[i], p[i][k])).sum::<Option<f64>>()?;
    }
    let z: f64 = pi.iter().sum();
    if !z.is_finite() || z <= 0.0 {
        return None;
    }
    Some(pi.into_iter().map(|v| v / z).collect())
}

fn gth_log(mut p: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = p.len();
    for k in (1..n).rev() {
        let s = log_sum(p[k][..k].iter().copied());
        if s == f64::NEG_INFINITY {
            return Err(Error::Numerical("singular stationary solve: the chain is reducible".into()));
        }
        for i in 0..k {
            p[i][k] -= s;
        }
        for i in 0..k {
            let pik = p[i][k];
            if pik == f64::NEG_INFINITY {
                continue;
            }
            let (head, tail) = p.split_at_mut(k);
            let row_k = &tail[0];
            for j in 0..k {
                if j != i {
                    head[i][j] = log_add(head[i][j], pik + row_k[j]);
                }
            }
        }
    }
    let mut lpi = vec![f64::NEG_INFINITY; n];
    lpi[0] = 0.0;
    for k in 1..n {
        lpi[k] = log_sum((0..k).map(|i| lpi[i] + p[i][k]));
    }
    let z = log_sum(lpi.iter().copied());
    Ok(lpi.into_iter().map(|v| (v - z).exp()).collect())
}

fn power(rows: &[Vec<(usize, f64)>]) -> Result<Vec<f64>> {
    let n = rows.len();
    let stay: Vec<f64> = rows.iter().map(|r| 1.0 - r.iter().map(|&(_, p)| p).sum::<f64>()).collect();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..POWER_MAX_ITERS {
        let mut next: Vec<f64> = pi.iter().zip(&stay).map(|(a, s)| a * s).collect();
        for (x, r) in rows.iter().enumerate() {
            for &(y, p) in r {
                next[y] += pi[x] * p;
            }
        }
        let z: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= z);
        let residual: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if residual <= POWER_RESIDUAL {
            return Ok(pi);
        }
    }
    Err(Error::Numerical(format!("power iteration did not reach residual {POWER_RESIDUAL}")))
}

/// Exact stationary distribution of the finite-β chain at size `n`.
pub fn invariant_measure<G: PopulationGame>(game: &G, n: u32, beta: f64, rule: CostRule) -> Result<Measure<G::State>> {
    invariant_measure_with(game, n, beta, rule, &Limits::default())
}

pub fn invariant_measure_with<G: PopulationGame>(
    game: &G,
    n: u32,
    beta: f64,
    rule: CostRule,
    limits: &Limits,
) -> Result<Measure<G::State>> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Precondition(format!("beta must be finite and nonnegative, got {beta}")));
    }
    if n == 0 {
        return Err(Error::Precondition("population size must be positive".into()));
    }
    game.check_rule(rule)?;
    let count = game.state_count(n);
    if count > limits.measure_states {
        return Err(Error::Guardrail {
            what: format!("invariant measure at n = {n}"),
            requested: count,
            limit: limits.measure_states,
            hint: "use a smaller n".into(),
        });
    }
    let mut states = game.states(n);
    states.sort_by_key(|x| game.index(x));
    let size = states.len();
    let rows = states
        .iter()
        .map(|x| {
            Ok(game
                .transitions(rule, x, beta)?
                .into_iter()
                .map(|(_, y, lp)| (game.index(&y), lp))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let (probs, method) = if size == 1 {
        (vec![1.0], SolveMethod::Gth)
    } else if size <= DENSE_MAX {
        let underflow = rows.iter().flatten().any(|&(_, lp)| !lp.exp().is_normal());
        let direct = if underflow {
            None
        } else {
            let mut dense = vec![vec![0.0; size]; size];
            for (x, r) in rows.iter().enumerate() {
                for &(y, lp) in r {
                    dense[x][y] += lp.exp();
                }
            }
            gth(dense)
        };
        match direct {
            Some(p) => (p, SolveMethod::Gth),
            None => {
                let mut dense = vec![vec![f64::NEG_INFINITY; size]; size];
                for (x, r) in rows.iter().enumerate() {
                    for &(y, lp) in r {
                        dense[x][y] = log_add(dense[x][y], lp);
                    }
                }
                (gth_log(dense)?, SolveMethod::GthLog)
            }
        }
    } else {
        let sparse: Vec<Vec<(usize, f64)>> = rows.iter().map(|r| r.iter().map(|&(y, lp)| (y, lp.exp())).collect()).collect();
        (power(&sparse)?, SolveMethod::PowerIteration)
    };
    Ok(Measure { n, beta, rule, states, probs, method })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurePoint {
    pub beta: f64,
    /// Mass at each convention state; `None` where the convention is not an equilibrium.
    pub masses: Vec<Option<f64>>,
    /// Convention holding the most mass among all states, if the argmax is one.
    pub argmax_convention: Option<usize>,
    pub method: SolveMethod,
}

fn measure_point<G: PopulationGame>(game: &G, n: u32, beta: f64, rule: CostRule, limits: &Limits) -> Result<MeasurePoint>
where
    G::State: PartialEq,
{
    let mu = invariant_measure_with(game, n, beta, rule, limits)?;
    let conventions: Vec<Option<G::State>> = (0..game.strategies()).map(|m| game.convention(n, m).ok()).collect();
    let masses = conventions.iter().map(|c| c.as_ref().map(|x| mu.mass(x))).collect();
    let top = mu.argmax();
    let argmax_convention = conventions.iter().position(|c| c.as_ref() == Some(top));
    Ok(MeasurePoint { beta, masses, argmax_convention, method: mu.method })
}

/// Convention masses of the invariant measure at each listed β.
pub fn measure_trace<G: PopulationGame>(game: &G, n: u32, rule: CostRule, betas: &[f64], limits: &Limits) -> Result<Vec<MeasurePoint>>
where
    G::State: PartialEq,
{
    betas.iter().map(|&b| measure_point(game, n, b, rule, limits)).collect()
}

/// Doubles β from `beta0` until convention `m` carries more than half the mass or
/// β would exceed `cap`.
pub fn doubling_ladder<G: PopulationGame>(
    game: &G,
    n: u32,
    rule: CostRule,
    m: usize,
    beta0: f64,
    cap: f64,
    limits: &Limits,
) -> Result<Vec<MeasurePoint>>
where
    G::State: PartialEq,
{
    if !(beta0 > 0.0) || beta0 > cap {
        return Err(Error::Precondition(format!("need 0 < beta0 <= cap, got {beta0} and {cap}")));
    }
    let mut out = Vec::new();
    let mut beta = beta0;
    while beta <= cap {
        let pt = measure_point(game, n, beta, rule, limits)?;
        let done = pt.masses.get(m).copied().flatten().is_some_and(|v| v > 0.5);
        out.push(pt);
        if done {
            break;
        }
        beta *= 2.0;
    }
    Ok(out)
}
