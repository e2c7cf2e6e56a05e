//! Coordination games, their structural conditions, and the example games.
//!
//! Strategies are indexed from 0 throughout the library. `A[i][j]` is the
//! payoff to an agent playing `i` against an opponent playing `j`; in the
//! two-population case α plays rows and β plays columns.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bargaining::Frontier;
use crate::error::{Error, Result};

/// Full power-set support enumeration is done up to this many strategies.
pub const FULL_SUPPORT_SCAN_MAX: usize = 8;

const DEGENERACY_RCOND: f64 = 1e-12;

fn check_square(rows: &[Vec<f64>], what: &str) -> Result<usize> {
    let k = rows.len();
    if k < 2 {
        return Err(Error::Dimension(format!("{what} needs at least 2 strategies, got {k}")));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != k {
            return Err(Error::Dimension(format!(
                "{what} row {} has {} entries, expected {k}",
                r + 1,
                row.len()
            )));
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: r, col: c });
        }
    }
    Ok(k)
}

fn flatten(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter().flatten().copied().collect()
}

fn unflatten(k: usize, data: &[f64]) -> Vec<Vec<f64>> {
    data.chunks(k).map(|r| r.to_vec()).collect()
}

/// A symmetric game played within a single population.
#[derive(Debug, Clone, PartialEq)]
pub struct OnePopGame {
    k: usize,
    a: Vec<f64>,
}

impl OnePopGame {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = check_square(&rows, "payoff matrix")?;
        Ok(Self { k, a: flatten(&rows) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        unflatten(self.k, &self.a)
    }

    /// `(A_ii - A_ji) - (A_ik - A_jk)`; positive on every distinct triple
    /// exactly when the game has the strict marginal bandwagon property.
    pub fn mbp_margin(&self, i: usize, j: usize, k: usize) -> f64 {
        (self.a(i, i) - self.a(j, i)) - (self.a(i, k) - self.a(j, k))
    }

    /// Cyclic skew `(A_ij - A_ji) + (A_jk - A_kj) + (A_ki - A_ik)`.
    pub fn skew(&self, i: usize, j: usize, k: usize) -> f64 {
        (self.a(i, j) - self.a(j, i)) + (self.a(j, k) - self.a(k, j)) + (self.a(k, i) - self.a(i, k))
    }

    /// Whether `m` is a strict Nash equilibrium.
    pub fn is_strict_nash(&self, m: usize) -> bool {
        m < self.k && (0..self.k).all(|j| j == m || self.a(m, m) > self.a(j, m))
    }
}

/// A bimatrix game between two populations α (rows) and β (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPopGame {
    k: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl TwoPopGame {
    pub fn new(alpha: Vec<Vec<f64>>, beta: Vec<Vec<f64>>) -> Result<Self> {
        let k = check_square(&alpha, "alpha matrix")?;
        let kb = check_square(&beta, "beta matrix")?;
        if k != kb {
            return Err(Error::Dimension(format!("alpha is {k}x{k} but beta is {kb}x{kb}")));
        }
        Ok(Self { k, alpha: flatten(&alpha), beta: flatten(&beta) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Payoff to an α agent playing `i` against a β agent playing `j`.
    #[inline]
    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        self.alpha[i * self.k + j]
    }

    /// Payoff to a β agent playing `j` against an α agent playing `i`.
    #[inline]
    pub fn beta(&self, i: usize, j: usize) -> f64 {
        self.beta[i * self.k + j]
    }

    pub fn alpha_rows(&self) -> Vec<Vec<f64>> {
        unflatten(self.k, &self.alpha)
    }

    pub fn beta_rows(&self) -> Vec<Vec<f64>> {
        unflatten(self.k, &self.beta)
    }

    pub fn is_strict_nash(&self, m: usize) -> bool {
        m < self.k
            && (0..self.k).all(|j| {
                j == m || (self.alpha(m, m) > self.alpha(j, m) && self.beta(m, m) > self.beta(m, j))
            })
    }

    /// `{l : A^α_ll >= A^α_mm}`.
    pub fn improving_alpha(&self, m: usize) -> Vec<usize> {
        (0..self.k).filter(|&l| self.alpha(l, l) >= self.alpha(m, m)).collect()
    }

    /// `{l : A^β_ll >= A^β_mm}`.
    pub fn improving_beta(&self, m: usize) -> Vec<usize> {
        (0..self.k).filter(|&l| self.beta(l, l) >= self.beta(m, m)).collect()
    }

    /// Whether the two improving sets partition the strategies, meeting only at `m`.
    pub fn conflict_of_interest(&self, m: usize) -> bool {
        let sa = self.improving_alpha(m);
        let sb = self.improving_beta(m);
        (0..self.k).all(|l| {
            let (ia, ib) = (sa.contains(&l), sb.contains(&l));
            if l == m {
                ia && ib
            } else {
                ia != ib
            }
        })
    }
}

/// Outcome of the indifference solve on one support.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportOutcome {
    Equilibrium { weights: Vec<f64> },
    Bimatrix { alpha: Vec<f64>, beta: Vec<f64> },
    Absent { reason: String },
}

impl SupportOutcome {
    pub fn is_equilibrium(&self) -> bool {
        !matches!(self, SupportOutcome::Absent { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportCheck {
    pub support: Vec<usize>,
    pub outcome: SupportOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub coordination: bool,
    /// Strict MBP for one population, weak WBP for two.
    pub bandwagon: bool,
    pub supports: Vec<SupportCheck>,
    /// True when the support scan was cut down to singletons, pairs and the full set.
    pub partial: bool,
    pub conflict_of_interest: Option<bool>,
    /// Human-readable list of violated inequalities, 1-based.
    pub violations: Vec<String>,
}

impl ConditionReport {
    pub fn supports_ok(&self) -> bool {
        self.supports.iter().all(|s| s.outcome.is_equilibrium())
    }

    /// Coordination, bandwagon and every scanned support.
    pub fn holds(&self) -> bool {
        self.coordination && self.bandwagon && self.supports_ok()
    }
}

fn supports_to_scan(k: usize) -> (Vec<Vec<usize>>, bool) {
    if k <= FULL_SUPPORT_SCAN_MAX {
        let all = (1u32..(1u32 << k))
            .map(|mask| (0..k).filter(|&i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .collect::<Vec<_>>();
        let mut all = all;
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        (all, false)
    } else {
        let mut out: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
        for i in 0..k {
            for j in i + 1..k {
                out.push(vec![i, j]);
            }
        }
        out.push((0..k).collect());
        (out, true)
    }
}

/// Solves `M[T,T] w = v 1`, `sum w = 1` for the weights on `support`.
/// Returns the weights (length `k`) and the common value.
fn indifference<F>(k: usize, support: &[usize], entry: F) -> std::result::Result<(Vec<f64>, f64), String>
where
    F: Fn(usize, usize) -> f64,
{
    let s = support.len();
    let mut m = DMatrix::<f64>::zeros(s + 1, s + 1);
    let mut rhs = DVector::<f64>::zeros(s + 1);
    for (r, &i) in support.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            m[(r, c)] = entry(i, j);
        }
        m[(r, s)] = -1.0;
    }
    for c in 0..s {
        m[(s, c)] = 1.0;
    }
    rhs[s] = 1.0;

    let sv = m.clone().singular_values();
    let (lo, hi) = sv.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi == 0.0 || lo / hi < DEGENERACY_RCOND {
        return Err("degenerate indifference system (rank deficient)".into());
    }
    let sol = m
        .full_piv_lu()
        .solve(&rhs)
        .ok_or_else(|| "degenerate indifference system (singular)".to_string())?;
    let mut w = vec![0.0; k];
    for (r, &i) in support.iter().enumerate() {
        w[i] = sol[r];
    }
    Ok((w, sol[s]))
}

fn outside_ok<F>(k: usize, support: &[usize], value: f64, payoff: F) -> std::result::Result<(), String>
where
    F: Fn(usize) -> f64,
{
    let tol = 1e-12 * (1.0 + value.abs());
    for i in (0..k).filter(|i| !support.contains(i)) {
        let p = payoff(i);
        if p > value + tol {
            return Err(format!("strategy {} earns {p} > {value} outside the support", i + 1));
        }
    }
    Ok(())
}

fn positive_on(w: &[f64], support: &[usize]) -> std::result::Result<(), String> {
    match support.iter().find(|&&i| w[i] <= 0.0) {
        Some(&i) => Err(format!("weight on strategy {} is {} (not positive)", i + 1, w[i])),
        None => Ok(()),
    }
}

/// Mixed Nash equilibrium of a one-population game with exactly the given support.
pub fn mixed_equilibrium(game: &OnePopGame, support: &[usize]) -> Result<SupportOutcome> {
    let k = game.k();
    validate_support(k, support)?;
    if support.len() == 1 {
        let m = support[0];
        return Ok(if game.is_strict_nash(m) {
            let mut w = vec![0.0; k];
            w[m] = 1.0;
            SupportOutcome::Equilibrium { weights: w }
        } else {
            SupportOutcome::Absent { reason: format!("strategy {} is not a strict Nash equilibrium", m + 1) }
        });
    }
    let res = indifference(k, support, |i, j| game.a(i, j)).and_then(|(w, v)| {
        positive_on(&w, support)?;
        outside_ok(k, support, v, |i| (0..k).map(|j| game.a(i, j) * w[j]).sum())?;
        Ok(w)
    });
    Ok(match res {
        Ok(weights) => SupportOutcome::Equilibrium { weights },
        Err(reason) => SupportOutcome::Absent { reason },
    })
}

/// Mixed Nash equilibrium of a bimatrix game with both populations on `support`.
pub fn mixed_equilibrium_two_pop(game: &TwoPopGame, support: &[usize]) -> Result<SupportOutcome> {
    let k = game.k();
    validate_support(k, support)?;
    if support.len() == 1 {
        let m = support[0];
        return Ok(if game.is_strict_nash(m) {
            let mut w = vec![0.0; k];
            w[m] = 1.0;
            SupportOutcome::Bimatrix { alpha: w.clone(), beta: w }
        } else {
            SupportOutcome::Absent { reason: format!("strategy {} is not a strict Nash equilibrium", m + 1) }
        });
    }
    // β's mix makes α indifferent, α's mix makes β indifferent.
    let res = indifference(k, support, |i, j| game.alpha(i, j)).and_then(|(xb, va)| {
        positive_on(&xb, support)?;
        outside_ok(k, support, va, |i| (0..k).map(|j| game.alpha(i, j) * xb[j]).sum())?;
        let (xa, vb) = indifference(k, support, |j, i| game.beta(i, j))?;
        positive_on(&xa, support)?;
        outside_ok(k, support, vb, |j| (0..k).map(|i| xa[i] * game.beta(i, j)).sum())?;
        Ok((xa, xb))
    });
    Ok(match res {
        Ok((alpha, beta)) => SupportOutcome::Bimatrix { alpha, beta },
        Err(reason) => SupportOutcome::Absent { reason },
    })
}

fn validate_support(k: usize, support: &[usize]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::Precondition("support must be nonempty".into()));
    }
    if let Some(&i) = support.iter().find(|&&i| i >= k) {
        return Err(Error::OutOfRange { index: i + 1, max: k });
    }
    let mut s = support.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != support.len() {
        return Err(Error::Precondition("support has repeated strategies".into()));
    }
    Ok(())
}

/// Coordination, strict MBP and the per-support mixed equilibria.
pub fn validate_one_pop(game: &OnePopGame) -> ConditionReport {
    let k = game.k();
    let mut violations = Vec::new();
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            if game.a(i, i) <= game.a(j, i) {
                violations.push(format!(
                    "coordination: A[{i1}][{i1}] = {} <= A[{j1}][{i1}] = {}",
                    game.a(i, i),
                    game.a(j, i),
                    i1 = i + 1,
                    j1 = j + 1
                ));
            }
        }
    }
    let coordination = violations.is_empty();
    for (i, j, l) in distinct_triples(k) {
        if game.mbp_margin(i, j, l) <= 0.0 {
            violations.push(format!(
                "bandwagon: A[{i1}][{i1}] - A[{j1}][{i1}] <= A[{i1}][{l1}] - A[{j1}][{l1}] (margin {})",
                game.mbp_margin(i, j, l),
                i1 = i + 1,
                j1 = j + 1,
                l1 = l + 1
            ));
        }
    }
    let bandwagon = distinct_triples(k).all(|(i, j, l)| game.mbp_margin(i, j, l) > 0.0);
    let (list, partial) = supports_to_scan(k);
    let supports = list
        .into_iter()
        .map(|s| {
            let outcome = mixed_equilibrium(game, &s).expect("scanned supports are valid");
            SupportCheck { support: s, outcome }
        })
        .collect::<Vec<_>>();
    for s in &supports {
        if let SupportOutcome::Absent { reason } = &s.outcome {
            violations.push(format!("support {}: {reason}", fmt_support(&s.support)));
        }
    }
    ConditionReport { coordination, bandwagon, supports, partial, conflict_of_interest: None, violations }
}

/// Coordination, weak WBP, the per-support equilibria and the conflict-of-interest
/// structure at convention `m`.
pub fn validate_two_pop(game: &TwoPopGame, m: usize) -> Result<ConditionReport> {
    let k = game.k();
    if m >= k {
        return Err(Error::OutOfRange { index: m + 1, max: k });
    }
    let mut violations = Vec::new();
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            if game.alpha(i, i) <= game.alpha(j, i) {
                violations.push(format!("coordination (alpha): A[{0}][{0}] <= A[{1}][{0}]", i + 1, j + 1));
            }
            if game.beta(i, i) <= game.beta(i, j) {
                violations.push(format!("coordination (beta): B[{0}][{0}] <= B[{0}][{1}]", i + 1, j + 1));
            }
        }
    }
    let coordination = violations.is_empty();
    let mut bandwagon = true;
    for (mm, i, j) in distinct_triples(k) {
        let ma = (game.alpha(mm, mm) - game.alpha(i, mm)) - (game.alpha(mm, j) - game.alpha(i, j));
        let mb = (game.beta(mm, mm) - game.beta(mm, i)) - (game.beta(j, mm) - game.beta(j, i));
        if ma < 0.0 {
            bandwagon = false;
            violations.push(format!("weak bandwagon (alpha) fails on ({}, {}, {})", mm + 1, i + 1, j + 1));
        }
        if mb < 0.0 {
            bandwagon = false;
            violations.push(format!("weak bandwagon (beta) fails on ({}, {}, {})", mm + 1, i + 1, j + 1));
        }
    }
    let (list, partial) = supports_to_scan(k);
    let supports = list
        .into_iter()
        .map(|s| {
            let outcome = mixed_equilibrium_two_pop(game, &s).expect("scanned supports are valid");
            SupportCheck { support: s, outcome }
        })
        .collect::<Vec<_>>();
    for s in &supports {
        if let SupportOutcome::Absent { reason } = &s.outcome {
            violations.push(format!("support {}: {reason}", fmt_support(&s.support)));
        }
    }
    Ok(ConditionReport {
        coordination,
        bandwagon,
        supports,
        partial,
        conflict_of_interest: Some(game.conflict_of_interest(m)),
        violations,
    })
}

fn fmt_support(s: &[usize]) -> String {
    let inner = s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
    format!("{{{inner}}}")
}

/// All ordered triples of pairwise distinct strategies.
pub fn distinct_triples(k: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..k).flat_map(move |i| {
        (0..k).flat_map(move |j| (0..k).map(move |l| (i, j, l))).filter(move |&(_, j, l)| i != j && j != l && i != l)
    })
}

/// The three-technology game `[[b1,-d,d],[d,b2,-d],[-d,d,b3]]`.
pub fn tech_game(b1: f64, b2: f64, b3: f64, d: f64) -> OnePopGame {
    OnePopGame::new(vec![vec![b1, -d, d], vec![d, b2, -d], vec![-d, d, b3]]).expect("3x3 finite matrix")
}

/// Discretised Nash demand game on `L` grid steps of the frontier.
///
/// Strategy index `s` stands for the demand `delta * (s + 1)`, so the game has
/// `L - 1` strategies. Compatible demands (`i <= j`) pay `(delta*i, f(delta*j))`.
pub fn ndg_build(frontier: &dyn Frontier, l: usize) -> Result<TwoPopGame> {
    if l < 3 {
        return Err(Error::Precondition(format!("L must be at least 3, got {l}")));
    }
    frontier.validate()?;
    let delta = frontier.sbar() / l as f64;
    let k = l - 1;
    let mut alpha = vec![vec![0.0; k]; k];
    let mut beta = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            alpha[i][j] = delta * (i + 1) as f64;
            beta[i][j] = frontier.value(delta * (j + 1) as f64);
        }
    }
    TwoPopGame::new(alpha, beta)
}

/// Either kind of game, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq)]
pub enum Game {
    One(OnePopGame),
    Two(TwoPopGame),
}

/// On-disk game description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GameSpec {
    OnePopulation { payoffs: Vec<Vec<f64>> },
    TwoPopulation { alpha: Vec<Vec<f64>>, beta: Vec<Vec<f64>> },
}

impl TryFrom<GameSpec> for Game {
    type Error = Error;

    fn try_from(spec: GameSpec) -> Result<Game> {
        Ok(match spec {
            GameSpec::OnePopulation { payoffs } => Game::One(OnePopGame::new(payoffs)?),
            GameSpec::TwoPopulation { alpha, beta } => Game::Two(TwoPopGame::new(alpha, beta)?),
        })
    }
}

impl From<&Game> for GameSpec {
    fn from(g: &Game) -> GameSpec {
        match g {
            Game::One(g) => GameSpec::OnePopulation { payoffs: g.rows() },
            Game::Two(g) => GameSpec::TwoPopulation { alpha: g.alpha_rows(), beta: g.beta_rows() },
        }
    }
}

impl Game {
    pub fn k(&self) -> usize {
        match self {
            Game::One(g) => g.k(),
            Game::Two(g) => g.k(),
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Game, GameParseError> {
        let spec: GameSpec = serde_json::from_str(text).map_err(GameParseError::Json)?;
        Game::try_from(spec).map_err(GameParseError::Invalid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GameSpec::from(self)).expect("plain numbers serialize")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GameParseError {
    #[error("malformed game JSON: {0}")]
    Json(serde_json::Error),
    #[error("invalid game: {0}")]
    Invalid(Error),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bargaining::PowerFrontier;

    #[test]
    fn tech_game_conditions() {
        let g = tech_game(16.0, 16.0, 16.0, 1.0);
        let r = validate_one_pop(&g);
        assert!(r.coordination && r.bandwagon && r.supports_ok(), "{:?}", r.violations);
        assert!(!r.partial);
        assert_eq!(r.supports.len(), 7);
    }

    #[test]
    fn large_d_breaks_mbp() {
        let r = validate_one_pop(&tech_game(16.0, 16.0, 16.0, 6.0));
        assert!(r.coordination);
        assert!(!r.bandwagon);
    }

    #[test]
    fn identity_game() {
        let g = OnePopGame::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = validate_one_pop(&g);
        assert!(r.coordination && r.bandwagon);
    }

    #[test]
    fn mixed_equilibria() {
        let g = OnePopGame::new(vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        match mixed_equilibrium(&g, &[0, 1]).unwrap() {
            SupportOutcome::Equilibrium { weights } => {
                assert!((weights[0] - 1.0 / 3.0).abs() < 1e-14);
                assert!((weights[1] - 2.0 / 3.0).abs() < 1e-14);
            }
            o => panic!("{o:?}"),
        }
        assert_eq!(
            mixed_equilibrium(&g, &[1]).unwrap(),
            SupportOutcome::Equilibrium { weights: vec![0.0, 1.0] }
        );
        let t = tech_game(16.0, 16.0, 16.0, 1.0);
        match mixed_equilibrium(&t, &[0, 1, 2]).unwrap() {
            SupportOutcome::Equilibrium { weights } => {
                for w in weights {
                    assert!((w - 1.0 / 3.0).abs() < 1e-14);
                }
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn degenerate_support_is_absent() {
        let g = OnePopGame::new(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        match mixed_equilibrium(&g, &[0, 1]).unwrap() {
            SupportOutcome::Absent { reason } => assert!(reason.contains("degenerate")),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn skew_identity_on_tech_game() {
        let g = tech_game(16.0, 12.0, 9.0, 1.5);
        for (i, j, k) in distinct_triples(3) {
            let lhs = g.mbp_margin(i, j, k) - g.mbp_margin(i, k, j);
            assert_eq!(lhs, g.skew(i, j, k));
        }
    }

    #[test]
    fn ndg_small() {
        let f = PowerFrontier::new(1.0, 3.0, 0.5).unwrap();
        let g = ndg_build(&f, 3).unwrap();
        assert_eq!(g.alpha_rows(), vec![vec![1.0, 1.0], vec![0.0, 2.0]]);
        let f1 = (2.0f64 / 3.0).sqrt();
        let f2 = (1.0f64 / 3.0).sqrt();
        let b = g.beta_rows();
        assert!((b[0][0] - f1).abs() < 1e-15 && (b[0][1] - f2).abs() < 1e-15);
        assert_eq!(b[1][0], 0.0);
        assert!((b[1][1] - f2).abs() < 1e-15);
    }

    #[test]
    fn ndg_conditions_and_monotone_diagonals() {
        let f = PowerFrontier::new(1.0, 3.0, 0.5).unwrap();
        let g = ndg_build(&f, 10).unwrap();
        for i in 1..g.k() {
            assert!(g.alpha(i, i) > g.alpha(i - 1, i - 1));
            assert!(g.beta(i, i) < g.beta(i - 1, i - 1));
        }
        for m in 0..g.k() {
            let r = validate_two_pop(&g, m).unwrap();
            assert!(r.coordination && r.bandwagon, "{:?}", r.violations);
            assert_eq!(r.conflict_of_interest, Some(true));
        }
    }

    #[test]
    fn transposed_tech_game_is_wbp() {
        let t = tech_game(16.0, 16.0, 16.0, 1.0).rows();
        let tt = (0..3).map(|i| (0..3).map(|j| t[j][i]).collect()).collect();
        let g = TwoPopGame::new(t, tt).unwrap();
        let r = validate_two_pop(&g, 0).unwrap();
        assert!(r.coordination && r.bandwagon);
    }

    #[test]
    fn tie_breaks_conflict() {
        let g = TwoPopGame::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(!g.conflict_of_interest(0));
        // a tie in α alone: the sets split at m = 1 but overlap at m = 2
        let g = TwoPopGame::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(g.conflict_of_interest(0));
        assert!(!g.conflict_of_interest(1));
    }

    #[test]
    fn json_round_trip() {
        let g = Game::One(tech_game(16.0, 16.0, 16.0, 1.0));
        let back = Game::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        let err = Game::from_json("{\"type\": \"one_population\", \"payoffs\": [[1, 2], [3]]}").unwrap_err();
        assert!(matches!(err, GameParseError::Invalid(Error::Dimension(_))));
    }
}
