//! Paths through the state lattice, the comparison identities, and the
//! reduction of arbitrary escape paths to block paths.

use serde::Serialize;

use crate::chain::{CostRule, Move, PopState, PopulationGame};
use crate::error::{Error, Result};
use crate::game::OnePopGame;
use crate::limits::Limits;

/// A sequence of states, each one move away from the previous.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Path<S> {
    states: Vec<S>,
    moves: Vec<Move>,
    #[serde(skip)]
    cached: Option<(CostRule, f64)>,
}

impl<S: Clone + PartialEq> Path<S> {
    /// Path starting at `start` and applying `moves` in order.
    pub fn from_moves<G: PopulationGame<State = S>>(game: &G, start: S, moves: &[Move]) -> Result<Self> {
        let mut states = Vec::with_capacity(moves.len() + 1);
        states.push(start);
        for &mv in moves {
            let next = game.apply(states.last().expect("nonempty"), mv)?;
            states.push(next);
        }
        Ok(Self { states, moves: moves.to_vec(), cached: None })
    }

    /// Path through the given states; consecutive states must differ by one move.
    pub fn from_states<G: PopulationGame<State = S>>(game: &G, states: Vec<S>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidState("a path needs at least one state".into()));
        }
        let mut moves = Vec::with_capacity(states.len() - 1);
        for (t, w) in states.windows(2).enumerate() {
            moves.push(game.move_between(&w[0], &w[1]).ok_or(Error::BrokenAdjacency { index: t })?);
        }
        Ok(Self { states, moves, cached: None })
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn start(&self) -> &S {
        &self.states[0]
    }

    pub fn end(&self) -> &S {
        self.states.last().expect("nonempty")
    }

    /// Number of moves.
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Sum of step costs; infinite steps make the total infinite.
    pub fn cost<G: PopulationGame<State = S>>(&self, game: &G, rule: CostRule) -> Result<f64> {
        if let Some((r, c)) = self.cached {
            if r == rule {
                return Ok(c);
            }
        }
        let mut total = 0.0;
        for (x, &mv) in self.states.iter().zip(&self.moves) {
            total += game.step_cost(rule, x, mv)?;
        }
        Ok(total)
    }

    /// Evaluates and remembers the cost under `rule`.
    pub fn costed<G: PopulationGame<State = S>>(mut self, game: &G, rule: CostRule) -> Result<Self> {
        self.cached = None;
        let c = self.cost(game, rule)?;
        self.cached = Some((rule, c));
        Ok(self)
    }

    pub fn cached_cost(&self) -> Option<(CostRule, f64)> {
        self.cached
    }

    /// Index of the first state that is not in the basin of `m`.
    pub fn first_exit<G: PopulationGame<State = S>>(&self, game: &G, m: usize) -> Option<usize> {
        self.states.iter().position(|x| !game.in_basin(x, m))
    }

    /// Whether the path starts at convention `m`, stays in its basin, and leaves it
    /// exactly at the final state.
    pub fn escapes<G: PopulationGame<State = S>>(&self, game: &G, m: usize) -> bool {
        self.first_exit(game, m) == Some(self.states.len() - 1) && !self.is_empty()
    }

    /// The prefix ending at state index `t`.
    pub fn truncated(&self, t: usize) -> Self {
        Self { states: self.states[..=t].to_vec(), moves: self.moves[..t].to_vec(), cached: None }
    }
}

/// Total cost of `path` under `rule`.
pub fn path_cost<G: PopulationGame>(game: &G, rule: CostRule, path: &Path<G::State>) -> Result<f64> {
    path.cost(game, rule)
}

/// Consecutive runs of identical moves out of a convention: `(target, count)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BlockSpec {
    pub blocks: Vec<(usize, u32)>,
}

impl BlockSpec {
    pub fn moves(&self, m: usize) -> Vec<Move> {
        self.blocks
            .iter()
            .flat_map(|&(j, t)| std::iter::repeat(Move::single(m, j)).take(t as usize))
            .collect()
    }

    pub fn total(&self) -> u32 {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn to_path(&self, game: &OnePopGame, n: u32, m: usize) -> Result<Path<PopState>> {
        Path::from_moves(game, PopState::convention(game.k(), n, m), &self.moves(m))
    }

    /// Reads the block structure off a path whose moves all leave `m`.
    pub fn from_moves(m: usize, moves: &[Move]) -> Option<Self> {
        let mut blocks: Vec<(usize, u32)> = Vec::new();
        for mv in moves {
            if mv.from != m {
                return None;
            }
            match blocks.last_mut() {
                Some((j, t)) if *j == mv.to => *t += 1,
                _ => {
                    if blocks.iter().any(|b| b.0 == mv.to) {
                        return None;
                    }
                    blocks.push((mv.to, 1));
                }
            }
        }
        Some(Self { blocks })
    }
}

impl std::fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts = self.blocks.iter().map(|(j, t)| format!("{}x{}", t, j + 1)).collect::<Vec<_>>();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn require_in_basin(game: &OnePopGame, x: &PopState, m: usize, what: &str) -> Result<()> {
    if game.in_basin(x, m) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} = {x} is outside the basin of {}", m + 1)))
    }
}

/// `(A_mm - A_lm - A_mi + A_li) / n`.
pub fn cp1_formula(game: &OnePopGame, n: u32, m: usize, i: usize, l: usize) -> f64 {
    (game.a(m, m) - game.a(l, m) - game.a(m, i) + game.a(l, i)) / n as f64
}

/// `I(x -> x^{i,k} -> (m,l)) - I(x -> x^{m,k} -> (i,l))`, evaluated on the two
/// paths directly.
pub fn cp1_delta(game: &OnePopGame, x: &PopState, m: usize, i: usize, k: usize, l: usize) -> Result<f64> {
    let k_all = game.k();
    if [m, i, k, l].iter().any(|&s| s >= k_all) || i == m || k == i || k == m || l == i || l == m {
        return Err(Error::Precondition("need i != m, k and l outside {i, m}".into()));
    }
    let rule = CostRule::LogitUnintentional;
    require_in_basin(game, x, m, "x")?;
    let g1 = Path::from_moves(game, x.clone(), &[Move::single(m, k), Move::single(i, l)])?;
    let g2 = Path::from_moves(game, x.clone(), &[Move::single(i, k), Move::single(m, l)])?;
    require_in_basin(game, &g1.states()[1], m, "x^{m,k}")?;
    require_in_basin(game, &g2.states()[1], m, "x^{i,k}")?;
    let d = g2.cost(game, rule)? - g1.cost(game, rule)?;
    let f = cp1_formula(game, x.n(), m, i, l);
    debug_assert!((d - f).abs() <= 1e-9 * f.abs().max(1.0), "cp1 identity: {d} vs {f}");
    Ok(d)
}

/// `(A_ji - A_jm + A_mj - A_mi - A_ij + A_im) / n`: cost of doing `m->j` before
/// `m->i` minus the reverse order.
pub fn cp2_delta(game: &OnePopGame, n: u32, m: usize, i: usize, j: usize) -> f64 {
    (game.a(j, i) - game.a(j, m) + game.a(m, j) - game.a(m, i) - game.a(i, j) + game.a(i, m)) / n as f64
}

/// The same difference measured on the two explicit two-step paths from `x`.
pub fn cp2_direct(game: &OnePopGame, x: &PopState, m: usize, i: usize, j: usize) -> Result<f64> {
    if i == j || i == m || j == m {
        return Err(Error::Precondition("need i, j, m distinct".into()));
    }
    require_in_basin(game, x, m, "x")?;
    let rule = CostRule::LogitUnintentional;
    let g1 = Path::from_moves(game, x.clone(), &[Move::single(m, i), Move::single(m, j)])?;
    let g2 = Path::from_moves(game, x.clone(), &[Move::single(m, j), Move::single(m, i)])?;
    for g in [&g1, &g2] {
        require_in_basin(game, &g.states()[1], m, "intermediate state")?;
    }
    Ok(g2.cost(game, rule)? - g1.cost(game, rule)?)
}

/// Cost of `rho` consecutive `m -> k` moves from `a`, valid while the run stays in
/// the basin of `m`.
pub fn run_cost(game: &OnePopGame, a: &PopState, m: usize, k: usize, rho: u32) -> f64 {
    let n = a.n() as f64;
    let r = rho as f64;
    r * (game.payoff(m, a) - game.payoff(k, a))
        + r * (r - 1.0) / (2.0 * n) * (-game.a(m, m) + game.a(m, k) + game.a(k, m) - game.a(k, k))
}

/// Upper bound on the number of ordered block specifications.
fn block_path_bound(k: usize, n: u32) -> u128 {
    let mut total: u128 = 0;
    let mut perm: u128 = 1;
    let mut pow: u128 = 1;
    for blocks in 1..k {
        perm = perm.saturating_mul((k - blocks) as u128);
        pow = pow.saturating_mul(n as u128);
        total = total.saturating_add(perm.saturating_mul(pow));
    }
    total
}

/// Every ordered block path from `e_m` whose final state is the first to leave the
/// basin. Targets are tried in increasing order, then run lengths in increasing order.
pub fn enumerate_block_paths(game: &OnePopGame, n: u32, m: usize) -> Result<impl Iterator<Item = BlockSpec>> {
    enumerate_block_paths_with(game, n, m, &Limits::default())
}

pub fn enumerate_block_paths_with(
    game: &OnePopGame,
    n: u32,
    m: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = BlockSpec>> {
    let start = game.convention(n, m)?;
    let bound = block_path_bound(game.k(), n);
    if bound > limits.block_paths {
        return Err(Error::Guardrail {
            what: "block path enumeration".into(),
            requested: bound,
            limit: limits.block_paths,
            hint: "use the closed-form limit instead".into(),
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    blocks_from(game, m, &start, &mut prefix, &mut out);
    Ok(out.into_iter())
}

fn blocks_from(game: &OnePopGame, m: usize, x: &PopState, prefix: &mut Vec<(usize, u32)>, out: &mut Vec<BlockSpec>) {
    let targets: Vec<usize> = (0..game.k()).filter(|&j| j != m && prefix.iter().all(|b| b.0 != j)).collect();
    for j in targets {
        let mut y = x.clone();
        let mut t = 0;
        while y.counts()[m] > 0 {
            y = y.shifted(m, j).expect("m count positive");
            t += 1;
            prefix.push((j, t));
            if !game.in_basin(&y, m) {
                out.push(BlockSpec { blocks: prefix.clone() });
                prefix.pop();
                break;
            }
            blocks_from(game, m, &y, prefix, out);
            prefix.pop();
        }
    }
}

/// Result of [`straighten`].
#[derive(Debug, Clone)]
pub struct Straightened {
    pub path: Path<PopState>,
    pub blocks: BlockSpec,
    /// True when the constructive steps stalled and the cheapest block path was used.
    pub used_fallback: bool,
}

/// Turns an escape path from `e_m` into a block path that costs no more.
///
/// First every move not leaving `m` is pushed to the end and rewritten (the
/// four-case exchange argument), then scattered runs of the same target are merged
/// by the exchange identity, keeping whichever of the two rearrangements is cheaper.
pub fn straighten(game: &OnePopGame, path: &Path<PopState>, m: usize) -> Result<Straightened> {
    let rule = CostRule::LogitUnintentional;
    let n = path.start().n();
    if *path.start() != game.convention(n, m)? {
        return Err(Error::Precondition(format!("path must start at convention {}", m + 1)));
    }
    let exit = path.first_exit(game, m).ok_or(Error::NotEscaping(m + 1))?;
    let input = path.truncated(exit);
    let input_cost = input.cost(game, rule)?;
    let tol = 1e-9 * input_cost.abs().max(1.0);

    let attempt = reduce_to_moves_from(game, m, &input).and_then(|p| merge_runs(game, m, p));
    if let Some(p) = attempt {
        let c = p.cost(game, rule)?;
        if c <= input_cost + tol && p.escapes(game, m) {
            if let Some(blocks) = BlockSpec::from_moves(m, p.moves()) {
                return Ok(Straightened { path: p.costed(game, rule)?, blocks, used_fallback: false });
            }
        }
    }
    let best = crate::exit::exit_reduced(game, n, m)?;
    let blocks = match best.witness {
        crate::exit::Witness::Blocks(b) => b,
        _ => unreachable!("exit_reduced returns a block witness"),
    };
    let p = blocks.to_path(game, n, m)?.costed(game, rule)?;
    if p.cached_cost().expect("costed").1 > input_cost + tol {
        return Err(Error::Precondition("no cheaper block path found; is the bandwagon property satisfied?".into()));
    }
    Ok(Straightened { path: p, blocks, used_fallback: true })
}

/// Builds a path from moves and cuts it at the first exit; `None` if infeasible or
/// if it never leaves.
fn escape_prefix(game: &OnePopGame, m: usize, start: &PopState, moves: &[Move]) -> Option<Path<PopState>> {
    let p = Path::from_moves(game, start.clone(), moves).ok()?;
    let t = p.first_exit(game, m)?;
    Some(p.truncated(t))
}

fn reduce_to_moves_from(game: &OnePopGame, m: usize, path: &Path<PopState>) -> Option<Path<PopState>> {
    let start = path.start().clone();
    let mut moves = path.moves().to_vec();
    loop {
        let Some(t) = moves.iter().rposition(|mv| mv.from != m) else {
            return escape_prefix(game, m, &start, &moves);
        };
        let (i, l) = (moves[t].from, moves[t].to);
        if t + 1 == moves.len() {
            if l == m {
                moves.pop();
            } else {
                moves[t] = Move::single(m, l);
            }
            continue;
        }
        let k = moves[t + 1].to;
        match (k == i, l == m) {
            (true, true) => {
                moves.drain(t..t + 2);
            }
            (true, false) => {
                moves.splice(t..t + 2, [Move::single(m, l)]);
            }
            (false, true) => {
                moves.splice(t..t + 2, [Move::single(i, k)]);
            }
            (false, false) => {
                let xt = Path::from_moves(game, start.clone(), &moves[..t]).ok()?.end().clone();
                let y = xt.shifted(m, l).ok()?;
                if game.in_basin(&y, m) {
                    moves[t] = Move::single(m, l);
                    moves[t + 1] = Move::single(i, k);
                } else {
                    moves.truncate(t);
                    moves.push(Move::single(m, l));
                }
            }
        }
    }
}

fn merge_runs(game: &OnePopGame, m: usize, mut path: Path<PopState>) -> Option<Path<PopState>> {
    let rule = CostRule::LogitUnintentional;
    let start = path.start().clone();
    loop {
        let targets = path.moves().iter().map(|mv| mv.to).collect::<Vec<_>>();
        let Some((a, eta, b, rho)) = first_split_run(&targets) else {
            return Some(path);
        };
        let k = targets[a];
        let current = path.cost(game, rule).ok()?;
        let run = |len: usize| std::iter::repeat(Move::single(m, k)).take(len);
        let mv = path.moves();
        let forward: Vec<Move> = mv[..a + eta]
            .iter()
            .copied()
            .chain(run(rho))
            .chain(mv[a + eta..b].iter().copied())
            .chain(mv[b + rho..].iter().copied())
            .collect();
        let backward: Vec<Move> = mv[..a]
            .iter()
            .copied()
            .chain(mv[a + eta..b].iter().copied())
            .chain(run(eta + rho))
            .chain(mv[b + rho..].iter().copied())
            .collect();
        let tol = 1e-9 * current.abs().max(1.0);
        let mut choice: Option<(f64, Path<PopState>)> = None;
        for cand in [forward, backward] {
            if let Some(p) = escape_prefix(game, m, &start, &cand) {
                let c = p.cost(game, rule).ok()?;
                if c <= current + tol && choice.as_ref().map_or(true, |(bc, _)| c < *bc - tol) {
                    choice = Some((c, p));
                }
            }
        }
        path = choice?.1;
    }
}

/// First target whose moves are not contiguous: `(start, len, next_start, next_len)`.
fn first_split_run(targets: &[usize]) -> Option<(usize, usize, usize, usize)> {
    let runs = {
        let mut r: Vec<(usize, usize, usize)> = Vec::new();
        for (t, &j) in targets.iter().enumerate() {
            match r.last_mut() {
                Some((tj, _, len)) if *tj == j => *len += 1,
                _ => r.push((j, t, 1)),
            }
        }
        r
    };
    for (idx, &(j, a, eta)) in runs.iter().enumerate() {
        if let Some(&(_, b, rho)) = runs[idx + 1..].iter().find(|r| r.0 == j) {
            return Some((a, eta, b, rho));
        }
    }
    None
}
