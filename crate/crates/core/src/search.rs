//! Least-cost search over the lattice of population states.
//!
//! Plain Dijkstra with lazily discovered states. Once the optimum is known the
//! witness is rebuilt from the tight edges only: among all optimal paths with
//! the fewest moves we take the one whose move sequence is lexicographically
//! smallest, so witnesses do not depend on heap order.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use ordered_float::OrderedFloat;

use crate::chain::{CostRule, Move, PopulationGame};
use crate::error::{Error, Result};

pub(crate) struct Outcome<S> {
    pub cost: f64,
    pub states: Vec<S>,
}

fn tight_tol(v: f64) -> f64 {
    1e-9 * v.abs().max(1.0)
}

/// Cheapest path from `start` to any state accepted by `terminal`.
/// Only states accepted by `expand` (and not terminal) are left through.
pub(crate) fn least_cost<G, E, T>(
    game: &G,
    rule: CostRule,
    start: G::State,
    expand: E,
    terminal: T,
    cap: u128,
    what: &str,
) -> Result<Outcome<G::State>>
where
    G: PopulationGame,
    E: Fn(&G::State) -> bool,
    T: Fn(&G::State) -> bool,
{
    let mut ids: HashMap<G::State, usize> = HashMap::new();
    let mut states: Vec<G::State> = Vec::new();
    let mut dist: Vec<f64> = Vec::new();
    let mut done: Vec<bool> = Vec::new();
    let mut heap = BinaryHeap::new();

    let intern = |s: G::State, ids: &mut HashMap<G::State, usize>, states: &mut Vec<G::State>, dist: &mut Vec<f64>, done: &mut Vec<bool>| -> Result<usize> {
        if let Some(&id) = ids.get(&s) {
            return Ok(id);
        }
        if states.len() as u128 >= cap {
            return Err(Error::Guardrail {
                what: what.to_string(),
                requested: states.len() as u128 + 1,
                limit: cap,
                hint: "use the closed-form limit (--limit) or a smaller n".into(),
            });
        }
        let id = states.len();
        ids.insert(s.clone(), id);
        states.push(s);
        dist.push(f64::INFINITY);
        done.push(false);
        Ok(id)
    };

    let s0 = intern(start, &mut ids, &mut states, &mut dist, &mut done)?;
    dist[s0] = 0.0;
    heap.push((Reverse(OrderedFloat(0.0)), s0));
    let mut best = f64::INFINITY;

    while let Some((Reverse(OrderedFloat(d)), u)) = heap.pop() {
        if done[u] {
            continue;
        }
        if d > best + tight_tol(best) {
            break;
        }
        done[u] = true;
        let x = states[u].clone();
        if terminal(&x) {
            best = best.min(d);
            continue;
        }
        if !expand(&x) {
            continue;
        }
        for mv in game.moves(&x) {
            let c = game.step_cost(rule, &x, mv)?;
            if !c.is_finite() {
                continue;
            }
            let y = game.apply(&x, mv)?;
            let v = intern(y, &mut ids, &mut states, &mut dist, &mut done)?;
            let nd = d + c;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push((Reverse(OrderedFloat(nd)), v));
            }
        }
    }
    if !best.is_finite() {
        return Err(Error::Numerical(format!("{what}: no reachable terminal state")));
    }

    // Tight edges among settled states, and hop counts back from optimal terminals.
    let tol = tight_tol(best);
    let n = states.len();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut fwd: Vec<Vec<(Move, usize)>> = vec![Vec::new(); n];
    for u in 0..n {
        if !done[u] || dist[u] > best + tol || terminal(&states[u]) || !expand(&states[u]) {
            continue;
        }
        for mv in game.moves(&states[u]) {
            let c = game.step_cost(rule, &states[u], mv)?;
            if !c.is_finite() {
                continue;
            }
            let y = game.apply(&states[u], mv)?;
            if let Some(&v) = ids.get(&y) {
                if done[v] && (dist[u] + c - dist[v]).abs() <= tol && dist[v] <= best + tol {
                    rev[v].push(u);
                    fwd[u].push((mv, v));
                }
            }
        }
    }
    let mut hops = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if done[v] && terminal(&states[v]) && (dist[v] - best).abs() <= tol {
            hops[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &rev[v] {
            if hops[u] == usize::MAX {
                hops[u] = hops[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if hops[s0] == usize::MAX {
        return Err(Error::Numerical(format!("{what}: witness reconstruction failed")));
    }
    let mut path_states = vec![states[s0].clone()];
    let mut u = s0;
    while hops[u] > 0 {
        let &(_, v) = fwd[u]
            .iter()
            .filter(|(_, v)| hops[*v] == hops[u] - 1)
            .min_by_key(|(mv, _)| *mv)
            .expect("a tight edge one hop closer exists");
        path_states.push(states[v].clone());
        u = v;
    }
    Ok(Outcome { cost: best, states: path_states })
}
