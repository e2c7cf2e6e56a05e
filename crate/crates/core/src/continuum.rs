//! Infinite-population path costs on the continuous simplex.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exit::pair_radius_one_pop;
use crate::chain::CostRule;
use crate::game::{mixed_equilibrium, OnePopGame, SupportOutcome};

const SIMPLEX_TOL: f64 = 1e-12;
const BASIN_TOL: f64 = 1e-9;
const SEGMENT_SAMPLES: usize = 1000;

/// A point of the continuous simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let s: f64 = coords.iter().sum();
        if coords.iter().any(|&c| !c.is_finite() || c < -SIMPLEX_TOL) || (s - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidState(format!("{coords:?} is not on the simplex")));
        }
        Ok(Self(coords))
    }

    pub fn vertex(k: usize, m: usize) -> Self {
        let mut v = vec![0.0; k];
        v[m] = 1.0;
        Self(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// `self + t (e_to - e_from)`.
    pub fn shifted(&self, from: usize, to: usize, t: f64) -> Result<Self> {
        let mut v = self.0.clone();
        v[from] -= t;
        v[to] += t;
        Self::new(v)
    }
}

/// `sum_j A_ij p_j` for any vector `p` (not necessarily on the simplex).
pub fn payoff_at(game: &OnePopGame, i: usize, p: &[f64]) -> f64 {
    (0..game.k()).map(|j| game.a(i, j) * p[j]).sum()
}

/// Closed-basin membership with a small tolerance.
pub fn in_closed_basin(game: &OnePopGame, p: &SimplexPoint, m: usize) -> bool {
    let pm = payoff_at(game, m, p.coords());
    (0..game.k()).all(|l| payoff_at(game, l, p.coords()) <= pm + BASIN_TOL)
}

/// Strategies other than `m` whose payoff ties `m`'s at `p`.
pub fn binding_constraints(game: &OnePopGame, p: &SimplexPoint, m: usize) -> Vec<usize> {
    let pm = payoff_at(game, m, p.coords());
    (0..game.k())
        .filter(|&l| l != m && (payoff_at(game, l, p.coords()) - pm).abs() <= BASIN_TOL)
        .collect()
}

fn sum(p: &SimplexPoint, q: &SimplexPoint) -> Vec<f64> {
    p.coords().iter().zip(q.coords()).map(|(a, b)| a + b).collect()
}

fn require_basin(game: &OnePopGame, p: &SimplexPoint, m: usize, what: &str) -> Result<()> {
    if in_closed_basin(game, p, m) {
        Ok(())
    } else {
        Err(Error::InvalidSegment(format!("{what} {:?} is outside the closed basin of {}", p.coords(), m + 1)))
    }
}

/// Limit cost of the straight path `p -> q = p + a (e_i - e_j)` inside the basin of
/// `m`: `(p_j - q_j) (pi(m, p+q) - pi(i, p+q)) / 2`.
pub fn straight_cost(game: &OnePopGame, m: usize, p: &SimplexPoint, q: &SimplexPoint) -> Result<f64> {
    let k = game.k();
    if p.coords().len() != k || q.coords().len() != k {
        return Err(Error::Dimension("point and game sizes differ".into()));
    }
    let d = q.coords().iter().zip(p.coords()).map(|(a, b)| a - b).collect::<Vec<_>>();
    let moved = d.iter().filter(|v| v.abs() > SIMPLEX_TOL).count();
    if moved == 0 {
        return Ok(0.0);
    }
    let i = (0..k).find(|&l| d[l] > SIMPLEX_TOL);
    let j = (0..k).find(|&l| d[l] < -SIMPLEX_TOL);
    let (Some(i), Some(j)) = (i, j) else {
        return Err(Error::InvalidSegment("p and q are not joined along one strategy pair".into()));
    };
    if moved != 2 {
        return Err(Error::InvalidSegment("p and q are not joined along one strategy pair".into()));
    }
    require_basin(game, p, m, "start")?;
    require_basin(game, q, m, "end")?;
    let s = sum(p, q);
    Ok(0.5 * (p.coords()[j] - q.coords()[j]) * (payoff_at(game, m, &s) - payoff_at(game, i, &s)))
}

/// Limit cost of the oblique path from `p` to `q` where `q - p` is
/// `a (e_to - e_via) + b (e_to - e_m)` with `a, b >= 0`:
/// `(q_to - p_to) (pi(m, p+q) - pi(to, p+q)) / 2`.
pub fn oblique_cost(game: &OnePopGame, m: usize, to: usize, via: usize, p: &SimplexPoint, q: &SimplexPoint) -> Result<f64> {
    let k = game.k();
    if [m, to, via].iter().any(|&s| s >= k) || m == to || to == via || m == via {
        return Err(Error::InvalidSegment("need three distinct strategies".into()));
    }
    let d = q.coords().iter().zip(p.coords()).map(|(a, b)| a - b).collect::<Vec<_>>();
    let (a, b) = (-d[via], -d[m]);
    let others_fixed = (0..k).filter(|&l| l != m && l != to && l != via).all(|l| d[l].abs() <= SIMPLEX_TOL);
    if a < -SIMPLEX_TOL || b < -SIMPLEX_TOL || !others_fixed || (d[to] - (a + b)).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidSegment(format!("q - p = {d:?} does not decompose with nonnegative weights")));
    }
    require_basin(game, p, m, "start")?;
    require_basin(game, q, m, "end")?;
    let s = sum(p, q);
    Ok(0.5 * d[to] * (payoff_at(game, m, &s) - payoff_at(game, to, &s)))
}

/// Consecutive straight segments out of `e_m`: segment `l` moves `t_l` of mass from
/// `m` to `targets[l]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuumBlockPath {
    pub steps: Vec<(usize, f64)>,
}

impl ContinuumBlockPath {
    /// `p^(0) = e_m, ..., p^(K)`.
    pub fn points(&self, k: usize, m: usize) -> Result<Vec<SimplexPoint>> {
        let mut pts = vec![SimplexPoint::vertex(k, m)];
        for &(j, t) in &self.steps {
            if j == m || j >= k || !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidSegment(format!("step ({}, {t}) is not admissible", j + 1)));
            }
            let next = pts.last().expect("nonempty").shifted(m, j, t)?;
            pts.push(next);
        }
        Ok(pts)
    }
}

/// Total straight-line cost of an admissible block path. Every point must lie in the
/// closed basin of `m` and the last one on its boundary.
pub fn omega(game: &OnePopGame, m: usize, path: &ContinuumBlockPath) -> Result<f64> {
    let pts = path.points(game.k(), m)?;
    for w in pts.windows(2) {
        for s in 0..=SEGMENT_SAMPLES {
            let u = s as f64 / SEGMENT_SAMPLES as f64;
            let v = w[0].coords().iter().zip(w[1].coords()).map(|(a, b)| a + u * (b - a)).collect();
            require_basin(game, &SimplexPoint(v), m, "segment point")?;
        }
    }
    let end = pts.last().expect("nonempty");
    if binding_constraints(game, end, m).is_empty() {
        return Err(Error::InvalidSegment("path does not end on the basin boundary".into()));
    }
    pts.windows(2).map(|w| straight_cost(game, m, &w[0], &w[1])).sum()
}

/// Cost of the single segment `e_m -> e_m + t (e_j - e_m)`, with no admissibility
/// check: `t (pi(m, .) - pi(j, .)) / 2` at `2 e_m + t (e_j - e_m)`.
pub fn single_segment_cost(game: &OnePopGame, m: usize, j: usize, t: f64) -> f64 {
    let mut s = vec![0.0; game.k()];
    s[m] = 2.0 - t;
    s[j] = t;
    0.5 * t * (payoff_at(game, m, &s) - payoff_at(game, j, &s))
}

/// Mixed equilibrium on the edge between `i` and `j`.
pub fn pairwise_equilibrium(game: &OnePopGame, i: usize, j: usize) -> Result<SimplexPoint> {
    let mut s = [i, j];
    s.sort_unstable();
    match mixed_equilibrium(game, &s)? {
        SupportOutcome::Equilibrium { weights } => SimplexPoint::new(weights),
        _ => Err(Error::Precondition(format!("no mixed equilibrium on {{{}, {}}}", i + 1, j + 1))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Straight to the pairwise equilibrium with the target.
    Direct,
    /// To the pairwise equilibrium with the other strategy, then along the shared
    /// boundary to the interior equilibrium.
    ViaOther,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition3 {
    pub target: usize,
    pub cost: f64,
    pub route: Route,
    /// Costs of both candidate routes where two exist.
    pub direct: f64,
    pub via_other: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThreeStrategyCosts {
    pub origin: usize,
    /// The strategy playing the role of "2": the one reached first on the cheap route.
    pub first: usize,
    pub second: usize,
    /// `-A_12 + A_13 + A_21 - A_23 - A_31 + A_32` in the original labels.
    pub skew: f64,
    pub relabeled: bool,
    pub transitions: Vec<Transition3>,
    pub note: Option<String>,
}

/// Cyclic skew `-A_oa + A_ob + A_ao - A_ab - A_bo + A_ba`.
pub fn direct_skew(game: &OnePopGame, o: usize, a: usize, b: usize) -> f64 {
    -game.a(o, a) + game.a(o, b) + game.a(a, o) - game.a(a, b) - game.a(b, o) + game.a(b, a)
}

/// Limit transition costs out of convention `origin` in a three-strategy game.
///
/// The two other strategies are ordered so the skew is positive (this is the
/// relabeling the closed form assumes); then the cost to the first is the straight
/// exit toward it and the cost to the second is the cheaper of the straight exit and
/// the route through the first.
pub fn transition_cost_limit_3(game: &OnePopGame, origin: usize) -> Result<ThreeStrategyCosts> {
    if game.k() != 3 {
        return Err(Error::Precondition(format!("needs exactly 3 strategies, got {}", game.k())));
    }
    if origin >= 3 {
        return Err(Error::OutOfRange { index: origin + 1, max: 3 });
    }
    let others = (0..3).filter(|&l| l != origin).collect::<Vec<_>>();
    let skew = direct_skew(game, origin, others[0], others[1]);
    let relabeled = skew < 0.0;
    let (a, b) = if relabeled { (others[1], others[0]) } else { (others[0], others[1]) };
    let note = (skew == 0.0).then(|| {
        "skew is zero (potential game): both orderings of mistakes cost the same and the minimising route need not be unique".to_string()
    });

    let rule = CostRule::LogitUnintentional;
    let c_a = pair_radius_one_pop(game, origin, a, rule)?;
    let c_b_direct = pair_radius_one_pop(game, origin, b, rule)?;
    let p_oa = pairwise_equilibrium(game, origin, a)?;
    let q = match mixed_equilibrium(game, &[0, 1, 2])? {
        SupportOutcome::Equilibrium { weights } => SimplexPoint::new(weights)?,
        _ => return Err(Error::Precondition("no interior mixed equilibrium".into())),
    };
    let leg = oblique_cost(game, origin, b, a, &p_oa, &q)?;
    let via = c_a + leg;
    let (cost_b, route_b) = if via < c_b_direct { (via, Route::ViaOther) } else { (c_b_direct, Route::Direct) };
    let mut transitions = vec![
        Transition3 { target: a, cost: c_a, route: Route::Direct, direct: c_a, via_other: None },
        Transition3 { target: b, cost: cost_b, route: route_b, direct: c_b_direct, via_other: Some(via) },
    ];
    transitions.sort_by_key(|t| t.target);
    Ok(ThreeStrategyCosts { origin, first: a, second: b, skew, relabeled, transitions, note })
}
