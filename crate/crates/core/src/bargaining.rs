//! Bargaining frontiers, the three classical divisions and the stochastically
//! stable divisions of the discretized Nash demand game.

use serde::Serialize;

use crate::chain::Population;
use crate::error::{Error, Result};

const VALIDATE_POINTS: usize = 1000;
const ROOT_RESIDUAL: f64 = 1e-10;
const ORDER_TOL: f64 = 1e-9;
const ARGMAX_TOL: f64 = 1e-12;

/// A concave decreasing frontier `f: [0, sbar] -> [0, inf)`.
pub trait Frontier: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn slope(&self, x: f64) -> f64;
    fn curvature(&self, x: f64) -> f64;
    /// Right end of the domain, where the frontier reaches zero.
    fn sbar(&self) -> f64;

    /// Samples the interior and checks `f >= 0`, `f' < 0` and `f'' < 0`.
    fn validate(&self) -> Result<()> {
        let b = self.sbar();
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidFrontier(format!("domain end {b} must be positive")));
        }
        for i in 1..VALIDATE_POINTS {
            let x = b * i as f64 / VALIDATE_POINTS as f64;
            let (f, d, c) = (self.value(x), self.slope(x), self.curvature(x));
            if !(f >= 0.0 && d < 0.0 && c < 0.0) {
                return Err(Error::InvalidFrontier(format!("at x = {x}: f = {f}, f' = {d}, f'' = {c}")));
            }
        }
        Ok(())
    }
}

/// `f(x) = (a (1 - x/b))^p` on `[0, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFrontier {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl PowerFrontier {
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0 && p > 0.0 && p < 1.0) {
            return Err(Error::InvalidFrontier(format!("need a > 0, b > 0, 0 < p < 1; got a={a}, b={b}, p={p}")));
        }
        let f = Self { a, b, p };
        f.validate()?;
        Ok(f)
    }

    fn base(&self, x: f64) -> f64 {
        (self.a * (1.0 - x / self.b)).max(0.0)
    }
}

impl Frontier for PowerFrontier {
    fn value(&self, x: f64) -> f64 {
        self.base(x).powf(self.p)
    }

    fn slope(&self, x: f64) -> f64 {
        -self.p * self.a / self.b * self.base(x).powf(self.p - 1.0)
    }

    fn curvature(&self, x: f64) -> f64 {
        let k = self.a / self.b;
        self.p * (self.p - 1.0) * k * k * self.base(x).powf(self.p - 2.0)
    }

    fn sbar(&self) -> f64 {
        self.b
    }
}

/// Root of a function that is positive at `lo` and negative at `hi`.
pub fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64, what: &str) -> Result<f64> {
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo > 0.0 && ghi < 0.0) && !(glo < 0.0 && ghi > 0.0) {
        return Err(Error::NoSignChange(format!("{what}: g({lo}) = {glo}, g({hi}) = {ghi}")));
    }
    let rising = glo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) != rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn solve_root(b: f64, g: impl Fn(f64) -> f64, what: &str) -> Result<f64> {
    let s = bisect(0.0, b, &g, what)?;
    let r = g(s);
    if r.abs() > ROOT_RESIDUAL {
        return Err(Error::Numerical(format!("{what}: residual {r} at {s}")));
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionOrdering {
    /// `s_NB > s_I > s_E`.
    NashAboveEgalitarian,
    /// `s_E > s_I > s_NB`.
    NashBelowEgalitarian,
    /// All three coincide.
    Coincident,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BargainingSolutions {
    pub nash: f64,
    pub intentional: f64,
    pub egalitarian: f64,
    pub ordering: SolutionOrdering,
}

impl BargainingSolutions {
    /// Whether `s_I` lies strictly between the other two, or all coincide.
    pub fn ordering_holds(&self) -> bool {
        match self.ordering {
            SolutionOrdering::NashAboveEgalitarian => self.nash > self.intentional && self.intentional > self.egalitarian,
            SolutionOrdering::NashBelowEgalitarian => self.egalitarian > self.intentional && self.intentional > self.nash,
            SolutionOrdering::Coincident => {
                (self.nash - self.intentional).abs() <= ORDER_TOL && (self.nash - self.egalitarian).abs() <= ORDER_TOL
            }
        }
    }
}

/// Nash (`f/s = -f'`), intentional (`(f/s)^2 = -f'`) and egalitarian (`f = s`)
/// divisions.
pub fn solve_solutions(frontier: &dyn Frontier) -> Result<BargainingSolutions> {
    frontier.validate()?;
    let b = frontier.sbar();
    let nash = solve_root(b, |s| frontier.value(s) + s * frontier.slope(s), "Nash division")?;
    let intentional = solve_root(
        b,
        |s| {
            let f = frontier.value(s);
            f * f + s * s * frontier.slope(s)
        },
        "intentional division",
    )?;
    let egalitarian = solve_root(b, |s| frontier.value(s) - s, "egalitarian division")?;
    let ordering = if (nash - egalitarian).abs() <= ORDER_TOL {
        SolutionOrdering::Coincident
    } else if nash > egalitarian {
        SolutionOrdering::NashAboveEgalitarian
    } else {
        SolutionOrdering::NashBelowEgalitarian
    };
    Ok(BargainingSolutions { nash, intentional, egalitarian, ordering })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisionRule {
    Unintentional,
    Intentional,
}

impl std::str::FromStr for DivisionRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "unintentional" | "logit" => Ok(Self::Unintentional),
            "intentional" => Ok(Self::Intentional),
            _ => Err(format!("unknown mode '{s}' (expected unintentional or intentional)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    R1,
    R2,
    L1,
    L2,
}

impl Term {
    /// Population whose mistakes carry the transition.
    pub fn driving(self) -> Population {
        match self {
            Term::R1 | Term::L1 => Population::Beta,
            Term::R2 | Term::L2 => Population::Alpha,
        }
    }

    pub fn rightward(self) -> bool {
        matches!(self, Term::R1 | Term::R2)
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Term::R1 => "r1",
            Term::R2 => "r2",
            Term::L1 => "l1",
            Term::L2 => "l2",
        })
    }
}

/// Adjacent-transition costs out of convention `m`. Rightward terms are absent
/// at the last convention and leftward ones at the first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RlValues {
    pub m: usize,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub l1: Option<f64>,
    pub l2: Option<f64>,
}

impl RlValues {
    fn terms(&self, rule: DivisionRule) -> Vec<(Term, f64)> {
        let all = [(Term::R1, self.r1), (Term::R2, self.r2), (Term::L1, self.l1), (Term::L2, self.l2)];
        all.into_iter()
            .filter(|(t, _)| rule == DivisionRule::Unintentional || matches!(t, Term::R2 | Term::L1))
            .filter_map(|(t, v)| v.map(|v| (t, v)))
            .collect()
    }

    /// Smallest admissible term under `rule` and which one it is.
    pub fn radius(&self, rule: DivisionRule) -> (f64, Term) {
        self.terms(rule)
            .into_iter()
            .fold((f64::INFINITY, Term::R1), |acc, (t, v)| if v < acc.0 { (v, t) } else { acc })
    }
}

/// Number of demand levels `L = sbar / delta`, which must be an integer >= 3.
pub fn grid_size(frontier: &dyn Frontier, delta: f64) -> Result<usize> {
    let b = frontier.sbar();
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Precondition(format!("delta must be positive, got {delta}")));
    }
    let l = (b / delta).round();
    if (l * delta - b).abs() > 1e-9 * b || l < 3.0 {
        return Err(Error::Precondition(format!("sbar / delta = {} must be an integer of at least 3", b / delta)));
    }
    Ok(l as usize)
}

/// The four terms at a real index `mu`, without range checks.
fn rl_at(frontier: &dyn Frontier, delta: f64, mu: f64) -> [f64; 4] {
    let f = |x: f64| frontier.value(x);
    let (fm, fr, fl) = (f(delta * mu), f(delta * (mu + 1.0)), f(delta * (mu - 1.0)));
    [(fm - fr) * mu / (mu + 1.0), delta * mu * (fm - fr) / fm, fm / mu, delta * fm / fl]
}

pub fn rl_functions(frontier: &dyn Frontier, delta: f64, m: usize) -> Result<RlValues> {
    let l = grid_size(frontier, delta)?;
    if m < 1 || m > l - 1 {
        return Err(Error::OutOfRange { index: m, max: l - 1 });
    }
    let [r1, r2, l1, l2] = rl_at(frontier, delta, m as f64);
    let right = m < l - 1;
    let left = m > 1;
    Ok(RlValues {
        m,
        r1: right.then_some(r1),
        r2: right.then_some(r2),
        l1: left.then_some(l1),
        l2: left.then_some(l2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub rl: RlValues,
    pub radius: f64,
    pub binding: Term,
}

/// `min_j R_mj` for every convention `m = 1, ..., L-1`.
pub fn radius_profile(frontier: &dyn Frontier, delta: f64, rule: DivisionRule) -> Result<Vec<ProfilePoint>> {
    let l = grid_size(frontier, delta)?;
    (1..l)
        .map(|m| {
            let rl = rl_functions(frontier, delta, m)?;
            let (radius, binding) = rl.radius(rule);
            Ok(ProfilePoint { rl, radius, binding })
        })
        .collect()
}

/// Real index where the rising and falling sides of the radius cross:
/// `min(r1, r2) = min(l1, l2)` for the unintentional rule and `r2 = l1` for the
/// intentional one.
pub fn crossing(frontier: &dyn Frontier, delta: f64, rule: DivisionRule) -> Result<f64> {
    let l = grid_size(frontier, delta)?;
    let gap = |mu: f64| {
        let [r1, r2, l1, l2] = rl_at(frontier, delta, mu);
        match rule {
            DivisionRule::Unintentional => l1.min(l2) - r1.min(r2),
            DivisionRule::Intentional => l1 - r2,
        }
    };
    bisect(1.0, (l - 1) as f64, gap, "radius crossing").map_err(|_| {
        Error::NoCrossing(format!("rising and falling radius terms do not cross on [1, {}] at delta = {delta}", l - 1))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Division {
    pub delta: f64,
    pub rule: DivisionRule,
    /// Maximizing conventions (1-based demand index); two entries on an adjacent tie.
    pub m_star: Vec<usize>,
    /// `delta * m*`, or the midpoint on a tie.
    pub x_star: f64,
    pub radius: f64,
    pub binding: Term,
    pub driving: Population,
    pub crossing: Option<f64>,
    /// Whether `m*` is a neighbour of the crossing.
    pub crossing_agrees: Option<bool>,
}

fn exhaustive_division(frontier: &dyn Frontier, delta: f64, rule: DivisionRule) -> Result<Division> {
    let profile = radius_profile(frontier, delta, rule)?;
    let best = profile.iter().map(|p| p.radius).fold(f64::NEG_INFINITY, f64::max);
    let tol = ARGMAX_TOL * best.abs().max(1.0);
    let m_star: Vec<usize> = profile.iter().filter(|p| best - p.radius <= tol).map(|p| p.rl.m).collect();
    let top = profile[m_star[0] - 1];
    let x_star = delta * m_star.iter().sum::<usize>() as f64 / m_star.len() as f64;
    Ok(Division {
        delta,
        rule,
        m_star,
        x_star,
        radius: best,
        binding: top.binding,
        driving: top.binding.driving(),
        crossing: None,
        crossing_agrees: None,
    })
}

fn attach_crossing(d: &mut Division, mu: f64) {
    d.crossing = Some(mu);
    d.crossing_agrees = Some(d.m_star.iter().all(|&m| (m as f64 - mu).abs() < 1.0 + 1e-9));
}

/// Stochastically stable division by exhaustive argmax over conventions, with the
/// crossing-based candidate attached for comparison.
pub fn stable_division(frontier: &dyn Frontier, delta: f64, rule: DivisionRule) -> Result<Division> {
    frontier.validate()?;
    let mu = crossing(frontier, delta, rule)?;
    let mut d = exhaustive_division(frontier, delta, rule)?;
    attach_crossing(&mut d, mu);
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta: f64,
    pub m_star: usize,
    pub x_star: f64,
    pub target: f64,
    pub error: f64,
    pub binding: Term,
    pub driving: Population,
    pub warning: Option<String>,
}

/// Stable divisions over a decreasing list of grid steps, against the Nash
/// division (unintentional) or the intentional one.
pub fn convergence_sweep(frontier: &dyn Frontier, deltas: &[f64], rule: DivisionRule) -> Result<Vec<SweepRow>> {
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("grid steps must be strictly decreasing".into()));
    }
    let sol = solve_solutions(frontier)?;
    let target = match rule {
        DivisionRule::Unintentional => sol.nash,
        DivisionRule::Intentional => sol.intentional,
    };
    deltas
        .iter()
        .map(|&delta| {
            let mut d = exhaustive_division(frontier, delta, rule)?;
            let l = grid_size(frontier, delta)?;
            let mut notes = Vec::new();
            match crossing(frontier, delta, rule) {
                Ok(mu) => {
                    attach_crossing(&mut d, mu);
                    if d.crossing_agrees == Some(false) {
                        notes.push(format!("argmax {:?} is not adjacent to the crossing {mu:.6}", d.m_star));
                    }
                }
                Err(_) => notes.push("no interior crossing".to_string()),
            }
            if l < 10 {
                notes.push(format!("coarse grid (L = {l})"));
            }
            Ok(SweepRow {
                delta,
                m_star: d.m_star[0],
                x_star: d.x_star,
                target,
                error: (d.x_star - target).abs(),
                binding: d.binding,
                driving: d.driving,
                warning: (!notes.is_empty()).then(|| notes.join("; ")),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel_a() -> PowerFrontier {
        PowerFrontier::new(1.0, 3.0, 0.5).unwrap()
    }

    fn panel_b() -> PowerFrontier {
        PowerFrontier::new(3.0, 1.0, 0.5).unwrap()
    }

    #[test]
    fn frontier_values() {
        let f = panel_a();
        assert_eq!(f.value(0.0), 1.0);
        assert_eq!(f.value(3.0), 0.0);
        assert!((f.slope(1.5) + 1.0 / (6.0 * 0.5f64.sqrt())).abs() < 1e-14);
        assert!(PowerFrontier::new(1.0, 3.0, 1.0).is_err());
        assert!(PowerFrontier::new(-1.0, 3.0, 0.5).is_err());
    }

    #[test]
    fn panel_solutions() {
        let s = solve_solutions(&panel_a()).unwrap();
        assert!((s.nash - 2.0).abs() < 1e-9);
        assert!((s.egalitarian - (37f64.sqrt() - 1.0) / 6.0).abs() < 1e-9);
        // root of (1 - s/3)^(3/2) = s^2 / 6
        assert!((s.intentional - 1.474793).abs() < 1e-6);
        assert_eq!(s.ordering, SolutionOrdering::NashAboveEgalitarian);
        assert!(s.ordering_holds());

        let s = solve_solutions(&panel_b()).unwrap();
        assert!((s.nash - 2.0 / 3.0).abs() < 1e-9);
        assert!((s.egalitarian - (21f64.sqrt() - 3.0) / 2.0).abs() < 1e-9);
        assert_eq!(s.ordering, SolutionOrdering::NashBelowEgalitarian);
        assert!(s.ordering_holds());
    }

    #[test]
    fn coincident_solutions() {
        // (3 (1 - x/1.5))^(1/2) meets the diagonal at its Nash point x = 1
        let s = solve_solutions(&PowerFrontier::new(3.0, 1.5, 0.5).unwrap()).unwrap();
        assert_eq!(s.ordering, SolutionOrdering::Coincident);
        assert!((s.nash - 1.0).abs() < 1e-9 && (s.intentional - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rl_direct_evaluation() {
        let f = panel_a();
        let v = rl_functions(&f, 0.5, 2).unwrap();
        let fv = |x: f64| (1.0 - x / 3.0).sqrt();
        assert!((v.r2.unwrap() - (fv(1.0) - fv(1.5)) / fv(1.0)).abs() < 1e-15);
        assert!((v.l1.unwrap() - fv(1.0) * 0.5).abs() < 1e-15);
        assert!(rl_functions(&f, 0.5, 0).is_err());
        assert!(rl_functions(&f, 0.5, 6).is_err());
        let first = rl_functions(&f, 0.5, 1).unwrap();
        assert!(first.l1.is_none() && first.r1.is_some());
        let last = rl_functions(&f, 0.5, 5).unwrap();
        assert!(last.r2.is_none() && last.l2.is_some());
    }

    #[test]
    fn rl_monotone_on_sweep() {
        for f in [panel_a(), panel_b()] {
            let p = radius_profile(&f, f.sbar() / 200.0, DivisionRule::Unintentional).unwrap();
            for w in p.windows(2) {
                let (a, b) = (w[0].rl, w[1].rl);
                if let (Some(x), Some(y)) = (a.r1, b.r1) {
                    assert!(y > x);
                }
                if let (Some(x), Some(y)) = (a.r2, b.r2) {
                    assert!(y > x);
                }
                if let (Some(x), Some(y)) = (a.l1, b.l1) {
                    assert!(y < x);
                }
                if let (Some(x), Some(y)) = (a.l2, b.l2) {
                    assert!(y < x);
                }
            }
        }
    }

    #[test]
    fn small_delta_ratio() {
        let f = panel_a();
        let delta = 1e-3;
        let m = 1500;
        let x = delta * m as f64;
        let v = rl_functions(&f, delta, m).unwrap();
        let ratio = v.r2.unwrap() / v.l1.unwrap();
        let limit = -f.slope(x) * x * x / (f.value(x) * f.value(x));
        assert!((ratio - limit).abs() < 1e-2, "{ratio} vs {limit}");
    }

    #[test]
    fn stable_divisions_panel_a() {
        let f = panel_a();
        let u = stable_division(&f, 0.01, DivisionRule::Unintentional).unwrap();
        assert!((u.x_star - 2.0).abs() <= 0.05, "{}", u.x_star);
        assert_eq!(u.crossing_agrees, Some(true));
        let s = solve_solutions(&f).unwrap();
        let i = stable_division(&f, 0.01, DivisionRule::Intentional).unwrap();
        assert!((i.x_star - s.intentional).abs() <= 0.05, "{}", i.x_star);
        assert_eq!(i.crossing_agrees, Some(true));
    }

    #[test]
    fn binding_structure() {
        for f in [panel_a(), panel_b()] {
            let d = stable_division(&f, 0.01, DivisionRule::Unintentional).unwrap();
            let p = radius_profile(&f, 0.01, DivisionRule::Unintentional).unwrap();
            for pt in &p {
                if pt.rl.m < d.m_star[0] {
                    assert!(pt.binding.rightward());
                } else if pt.rl.m > *d.m_star.last().unwrap() {
                    assert!(!pt.binding.rightward());
                }
            }
        }
        let d = stable_division(&panel_b(), 0.01, DivisionRule::Unintentional).unwrap();
        assert!(matches!(d.binding, Term::R2 | Term::L2), "{:?}", d.binding);
    }

    #[test]
    fn intentional_driving_populations() {
        let p = radius_profile(&panel_a(), 0.01, DivisionRule::Intentional).unwrap();
        for pt in p {
            let want = if pt.binding.rightward() { Population::Alpha } else { Population::Beta };
            assert_eq!(pt.binding.driving(), want);
        }
    }

    #[test]
    fn sweep_errors_shrink() {
        let rows = convergence_sweep(&panel_a(), &[0.1, 0.05, 0.01], DivisionRule::Unintentional).unwrap();
        assert!(rows.windows(2).all(|w| w[1].error <= w[0].error + 1e-12));
        assert!(rows.last().unwrap().error <= 0.05);
        assert!(convergence_sweep(&panel_a(), &[0.01, 0.1], DivisionRule::Unintentional).is_err());
    }

    #[test]
    fn coarsest_grid_still_reports() {
        let f = panel_a();
        let rows = convergence_sweep(&f, &[1.0], DivisionRule::Unintentional).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].warning.is_some());
    }

    #[test]
    fn grid_must_divide_domain() {
        assert!(grid_size(&panel_a(), 0.7).is_err());
        assert!(grid_size(&panel_a(), 1.5).is_err());
        assert_eq!(grid_size(&panel_a(), 0.01).unwrap(), 300);
    }
}
