use std::fmt::Write as _;
use std::path::Path as FsPath;
use std::process::ExitCode;

use ldl_core::bargaining::{grid_size, SweepRow};
use ldl_core::exit::{exit_bruteforce_with, exit_reduced_with, Witness};
use ldl_core::game::{ndg_build, validate_one_pop, validate_two_pop, ConditionReport, GameParseError, SupportOutcome};
use ldl_core::stability::{cost_matrix_bruteforce, maxmin_report, measure_trace, ArborescenceMode, MeasurePoint};
use ldl_core::{
    arborescence_root, convergence_sweep, exit_limit_one_pop, exit_limit_two_pop, radius_matrix, solve_solutions,
    stable_division, CostMatrix, CostRule, DivisionRule, EscapeResult, Error, Game, Limits, OnePopGame, PopState,
    PowerFrontier, Provenance, StabilityReport, TwoPopGame, TwoPopState,
};
use serde::Serialize;

use crate::output::{csv_string, emit, json_string, one_based, sci, short, table_string, Format};
use crate::{BargainArgs, Command, ExitArgs, FrontierArgs, OutArgs, Solver, StabilityArgs, SweepArgs};

/// A failed command: message for stderr and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Guardrail { .. } => Self {
                code: 3,
                message: format!("{e}\nhint: rerun with --limit for the closed-form value, or raise LDL_GUARDRAIL_STATES"),
            },
            e => Self::invalid(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::io(format!("{e:#}"))
    }
}

type Outcome<T> = Result<T, Failure>;

pub fn run(cmd: Command) -> Outcome<ExitCode> {
    match cmd {
        Command::Validate { game, out } => validate(&game, &out),
        Command::Exit(args) => exit(&args).map(|_| ExitCode::SUCCESS),
        Command::Stability(args) => stability(&args).map(|_| ExitCode::SUCCESS),
        Command::Bargain(args) => bargain(&args).map(|_| ExitCode::SUCCESS),
        Command::Sweep(args) => sweep(&args).map(|_| ExitCode::SUCCESS),
    }
}

fn load_game(path: &FsPath) -> Outcome<Game> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("reading {}: {e}", path.display())))?;
    Game::from_json(&text).map_err(|e| match e {
        GameParseError::Json(j) => Failure::io(format!("{}:{}:{}: malformed game JSON: {j}", path.display(), j.line(), j.column())),
        GameParseError::Invalid(err) => Failure::io(format!("{}: {err}", path.display())),
    })
}

fn write(text: String, out: &OutArgs) -> Outcome<()> {
    Ok(emit(&text, out.out.as_deref())?)
}

fn convention_index(c: usize, k: usize) -> Outcome<usize> {
    if c == 0 || c > k {
        return Err(Error::OutOfRange { index: c, max: k }.into());
    }
    Ok(c - 1)
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

// ---- validate ----

#[derive(Serialize)]
struct ValidateJson<'a> {
    game_type: &'static str,
    k: usize,
    report: &'a ConditionReport,
    /// Conflict of interest per convention, 1-based order (two populations).
    conflict_of_interest: Option<Vec<bool>>,
    holds: bool,
}

fn support_cells(s: &[usize], outcome: &SupportOutcome) -> (String, String, String) {
    let label = format!("{{{}}}", one_based(s));
    match outcome {
        SupportOutcome::Equilibrium { weights } => (label, "equilibrium".into(), fmt_vec(weights)),
        SupportOutcome::Bimatrix { alpha, beta } => {
            (label, "equilibrium".into(), format!("alpha {} beta {}", fmt_vec(alpha), fmt_vec(beta)))
        }
        SupportOutcome::Absent { reason } => (label, "absent".into(), reason.clone()),
    }
}

fn fmt_vec(v: &[f64]) -> String {
    format!("({})", v.iter().map(|x| short(*x)).collect::<Vec<_>>().join(", "))
}

fn validate(path: &FsPath, out: &OutArgs) -> Outcome<ExitCode> {
    let game = load_game(path)?;
    let (report, conflicts, kind) = match &game {
        Game::One(g) => (validate_one_pop(g), None, "one_population"),
        Game::Two(g) => {
            let report = validate_two_pop(g, 0)?;
            let c = (0..g.k()).map(|m| g.conflict_of_interest(m)).collect::<Vec<_>>();
            (report, Some(c), "two_population")
        }
    };
    let holds = report.holds();
    let text = match out.format {
        Format::Json => json_string(&ValidateJson {
            game_type: kind,
            k: game.k(),
            report: &report,
            conflict_of_interest: conflicts.clone(),
            holds,
        })?,
        Format::Csv => {
            let mut rows = vec![
                vec!["coordination".into(), yes(report.coordination), String::new()],
                vec!["bandwagon".into(), yes(report.bandwagon), String::new()],
            ];
            for s in &report.supports {
                let (label, status, detail) = support_cells(&s.support, &s.outcome);
                rows.push(vec![format!("support {label}"), status, detail]);
            }
            for (m, c) in conflicts.iter().flatten().enumerate() {
                rows.push(vec![format!("conflict_of_interest {}", m + 1), yes(*c), String::new()]);
            }
            csv_string(&["check", "result", "detail"], &rows)?
        }
        Format::Table => {
            let mut s = String::new();
            let band = if matches!(game, Game::One(_)) { "strict MBP" } else { "weak WBP" };
            let _ = writeln!(s, "{kind} game, k = {}", game.k());
            let _ = writeln!(s, "coordination: {}", yes(report.coordination));
            let _ = writeln!(s, "bandwagon ({band}): {}", yes(report.bandwagon));
            if report.partial {
                let _ = writeln!(s, "support scan: partial (singletons, pairs and the full set)");
            }
            let rows = report
                .supports
                .iter()
                .map(|c| {
                    let (a, b, d) = support_cells(&c.support, &c.outcome);
                    vec![a, b, d]
                })
                .collect::<Vec<_>>();
            s.push_str(&table_string(&["support", "status", "weights"], &rows));
            if let Some(c) = &conflicts {
                let list = c.iter().enumerate().map(|(m, v)| format!("{}:{}", m + 1, yes(*v))).collect::<Vec<_>>();
                let _ = writeln!(s, "conflict of interest by convention: {}", list.join(" "));
            }
            for v in &report.violations {
                let _ = writeln!(s, "violated: {v}");
            }
            let _ = writeln!(s, "{}", if holds { "all conditions hold" } else { "conditions fail" });
            s
        }
    };
    write(text, out)?;
    if holds {
        Ok(ExitCode::SUCCESS)
    } else {
        if out.format != Format::Table || out.out.is_some() {
            for v in &report.violations {
                eprintln!("violated: {v}");
            }
        }
        Ok(ExitCode::from(2))
    }
}

// ---- exit ----

#[derive(Serialize)]
struct Number {
    value: f64,
    provenance: Provenance,
}

#[derive(Serialize)]
struct ExitTargetJson {
    target: usize,
    cost: Number,
    driving: Option<String>,
}

#[derive(Serialize)]
struct ExitJson {
    convention: usize,
    rule: CostRule,
    n: Option<u32>,
    cost: Number,
    normalized: Number,
    /// Strategies the escape leads to, 1-based.
    argmin: Vec<usize>,
    driving: Option<String>,
    targets: Vec<ExitTargetJson>,
    witness: Option<String>,
}

/// Strategies that strictly beat `m` at the exit state of a one-population path.
fn exit_targets_one(g: &OnePopGame, x: &PopState, m: usize) -> Vec<usize> {
    let p = g.raw_payoffs(x);
    (0..g.k()).filter(|&j| p[j] > p[m]).collect()
}

fn exit_targets_two(g: &TwoPopGame, x: &TwoPopState, m: usize) -> Vec<usize> {
    let pa: Vec<f64> = (0..g.k()).map(|i| g.raw_payoff_alpha(i, &x.beta)).collect();
    let pb: Vec<f64> = (0..g.k()).map(|j| g.raw_payoff_beta(j, &x.alpha)).collect();
    (0..g.k()).filter(|&j| pa[j] > pa[m] || pb[j] > pb[m]).collect()
}

/// Run-length rendering of a witness, e.g. `5x 1->2, 1x 1->3`.
fn compress_moves<S: Clone + PartialEq>(r: &EscapeResult<S>) -> Option<String> {
    match &r.witness {
        Witness::Path(p) => {
            let mut runs: Vec<(String, usize)> = Vec::new();
            for mv in p.moves() {
                let s = mv.to_string();
                match runs.last_mut() {
                    Some((last, c)) if *last == s => *c += 1,
                    _ => runs.push((s, 1)),
                }
            }
            Some(runs.iter().map(|(s, c)| format!("{c}x {s}")).collect::<Vec<_>>().join(", "))
        }
        Witness::Blocks(b) => Some(
            b.blocks
                .iter()
                .map(|(j, t)| format!("{t}x {}->{}", r.convention + 1, j + 1))
                .collect::<Vec<_>>()
                .join(", "),
        ),
        Witness::Limit => None,
    }
}

fn exit_json<S: Clone + PartialEq>(r: &EscapeResult<S>, argmin: Vec<usize>) -> ExitJson {
    ExitJson {
        convention: r.convention + 1,
        rule: r.rule,
        n: r.n,
        cost: Number { value: r.cost, provenance: r.provenance },
        normalized: Number { value: r.normalized, provenance: r.provenance },
        argmin: argmin.iter().map(|j| j + 1).collect(),
        driving: r.driving.map(|p| p.to_string()),
        targets: r
            .targets
            .iter()
            .map(|t| ExitTargetJson {
                target: t.target + 1,
                cost: Number { value: t.cost, provenance: r.provenance },
                driving: t.driving.map(|p| p.to_string()),
            })
            .collect(),
        witness: compress_moves(r),
    }
}

fn exit(args: &ExitArgs) -> Outcome<()> {
    let game = load_game(&args.game)?;
    let m = convention_index(args.convention, game.k())?;
    let rule: CostRule = args.rule.into();
    let limits = Limits::from_env();
    let solver = args.solver();
    if solver != Solver::Limit && args.n.is_empty() {
        return Err(Failure::invalid("--oracle and --reduced need --n"));
    }
    let results: Vec<ExitJson> = match solver {
        Solver::Limit => {
            let j = match &game {
                Game::One(g) => {
                    let r = exit_limit_one_pop(g, m, rule)?;
                    exit_json(&r, r.argmin.clone())
                }
                Game::Two(g) => {
                    let r = exit_limit_two_pop(g, m, rule)?;
                    exit_json(&r, r.argmin.clone())
                }
            };
            vec![j]
        }
        Solver::Reduced => {
            let Game::One(g) = &game else {
                return Err(Failure::invalid("--reduced applies to one-population games only"));
            };
            if rule != CostRule::LogitUnintentional {
                return Err(Failure::invalid("--reduced applies to the logit rule only"));
            }
            let mut out = Vec::new();
            for &n in &args.n {
                let r = exit_reduced_with(g, n, m, &limits)?;
                let end = match &r.witness {
                    Witness::Blocks(b) => b.to_path(g, n, m)?.end().clone(),
                    _ => unreachable!("reduced search returns blocks"),
                };
                out.push(exit_json(&r, exit_targets_one(g, &end, m)));
            }
            out
        }
        Solver::Oracle => {
            let mut out = Vec::new();
            for &n in &args.n {
                out.push(match &game {
                    Game::One(g) => {
                        let r = exit_bruteforce_with(g, n, m, rule, &limits)?;
                        let t = exit_targets_one(g, r.path().expect("oracle path").end(), m);
                        exit_json(&r, t)
                    }
                    Game::Two(g) => {
                        let r = exit_bruteforce_with(g, n, m, rule, &limits)?;
                        let t = exit_targets_two(g, r.path().expect("oracle path").end(), m);
                        exit_json(&r, t)
                    }
                });
            }
            out
        }
    };
    let text = match args.out.format {
        Format::Json => json_string(&results)?,
        Format::Csv => {
            let rows = results
                .iter()
                .map(|r| {
                    vec![
                        r.convention.to_string(),
                        r.rule.to_string(),
                        r.n.map_or_else(|| "inf".into(), |n| n.to_string()),
                        sci(r.cost.value),
                        sci(r.normalized.value),
                        r.argmin.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(";"),
                        r.driving.clone().unwrap_or_default(),
                        r.cost.provenance.to_string(),
                    ]
                })
                .collect::<Vec<_>>();
            csv_string(&["convention", "rule", "n", "cost", "normalized", "argmin", "driving", "provenance"], &rows)?
        }
        Format::Table => {
            let mut s = String::new();
            for r in &results {
                let argmin = r.argmin.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",");
                let size = r.n.map_or_else(|| "limit".to_string(), |n| format!("n = {n}"));
                let _ = writeln!(s, "convention {}, rule {}, {size}, {}", r.convention, r.rule, r.cost.provenance);
                match r.n {
                    None => {
                        let _ = writeln!(s, "{}, argmin j={argmin}", short(r.cost.value));
                        let rows = r
                            .targets
                            .iter()
                            .map(|t| vec![t.target.to_string(), short(t.cost.value), t.driving.clone().unwrap_or_default()])
                            .collect::<Vec<_>>();
                        s.push_str(&table_string(&["j", "cost", "driving"], &rows));
                    }
                    Some(_) => {
                        let _ = writeln!(s, "{} (per agent {}), argmin j={argmin}", short(r.cost.value), short(r.normalized.value));
                        if let Some(w) = &r.witness {
                            let _ = writeln!(s, "witness: {w}");
                        }
                    }
                }
            }
            s
        }
    };
    write(text, &args.out)
}

// ---- stability ----

#[derive(Serialize)]
struct Entry {
    i: usize,
    j: usize,
    value: f64,
    provenance: Option<Provenance>,
}

#[derive(Serialize)]
struct MeasureJson {
    beta: f64,
    /// Mass per convention, 1-based order.
    masses: Vec<Option<f64>>,
    argmax_convention: Option<usize>,
    method: ldl_core::stability::SolveMethod,
}

#[derive(Serialize)]
struct StabilityJson {
    matrix: &'static str,
    n: Option<u32>,
    rule: CostRule,
    entries: Vec<Entry>,
    incidence: Vec<Vec<bool>>,
    radii: Vec<f64>,
    candidates: Vec<usize>,
    local_resistance: bool,
    unique_cycle: bool,
    cycles: Vec<Vec<usize>>,
    stable: Option<usize>,
    in_tree_costs: Option<Vec<f64>>,
    in_tree_roots: Option<Vec<usize>>,
    measure_trace: Option<Vec<MeasureJson>>,
}

fn plus_one(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn oracle_matrix(game: &Game, n: u32, rule: CostRule, limits: &Limits) -> Outcome<CostMatrix> {
    Ok(match game {
        Game::One(g) => cost_matrix_bruteforce(g, n, rule, limits)?,
        Game::Two(g) => cost_matrix_bruteforce(g, n, rule, limits)?,
    })
}

fn trace(game: &Game, n: u32, rule: CostRule, betas: &[f64], limits: &Limits) -> Outcome<Vec<MeasurePoint>> {
    Ok(match game {
        Game::One(g) => measure_trace(g, n, rule, betas, limits)?,
        Game::Two(g) => measure_trace(g, n, rule, betas, limits)?,
    })
}

fn stability(args: &StabilityArgs) -> Outcome<()> {
    let game = load_game(&args.game)?;
    let rule: CostRule = args.rule.into();
    let limits = Limits::from_env();
    if (args.oracle || args.invariant) && args.n.is_none() {
        return Err(Failure::invalid("--oracle and --invariant need --n"));
    }
    if args.invariant && args.beta.is_empty() {
        return Err(Failure::invalid("--invariant needs --beta"));
    }
    let (matrix, label) = match (args.oracle, args.n) {
        (true, Some(n)) => (oracle_matrix(&game, n, rule, &limits)?, "C/n"),
        _ => (radius_matrix(&game, rule)?, "R"),
    };
    let mut report: StabilityReport = maxmin_report(&matrix)?;
    if !report.conclusive() {
        if let Some(n) = args.n {
            let costs = if args.oracle { matrix.clone() } else { oracle_matrix(&game, n, rule, &limits)? };
            report.arborescence = Some(arborescence_root(&costs, ArborescenceMode::Edmonds)?);
        }
    }
    let measures = if args.invariant {
        Some(trace(&game, args.n.expect("checked"), rule, &args.beta, &limits)?)
    } else {
        None
    };
    let k = matrix.k();
    let inc = ldl_core::stability::incidence(&matrix);
    let entries: Vec<Entry> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| Entry { i: i + 1, j: j + 1, value: matrix.get(i, j), provenance: matrix.provenance(i, j) })
        .collect();

    let text = match args.out.format {
        Format::Json => json_string(&StabilityJson {
            matrix: label,
            n: args.n,
            rule,
            entries,
            incidence: inc.clone(),
            radii: report.radii.clone(),
            candidates: plus_one(&report.candidates),
            local_resistance: report.local_resistance,
            unique_cycle: report.unique_cycle,
            cycles: report.cycles.iter().map(|c| plus_one(c)).collect(),
            stable: report.stable.map(|s| s + 1),
            in_tree_costs: report.arborescence.as_ref().map(|a| a.costs.clone()),
            in_tree_roots: report.arborescence.as_ref().map(|a| plus_one(&a.roots)),
            measure_trace: measures.as_ref().map(|ms| {
                ms.iter()
                    .map(|p| MeasureJson {
                        beta: p.beta,
                        masses: p.masses.clone(),
                        argmax_convention: p.argmax_convention.map(|c| c + 1),
                        method: p.method,
                    })
                    .collect()
            }),
        })?,
        Format::Csv => {
            let mut rows = Vec::new();
            let section = if label == "R" { "R" } else { "C" };
            for e in &entries {
                let prov = e.provenance.map(|p| p.to_string()).unwrap_or_default();
                rows.push(vec![section.into(), e.i.to_string(), e.j.to_string(), String::new(), sci(e.value), prov]);
            }
            for (i, row) in inc.iter().enumerate() {
                for (j, &b) in row.iter().enumerate() {
                    if i != j {
                        rows.push(vec!["Inc".into(), (i + 1).to_string(), (j + 1).to_string(), String::new(), u8::from(b).to_string(), String::new()]);
                    }
                }
            }
            for (i, r) in report.radii.iter().enumerate() {
                rows.push(vec!["radius".into(), (i + 1).to_string(), String::new(), String::new(), sci(*r), String::new()]);
            }
            if let Some(a) = &report.arborescence {
                for (i, c) in a.costs.iter().enumerate() {
                    rows.push(vec!["in_tree".into(), (i + 1).to_string(), String::new(), String::new(), sci(*c), "oracle".into()]);
                }
            }
            for p in measures.iter().flatten() {
                for (i, mass) in p.masses.iter().enumerate() {
                    if let Some(v) = mass {
                        rows.push(vec!["measure".into(), (i + 1).to_string(), String::new(), sci(p.beta), sci(*v), String::new()]);
                    }
                }
            }
            csv_string(&["section", "i", "j", "beta", "value", "provenance"], &rows)?
        }
        Format::Table => {
            let mut s = String::new();
            let size = args.n.map_or_else(String::new, |n| format!(", n = {n}"));
            let _ = writeln!(s, "{label} matrix, rule {rule}{size}");
            let mut header = vec!["i\\j".to_string()];
            header.extend((1..=k).map(|j| j.to_string()));
            let rows = (0..k)
                .map(|i| {
                    let mut r = vec![(i + 1).to_string()];
                    r.extend((0..k).map(|j| if i == j { "-".into() } else { short(matrix.get(i, j)) }));
                    r
                })
                .collect::<Vec<_>>();
            s.push_str(&table_string(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows));
            let radii = report.radii.iter().enumerate().map(|(i, r)| format!("{}:{}", i + 1, short(*r))).collect::<Vec<_>>();
            let _ = writeln!(s, "radius: {}", radii.join(" "));
            let arrows = (0..k)
                .map(|i| {
                    let t = (0..k).filter(|&j| inc[i][j]).map(|j| (j + 1).to_string()).collect::<Vec<_>>();
                    format!("{}->{}", i + 1, t.join("|"))
                })
                .collect::<Vec<_>>();
            let _ = writeln!(s, "incidence: {}", arrows.join(" "));
            let _ = writeln!(s, "maxmin candidates: {}", one_based(&report.candidates));
            let _ = writeln!(s, "local resistance test: {}", yes(report.local_resistance));
            let _ = writeln!(s, "unique incidence cycle through candidate: {}", yes(report.unique_cycle));
            match report.stable {
                Some(i) => {
                    let _ = writeln!(s, "stochastically stable convention: {}", i + 1);
                }
                None => {
                    let _ = writeln!(s, "maxmin tests inconclusive");
                }
            }
            if let Some(a) = &report.arborescence {
                let costs = a.costs.iter().enumerate().map(|(i, c)| format!("{}:{}", i + 1, short(*c))).collect::<Vec<_>>();
                let _ = writeln!(s, "minimum in-tree cost per root (C/n): {}", costs.join(" "));
                let _ = writeln!(s, "in-tree roots: {}", one_based(&a.roots));
            }
            if let Some(ms) = &measures {
                let mut header = vec!["beta".to_string()];
                header.extend((1..=k).map(|c| format!("mass e{c}")));
                header.push("argmax".into());
                header.push("method".into());
                let rows = ms
                    .iter()
                    .map(|p| {
                        let mut r = vec![short(p.beta)];
                        r.extend(p.masses.iter().map(|v| v.map_or_else(|| "-".into(), short)));
                        r.push(p.argmax_convention.map_or_else(|| "interior".into(), |c| format!("e{}", c + 1)));
                        r.push(format!("{:?}", p.method));
                        r
                    })
                    .collect::<Vec<_>>();
                s.push_str(&table_string(&header.iter().map(String::as_str).collect::<Vec<_>>(), &rows));
            }
            s
        }
    };
    write(text, &args.out)
}

// ---- bargain / sweep ----

const DIVISION_HEADER: [&str; 7] = ["delta", "m_star", "x_star", "target", "error", "binding_term", "driving_population"];

fn frontier(args: &FrontierArgs) -> Outcome<PowerFrontier> {
    let [a, b, p] = args.frontier[..] else {
        return Err(Failure::invalid("--frontier takes a,b,p"));
    };
    Ok(PowerFrontier::new(a, b, p)?)
}

fn division_cells(r: &SweepRow, m_star: &str) -> Vec<String> {
    vec![
        sci(r.delta),
        m_star.to_string(),
        sci(r.x_star),
        sci(r.target),
        sci(r.error),
        r.binding.to_string(),
        r.driving.to_string(),
    ]
}

#[derive(Serialize)]
struct BargainJson {
    frontier: PowerFrontier,
    solutions: ldl_core::BargainingSolutions,
    division: ldl_core::bargaining::Division,
    target: f64,
    error: f64,
    provenance: Provenance,
}

fn bargain(args: &BargainArgs) -> Outcome<()> {
    let f = frontier(&args.frontier)?;
    let mode = args.frontier.mode;
    let sol = solve_solutions(&f)?;
    let div = stable_division(&f, args.delta, mode)?;
    let target = match mode {
        DivisionRule::Unintentional => sol.nash,
        DivisionRule::Intentional => sol.intentional,
    };
    let error = (div.x_star - target).abs();
    if let Some(path) = &args.emit_game {
        let l = grid_size(&f, args.delta)?;
        let game = Game::Two(ndg_build(&f, l)?);
        std::fs::write(path, game.to_json() + "\n").map_err(|e| Failure::io(format!("writing {}: {e}", path.display())))?;
    }
    let m_star = div.m_star.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(";");
    let row = SweepRow {
        delta: div.delta,
        m_star: div.m_star[0],
        x_star: div.x_star,
        target,
        error,
        binding: div.binding,
        driving: div.driving,
        warning: None,
    };
    let text = match args.out.format {
        Format::Json => json_string(&BargainJson { frontier: f, solutions: sol, division: div, target, error, provenance: Provenance::ClosedForm })?,
        Format::Csv => csv_string(&DIVISION_HEADER, &[division_cells(&row, &m_star)])?,
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "frontier f(x) = ({} (1 - x/{}))^{}", f.a, f.b, f.p);
            let _ = writeln!(s, "Nash s_NB = {}", short(sol.nash));
            let _ = writeln!(s, "intentional s_I = {}", short(sol.intentional));
            let _ = writeln!(s, "egalitarian s_E = {}", short(sol.egalitarian));
            let _ = writeln!(s, "ordering: {:?}", sol.ordering);
            let _ = writeln!(s, "delta = {}, mode {:?}", args.delta, mode);
            let _ = writeln!(s, "m* = {m_star}, x* = {}", short(div.x_star));
            let _ = writeln!(s, "radius {} (binding {}, driven by {})", short(div.radius), div.binding, div.driving);
            if let Some(mu) = div.crossing {
                let agree = div.crossing_agrees.unwrap_or(false);
                let _ = writeln!(s, "crossing at m = {} ({})", short(mu), if agree { "agrees" } else { "DISAGREES with the argmax" });
            }
            let _ = writeln!(s, "target {}, error {}", short(target), short(error));
            s
        }
    };
    write(text, &args.out)
}

fn sweep(args: &SweepArgs) -> Outcome<()> {
    let f = frontier(&args.frontier)?;
    let rows = convergence_sweep(&f, &args.delta, args.frontier.mode)?;
    let text = match args.out.format {
        Format::Json => json_string(&rows)?,
        Format::Csv => csv_string(&DIVISION_HEADER, &rows.iter().map(|r| division_cells(r, &r.m_star.to_string())).collect::<Vec<_>>())?,
        Format::Table => {
            let cells = rows
                .iter()
                .map(|r| {
                    vec![
                        short(r.delta),
                        r.m_star.to_string(),
                        short(r.x_star),
                        short(r.target),
                        short(r.error),
                        r.binding.to_string(),
                        r.driving.to_string(),
                    ]
                })
                .collect::<Vec<_>>();
            table_string(&DIVISION_HEADER, &cells)
        }
    };
    for r in &rows {
        if let Some(w) = &r.warning {
            eprintln!("warning (delta = {}): {w}", r.delta);
        }
    }
    write(text, &args.out)
}
