//! `ldl`: escape costs, stochastic stability and bargaining divisions from the
//! command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldl_core::{CostRule, DivisionRule};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "ldl", version, about = "Escape costs, stochastic stability and evolutionary bargaining")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check coordination, the bandwagon property and mixed equilibria.
    Validate {
        game: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Minimum escape cost from a convention.
    Exit(ExitArgs),
    /// Radius matrix, maxmin tests, minimum in-trees and invariant measures.
    Stability(StabilityArgs),
    /// Bargaining solutions and the stable division at one grid step.
    Bargain(BargainArgs),
    /// Stable divisions over a decreasing list of grid steps.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Logit,
    Intentional,
    Uniform,
    Better,
}

impl From<RuleArg> for CostRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Logit => CostRule::LogitUnintentional,
            RuleArg::Intentional => CostRule::LogitIntentionalTwoPop,
            RuleArg::Uniform => CostRule::Uniform,
            RuleArg::Better => CostRule::BetterReply,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Oracle,
    Reduced,
    Limit,
}

#[derive(Debug, Args)]
pub struct ExitArgs {
    pub game: PathBuf,
    /// Convention to leave (1-based).
    #[arg(long)]
    pub convention: usize,
    /// Population sizes; omitted means the infinite-population limit.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    #[arg(long, value_enum, default_value_t = RuleArg::Logit)]
    pub rule: RuleArg,
    /// Exact Dijkstra search over the basin (default when --n is given).
    #[arg(long, group = "solver")]
    pub oracle: bool,
    /// Minimum over block paths (one population, logit).
    #[arg(long, group = "solver")]
    pub reduced: bool,
    /// Closed-form infinite-population cost.
    #[arg(long, group = "solver")]
    pub limit: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

impl ExitArgs {
    pub fn solver(&self) -> Solver {
        if self.reduced {
            Solver::Reduced
        } else if self.oracle || (!self.limit && !self.n.is_empty()) {
            Solver::Oracle
        } else {
            Solver::Limit
        }
    }
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    pub game: PathBuf,
    #[arg(long, value_enum, default_value_t = RuleArg::Logit)]
    pub rule: RuleArg,
    /// Population size for the exact transition costs and invariant measures.
    #[arg(long)]
    pub n: Option<u32>,
    /// Use the exact transition-cost matrix C/n at --n instead of the closed forms.
    #[arg(long)]
    pub oracle: bool,
    /// Report convention masses of the invariant measure at each --beta.
    #[arg(long)]
    pub invariant: bool,
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    /// Power frontier `f(x) = (a (1 - x/b))^p` as `a,b,p`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub frontier: Vec<f64>,
    #[arg(long, default_value = "unintentional")]
    pub mode: DivisionRule,
}

#[derive(Debug, Args)]
pub struct BargainArgs {
    #[command(flatten)]
    pub frontier: FrontierArgs,
    #[arg(long)]
    pub delta: f64,
    /// Also write the discrete Nash demand game at this grid step as game JSON.
    #[arg(long)]
    pub emit_game: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub frontier: FrontierArgs,
    /// Strictly decreasing grid steps.
    #[arg(long, value_delimiter = ',', required = true)]
    pub delta: Vec<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
