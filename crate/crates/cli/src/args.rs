use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use osci_core::densities::Family;
use osci_core::location_ci::Method;
use osci_core::mc_verify::SimKind;
use osci_core::scalar::parse_extended;

#[derive(Debug, Parser)]
#[command(name = "osci", version, about = "Confidence intervals for location and scale from one observation")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub out: OutputFormat,

    /// Seed for simulations and games.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,

    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an interval from an observation.
    #[command(subcommand)]
    Interval(IntervalCmd),
    /// Evaluate a single quantity.
    #[command(subcommand)]
    Compute(ComputeCmd),
    /// Invert a confidence requirement.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Monte Carlo coverage checks.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Play the $1/$5 coverage game against a scripted adversary.
    Game(GameArgs),
    /// Reproduce published tables.
    #[command(subcommand)]
    Table(TableCmd),
    /// Worked design scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
}

pub fn parse_family(s: &str) -> Result<Family<f64>, String> {
    s.parse().map_err(|e: osci_core::Error| e.to_string())
}

/// A float that may also be `inf`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    parse_extended(s).ok_or_else(|| format!("`{s}` is not a number or `inf`"))
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: osci_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<SimKind, String> {
    s.parse().map_err(|e: osci_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct DistArg {
    /// Density: normal, laplace, uniform, cauchy, triangular or student_t:<df>.
    #[arg(long, default_value = "normal", value_parser = parse_family)]
    pub dist: Family<f64>,
}

#[derive(Debug, Args)]
pub struct ScaleCutoffs {
    #[arg(long, allow_negative_numbers = true)]
    pub t1: f64,
    /// Upper cutoff; `inf` for a zero lower endpoint.
    #[arg(long, value_parser = parse_real)]
    pub t2: f64,
}

#[derive(Debug, Subcommand)]
pub enum IntervalCmd {
    /// x ± t|x − a|.
    Location {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        center: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value = "parametric", value_parser = parse_method)]
        method: Method,
        #[command(flatten)]
        dist: DistArg,
    },
    /// (|x − a|/t2, |x − a|/t1).
    Scale {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        center: f64,
        #[command(flatten)]
        cutoffs: ScaleCutoffs,
        /// Prior bound |μ − a| ≤ Mσ; `inf` for none.
        #[arg(long, value_parser = parse_real)]
        m: f64,
        #[command(flatten)]
        dist: DistArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum ComputeCmd {
    /// Miscoverage β(α, t).
    Beta {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Worst-case miscoverage over α.
    BetaStar {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Use the generic maximizer even where a closed form exists.
        #[arg(long)]
        numeric: bool,
        #[command(flatten)]
        dist: DistArg,
    },
    /// β(α, t) over an α grid, for plotting.
    BetaProfile {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        alpha_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Prior-knowledge threshold M*.
    MStar {
        #[command(flatten)]
        cutoffs: ScaleCutoffs,
        /// Use the tail approximation instead of the exact root.
        #[arg(long)]
        approx: bool,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Scale coverage G(α, t1, t2).
    G {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        cutoffs: ScaleCutoffs,
        #[command(flatten)]
        dist: DistArg,
    },
    /// G(α, t1, t2) over an α grid, for plotting.
    GProfile {
        #[command(flatten)]
        cutoffs: ScaleCutoffs,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        alpha_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Derivatives of G at α = 0.
    Curvature {
        #[command(flatten)]
        cutoffs: ScaleCutoffs,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Guaranteed scale coverage under |μ − a| ≤ Mσ.
    CoverageBound {
        #[command(flatten)]
        cutoffs: ScaleCutoffs,
        #[arg(long, value_parser = parse_real)]
        m: f64,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Fisher-information constant k and the scale metric.
    FisherK {
        #[command(flatten)]
        dist: DistArg,
        /// Scale at which to report g_σσ.
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// 1/(1 + t).
    RobbinsBound {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// E(L) of x ± t|x − a| under a location-scale model.
    ExpectedLength {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        center: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        sigma: f64,
        #[command(flatten)]
        dist: DistArg,
    },
    /// Check symmetry, unimodality and normalization on a grid.
    Membership {
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[command(flatten)]
        dist: DistArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    /// Smallest t reaching a confidence.
    LocationT {
        #[arg(long)]
        confidence: f64,
        /// Solve 1/(1 + t) = 1 − confidence instead.
        #[arg(long)]
        nonparametric: bool,
        #[command(flatten)]
        dist: DistArg,
    },
    /// (t1, t2) reaching a confidence under |μ − a| ≤ Mσ.
    ScaleDesign {
        #[arg(long)]
        confidence: f64,
        #[arg(long, value_parser = parse_real)]
        m: f64,
        #[command(flatten)]
        dist: DistArg,
    },
}

#[derive(Debug, Args)]
pub struct SimTarget {
    #[arg(long, value_parser = parse_kind)]
    pub kind: SimKind,
    #[command(flatten)]
    pub dist: DistArg,
    /// Location multiplier (location kinds).
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t1: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub t2: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCmd {
    /// Empirical coverage at one parameter point.
    Coverage {
        #[command(flatten)]
        target: SimTarget,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        sigma: f64,
        #[arg(long, allow_negative_numbers = true)]
        center: f64,
    },
    /// Empirical miscoverage curve over α and its maximizer.
    WorstAlpha {
        #[command(flatten)]
        target: SimTarget,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        alpha_max: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha_step: f64,
    },
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 200)]
    pub rounds: u64,
    /// TOML strategy file.
    #[arg(long)]
    pub adversary: PathBuf,
    /// Omit the per-round log.
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Debug, Subcommand)]
pub enum TableCmd {
    /// The nine 90/95/99% scale intervals, recomputed.
    PaperExamples,
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCmd {
    /// Design a scale interval from a location prior and a resolution.
    Desk {
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        center: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        halfwidth: f64,
        #[arg(long, default_value_t = 0.0025, allow_negative_numbers = true)]
        resolution: f64,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        /// Resolution is read as sigma_rule·σ ≥ resolution.
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        sigma_rule: f64,
        /// Observation; adds concrete intervals.
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        /// Reference pair to verify (defaults to 1/70 and 1500).
        #[arg(long, requires = "check_t2")]
        check_t1: Option<f64>,
        #[arg(long, value_parser = parse_real, requires = "check_t1")]
        check_t2: Option<f64>,
        /// Skip the reference check.
        #[arg(long, conflicts_with_all = ["check_t1", "check_t2"])]
        no_check: bool,
    },
}
