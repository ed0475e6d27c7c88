//! Seeded Monte Carlo checks of the coverage guarantees, and a simulator
//! for the $1/$5 betting game against a scripted adversary.
//!
//! Every replicate consumes exactly one 64-bit draw `b`, mapped to
//! `u = ((b >> 12) + ½)·2⁻⁵² ∈ (0, 1)` and then to a standard variate
//! `Y = F⁻¹(u)`. Replicates are split into blocks of [`BLOCK_SIZE`]; block
//! `k` reads ChaCha8 seeded with `seed` on stream `k`. Hit counts are
//! integer sums, so reports do not depend on how blocks are scheduled.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::densities::{verify_class_membership, Family, SymmetricDensity};
use crate::error::{domain, Error, Result};
use crate::location_ci::{beta, beta_star, robbins_bound};
use crate::scalar::serialize_extended;
use crate::scale_ci::{g_function, scale_coverage_bound};

pub const BLOCK_SIZE: u64 = 1 << 14;

/// Grid size used to vet adversary densities.
const MEMBERSHIP_GRID: usize = 2000;

/// Maps a raw 64-bit draw to the open unit interval.
#[inline]
pub fn unit_from_bits(bits: u64) -> f64 {
    // 52 bits: with 53 the top value would round to 1.
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimKind {
    LocationParametric,
    LocationNonparametric,
    Scale,
}

impl std::str::FromStr for SimKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "location_parametric" => Ok(SimKind::LocationParametric),
            "location_nonparametric" => Ok(SimKind::LocationNonparametric),
            "scale" => Ok(SimKind::Scale),
            other => domain(format!("unknown simulation kind `{other}`")),
        }
    }
}

impl SimKind {
    pub fn is_location(self) -> bool {
        !matches!(self, SimKind::Scale)
    }
}

/// One coverage experiment. Location kinds read `t`; the scale kind reads
/// `t1`, `t2` and `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub kind: SimKind,
    pub dist: Family<f64>,
    pub mu: f64,
    pub sigma: f64,
    pub a: f64,
    pub t: Option<f64>,
    pub t1: Option<f64>,
    #[serde(serialize_with = "serialize_opt_extended")]
    pub t2: Option<f64>,
    #[serde(serialize_with = "serialize_opt_extended")]
    pub m: Option<f64>,
    pub reps: u64,
    pub seed: u64,
}

fn serialize_opt_extended<S: serde::Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_extended(x, s),
        None => s.serialize_none(),
    }
}

impl SimConfig {
    pub fn location(kind: SimKind, dist: Family<f64>, mu: f64, sigma: f64, a: f64, t: f64) -> Self {
        SimConfig {
            kind,
            dist,
            mu,
            sigma,
            a,
            t: Some(t),
            t1: None,
            t2: None,
            m: None,
            reps: 100_000,
            seed: 0,
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn scale(dist: Family<f64>, mu: f64, sigma: f64, a: f64, t1: f64, t2: f64, m: f64) -> Self {
        SimConfig {
            kind: SimKind::Scale,
            dist,
            mu,
            sigma,
            a,
            t: None,
            t1: Some(t1),
            t2: Some(t2),
            m: Some(m),
            reps: 100_000,
            seed: 0,
        }
    }

    pub fn with_reps(mut self, reps: u64) -> Self {
        self.reps = reps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Standardized offset `(a − μ)/σ`.
    pub fn alpha(&self) -> f64 {
        (self.a - self.mu) / self.sigma
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return domain("reps must be at least 1");
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return domain(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.mu.is_finite() && self.a.is_finite()) {
            return domain("mu and a must be finite");
        }
        match self.kind {
            SimKind::LocationParametric | SimKind::LocationNonparametric => {
                let t = self.t.ok_or_else(|| Error::Domain("location simulation needs t".into()))?;
                robbins_bound(t)?;
            }
            SimKind::Scale => {
                let (t1, t2, m) = self.scale_params()?;
                g_function(0.0, t1, t2, &self.dist)?;
                if !(m > 0.0) {
                    return domain(format!("M must be positive, got {m}"));
                }
            }
        }
        Ok(())
    }

    fn scale_params(&self) -> Result<(f64, f64, f64)> {
        match (self.t1, self.t2, self.m) {
            (Some(t1), Some(t2), Some(m)) => Ok((t1, t2, m)),
            _ => domain("scale simulation needs t1, t2 and m"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub config: SimConfig,
    pub alpha: f64,
    pub hits: u64,
    pub reps: u64,
    pub empirical_coverage: f64,
    /// The guaranteed lower bound; absent when its hypothesis fails.
    pub theoretical_bound: Option<f64>,
    /// Coverage at this exact α, `1 − β(α, t)` or `G(α, t1, t2)`.
    pub exact_coverage: f64,
    /// `√(p(1 − p)/reps)` at the empirical proportion.
    pub mc_stderr: f64,
    pub seed: u64,
    /// `empirical_coverage − theoretical_bound`.
    pub slack: Option<f64>,
    /// Scale runs with `|μ − a| > σM`.
    pub hypothesis_violated: bool,
}

impl CoverageReport {
    /// Standard error at a given coverage proportion.
    pub fn stderr_at(&self, p: f64) -> f64 {
        binomial_stderr(p, self.reps)
    }

    /// `empirical ≥ bound − k·stderr`; vacuously true without a bound.
    pub fn within_bound(&self, k: f64) -> bool {
        self.theoretical_bound
            .map_or(true, |b| self.empirical_coverage >= b - k * self.mc_stderr)
    }
}

pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Counts replicates whose standard variate satisfies `hit`, one block per
/// task on the current rayon pool.
fn count_hits<H>(reps: u64, seed: u64, density: &Family<f64>, hit: H) -> u64
where
    H: Fn(f64) -> bool + Sync,
{
    let blocks = reps.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let n = BLOCK_SIZE.min(reps - block * BLOCK_SIZE);
            (0..n)
                .filter(|_| hit(density.quantile(unit_from_bits(rng.next_u64()))))
                .count() as u64
        })
        .sum()
}

/// The first `n` standard variates of a seed, in replicate order.
pub fn standard_variates(seed: u64, n: u64, density: &Family<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize);
    let mut block = 0;
    while (out.len() as u64) < n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        let take = BLOCK_SIZE.min(n - out.len() as u64);
        out.extend((0..take).map(|_| density.quantile(unit_from_bits(rng.next_u64()))));
        block += 1;
    }
    out
}

/// Draws `x = μ + σY` `reps` times and counts how often the interval covers
/// μ (location kinds) or σ (scale). A draw with `x = a` counts as a miss.
pub fn simulate_coverage(config: &SimConfig) -> Result<CoverageReport> {
    config.validate()?;
    let SimConfig { mu, sigma, a, .. } = *config;
    let alpha = config.alpha();
    let dist = &config.dist;
    let (hits, theoretical_bound, exact_coverage, violated) = match config.kind {
        SimKind::LocationParametric | SimKind::LocationNonparametric => {
            let t = config.t.expect("validated");
            let hits = count_hits(config.reps, config.seed, dist, |y| {
                let x = mu + sigma * y;
                let half = t * (x - a).abs();
                x - half <= mu && mu <= x + half
            });
            let bound = match config.kind {
                SimKind::LocationParametric => 1.0 - beta_star(t, dist)?.beta_star,
                _ => 1.0 - robbins_bound(t)?,
            };
            (hits, Some(bound), 1.0 - beta(alpha, t, dist)?, false)
        }
        SimKind::Scale => {
            let (t1, t2, m) = config.scale_params()?;
            let hits = count_hits(config.reps, config.seed, dist, |y| {
                let d = (mu + sigma * y - a).abs();
                d > 0.0 && d / t2 <= sigma && sigma <= d / t1
            });
            let violated = !((mu - a).abs() <= sigma * m);
            let bound = if violated {
                None
            } else {
                Some(scale_coverage_bound(t1, t2, m, dist)?.bound)
            };
            (hits, bound, g_function(alpha, t1, t2, dist)?, violated)
        }
    };
    let p = hits as f64 / config.reps as f64;
    Ok(CoverageReport {
        config: config.clone(),
        alpha,
        hits,
        reps: config.reps,
        empirical_coverage: p,
        theoretical_bound,
        exact_coverage,
        mc_stderr: binomial_stderr(p, config.reps),
        seed: config.seed,
        slack: theoretical_bound.map(|b| p - b),
        hypothesis_violated: violated,
    })
}

/// [`simulate_coverage`] on a dedicated pool of `threads` workers.
pub fn simulate_coverage_threads(config: &SimConfig, threads: usize) -> Result<CoverageReport> {
    local_pool(threads)?.install(|| simulate_coverage(config))
}

fn local_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))
}

/// Interval parameters for a sweep over α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepTarget {
    LocationParametric { t: f64 },
    LocationNonparametric { t: f64 },
    Scale {
        t1: f64,
        #[serde(serialize_with = "serialize_extended")]
        t2: f64,
        #[serde(serialize_with = "serialize_extended")]
        m: f64,
    },
}

impl SweepTarget {
    fn config(&self, dist: Family<f64>, alpha: f64) -> SimConfig {
        // a = 0, σ = 1, so μ = −α.
        match *self {
            SweepTarget::LocationParametric { t } => {
                SimConfig::location(SimKind::LocationParametric, dist, -alpha, 1.0, 0.0, t)
            }
            SweepTarget::LocationNonparametric { t } => {
                SimConfig::location(SimKind::LocationNonparametric, dist, -alpha, 1.0, 0.0, t)
            }
            SweepTarget::Scale { t1, t2, m } => SimConfig::scale(dist, -alpha, 1.0, 0.0, t1, t2, m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub alpha: f64,
    pub miscoverage: f64,
    pub mc_stderr: f64,
    /// `1 − exact coverage` at this α.
    pub exact_miscoverage: f64,
    /// `1 − guaranteed bound`, when the bound applies.
    pub bound_miscoverage: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstAlpha {
    pub target: SweepTarget,
    pub density: String,
    pub alpha_worst: f64,
    pub worst_miscoverage: f64,
    pub reps: u64,
    pub seed: u64,
    pub curve: Vec<CurvePoint>,
}

/// Empirical miscoverage across an α grid and its maximizer. Every grid
/// point reuses the same seed, so the curve is built from common random
/// numbers.
pub fn empirical_worst_case_alpha(
    target: SweepTarget,
    density: &Family<f64>,
    alpha_grid: &[f64],
    reps: u64,
    seed: u64,
) -> Result<WorstAlpha> {
    if alpha_grid.is_empty() {
        return domain("alpha grid is empty");
    }
    let mut curve = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        if !alpha.is_finite() {
            return domain(format!("alpha must be finite, got {alpha}"));
        }
        let report = simulate_coverage(&target.config(density.clone(), alpha).with_reps(reps).with_seed(seed))?;
        curve.push(CurvePoint {
            alpha,
            miscoverage: 1.0 - report.empirical_coverage,
            mc_stderr: report.mc_stderr,
            exact_miscoverage: 1.0 - report.exact_coverage,
            bound_miscoverage: report.theoretical_bound.map(|b| 1.0 - b),
        });
    }
    // First maximizer wins ties.
    let worst = curve
        .iter()
        .fold(&curve[0], |best, p| if p.miscoverage > best.miscoverage { p } else { best });
    Ok(WorstAlpha {
        target,
        density: density.name(),
        alpha_worst: worst.alpha,
        worst_miscoverage: worst.miscoverage,
        reps,
        seed,
        curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryMode {
    /// Always the first listed density.
    Fixed,
    /// Round `r` plays density `r mod n`.
    Cycle,
    /// A density drawn uniformly each round from the adversary's seed.
    SeededRandom,
}

/// How the adversary places μ each round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum MuRule {
    Constant { value: f64 },
    /// Cycled when the game outlasts the list.
    Sequence { values: Vec<f64> },
    Uniform { lo: f64, hi: f64 },
    Normal { mean: f64, sd: f64 },
    /// `μ = −α*σ`, the worst offset of the round's density for the player's `t`.
    WorstAlpha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryStrategy {
    pub mode: AdversaryMode,
    pub densities: Vec<Family<f64>>,
    pub mu_rule: MuRule,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "unit_sigma")]
    pub sigma: f64,
}

fn unit_sigma() -> f64 {
    1.0
}

impl AdversaryStrategy {
    pub fn fixed(density: Family<f64>, mu_rule: MuRule) -> Self {
        AdversaryStrategy {
            mode: AdversaryMode::Fixed,
            densities: vec![density],
            mu_rule,
            seed: 0,
            sigma: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.densities.is_empty() {
            return domain("adversary needs at least one density");
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return domain(format!("adversary sigma must be positive, got {}", self.sigma));
        }
        match &self.mu_rule {
            MuRule::Sequence { values } if values.is_empty() => domain("mu sequence is empty"),
            MuRule::Uniform { lo, hi } if !(lo <= hi) => domain("uniform mu rule needs lo <= hi"),
            MuRule::Normal { sd, .. } if !(*sd >= 0.0) => domain("normal mu rule needs sd >= 0"),
            _ => Ok(()),
        }?;
        for d in &self.densities {
            let report = verify_class_membership(d, MEMBERSHIP_GRID)?;
            if !report.in_class() {
                return Err(Error::UnsupportedDensity {
                    name: d.name(),
                    reason: "not unimodal and symmetric about zero".into(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundLog {
    pub round: u64,
    pub density: String,
    pub mu: f64,
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameRecord {
    pub t: f64,
    pub rounds: u64,
    pub covers: u64,
    pub misses: u64,
    /// `covers − 5·misses` dollars.
    pub player_payoff: f64,
    pub mean_payoff: f64,
    /// Sample standard deviation of the per-round payoff.
    pub payoff_std: f64,
    pub coverage: f64,
    pub mc_stderr: f64,
    pub seed: u64,
    pub log: Vec<RoundLog>,
}

pub const WIN: f64 = 1.0;
pub const LOSS: f64 = 5.0;

/// Plays `rounds` rounds: the adversary picks `(f, μ)`, `x = μ + σY` is
/// drawn with `Y ~ f`, and the player bets on `x ± t|x|`.
///
/// The environment stream comes from `seed`, the adversary's own choices
/// from `strategy.seed`.
pub fn play_game(strategy: &AdversaryStrategy, t: f64, rounds: u64, seed: u64) -> Result<GameRecord> {
    robbins_bound(t)?;
    if rounds == 0 {
        return domain("rounds must be at least 1");
    }
    strategy.validate()?;
    let sigma = strategy.sigma;
    let worst: Vec<f64> = match strategy.mu_rule {
        MuRule::WorstAlpha => strategy
            .densities
            .iter()
            .map(|d| beta_star(t, d).map(|b| b.alpha_star))
            .collect::<Result<_>>()?,
        _ => Vec::new(),
    };
    let mut env = ChaCha8Rng::seed_from_u64(seed);
    let mut adversary = ChaCha8Rng::seed_from_u64(strategy.seed);
    let n = strategy.densities.len();
    let mut covers = 0u64;
    let mut log = Vec::with_capacity(rounds as usize);
    for round in 0..rounds {
        let which = match strategy.mode {
            AdversaryMode::Fixed => 0,
            AdversaryMode::Cycle => (round % n as u64) as usize,
            AdversaryMode::SeededRandom => adversary.gen_range(0..n),
        };
        let density = &strategy.densities[which];
        let mu = match &strategy.mu_rule {
            MuRule::Constant { value } => *value,
            MuRule::Sequence { values } => values[(round % values.len() as u64) as usize],
            MuRule::Uniform { lo, hi } => lo + (hi - lo) * unit_from_bits(adversary.next_u64()),
            MuRule::Normal { mean, sd } => {
                mean + sd * Family::Normal.quantile(unit_from_bits(adversary.next_u64()))
            }
            MuRule::WorstAlpha => -worst[which] * sigma,
        };
        let x = mu + sigma * density.quantile(unit_from_bits(env.next_u64()));
        let half = t * x.abs();
        let (lo, hi) = (x - half, x + half);
        let covered = lo <= mu && mu <= hi;
        covers += covered as u64;
        log.push(RoundLog {
            round,
            density: density.name(),
            mu,
            x,
            lo,
            hi,
            covered,
        });
    }
    let misses = rounds - covers;
    let player_payoff = WIN * covers as f64 - LOSS * misses as f64;
    let mean_payoff = player_payoff / rounds as f64;
    let payoff_std = if rounds > 1 {
        let ss = covers as f64 * (WIN - mean_payoff).powi(2) + misses as f64 * (-LOSS - mean_payoff).powi(2);
        (ss / (rounds - 1) as f64).sqrt()
    } else {
        0.0
    };
    let coverage = covers as f64 / rounds as f64;
    Ok(GameRecord {
        t,
        rounds,
        covers,
        misses,
        player_payoff,
        mean_payoff,
        payoff_std,
        coverage,
        mc_stderr: binomial_stderr(coverage, rounds),
        seed,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F = Family<f64>;

    #[test]
    fn unit_mapping_stays_open() {
        assert!(unit_from_bits(0) > 0.0);
        assert!(unit_from_bits(u64::MAX) < 1.0);
        assert_eq!(unit_from_bits(1u64 << 63), 0.5 + 0.5 / (1u64 << 52) as f64);
    }

    #[test]
    fn uniform_draws_have_right_moments() {
        let ys = standard_variates(7, 200_000, &F::Uniform);
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        let var = ys.iter().map(|y| y * y).sum::<f64>() / ys.len() as f64;
        // U(−1, 1): mean 0, variance 1/3.
        assert!(mean.abs() < 0.005);
        assert!((var - 1.0 / 3.0).abs() < 0.005);
    }

    #[test]
    fn centered_guess_always_covers() {
        for t in [1.5, 5.0, 30.0] {
            let cfg = SimConfig::location(SimKind::LocationParametric, F::Normal, 0.7, 2.0, 0.7, t).with_reps(20_000);
            let r = simulate_coverage(&cfg).unwrap();
            assert_eq!(r.hits, r.reps);
            assert_eq!(r.empirical_coverage, 1.0);
        }
    }

    #[test]
    fn worst_case_coverage_matches_exact() {
        let cfg = SimConfig::location(SimKind::LocationParametric, F::Normal, -0.966_535_880_907_279_5, 1.0, 0.0, 5.0)
            .with_reps(400_000)
            .with_seed(42);
        let r = simulate_coverage(&cfg).unwrap();
        let exact = 1.0 - 0.096_790_046_321_509_34;
        assert!((r.exact_coverage - exact).abs() < 1e-9);
        assert!((r.empirical_coverage - exact).abs() < 4.0 * r.mc_stderr, "{r:?}");
        assert!(r.within_bound(3.0));
    }

    #[test]
    fn unprimed_scale_coverage() {
        let cfg = SimConfig::scale(F::Normal, 0.0, 1.0, 0.0, 0.125, f64::INFINITY, f64::INFINITY)
            .with_reps(400_000)
            .with_seed(3);
        let r = simulate_coverage(&cfg).unwrap();
        assert!((r.empirical_coverage - 0.900_523_550_339_774_2).abs() < 4.0 * r.mc_stderr);
        assert!(!r.hypothesis_violated);
    }

    #[test]
    fn violated_hypothesis_drops_bound() {
        let cfg = SimConfig::scale(F::Normal, 5.0, 1.0, 0.0, 0.125, 4.0, 2.7).with_reps(1000);
        let r = simulate_coverage(&cfg).unwrap();
        assert!(r.hypothesis_violated);
        assert_eq!(r.theoretical_bound, None);
        assert!(r.within_bound(3.0));
    }

    #[test]
    fn invalid_configs() {
        let base = SimConfig::location(SimKind::LocationParametric, F::Normal, 0.0, 1.0, 0.0, 5.0);
        assert!(simulate_coverage(&base.clone().with_reps(0)).is_err());
        let mut c = base.clone();
        c.sigma = -1.0;
        assert!(simulate_coverage(&c).is_err());
        let mut c = base.clone();
        c.t = Some(0.5);
        assert!(simulate_coverage(&c).is_err());
        let mut c = base;
        c.kind = SimKind::Scale;
        assert!(simulate_coverage(&c).is_err());
    }

    #[test]
    fn thread_count_does_not_change_reports() {
        let cfg = SimConfig::location(SimKind::LocationNonparametric, F::Cauchy, 0.3, 1.7, 1.1, 9.0)
            .with_reps(3 * BLOCK_SIZE + 17)
            .with_seed(99);
        let one = simulate_coverage_threads(&cfg, 1).unwrap();
        let four = simulate_coverage_threads(&cfg, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(simulate_coverage(&cfg).unwrap(), one);
    }

    #[test]
    fn reps_prefix_is_stable() {
        // The first n variates do not depend on the total count.
        let a = standard_variates(5, 100, &F::Normal);
        let b = standard_variates(5, 2 * BLOCK_SIZE, &F::Normal);
        assert_eq!(a[..], b[..100]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn location_coverage_is_invariant(
            mu in -5.0f64..5.0,
            alpha in -4.0f64..4.0,
            shift_exp in -3i32..4,
            scale_exp in -3i32..4,
            seed in any::<u64>(),
        ) {
            // Power-of-two shifts and scales keep the arithmetic exact.
            let (c, s) = (2f64.powi(shift_exp), 2f64.powi(scale_exp));
            let base = SimConfig::location(SimKind::LocationParametric, F::Laplace, mu, 1.0, mu + alpha, 4.0)
                .with_reps(4000)
                .with_seed(seed);
            let mut shifted = base.clone();
            shifted.mu += c;
            shifted.a += c;
            let mut scaled = base.clone();
            scaled.mu *= s;
            scaled.a *= s;
            scaled.sigma *= s;
            let h = simulate_coverage(&base).unwrap().hits;
            prop_assert!(simulate_coverage(&scaled).unwrap().hits == h);
            let hs = simulate_coverage(&shifted).unwrap().hits;
            // A shift can move x across a rounding boundary; allow one flip.
            prop_assert!(hs.abs_diff(h) <= 1);
        }
    }

    #[test]
    fn sweep_finds_the_hump() {
        let grid: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
        let w = empirical_worst_case_alpha(SweepTarget::LocationParametric { t: 5.0 }, &F::Normal, &grid, 50_000, 11).unwrap();
        assert_eq!(w.curve[0].miscoverage, 0.0);
        assert!((w.alpha_worst - 0.9665).abs() <= 0.3, "{}", w.alpha_worst);
        assert!(empirical_worst_case_alpha(SweepTarget::LocationParametric { t: 5.0 }, &F::Normal, &[], 10, 1).is_err());
    }

    #[test]
    fn game_accounting() {
        let s = AdversaryStrategy::fixed(F::Normal, MuRule::Constant { value: 0.0 });
        let g = play_game(&s, 9.0, 5000, 1).unwrap();
        assert_eq!(g.covers + g.misses, g.rounds);
        assert_eq!(g.player_payoff, g.covers as f64 - 5.0 * g.misses as f64);
        assert_eq!(g.log.len(), 5000);
        assert_eq!(g.covers, g.log.iter().filter(|r| r.covered).count() as u64);
        // μ = 0 = a: every round covers.
        assert_eq!(g.misses, 0);
        assert_eq!(g.payoff_std, 0.0);
        assert_eq!(play_game(&s, 9.0, 5000, 1).unwrap(), g);
    }

    #[test]
    fn game_against_worst_offsets() {
        let s = AdversaryStrategy {
            mode: AdversaryMode::Cycle,
            densities: F::unimodal_builtins(),
            mu_rule: MuRule::WorstAlpha,
            seed: 4,
            sigma: 2.0,
        };
        let g = play_game(&s, 9.0, 10_000, 8).unwrap();
        assert!(g.coverage >= 0.9 - 3.0 * g.mc_stderr, "{}", g.coverage);
        assert!(g.mean_payoff >= 0.4 - 3.0 * g.payoff_std / 100.0);
        let names: Vec<_> = g.log.iter().take(5).map(|r| r.density.clone()).collect();
        assert_eq!(names, ["normal", "laplace", "uniform", "cauchy", "triangular"]);
    }

    #[test]
    fn random_adversary_is_reproducible() {
        let s = AdversaryStrategy {
            mode: AdversaryMode::SeededRandom,
            densities: vec![F::Normal, F::Cauchy],
            mu_rule: MuRule::Uniform { lo: -3.0, hi: 3.0 },
            seed: 17,
            sigma: 1.0,
        };
        let a = play_game(&s, 9.0, 2000, 2).unwrap();
        assert_eq!(a, play_game(&s, 9.0, 2000, 2).unwrap());
        assert!(a.log.iter().all(|r| (-3.0..=3.0).contains(&r.mu)));
        assert!(a.log.iter().any(|r| r.density == "cauchy"));
    }

    #[test]
    fn game_rejects_bad_setups() {
        let s = AdversaryStrategy::fixed(F::Normal, MuRule::Constant { value: 0.0 });
        assert!(play_game(&s, 1.0, 10, 0).is_err());
        assert!(play_game(&s, 9.0, 0, 0).is_err());
        let empty = AdversaryStrategy::fixed(F::Normal, MuRule::Sequence { values: vec![] });
        assert!(play_game(&empty, 9.0, 10, 0).is_err());
    }
}
