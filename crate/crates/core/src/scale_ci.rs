//! Scale intervals `(|x − a|/t2, |x − a|/t1)` from a single observation.
//!
//! At standardized offset `α = (a − μ)/σ` the interval covers σ with
//! probability
//! `G(α, t1, t2) = F(α − t1) + F(α + t2) − F(α − t2) − F(α + t1)`.
//! `G` has a local minimum at `α = 0`, so `G(0) = 2[F(t2) − F(t1)]` is a
//! valid lower bound as long as the prior bound `|μ − a| ≤ σM` keeps α
//! inside `[−M*, M*]`, where `M*` is the first positive α with
//! `G(α) = G(0)`. `t2 = ∞` gives a zero lower endpoint and needs no prior.

use serde::Serialize;

use crate::densities::{integration_breaks, pdf_derivative, SymmetricDensity};
use crate::error::{domain, Error, Result};
use crate::numerics::{find_root, integrate_with_breaks, minimize_scalar, OptSpec, Tolerances};
use crate::scalar::{serialize_extended, Scalar};

fn check_cutoffs<T: Scalar>(t1: T, t2: T) -> Result<()> {
    if !(t1 > T::zero() && t1.is_finite()) {
        return domain(format!("t1 must be positive and finite, got {t1}"));
    }
    if !(t2 > t1) {
        return domain(format!("t2 must exceed t1, got t1={t1}, t2={t2}"));
    }
    Ok(())
}

/// Coverage probability `G(α, t1, t2)` of the scale interval. `t2` may be
/// `+∞`, in which case its two terms are dropped analytically.
pub fn g_function<T, D>(alpha: T, t1: T, t2: T, density: &D) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_cutoffs(t1, t2)?;
    Ok(g_unchecked(alpha, t1, t2, density))
}

fn g_unchecked<T, D>(alpha: T, t1: T, t2: T, density: &D) -> T
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    let outer = if t2.is_infinite() {
        T::one()
    } else {
        density.cdf(alpha + t2) - density.cdf(alpha - t2)
    };
    let inner = density.cdf(alpha + t1) - density.cdf(alpha - t1);
    (outer - inner).max(T::zero()).min(T::one())
}

/// `G(0, t1, t2) = 2[F(t2) − F(t1)]`.
pub fn g_at_zero<T, D>(t1: T, t2: T, density: &D) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_cutoffs(t1, t2)?;
    let upper = if t2.is_infinite() { T::one() } else { density.cdf(t2) };
    Ok(T::lit(2.0) * (upper - density.cdf(t1)))
}

/// Derivatives of `G` at `α = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureAtZero<T> {
    /// `f(−t1) − f(−t2) + f(t2) − f(t1)`; zero for symmetric `f`.
    pub first_deriv: T,
    /// `2(f'(t1) − f'(t2))`, the textbook form of the curvature condition.
    /// For the normal with `t1 < 1 < t2` this is negative even though `G`
    /// has a minimum at zero: the sign is flipped relative to `g_second_deriv`.
    pub second_deriv: T,
    /// The actual `∂²G/∂α²` at zero, `f'(−t1) − f'(−t2) + f'(t2) − f'(t1)`.
    /// Positive exactly when zero is a strict local minimum.
    pub g_second_deriv: T,
}

/// First and second α-derivatives of `G` at zero, from the pdf and its
/// derivative (`f` and `f'` vanish at `t2 = ∞`).
pub fn g_curvature_at_zero<T, D>(t1: T, t2: T, density: &D) -> Result<CurvatureAtZero<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_cutoffs(t1, t2)?;
    let f = |y: T| if y.is_infinite() { T::zero() } else { density.pdf(y) };
    let df = |y: T| {
        if y.is_infinite() {
            T::zero()
        } else {
            pdf_derivative(density, y)
        }
    };
    Ok(CurvatureAtZero {
        first_deriv: f(-t1) - f(-t2) + f(t2) - f(t1),
        second_deriv: T::lit(2.0) * (df(t1) - df(t2)),
        g_second_deriv: df(-t1) - df(-t2) + df(t2) - df(t1),
    })
}

/// The prior-knowledge threshold `M*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct MStar<T> {
    #[serde(serialize_with = "serialize_extended")]
    pub value: T,
    /// False when `t2 = ∞` or no crossing exists before `tail_cut + t2`;
    /// `value` is then `+∞`.
    pub found_crossing: bool,
}

const LOCAL_MIN_PROBE: f64 = 1e-3;

/// `M* = min{α > 0 : G(α) = G(0)}`, by step doubling from `α = 10⁻³` until
/// `G` falls below `G(0)`, then root finding on the last doubling step.
pub fn m_star<T, D>(t1: T, t2: T, density: &D) -> Result<MStar<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    m_star_with(t1, t2, density, &Tolerances::default())
}

pub fn m_star_with<T, D>(t1: T, t2: T, density: &D, tol: &Tolerances<T>) -> Result<MStar<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_cutoffs(t1, t2)?;
    if t2.is_infinite() {
        return Ok(MStar {
            value: T::infinity(),
            found_crossing: false,
        });
    }
    let g0 = g_unchecked(T::zero(), t1, t2, density);
    let excess = |a: T| g_unchecked(a, t1, t2, density) - g0;
    // Coarser scalars need a wider probe to rise above rounding.
    let mut alpha = T::lit(LOCAL_MIN_PROBE).max(T::lit(4.0) * T::epsilon().sqrt().sqrt());
    // Rounding noise on a flat G must not pass for a minimum.
    if !(excess(alpha) > T::lit(64.0) * T::epsilon()) {
        return Err(Error::Condition(format!(
            "G(alpha, {t1}, {t2}) has no strict local minimum at 0 for {}",
            density.name()
        )));
    }
    let limit = density.tail_cut() + t2;
    while excess(alpha) >= T::zero() {
        if alpha > limit {
            return Ok(MStar {
                value: T::infinity(),
                found_crossing: false,
            });
        }
        alpha = alpha * T::lit(2.0);
    }
    let value = find_root(excess, alpha / T::lit(2.0), alpha, &tol.root)?;
    Ok(MStar {
        value,
        found_crossing: true,
    })
}

/// Tail approximation `M* ≈ t2 + F⁻¹(2F(t1) − 1)`, intended for `t1 < 1`
/// and `t2 > 3`.
pub fn m_star_gaussian_approx<T, D>(t1: T, t2: T, density: &D) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_cutoffs(t1, t2)?;
    if t2.is_infinite() {
        return Ok(T::infinity());
    }
    let p = T::lit(2.0) * density.cdf(t1) - T::one();
    Ok(t2 + density.quantile(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundBranch {
    /// `M ≤ M*`: the bound is `G(0)`.
    AtZero,
    /// `M > M*`: the bound is `inf_{0<α<M} G(α)`.
    Infimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CoverageBound<T> {
    pub bound: T,
    pub branch: BoundBranch,
    #[serde(serialize_with = "serialize_extended")]
    pub m_star: T,
    /// Where the infimum is attained (0 on the `AtZero` branch).
    #[serde(serialize_with = "serialize_extended")]
    pub argmin: T,
    /// Grid spacing of the infimum search, 0 when no search was needed.
    pub grid_resolution: T,
}

const INFIMUM_GRID: usize = 1024;

/// Guaranteed coverage of the scale interval under `|μ − a| ≤ σM`:
/// `G(0)` when `M ≤ M*`, else the infimum of `G` over `(0, M]`.
pub fn scale_coverage_bound<T, D>(t1: T, t2: T, m: T, density: &D) -> Result<CoverageBound<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    scale_coverage_bound_with(t1, t2, m, density, &Tolerances::default())
}

pub fn scale_coverage_bound_with<T, D>(
    t1: T,
    t2: T,
    m: T,
    density: &D,
    tol: &Tolerances<T>,
) -> Result<CoverageBound<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_cutoffs(t1, t2)?;
    if !(m > T::zero()) {
        return domain(format!("M must be positive, got {m}"));
    }
    let star = m_star_with(t1, t2, density, tol)?.value;
    if m <= star {
        return Ok(CoverageBound {
            bound: g_unchecked(T::zero(), t1, t2, density),
            branch: BoundBranch::AtZero,
            m_star: star,
            argmin: T::zero(),
            grid_resolution: T::zero(),
        });
    }
    if m.is_infinite() {
        // G → 0 as α → ∞.
        return Ok(CoverageBound {
            bound: T::zero(),
            branch: BoundBranch::Infimum,
            m_star: star,
            argmin: T::infinity(),
            grid_resolution: T::zero(),
        });
    }
    let g = |a: T| g_unchecked(a, t1, t2, density);
    let step = m / T::lit(INFIMUM_GRID as f64);
    let mut grid: Vec<(T, T)> = (1..=INFIMUM_GRID)
        .map(|i| {
            let a = if i == INFIMUM_GRID { m } else { step * T::lit(i as f64) };
            (a, g(a))
        })
        .collect();
    let (mut argmin, mut bound) = grid[INFIMUM_GRID - 1];
    grid.sort_by(|x, y| x.1.partial_cmp(&y.1).expect("finite G"));
    let refine = OptSpec {
        grid_points: 16,
        ..tol.opt
    };
    for &(a, v) in grid.iter().take(3) {
        let lo = (a - step).max(T::zero());
        let hi = (a + step).min(m);
        let (x, w) = minimize_scalar(g, lo, hi, &refine)?;
        for (cx, cv) in [(a, v), (x, w)] {
            if cv < bound {
                argmin = cx;
                bound = cv;
            }
        }
    }
    Ok(CoverageBound {
        bound,
        branch: BoundBranch::Infimum,
        m_star: star,
        argmin,
        grid_resolution: step,
    })
}

/// The prior bound `|μ − a| ≤ σM` under which a confidence holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ValidityCondition<T> {
    #[serde(serialize_with = "serialize_extended")]
    pub m: T,
    #[serde(serialize_with = "serialize_extended")]
    pub m_star: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ScaleInterval<T> {
    pub x: T,
    pub a: T,
    pub t1: T,
    #[serde(serialize_with = "serialize_extended")]
    pub t2: T,
    pub lo: T,
    pub hi: T,
    #[serde(serialize_with = "serialize_extended")]
    pub log_length: T,
    pub confidence_bound: T,
    pub validity_condition: ValidityCondition<T>,
    pub density: String,
}

impl<T: Scalar> ScaleInterval<T> {
    pub fn contains(&self, sigma: T) -> bool {
        self.lo <= sigma && sigma <= self.hi
    }
}

/// Builds `(|x − a|/t2, |x − a|/t1)` with its guaranteed confidence under
/// `|μ − a| ≤ σM`.
pub fn scale_interval<T, D>(x: T, a: T, t1: T, t2: T, m: T, density: &D) -> Result<ScaleInterval<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_cutoffs(t1, t2)?;
    if !(x.is_finite() && a.is_finite()) {
        return domain("x and a must be finite");
    }
    if x == a {
        return Err(Error::DegenerateObservation);
    }
    let bound = scale_coverage_bound(t1, t2, m, density)?;
    let dist = (x - a).abs();
    let lo = if t2.is_infinite() { T::zero() } else { dist / t2 };
    let hi = dist / t1;
    Ok(ScaleInterval {
        x,
        a,
        t1,
        t2,
        lo,
        hi,
        log_length: log_length_of(lo, hi),
        confidence_bound: bound.bound,
        validity_condition: ValidityCondition {
            m,
            m_star: bound.m_star,
        },
        density: density.name(),
    })
}

fn log_length_of<T: Scalar>(lo: T, hi: T) -> T {
    if lo <= T::zero() {
        return T::infinity();
    }
    // The ratio avoids cancellation between two nearly equal logs.
    let ratio = hi / lo;
    if ratio.is_finite() && ratio > T::zero() {
        ratio.ln()
    } else {
        hi.ln() - lo.ln()
    }
}

/// Length `log(hi) − log(lo)` in the scale metric; `+∞` when `lo = 0`.
pub fn log_length<T: Scalar>(interval: &ScaleInterval<T>) -> T {
    log_length_of(interval.lo, interval.hi)
}

/// A `(t1, t2)` pair meeting a confidence target under a prior bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ScaleDesign<T> {
    pub t1: T,
    #[serde(serialize_with = "serialize_extended")]
    pub t2: T,
    #[serde(serialize_with = "serialize_extended")]
    pub m: T,
    #[serde(serialize_with = "serialize_extended")]
    pub m_star: T,
    pub confidence_bound: T,
    pub iterations: usize,
}

const DESIGN_MARGIN: f64 = 0.5;
const DESIGN_TOL: f64 = 1e-6;

/// Chooses `(t1, t2)` with guaranteed coverage `confidence` when
/// `|μ − a| ≤ σM`.
///
/// With `M = ∞`, `t2 = ∞` and `t1` solves `2(1 − F(t1)) = confidence`.
/// Otherwise `t1` and `t2 = M − F⁻¹(2F(t1) − 1) + 0.5` are iterated to a
/// fixed point, and `t2` is widened until the exact `M*` reaches `M`.
pub fn design_scale_interval<T, D>(confidence: T, m: T, density: &D) -> Result<ScaleDesign<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    design_scale_interval_with(confidence, m, density, &Tolerances::default())
}

pub fn design_scale_interval_with<T, D>(
    confidence: T,
    m: T,
    density: &D,
    tol: &Tolerances<T>,
) -> Result<ScaleDesign<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    if !(confidence > T::zero() && confidence < T::one()) {
        return domain(format!("confidence must be in (0, 1), got {confidence}"));
    }
    if !(m > T::zero()) {
        return domain(format!("M must be positive, got {m}"));
    }
    let two = T::lit(2.0);
    let cut = density.tail_cut();
    // t1 with 2[F(t2) − F(t1)] = confidence.
    let solve_t1 = |t2: T| -> Result<T> {
        let upper = if t2.is_infinite() { T::one() } else { density.cdf(t2) };
        let excess = |t1: T| two * (upper - density.cdf(t1)) - confidence;
        let hi = t2.min(cut);
        if !(excess(T::zero()) > T::zero()) {
            return Err(Error::NoSolution(format!(
                "confidence {confidence} unreachable with t2 = {t2}"
            )));
        }
        let spec = crate::numerics::RootSpec {
            x_tol: T::lit(1e-14),
            ..tol.root
        };
        find_root(excess, T::zero(), hi, &spec)
    };

    if m.is_infinite() {
        let t1 = solve_t1(T::infinity())?;
        return Ok(ScaleDesign {
            t1,
            t2: T::infinity(),
            m,
            m_star: T::infinity(),
            confidence_bound: g_unchecked(T::zero(), t1, T::infinity(), density),
            iterations: 1,
        });
    }

    let margin = T::lit(DESIGN_MARGIN);
    let approx_t2 = |t1: T, margin: T| m - density.quantile(two * density.cdf(t1) - T::one()) + margin;
    let mut t1 = solve_t1(T::infinity())?;
    let mut t2 = approx_t2(t1, margin);
    let mut iterations = 0;
    loop {
        iterations += 1;
        let next = solve_t1(t2)?;
        let converged = (next - t1).abs() <= T::lit(DESIGN_TOL);
        t1 = next;
        t2 = approx_t2(t1, margin);
        if converged {
            break;
        }
        if iterations >= 100 {
            return Err(Error::NoSolution("t1/t2 fixed point did not settle".into()));
        }
    }
    let mut widen = margin;
    for _ in 0..40 {
        let star = m_star_with(t1, t2, density, tol)?.value;
        if star >= m {
            let bound = scale_coverage_bound_with(t1, t2, m, density, tol)?;
            if bound.bound >= confidence - T::lit(1e-12) {
                return Ok(ScaleDesign {
                    t1,
                    t2,
                    m,
                    m_star: star,
                    confidence_bound: bound.bound,
                    iterations,
                });
            }
        }
        widen = widen * two;
        t2 = approx_t2(t1, widen);
        t1 = solve_t1(t2)?;
        iterations += 1;
    }
    Err(Error::NoSolution(format!(
        "no verified design for confidence {confidence} with M = {m}"
    )))
}

/// Fisher-information quantities of the scale direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleGeometry<T> {
    /// `k = 4∫y²(ψ'(y))² dy` with `ψ = √f`.
    pub k: T,
    pub density: String,
}

impl<T: Scalar> ScaleGeometry<T> {
    /// Metric coefficient `g_σσ = (k − 1)/σ²`.
    pub fn g_sigma_sigma_at(&self, sigma: T) -> T {
        (self.k - T::one()) / (sigma * sigma)
    }

    /// Geodesic distance between scales `lo` and `hi` along constant
    /// location: `√(k − 1)·|log hi − log lo|`.
    pub fn distance(&self, lo: T, hi: T) -> T {
        (self.k - T::one()).sqrt() * log_length_of(lo.min(hi), lo.max(hi))
    }
}

const KINK_EXCLUSION: f64 = 1e-6;

/// `k = 4∫y²(ψ')² dy = ∫y² f'(y)²/f(y) dy` by quadrature over
/// `[−tail_cut, tail_cut]`, skipping points where `f` underflows.
///
/// Kinked densities lose a `10⁻⁶` neighbourhood of each kink; densities
/// vanishing on an interval are rejected because `ψ'` is unbounded at the
/// support edge.
pub fn fisher_k<T, D>(density: &D) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    fisher_k_with(density, &Tolerances::default())
}

pub fn fisher_k_with<T, D>(density: &D, tol: &Tolerances<T>) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    if density.has_bounded_support() {
        return Err(Error::UnsupportedDensity {
            name: density.name(),
            reason: "pdf vanishes on an interval; sqrt(f) is not differentiable at its edge".into(),
        });
    }
    let floor = T::lit(1e-300).max(T::min_positive_value());
    let integrand = |y: T| {
        let f = density.pdf(y);
        if f > floor {
            let d = pdf_derivative(density, y);
            y * y * d * d / f
        } else {
            T::zero()
        }
    };
    let cut = density.tail_cut();
    let breaks = integration_breaks(density);
    let gap = T::lit(KINK_EXCLUSION);
    let mut kinks: Vec<T> = density
        .kinks()
        .into_iter()
        .flat_map(|k| if k == T::zero() { vec![k] } else { vec![-k, k] })
        .collect();
    kinks.sort_by(|a, b| a.partial_cmp(b).expect("finite kinks"));
    let mut pieces = Vec::new();
    let mut left = -cut;
    for k in kinks {
        pieces.push((left, k - gap));
        left = k + gap;
    }
    pieces.push((left, cut));
    pieces
        .into_iter()
        .filter(|(lo, hi)| lo < hi)
        .try_fold(T::zero(), |acc, (lo, hi)| {
            Ok(acc + integrate_with_breaks(integrand, lo, hi, &breaks, &tol.quad)?)
        })
}

pub fn scale_geometry<T, D>(density: &D) -> Result<ScaleGeometry<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    Ok(ScaleGeometry {
        k: fisher_k(density)?,
        density: density.name(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::Family;

    type F = Family<f64>;

    // 30-digit reference values (normal cdf, root of G(α) − G(0)).
    const G0_EIGHTH_4: f64 = 0.900_460_207_856_107_974;
    const G0_EIGHTH_INF: f64 = 0.900_523_550_339_774_214;
    const G10_EIGHTH_4: f64 = 9.865_876_450_376_735e-10;
    const EXACT_M_STAR: [(f64, f64, f64); 6] = [
        (0.125, 4.0, 2.700_555_821_943_779_3),
        (0.125, 8.0, 6.715_459_491_493_980_3),
        (1.0 / 17.0, 5.0, 3.322_462_248_577_935_7),
        (1.0 / 17.0, 50.0, 48.324_390_290_473_230_6),
        (1.0 / 70.0, 5.0, 2.713_461_484_045_737_9),
        (1.0 / 70.0, 1000.0, 997.723_162_418_028_523),
    ];

    #[test]
    fn g_at_zero_identity() {
        for f in F::unimodal_builtins() {
            for &(t1, t2) in &[(0.1, 0.5), (0.125, 4.0), (0.3, f64::INFINITY)] {
                let g = g_function(0.0, t1, t2, &f).unwrap();
                let upper = if t2.is_infinite() { 1.0 } else { f.cdf(t2) };
                assert!((g - g_at_zero(t1, t2, &f).unwrap()).abs() < 1e-15);
                assert!((g - 2.0 * (upper - f.cdf(t1))).abs() < 1e-15, "{f}");
            }
        }
        let g = g_function(0.0, 0.125, 4.0, &F::Normal).unwrap();
        assert!((g - G0_EIGHTH_4).abs() < 1e-14);
        assert!((g - 0.9006).abs() < 5e-4);
    }

    #[test]
    fn g_far_out_vanishes() {
        let f = F::Normal;
        let a = f.tail_cut() + 4.0;
        assert!(g_function(a, 0.125, 4.0, &f).unwrap().abs() < 1e-8);
        let g10 = g_function(10.0, 0.125, 4.0, &f).unwrap();
        assert!((g10 - G10_EIGHTH_4).abs() < 1e-15);
    }

    #[test]
    fn g_symmetric_and_bounded() {
        for f in F::unimodal_builtins() {
            for &(t1, t2) in &[(0.05, 2.0), (0.125, 4.0), (0.5, 20.0), (0.2, f64::INFINITY)] {
                for i in 0..80 {
                    let a = 0.1 * i as f64;
                    let p = g_function(a, t1, t2, &f).unwrap();
                    let m = g_function(-a, t1, t2, &f).unwrap();
                    assert!((p - m).abs() <= 1e-9, "{f} a={a}");
                    assert!((0.0..=1.0).contains(&p));
                }
            }
        }
    }

    #[test]
    fn g_rejects_bad_cutoffs() {
        assert!(g_function(0.0, 2.0, 1.0, &F::Normal).is_err());
        assert!(g_function(0.0, 0.0, 1.0, &F::Normal).is_err());
        assert!(m_star(-1.0, 1.0, &F::Normal).is_err());
    }

    #[test]
    fn curvature_at_zero() {
        let c = g_curvature_at_zero(0.125, 4.0, &F::Normal).unwrap();
        assert!(c.first_deriv.abs() < 1e-15);
        // φ'(0.125) = −0.0494797…, φ'(4) = −0.000535…
        let second = 2.0 * (-0.049_479_710_868_093_686 + 0.000_535_320_903_059_541);
        assert!((c.second_deriv - second).abs() < 1e-12);
        assert!(c.second_deriv < 0.0);
        assert!((c.g_second_deriv + second).abs() < 1e-12);

        let c = g_curvature_at_zero(1.5, 4.0, &F::Normal).unwrap();
        let second = 2.0 * (-0.194_276_393_498_837_59 + 0.000_535_320_903_059_541);
        assert!((c.second_deriv - second).abs() < 1e-12);
        assert!(c.second_deriv < 0.0);

        // Second difference of G at 0.
        for &(t1, t2) in &[(0.125, 4.0), (0.5, 3.0), (1.0 / 17.0, 50.0), (1.5, 4.0)] {
            let c = g_curvature_at_zero(t1, t2, &F::Normal).unwrap();
            let h = 1e-3;
            let g = |a| g_function(a, t1, t2, &F::Normal).unwrap();
            let fd = (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
            assert!((fd - c.g_second_deriv).abs() < 1e-4, "{fd} vs {}", c.g_second_deriv);
        }
    }

    #[test]
    fn exact_thresholds() {
        for &(t1, t2, want) in &EXACT_M_STAR {
            let m = m_star(t1, t2, &F::Normal).unwrap();
            assert!(m.found_crossing);
            assert!((m.value - want).abs() < 1e-8, "({t1}, {t2}): {} vs {want}", m.value);
        }
    }

    #[test]
    fn threshold_shape() {
        for &(t1, t2, _) in &EXACT_M_STAR {
            let m = m_star(t1, t2, &F::Normal).unwrap().value;
            let g0 = g_at_zero(t1, t2, &F::Normal).unwrap();
            let g_m = g_function(m, t1, t2, &F::Normal).unwrap();
            assert!((g_m - g0).abs() < 1e-8);
            for i in 1..200 {
                let a = m * i as f64 / 200.0;
                assert!(g_function(a, t1, t2, &F::Normal).unwrap() > g0, "({t1},{t2}) at {a}");
            }
        }
    }

    #[test]
    fn infinite_t2_threshold() {
        let m = m_star(0.125, f64::INFINITY, &F::Normal).unwrap();
        assert!(m.value.is_infinite() && !m.found_crossing);
        assert!(m_star_gaussian_approx(0.125, f64::INFINITY, &F::Normal).unwrap().is_infinite());
    }

    #[test]
    fn no_local_minimum_is_reported() {
        // With a wide inner gap the uniform G is flat or falling at 0.
        assert!(matches!(m_star(0.5, 0.9, &F::Uniform), Err(Error::Condition(_))));
    }

    #[test]
    fn approximation_tracks_exact_threshold() {
        let approx = m_star_gaussian_approx(1.0 / 17.0, 50.0, &F::Normal).unwrap();
        assert!((approx - 48.32).abs() < 0.01);
        let approx = m_star_gaussian_approx(1.0 / 70.0, 1000.0, &F::Normal).unwrap();
        assert!((approx - 997.72).abs() < 0.01);
        let approx = m_star_gaussian_approx(0.125, 4.0, &F::Normal).unwrap();
        assert!((approx - 2.715).abs() < 1e-3);
        for &(t1, t2, exact) in &EXACT_M_STAR {
            let approx = m_star_gaussian_approx(t1, t2, &F::Normal).unwrap();
            assert!((approx - exact).abs() <= 0.05);
        }
    }

    #[test]
    fn coverage_bound_branches() {
        let b = scale_coverage_bound(0.125, 4.0, 2.7, &F::Normal).unwrap();
        assert_eq!(b.branch, BoundBranch::AtZero);
        assert!((b.bound - G0_EIGHTH_4).abs() < 1e-14);

        let b = scale_coverage_bound(0.125, f64::INFINITY, f64::INFINITY, &F::Normal).unwrap();
        assert_eq!(b.branch, BoundBranch::AtZero);
        assert!((b.bound - G0_EIGHTH_INF).abs() < 1e-14);

        let b = scale_coverage_bound(0.125, 4.0, 10.0, &F::Normal).unwrap();
        assert_eq!(b.branch, BoundBranch::Infimum);
        assert!(b.bound < G0_EIGHTH_4);
        // Brute-force infimum over a fine grid.
        let brute = (1..=100_000)
            .map(|i| g_function(10.0 * i as f64 / 100_000.0, 0.125, 4.0, &F::Normal).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(b.bound <= brute + 1e-15);
        assert!((b.bound - G10_EIGHTH_4).abs() < 1e-15);
        assert_eq!(b.argmin, 10.0);

        let b = scale_coverage_bound(0.125, 4.0, f64::INFINITY, &F::Normal).unwrap();
        assert_eq!(b.bound, 0.0);
        assert!(scale_coverage_bound(0.125, 4.0, 0.0, &F::Normal).is_err());
    }

    #[test]
    fn zero_lower_endpoint_intervals() {
        for &(t1, level, upper) in &[(0.125, 0.90, 8.0), (1.0 / 17.0, 0.95, 17.0), (1.0 / 70.0, 0.99, 70.0)] {
            let iv = scale_interval(1.0, 0.0, t1, f64::INFINITY, f64::INFINITY, &F::Normal).unwrap();
            assert_eq!(iv.lo, 0.0);
            assert!((iv.hi - upper).abs() < 1e-12);
            assert!(iv.log_length.is_infinite());
            assert!((iv.confidence_bound * 100.0).round() / 100.0 >= level, "{iv:?}");
        }
        let iv = scale_interval(1.0, 0.0, 0.125, f64::INFINITY, f64::INFINITY, &F::Normal).unwrap();
        assert!(iv.confidence_bound >= 0.90);
        let iv = scale_interval(1.0, 0.0, 1.0 / 17.0, f64::INFINITY, f64::INFINITY, &F::Normal).unwrap();
        assert!(iv.confidence_bound >= 0.95);
    }

    #[test]
    fn degenerate_observation() {
        assert_eq!(
            scale_interval(1.0, 1.0, 0.125, 4.0, 2.0, &F::Normal),
            Err(Error::DegenerateObservation)
        );
    }

    #[test]
    fn log_lengths() {
        let iv = scale_interval(1.0, 0.0, 0.125, 4.0, 2.0, &F::Normal).unwrap();
        assert!((log_length(&iv) - 32f64.ln()).abs() < 1e-14);
        assert!((iv.log_length - 3.465_735_902_799_726_5).abs() < 1e-12);
        let iv = scale_interval(1.0, 0.0, 0.125, f64::INFINITY, 2.0, &F::Normal).unwrap();
        assert!(log_length(&iv).is_infinite());
        assert_eq!(log_length_of(0.7, 0.7), 0.0);
        assert!((log_length_of(1e-300_f64, 1e300) - 1381.551_055_796_427_4).abs() < 1e-9);
        for &(c, r) in &[(0.37_f64, 1.5_f64), (1e-3, 2.0), (1e4, 1e6)] {
            assert!((log_length_of(c, c * r) - f64::ln(r)).abs() <= 4.0 * f64::EPSILON * f64::ln(r));
        }
    }

    #[test]
    fn interval_scales_equivariantly() {
        use proptest::prelude::*;
        proptest!(ProptestConfig::with_cases(64), |(d in 0.01f64..100.0, c in 0.01f64..100.0)| {
            let base = scale_interval(d, 0.0, 0.125, 4.0, 2.0, &F::Normal).unwrap();
            let scaled = scale_interval(c * d, 0.0, 0.125, 4.0, 2.0, &F::Normal).unwrap();
            prop_assert!((scaled.lo - c * base.lo).abs() <= 1e-12 * scaled.lo);
            prop_assert!((scaled.hi - c * base.hi).abs() <= 1e-12 * scaled.hi);
            prop_assert!((scaled.log_length - base.log_length).abs() <= 1e-12);
        });
    }

    #[test]
    fn design_without_prior() {
        let d = design_scale_interval(0.90, f64::INFINITY, &F::Normal).unwrap();
        assert!(d.t2.is_infinite());
        assert!((d.t1 - 0.125_661_346_855_074_04).abs() < 1e-9);
        assert!((1.0 / d.t1 - 7.96).abs() < 0.01);
        let d = design_scale_interval(0.95, f64::INFINITY, &F::Normal).unwrap();
        assert!((d.t1 - 0.062_706_777_943_213_79).abs() < 1e-9);
        assert!(1.0 / d.t1 <= 17.0);
    }

    #[test]
    fn design_with_prior() {
        for &(conf, m) in &[(0.99, 1200.0), (0.90, 1200.0), (0.95, 3.0)] {
            let d = design_scale_interval(conf, m, &F::Normal).unwrap();
            assert!(d.m_star >= m, "{d:?}");
            let b = scale_coverage_bound(d.t1, d.t2, m, &F::Normal).unwrap();
            assert!(b.bound >= conf - 1e-12, "{d:?}");
        }
        assert!(design_scale_interval(1.0, 3.0, &F::Normal).is_err());
        assert!(design_scale_interval(0.9, -1.0, &F::Normal).is_err());
    }

    #[test]
    fn fisher_information() {
        let k = fisher_k(&F::Normal).unwrap();
        assert!((k - 3.0).abs() < 1e-6);
        let geo = scale_geometry(&F::Normal).unwrap();
        assert!((geo.g_sigma_sigma_at(1.0) - 2.0).abs() < 1e-6);
        assert!((geo.g_sigma_sigma_at(2.0) - 0.5).abs() < 1e-6);
        // Laplace: y² f'²/f = y² f, so k is the variance, 2.
        assert!((fisher_k(&F::Laplace).unwrap() - 2.0).abs() < 1e-6);
        // Student-t: k = 3(ν+1)/(ν+3); Cauchy is ν = 1.
        assert!((fisher_k(&F::Cauchy).unwrap() - 1.5).abs() < 1e-6);
        let t4 = F::student_t(4.0).unwrap();
        assert!((fisher_k(&t4).unwrap() - 15.0 / 7.0).abs() < 1e-6);
        assert!(matches!(fisher_k(&F::Uniform), Err(Error::UnsupportedDensity { .. })));
        assert!(matches!(fisher_k(&F::Triangular), Err(Error::UnsupportedDensity { .. })));
    }

    #[test]
    fn fisher_k_by_brute_force_sum() {
        // Riemann sum of 4y²(ψ')² with ψ' from a finite difference of √φ.
        let psi = |y: f64| F::Normal.pdf(y).sqrt();
        let (h, dy) = (1e-5, 1e-3);
        let mut k = 0.0;
        let mut y = -12.0;
        while y < 12.0 {
            let d = (psi(y + h) - psi(y - h)) / (2.0 * h);
            k += 4.0 * y * y * d * d * dy;
            y += dy;
        }
        assert!((k - fisher_k(&F::Normal).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn geodesic_distance_is_logarithmic() {
        let geo = scale_geometry(&F::Normal).unwrap();
        let d = geo.distance(0.25, 8.0);
        assert!((d - 2f64.sqrt() * 32f64.ln()).abs() < 1e-6);
        assert!((geo.distance(3.0, 96.0) - d).abs() < 1e-12);
    }
}
