//! Location intervals `x ± t|x − a|` from a single observation.
//!
//! With `Y = (X − μ)/σ` and `α = (a − μ)/σ` the interval misses μ exactly
//! when `|Y| > t|Y − α|`, an event of probability
//! `β(α, t) = |∫_{αt/(t+1)}^{αt/(t−1)} f(y) dy|`. The parametric interval
//! guarantees `1 − sup_α β(α, t)` for a known density; the nonparametric one
//! guarantees `1 − 1/(1+t)` for every unimodal symmetric density.

use serde::Serialize;

use crate::densities::{integrate_pdf, integration_breaks, LocationScaleModel, SymmetricDensity};
use crate::error::{domain, Error, Result};
use crate::numerics::{find_root, integrate_with_breaks, maximize_scalar, Tolerances};
use crate::scalar::Scalar;

/// How the confidence bound of a location interval is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Worst case over α for a known density.
    Parametric,
    /// Uniform bound over the unimodal symmetric class.
    Nonparametric,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parametric" => Ok(Method::Parametric),
            "nonparametric" => Ok(Method::Nonparametric),
            other => domain(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocationInterval<T> {
    pub center_x: T,
    pub guess_a: T,
    pub t: T,
    pub lo: T,
    pub hi: T,
    pub length: T,
    pub confidence_bound: T,
    pub method: Method,
    /// Density name for parametric intervals.
    pub density: Option<String>,
}

impl<T: Scalar> LocationInterval<T> {
    pub fn contains(&self, mu: T) -> bool {
        self.lo <= mu && mu <= self.hi
    }
}

/// Supremum of the miscoverage over α and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaStar<T> {
    pub beta_star: T,
    pub alpha_star: T,
    /// True when the Gaussian closed form was used.
    pub closed_form: bool,
}

fn check_t<T: Scalar>(t: T) -> Result<()> {
    if !(t > T::one()) || !t.is_finite() {
        return domain(format!("t must exceed 1, got {t}"));
    }
    Ok(())
}

fn is_normal<T: Scalar, D: SymmetricDensity<T> + ?Sized>(density: &D) -> bool {
    density.name() == "normal"
}

/// Integration limits `(αt/(t+1), αt/(t−1))`, ordered.
fn beta_limits<T: Scalar>(alpha: T, t: T) -> (T, T) {
    let near = alpha * t / (t + T::one());
    let far = alpha * t / (t - T::one());
    if near <= far {
        (near, far)
    } else {
        (far, near)
    }
}

/// Miscoverage `β(α, t)` of `x ± t|x − a|` at standardized offset α.
pub fn beta<T, D>(alpha: T, t: T, density: &D) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    beta_with(alpha, t, density, &Tolerances::default())
}

pub fn beta_with<T, D>(alpha: T, t: T, density: &D, tol: &Tolerances<T>) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_t(t)?;
    let (lo, hi) = beta_limits(alpha, t);
    let cut = density.tail_cut();
    let (lo, hi) = (lo.max(-cut).min(cut), hi.max(-cut).min(cut));
    let v = integrate_pdf(density, lo, hi, &tol.quad)?;
    Ok(v.abs().min(T::one()))
}

/// Closed-form Gaussian maximizer
/// `α* = ((t²−1)/t)·√(log((t+1)/(t−1)) / (2t))`.
pub fn alpha_star_normal<T: Scalar>(t: T) -> Result<T> {
    check_t(t)?;
    let one = T::one();
    let log_ratio = ((t + one) / (t - one)).ln();
    Ok((t * t - one) / t * (log_ratio / (T::lit(2.0) * t)).sqrt())
}

/// `β*(t) = sup_α β(α, t)`.
///
/// The normal density uses the closed-form maximizer; every other density
/// is maximized numerically on `α ∈ (0, (t+1)·tail_cut/t]` (β is even in α).
pub fn beta_star<T, D>(t: T, density: &D) -> Result<BetaStar<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    beta_star_with(t, density, &Tolerances::default())
}

pub fn beta_star_with<T, D>(t: T, density: &D, tol: &Tolerances<T>) -> Result<BetaStar<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_t(t)?;
    if !is_normal(density) {
        return beta_star_numeric(t, density, tol);
    }
    let one = T::one();
    let alpha_star = alpha_star_normal(t)?;
    let s = (((t + one) / (t - one)).ln() / (T::lit(2.0) * t)).sqrt();
    let beta_star = integrate_pdf(density, (t - one) * s, (t + one) * s, &tol.quad)?;
    Ok(BetaStar {
        beta_star,
        alpha_star,
        closed_form: true,
    })
}

/// Numerical `sup_α β(α, t)`, for any density.
///
/// The search variable is `log α`, so the grid resolves the peak even when
/// the tail cut (and with it the search window) is astronomically wide.
pub fn beta_star_numeric<T, D>(t: T, density: &D, tol: &Tolerances<T>) -> Result<BetaStar<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_t(t)?;
    let upper = (t + T::one()) * density.tail_cut() / t;
    let lower = upper.min(T::one()) * T::lit(1e-6);
    let failure = std::cell::Cell::new(None);
    let objective = |u: T| match beta_with(u.exp(), t, density, tol) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            T::zero()
        }
    };
    let (u, beta_star) = maximize_scalar(objective, lower.ln(), upper.ln(), &tol.opt)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(BetaStar {
        beta_star,
        alpha_star: u.exp(),
        closed_form: false,
    })
}

/// Smallest `t` with `β*(t) ≤ 1 − confidence`.
///
/// A coarse log-spaced scan on `t ∈ (1 + 10⁻⁶, 10⁶]` locates the first
/// crossing; if the scan is not monotone it is repeated ten times finer.
/// The crossing is then polished by root finding.
pub fn solve_t_parametric<T, D>(confidence: T, density: &D) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    solve_t_parametric_with(confidence, density, &Tolerances::default())
}

pub fn solve_t_parametric_with<T, D>(confidence: T, density: &D, tol: &Tolerances<T>) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    if !(confidence > T::zero() && confidence < T::one()) {
        return domain(format!("confidence must be in (0, 1), got {confidence}"));
    }
    let target = T::one() - confidence;
    let lo_excess = T::lit(1e-6);
    let hi_excess = T::lit(1e6);
    let scan = |points_per_decade: usize| -> Result<Vec<(T, T)>> {
        let n = 12 * points_per_decade;
        let span = (hi_excess / lo_excess).ln();
        (0..=n)
            .map(|i| {
                let t = T::one() + lo_excess * (span * T::lit(i as f64) / T::lit(n as f64)).exp();
                Ok((t, beta_star_with(t, density, tol)?.beta_star))
            })
            .collect()
    };
    let mut points = scan(5)?;
    let monotone = points.windows(2).all(|w| w[1].1 <= w[0].1 + T::lit(1e-12));
    if !monotone {
        points = scan(50)?;
    }
    let first = points
        .iter()
        .position(|&(_, b)| b <= target)
        .ok_or_else(|| {
            Error::NoSolution(format!(
                "beta*(t) stays above {target} for t up to {}",
                T::one() + hi_excess
            ))
        })?;
    if first == 0 {
        return Ok(points[0].0);
    }
    let (t_lo, t_hi) = (points[first - 1].0, points[first].0);
    let g = |t: T| {
        beta_star_with(t, density, tol)
            .map(|b| b.beta_star - target)
            .unwrap_or(T::nan())
    };
    find_root(g, t_lo, t_hi, &tol.root)
}

/// Distribution-free miscoverage bound `1/(1+t)`.
pub fn robbins_bound<T: Scalar>(t: T) -> Result<T> {
    check_t(t)?;
    Ok(T::one() / (T::one() + t))
}

/// `t = c/(1−c)`, the inverse of the distribution-free bound.
pub fn solve_t_nonparametric<T: Scalar>(confidence: T) -> Result<T> {
    if !(confidence > T::zero() && confidence < T::one()) {
        return domain(format!("confidence must be in (0, 1), got {confidence}"));
    }
    let t = confidence / (T::one() - confidence);
    if !(t > T::one()) {
        return domain(format!(
            "confidence {confidence} gives t = {t}; t must exceed 1 (confidence > 0.5)"
        ));
    }
    Ok(t)
}

/// Mean value `l(x) = (1/(b−x)) ∫_x^b f(y) dy` of the pdf on `(x, b)`.
pub fn mean_value_l<T, D>(x: T, b: T, density: &D) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    mean_value_l_with(x, b, density, &Tolerances::default())
}

pub fn mean_value_l_with<T, D>(x: T, b: T, density: &D, tol: &Tolerances<T>) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    if !(x >= T::zero() && x < b) {
        return domain(format!("mean_value_l requires 0 <= x < b, got x={x}, b={b}"));
    }
    Ok(integrate_pdf(density, x, b, &tol.quad)? / (b - x))
}

/// Builds `x ± t|x − a|` with its guaranteed confidence.
///
/// `x == a` yields a zero-length interval, which is still a valid
/// construction.
pub fn location_interval<T, D>(
    x: T,
    a: T,
    t: T,
    method: Method,
    density: Option<&D>,
) -> Result<LocationInterval<T>>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    check_t(t)?;
    if !(x.is_finite() && a.is_finite()) {
        return domain("x and a must be finite");
    }
    let (confidence_bound, density_name) = match method {
        Method::Parametric => {
            let density = density
                .ok_or_else(|| Error::Domain("parametric interval needs a density".into()))?;
            let b = beta_star(t, density)?;
            (T::one() - b.beta_star, Some(density.name()))
        }
        Method::Nonparametric => (T::one() - robbins_bound(t)?, None),
    };
    let half = t * (x - a).abs();
    Ok(LocationInterval {
        center_x: x,
        guess_a: a,
        t,
        lo: x - half,
        hi: x + half,
        length: half + half,
        confidence_bound,
        method,
        density: density_name,
    })
}

/// `E(L)` for the interval length `L = 2t|X − a|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ExpectedLength<T> {
    Finite(T),
    /// The density has no first moment.
    Divergent,
}

impl<T: Scalar> ExpectedLength<T> {
    pub fn value(self) -> Option<T> {
        match self {
            ExpectedLength::Finite(v) => Some(v),
            ExpectedLength::Divergent => None,
        }
    }
}

/// `E(L) = 2t·E|X − a| = 2tσ·∫|y − α| f(y) dy`.
pub fn expected_length<T, D>(t: T, a: T, model: &LocationScaleModel<T, D>) -> Result<ExpectedLength<T>>
where
    T: Scalar,
    D: SymmetricDensity<T>,
{
    expected_length_with(t, a, model, &Tolerances::default())
}

pub fn expected_length_with<T, D>(
    t: T,
    a: T,
    model: &LocationScaleModel<T, D>,
    tol: &Tolerances<T>,
) -> Result<ExpectedLength<T>>
where
    T: Scalar,
    D: SymmetricDensity<T>,
{
    check_t(t)?;
    let density = model.density();
    if !density.has_first_moment() {
        return Ok(ExpectedLength::Divergent);
    }
    let (_, alpha) = model.standardize(a, a);
    let cut = density.tail_cut();
    let mut breaks = integration_breaks(density);
    breaks.push(alpha);
    let mean_abs = integrate_with_breaks(
        |y| (y - alpha).abs() * density.pdf(y),
        -cut,
        cut,
        &breaks,
        &tol.quad,
    )?;
    Ok(ExpectedLength::Finite(T::lit(2.0) * t * model.sigma() * mean_abs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::Family;
    use crate::numerics::OptSpec;

    type F = Family<f64>;

    // Reference values computed offline from the normal cdf with a
    // bounded scalar optimizer (xatol 1e-12).
    const BETA_STAR_5: f64 = 0.096_790_046_321_509_34;
    const ALPHA_STAR_5: f64 = 0.966_535_880_907_279_5;
    const T_FOR_90: f64 = 4.839_514_699_503_885;
    const T_FOR_95: f64 = 9.678_841_301_895_625;

    // Independent route: difference of cdf values.
    fn beta_by_cdf(alpha: f64, t: f64, f: &F) -> f64 {
        (f.cdf(alpha * t / (t - 1.0)) - f.cdf(alpha * t / (t + 1.0))).abs()
    }

    // Brute-force oracle: dense scan of the cdf route.
    fn brute_force_argmax(t: f64, f: &F) -> (f64, f64) {
        let mut best = (0.0, 0.0);
        for i in 1..=200_000 {
            let a = 5.0 * i as f64 / 200_000.0;
            let v = beta_by_cdf(a, t, f);
            if v > best.1 {
                best = (a, v);
            }
        }
        best
    }

    #[test]
    fn beta_at_zero_offset_vanishes() {
        assert_eq!(beta(0.0, 5.0, &F::Normal).unwrap(), 0.0);
    }

    #[test]
    fn beta_matches_cdf_route() {
        for f in F::unimodal_builtins() {
            for &t in &[1.5, 2.0, 5.0, 9.0] {
                for i in -40..=40 {
                    let a = i as f64 * 0.1;
                    let q = beta(a, t, &f).unwrap();
                    assert!((q - beta_by_cdf(a, t, &f)).abs() < 1e-9, "{f} t={t} a={a}");
                }
            }
        }
    }

    #[test]
    fn beta_is_even_and_bounded() {
        for f in F::unimodal_builtins() {
            for i in 0..60 {
                let a = i as f64 * 0.13;
                let p = beta(a, 5.0, &f).unwrap();
                let m = beta(-a, 5.0, &f).unwrap();
                assert!((p - m).abs() < 1e-8);
                assert!((0.0..=1.0).contains(&p));
            }
        }
    }

    #[test]
    fn beta_rejects_small_t() {
        assert!(matches!(beta(1.0, 1.0, &F::Normal), Err(Error::Domain(_))));
        assert!(alpha_star_normal(0.5).is_err());
        assert!(beta_star(1.0, &F::Normal).is_err());
    }

    #[test]
    fn gaussian_worst_case_at_t5() {
        let (a_bf, b_bf) = brute_force_argmax(5.0, &F::Normal);
        assert!((a_bf - ALPHA_STAR_5).abs() < 1e-4);
        assert!((b_bf - BETA_STAR_5).abs() < 1e-10);

        let b = beta_star(5.0, &F::Normal).unwrap();
        assert!(b.closed_form);
        assert!((b.alpha_star - ALPHA_STAR_5).abs() < 1e-12);
        assert!((b.beta_star - BETA_STAR_5).abs() < 1e-10);
        // The worst-case interval x ± 5|x| still covers at least 90%.
        assert!(1.0 - b.beta_star >= 0.90);
    }

    #[test]
    fn closed_form_agrees_with_numeric_maximizer() {
        let tol = Tolerances::default();
        for &t in &[2.0, 3.0, 5.0, 10.0] {
            let closed = beta_star(t, &F::Normal).unwrap();
            let numeric = beta_star_numeric(t, &F::Normal, &tol).unwrap();
            assert!((closed.alpha_star - numeric.alpha_star).abs() < 1e-5, "t={t}");
            assert!((closed.beta_star - numeric.beta_star).abs() < 1e-6, "t={t}");
            let (x, _) = maximize_scalar(
                |a| beta(a, t, &F::Normal).unwrap(),
                0.0,
                9.0,
                &OptSpec::default(),
            )
            .unwrap();
            assert!((x - closed.alpha_star).abs() < 1e-5, "t={t}");
        }
    }

    #[test]
    fn robbins_domination_over_the_class() {
        let mut class = F::unimodal_builtins();
        class.push(F::student_t(3.0).unwrap());
        for f in &class {
            for &t in &[2.0, 5.0, 9.0, 19.0] {
                let b = beta_star(t, f).unwrap();
                assert!(b.beta_star <= 1.0 / (1.0 + t) + 1e-6, "{f} t={t}: {b:?}");
                assert!(b.beta_star > 0.0);
            }
        }
        let laplace = beta_star(9.0, &F::Laplace).unwrap().beta_star;
        assert!(laplace > 0.0 && laplace <= 0.1);
    }

    #[test]
    fn uniform_attains_the_distribution_free_bound() {
        // β(α) = (1 − (t−1)/(t+1))/2 at α = (t−1)/t for the uniform on [−1, 1].
        for &t in &[2.0, 9.0] {
            let b = beta_star(t, &F::Uniform).unwrap();
            assert!((b.beta_star - 1.0 / (1.0 + t)).abs() < 1e-6, "t={t}: {b:?}");
        }
    }

    #[test]
    fn worst_case_shrinks_with_t() {
        for f in [F::Normal, F::Laplace] {
            let mut prev = 1.0;
            for &t in &[1.5, 2.0, 3.0, 5.0, 9.0, 19.0, 50.0] {
                let b = beta_star(t, &f).unwrap().beta_star;
                assert!(b <= prev, "{f} t={t}");
                prev = b;
            }
        }
    }

    #[test]
    fn solve_parametric_t() {
        let t90 = solve_t_parametric(0.90, &F::Normal).unwrap();
        assert!((t90 - T_FOR_90).abs() < 1e-6, "{t90}");
        let t95 = solve_t_parametric(0.95, &F::Normal).unwrap();
        assert!((t95 - T_FOR_95).abs() < 1e-6);
        let b = beta_star(t95, &F::Normal).unwrap().beta_star;
        assert!((0.0499..=0.05 + 1e-12).contains(&b));
        assert!(solve_t_parametric(0.50, &F::Normal).unwrap() < t90);
        assert!(solve_t_parametric(1.0, &F::Normal).is_err());
    }

    #[test]
    fn solve_parametric_t_generic_density() {
        let t = solve_t_parametric(0.9, &F::Laplace).unwrap();
        let b = beta_star(t, &F::Laplace).unwrap().beta_star;
        assert!((b - 0.1).abs() < 1e-9);
        // Never worse than the distribution-free answer.
        assert!(t <= 9.0 + 1e-9);
    }

    #[test]
    fn distribution_free_bound() {
        assert!((robbins_bound(9.0f64).unwrap() - 0.1).abs() < 1e-15);
        assert!((robbins_bound(99.0f64).unwrap() - 0.01).abs() < 1e-15);
        assert!((robbins_bound(1.0f64 + 1e-9).unwrap() - 0.5).abs() < 1e-9);
        assert!(robbins_bound(1.0).is_err());
        assert!((solve_t_nonparametric(0.90f64).unwrap() - 9.0).abs() < 1e-12);
        assert!((solve_t_nonparametric(0.95f64).unwrap() - 19.0).abs() < 1e-12);
        assert!(solve_t_nonparametric(0.50).is_err());
    }

    #[test]
    fn mean_value_properties() {
        for &b in &[0.5, 1.0] {
            let l = mean_value_l(0.0, b, &F::Uniform).unwrap();
            assert!((l - 0.5).abs() < 1e-12);
        }
        for f in F::unimodal_builtins() {
            let mut prev = f64::INFINITY;
            for i in 0..100 {
                let x = 3.0 * i as f64 / 100.0;
                let l = mean_value_l(x, 3.0, &f).unwrap();
                assert!(l <= prev + 1e-10, "{f} at {x}");
                assert!(l <= f.pdf(x) + 1e-10, "{f} at {x}");
                prev = l;
            }
        }
        assert!(mean_value_l(2.0, 1.0, &F::Normal).is_err());
        assert!(mean_value_l(-0.1, 1.0, &F::Normal).is_err());
    }

    #[test]
    fn interval_examples() {
        let iv = location_interval(1.0, 0.0, 5.0, Method::Parametric, Some(&F::Normal)).unwrap();
        assert_eq!((iv.lo, iv.hi, iv.length), (-4.0, 6.0, 10.0));
        assert!(iv.confidence_bound >= 0.90);
        assert_eq!(iv.density.as_deref(), Some("normal"));

        let iv = location_interval::<f64, F>(1.0, 0.0, 9.0, Method::Nonparametric, None).unwrap();
        assert_eq!((iv.lo, iv.hi), (-8.0, 10.0));
        assert!((iv.confidence_bound - 0.9).abs() < 1e-15);

        let iv = location_interval::<f64, F>(2.5, 2.5, 9.0, Method::Nonparametric, None).unwrap();
        assert_eq!((iv.lo, iv.hi, iv.length), (2.5, 2.5, 0.0));

        assert!(location_interval::<f64, F>(1.0, 0.0, 0.5, Method::Nonparametric, None).is_err());
        assert!(location_interval::<f64, F>(1.0, 0.0, 5.0, Method::Parametric, None).is_err());
    }

    #[test]
    fn expected_length_normal() {
        let model = LocationScaleModel::new(F::Normal, 0.0, 1.0).unwrap();
        let v = expected_length(5.0, 0.0, &model).unwrap().value().unwrap();
        let want = 10.0 * (2.0 / std::f64::consts::PI).sqrt();
        assert!((v - want).abs() < 1e-4);

        // Independent Monte Carlo oracle via Box–Muller.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 200_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let (u1, u2): (f64, f64) = (rng.gen(), rng.gen());
            let z = (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
            acc += z.abs();
        }
        let mc = 10.0 * acc / n as f64;
        assert!((mc - v).abs() < 0.05, "{mc} vs {v}");
    }

    #[test]
    fn expected_length_is_minimized_at_the_median() {
        for f in [F::Normal, F::Laplace, F::Triangular, F::Uniform] {
            let model = LocationScaleModel::new(f, 1.5, 2.0).unwrap();
            let mut best = (f64::NAN, f64::INFINITY);
            for i in -20..=20 {
                let a = 1.5 + 0.25 * i as f64;
                let v = expected_length(5.0, a, &model).unwrap().value().unwrap();
                if v < best.1 {
                    best = (a, v);
                }
            }
            assert_eq!(best.0, 1.5, "{f}");
        }
    }

    #[test]
    fn expected_length_diverges_for_cauchy() {
        let model = LocationScaleModel::new(F::Cauchy, 0.0, 1.0).unwrap();
        assert_eq!(expected_length(5.0, 0.0, &model).unwrap(), ExpectedLength::Divergent);
    }

    #[test]
    fn interval_arithmetic_identities() {
        use proptest::prelude::*;
        proptest!(|(x in -1e3f64..1e3, a in -1e3f64..1e3, t in 1.01f64..100.0)| {
            let iv = location_interval::<f64, F>(x, a, t, Method::Nonparametric, None).unwrap();
            prop_assert!(iv.lo <= x && x <= iv.hi);
            prop_assert!(((iv.lo + iv.hi) - 2.0 * x).abs() <= 1e-12 * (1.0 + x.abs() + iv.length));
            prop_assert!((iv.hi - iv.lo - 2.0 * t * (x - a).abs()).abs() <= 1e-12 * (1.0 + iv.length));
        });
    }

    #[test]
    fn single_precision_worst_case() {
        let b = beta_star(5.0f32, &Family::<f32>::Normal).unwrap();
        assert!((b.beta_star - BETA_STAR_5 as f32).abs() < 1e-5);
    }
}
