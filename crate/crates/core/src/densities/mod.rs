//! Symmetric standard-form densities, the built-in families, and the
//! location-scale model `X = mu + sigma * Y`.
//!
//! A density is described by its pdf, cdf, quantile and (optionally) pdf
//! derivative at standard scale. Unimodal members form the nonparametric
//! class used by the distribution-free location interval.

mod special;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::numerics::{find_root, integrate_with_breaks, QuadratureSpec, RootSpec};
use crate::scalar::Scalar;

pub use special::{inc_beta, normal_quantile};

/// A density symmetric about zero, known in standard form.
pub trait SymmetricDensity<T: Scalar>: Send + Sync + fmt::Debug {
    /// Display name, parseable by [`Family::from_str`] for built-ins.
    fn name(&self) -> String;

    fn pdf(&self, y: T) -> T;

    fn cdf(&self, y: T) -> T;

    fn quantile(&self, p: T) -> T;

    /// Analytic derivative of the pdf, if known. At kinks this is the
    /// right-hand derivative.
    fn pdf_derivative(&self, _y: T) -> Option<T> {
        None
    }

    /// Claimed membership in the unimodal symmetric class.
    fn is_unimodal(&self) -> bool;

    fn has_first_moment(&self) -> bool;

    /// `T` with `cdf(-T) < 1e-12` and `1 - cdf(T) < 1e-12`.
    fn tail_cut(&self) -> T;

    /// Non-negative points where the pdf is not differentiable. Mirrored
    /// points on the negative axis are implied.
    fn kinks(&self) -> Vec<T> {
        Vec::new()
    }

    /// True when the pdf is zero on a whole interval inside the tail cut.
    fn has_bounded_support(&self) -> bool {
        false
    }
}

/// `f'(y)`: the analytic derivative when available, else a central
/// difference.
pub fn pdf_derivative<T, D>(density: &D, y: T) -> T
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    if let Some(d) = density.pdf_derivative(y) {
        return d;
    }
    let h = T::epsilon().cbrt() * T::one().max(y.abs());
    (density.pdf(y + h) - density.pdf(y - h)) / (h + h)
}

/// Breakpoints for integrating a pdf: zero, the kinks, and decades out to
/// the tail cut.
pub fn integration_breaks<T, D>(density: &D) -> Vec<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    let mut breaks = vec![T::zero()];
    for k in density.kinks() {
        breaks.push(k);
        breaks.push(-k);
    }
    let cut = density.tail_cut();
    let mut decade = T::one();
    while decade < cut {
        breaks.push(decade);
        breaks.push(-decade);
        decade = decade * T::lit(10.0);
    }
    breaks
}

/// `∫_lo^hi pdf(y) dy` by quadrature, split at the density's breakpoints.
pub fn integrate_pdf<T, D>(density: &D, lo: T, hi: T, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    let breaks = integration_breaks(density);
    integrate_with_breaks(|y| density.pdf(y), lo, hi, &breaks, spec)
}

// Pushes a quantile-derived tail cut strictly past the 1e-12 tail mass.
fn tail_nudge<T: Scalar>() -> T {
    T::lit(1.000_001)
}

/// Student-t with `df` degrees of freedom (`df >= 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentT<T> {
    df: T,
    ln_norm: T,
    tail_cut: T,
}

impl<T: Scalar> StudentT<T> {
    pub fn new(df: T) -> Result<Self> {
        if !(df >= T::one()) || !df.is_finite() {
            return domain(format!("student_t requires df >= 1, got {df}"));
        }
        let half = T::lit(0.5);
        let ln_norm = ((df + T::one()) * half).lgamma()
            - (df * half).lgamma()
            - half * (df * T::PI()).ln();
        let mut t = Self {
            df,
            ln_norm,
            tail_cut: T::zero(),
        };
        t.tail_cut = -t.quantile(T::lit(1e-12)) * tail_nudge();
        Ok(t)
    }

    pub fn df(&self) -> T {
        self.df
    }

    fn lower_tail(&self, y: T) -> T {
        // P(Y <= -|y|) = I_{df/(df+y^2)}(df/2, 1/2) / 2
        let y2 = y * y;
        let denom = self.df + y2;
        let half = T::lit(0.5);
        half * inc_beta(self.df * half, half, self.df / denom, y2 / denom)
    }
}

impl<T: Scalar> SymmetricDensity<T> for StudentT<T> {
    fn name(&self) -> String {
        format!("student_t:{}", self.df)
    }

    fn pdf(&self, y: T) -> T {
        let e = -(self.df + T::one()) / T::lit(2.0);
        (self.ln_norm + e * (y * y / self.df).ln_1p()).exp()
    }

    fn cdf(&self, y: T) -> T {
        let lower = self.lower_tail(y);
        if y <= T::zero() {
            lower
        } else {
            T::one() - lower
        }
    }

    fn quantile(&self, p: T) -> T {
        let half = T::lit(0.5);
        if p == half {
            return T::zero();
        }
        if p <= T::zero() {
            return T::neg_infinity();
        }
        if p >= T::one() {
            return T::infinity();
        }
        if p > half {
            return -self.quantile(T::one() - p);
        }
        let target = p.ln();
        let mut lo = -T::one();
        while self.lower_tail(lo) > p {
            lo = lo * T::lit(2.0);
        }
        let spec = RootSpec {
            x_tol: T::zero(),
            f_tol: T::lit(1e-13).max(T::epsilon() * T::lit(4.0)),
            max_iter: 400,
        };
        find_root(|y| self.lower_tail(y).ln() - target, lo, T::zero(), &spec)
            .unwrap_or(lo)
    }

    fn pdf_derivative(&self, y: T) -> Option<T> {
        Some(-self.pdf(y) * (self.df + T::one()) * y / (self.df + y * y))
    }

    fn is_unimodal(&self) -> bool {
        true
    }

    fn has_first_moment(&self) -> bool {
        self.df > T::one()
    }

    fn tail_cut(&self) -> T {
        self.tail_cut
    }
}

/// The built-in families, all in standard form and all unimodal.
///
/// Uniform and triangular are supported on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T> {
    Normal,
    Laplace,
    Uniform,
    StudentT(StudentT<T>),
    Cauchy,
    Triangular,
}

impl<T: Scalar> Family<T> {
    pub fn student_t(df: T) -> Result<Self> {
        StudentT::new(df).map(Family::StudentT)
    }

    /// Every built-in except Student-t, which needs a parameter.
    pub fn unimodal_builtins() -> Vec<Self> {
        vec![
            Family::Normal,
            Family::Laplace,
            Family::Uniform,
            Family::Cauchy,
            Family::Triangular,
        ]
    }
}

impl<T: Scalar> SymmetricDensity<T> for Family<T> {
    fn name(&self) -> String {
        match self {
            Family::Normal => "normal".into(),
            Family::Laplace => "laplace".into(),
            Family::Uniform => "uniform".into(),
            Family::StudentT(t) => t.name(),
            Family::Cauchy => "cauchy".into(),
            Family::Triangular => "triangular".into(),
        }
    }

    fn pdf(&self, y: T) -> T {
        let half = T::lit(0.5);
        match self {
            Family::Normal => (-half * y * y).exp() / T::TAU().sqrt(),
            Family::Laplace => half * (-y.abs()).exp(),
            Family::Uniform => {
                if y.abs() <= T::one() {
                    half
                } else {
                    T::zero()
                }
            }
            Family::StudentT(t) => t.pdf(y),
            Family::Cauchy => T::FRAC_1_PI() / (T::one() + y * y),
            Family::Triangular => (T::one() - y.abs()).max(T::zero()),
        }
    }

    fn cdf(&self, y: T) -> T {
        let half = T::lit(0.5);
        let one = T::one();
        match self {
            Family::Normal => half * (-y / T::SQRT_2()).compl_erf(),
            Family::Laplace => {
                if y < T::zero() {
                    half * y.exp()
                } else {
                    one - half * (-y).exp()
                }
            }
            Family::Uniform => ((y + one) * half).max(T::zero()).min(one),
            Family::StudentT(t) => t.cdf(y),
            Family::Cauchy => {
                if y < T::zero() {
                    (-one / y).atan() * T::FRAC_1_PI()
                } else {
                    half + y.atan() * T::FRAC_1_PI()
                }
            }
            Family::Triangular => {
                if y <= -one {
                    T::zero()
                } else if y < T::zero() {
                    half * (one + y) * (one + y)
                } else if y < one {
                    one - half * (one - y) * (one - y)
                } else {
                    one
                }
            }
        }
    }

    fn quantile(&self, p: T) -> T {
        let half = T::lit(0.5);
        let one = T::one();
        let two = T::lit(2.0);
        match self {
            Family::Normal => normal_quantile(p),
            Family::Laplace => {
                if p < half {
                    (two * p).ln()
                } else {
                    -(two * (one - p)).ln()
                }
            }
            Family::Uniform => two * p - one,
            Family::StudentT(t) => t.quantile(p),
            Family::Cauchy => {
                if p == half {
                    T::zero()
                } else if p < half {
                    -one / (T::PI() * p).tan()
                } else {
                    one / (T::PI() * (one - p)).tan()
                }
            }
            Family::Triangular => {
                if p < half {
                    (two * p).sqrt() - one
                } else {
                    one - (two * (one - p)).sqrt()
                }
            }
        }
    }

    fn pdf_derivative(&self, y: T) -> Option<T> {
        let one = T::one();
        // Right-hand derivatives at kinks.
        let sign = if y < T::zero() { -one } else { one };
        Some(match self {
            Family::Normal => -y * self.pdf(y),
            Family::Laplace => -sign * self.pdf(y),
            Family::Uniform => T::zero(),
            Family::StudentT(t) => return t.pdf_derivative(y),
            Family::Cauchy => {
                let s = one + y * y;
                -T::lit(2.0) * y * T::FRAC_1_PI() / (s * s)
            }
            Family::Triangular => {
                if y >= -one && y < one {
                    -sign
                } else {
                    T::zero()
                }
            }
        })
    }

    fn is_unimodal(&self) -> bool {
        true
    }

    fn has_first_moment(&self) -> bool {
        match self {
            Family::Cauchy => false,
            Family::StudentT(t) => t.has_first_moment(),
            _ => true,
        }
    }

    fn tail_cut(&self) -> T {
        match self {
            Family::Normal => T::lit(9.0),
            Family::Laplace => T::lit(30.0),
            Family::Uniform | Family::Triangular => T::one(),
            Family::StudentT(t) => t.tail_cut(),
            Family::Cauchy => -self.quantile(T::lit(1e-12)) * tail_nudge(),
        }
    }

    fn kinks(&self) -> Vec<T> {
        match self {
            Family::Laplace => vec![T::zero()],
            Family::Uniform => vec![T::one()],
            Family::Triangular => vec![T::zero(), T::one()],
            _ => Vec::new(),
        }
    }

    fn has_bounded_support(&self) -> bool {
        matches!(self, Family::Uniform | Family::Triangular)
    }
}

impl<T: Scalar> fmt::Display for Family<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl<T: Scalar> FromStr for Family<T> {
    type Err = Error;

    /// Parses `normal`, `laplace`, `uniform`, `cauchy`, `triangular` or
    /// `student_t:<df>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "normal" | "gaussian" => Ok(Family::Normal),
            "laplace" => Ok(Family::Laplace),
            "uniform" => Ok(Family::Uniform),
            "cauchy" => Ok(Family::Cauchy),
            "triangular" => Ok(Family::Triangular),
            _ => {
                let df = s
                    .strip_prefix("student_t:")
                    .or_else(|| s.strip_prefix("t:"))
                    .ok_or_else(|| Error::UnknownFamily(s.clone()))?;
                let df: f64 = df
                    .parse()
                    .map_err(|_| Error::UnknownFamily(s.clone()))?;
                Family::student_t(T::lit(df))
            }
        }
    }
}

impl<T: Scalar> Serialize for Family<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Family<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `X = mu + sigma * Y` with `Y` drawn from a symmetric standard density.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationScaleModel<T, D> {
    density: D,
    mu: T,
    sigma: T,
}

impl<T: Scalar, D: SymmetricDensity<T>> LocationScaleModel<T, D> {
    pub fn new(density: D, mu: T, sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return domain(format!("sigma must be positive and finite, got {sigma}"));
        }
        if !mu.is_finite() {
            return domain("mu must be finite");
        }
        Ok(Self { density, mu, sigma })
    }

    pub fn density(&self) -> &D {
        &self.density
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// Standardized observation `y = (x - mu)/sigma` and offset
    /// `alpha = (a - mu)/sigma`.
    pub fn standardize(&self, x: T, a: T) -> (T, T) {
        ((x - self.mu) / self.sigma, (a - self.mu) / self.sigma)
    }

    /// Density of `X` at `x`.
    pub fn pdf(&self, x: T) -> T {
        self.density.pdf((x - self.mu) / self.sigma) / self.sigma
    }
}

/// Outcome of [`verify_class_membership`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub density: String,
    pub grid_size: usize,
    pub max_symmetry_violation: f64,
    pub max_unimodality_violation: f64,
    pub normalization_defect: f64,
    pub symmetry_pass: bool,
    pub unimodality_pass: bool,
    pub normalization_pass: bool,
}

impl MembershipReport {
    /// Symmetric, unimodal and normalized.
    pub fn in_class(&self) -> bool {
        self.symmetry_pass && self.unimodality_pass && self.normalization_pass
    }
}

const SYMMETRY_TOL: f64 = 1e-12;
const UNIMODALITY_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-8;

/// Positive grid on `(0, cut]`: linear up to `min(cut, 10)`, geometric
/// beyond.
fn positive_grid<T: Scalar>(cut: T, n: usize) -> Vec<T> {
    let knee = cut.min(T::lit(10.0));
    let (n_lin, n_geo) = if cut > knee { (n / 2, n - n / 2) } else { (n, 0) };
    let mut grid: Vec<T> = (1..=n_lin)
        .map(|i| knee * T::lit(i as f64) / T::lit(n_lin as f64))
        .collect();
    if n_geo > 0 {
        let ratio = (cut / knee).ln() / T::lit(n_geo as f64);
        grid.extend((1..=n_geo).map(|i| knee * (ratio * T::lit(i as f64)).exp()));
    }
    grid
}

/// Numerically checks symmetry, unimodality on `(0, tail_cut]` and
/// normalization over `[-tail_cut, tail_cut]`.
pub fn verify_class_membership<T, D>(density: &D, grid_size: usize) -> Result<MembershipReport>
where
    T: Scalar,
    D: SymmetricDensity<T> + ?Sized,
{
    if grid_size < 100 {
        return domain("membership grid needs at least 100 points");
    }
    let cut = density.tail_cut();
    let grid = positive_grid(cut, grid_size);
    let max_symmetry_violation = grid
        .iter()
        .map(|&y| (density.pdf(y) - density.pdf(-y)).abs().as_f64())
        .fold(0.0, f64::max);
    let mut max_unimodality_violation = (density.pdf(grid[0]) - density.pdf(T::zero()))
        .as_f64()
        .max(0.0);
    for w in grid.windows(2) {
        let rise = (density.pdf(w[1]) - density.pdf(w[0])).as_f64();
        max_unimodality_violation = max_unimodality_violation.max(rise);
    }
    let spec = QuadratureSpec::default();
    let mass = integrate_pdf(density, -cut, cut, &spec)?;
    let normalization_defect = 1.0 - mass.as_f64();
    Ok(MembershipReport {
        density: density.name(),
        grid_size,
        max_symmetry_violation,
        max_unimodality_violation,
        normalization_defect,
        symmetry_pass: max_symmetry_violation <= SYMMETRY_TOL,
        unimodality_pass: max_unimodality_violation <= UNIMODALITY_TOL,
        normalization_pass: normalization_defect <= NORMALIZATION_TOL
            && normalization_defect >= -spec.abs_tol.as_f64(),
    })
}
