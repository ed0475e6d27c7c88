//! Shared numerical kernels: adaptive quadrature, bracketed root finding and
//! bounded one-dimensional maximization.
//!
//! Every routine evaluates its integrand or objective in a fixed order, so
//! results are bit-reproducible for identical inputs.

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: usize,
}

impl<T: Scalar> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-10),
            rel_tol: T::lit(1e-8),
            max_depth: 60,
        }
    }
}

impl<T: Scalar> QuadratureSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero()) {
            return domain("quadrature tolerances must be positive");
        }
        if self.max_depth < 10 {
            return domain("quadrature max_depth must be at least 10");
        }
        Ok(())
    }
}

/// Tolerances for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec<T> {
    pub x_tol: T,
    pub f_tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> Default for RootSpec<T> {
    fn default() -> Self {
        Self {
            x_tol: T::lit(1e-9),
            f_tol: T::lit(1e-12),
            max_iter: 200,
        }
    }
}

/// Tolerances for [`maximize_scalar`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptSpec<T> {
    pub x_tol: T,
    pub f_tol: T,
    pub max_iter: usize,
    pub grid_points: usize,
}

impl<T: Scalar> Default for OptSpec<T> {
    fn default() -> Self {
        Self {
            x_tol: T::lit(1e-9),
            f_tol: T::lit(1e-12),
            max_iter: 200,
            grid_points: 512,
        }
    }
}

/// The three tolerance bundles, passed together to operations that mix
/// quadrature, root finding and maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub quad: QuadratureSpec<T>,
    pub root: RootSpec<T>,
    pub opt: OptSpec<T>,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            quad: QuadratureSpec::default(),
            root: RootSpec::default(),
            opt: OptSpec::default(),
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    /// Defaults with the quadrature tolerances replaced.
    pub fn with_quadrature(abs_tol: T, rel_tol: T) -> Self {
        Self {
            quad: QuadratureSpec {
                abs_tol,
                rel_tol,
                ..QuadratureSpec::default()
            },
            ..Self::default()
        }
    }
}

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_634_138,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the odd-indexed Kronrod abscissae.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment<T> {
    lo: T,
    hi: T,
    estimate: T,
    error: T,
    abs_scale: T,
    depth: usize,
}

const MAX_SEGMENTS: usize = 1 << 14;

fn kronrod21<T: Scalar, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> (T, T, T) {
    let two = T::lit(2.0);
    let center = (lo + hi) / two;
    let half = (hi - lo) / two;
    let f_center = f(center);
    let mut kronrod = T::lit(WGK[10]) * f_center;
    let mut gauss = T::zero();
    let mut abs_sum = kronrod.abs();
    let mut samples = [(T::zero(), T::zero()); 10];
    for (j, &node) in XGK[..10].iter().enumerate() {
        let dx = half * T::lit(node);
        let left = f(center - dx);
        let right = f(center + dx);
        samples[j] = (left, right);
        kronrod = kronrod + T::lit(WGK[j]) * (left + right);
        abs_sum = abs_sum + T::lit(WGK[j]) * (left.abs() + right.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (left + right);
        }
    }
    let mean = kronrod / two;
    let mut asc = T::lit(WGK[10]) * (f_center - mean).abs();
    for (j, &(left, right)) in samples.iter().enumerate() {
        asc = asc + T::lit(WGK[j]) * ((left - mean).abs() + (right - mean).abs());
    }
    let result = kronrod * half;
    let abs_scale = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc > T::zero() && err > T::zero() {
        let ratio = T::lit(200.0) * err / asc;
        err = asc * T::one().min(ratio.powf(T::lit(1.5)));
    }
    let floor = T::lit(50.0) * T::epsilon() * abs_scale;
    if abs_scale > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        err = err.max(floor);
    }
    (result, err, abs_scale)
}

/// Integrates `f` over `[lo, hi]` by globally adaptive 21-point Gauss–Kronrod
/// bisection.
///
/// The segment with the largest error estimate is split until the summed
/// estimate drops below `max(abs_tol, rel_tol·|I|)`. Reaching `max_depth`
/// on the worst segment yields [`Error::NonConvergence`] with the best
/// estimate available.
pub fn integrate<T, F>(f: F, lo: T, hi: T, spec: &QuadratureSpec<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return domain("integration limits must be finite");
    }
    if lo > hi {
        return domain("integration requires lo <= hi");
    }
    if lo == hi {
        return Ok(T::zero());
    }

    let (estimate, error, abs_scale) = kronrod21(&f, lo, hi);
    let mut segments = vec![Segment {
        lo,
        hi,
        estimate,
        error,
        abs_scale,
        depth: 0,
    }];
    loop {
        let total: T = segments.iter().fold(T::zero(), |acc, s| acc + s.estimate);
        let total_err: T = segments.iter().fold(T::zero(), |acc, s| acc + s.error);
        let total_abs: T = segments.iter().fold(T::zero(), |acc, s| acc + s.abs_scale);
        // Requested tolerance, floored at what the working precision can resolve.
        let roundoff = T::lit(100.0) * T::epsilon() * total_abs;
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs()).max(roundoff);
        if total_err <= tol {
            return Ok(total);
        }
        // First segment with the largest error; ties resolve to the leftmost.
        let worst = segments
            .iter()
            .enumerate()
            .fold(0, |best, (i, s)| if s.error > segments[best].error { i } else { best });
        let seg = &segments[worst];
        let mid = (seg.lo + seg.hi) / T::lit(2.0);
        if seg.depth >= spec.max_depth
            || segments.len() >= MAX_SEGMENTS
            || !(mid > seg.lo && mid < seg.hi)
        {
            return Err(Error::NonConvergence {
                estimate: total.as_f64(),
                error_bound: total_err.as_f64(),
            });
        }
        let (lo, hi, depth) = (seg.lo, seg.hi, seg.depth + 1);
        let (left_est, left_err, left_abs) = kronrod21(&f, lo, mid);
        let (right_est, right_err, right_abs) = kronrod21(&f, mid, hi);
        segments[worst] = Segment {
            lo,
            hi: mid,
            estimate: left_est,
            error: left_err,
            abs_scale: left_abs,
            depth,
        };
        segments.insert(
            worst + 1,
            Segment {
                lo: mid,
                hi,
                estimate: right_est,
                error: right_err,
                abs_scale: right_abs,
                depth,
            },
        );
    }
}

/// Integrates over `[lo, hi]` split at each breakpoint strictly inside it.
///
/// Used wherever the integrand has kinks or spans many orders of magnitude.
pub fn integrate_with_breaks<T, F>(
    f: F,
    lo: T,
    hi: T,
    breaks: &[T],
    spec: &QuadratureSpec<T>,
) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if lo > hi {
        return domain("integration requires lo <= hi");
    }
    let mut points: Vec<T> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    points.dedup();
    let mut total = T::zero();
    let mut left = lo;
    for p in points.into_iter().chain(std::iter::once(hi)) {
        total = total + integrate(&f, left, p, spec)?;
        left = p;
    }
    Ok(total)
}

/// Finds a root of `g` in `[lo, hi]` by Brent's method.
///
/// The iterate never leaves the bracket. Returns as soon as `|g(r)| <= f_tol`
/// or the bracket is narrower than `x_tol` (or cannot shrink further in
/// floating point).
pub fn find_root<T, G>(g: G, lo: T, hi: T, spec: &RootSpec<T>) -> Result<T>
where
    T: Scalar,
    G: Fn(T) -> T,
{
    if !(lo <= hi) {
        return domain("root bracket requires lo <= hi");
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            g_lo: fa.as_f64(),
            g_hi: fb.as_f64(),
        });
    }
    let two = T::lit(2.0);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..spec.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width = (c - b).abs();
        let tol1 = T::lit(2.0) * T::epsilon() * b.abs();
        let m = (c - b) / two;
        if fb.abs() <= spec.f_tol || width <= spec.x_tol || m.abs() <= tol1 || fb == T::zero() {
            return Ok(clamp(b, lo, hi));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            let bound1 = T::lit(3.0) * m * q - (tol1 * q).abs();
            let bound2 = (e * q).abs();
            if two * p < bound1.min(bound2) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else { b + tol1 * m.signum() };
        fb = g(b);
    }
    Err(Error::RootNotConverged {
        iterations: spec.max_iter,
        best: b.as_f64(),
    })
}

fn clamp<T: Scalar>(x: T, lo: T, hi: T) -> T {
    x.max(lo).min(hi)
}

/// Maximizes `h` on `[lo, hi]`: a uniform grid pre-scan followed by
/// golden-section refinement around the best grid point.
///
/// The returned value is never below the best grid value.
pub fn maximize_scalar<T, H>(h: H, lo: T, hi: T, spec: &OptSpec<T>) -> Result<(T, T)>
where
    T: Scalar,
    H: Fn(T) -> T,
{
    if !(lo < hi) {
        return domain("maximize_scalar requires lo < hi");
    }
    let n = spec.grid_points.max(3);
    let step = (hi - lo) / T::lit((n - 1) as f64);
    let grid_x = |i: usize| if i == n - 1 { hi } else { lo + step * T::lit(i as f64) };
    let (mut best_i, mut best_h) = (0, h(lo));
    for i in 1..n {
        let v = h(grid_x(i));
        if v > best_h || best_h.is_nan() {
            best_i = i;
            best_h = v;
        }
    }
    let left = grid_x(best_i.saturating_sub(1));
    let right = grid_x((best_i + 1).min(n - 1));
    let (x_ref, h_ref) = golden_section(&h, left, right, spec);
    if h_ref > best_h {
        Ok((x_ref, h_ref))
    } else {
        Ok((grid_x(best_i), best_h))
    }
}

/// Minimizes `h` on `[lo, hi]` via [`maximize_scalar`] of `-h`.
pub fn minimize_scalar<T, H>(h: H, lo: T, hi: T, spec: &OptSpec<T>) -> Result<(T, T)>
where
    T: Scalar,
    H: Fn(T) -> T,
{
    let (x, v) = maximize_scalar(|x| -h(x), lo, hi, spec)?;
    Ok((x, -v))
}

fn golden_section<T: Scalar, H: Fn(T) -> T>(h: &H, lo: T, hi: T, spec: &OptSpec<T>) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut h1, mut h2) = (h(x1), h(x2));
    for _ in 0..spec.max_iter {
        if (b - a).abs() <= spec.x_tol {
            break;
        }
        if h1 >= h2 {
            b = x2;
            x2 = x1;
            h2 = h1;
            x1 = b - inv_phi * (b - a);
            h1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            h1 = h2;
            x2 = a + inv_phi * (b - a);
            h2 = h(x2);
        }
    }
    if h1 >= h2 {
        (x1, h1)
    } else {
        (x2, h2)
    }
}
