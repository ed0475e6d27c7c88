//! Worked scale examples: the nine-row table of 90/95/99% intervals and
//! the desk-measurement design problem.

use serde::Serialize;

use crate::densities::Family;
use crate::error::{domain, Result};
use crate::scalar::serialize_extended;
use crate::scale_ci::{
    design_scale_interval, g_at_zero, m_star, m_star_gaussian_approx, scale_interval, ScaleDesign,
    ScaleInterval,
};

/// One published interval `(|x|/t2, |x|/t1)` with its stated validity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub nominal: f64,
    pub label: &'static str,
    pub t1: f64,
    pub t2: f64,
    /// `|μ| ≤ validity·σ`; `∞` reads "valid always".
    pub validity: f64,
    /// Decimal places the validity constant was printed with.
    pub decimals: u32,
}

const fn row(nominal: f64, label: &'static str, t1: f64, t2: f64, validity: f64, decimals: u32) -> PublishedRow {
    PublishedRow {
        nominal,
        label,
        t1,
        t2,
        validity,
        decimals,
    }
}

pub const PUBLISHED_ROWS: [PublishedRow; 9] = [
    row(0.90, "(0, 8|x|)", 1.0 / 8.0, f64::INFINITY, f64::INFINITY, 0),
    row(0.90, "(|x|/4, 8|x|)", 1.0 / 8.0, 4.0, 2.7, 1),
    row(0.90, "(|x|/8, 8|x|)", 1.0 / 8.0, 8.0, 6.7, 1),
    row(0.95, "(|x|/5, 17|x|)", 1.0 / 17.0, 5.0, 3.3, 1),
    row(0.95, "(|x|/50, 17|x|)", 1.0 / 17.0, 50.0, 48.0, 0),
    row(0.95, "(0, 17|x|)", 1.0 / 17.0, f64::INFINITY, f64::INFINITY, 0),
    row(0.99, "(|x|/5, 70|x|)", 1.0 / 70.0, 5.0, 2.7, 1),
    row(0.99, "(|x|/1000, 70|x|)", 1.0 / 70.0, 1000.0, 997.0, 0),
    row(0.99, "(0, 70|x|)", 1.0 / 70.0, f64::INFINITY, f64::INFINITY, 0),
];

/// Largest tolerated gap between the truncated threshold and the printed one.
pub const VALIDITY_TOLERANCE: f64 = 0.05;

/// A published row next to its recomputation under the normal density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleRow {
    pub nominal: f64,
    pub published_interval: String,
    pub t1: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub t2: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub published_validity: f64,
    /// `2[F(t2) − F(t1)]`.
    pub recomputed_confidence: f64,
    /// Rounded to two decimals, the precision the nominal level is quoted at.
    pub rounded_confidence: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub recomputed_m_star: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub approx_m_star: f64,
    /// `recomputed_m_star` truncated to the printed decimals.
    #[serde(serialize_with = "serialize_extended")]
    pub rounded_m_star: f64,
    pub confidence_confirmed: bool,
    pub m_star_confirmed: bool,
    /// True when the unrounded confidence falls short of the nominal level.
    pub rounding_discrepancy: bool,
}

impl ExampleRow {
    pub fn confirmed(&self) -> bool {
        self.confidence_confirmed && self.m_star_confirmed
    }
}

fn truncate(x: f64, decimals: u32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(decimals as i32);
    // Nudge absorbs binary representation error of already-exact values.
    (x * scale + 1e-9).floor() / scale
}

pub fn round_confidence(p: f64) -> f64 {
    (p * 100.0).round() / 100.0
}

fn recompute(published: &PublishedRow, density: &Family<f64>) -> Result<ExampleRow> {
    let PublishedRow {
        nominal,
        label,
        t1,
        t2,
        validity,
        decimals,
    } = *published;
    let confidence = g_at_zero(t1, t2, density)?;
    let exact = m_star(t1, t2, density)?.value;
    let approx = m_star_gaussian_approx(t1, t2, density)?;
    let rounded_m_star = truncate(exact, decimals);
    let m_star_confirmed = if validity.is_infinite() {
        exact.is_infinite()
    } else {
        (rounded_m_star - validity).abs() <= VALIDITY_TOLERANCE && exact >= validity
    };
    let rounded_confidence = round_confidence(confidence);
    Ok(ExampleRow {
        nominal,
        published_interval: label.to_string(),
        t1,
        t2,
        published_validity: validity,
        recomputed_confidence: confidence,
        rounded_confidence,
        recomputed_m_star: exact,
        approx_m_star: approx,
        rounded_m_star,
        confidence_confirmed: rounded_confidence >= nominal,
        m_star_confirmed,
        rounding_discrepancy: confidence < nominal,
    })
}

/// Recomputes every published row under the standard normal.
pub fn reference_examples() -> Result<Vec<ExampleRow>> {
    PUBLISHED_ROWS.iter().map(|r| recompute(r, &Family::Normal)).collect()
}

/// Inputs of the desk problem: the location is known to lie in
/// `center ± halfwidth`, measurements resolve `±resolution`, and that
/// resolution is read as `sigma_rule·σ ≥ resolution`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeskInputs {
    pub prior_center: f64,
    pub prior_halfwidth: f64,
    pub resolution: f64,
    pub confidence: f64,
    pub sigma_rule: f64,
    /// A `(t1, t2)` pair to verify alongside the fresh design.
    pub reference: Option<(f64, f64)>,
    pub x: Option<f64>,
}

impl DeskInputs {
    /// The one-metre desk measured to a quarter centimetre.
    pub fn desk(confidence: f64) -> Self {
        DeskInputs {
            prior_center: 2.0,
            prior_halfwidth: 1.0,
            resolution: 1.0 / 400.0,
            confidence,
            sigma_rule: 3.0,
            reference: Some((1.0 / 70.0, 1500.0)),
            x: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceCheck {
    pub t1: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub t2: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub m_star: f64,
    pub confidence: f64,
    pub rounded_confidence: f64,
    pub m_star_covers_prior: bool,
    pub meets_nominal: bool,
    pub meets_nominal_after_rounding: bool,
    pub interval: Option<ScaleInterval<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeskReport {
    pub inputs: DeskInputs,
    pub sigma_min: f64,
    /// `prior_halfwidth / sigma_min`.
    pub m: f64,
    pub design: ScaleDesign<f64>,
    pub interval: Option<ScaleInterval<f64>>,
    pub reference: Option<ReferenceCheck>,
    pub notes: Vec<String>,
}

/// Turns the prior and resolution into `|μ − center| ≤ Mσ`, designs a
/// scale interval for it, and checks the reference pair if one is given.
pub fn desk_scenario(inputs: &DeskInputs) -> Result<DeskReport> {
    let density = Family::Normal;
    for (name, v) in [
        ("prior_halfwidth", inputs.prior_halfwidth),
        ("resolution", inputs.resolution),
        ("sigma_rule", inputs.sigma_rule),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return domain(format!("{name} must be positive and finite, got {v}"));
        }
    }
    if !inputs.prior_center.is_finite() {
        return domain("prior_center must be finite");
    }
    let sigma_min = inputs.resolution / inputs.sigma_rule;
    let m = inputs.prior_halfwidth / sigma_min;
    let design = design_scale_interval(inputs.confidence, m, &density)?;
    let at = |t1: f64, t2: f64| -> Result<Option<ScaleInterval<f64>>> {
        inputs
            .x
            .map(|x| scale_interval(x, inputs.prior_center, t1, t2, m, &density))
            .transpose()
    };
    let interval = at(design.t1, design.t2)?;
    let mut notes = Vec::new();
    let reference = match inputs.reference {
        None => None,
        Some((t1, t2)) => {
            let star = m_star(t1, t2, &density)?.value;
            let confidence = g_at_zero(t1, t2, &density)?;
            let rounded = round_confidence(confidence);
            let check = ReferenceCheck {
                t1,
                t2,
                m_star: star,
                confidence,
                rounded_confidence: rounded,
                m_star_covers_prior: star >= m,
                meets_nominal: confidence >= inputs.confidence,
                meets_nominal_after_rounding: rounded >= inputs.confidence,
                interval: at(t1, t2)?,
            };
            if !check.meets_nominal && check.meets_nominal_after_rounding {
                notes.push(format!(
                    "reference pair has confidence {confidence:.6}, which only reaches the nominal {} after rounding to two decimals",
                    inputs.confidence
                ));
            }
            Some(check)
        }
    };
    Ok(DeskReport {
        inputs: inputs.clone(),
        sigma_min,
        m,
        design,
        interval,
        reference,
        notes,
    })
}
