//! Finite-length confidence intervals for the location and scale of a
//! location-scale model, built from a single observation.
//!
//! * [`location_ci`]: the interval `x ± t|x − a|` for the location, with
//!   worst-case miscoverage either computed for a known density or bounded
//!   by `1/(1+t)` over every unimodal symmetric density.
//! * [`scale_ci`]: the interval `(|x − a|/t2, |x − a|/t1)` for the scale,
//!   valid under a prior bound `|μ − a| ≤ σM`, plus the Fisher-information
//!   length of scale intervals.
//! * [`mc_verify`]: seeded, block-parallel Monte Carlo checks of every
//!   coverage claim and a simulator for the $1/$5 coverage betting game.
//!
//! All math is generic over [`Scalar`] (`f64` and `f32`); the aliases below
//! fix it to `f64`.

pub mod densities;
pub mod error;
pub mod location_ci;
pub mod mc_verify;
pub mod numerics;
pub mod scalar;
pub mod scale_ci;
pub mod scenarios;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Built-in density family in double precision.
pub type Density = densities::Family<f64>;
/// Built-in density family in single precision.
pub type Density32 = densities::Family<f32>;
pub type Model = densities::LocationScaleModel<f64, Density>;
// pub type LocationInterval = location_ci::LocationInterval<f64>;
// pub type ScaleInterval = scale_ci::ScaleInterval<f64>;
// pub type ScaleGeometry = scale_ci::ScaleGeometry<f64>;
pub type QuadratureSpec = numerics::QuadratureSpec<f64>;
pub type RootSpec = numerics::RootSpec<f64>;
pub type OptSpec = numerics::OptSpec<f64>;
