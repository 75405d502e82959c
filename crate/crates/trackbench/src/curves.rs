//! Threshold curves over per-frame measures, with area-under-curve
//! statistics.
//!
//! Three curves share one construction: sweep a threshold grid and record,
//! per threshold, the fraction of frames passing a predicate.
//!
//! - precision: fraction of valid frames whose center error is within the
//!   threshold (`e_c ≤ τ`, pixels); failure frames never pass;
//! - success: fraction of frames whose overlap beats the threshold
//!   (`e_a > τ`); failure frames carry overlap 0 and so pass no `τ ≥ 0`;
//! - matching: the same sweep over the matching score (`e_ms > τ`).
//!
//! The strict `>` on success/matching and inclusive `≤` on precision are
//! the conventional readings of "larger than" and "within";
//! [`ComparisonMode::Inclusive`] switches success/matching to `≥` for
//! probing boundary sensitivity, and leaves precision alone.
//!
//! The AUC of a curve is the plain arithmetic mean of its sampled values,
//! so a flawless tracker's success AUC on the default 101-point grid is
//! 100/101, not 1: the sample at `τ = 1` cannot be beaten strictly.

use crate::measures::FrameMeasures;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("cannot build a curve over zero frames")]
    EmptySequence,
    #[error("threshold grid must be non-empty, finite, and strictly increasing")]
    InvalidThresholds,
    #[error("threshold {0} is not one of the curve's sample points")]
    ThresholdNotSampled(f64),
    #[error("curve samples are invalid: {0}")]
    InvalidSamples(String),
}

/// Boundary convention for the success-style curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonMode {
    /// `value > τ`.
    #[default]
    Strict,
    /// `value ≥ τ`.
    Inclusive,
}

impl ComparisonMode {
    pub fn name(&self) -> &'static str {
        match self {
            ComparisonMode::Strict => "strict",
            ComparisonMode::Inclusive => "inclusive",
        }
    }

    fn passes(&self, value: f64, threshold: f64) -> bool {
        match self {
            ComparisonMode::Strict => value > threshold,
            ComparisonMode::Inclusive => value >= threshold,
        }
    }
}

impl std::str::FromStr for ComparisonMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ComparisonMode::Strict),
            "inclusive" => Ok(ComparisonMode::Inclusive),
            other => {
                Err(format!("unknown comparison mode {other:?}, expected strict or inclusive"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Precision,
    Success,
    Matching,
}

impl CurveKind {
    pub fn name(&self) -> &'static str {
        match self {
            CurveKind::Precision => "precision",
            CurveKind::Success => "success",
            CurveKind::Matching => "matching",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "precision" => Ok(CurveKind::Precision),
            "success" => Ok(CurveKind::Success),
            "matching" => Ok(CurveKind::Matching),
            other => Err(format!(
                "unknown curve kind {other:?}, expected precision, success, or matching"
            )),
        }
    }
}

/// A sampled threshold curve: strictly increasing thresholds, one value in
/// [0, 1] per threshold, and the mean of the values as AUC.
///
/// Precision curves are non-decreasing in the threshold, success and
/// matching curves non-increasing; [`Curve::from_samples`] enforces this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    kind: CurveKind,
    thresholds: Vec<f64>,
    values: Vec<f64>,
    auc: f64,
}

impl Curve {
    /// Builds a curve from already-sampled values, validating every
    /// invariant. The AUC is recomputed, never trusted from the caller.
    pub fn from_samples(
        kind: CurveKind,
        thresholds: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self, CurveError> {
        validate_thresholds(&thresholds)?;
        if values.len() != thresholds.len() {
            return Err(CurveError::InvalidSamples(format!(
                "{} thresholds but {} values",
                thresholds.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || !(0.0..=1.0).contains(v)) {
            return Err(CurveError::InvalidSamples("values must lie in [0, 1]".into()));
        }
        let monotone = match kind {
            CurveKind::Precision => values.windows(2).all(|w| w[0] <= w[1]),
            CurveKind::Success | CurveKind::Matching => values.windows(2).all(|w| w[0] >= w[1]),
        };
        if !monotone {
            return Err(CurveError::InvalidSamples(format!(
                "{} curve values are not monotone in the threshold",
                kind.name()
            )));
        }
        let auc = mean(&values);
        Ok(Curve { kind, thresholds, values, auc })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Arithmetic mean of the sampled values.
    pub fn auc(&self) -> f64 {
        self.auc
    }

    /// The sampled value at an exact grid point. No interpolation: a
    /// threshold that was never sampled is an error, because a nearby
    /// sample would silently answer a different question.
    pub fn value_at(&self, threshold: f64) -> Result<f64, CurveError> {
        self.thresholds
            .iter()
            .position(|t| *t == threshold)
            .map(|i| self.values[i])
            .ok_or(CurveError::ThresholdNotSampled(threshold))
    }

    /// Re-checks every invariant; used when a curve arrives from
    /// deserialized data instead of [`Curve::from_samples`].
    pub(crate) fn revalidate(&self) -> Result<(), CurveError> {
        let recon = Curve::from_samples(self.kind, self.thresholds.clone(), self.values.clone())?;
        if (recon.auc - self.auc).abs() > 1e-9 {
            return Err(CurveError::InvalidSamples(format!(
                "stored auc {} does not match the mean of the values {}",
                self.auc, recon.auc
            )));
        }
        Ok(())
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn validate_thresholds(thresholds: &[f64]) -> Result<(), CurveError> {
    if thresholds.is_empty()
        || thresholds.iter().any(|t| !t.is_finite())
        || thresholds.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(CurveError::InvalidThresholds);
    }
    Ok(())
}

/// Integer pixel thresholds `0, 1, …, max_px`.
pub fn precision_thresholds(max_px: u32) -> Vec<f64> {
    (0..=max_px).map(f64::from).collect()
}

/// `steps` evenly spaced thresholds covering [0, 1] endpoints included.
pub fn overlap_thresholds(steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "a [0, 1] grid needs at least both endpoints");
    (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect()
}

fn sweep(
    kind: CurveKind,
    frames: &[FrameMeasures],
    thresholds: &[f64],
    pass: impl Fn(&FrameMeasures, f64) -> bool,
) -> Result<Curve, CurveError> {
    if frames.is_empty() {
        return Err(CurveError::EmptySequence);
    }
    validate_thresholds(thresholds)?;
    let n = frames.len() as f64;
    let values = thresholds
        .iter()
        .map(|&t| frames.iter().filter(|f| pass(f, t)).count() as f64 / n)
        .collect();
    Curve::from_samples(kind, thresholds.to_vec(), values)
}

/// Fraction of valid frames with center error within each threshold.
pub fn precision_curve(frames: &[FrameMeasures], thresholds: &[f64]) -> Result<Curve, CurveError> {
    sweep(CurveKind::Precision, frames, thresholds, |f, t| f.valid && f.e_c <= t)
}

/// Fraction of frames whose overlap beats each threshold.
pub fn success_curve(
    frames: &[FrameMeasures],
    thresholds: &[f64],
    mode: ComparisonMode,
) -> Result<Curve, CurveError> {
    sweep(CurveKind::Success, frames, thresholds, |f, t| mode.passes(f.e_a, t))
}

/// Fraction of frames whose matching score beats each threshold.
pub fn matching_curve(
    frames: &[FrameMeasures],
    thresholds: &[f64],
    mode: ComparisonMode,
) -> Result<Curve, CurveError> {
    sweep(CurveKind::Matching, frames, thresholds, |f, t| mode.passes(f.e_ms, t))
}
