//! Per-frame tracking measures and their per-sequence summary.
//!
//! For a ground-truth box g and a tracker box t, a frame yields:
//!
//! - `e_c`: Euclidean distance between the centers (pixels);
//! - `e_a`: area overlap, intersection over union, in [0, 1];
//! - `e_h`, `e_w`: absolute height and width differences (pixels);
//! - `e_theta`: absolute orientation difference (degrees), either the raw
//!   difference of canonical angles or the wrapped distance on the 180°
//!   circle, per [`AngleMode`];
//! - `e_ms`: the composite matching score in (0, 1], see
//!   [`matching_score`].
//!
//! A frame where the tracker reported no box (a failure marker) scores
//! zero overlap and zero matching score and is excluded from the averages
//! of the remaining measures. This treats a lost target as worthless
//! rather than skipping the frame, without letting undefined center or
//! dimension errors poison their averages.

use crate::geometry::{self, RotatedBox};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    /// Matching-score inputs outside their domain.
    #[error("measure argument out of domain: {0}")]
    Domain(String),
    /// A summary over zero frames.
    #[error("cannot summarize an empty frame sequence")]
    EmptySequence,
}

/// How to compare two orientations in `[0, 180)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AngleMode {
    /// Plain `|θ_g − θ_t|`, in [0, 180). The default: a 179° disagreement
    /// counts as large even though the sides nearly line up.
    #[default]
    Raw,
    /// Wrapped distance `min(d, 180 − d)`, in [0, 90], for callers who
    /// consider orientation modulo the rectangle's symmetry.
    Wrap,
}

impl AngleMode {
    pub fn name(&self) -> &'static str {
        match self {
            AngleMode::Raw => "raw",
            AngleMode::Wrap => "wrap",
        }
    }
}

impl std::str::FromStr for AngleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(AngleMode::Raw),
            "wrap" => Ok(AngleMode::Wrap),
            other => Err(format!("unknown angle mode {other:?}, expected raw or wrap")),
        }
    }
}

/// All measures of one frame.
///
/// When `valid` is false (failure frame), `e_a` and `e_ms` are 0 and the
/// other fields are NaN; consumers must branch on `valid`, not sniff NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameMeasures {
    pub valid: bool,
    pub e_c: f64,
    pub e_a: f64,
    pub e_h: f64,
    pub e_w: f64,
    pub e_theta: f64,
    pub e_ms: f64,
}

/// Euclidean distance between box centers, in pixels.
pub fn center_error(g: &RotatedBox, t: &RotatedBox) -> f64 {
    g.center().distance(&t.center())
}

/// Absolute height, width, and orientation differences `(e_h, e_w,
/// e_theta)`.
pub fn dimension_errors(g: &RotatedBox, t: &RotatedBox, mode: AngleMode) -> (f64, f64, f64) {
    let e_h = (g.h() - t.h()).abs();
    let e_w = (g.w() - t.w()).abs();
    let d = (g.theta() - t.theta()).abs();
    let e_theta = match mode {
        AngleMode::Raw => d,
        AngleMode::Wrap => d.min(180.0 - d),
    };
    (e_h, e_w, e_theta)
}

/// Composite matching score.
///
/// Averages five unit-range terms: `1/(1+e)` for each of the center,
/// height, width, and orientation errors, plus the overlap itself:
///
/// ```text
/// e_ms = (1/(1+e_c) + 1/(1+e_h) + 1/(1+e_w) + 1/(1+e_theta) + e_a) / 5
/// ```
///
/// Strictly decreasing in each error, increasing in the overlap, always in
/// (0, 1], and exactly 1 only for a perfect frame (all errors 0, overlap
/// 1). Requires finite, non-negative errors and an overlap in [0, 1].
pub fn matching_score(
    e_c: f64,
    e_h: f64,
    e_w: f64,
    e_theta: f64,
    e_a: f64,
) -> Result<f64, MeasureError> {
    for (name, v) in [("e_c", e_c), ("e_h", e_h), ("e_w", e_w), ("e_theta", e_theta)] {
        if !v.is_finite() || v < 0.0 {
            return Err(MeasureError::Domain(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    if !e_a.is_finite() || !(0.0..=1.0).contains(&e_a) {
        return Err(MeasureError::Domain(format!("e_a must be in [0, 1], got {e_a}")));
    }
    Ok(matching_score_unchecked(e_c, e_h, e_w, e_theta, e_a))
}

fn matching_score_unchecked(e_c: f64, e_h: f64, e_w: f64, e_theta: f64, e_a: f64) -> f64 {
    let sum =
        1.0 / (1.0 + e_c) + 1.0 / (1.0 + e_h) + 1.0 / (1.0 + e_w) + 1.0 / (1.0 + e_theta) + e_a;
    sum / 5.0
}

/// Measures for one frame; `None` marks a tracker failure on the frame.
pub fn frame_measures(g: &RotatedBox, t: Option<&RotatedBox>, mode: AngleMode) -> FrameMeasures {
    match t {
        None => FrameMeasures {
            valid: false,
            e_c: f64::NAN,
            e_a: 0.0,
            e_h: f64::NAN,
            e_w: f64::NAN,
            e_theta: f64::NAN,
            e_ms: 0.0,
        },
        Some(t) => {
            let e_c = center_error(g, t);
            let (e_h, e_w, e_theta) = dimension_errors(g, t, mode);
            let e_a = geometry::iou(g, t);
            let e_ms = matching_score_unchecked(e_c, e_h, e_w, e_theta, e_a);
            FrameMeasures { valid: true, e_c, e_a, e_h, e_w, e_theta, e_ms }
        }
    }
}

/// Per-sequence averages of the frame measures.
///
/// `avg_a` and `avg_ms` average over all frames, failures included as
/// zero. The remaining averages cover only valid frames and are `None`
/// when the tracker failed on every frame, rather than any sentinel
/// number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceSummary {
    pub n_frames: usize,
    pub n_failures: usize,
    pub avg_c: Option<f64>,
    pub avg_h: Option<f64>,
    pub avg_w: Option<f64>,
    pub avg_theta: Option<f64>,
    pub avg_a: f64,
    pub avg_ms: f64,
}

/// Summarizes a non-empty slice of frame measures.
pub fn sequence_summary(frames: &[FrameMeasures]) -> Result<SequenceSummary, MeasureError> {
    if frames.is_empty() {
        return Err(MeasureError::EmptySequence);
    }
    let n = frames.len();
    let n_valid = frames.iter().filter(|f| f.valid).count();
    let total = |f: fn(&FrameMeasures) -> f64| frames.iter().map(f).sum::<f64>();
    let valid_avg = |f: fn(&FrameMeasures) -> f64| {
        if n_valid == 0 {
            None
        } else {
            Some(frames.iter().filter(|m| m.valid).map(f).sum::<f64>() / n_valid as f64)
        }
    };
    Ok(SequenceSummary {
        n_frames: n,
        n_failures: n - n_valid,
        avg_c: valid_avg(|f| f.e_c),
        avg_h: valid_avg(|f| f.e_h),
        avg_w: valid_avg(|f| f.e_w),
        avg_theta: valid_avg(|f| f.e_theta),
        avg_a: total(|f| f.e_a) / n as f64,
        avg_ms: total(|f| f.e_ms) / n as f64,
    })
}
