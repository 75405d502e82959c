//! Evaluation reports: assembly from runs, versioned JSON round-trip, and
//! table/plot rendering.
//!
//! The report is the single artifact the renderers read; once it is
//! written, tables and plots never touch the dataset again. JSON output is
//! deterministic: object keys are sorted and numbers use the shortest
//! decimal form that round-trips, so equal reports serialize to equal
//! bytes.

mod svg;
mod table;

pub use svg::render_plot;
pub use table::{render_table, TableFormat, TableMetric};

use crate::curves::{
    matching_curve, overlap_thresholds, precision_curve, precision_thresholds, success_curve,
    ComparisonMode, Curve, CurveError, CurveKind,
};
use crate::dataset::{Sequence, TrackerRun};
use crate::measures::{frame_measures, sequence_summary, AngleMode, MeasureError, SequenceSummary};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Bumped on any incompatible change to the JSON layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("schema: {0}")]
    Schema(String),
    #[error("cannot encode report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("unknown sequence {0:?}")]
    UnknownSequence(String),
    #[error("run set mismatch: {0}")]
    RunSet(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Evaluation parameters, embedded in the report so rendering needs no
/// other input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Grid for the precision curve, in pixels.
    pub precision_thresholds: Vec<f64>,
    /// Grid for the success and matching curves, in [0, 1].
    pub overlap_thresholds: Vec<f64>,
    pub angle_mode: AngleMode,
    pub comparison: ComparisonMode,
}

impl Default for EvalConfig {
    /// Pixel thresholds 0..=50, 101 overlap steps, raw angles, strict
    /// comparisons.
    fn default() -> Self {
        EvalConfig {
            precision_thresholds: precision_thresholds(50),
            overlap_thresholds: overlap_thresholds(101),
            angle_mode: AngleMode::default(),
            comparison: ComparisonMode::default(),
        }
    }
}

/// One tracker's results over one sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub summary: SequenceSummary,
    pub precision: Curve,
    pub success: Curve,
    pub matching: Curve,
}

/// Macro averages over a tracker's sequences: every sequence weighs
/// equally regardless of frame count; frame and failure counts are totals.
/// The optional center/size/angle averages skip sequences where the
/// tracker never produced a valid frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetAverage {
    pub n_frames: usize,
    pub n_failures: usize,
    pub avg_c: Option<f64>,
    pub avg_h: Option<f64>,
    pub avg_w: Option<f64>,
    pub avg_theta: Option<f64>,
    pub avg_a: f64,
    pub avg_ms: f64,
    pub auc_precision: f64,
    pub auc_success: f64,
    pub auc_matching: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackerReport {
    pub sequences: BTreeMap<String, SequenceReport>,
    pub dataset_average: DatasetAverage,
}

/// A full evaluation: every tracker over every sequence.
///
/// `sequence_order` and `tracker_order` preserve presentation order
/// (dataset list order, tracker flag order); the maps are keyed for
/// lookup and sorted JSON output. Both orders cover exactly the map keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema_version: u32,
    pub dataset_name: String,
    pub config: EvalConfig,
    pub sequence_order: Vec<String>,
    pub tracker_order: Vec<String>,
    pub trackers: BTreeMap<String, TrackerReport>,
}

fn evaluate_run(
    seq: &Sequence,
    run: &TrackerRun,
    config: &EvalConfig,
) -> Result<SequenceReport, ReportError> {
    if run.regions.len() != seq.len() {
        return Err(ReportError::RunSet(format!(
            "tracker {:?} has {} predictions for the {} frames of {:?}",
            run.tracker,
            run.regions.len(),
            seq.len(),
            run.sequence
        )));
    }
    let frames: Vec<_> = seq
        .rects()
        .zip(run.regions.iter())
        .map(|(g, r)| frame_measures(g, r.rect(), config.angle_mode))
        .collect();
    Ok(SequenceReport {
        summary: sequence_summary(&frames)?,
        precision: precision_curve(&frames, &config.precision_thresholds)?,
        success: success_curve(&frames, &config.overlap_thresholds, config.comparison)?,
        matching: matching_curve(&frames, &config.overlap_thresholds, config.comparison)?,
    })
}

fn macro_average<'a>(reports: impl Iterator<Item = &'a SequenceReport>) -> DatasetAverage {
    let reports: Vec<&SequenceReport> = reports.collect();
    let n = reports.len() as f64;
    let mean = |xs: &mut dyn Iterator<Item = f64>| xs.sum::<f64>() / n;
    let opt_mean = |xs: &mut dyn Iterator<Item = Option<f64>>| {
        let xs: Vec<f64> = xs.flatten().collect();
        (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
    };
    DatasetAverage {
        n_frames: reports.iter().map(|r| r.summary.n_frames).sum(),
        n_failures: reports.iter().map(|r| r.summary.n_failures).sum(),
        avg_c: opt_mean(&mut reports.iter().map(|r| r.summary.avg_c)),
        avg_h: opt_mean(&mut reports.iter().map(|r| r.summary.avg_h)),
        avg_w: opt_mean(&mut reports.iter().map(|r| r.summary.avg_w)),
        avg_theta: opt_mean(&mut reports.iter().map(|r| r.summary.avg_theta)),
        avg_a: mean(&mut reports.iter().map(|r| r.summary.avg_a)),
        avg_ms: mean(&mut reports.iter().map(|r| r.summary.avg_ms)),
        auc_precision: mean(&mut reports.iter().map(|r| r.precision.auc())),
        auc_success: mean(&mut reports.iter().map(|r| r.success.auc())),
        auc_matching: mean(&mut reports.iter().map(|r| r.matching.auc())),
    }
}

/// Evaluates every run against its sequence and assembles the report.
///
/// Runs are processed in parallel (rayon); the assembly collects them in
/// input order, so the result is identical for any worker count. Every
/// tracker must cover every sequence exactly once.
pub fn build_report(
    dataset_name: impl Into<String>,
    sequences: &[Sequence],
    runs: &[TrackerRun],
    config: &EvalConfig,
) -> Result<EvaluationReport, ReportError> {
    let seq_by_name: BTreeMap<&str, &Sequence> = sequences.iter().map(|s| (s.name(), s)).collect();
    let mut tracker_order: Vec<String> = Vec::new();
    for run in runs {
        if !tracker_order.contains(&run.tracker) {
            tracker_order.push(run.tracker.clone());
        }
    }

    let evaluated: Vec<(String, String, SequenceReport)> = runs
        .par_iter()
        .map(|run| {
            let seq = seq_by_name.get(run.sequence.as_str()).ok_or_else(|| {
                ReportError::RunSet(format!(
                    "tracker {:?} has a run on unknown sequence {:?}",
                    run.tracker, run.sequence
                ))
            })?;
            let report = evaluate_run(seq, run, config)?;
            Ok((run.tracker.clone(), run.sequence.clone(), report))
        })
        .collect::<Result<_, ReportError>>()?;

    let mut by_tracker: BTreeMap<String, BTreeMap<String, SequenceReport>> = BTreeMap::new();
    for (tracker, sequence, report) in evaluated {
        let prev = by_tracker.entry(tracker.clone()).or_default().insert(sequence.clone(), report);
        if prev.is_some() {
            return Err(ReportError::RunSet(format!(
                "tracker {tracker:?} has two runs on sequence {sequence:?}"
            )));
        }
    }

    let sequence_order: Vec<String> = sequences.iter().map(|s| s.name().to_string()).collect();
    let mut trackers = BTreeMap::new();
    for tracker in &tracker_order {
        let per_seq = by_tracker.remove(tracker).unwrap_or_default();
        for s in &sequence_order {
            if !per_seq.contains_key(s) {
                return Err(ReportError::RunSet(format!(
                    "tracker {tracker:?} has no run on sequence {s:?}"
                )));
            }
        }
        let dataset_average = macro_average(per_seq.values());
        trackers.insert(tracker.clone(), TrackerReport { sequences: per_seq, dataset_average });
    }

    Ok(EvaluationReport {
        schema_version: SCHEMA_VERSION,
        dataset_name: dataset_name.into(),
        config: config.clone(),
        sequence_order,
        tracker_order,
        trackers,
    })
}

/// Serializes a report as pretty JSON with sorted keys and a trailing
/// newline. Equal reports produce equal bytes.
pub fn to_json(report: &EvaluationReport) -> Result<String, ReportError> {
    // Routing through Value sorts every object's keys, struct fields
    // included.
    let value = serde_json::to_value(report)?;
    Ok(format!("{}\n", serde_json::to_string_pretty(&value)?))
}

/// Parses and fully validates a report: schema version, field presence,
/// curve invariants, order/key agreement, and recomputable macro
/// averages.
pub fn from_json(text: &str) -> Result<EvaluationReport, ReportError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ReportError::Schema(format!("invalid JSON: {e}")))?;
    match value.get("schema_version").and_then(serde_json::Value::as_u64) {
        None => return Err(ReportError::Schema("missing schema_version".into())),
        Some(v) if v != u64::from(SCHEMA_VERSION) => {
            return Err(ReportError::Schema(format!(
                "schema_version {v} unsupported, expected {SCHEMA_VERSION}"
            )));
        }
        Some(_) => {}
    }
    let report: EvaluationReport = serde_json::from_value(value)
        .map_err(|e| ReportError::Schema(format!("malformed report: {e}")))?;
    validate(&report)?;
    Ok(report)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

fn opt_close(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => close(a, b),
        _ => false,
    }
}

fn validate_order(
    label: &str,
    order: &[String],
    keys: &BTreeMap<String, impl Sized>,
) -> Result<(), ReportError> {
    let mut sorted: Vec<&String> = order.iter().collect();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != order.len() {
        return Err(ReportError::Schema(format!("{label} order has duplicates")));
    }
    if sorted.len() != keys.len() || !sorted.iter().all(|n| keys.contains_key(*n)) {
        return Err(ReportError::Schema(format!("{label} order disagrees with the {label} map")));
    }
    Ok(())
}

fn validate_summary(summary: &SequenceSummary) -> Result<(), ReportError> {
    let all_failed = summary.n_failures == summary.n_frames;
    let finite_unit = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
    let valid_avg_ok = |v: Option<f64>| match v {
        None => all_failed,
        Some(v) => !all_failed && v.is_finite() && v >= 0.0,
    };
    if summary.n_frames == 0
        || summary.n_failures > summary.n_frames
        || !finite_unit(summary.avg_a)
        || !finite_unit(summary.avg_ms)
        || !valid_avg_ok(summary.avg_c)
        || !valid_avg_ok(summary.avg_h)
        || !valid_avg_ok(summary.avg_w)
        || !valid_avg_ok(summary.avg_theta)
    {
        return Err(ReportError::Schema("summary fields out of range".into()));
    }
    Ok(())
}

fn validate(report: &EvaluationReport) -> Result<(), ReportError> {
    validate_order("tracker", &report.tracker_order, &report.trackers)?;
    for (tracker, tr) in &report.trackers {
        validate_order("sequence", &report.sequence_order, &tr.sequences).map_err(|_| {
            ReportError::Schema(format!(
                "tracker {tracker:?} does not cover exactly the report's sequences"
            ))
        })?;
        for (sequence, sr) in &tr.sequences {
            let in_place = |e: CurveError| {
                ReportError::Schema(format!("tracker {tracker:?}, sequence {sequence:?}: {e}"))
            };
            sr.precision.revalidate().map_err(in_place)?;
            sr.success.revalidate().map_err(in_place)?;
            sr.matching.revalidate().map_err(in_place)?;
            let kinds_and_grids = sr.precision.kind() == CurveKind::Precision
                && sr.success.kind() == CurveKind::Success
                && sr.matching.kind() == CurveKind::Matching
                && sr.precision.thresholds() == report.config.precision_thresholds
                && sr.success.thresholds() == report.config.overlap_thresholds
                && sr.matching.thresholds() == report.config.overlap_thresholds;
            if !kinds_and_grids {
                return Err(ReportError::Schema(format!(
                    "tracker {tracker:?}, sequence {sequence:?}: curve kinds or grids disagree with the config"
                )));
            }
            validate_summary(&sr.summary).map_err(|_| {
                ReportError::Schema(format!(
                    "tracker {tracker:?}, sequence {sequence:?}: summary fields out of range"
                ))
            })?;
        }
        let want = macro_average(tr.sequences.values());
        let got = tr.dataset_average;
        let consistent = got.n_frames == want.n_frames
            && got.n_failures == want.n_failures
            && opt_close(got.avg_c, want.avg_c)
            && opt_close(got.avg_h, want.avg_h)
            && opt_close(got.avg_w, want.avg_w)
            && opt_close(got.avg_theta, want.avg_theta)
            && close(got.avg_a, want.avg_a)
            && close(got.avg_ms, want.avg_ms)
            && close(got.auc_precision, want.auc_precision)
            && close(got.auc_success, want.auc_success)
            && close(got.auc_matching, want.auc_matching);
        if !consistent {
            return Err(ReportError::Schema(format!(
                "tracker {tracker:?}: dataset_average is not the macro average of its sequences"
            )));
        }
    }
    Ok(())
}
