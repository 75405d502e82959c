//! Comparison tables: one row per sequence, one column per tracker, plus
//! a macro-average row. The per-row best value is bold (Markdown/LaTeX)
//! or named in a trailing `best` column (CSV).

use super::{EvaluationReport, ReportError, SequenceReport};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
    Latex,
}

impl std::str::FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" => Ok(TableFormat::Markdown),
            "csv" => Ok(TableFormat::Csv),
            "latex" => Ok(TableFormat::Latex),
            other => {
                Err(format!("unknown table format {other:?}, expected markdown, csv, or latex"))
            }
        }
    }
}

/// What a table cell holds: a curve's AUC or its value at one sampled
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableMetric {
    AucSuccess,
    AucMatching,
    PrecisionAt(f64),
    SuccessAt(f64),
    MatchingAt(f64),
}

impl std::str::FromStr for TableMetric {
    type Err = ReportError;

    /// Accepts `auc_success`, `auc_matching`, and `precision@τ` /
    /// `success@τ` / `matching@τ` with a numeric threshold.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || ReportError::UnknownMetric(s.to_string());
        match s {
            "auc_success" => Ok(TableMetric::AucSuccess),
            "auc_matching" => Ok(TableMetric::AucMatching),
            _ => {
                let (head, tau) = s.split_once('@').ok_or_else(unknown)?;
                let tau: f64 = tau.parse().map_err(|_| unknown())?;
                if !tau.is_finite() {
                    return Err(unknown());
                }
                match head {
                    "precision" => Ok(TableMetric::PrecisionAt(tau)),
                    "success" => Ok(TableMetric::SuccessAt(tau)),
                    "matching" => Ok(TableMetric::MatchingAt(tau)),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

fn metric_value(report: &SequenceReport, metric: TableMetric) -> Result<f64, ReportError> {
    let sampled = |curve: &crate::curves::Curve, name: &str, tau: f64| {
        curve
            .value_at(tau)
            .map_err(|_| ReportError::UnknownMetric(format!("{name}@{tau}: threshold not sampled")))
    };
    match metric {
        TableMetric::AucSuccess => Ok(report.success.auc()),
        TableMetric::AucMatching => Ok(report.matching.auc()),
        TableMetric::PrecisionAt(t) => sampled(&report.precision, "precision", t),
        TableMetric::SuccessAt(t) => sampled(&report.success, "success", t),
        TableMetric::MatchingAt(t) => sampled(&report.matching, "matching", t),
    }
}

/// Marks the per-row best at display precision, so values that print the
/// same are bolded together. All metrics lie in [0, 1], where 3-decimal
/// formatting never has exact ties in binary floating point; rounding is
/// therefore trivially half-to-even.
fn best_mask(row: &[f64]) -> Vec<bool> {
    let shown: Vec<f64> = row.iter().map(|v| format!("{v:.3}").parse().unwrap()).collect();
    let best = shown.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    shown.iter().map(|v| *v == best).collect()
}

fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '_' | '&' | '%' | '#' | '$' => {
                out.push('\\');
                out.push(c);
            }
            _ => out.push(c),
        }
    }
    out
}

/// Renders one metric as a comparison table.
///
/// The average row is the mean of the column's unrounded values, computed
/// here rather than read from the report, so it holds for threshold
/// metrics too.
pub fn render_table(
    report: &EvaluationReport,
    metric: TableMetric,
    format: TableFormat,
) -> Result<String, ReportError> {
    let trackers = &report.tracker_order;
    let mut rows: Vec<(String, Vec<f64>)> = Vec::with_capacity(report.sequence_order.len() + 1);
    for sequence in &report.sequence_order {
        let mut row = Vec::with_capacity(trackers.len());
        for tracker in trackers {
            let per_seq = report.trackers[tracker].sequences.get(sequence).ok_or_else(|| {
                ReportError::Schema(format!(
                    "tracker {tracker:?} has no entry for sequence {sequence:?}"
                ))
            })?;
            row.push(metric_value(per_seq, metric)?);
        }
        rows.push((sequence.clone(), row));
    }
    if !rows.is_empty() && !trackers.is_empty() {
        let n = rows.len() as f64;
        let avg =
            (0..trackers.len()).map(|c| rows.iter().map(|(_, r)| r[c]).sum::<f64>() / n).collect();
        rows.push(("Average".to_string(), avg));
    }

    let mut out = String::new();
    match format {
        TableFormat::Markdown => {
            out.push_str("| sequence |");
            for t in trackers {
                let _ = write!(out, " {t} |");
            }
            out.push_str("\n| --- |");
            for _ in trackers {
                out.push_str(" --- |");
            }
            out.push('\n');
            for (label, row) in &rows {
                let best = best_mask(row);
                let _ = write!(out, "| {label} |");
                for (v, is_best) in row.iter().zip(&best) {
                    if *is_best {
                        let _ = write!(out, " **{v:.3}** |");
                    } else {
                        let _ = write!(out, " {v:.3} |");
                    }
                }
                out.push('\n');
            }
        }
        TableFormat::Csv => {
            out.push_str("sequence");
            for t in trackers {
                let _ = write!(out, ",{t}");
            }
            out.push_str(",best\n");
            for (label, row) in &rows {
                let best = best_mask(row);
                out.push_str(label);
                for v in row {
                    let _ = write!(out, ",{v:.3}");
                }
                let names: Vec<&str> = trackers
                    .iter()
                    .zip(&best)
                    .filter(|(_, b)| **b)
                    .map(|(t, _)| t.as_str())
                    .collect();
                let _ = writeln!(out, ",{}", names.join(";"));
            }
        }
        TableFormat::Latex => {
            let _ = writeln!(out, "\\begin{{tabular}}{{l{}}}", "c".repeat(trackers.len()));
            out.push_str("\\hline\nsequence");
            for t in trackers {
                let _ = write!(out, " & {}", latex_escape(t));
            }
            out.push_str(" \\\\\n\\hline\n");
            for (label, row) in &rows {
                let best = best_mask(row);
                if label == "Average" {
                    out.push_str("\\hline\n");
                }
                out.push_str(&latex_escape(label));
                for (v, is_best) in row.iter().zip(&best) {
                    if *is_best {
                        let _ = write!(out, " & \\textbf{{{v:.3}}}");
                    } else {
                        let _ = write!(out, " & {v:.3}");
                    }
                }
                out.push_str(" \\\\\n");
            }
            out.push_str("\\hline\n\\end{tabular}\n");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::tiny_report;
    use super::*;

    #[test]
    fn metric_names_parse_or_reject() {
        assert_eq!("auc_success".parse::<TableMetric>().unwrap(), TableMetric::AucSuccess);
        assert_eq!("precision@20".parse::<TableMetric>().unwrap(), TableMetric::PrecisionAt(20.0));
        assert_eq!("matching@0.5".parse::<TableMetric>().unwrap(), TableMetric::MatchingAt(0.5));
        for bad in ["auc_precision", "precision", "precision@x", "success@inf", "iou@0.5"] {
            assert!(
                matches!(bad.parse::<TableMetric>(), Err(ReportError::UnknownMetric(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn markdown_bolds_per_row_maxima() {
        let table =
            render_table(&tiny_report(), TableMetric::AucSuccess, TableFormat::Markdown).unwrap();
        let expected = "\
| sequence | ace | bee |
| --- | --- | --- |
| alpha | **0.990** | 0.812 |
| beta | **0.990** | 0.000 |
| Average | **0.990** | 0.406 |
";
        assert_eq!(table, expected);
    }

    #[test]
    fn csv_flags_best_in_trailing_column() {
        let table =
            render_table(&tiny_report(), TableMetric::AucSuccess, TableFormat::Csv).unwrap();
        let expected = "\
sequence,ace,bee,best
alpha,0.990,0.812,ace
beta,0.990,0.000,ace
Average,0.990,0.406,ace
";
        assert_eq!(table, expected);
    }

    #[test]
    fn ties_at_display_precision_are_all_marked() {
        // Same run twice under two names: every row ties.
        let mut report = tiny_report();
        let ace = report.trackers["ace"].clone();
        report.trackers.insert("ape".into(), ace);
        report.tracker_order = vec!["ace".into(), "ape".into(), "bee".into()];

        let md = render_table(&report, TableMetric::AucSuccess, TableFormat::Markdown).unwrap();
        assert!(md.contains("| alpha | **0.990** | **0.990** | 0.812 |"));
        let csv = render_table(&report, TableMetric::AucSuccess, TableFormat::Csv).unwrap();
        assert!(csv.contains("alpha,0.990,0.990,0.812,ace;ape"));
    }

    #[test]
    fn single_tracker_cells_are_all_best() {
        let mut report = tiny_report();
        report.trackers.remove("bee");
        report.tracker_order = vec!["ace".into()];
        let md =
            render_table(&report, TableMetric::PrecisionAt(20.0), TableFormat::Markdown).unwrap();
        for line in md.lines().skip(2) {
            assert!(line.contains("**"), "{line}");
        }
    }

    #[test]
    fn latex_escapes_names_and_bolds() {
        let mut report = tiny_report();
        let entry = report.trackers.remove("bee").unwrap();
        report.trackers.insert("bee_2".into(), entry);
        report.tracker_order = vec!["ace".into(), "bee_2".into()];
        let tex = render_table(&report, TableMetric::AucSuccess, TableFormat::Latex).unwrap();
        assert!(tex.starts_with("\\begin{tabular}{lcc}\n"));
        assert!(tex.contains("sequence & ace & bee\\_2 \\\\"));
        assert!(tex.contains("alpha & \\textbf{0.990} & 0.812 \\\\"));
        assert!(tex.contains("\\hline\nAverage & \\textbf{0.990} & 0.406 \\\\"));
        assert!(tex.ends_with("\\end{tabular}\n"));
    }

    #[test]
    fn unsampled_threshold_is_an_unknown_metric() {
        let err = render_table(&tiny_report(), TableMetric::PrecisionAt(20.5), TableFormat::Csv)
            .unwrap_err();
        assert!(matches!(err, ReportError::UnknownMetric(_)));
    }
}
