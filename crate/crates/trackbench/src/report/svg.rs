//! Curve plots as self-contained SVG 1.1 documents.
//!
//! The output sticks to `rect`, `line`, `text`, and `polyline` elements
//! and is built purely from the report, so equal reports render to equal
//! bytes. Coordinates are printed with one decimal, statistics with
//! three.

use super::{EvaluationReport, ReportError};
use crate::curves::{Curve, CurveKind};
use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 780.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 550.0;
const TICKS: usize = 5;

/// Tableau 10, assigned by legend rank and cycled past ten trackers.
const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc949", "#af7aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn x_axis_label(kind: CurveKind) -> &'static str {
    match kind {
        CurveKind::Precision => "center error threshold [px]",
        CurveKind::Success => "overlap threshold",
        CurveKind::Matching => "matching score threshold",
    }
}

/// Renders one sequence's curves of one kind for every tracker.
///
/// The legend lists trackers as `name [stat]`, sorted by the stat
/// descending (name ascending on exact ties): AUC for success and
/// matching plots, the value at 20 px for precision plots (falling back
/// to AUC if 20 px is not on the grid). Line colors follow legend rank.
pub fn render_plot(
    report: &EvaluationReport,
    sequence: &str,
    kind: CurveKind,
) -> Result<String, ReportError> {
    if !report.sequence_order.iter().any(|s| s == sequence) {
        return Err(ReportError::UnknownSequence(sequence.to_string()));
    }
    let grid = match kind {
        CurveKind::Precision => &report.config.precision_thresholds,
        CurveKind::Success | CurveKind::Matching => &report.config.overlap_thresholds,
    };
    let (Some(&x_min), Some(&x_max)) = (grid.first(), grid.last()) else {
        return Err(ReportError::Schema("empty threshold grid".into()));
    };
    if x_min >= x_max {
        return Err(ReportError::Schema("degenerate threshold grid".into()));
    }

    let mut entries: Vec<(&str, &Curve, f64)> = Vec::with_capacity(report.tracker_order.len());
    for tracker in &report.tracker_order {
        let per_seq = report.trackers[tracker].sequences.get(sequence).ok_or_else(|| {
            ReportError::Schema(format!(
                "tracker {tracker:?} has no entry for sequence {sequence:?}"
            ))
        })?;
        let curve = match kind {
            CurveKind::Precision => &per_seq.precision,
            CurveKind::Success => &per_seq.success,
            CurveKind::Matching => &per_seq.matching,
        };
        let stat = match kind {
            CurveKind::Precision => curve.value_at(20.0).unwrap_or_else(|_| curve.auc()),
            CurveKind::Success | CurveKind::Matching => curve.auc(),
        };
        entries.push((tracker.as_str(), curve, stat));
    }
    entries.sort_by(|a, b| {
        b.2.partial_cmp(&a.2).expect("curve stats are finite").then_with(|| a.0.cmp(b.0))
    });

    let px = |t: f64| LEFT + (t - x_min) / (x_max - x_min) * (RIGHT - LEFT);
    let py = |v: f64| TOP + (1.0 - v) * (BOTTOM - TOP);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"25.0\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{} plot on {}</text>",
        (LEFT + RIGHT) / 2.0,
        kind.name(),
        xml_escape(sequence)
    );

    // Grid lines and tick labels.
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let x = LEFT + f * (RIGHT - LEFT);
        let y = BOTTOM - f * (BOTTOM - TOP);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{TOP:.1}\" x2=\"{x:.1}\" y2=\"{BOTTOM:.1}\" stroke=\"#dddddd\" stroke-width=\"1\"/>"
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{LEFT:.1}\" y1=\"{y:.1}\" x2=\"{RIGHT:.1}\" y2=\"{y:.1}\" stroke=\"#dddddd\" stroke-width=\"1\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"568.0\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{:.1}</text>",
            x_min + f * (x_max - x_min)
        );
        let _ = writeln!(
            svg,
            "<text x=\"52.0\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">{f:.1}</text>",
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{LEFT:.1}\" y=\"{TOP:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>",
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"588.0\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">{}</text>",
        (LEFT + RIGHT) / 2.0,
        x_axis_label(kind)
    );

    for (rank, (_, curve, _)) in entries.iter().enumerate() {
        let color = PALETTE[rank % PALETTE.len()];
        let mut points = String::new();
        for (t, v) in curve.thresholds().iter().zip(curve.values()) {
            if !points.is_empty() {
                points.push(' ');
            }
            let _ = write!(points, "{:.1},{:.1}", px(*t), py(*v));
        }
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{points}\"/>"
        );
    }

    for (rank, (name, _, stat)) in entries.iter().enumerate() {
        let color = PALETTE[rank % PALETTE.len()];
        let y = 50.0 + 20.0 * rank as f64;
        let _ = writeln!(
            svg,
            "<rect x=\"564.0\" y=\"{:.1}\" width=\"18\" height=\"4\" fill=\"{color}\"/>",
            y - 4.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"588.0\" y=\"{y:.1}\" font-family=\"sans-serif\" font-size=\"13\">{} [{stat:.3}]</text>",
            xml_escape(name)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::super::tests::tiny_report;
    use super::*;

    fn tag_names(svg: &str) -> Vec<String> {
        svg.match_indices('<')
            .filter_map(|(i, _)| {
                let rest = &svg[i + 1..];
                if rest.starts_with('/') {
                    return None;
                }
                Some(rest.split([' ', '>']).next().unwrap().to_string())
            })
            .collect()
    }

    #[test]
    fn uses_only_the_declared_svg_subset() {
        let svg = render_plot(&tiny_report(), "alpha", CurveKind::Success).unwrap();
        assert!(svg.starts_with("<svg "));
        assert!(svg.contains("width=\"800\" height=\"600\""));
        for tag in tag_names(&svg) {
            assert!(
                ["svg", "rect", "line", "text", "polyline"].contains(&tag.as_str()),
                "unexpected element {tag}"
            );
        }
    }

    #[test]
    fn legend_is_sorted_by_stat_with_rank_colors() {
        let svg = render_plot(&tiny_report(), "alpha", CurveKind::Success).unwrap();
        let ace = svg.find("ace [0.990]").unwrap();
        let bee = svg.find("bee [0.812]").unwrap();
        assert!(ace < bee);
        // First-ranked polyline takes the first palette color.
        assert!(svg.contains("stroke=\"#4e79a7\""));
        assert!(svg.contains("stroke=\"#f28e2b\""));

        let svg = render_plot(&tiny_report(), "alpha", CurveKind::Precision).unwrap();
        assert!(svg.contains("ace [1.000]"));
    }

    #[test]
    fn perfect_tracker_line_drops_at_the_last_threshold() {
        let svg = render_plot(&tiny_report(), "alpha", CurveKind::Success).unwrap();
        let ace_line = svg.lines().find(|l| l.contains("polyline")).unwrap();
        assert!(ace_line.contains("points=\"60.0,40.0"));
        assert!(ace_line.contains("772.8,40.0 780.0,550.0\""));
    }

    #[test]
    fn rendering_is_deterministic() {
        let report = tiny_report();
        for kind in [CurveKind::Precision, CurveKind::Success, CurveKind::Matching] {
            let a = render_plot(&report, "beta", kind).unwrap();
            let b = render_plot(&report, "beta", kind).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn unknown_sequence_is_rejected() {
        let err = render_plot(&tiny_report(), "gamma", CurveKind::Success).unwrap_err();
        assert!(matches!(err, ReportError::UnknownSequence(_)));
    }
}
