//! Evaluation toolkit for single-object trackers whose ground truth and
//! output regions are rotated rectangles.
//!
//! The crate turns per-frame tracker regions into:
//!
//! - frame measures: center error, area overlap (IoU), height/width/
//!   orientation errors, and a composite matching score that folds all of
//!   them into one number in (0, 1];
//! - per-sequence summaries and threshold curves (precision, success, and
//!   the matching-score analogue of success) with area-under-curve
//!   statistics;
//! - reports: a versioned JSON document, Markdown/CSV/LaTeX ranking tables,
//!   and deterministic SVG plots.
//!
//! Modules are layered bottom-up: [`geometry`] (boxes, quads, clipping),
//! [`measures`] (per-frame and per-sequence numbers), [`curves`]
//! (threshold sweeps), [`dataset`] (directory layout and region-line
//! parsing), [`scenarios`] (closed-form oracle configurations and a raster
//! IoU oracle), [`report`] (JSON/tables/plots), and [`cli`] (the
//! `trackbench` binary's engine).

pub mod cli;
pub mod curves;
pub mod dataset;
pub mod geometry;
pub mod measures;
pub mod report;
pub mod scenarios;
