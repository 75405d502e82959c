//! C ABI over the evaluation engine so other languages can score trackers
//! without shelling out to the CLI.
//!
//! Conventions, chosen for bindability rather than elegance:
//!
//! - Every fallible call returns a [`TbStatus`] and writes its result
//!   through an out pointer. `TbStatus::Ok` is zero.
//! - The sequence accumulator is an opaque handle created by
//!   [`tb_sequence_new`] and released by [`tb_sequence_free`]; the header
//!   only ever sees it behind a pointer.
//! - Mode, kind, and comparison arguments are plain `int32_t` checked at
//!   the boundary (`TB_ANGLE_*`, `TB_CURVE_*`, `TB_COMPARISON_*`), because
//!   an out-of-range C enum would be undefined behavior on the Rust side.
//! - No state is shared between handles and nothing is global; a handle
//!   may be used from one thread at a time.

use std::ffi::{c_char, CStr};

use trackbench::curves::{
    matching_curve, overlap_thresholds, precision_curve, precision_thresholds, success_curve,
    ComparisonMode, CurveError,
};
use trackbench::dataset::Region;
use trackbench::geometry::{iou, RotatedBox};
use trackbench::measures::{frame_measures, matching_score, AngleMode, FrameMeasures};

/// Result of every fallible call. Zero is success; everything else names
/// the first check that failed.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Box dimensions were not positive finite numbers.
    InvalidBox = 2,
    /// A numeric or selector argument was outside its domain.
    InvalidArgument = 3,
    /// The accumulator holds no frames yet.
    Empty = 4,
    /// A region line did not parse.
    ParseError = 5,
}

pub const TB_ANGLE_RAW: i32 = 0;
pub const TB_ANGLE_WRAP: i32 = 1;

pub const TB_CURVE_PRECISION: i32 = 0;
pub const TB_CURVE_SUCCESS: i32 = 1;
pub const TB_CURVE_MATCHING: i32 = 2;

pub const TB_COMPARISON_STRICT: i32 = 0;
pub const TB_COMPARISON_INCLUSIVE: i32 = 1;

/// A rotated rectangle: center, side lengths, orientation in degrees.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TbBox {
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
    pub theta: f64,
}

/// Per-frame measures. On a failure frame `valid` is false, the overlap
/// and matching score are zero, and the remaining errors are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TbFrameMeasures {
    pub valid: bool,
    pub e_c: f64,
    pub e_a: f64,
    pub e_h: f64,
    pub e_w: f64,
    pub e_theta: f64,
    pub e_ms: f64,
}

/// Sequence summary. The four geometric averages cover valid frames only
/// and are NaN (with `has_geometry` false) when every frame failed;
/// overlap and matching score average zeros in for failures.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TbSummary {
    pub n_frames: usize,
    pub n_failures: usize,
    pub has_geometry: bool,
    pub avg_c: f64,
    pub avg_h: f64,
    pub avg_w: f64,
    pub avg_theta: f64,
    pub avg_a: f64,
    pub avg_ms: f64,
}

/// Opaque per-sequence accumulator: an angle convention fixed at creation
/// plus the frames pushed so far.
pub struct TbSequence {
    mode: AngleMode,
    frames: Vec<FrameMeasures>,
}

fn angle_mode(raw: i32) -> Option<AngleMode> {
    match raw {
        TB_ANGLE_RAW => Some(AngleMode::Raw),
        TB_ANGLE_WRAP => Some(AngleMode::Wrap),
        _ => None,
    }
}

fn comparison(raw: i32) -> Option<ComparisonMode> {
    match raw {
        TB_COMPARISON_STRICT => Some(ComparisonMode::Strict),
        TB_COMPARISON_INCLUSIVE => Some(ComparisonMode::Inclusive),
        _ => None,
    }
}

fn to_rotated(b: &TbBox) -> Result<RotatedBox, TbStatus> {
    RotatedBox::new(b.cx, b.cy, b.w, b.h, b.theta).map_err(|_| TbStatus::InvalidBox)
}

fn from_frame(m: FrameMeasures) -> TbFrameMeasures {
    TbFrameMeasures {
        valid: m.valid,
        e_c: m.e_c,
        e_a: m.e_a,
        e_h: m.e_h,
        e_w: m.e_w,
        e_theta: m.e_theta,
        e_ms: m.e_ms,
    }
}

/// IoU of two rotated boxes, in [0, 1].
///
/// # Safety
///
/// `a`, `b`, and `out` must be valid pointers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_box_iou(a: *const TbBox, b: *const TbBox, out: *mut f64) -> TbStatus {
    let (Some(a), Some(b), Some(out)) = (a.as_ref(), b.as_ref(), out.as_mut()) else {
        return TbStatus::NullPointer;
    };
    match (to_rotated(a), to_rotated(b)) {
        (Ok(a), Ok(b)) => {
            *out = iou(&a, &b);
            TbStatus::Ok
        }
        _ => TbStatus::InvalidBox,
    }
}

/// Composite matching score from the four errors and the overlap.
/// Errors must be non-negative and finite, the overlap in [0, 1].
///
/// # Safety
///
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_matching_score(
    e_c: f64,
    e_h: f64,
    e_w: f64,
    e_theta: f64,
    e_a: f64,
    out: *mut f64,
) -> TbStatus {
    let Some(out) = out.as_mut() else {
        return TbStatus::NullPointer;
    };
    match matching_score(e_c, e_h, e_w, e_theta, e_a) {
        Ok(s) => {
            *out = s;
            TbStatus::Ok
        }
        Err(_) => TbStatus::InvalidArgument,
    }
}

/// All measures for one frame. A null `tracked` marks a failure frame.
/// `angle_mode` is `TB_ANGLE_RAW` or `TB_ANGLE_WRAP`.
///
/// # Safety
///
/// `gt` and `out` must be valid pointers; `tracked` may be null but must
/// otherwise be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tb_frame_measures(
    gt: *const TbBox,
    tracked: *const TbBox,
    angle_mode_raw: i32,
    out: *mut TbFrameMeasures,
) -> TbStatus {
    let (Some(gt), Some(out)) = (gt.as_ref(), out.as_mut()) else {
        return TbStatus::NullPointer;
    };
    let Some(mode) = angle_mode(angle_mode_raw) else {
        return TbStatus::InvalidArgument;
    };
    let gt = match to_rotated(gt) {
        Ok(b) => b,
        Err(s) => return s,
    };
    let tracked = match tracked.as_ref().map(to_rotated).transpose() {
        Ok(t) => t,
        Err(s) => return s,
    };
    *out = from_frame(frame_measures(&gt, tracked.as_ref(), mode));
    TbStatus::Ok
}

/// Parses one annotation line (8-number corners, 4-number axis-aligned
/// box, or a single-number failure marker). On a failure marker
/// `out_is_failure` is set and `out_box` is left untouched.
///
/// # Safety
///
/// `line` must be a valid NUL-terminated string; `out_box` and
/// `out_is_failure` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn tb_parse_region(
    line: *const c_char,
    out_box: *mut TbBox,
    out_is_failure: *mut bool,
) -> TbStatus {
    if line.is_null() {
        return TbStatus::NullPointer;
    }
    let (Some(out_box), Some(out_is_failure)) = (out_box.as_mut(), out_is_failure.as_mut()) else {
        return TbStatus::NullPointer;
    };
    let Ok(text) = CStr::from_ptr(line).to_str() else {
        return TbStatus::ParseError;
    };
    let region = match Region::parse(text) {
        Ok(r) => r,
        Err(_) => return TbStatus::ParseError,
    };
    match region.rect() {
        Some(rect) => {
            *out_box = TbBox {
                cx: rect.cx(),
                cy: rect.cy(),
                w: rect.w(),
                h: rect.h(),
                theta: rect.theta(),
            };
            *out_is_failure = false;
        }
        None => *out_is_failure = true,
    }
    TbStatus::Ok
}

/// Creates an accumulator; returns null if `angle_mode` is not one of the
/// `TB_ANGLE_*` values. Release with [`tb_sequence_free`].
#[no_mangle]
pub extern "C" fn tb_sequence_new(angle_mode_raw: i32) -> *mut TbSequence {
    match angle_mode(angle_mode_raw) {
        Some(mode) => Box::into_raw(Box::new(TbSequence { mode, frames: Vec::new() })),
        None => std::ptr::null_mut(),
    }
}

/// Scores one frame and appends it. A null `tracked` records a failure.
///
/// # Safety
///
/// `seq` must come from [`tb_sequence_new`] and not be freed; `gt` must be
/// valid; `tracked` may be null but must otherwise be valid.
#[no_mangle]
pub unsafe extern "C" fn tb_sequence_push(
    seq: *mut TbSequence,
    gt: *const TbBox,
    tracked: *const TbBox,
) -> TbStatus {
    let (Some(seq), Some(gt)) = (seq.as_mut(), gt.as_ref()) else {
        return TbStatus::NullPointer;
    };
    let gt = match to_rotated(gt) {
        Ok(b) => b,
        Err(s) => return s,
    };
    let tracked = match tracked.as_ref().map(to_rotated).transpose() {
        Ok(t) => t,
        Err(s) => return s,
    };
    seq.frames.push(frame_measures(&gt, tracked.as_ref(), seq.mode));
    TbStatus::Ok
}

/// Number of frames pushed so far; zero for a null handle.
///
/// # Safety
///
/// `seq` must be null or a live handle from [`tb_sequence_new`].
#[no_mangle]
pub unsafe extern "C" fn tb_sequence_len(seq: *const TbSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.frames.len())
}

/// Averages over the accumulated frames.
///
/// # Safety
///
/// `seq` must be a live handle; `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_sequence_summary(
    seq: *const TbSequence,
    out: *mut TbSummary,
) -> TbStatus {
    let (Some(seq), Some(out)) = (seq.as_ref(), out.as_mut()) else {
        return TbStatus::NullPointer;
    };
    let summary = match trackbench::measures::sequence_summary(&seq.frames) {
        Ok(s) => s,
        Err(_) => return TbStatus::Empty,
    };
    *out = TbSummary {
        n_frames: summary.n_frames,
        n_failures: summary.n_failures,
        has_geometry: summary.avg_c.is_some(),
        avg_c: summary.avg_c.unwrap_or(f64::NAN),
        avg_h: summary.avg_h.unwrap_or(f64::NAN),
        avg_w: summary.avg_w.unwrap_or(f64::NAN),
        avg_theta: summary.avg_theta.unwrap_or(f64::NAN),
        avg_a: summary.avg_a,
        avg_ms: summary.avg_ms,
    };
    TbStatus::Ok
}

/// Area under the selected curve on the standard grids (pixel thresholds
/// 0..=50 for precision, 101 steps over [0, 1] otherwise). `comparison`
/// picks strict or inclusive thresholding and is ignored for precision.
///
/// # Safety
///
/// `seq` must be a live handle; `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_sequence_auc(
    seq: *const TbSequence,
    kind: i32,
    comparison_raw: i32,
    out: *mut f64,
) -> TbStatus {
    let (Some(seq), Some(out)) = (seq.as_ref(), out.as_mut()) else {
        return TbStatus::NullPointer;
    };
    let Some(cmp) = comparison(comparison_raw) else {
        return TbStatus::InvalidArgument;
    };
    let curve = match kind {
        TB_CURVE_PRECISION => precision_curve(&seq.frames, &precision_thresholds(50)),
        TB_CURVE_SUCCESS => success_curve(&seq.frames, &overlap_thresholds(101), cmp),
        TB_CURVE_MATCHING => matching_curve(&seq.frames, &overlap_thresholds(101), cmp),
        _ => return TbStatus::InvalidArgument,
    };
    match curve {
        Ok(c) => {
            *out = c.auc();
            TbStatus::Ok
        }
        Err(CurveError::EmptySequence) => TbStatus::Empty,
        Err(_) => TbStatus::InvalidArgument,
    }
}

/// Fraction of accumulated frames passing at one threshold: center error
/// within `threshold` pixels for precision, overlap or matching score
/// beating `threshold` for the other kinds.
///
/// # Safety
///
/// `seq` must be a live handle; `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_sequence_pass_rate(
    seq: *const TbSequence,
    kind: i32,
    comparison_raw: i32,
    threshold: f64,
    out: *mut f64,
) -> TbStatus {
    let (Some(seq), Some(out)) = (seq.as_ref(), out.as_mut()) else {
        return TbStatus::NullPointer;
    };
    let Some(cmp) = comparison(comparison_raw) else {
        return TbStatus::InvalidArgument;
    };
    if !threshold.is_finite() {
        return TbStatus::InvalidArgument;
    }
    if seq.frames.is_empty() {
        return TbStatus::Empty;
    }
    let beats = |v: f64| match cmp {
        ComparisonMode::Strict => v > threshold,
        ComparisonMode::Inclusive => v >= threshold,
    };
    let passing = match kind {
        TB_CURVE_PRECISION => seq.frames.iter().filter(|f| f.valid && f.e_c <= threshold).count(),
        TB_CURVE_SUCCESS => seq.frames.iter().filter(|f| beats(f.e_a)).count(),
        TB_CURVE_MATCHING => seq.frames.iter().filter(|f| beats(f.e_ms)).count(),
        _ => return TbStatus::InvalidArgument,
    };
    *out = passing as f64 / seq.frames.len() as f64;
    TbStatus::Ok
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
///
/// `seq` must be null or a handle from [`tb_sequence_new`] that has not
/// already been freed; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tb_sequence_free(seq: *mut TbSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Static name for a status code; unknown codes map to "unknown".
#[no_mangle]
pub extern "C" fn tb_status_name(status: i32) -> *const c_char {
    let name: &'static CStr = match status {
        s if s == TbStatus::Ok as i32 => c"ok",
        s if s == TbStatus::NullPointer as i32 => c"null pointer",
        s if s == TbStatus::InvalidBox as i32 => c"invalid box",
        s if s == TbStatus::InvalidArgument as i32 => c"invalid argument",
        s if s == TbStatus::Empty as i32 => c"empty sequence",
        s if s == TbStatus::ParseError as i32 => c"parse error",
        _ => c"unknown",
    };
    name.as_ptr()
}
