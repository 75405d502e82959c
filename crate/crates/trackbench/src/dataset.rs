//! Dataset and tracker-result ingestion.
//!
//! On-disk layout:
//!
//! ```text
//! <dataset>/list.txt                  one sequence name per line
//! <dataset>/<sequence>/groundtruth.txt one region line per frame
//! <results>/<tracker>/<sequence>.txt   one region line per frame
//! ```
//!
//! A region line is comma-separated numbers (whitespace around commas is
//! tolerated, as are CRLF endings and one trailing blank line):
//!
//! - eight numbers: four corners `x1,y1,…,y4`, fitted to a rotated box;
//! - four numbers: axis-aligned `x,y,w,h` with `(x, y)` the left-top
//!   corner;
//! - one number: a marker (initialization or failure code); the frame
//!   counts as a tracker failure. Markers are invalid in ground truth.
//!
//! Numbers follow a deliberately plain grammar (optional sign, digits,
//! optional fraction, optional exponent) so that `nan`, `inf`, and hex
//! floats are rejected up front.
//!
//! Every parsed [`Region`] keeps its source numbers next to the derived
//! box, which makes serialization lossless: parse → serialize → parse is
//! the identity, and a file written by [`serialize_regions`] round-trips
//! byte for byte.

use crate::geometry::{box_from_quad, ConvexQuad, GeometryError, Point, RotatedBox};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// A single region line's parse failure, without file context.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("token {0:?} is not a plain decimal number")]
    BadToken(String),
    #[error("expected 1, 4, or 8 comma-separated numbers, found {0}")]
    WrongCount(usize),
    #[error("corners are unusable: {0}")]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("missing file {path}")]
    MissingFile { path: PathBuf },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Parse {
        path: PathBuf,
        line: usize,
        #[source]
        source: RegionError,
    },
    #[error("{path} contains no regions")]
    EmptyFile { path: PathBuf },
    #[error("sequence list {path} names no sequences")]
    EmptyList { path: PathBuf },
    #[error("sequence {name:?} appears more than once in the list")]
    DuplicateSequence { name: String },
    #[error("ground truth of sequence {sequence:?} has a failure marker at line {line}")]
    GroundTruthFailure { sequence: String, line: usize },
    #[error(
        "tracker {tracker:?} on sequence {sequence:?}: {found} predictions for {expected} frames"
    )]
    LengthMismatch { tracker: String, sequence: String, expected: usize, found: usize },
}

/// The source form of a region line, kept verbatim for re-serialization.
#[derive(Debug, Clone, PartialEq)]
enum RegionForm {
    Corners([f64; 8]),
    AxisAligned([f64; 4]),
    Marker(f64),
}

/// One parsed region line: the derived rotated box (absent for markers)
/// plus the numbers it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    form: RegionForm,
    rect: Option<RotatedBox>,
}

impl Region {
    /// Parses one line. See [`parse_region_line`].
    pub fn parse(line: &str) -> Result<Region, RegionError> {
        let trimmed = line.trim();
        let tokens: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if trimmed.is_empty() {
            return Err(RegionError::WrongCount(0));
        }
        let mut numbers = Vec::with_capacity(tokens.len());
        for tok in &tokens {
            if !is_plain_number(tok) {
                return Err(RegionError::BadToken((*tok).to_string()));
            }
            let v: f64 = tok.parse().map_err(|_| RegionError::BadToken((*tok).to_string()))?;
            if !v.is_finite() {
                return Err(RegionError::BadToken((*tok).to_string()));
            }
            numbers.push(v);
        }
        match numbers.len() {
            1 => Ok(Region { form: RegionForm::Marker(numbers[0]), rect: None }),
            4 => {
                let [x, y, w, h] = [numbers[0], numbers[1], numbers[2], numbers[3]];
                let rect = RotatedBox::from_left_top(x, y, w, h)?;
                Ok(Region { form: RegionForm::AxisAligned([x, y, w, h]), rect: Some(rect) })
            }
            8 => {
                let mut c = [0.0; 8];
                c.copy_from_slice(&numbers);
                let quad = ConvexQuad::from_points([
                    Point::new(c[0], c[1]),
                    Point::new(c[2], c[3]),
                    Point::new(c[4], c[5]),
                    Point::new(c[6], c[7]),
                ])?;
                // A non-rectangular quad is still usable; the fit flag is
                // advisory and deliberately dropped here.
                let rect = box_from_quad(&quad).rect;
                Ok(Region { form: RegionForm::Corners(c), rect: Some(rect) })
            }
            n => Err(RegionError::WrongCount(n)),
        }
    }

    /// The derived box, or `None` for a marker (failure) line.
    pub fn rect(&self) -> Option<&RotatedBox> {
        self.rect.as_ref()
    }

    pub fn is_failure(&self) -> bool {
        self.rect.is_none()
    }

    /// Re-serializes the source numbers, comma-joined, shortest decimal
    /// form that parses back to the same values.
    pub fn to_line(&self) -> String {
        let nums: &[f64] = match &self.form {
            RegionForm::Corners(c) => c,
            RegionForm::AxisAligned(r) => r,
            RegionForm::Marker(m) => std::slice::from_ref(m),
        };
        let mut out = String::new();
        for (i, v) in nums.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out
    }
}

/// Parses one region line into a box or failure marker.
pub fn parse_region_line(line: &str) -> Result<Region, RegionError> {
    Region::parse(line)
}

/// `true` for `[+-]? digits [. digits]? [[eE] [+-]? digits]?` and nothing
/// else; in particular no `nan`/`inf`, no bare `.5`, no `1.`.
fn is_plain_number(tok: &str) -> bool {
    let b = tok.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i == start {
        return false;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return false;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return false;
        }
    }
    i == b.len()
}

/// One annotated sequence: a name and a box per frame (no markers).
#[derive(Debug, Clone)]
pub struct Sequence {
    name: String,
    frames: Vec<Region>,
}

impl Sequence {
    /// Wraps pre-parsed regions as a sequence; every region must carry a
    /// box and there must be at least one frame.
    pub fn new(name: impl Into<String>, frames: Vec<Region>) -> Result<Self, DatasetError> {
        let name = name.into();
        if frames.is_empty() {
            return Err(DatasetError::EmptyFile { path: PathBuf::from(&name) });
        }
        if let Some(i) = frames.iter().position(Region::is_failure) {
            return Err(DatasetError::GroundTruthFailure { sequence: name, line: i + 1 });
        }
        Ok(Sequence { name, frames })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn regions(&self) -> &[Region] {
        &self.frames
    }

    /// Ground-truth box of each frame.
    pub fn rects(&self) -> impl Iterator<Item = &RotatedBox> + '_ {
        self.frames.iter().map(|r| r.rect().expect("sequences contain no failure markers"))
    }
}

/// One tracker's predictions over one sequence, frame-aligned.
#[derive(Debug, Clone)]
pub struct TrackerRun {
    pub tracker: String,
    pub sequence: String,
    pub regions: Vec<Region>,
}

fn read_file(path: &Path) -> Result<String, DatasetError> {
    std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            DatasetError::MissingFile { path: path.to_path_buf() }
        } else {
            DatasetError::Io { path: path.to_path_buf(), source: e }
        }
    })
}

/// Parses a whole region file. One trailing blank line (or final newline)
/// is tolerated; interior blank lines are parse errors.
fn parse_region_file(path: &Path, text: &str) -> Result<Vec<Region>, DatasetError> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    while matches!(lines.last(), Some(l) if l.trim().is_empty()) {
        lines.pop();
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            Region::parse(line).map_err(|source| DatasetError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                source,
            })
        })
        .collect()
}

/// Serializes regions as a region file: one line each, trailing newline.
pub fn serialize_regions(regions: &[Region]) -> String {
    let mut out = String::new();
    for r in regions {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}

/// Loads every sequence named by `<root>/list.txt`, in list order.
pub fn load_dataset(root: &Path) -> Result<Vec<Sequence>, DatasetError> {
    let list_path = root.join("list.txt");
    let text = read_file(&list_path)?;
    let names: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if names.is_empty() {
        return Err(DatasetError::EmptyList { path: list_path });
    }
    let mut seen = std::collections::HashSet::new();
    let mut sequences = Vec::with_capacity(names.len());
    for name in names {
        if !seen.insert(name) {
            return Err(DatasetError::DuplicateSequence { name: name.to_string() });
        }
        let gt_path = root.join(name).join("groundtruth.txt");
        let regions = parse_region_file(&gt_path, &read_file(&gt_path)?)?;
        if regions.is_empty() {
            return Err(DatasetError::EmptyFile { path: gt_path });
        }
        if let Some(i) = regions.iter().position(Region::is_failure) {
            return Err(DatasetError::GroundTruthFailure {
                sequence: name.to_string(),
                line: i + 1,
            });
        }
        sequences.push(Sequence { name: name.to_string(), frames: regions });
    }
    Ok(sequences)
}

/// Loads `<root>/<tracker>/<sequence>.txt` for every tracker × sequence
/// pair, in that nesting order. Each run must be frame-aligned with its
/// sequence.
pub fn load_results(
    root: &Path,
    trackers: &[String],
    sequences: &[Sequence],
) -> Result<Vec<TrackerRun>, DatasetError> {
    let mut runs = Vec::with_capacity(trackers.len() * sequences.len());
    for tracker in trackers {
        for seq in sequences {
            let path = root.join(tracker).join(format!("{}.txt", seq.name()));
            let regions = parse_region_file(&path, &read_file(&path)?)?;
            if regions.len() != seq.len() {
                return Err(DatasetError::LengthMismatch {
                    tracker: tracker.clone(),
                    sequence: seq.name().to_string(),
                    expected: seq.len(),
                    found: regions.len(),
                });
            }
            runs.push(TrackerRun {
                tracker: tracker.clone(),
                sequence: seq.name().to_string(),
                regions,
            });
        }
    }
    Ok(runs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_eight_number_rectangle() {
        let r = Region::parse("10.0,20.0,30.0,20.0,30.0,40.0,10.0,40.0").unwrap();
        let b = r.rect().unwrap();
        assert_eq!((b.cx(), b.cy()), (20.0, 30.0));
        assert_eq!((b.w(), b.h()), (20.0, 20.0));
        assert_eq!(b.theta(), 0.0);
    }

    #[test]
    fn parses_four_number_left_top_convention() {
        let r = Region::parse("10,20,30,40").unwrap();
        let b = r.rect().unwrap();
        assert_eq!((b.cx(), b.cy()), (25.0, 40.0));
        assert_eq!((b.w(), b.h(), b.theta()), (30.0, 40.0, 0.0));
    }

    #[test]
    fn single_number_is_failure_marker() {
        for line in ["2", "1", "0", "2.0"] {
            let r = Region::parse(line).unwrap();
            assert!(r.is_failure());
            assert!(r.rect().is_none());
        }
    }

    #[test]
    fn tolerates_whitespace_and_crlf() {
        let r = Region::parse(" 10 , 20 ,30, 40 \r").unwrap();
        assert_eq!(r.rect().unwrap().w(), 30.0);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(Region::parse(""), Err(RegionError::WrongCount(0))));
        assert!(matches!(Region::parse("1,2"), Err(RegionError::WrongCount(2))));
        assert!(matches!(Region::parse("1,2,3,4,5"), Err(RegionError::WrongCount(5))));
        for bad in ["a,2,3,4", "nan", "inf", "1.,2,3,4", ".5,2,3,4", "1e,2,3,4", "1e999", "0x10"] {
            assert!(matches!(Region::parse(bad), Err(RegionError::BadToken(_))), "{bad}");
        }
        // Geometry-level rejections keep their own variant.
        assert!(matches!(
            Region::parse("0,0,2,0,1,3,1,-1"),
            Err(RegionError::Geometry(GeometryError::NonConvex))
        ));
        assert!(matches!(
            Region::parse("1,2,-3,4"),
            Err(RegionError::Geometry(GeometryError::InvalidDimensions { .. }))
        ));
    }

    #[test]
    fn round_trips_in_memory_values() {
        for line in ["10,20,30,40", "27.5,35,35.5,41,32.5,45,24.5,39", "2", "-0.5,1e3,12,8"] {
            let r1 = Region::parse(line).unwrap();
            let r2 = Region::parse(&r1.to_line()).unwrap();
            assert_eq!(r1, r2, "{line}");
            // A second serialize is byte-identical (fixpoint).
            assert_eq!(r1.to_line(), r2.to_line());
        }
    }

    #[test]
    fn loads_dataset_and_results_in_list_order() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::write(root.join("list.txt"), "walk\nrun\n").unwrap();
        for (seq, line) in [("walk", "0,0,10,10\n5,5,10,10\n"), ("run", "1,1,4,4\n")] {
            std::fs::create_dir(root.join(seq)).unwrap();
            std::fs::write(root.join(seq).join("groundtruth.txt"), line).unwrap();
        }
        let seqs = load_dataset(root).unwrap();
        assert_eq!(seqs.len(), 2);
        assert_eq!(seqs[0].name(), "walk");
        assert_eq!(seqs[0].len(), 2);
        assert_eq!(seqs[1].name(), "run");

        let results = dir.path().join("results");
        std::fs::create_dir_all(results.join("trk")).unwrap();
        std::fs::write(results.join("trk").join("walk.txt"), "0,0,10,10\n2\n").unwrap();
        std::fs::write(results.join("trk").join("run.txt"), "1,1,4,4\n").unwrap();
        let runs = load_results(&results, &["trk".to_string()], &seqs).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].sequence, "walk");
        assert!(runs[0].regions[1].is_failure());
    }

    #[test]
    fn loader_error_cases() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        assert!(matches!(load_dataset(root), Err(DatasetError::MissingFile { .. })));

        std::fs::write(root.join("list.txt"), "\n\n").unwrap();
        assert!(matches!(load_dataset(root), Err(DatasetError::EmptyList { .. })));

        std::fs::write(root.join("list.txt"), "a\na\n").unwrap();
        std::fs::create_dir(root.join("a")).unwrap();
        std::fs::write(root.join("a").join("groundtruth.txt"), "0,0,1,1\n").unwrap();
        assert!(matches!(load_dataset(root), Err(DatasetError::DuplicateSequence { .. })));

        std::fs::write(root.join("list.txt"), "a\n").unwrap();
        std::fs::write(root.join("a").join("groundtruth.txt"), "0,0,1,1\n2\n").unwrap();
        let err = load_dataset(root).unwrap_err();
        match err {
            DatasetError::GroundTruthFailure { sequence, line } => {
                assert_eq!((sequence.as_str(), line), ("a", 2));
            }
            other => panic!("expected GroundTruthFailure, got {other:?}"),
        }

        std::fs::write(root.join("a").join("groundtruth.txt"), "0,0,1,1\nbogus\n").unwrap();
        let err = load_dataset(root).unwrap_err();
        match err {
            DatasetError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected Parse, got {other:?}"),
        }

        std::fs::write(root.join("a").join("groundtruth.txt"), "0,0,1,1\n0,0,2,2\n").unwrap();
        let seqs = load_dataset(root).unwrap();
        let results = root.join("results");
        std::fs::create_dir_all(results.join("t")).unwrap();
        std::fs::write(results.join("t").join("a.txt"), "0,0,1,1\n").unwrap();
        let err = load_results(&results, &["t".to_string()], &seqs).unwrap_err();
        assert!(matches!(err, DatasetError::LengthMismatch { expected: 2, found: 1, .. }));
    }

    #[test]
    fn file_round_trip_is_byte_exact() {
        let text = "10,20,30,40\n27.5,35,35.5,41,32.5,45,24.5,39\n2\n";
        let regions = parse_region_file(Path::new("mem"), text).unwrap();
        assert_eq!(serialize_regions(&regions), text);
    }
}
