//! Command-line interface: argument parsing, optional config-file merge,
//! and orchestration of loading, evaluation, and rendering.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, unknown metric or
//! sequence), 2 I/O error, 3 malformed data (dataset, results, or report
//! contents). Output files are written atomically via a sibling temp file
//! and rename, so a failed run never leaves a partial artifact.

use crate::curves::{overlap_thresholds, precision_thresholds, ComparisonMode, CurveKind};
use crate::dataset::{self, DatasetError};
use crate::measures::{frame_measures, AngleMode};
use crate::report::{
    build_report, from_json, render_plot, render_table, to_json, EvalConfig, EvaluationReport,
    ReportError, TableFormat, TableMetric,
};
use crate::scenarios::{
    oriented_example_2, scaled_example_1, scaled_example_2, scaled_oriented_example_1,
    ScenarioResult,
};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// A failed invocation, sorted by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or configuration: exit 1.
    Usage(String),
    /// Filesystem trouble: exit 2.
    Io(String),
    /// Readable files with unusable contents: exit 3.
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Data(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Data(m) => m,
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Failure {
        match &e {
            DatasetError::MissingFile { .. } | DatasetError::Io { .. } => {
                Failure::Io(e.to_string())
            }
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Failure {
        match &e {
            ReportError::UnknownMetric(_) | ReportError::UnknownSequence(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "trackbench",
    version,
    about = "Evaluate single-object trackers against rotated-rectangle ground truth"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate tracker results against a dataset and write a JSON report
    Evaluate(EvaluateArgs),
    /// Render a comparison table from a report
    Table(TableArgs),
    /// Render curve plots from a report as SVG files
    Plot(PlotArgs),
    /// Print worked examples where the classic measures disagree
    DemoExamples(DemoArgs),
}

fn angle_mode_arg(s: &str) -> Result<AngleMode, String> {
    s.parse()
}

fn comparison_arg(s: &str) -> Result<ComparisonMode, String> {
    s.parse()
}

fn curve_kind_arg(s: &str) -> Result<CurveKind, String> {
    s.parse()
}

fn metric_arg(s: &str) -> Result<TableMetric, String> {
    s.parse().map_err(|e: ReportError| e.to_string())
}

fn table_format_arg(s: &str) -> Result<TableFormat, String> {
    s.parse()
}

fn parse_f64_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers"));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|_| format!("{part:?} is not a number"))?;
    }
    Ok(out)
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset root containing list.txt and per-sequence ground truth
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Results root containing <tracker>/<sequence>.txt files
    #[arg(long)]
    results: Option<PathBuf>,
    /// Tracker names (repeat the flag or separate with commas)
    #[arg(long, value_delimiter = ',')]
    trackers: Vec<String>,
    /// Report output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest precision threshold in pixels; the grid is 0..=max [default: 50]
    #[arg(long)]
    precision_max: Option<u32>,
    /// Number of overlap thresholds spanning [0, 1] [default: 101]
    #[arg(long)]
    overlap_steps: Option<usize>,
    /// Angle error convention: raw or wrap [default: raw]
    #[arg(long, value_parser = angle_mode_arg)]
    angle_mode: Option<AngleMode>,
    /// Success/matching threshold comparison: strict or inclusive [default: strict]
    #[arg(long, value_parser = comparison_arg)]
    comparison: Option<ComparisonMode>,
    /// Worker threads for evaluation [default: one per core]
    #[arg(long)]
    jobs: Option<usize>,
    /// TOML file with the same keys as the flags; flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Config-file counterpart of the evaluate flags.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    dataset: Option<PathBuf>,
    results: Option<PathBuf>,
    trackers: Option<Vec<String>>,
    out: Option<PathBuf>,
    precision_max: Option<u32>,
    overlap_steps: Option<usize>,
    angle_mode: Option<AngleMode>,
    comparison: Option<ComparisonMode>,
    jobs: Option<usize>,
}

/// Fully resolved evaluation parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset_root: PathBuf,
    pub results_root: PathBuf,
    pub trackers: Vec<String>,
    pub output: PathBuf,
    pub precision_max: u32,
    pub overlap_steps: usize,
    pub angle_mode: AngleMode,
    pub comparison: ComparisonMode,
    /// Worker threads; `None` leaves the choice to the thread pool.
    pub jobs: Option<usize>,
}

impl EvaluateArgs {
    fn resolve(self) -> Result<RunConfig, Failure> {
        let file: FileConfig = match &self.config {
            None => FileConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::Io(format!("cannot read config {}: {e}", path.display()))
                })?;
                toml::from_str(&text)
                    .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?
            }
        };
        let dataset_root = self
            .dataset
            .or(file.dataset)
            .ok_or_else(|| Failure::Usage("--dataset is required".into()))?;
        let results_root = self
            .results
            .or(file.results)
            .ok_or_else(|| Failure::Usage("--results is required".into()))?;
        let trackers = if self.trackers.is_empty() {
            file.trackers.unwrap_or_default()
        } else {
            self.trackers
        };
        if trackers.is_empty() {
            return Err(Failure::Usage("--trackers needs at least one name".into()));
        }
        let mut unique = trackers.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != trackers.len() {
            return Err(Failure::Usage("tracker names must be unique".into()));
        }
        let output =
            self.out.or(file.out).ok_or_else(|| Failure::Usage("--out is required".into()))?;
        let overlap_steps = self.overlap_steps.or(file.overlap_steps).unwrap_or(101);
        if overlap_steps < 2 {
            return Err(Failure::Usage("--overlap-steps must be at least 2".into()));
        }
        let jobs = self.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            dataset_root,
            results_root,
            trackers,
            output,
            precision_max: self.precision_max.or(file.precision_max).unwrap_or(50),
            overlap_steps,
            angle_mode: self.angle_mode.or(file.angle_mode).unwrap_or_default(),
            comparison: self.comparison.or(file.comparison).unwrap_or_default(),
            jobs,
        })
    }
}

#[derive(Args)]
struct TableArgs {
    /// Report JSON produced by evaluate
    report: PathBuf,
    /// auc_success, auc_matching, precision@T, success@T, or matching@T
    #[arg(long, value_parser = metric_arg)]
    metric: TableMetric,
    /// markdown, csv, or latex
    #[arg(long, default_value = "markdown", value_parser = table_format_arg)]
    format: TableFormat,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Report JSON produced by evaluate
    report: PathBuf,
    /// Sequence to plot
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    sequence: Option<String>,
    /// Plot every sequence in the report
    #[arg(long)]
    all: bool,
    /// precision, success, or matching
    #[arg(long, value_parser = curve_kind_arg, conflicts_with = "all_kinds", required_unless_present = "all_kinds")]
    kind: Option<CurveKind>,
    /// Render all three curve kinds
    #[arg(long)]
    all_kinds: bool,
    /// Directory for the <sequence>_<kind>.svg files
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct DemoArgs {
    /// Growth-vs-shift example parameters w_g,h_g,w,h,alpha
    #[arg(long, value_parser = parse_f64_list::<5>, value_name = "W_G,H_G,W,H,ALPHA")]
    scaled1: Option<[f64; 5]>,
    /// Height-vs-width shrink example parameters w_g,h_g,w,h
    #[arg(long, value_parser = parse_f64_list::<4>, value_name = "W_G,H_G,W,H")]
    scaled2: Option<[f64; 4]>,
    /// Mirrored-rotation example dimensions w,h
    #[arg(long, value_parser = parse_f64_list::<2>, value_name = "W,H")]
    oriented: Option<[f64; 2]>,
    /// Rotated shrink-and-shift example parameters w,h,w_off,h_off
    #[arg(long, value_parser = parse_f64_list::<4>, value_name = "W,H,W_OFF,H_OFF")]
    scaled_oriented: Option<[f64; 4]>,
    /// Angle error convention for the matching-score verdicts
    #[arg(long, default_value = "raw", value_parser = angle_mode_arg)]
    angle_mode: AngleMode,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let io_err =
        |what: &str, e: std::io::Error| Failure::Io(format!("{what} {}: {e}", path.display()));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| io_err("cannot create directory for", e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(|e| io_err("cannot write", e))?;
    std::fs::rename(&tmp, path).map_err(|e| io_err("cannot finalize", e))
}

fn read_report(path: &Path) -> Result<EvaluationReport, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read report {}: {e}", path.display())))?;
    Ok(from_json(&text)?)
}

/// Loads the dataset and runs, evaluates every tracker × sequence pair,
/// and atomically writes the JSON report. Per-run failure counts go to
/// stderr; the report bytes are identical for any worker count.
pub fn cmd_evaluate(config: &RunConfig) -> Result<(), Failure> {
    let sequences = dataset::load_dataset(&config.dataset_root)?;
    let runs = dataset::load_results(&config.results_root, &config.trackers, &sequences)?;
    let eval = EvalConfig {
        precision_thresholds: precision_thresholds(config.precision_max),
        overlap_thresholds: overlap_thresholds(config.overlap_steps),
        angle_mode: config.angle_mode,
        comparison: config.comparison,
    };
    let dataset_name = config
        .dataset_root
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    let report = match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(format!("cannot build a {n}-worker pool: {e}")))?
            .install(|| build_report(&dataset_name, &sequences, &runs, &eval)),
        None => build_report(&dataset_name, &sequences, &runs, &eval),
    }?;
    for tracker in &report.tracker_order {
        for sequence in &report.sequence_order {
            let summary = &report.trackers[tracker].sequences[sequence].summary;
            if summary.n_failures > 0 {
                eprintln!(
                    "note: tracker {tracker} failed on {}/{} frames of {sequence}",
                    summary.n_failures, summary.n_frames
                );
            }
        }
    }
    let json = to_json(&report)?;
    write_atomic(&config.output, json.as_bytes())
}

fn cmd_table(args: TableArgs) -> Result<(), Failure> {
    let report = read_report(&args.report)?;
    let text = render_table(&report, args.metric, args.format)?;
    match args.out {
        Some(path) => write_atomic(&path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_plot(args: PlotArgs) -> Result<(), Failure> {
    let report = read_report(&args.report)?;
    let sequences: Vec<String> = if args.all {
        report.sequence_order.clone()
    } else {
        vec![args.sequence.clone().expect("clap requires --sequence without --all")]
    };
    let kinds: Vec<CurveKind> = if args.all_kinds {
        vec![CurveKind::Precision, CurveKind::Success, CurveKind::Matching]
    } else {
        vec![args.kind.expect("clap requires --kind without --all-kinds")]
    };
    for sequence in &sequences {
        for kind in &kinds {
            let svg = render_plot(&report, sequence, *kind)?;
            let file = args.out_dir.join(format!("{sequence}_{}.svg", kind.name()));
            write_atomic(&file, svg.as_bytes())?;
        }
    }
    Ok(())
}

fn describe(b: &crate::geometry::RotatedBox) -> String {
    format!("{}x{} at ({}, {}), theta {}", b.w(), b.h(), b.cx(), b.cy(), b.theta())
}

/// `better1`/`better2` are goodness values, higher wins; near-equal values
/// (within 1e-9) count as a tie.
fn verdict(name: &str, better1: f64, better2: f64) -> String {
    if (better1 - better2).abs() <= 1e-9 {
        format!("{name}: tie")
    } else if better1 > better2 {
        format!("{name}: hypothesis 1")
    } else {
        format!("{name}: hypothesis 2")
    }
}

fn scenario_block(out: &mut String, r: &ScenarioResult, mode: AngleMode) {
    let m1 = frame_measures(&r.gt, Some(&r.alg1), mode);
    let m2 = frame_measures(&r.gt, Some(&r.alg2), mode);
    let _ = writeln!(out, "== {} ==", r.label);
    let _ = writeln!(out, "  ground truth {}", describe(&r.gt));
    let _ = writeln!(out, "  hypothesis 1 {}", describe(&r.alg1));
    let _ = writeln!(out, "  hypothesis 2 {}", describe(&r.alg2));
    let (cf, cp) = (r.closed_form, r.computed);
    let _ = writeln!(
        out,
        "  closed form    e_c {:.5} / {:.5}   e_a {:.5} / {:.5}",
        cf.e_c1, cf.e_c2, cf.e_a1, cf.e_a2
    );
    let _ = writeln!(
        out,
        "  computed       e_c {:.5} / {:.5}   e_a {:.5} / {:.5}",
        cp.e_c1, cp.e_c2, cp.e_a1, cp.e_a2
    );
    let _ = writeln!(
        out,
        "  matching score {:.5} / {:.5}   ({} angles)",
        m1.e_ms,
        m2.e_ms,
        mode.name()
    );
    let _ = writeln!(out, "  {}", verdict("center error favors", -cp.e_c1, -cp.e_c2));
    let _ = writeln!(out, "  {}", verdict("overlap favors", cp.e_a1, cp.e_a2));
    let _ = writeln!(out, "  {}", verdict("matching score favors", m1.e_ms, m2.e_ms));
}

fn demo_text(args: &DemoArgs) -> Result<String, Failure> {
    let usage = |e: crate::scenarios::ScenarioError| Failure::Usage(e.to_string());
    let [a, b, c, d, e] = args.scaled1.unwrap_or([10.0, 10.0, 2.0, 2.0, 1.0]);
    let s1 = scaled_example_1(a, b, c, d, e).map_err(usage)?;
    let [a, b, c, d] = args.scaled2.unwrap_or([10.0, 10.0, 2.0, 2.0]);
    let s2 = scaled_example_2(a, b, c, d).map_err(usage)?;
    let [a, b] = args.oriented.unwrap_or([4.0, 2.0]);
    let o2 = oriented_example_2(a, b).map_err(usage)?;
    let [a, b, c, d] = args.scaled_oriented.unwrap_or([10.0, 20.0, 2.0, 4.0]);
    let so = scaled_oriented_example_1(a, b, c, d).map_err(usage)?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "Four constructed scenes where center error and overlap tie or\n\
         disagree, and what the matching score makes of each.\n"
    );
    for r in [&s1, &s2, &o2, &so] {
        scenario_block(&mut out, r, args.angle_mode);
        out.push('\n');
    }
    Ok(out)
}

fn cmd_demo(args: DemoArgs) -> Result<(), Failure> {
    let text = demo_text(&args)?;
    print!("{text}");
    Ok(())
}

/// Parses arguments and runs the selected subcommand, translating every
/// outcome into the exit-code taxonomy.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Evaluate(args) => args.resolve().and_then(|config| cmd_evaluate(&config)),
        Command::Table(args) => cmd_table(args),
        Command::Plot(args) => cmd_plot(args),
        Command::DemoExamples(args) => cmd_demo(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evaluate_args(argv: &[&str]) -> EvaluateArgs {
        let mut full = vec!["trackbench", "evaluate"];
        full.extend(argv);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Evaluate(args) => args,
            _ => unreachable!(),
        }
    }

    #[test]
    fn resolve_applies_defaults() {
        let config = evaluate_args(&[
            "--dataset",
            "d",
            "--results",
            "r",
            "--trackers",
            "a,b",
            "--out",
            "o.json",
        ])
        .resolve()
        .unwrap();
        assert_eq!(config.trackers, ["a", "b"]);
        assert_eq!(config.precision_max, 50);
        assert_eq!(config.overlap_steps, 101);
        assert_eq!(config.angle_mode, AngleMode::Raw);
        assert_eq!(config.comparison, ComparisonMode::Strict);
        assert_eq!(config.jobs, None);
    }

    #[test]
    fn resolve_requires_the_essentials() {
        for argv in [
            &["--results", "r", "--trackers", "t", "--out", "o"][..],
            &["--dataset", "d", "--trackers", "t", "--out", "o"][..],
            &["--dataset", "d", "--results", "r", "--out", "o"][..],
            &["--dataset", "d", "--results", "r", "--trackers", "t"][..],
        ] {
            assert!(matches!(evaluate_args(argv).resolve(), Err(Failure::Usage(_))), "{argv:?}");
        }
    }

    #[test]
    fn resolve_rejects_bad_grids_jobs_and_duplicates() {
        let base = ["--dataset", "d", "--results", "r", "--trackers", "t", "--out", "o"];
        let with = |extra: &[&str]| {
            let mut argv = base.to_vec();
            argv.extend(extra);
            evaluate_args(&argv).resolve()
        };
        assert!(matches!(with(&["--overlap-steps", "1"]), Err(Failure::Usage(_))));
        assert!(matches!(with(&["--jobs", "0"]), Err(Failure::Usage(_))));
        let mut argv = base.to_vec();
        argv.extend(["--trackers", "t"]);
        assert!(matches!(evaluate_args(&argv).resolve(), Err(Failure::Usage(_))));
    }

    #[test]
    fn flags_win_over_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "dataset = \"file-d\"\nresults = \"file-r\"\ntrackers = [\"x\"]\nout = \"file-o\"\n\
             precision_max = 30\nangle_mode = \"wrap\"\ncomparison = \"inclusive\"\njobs = 2\n",
        )
        .unwrap();
        let config = evaluate_args(&[
            "--config",
            path.to_str().unwrap(),
            "--dataset",
            "flag-d",
            "--precision-max",
            "40",
        ])
        .resolve()
        .unwrap();
        // Flag beats file; file fills the rest.
        assert_eq!(config.dataset_root, PathBuf::from("flag-d"));
        assert_eq!(config.precision_max, 40);
        assert_eq!(config.results_root, PathBuf::from("file-r"));
        assert_eq!(config.trackers, ["x"]);
        assert_eq!(config.angle_mode, AngleMode::Wrap);
        assert_eq!(config.comparison, ComparisonMode::Inclusive);
        assert_eq!(config.jobs, Some(2));
    }

    #[test]
    fn unknown_config_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "datset = \"typo\"\n").unwrap();
        let result = evaluate_args(&["--config", path.to_str().unwrap()]).resolve();
        assert!(matches!(result, Err(Failure::Usage(_))));
    }

    #[test]
    fn demo_defaults_print_the_worked_instances() {
        let args = DemoArgs {
            scaled1: None,
            scaled2: None,
            oriented: None,
            scaled_oriented: None,
            angle_mode: AngleMode::Raw,
        };
        let text = demo_text(&args).unwrap();
        // Growth-vs-shift instance: 100/144 vs 100/120.
        assert!(text.contains("0.69444"));
        assert!(text.contains("0.83333"));
        let block = text.split("==").find(|b| b.contains("0.69444")).unwrap();
        assert!(block.contains("center error favors: hypothesis 1"));
        assert!(block.contains("overlap favors: hypothesis 2"));
        // The mirrored rotations tie on overlap but not on matching score.
        let block = text.split("== ").find(|b| b.starts_with("oriented_example_2")).unwrap();
        assert!(block.contains("overlap favors: tie"));
        assert!(block.contains("matching score favors: hypothesis 2"));
    }

    #[test]
    fn demo_wrap_mode_erases_the_orientation_verdict() {
        let args = DemoArgs {
            scaled1: None,
            scaled2: None,
            oriented: None,
            scaled_oriented: None,
            angle_mode: AngleMode::Wrap,
        };
        let text = demo_text(&args).unwrap();
        let block = text.split("== ").find(|b| b.starts_with("oriented_example_2")).unwrap();
        assert!(block.contains("matching score favors: tie"));
    }

    #[test]
    fn demo_rejects_inadmissible_parameters() {
        let args = DemoArgs {
            scaled1: Some([10.0, 10.0, 2.0, 2.0, 5.0]),
            scaled2: None,
            oriented: None,
            scaled_oriented: None,
            angle_mode: AngleMode::Raw,
        };
        assert!(matches!(demo_text(&args), Err(Failure::Usage(_))));
    }

    #[test]
    fn write_atomic_creates_parents_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("out.txt");
        write_atomic(&path, b"payload").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"payload");
        let entries: Vec<_> = std::fs::read_dir(path.parent().unwrap())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(entries, ["out.txt"]);
    }
}
