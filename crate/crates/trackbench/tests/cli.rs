//! End-to-end tests against the installed binary: real processes, real
//! files, asserted exit codes. The fixture tree is copied into a tempdir
//! so tests can mutilate it freely.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trackbench"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), &target).unwrap();
        }
    }
}

fn stdout(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> &str {
    std::str::from_utf8(&out.stderr).unwrap()
}

fn evaluate(dir: &Path, report: &Path, extra: &[&str]) -> Output {
    bin()
        .arg("evaluate")
        .arg("--dataset")
        .arg(dir.join("dataset"))
        .arg("--results")
        .arg(dir.join("results"))
        .args(["--trackers", "ace,bee,cee"])
        .arg("--out")
        .arg(report)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = bin().arg(flag).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{flag}: {}", stderr(&out));
    }
    let out = bin().args(["evaluate", "--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("--dataset"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bin().args(["evaluate", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn missing_dataset_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("evaluate")
        .arg("--dataset")
        .arg(tmp.path().join("nowhere"))
        .arg("--results")
        .arg(tmp.path().join("results"))
        .args(["--trackers", "ace"])
        .arg("--out")
        .arg(tmp.path().join("report.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).starts_with("error:"), "{}", stderr(&out));
}

#[test]
fn corrupt_groundtruth_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), tmp.path());
    let gt = tmp.path().join("dataset/seq_a/groundtruth.txt");
    let mut text = fs::read_to_string(&gt).unwrap();
    text = text.replacen("17.5", "17.5;", 1);
    fs::write(&gt, text).unwrap();
    let out = evaluate(tmp.path(), &tmp.path().join("report.json"), &[]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    // The message names the file and the 1-based line.
    assert!(stderr(&out).contains("groundtruth.txt:1"), "{}", stderr(&out));
}

#[test]
fn evaluate_is_deterministic_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), tmp.path());
    let one = tmp.path().join("one.json");
    let four = tmp.path().join("four.json");
    let out = evaluate(tmp.path(), &one, &["--jobs", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = evaluate(tmp.path(), &four, &["--jobs", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(fs::read(&one).unwrap(), fs::read(&four).unwrap());
    // The flaky tracker's failures are reported per sequence.
    assert!(stderr(&out).contains("note: tracker cee failed on 3/20 frames of seq_a"));
}

#[test]
fn table_and_plot_need_only_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), tmp.path());
    let report = tmp.path().join("report.json");
    let out = evaluate(tmp.path(), &report, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // Everything downstream reads the report, never the raw data.
    fs::remove_dir_all(tmp.path().join("dataset")).unwrap();
    fs::remove_dir_all(tmp.path().join("results")).unwrap();

    let out = bin().arg("table").arg(&report).args(["--metric", "auc_success"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), fs::read_to_string(fixtures().join("golden/auc_success.md")).unwrap());

    let out = bin()
        .arg("table")
        .arg(&report)
        .args(["--metric", "precision@20", "--format", "csv"])
        .arg("--out")
        .arg(tmp.path().join("p20.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("p20.csv")).unwrap();
    assert!(csv.starts_with("sequence,ace,bee,cee,best\n"), "{csv}");

    let plots = tmp.path().join("plots");
    let out = bin()
        .arg("plot")
        .arg(&report)
        .arg("--all")
        .arg("--all-kinds")
        .arg("--out-dir")
        .arg(&plots)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut files: Vec<String> = fs::read_dir(&plots)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(
        files,
        [
            "seq_a_matching.svg",
            "seq_a_precision.svg",
            "seq_a_success.svg",
            "seq_b_matching.svg",
            "seq_b_precision.svg",
            "seq_b_success.svg"
        ]
    );
    assert_eq!(
        fs::read(plots.join("seq_a_success.svg")).unwrap(),
        fs::read(fixtures().join("golden/seq_a_success.svg")).unwrap()
    );
}

#[test]
fn unknown_metric_and_sequence_are_usage_errors() {
    let tmp = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), tmp.path());
    let report = tmp.path().join("report.json");
    assert_eq!(evaluate(tmp.path(), &report, &[]).status.code(), Some(0));

    let out = bin().arg("table").arg(&report).args(["--metric", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));

    let out = bin()
        .arg("plot")
        .arg(&report)
        .args(["--sequence", "nope"])
        .args(["--kind", "success"])
        .arg("--out-dir")
        .arg(tmp.path().join("plots"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("nope"), "{}", stderr(&out));
}

#[test]
fn tampered_report_is_a_data_error() {
    let tmp = tempfile::tempdir().unwrap();
    copy_tree(&fixtures(), tmp.path());
    let report = tmp.path().join("report.json");
    assert_eq!(evaluate(tmp.path(), &report, &[]).status.code(), Some(0));
    let text = fs::read_to_string(&report)
        .unwrap()
        .replace("\"schema_version\": 1", "\"schema_version\": 99");
    fs::write(&report, text).unwrap();
    let out = bin().arg("table").arg(&report).args(["--metric", "auc_success"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("schema"), "{}", stderr(&out));
}

#[test]
fn demo_examples_walks_all_four_scenarios() {
    let out = bin().arg("demo-examples").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    for header in
        ["scaled_example_1", "scaled_example_2", "oriented_example_2", "scaled_oriented_example_1"]
    {
        assert!(text.contains(header), "missing section {header}");
    }
    // Inadmissible parameters are rejected as usage errors.
    let out = bin().args(["demo-examples", "--scaled2", "10,10,20,2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}
