//! End-to-end checks of the command-line surface: outputs, file formats and
//! exit codes (0 success, 1 usage, 2 data).

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_vqlnet")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vqlnet-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn route_prints_the_expected_ring_path() {
    let dir = scratch("route");
    let file = dir.join("ring.vql");
    let out = run(&["gen", "ring", "--n", "6", "--out", file.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&[
        "route", file.to_str().unwrap(), "--from", "0", "--to", "37", "--mode", "ring",
        "--seed", "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 32 36 37\n");
}

#[test]
fn stats_reports_sphere_counts() {
    let dir = scratch("stats");
    let file = dir.join("s2.vql");
    run(&["gen", "sphere", "--k", "2", "--out", file.to_str().unwrap()]);
    let out = run(&["stats", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("vertices 162"));
    assert!(text.contains("edges 630"));
    assert!(text.contains("diameter"));
    assert!(text.contains("check vertex-count PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn stats_estimates_diameter_over_budget() {
    // 2^14 vertices exceed the exact all-pairs budget; the estimate is
    // flagged as such.
    let dir = scratch("bigring");
    let file = dir.join("ring14.vql");
    run(&["gen", "ring", "--n", "14", "--out", file.to_str().unwrap()]);
    let out = run(&["stats", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("diameter-estimate"));
    assert!(text.contains("not exact"));
}

#[test]
fn label_needs_a_sphere_and_a_valid_vertex() {
    let dir = scratch("label");
    let sphere = dir.join("s1.vql");
    let ring = dir.join("r4.vql");
    run(&["gen", "sphere", "--k", "1", "--out", sphere.to_str().unwrap()]);
    run(&["gen", "ring", "--n", "4", "--out", ring.to_str().unwrap()]);

    let out = run(&["label", sphere.to_str().unwrap(), "--vertex", "40"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("40 | {40}"), "got {text:?}");

    let out = run(&["label", ring.to_str().unwrap(), "--vertex", "3"]);
    assert_eq!(out.status.code(), Some(2), "ring graphs have no labels");

    let out = run(&["label", sphere.to_str().unwrap(), "--vertex", "999"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one_data_errors_exit_two() {
    let out = run(&["route", "--banana"]);
    assert_eq!(out.status.code(), Some(1), "unknown flag is a usage error");

    let out = run(&["nonsense-subcommand"]);
    assert_eq!(out.status.code(), Some(1));

    let dir = scratch("exitcodes");
    let bad = dir.join("bad.vql");
    std::fs::write(&bad, "not a graph\n").unwrap();
    let out = run(&["stats", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "malformed file is a data error");

    let missing = dir.join("missing.vql");
    let out = run(&["stats", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let ring = dir.join("ring.vql");
    run(&["gen", "ring", "--n", "5", "--out", ring.to_str().unwrap()]);
    let out = run(&[
        "route", ring.to_str().unwrap(), "--from", "0", "--to", "99", "--mode", "ring",
        "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(2), "out-of-range vertex is a data error");

    let out = run(&[
        "route", ring.to_str().unwrap(), "--from", "0", "--to", "3", "--mode", "local",
        "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(2), "mode/topology mismatch");
}

#[test]
fn bootstrap_and_replenish_write_parseable_timelines() {
    let dir = scratch("schedules");
    let file = dir.join("s1.vql");
    run(&["gen", "sphere", "--k", "1", "--out", file.to_str().unwrap()]);

    let timeline = dir.join("boot.timeline");
    let out = run(&["bootstrap", file.to_str().unwrap(), "--out", timeline.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("3 steps"));
    let text = std::fs::read_to_string(&timeline).unwrap();
    assert!(text.starts_with("vqlnet-timeline v1\nsteps 3\n"));

    let rep = dir.join("rep.timeline");
    let out = run(&[
        "replenish", file.to_str().unwrap(), "--consumed", "0-1", "--out",
        rep.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // Consumed edges must exist.
    let out = run(&[
        "replenish", file.to_str().unwrap(), "--consumed", "0-999", "--out",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_csv_and_summary() {
    let dir = scratch("simulate");
    let file = dir.join("r6.vql");
    run(&["gen", "ring", "--n", "6", "--out", file.to_str().unwrap()]);
    let csv = dir.join("report.csv");
    let out = run(&[
        "simulate", file.to_str().unwrap(), "--pairs", "4", "--samples", "25", "--seed",
        "12", "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("sample_index,pairs,collided,lowest_layer\n"));
    assert_eq!(rows.lines().count(), 26, "header plus one row per sample");
    let summary = std::fs::read_to_string(dir.join("report.csv.summary")).unwrap();
    assert!(summary.contains("samples 25"));
    assert!(summary.contains("collision_fraction "));
    assert_eq!(stdout(&out), summary, "the summary is echoed to stdout");
}

#[test]
fn generated_files_round_trip_through_the_cli() {
    let dir = scratch("roundtrip");
    for (args, name) in [
        (vec!["gen", "sphere", "--k", "1"], "s.vql"),
        (vec!["gen", "ring", "--n", "7"], "r.vql"),
    ] {
        let file = dir.join(name);
        let mut full = args.clone();
        full.push("--out");
        full.push(file.to_str().unwrap());
        assert!(run(&full).status.success());
        let first = std::fs::read(&file).unwrap();
        // Regenerating over the same path yields identical bytes.
        assert!(run(&full).status.success());
        assert_eq!(first, std::fs::read(&file).unwrap());
    }
}
