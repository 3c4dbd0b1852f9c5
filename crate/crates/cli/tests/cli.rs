use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use galelemke::format::parse_any;
use galelemke::game::{is_nondegenerate, EnumerationBudget};

const AB: &str = "3 3\n1 0 0\n0 1 0\n0 0 1\n\n0 2 4\n3 2 0\n0 2 0\n";

fn galelemke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galelemke"))
        .args(args)
        .env_remove("GALELEMKE_STEP_CAP")
        .output()
        .expect("run galelemke")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_ab(dir: &Path) -> String {
    let path = dir.join("AB.bgame");
    fs::write(&path, AB).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_lh_prints_equilibrium_and_length() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_ab(dir.path());
    let out = galelemke(&["solve", &ab, "--method", "lh", "--missing-label", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "1/3 2/3 0 ; 1/2 1/2 0");
    assert!(lines.contains(&"path_length: 8"));
}

#[test]
fn solve_support_agrees_with_lh() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_ab(dir.path());
    let out = galelemke(&["solve", &ab, "--method", "support"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/3 2/3 0 ; 1/2 1/2 0\nequilibria: 1\n");
}

#[test]
fn path_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_ab(dir.path());
    let csv = dir.path().join("path.csv");
    let out = galelemke(&["solve", &ab, "--path-csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,dropped_label,picked_label,polytope,basis"));
    assert_eq!(lines.next(), Some("1,1,6,P,1;4;5"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn malformed_input_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.bgame");
    fs::write(&bad, "2 2\n1 0\n0 z\n\n1 1\n1 1\n").unwrap();
    let out = galelemke(&["solve", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3, column 3"), "{err}");
}

#[test]
fn step_cap_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_ab(dir.path());
    assert_eq!(galelemke(&["solve", &ab, "--step-cap", "2"]).status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_galelemke"))
        .args(["solve", &ab])
        .env("GALELEMKE_STEP_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bad_label_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_ab(dir.path());
    assert_eq!(galelemke(&["solve", &ab, "--missing-label", "7"]).status.code(), Some(3));
}

#[test]
fn verify_reports_labels() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_ab(dir.path());
    let out = galelemke(&["verify", &ab, "--profile", "1/3 2/3 0 ; 1/2 1/2 0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "equilibrium: true\nlabels: 3,4,5 | 1,2,6\n");

    let out = galelemke(&["verify", &ab, "--profile", "1 0 0 ; 1 0 0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("equilibrium: false\n"));
    assert!(text.contains("missing: 4"));
}

#[test]
fn solve_output_pipes_into_verify() {
    let dir = tempfile::tempdir().unwrap();
    let ab = write_ab(dir.path());
    for k in 1..=6 {
        let solved = galelemke(&["solve", &ab, "--missing-label", &k.to_string()]);
        let mut child = Command::new(env!("CARGO_BIN_EXE_galelemke"))
            .args(["verify", &ab])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(&solved.stdout).unwrap();
        let out = child.wait_with_output().unwrap();
        assert!(out.status.success());
        assert!(stdout(&out).starts_with("equilibrium: true"));
    }
}

#[test]
fn gen_triple_morris() {
    let out = galelemke(&["gen", "triple-morris", "--m", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("6 18"));
    assert_eq!(lines.next().unwrap().replace(' ', ""), "645231132546645231");
    assert!(parse_any(&text).is_ok());
}

#[test]
fn gen_is_deterministic() {
    let a = galelemke(&["gen", "permutation", "--n", "5", "--seed", "7"]);
    let b = galelemke(&["gen", "permutation", "--n", "5", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = galelemke(&["gen", "triple-morris", "--m", "4", "--permute-columns", "3"]);
    let d = galelemke(&["gen", "triple-morris", "--m", "4", "--permute-columns", "3"]);
    assert_eq!(c.stdout, d.stdout);
    assert_ne!(c.stdout, galelemke(&["gen", "triple-morris", "--m", "4"]).stdout);
}

#[test]
fn gen_random_is_nondegenerate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.bgame");
    let out = galelemke(&["gen", "random", "--m", "5", "--n", "5", "--seed", "1", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let game = parse_any(&fs::read_to_string(path).unwrap()).unwrap();
    assert!(is_nondegenerate(&game, &EnumerationBudget::default()).unwrap());
}

#[test]
fn gen_odd_morris_fails() {
    assert_eq!(galelemke(&["gen", "morris", "--m", "5"]).status.code(), Some(3));
}

fn without_wall_time(csv: &str) -> Vec<String> {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
}

#[test]
fn bench_morris_ratios_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let out = galelemke(&["bench", "morris", "--m", "4..16", "--labels", "1", "--jobs", "3", "-o", a.to_str().unwrap()]);
    assert!(out.status.success());
    let summary = stdout(&out);
    let ratios: Vec<(usize, f64)> = summary
        .lines()
        .filter_map(|l| l.strip_prefix("r_")?.split_once(" = "))
        .map(|(m, r)| (m.parse().unwrap(), r.parse().unwrap()))
        .collect();
    assert_eq!(ratios.len(), 6);
    for (m, r) in ratios.into_iter().filter(|(m, _)| *m >= 12) {
        assert!((r - 1.0 - 2f64.sqrt()).abs() / (1.0 + 2f64.sqrt()) < 0.05, "r_{m} = {r}");
    }
    assert!(galelemke(&["bench", "morris", "--m", "4..16", "--labels", "1", "-o", b.to_str().unwrap()]).status.success());
    let (a, b) = (fs::read_to_string(a).unwrap(), fs::read_to_string(b).unwrap());
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
    assert_eq!(a.lines().count(), 8);
}

#[test]
fn bench_appends_without_repeating_header() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.csv");
    for _ in 0..2 {
        assert!(galelemke(&["bench", "morris", "--m", "4", "--labels", "all", "-o", p.to_str().unwrap()]).status.success());
    }
    let text = fs::read_to_string(p).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("instance,")).count(), 1);
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn bench_triple_matches_single() {
    let single = stdout(&galelemke(&["bench", "morris", "--m", "4..10", "--labels", "1"]));
    let triple = stdout(&galelemke(&["bench", "triple-morris", "--m", "4..10", "--labels", "1"]));
    let lengths = |csv: &str| -> Vec<String> { csv.lines().skip(1).map(|l| l.split(',').nth(6).unwrap().to_string()).collect() };
    assert_eq!(lengths(&single), lengths(&triple));
}

#[test]
fn bench_truncates_at_step_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_galelemke"))
        .args(["bench", "morris", "--m", "10..12", "--labels", "1"])
        .env("GALELEMKE_STEP_CAP", "100")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("morris-12,") && l.contains(",true,")));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(!err.contains("r_12"), "{err}");
}

#[test]
fn bench_permutation_exhaustive() {
    let out = galelemke(&["bench", "permutation", "--n", "6", "--exhaustive"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "n,permutations,total_equilibria,mean,single_cycle_fraction\n6,720,4320,6,1/6\n");
}

#[test]
fn bench_support_reports_expectation() {
    let out = galelemke(&["bench", "support", "--m", "2", "--seeds", "0..200"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 201);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("|U| = 15, |E| = 3, expected 4"), "{err}");
}

#[test]
fn bench_random_lh_records() {
    let out = galelemke(&["bench", "random", "--m", "3", "--n", "2", "--seeds", "0..4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 4 * 5);
    assert!(text.lines().skip(1).all(|l| l.starts_with("random-3x2-") && l.contains(",lh,")));
}
