use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mergetree::{fixtures, json, Direction, Height, TreePair};

fn dir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn mt(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_mt"));
    for a in args {
        command.arg(a);
    }
    command.output().unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn write_pair(dir: &Path, pair: &TreePair) -> (PathBuf, PathBuf) {
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    fs::write(&a, json::tree_to_json(&pair.first)).unwrap();
    fs::write(&b, json::tree_to_json(&pair.second)).unwrap();
    (a, b)
}

#[test]
fn distance_on_fixtures() {
    for (name, pair, expected) in [("a", fixtures::fix_a(), "4"), ("b", fixtures::fix_b_vs_a(), "3"), ("c", fixtures::fix_c(), "2")] {
        let d = dir(&format!("distance_{name}"));
        let (a, b) = write_pair(&d, &pair);
        let out = mt(&[&"distance", &a, &b]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out).trim(), expected);
        let out = mt(&[&"distance", &a, &b, &"--oracle"]);
        assert_eq!(stdout(&out).trim(), expected);
    }
}

#[test]
fn witness_and_constraints_round_trip() {
    let d = dir("witness");
    let pair = fixtures::fix_c();
    let (a, b) = write_pair(&d, &pair);
    let p = d.join("p.json");
    fs::write(&p, json::interleaving_to_json(&fixtures::fix_c_constraint(&pair))).unwrap();
    let w = d.join("w.json");
    let out = mt(&[&"distance", &a, &b, &"--constraints", &p, &"--witness", &w]);
    assert_eq!(out.status.code(), Some(0));
    let distance: Height = stdout(&out).trim().parse().unwrap();
    let witness = json::anchored_from_json(&pair, &fs::read_to_string(&w).unwrap()).unwrap();
    assert!(witness.verify_complete(&pair).is_ok());
    assert!(witness.extends(&pair, &fixtures::fix_c_constraint(&pair)));
    assert!(witness.residual_shift(&pair, &fixtures::fix_c_constraint(&pair)) <= distance);
    let out = mt(&[&"validate", &a, &b, &w]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("complete"));
}

#[test]
fn critical_values_are_exact() {
    let d = dir("critical");
    let (a, b) = write_pair(&d, &fixtures::fix_a());
    let out = mt(&[&"critical", &a, &b]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(lines, ["0", "4"]);
}

#[test]
fn locally_correct_then_check() {
    let d = dir("pipeline");
    let pair = fixtures::fix_c();
    let (a, b) = write_pair(&d, &pair);
    let (i, trace) = (d.join("i.json"), d.join("trace.json"));
    let out = mt(&[&"locally-correct", &a, &b, &"-o", &i, &"--trace", &trace]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "2");
    let result = json::anchored_from_json(&pair, &fs::read_to_string(&i).unwrap()).unwrap();
    assert!(result.verify_complete(&pair).is_ok());
    let trace: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(!trace["steps"].as_array().unwrap().is_empty());

    let out = mt(&[&"check", &a, &b, &i, &"--exhaustive"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = mt(&[&"check", &a, &b, &i, &"--samples", &"5", &"--seed", &"7"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_writes_counterexample_next_to_input() {
    let d = dir("check");
    let pair = fixtures::fix_c();
    let (a, b) = write_pair(&d, &pair);
    let i = d.join("loose.json");
    fs::write(&i, json::interleaving_to_json(fixtures::fix_c_loose(&pair).anchors())).unwrap();
    let expected = d.join("loose.counterexample.json");
    let _ = fs::remove_file(&expected);
    let out = mt(&[&"check", &a, &b, &i]);
    assert_eq!(out.status.code(), Some(1));
    let restriction = json::interleaving_from_json(&pair, &fs::read_to_string(&expected).unwrap()).unwrap();
    assert!(fixtures::fix_c_loose(&pair).extends(&pair, &restriction));
}

#[test]
fn validate_reports_broken_trees() {
    let d = dir("validate");
    let broken = d.join("broken.json");
    fs::write(&broken, r#"{"nodes":[{"id":0,"height":"5","parent":1},{"id":1,"height":"3","parent":2},{"id":2,"height":"inf","parent":null}]}"#).unwrap();
    let out = mt(&[&"validate", &broken]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-increasing"));

    let good = d.join("good.json");
    fs::write(&good, json::tree_to_json(&fixtures::fix_c().first)).unwrap();
    assert_eq!(mt(&[&"validate", &good]).status.code(), Some(0));

    let garbage = d.join("garbage.json");
    fs::write(&garbage, "not json").unwrap();
    assert_eq!(mt(&[&"validate", &garbage]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    let d = dir("usage");
    let (a, b) = write_pair(&d, &fixtures::fix_a());
    let out = mt(&[&"distance", &a, &b, &"--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(mt(&[&"distance", &a, &b, &"--oracle", &"--witness", &d.join("w.json")]).status.code(), Some(2));
    assert_eq!(mt(&[&"distance", &a, &d.join("missing.json")]).status.code(), Some(2));
    assert_eq!(mt(&[&"ingest"]).status.code(), Some(2));
}

#[test]
fn ingest_series_and_grid() {
    let d = dir("ingest");
    let series = d.join("series.csv");
    fs::write(&series, "0\n3\n1\n4\n0\n5\n").unwrap();
    let t = d.join("t.json");
    assert_eq!(mt(&[&"ingest", &"--series", &series, &"-o", &t]).status.code(), Some(0));
    let tree = json::tree_from_json(&fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(tree.leaf_count(), 3);

    let grid = d.join("grid.csv");
    fs::write(&grid, "0,2\n2,1\n").unwrap();
    let four = stdout(&mt(&[&"ingest", &"--grid", &grid, &"--connectivity", &"4"]));
    let eight = stdout(&mt(&[&"ingest", &"--grid", &grid, &"--connectivity", &"8"]));
    assert_eq!(json::tree_from_json(&four).unwrap().leaf_count(), 2);
    assert_eq!(json::tree_from_json(&eight).unwrap().leaf_count(), 1);
    assert_eq!(mt(&[&"ingest", &"--grid", &grid, &"--connectivity", &"6"]).status.code(), Some(2));
}

#[test]
fn render_is_deterministic() {
    let d = dir("render");
    let pair = fixtures::fix_a();
    let (a, b) = write_pair(&d, &pair);
    let trees_only = stdout(&mt(&[&"render", &a, &b]));
    assert!(trees_only.starts_with("<svg"));
    assert!(!trees_only.contains("marker-end"));

    let w = d.join("w.json");
    assert_eq!(mt(&[&"distance", &a, &b, &"--witness", &w]).status.code(), Some(0));
    let first = stdout(&mt(&[&"render", &a, &b, &"--interleaving", &w]));
    let second = stdout(&mt(&[&"render", &a, &b, &"--interleaving", &w]));
    assert_eq!(first, second);
    let witness = json::interleaving_from_json(&pair, &fs::read_to_string(&w).unwrap()).unwrap();
    for direction in Direction::BOTH {
        let drawn = first.matches(&format!(r#"<line class="{direction}""#)).count();
        assert_eq!(drawn, witness.map(direction).len());
        assert!(drawn >= 1);
    }

    let out = d.join("fans.svg");
    let p = d.join("p.json");
    let c = fixtures::fix_c();
    let (ca, cb) = write_pair(&dir("render_c"), &c);
    fs::write(&p, json::interleaving_to_json(&fixtures::fix_c_constraint(&c))).unwrap();
    assert_eq!(mt(&[&"render", &ca, &cb, &"--constraints", &p, &"-o", &out]).status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap().matches(r#"class="fan""#).count(), 1);
}
