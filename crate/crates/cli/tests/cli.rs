//! End-to-end tests of the binary: output contracts and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forestc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn delta_homology_on_cycle_5() {
    let out = run(&["delta-homology", "--builtin", "cycle:5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("H_2 = Z, H_3 = Z^2"), "{text}");
    assert!(text.contains("pure: true"), "{text}");
}

#[test]
fn delta_homology_on_complete_4() {
    let out = run(&["delta-homology", "--builtin", "complete:4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("H_2 = Z^27"));
}

#[test]
fn delta_homology_from_file() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("forestc-test-single-edge.txt");
    std::fs::write(&path, "2\n0 1\n").unwrap();
    let out = run(&["delta-homology", "--file", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("reduced homology: trivial"));
}

#[test]
fn parse_errors_exit_2_with_line_numbers() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("forestc-test-self-loop.txt");
    std::fs::write(&path, "2\n0 0\n").unwrap();
    let out = run(&["delta-homology", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn bad_builtin_exits_2() {
    let out = run(&["delta-homology", "--builtin", "cycle:2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["delta-homology", "--builtin", "torus:5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shelling_of_complete_4() {
    let out = run(&["shelling", "--n", "4", "--quiet"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("facets: 64"), "{text}");
    assert!(text.contains("shelling verified: true"), "{text}");
    assert!(text.contains("homology facets (fully covered): 27"), "{text}");
}

#[test]
fn shelling_order_lines_have_label_and_edges() {
    let out = run(&["shelling", "--n", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("(0,0) | "), "{text}");
    assert_eq!(text.lines().filter(|l| l.contains(" | ")).count(), 9);
}

#[test]
fn shelling_without_complete_source_exits_2() {
    let out = run(&["shelling", "--builtin", "cycle:5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("complete source"), "{}", stderr(&out));
}

#[test]
fn shelling_guard_exits_3() {
    let out = run(&["shelling", "--n", "5", "--max-facets", "100", "--quiet"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn quotient_both_modes_agree_for_5() {
    let out = run(&["quotient", "--n", "5", "--mode", "both"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("direct cell homology: H_3 = Z^2"), "{text}");
    assert!(text.contains("pipelines agree"), "{text}");
}

#[test]
fn quotient_guard_exits_3() {
    let out = run(&["quotient", "--n", "9", "--mode", "direct"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn quotient_json_report() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("forestc-test-report.json");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "quotient",
        "--n",
        "3",
        "--mode",
        "both",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["command"], "quotient");
    assert_eq!(report["inputs"]["n"], 3);
    let results = report["results"].as_array().unwrap();
    let direct = &results[0];
    assert_eq!(direct["pipeline"], "direct");
    let h1 = &direct["homology"][1];
    assert_eq!(h1["degree"], 1);
    assert_eq!(h1["betti"], 1);
    assert_eq!(h1["torsion"].as_array().unwrap().len(), 0);
    assert!(report["timings_ms"]["total"].as_f64().unwrap() >= 0.0);
}

#[test]
fn quotient_cell_dump() {
    let out = run(&["quotient", "--n", "3", "--mode", "direct", "--dump-cells"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0 | (1(1()))"), "{text}");
    assert!(text.contains("1 | (2(1()))"), "{text}");
}

#[test]
fn fkn_reproduces_table() {
    let out = run(&["fkn", "--n-max", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("k=3: 0 0 0 2 3 3"), "{text}");
    assert!(text.contains("k=5: 0 0 0 0 0 8"), "{text}");
}

#[test]
fn fkn_guard_exits_3() {
    let out = run(&["fkn", "--n-max", "12"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn family_formula_cross_checks() {
    let out = run(&["family", "--name", "L", "--n", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("formula: S^2"), "{text}");
    assert!(text.contains("match: true"), "{text}");

    let out = run(&["family", "--name", "C", "--n", "6"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("formula: S^3 v S^3 v S^4 v S^4"));

    let out = run(&["family", "--name", "indpath", "--n", "8"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("formula: S^2"));

    let out = run(&["family", "--name", "indcycle", "--n", "6"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("formula: S^1 v S^1"));

    let out = run(&["family", "--name", "nonsense", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_string_with_tail() {
    let out = run(&["reduce", "--builtin", "string_tail:1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("match: true"), "{text}");
}

#[test]
fn reduce_rejects_non_tree_graphs() {
    let out = run(&["reduce", "--builtin", "cycle:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("essentially a tree"));
}

#[test]
fn threads_flag_is_accepted() {
    let out = run(&["shelling", "--n", "4", "--quiet", "--threads", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("shelling verified: true"));
}

#[test]
fn reports_are_deterministic_modulo_timings() {
    let dir = std::env::temp_dir();
    let a: PathBuf = dir.join("forestc-det-a.json");
    let b: PathBuf = dir.join("forestc-det-b.json");
    for path in [&a, &b] {
        let out = run(&["fkn", "--n-max", "5", "--json", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let mut va: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let mut vb: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    va["timings_ms"] = serde_json::Value::Null;
    vb["timings_ms"] = serde_json::Value::Null;
    assert_eq!(va, vb);
}
