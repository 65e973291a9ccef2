//! End-to-end tests of the `plumb` binary: exit codes, JSON output
//! shapes, SVG emission, and the corpus generators.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const CHAIN22: &str =
    "vertex a genus=0 self=-2 area=1\nvertex b genus=0 self=-2 area=1\nedge a b\n";

fn plumb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumb"))
        .args(args)
        .env("PLUMB_COLOR", "never")
        .output()
        .expect("failed to spawn plumb")
}

fn write_graph(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn check_valid_graph_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "chain.graph", CHAIN22);
    let out = plumb(&["check", &input]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["violations"], serde_json::json!([]));
}

#[test]
fn parse_error_exits_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "bad.graph", "vertex a genus=0 self=-2\nbogus x\n");
    let out = plumb(&["check", &input]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn build_worked_chain() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "chain.graph", CHAIN22);
    let out = plumb(&["build", &input, "--pretty"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["model"]["z"], serde_json::json!(["1", "1"]));
    assert_eq!(doc["model"]["constants"]["epsilon"], "1/2");
    assert_eq!(doc["model"]["constants"]["delta"], "1/8");
    assert_eq!(doc["report"]["ok"], true);
}

#[test]
fn build_isolated_vertex_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "iso.graph", "vertex a genus=0 self=-4 area=1\n");
    let out = plumb(&["build", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("isolated vertex"));
}

#[test]
fn build_not_negative_definite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(
        dir.path(),
        "pos.graph",
        "vertex a genus=0 self=0 area=1\nvertex b genus=0 self=-2 area=1\nedge a b\n",
    );
    let out = plumb(&["build", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative definite"));
}

#[test]
fn obd_worked_chain() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "chain.graph", CHAIN22);
    let out = plumb(&["obd", &input]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["summary"]["total_bindings"], 2);
    assert_eq!(doc["summary"]["area_independent"], true);
}

#[test]
fn obd_hypothesis_violation_names_vertex() {
    let dir = tempfile::tempdir().unwrap();
    // -s_v - d_v = -1 at the middle vertex
    let input = write_graph(
        dir.path(),
        "mid.graph",
        "vertex a genus=0 self=-3 area=1\nvertex m genus=0 self=-1 area=1\nvertex b genus=0 self=-3 area=1\nedge a m\nedge m b\n",
    );
    let out = plumb(&["obd", &input]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("`m`"), "stderr: {stderr}");
}

#[test]
fn classify_rational_blowdown() {
    let dir = tempfile::tempdir().unwrap();
    let gen = plumb(&["corpus", "rational-blowdown", "3"]);
    assert!(gen.status.success());
    let input = write_graph(
        dir.path(),
        "rb3.graph",
        &String::from_utf8(gen.stdout).unwrap(),
    );
    let out = plumb(&["classify", &input]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["negative_definite"], true);
    let tag = doc["theorem_case"]["tag"].as_str().unwrap();
    assert!(tag == "Case1" || tag == "Both", "tag: {tag}");
    assert_eq!(doc["obd_hypothesis"]["holds"], true);
}

#[test]
fn svg_writes_one_file_per_edge_plus_profile() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "chain.graph", CHAIN22);
    let outdir = dir.path().join("svg");
    let out = plumb(&["svg", &input, "--out", outdir.to_str().unwrap()]);
    assert!(out.status.success());
    let region = fs::read_to_string(outdir.join("region_0.svg")).unwrap();
    assert!(region.starts_with("<svg"));
    assert!(fs::read_to_string(outdir.join("profile.svg")).unwrap().contains("band"));

    // labels change text, not geometry
    let labeled_dir = dir.path().join("svg_labeled");
    let out = plumb(&["svg", &input, "--out", labeled_dir.to_str().unwrap(), "--labels"]);
    assert!(out.status.success());
    let labeled = fs::read_to_string(labeled_dir.join("region_0.svg")).unwrap();
    assert!(labeled.contains("<text"));
    assert!(!region.contains("<text"));
}

#[test]
fn corpus_chain_round_trips() {
    let out = plumb(&["corpus", "chain", "-2,-2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "vertex v0 genus=0 self=-2 area=1\nvertex v1 genus=0 self=-2 area=1\nedge v0 v1\n"
    );
}

#[test]
fn corpus_random_is_seed_deterministic() {
    let a = plumb(&["corpus", "random", "5", "--seed", "42"]);
    let b = plumb(&["corpus", "random", "5", "--seed", "42"]);
    let c = plumb(&["corpus", "random", "5", "--seed", "43"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_graph(dir.path(), "chain.graph", CHAIN22);
    let target = dir.path().join("report.json");
    let out = plumb(&["classify", &input, "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["negative_definite"], true);
}
