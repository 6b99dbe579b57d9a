use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

/// Copies a scene into a fresh directory so relative outputs land there.
fn staged(name: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join(name);
    fs::copy(scenes().join(name), &dest).unwrap();
    (dir, dest)
}

fn capra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capra")).args(args).env_remove("CAPRA_EXACT").output().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_error(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stderr).unwrap()["error"].clone()
}

#[test]
fn k2_under_linf_is_not_capra_convex() {
    let (dir, scene) = staged("k2_scene.json");
    let out = capra(&["check", scene.to_str().unwrap(), "--norm", "inf"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("out/k2.report.json"));
    assert_eq!(r["decision"]["verdict"], "not_capra_convex");
    assert_eq!(r["decision"]["rule"], "exact-2d-theorem");
    assert_eq!(r["decision"]["certificate"]["point"], serde_json::json!(["-1", "1/2"]));
    assert_eq!(r["verified"], true);
}

#[test]
fn k3_under_l2_writes_a_report_and_a_figure() {
    let (dir, scene) = staged("k3_scene.json");
    let svg = dir.path().join("k3.svg");
    let out = capra(&["check", scene.to_str().unwrap(), "--norm", "l2", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_json(&dir.path().join("out/k3.report.json"));
    assert_eq!(r["decision"]["verdict"], "capra_convex");
    assert_eq!(r["mode"], "float");
    let text = fs::read_to_string(svg).unwrap();
    assert!(text.contains("<svg") && text.contains("class=\"cone"));
}

#[test]
fn missing_scene_exits_with_code_two() {
    let out = capra(&["check", "/nonexistent/scene.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["kind"], "io");
}

#[test]
fn schema_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("bad.json");
    fs::write(&scene, r#"{"schema":"capra-scene/9","dimension":2,"set":{"kind":"ray_fan","generators":[[1,0]]}}"#).unwrap();
    let out = capra(&["check", scene.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["exit_code"], 2);
    fs::write(&scene, r#"{"schema":"capra-scene/1","dimension":2,"set":{"kind":"cylinder"}}"#).unwrap();
    assert_eq!(capra(&["check", scene.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (dir, scene) = staged("planar_cones.json");
    let run = || {
        let out = capra(&["check", scene.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        ["K1", "K2", "K3"]
            .iter()
            .flat_map(|l| {
                let o = dir.path().join("out");
                [fs::read(o.join(format!("planar.report-{l}.json"))).unwrap(), fs::read(o.join(format!("planar-{l}.svg"))).unwrap()]
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn several_sets_get_labelled_outputs() {
    let (dir, scene) = staged("planar_cones.json");
    let report = dir.path().join("r.json");
    let out = capra(&["check", scene.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert!(out.status.success());
    let verdicts: Vec<Value> =
        ["K1", "K2", "K3"].iter().map(|l| read_json(&dir.path().join(format!("r-{l}.json")))["decision"]["verdict"].clone()).collect();
    assert_eq!(verdicts, ["not_capra_convex", "not_capra_convex", "capra_convex"]);
    assert!(!report.exists());
}

#[test]
fn stdout_report_without_paths() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("s.json");
    fs::write(&scene, r#"{"schema":"capra-scene/1","dimension":2,"norm":"l1","set":{"kind":"ray_fan","generators":[[1,0],[0,1]]}}"#).unwrap();
    let out = capra(&["check", scene.to_str().unwrap()]);
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["label"], "set0");
    assert!(r["decision"]["verdict"].is_string());
}

#[test]
fn exact_mode_follows_the_environment() {
    let (dir, scene) = staged("k2_scene.json");
    let report = dir.path().join("r.json");
    let args = ["check", scene.to_str().unwrap(), "--report", report.to_str().unwrap()];
    let mode = |value: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_capra")).args(args).env("CAPRA_EXACT", value).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        read_json(&report)["mode"].clone()
    };
    assert_eq!(mode("0"), "float");
    assert_eq!(mode("1"), "exact");
    let out = Command::new(env!("CARGO_BIN_EXE_capra")).args(args).env("CAPRA_EXACT", "maybe").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conjugacy_and_minimization_verbs() {
    let (dir, scene) = staged("slice_minimize.json");
    let report = dir.path().join("m.json");
    let out = capra(&["min", scene.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let values: Vec<f64> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            p.file_name().unwrap().to_string_lossy().starts_with("m-").then(|| read_json(&p)["minimize"]["value"].as_f64().unwrap())
        })
        .collect();
    assert_eq!(values.len(), 3);

    let (dir, scene) = staged("k2_indicator_conjugacy.json");
    let csv = dir.path().join("t.csv");
    let report = dir.path().join("c.json");
    let out = capra(&["conj", scene.to_str().unwrap(), "--csv", csv.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_json(&report)["conjugacy"]["inequality_holds"], true);
    assert!(fs::read_to_string(csv).unwrap().starts_with("x1,x2,f,value"));
}
