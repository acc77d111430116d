use std::path::{Path, PathBuf};
use std::process::Command;

use unfold::{run, Mode, RunConfig};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn unfold(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_unfold")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn cycle_on_a_torus_is_an_input_error() {
    let torus = corpus("torus_8x5.off");
    let (code, _) = unfold(&["--mode", "cycle", "--in", torus.to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _) = unfold(&["--mode", "path", "--in", torus.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn path_on_the_cube_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (svg, json, order) = (dir.path().join("c.svg"), dir.path().join("c.json"), dir.path().join("c.txt"));
    let mut config = RunConfig::new(Mode::Path);
    config.input = Some(corpus("cube.off"));
    config.out_svg = Some(svg.clone());
    config.out_json = Some(json.clone());
    config.out_order = Some(order.clone());
    let mut stdout = Vec::new();
    assert_eq!(run(&config, &mut stdout), 0);
    assert!(String::from_utf8(stdout).unwrap().contains("pass"));
    let svg = std::fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 12);
    assert!(std::fs::read_to_string(json).unwrap().contains("\"genus\": 0"));
    let mut ids: Vec<usize> = std::fs::read_to_string(order).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    ids.sort_unstable();
    assert_eq!(ids, (0..12).collect::<Vec<_>>());
}

#[test]
fn obj_and_off_cubes_give_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["cube.off", "cube.obj"] {
        let json = dir.path().join(format!("{name}.json"));
        let mut config = RunConfig::new(Mode::Cycle);
        config.input = Some(corpus(name));
        config.out_json = Some(json.clone());
        assert_eq!(run(&config, &mut Vec::new()), 0);
        outputs.push(std::fs::read(json).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn saved_runs_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.json");
    let mut config = RunConfig::new(Mode::Cycle);
    config.input = Some(corpus("bipyramid_6.off"));
    config.out_json = Some(json.clone());
    assert_eq!(run(&config, &mut Vec::new()), 0);

    let verified = dir.path().join("verified.json");
    let mut check = RunConfig::new(Mode::Verify);
    check.input = Some(json.clone());
    check.out_json = Some(verified.clone());
    assert_eq!(run(&check, &mut Vec::new()), 0);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&verified).unwrap()).unwrap();
    assert_eq!(doc["kind"], "verify");
    assert_eq!(doc["report"]["pass"], true);
    assert!(doc.get("layout").is_none());

    // Nudge one placed corner off its isometric position.
    let mut doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    let x = &mut doc["layout"]["triangles"][2]["corners"][1][1];
    *x = serde_json::json!(x.as_f64().unwrap() + 0.01);
    std::fs::write(&json, serde_json::to_vec(&doc).unwrap()).unwrap();
    let mut out = Vec::new();
    check.out_json = None;
    assert_eq!(run(&check, &mut out), 1);
    assert!(String::from_utf8(out).unwrap().contains("isometry"));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.obj");
    std::fs::write(&bad, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n").unwrap();
    for (mode, path) in [
        ("path", bad.clone()),
        ("path", corpus("truncated_cube.off")),
        ("path", dir.path().join("missing.off")),
        ("verify", corpus("cube.off")),
    ] {
        let (code, _) = unfold(&["--mode", mode, "--in", path.to_str().unwrap()]);
        assert_eq!(code, 2, "{mode} {}", path.display());
    }
}

/// The table without its two timing columns.
fn stable_columns(table: &str) -> Vec<String> {
    table
        .lines()
        .map(|l| {
            let cols: Vec<&str> = l.split_whitespace().collect();
            if cols.len() == 8 {
                [cols[0], cols[1], cols[2], cols[3], cols[5], cols[7]].join(" ")
            } else {
                l.to_owned()
            }
        })
        .collect()
}

#[test]
fn experiment_is_deterministic() {
    let (code, first) = unfold(&["--mode", "experiment", "--n", "100", "--seed", "7"]);
    assert_eq!(code, 0);
    let (_, second) = unfold(&["--mode", "experiment", "--n", "100", "--seed", "7"]);
    assert_eq!(stable_columns(&first), stable_columns(&second));
    assert_eq!(first.lines().count(), 102);
    let (_, other) = unfold(&["--mode", "experiment", "--n", "100", "--seed", "8"]);
    assert_ne!(stable_columns(&first), stable_columns(&other));
}
