use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_canvas-color"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

/// Triangle 0 1 2 plus vertex 3 outside the edge 0 2, every S list {0,1}.
fn write_canvas(dir: &Path, name: &str, u_list: &[u32]) -> String {
    let canvas = json!({
        "vertices": [0, 1, 2, 3],
        "rotation": {"0": [3, 2, 1], "1": [0, 2], "2": [1, 0, 3], "3": [2, 0]},
        "outer": [1, 0],
        "lists": {"0": [0, 1], "1": [0, 1], "2": u_list, "3": [0, 1, 2]},
        "S": {"path": [0, 1], "isolated": [2]}
    });
    let path = dir.join(name);
    std::fs::write(&path, canvas.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn exception_is_reported_and_confirmed_by_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_canvas(dir.path(), "ex.canvas.json", &[0, 1]);
    let out = run(&["solve", "--mode", "demtwo", "--input", &input, "--json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "exception");
    assert_eq!(v["certificate"]["l0"], json!([0, 1]));

    let out = run(&["oracle", "solve", "--input", &input]);
    assert_eq!(stdout_json(&out)["coloring"], Value::Null);

    let out = run(&["oracle", "critical", "--input", &input]);
    let core = stdout_json(&out);
    assert_eq!(core["vertices"], json!([0, 1, 2]));
    let core_path = dir.path().join("core.canvas.json");
    std::fs::write(&core_path, core.to_string()).unwrap();
    let out = run(&["critical", "--input", core_path.to_str().unwrap()]);
    let report = stdout_json(&out);
    assert_eq!(report["critical"], true);
    assert_eq!(report["inessential_chords"], json!([]));
}

#[test]
fn colouring_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_canvas(dir.path(), "ok.canvas.json", &[1, 2]);
    let out = run(&["solve", "--input", &input, "--json"]);
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "colored");
    let coloring = dir.path().join("c.json");
    std::fs::write(&coloring, json!({ "coloring": v["coloring"] }).to_string()).unwrap();
    let out = run(&["verify", "--input", &input, "--coloring", coloring.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["valid"], true);

    std::fs::write(&coloring, json!({ "coloring": {"0": 0, "1": 0, "2": 1, "3": 2} }).to_string()).unwrap();
    let out = run(&["verify", "--input", &input, "--coloring", coloring.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn violations_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_canvas(dir.path(), "bad.canvas.json", &[1]);
    let out = run(&["solve", "--input", &input, "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["outcome"], "violation");
    assert_eq!(v["violation"]["kind"], "UListTooSmall");
}

#[test]
fn edge_modes_colour_a_precoloured_edge() {
    let dir = tempfile::tempdir().unwrap();
    let canvas = json!({
        "vertices": [0, 1, 2, 3],
        "rotation": {"0": [3, 2, 1], "1": [0, 2], "2": [1, 0, 3], "3": [2, 0]},
        "outer": [1, 0],
        "lists": {"0": [4], "1": [2], "2": [0, 2, 4], "3": [1, 2, 4]},
        "S": {"path": [0, 1]}
    });
    let path = dir.path().join("edge.canvas.json");
    std::fs::write(&path, canvas.to_string()).unwrap();
    for mode in ["thomassen", "thom-reduction"] {
        let out = run(&["solve", "--mode", mode, "--input", path.to_str().unwrap(), "--json"]);
        let v = stdout_json(&out);
        assert_eq!(v["outcome"], "colored", "{mode}");
        assert_eq!(v["coloring"]["2"], 0, "{mode}");
    }
}

#[test]
fn check_reports_are_byte_identical_across_runs() {
    let args = ["check", "--mode", "demtwo", "--max-n", "5", "--random", "25", "--random-max-n", "9", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let last = String::from_utf8(a.stdout).unwrap().lines().last().unwrap().to_string();
    let summary: Value = serde_json::from_str(&last).unwrap();
    assert_eq!(summary["summary"]["disagreements"], 0);
}

#[test]
fn gen_writes_files_and_rejects_large_enumerations() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--mode", "graphs", "--max-n", "4", "--families", "cycles,chorded-cycles,wheels", "--out"])
        .status;
    assert!(!out.success());
    let target = dir.path().join("graphs");
    let out = run(&[
        "gen",
        "--mode",
        "graphs",
        "--max-n",
        "4",
        "--families",
        "cycles,chorded-cycles,wheels",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(&target).unwrap().count(), 4);

    let out = run(&["gen", "--max-n", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
