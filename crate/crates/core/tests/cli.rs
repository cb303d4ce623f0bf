use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

const REFERENCE: &str = r#"{"B":24,"A":[7,7,7,8,8,8,8,9,10]}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_simgadget"));
    c.env_remove("SIMGADGET_SIZE_CAP");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn run_stdin(dir: &Path, args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .current_dir(dir)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn ok(o: &Output) {
    assert_eq!(o.status.code(), Some(0), "{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
}

fn setup() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().to_path_buf();
    fs::write(p.join("f1.json"), REFERENCE).unwrap();
    (dir, p)
}

#[test]
fn gracsim_pipeline_closes() {
    let (_tmp, d) = setup();
    let solve = run(&d, &["solve-3p", "f1.json", "--out", "sol.json"]);
    ok(&solve);
    ok(&run(&d, &["verify-3p", "f1.json", "--solution", "sol.json"]));
    ok(&run(&d, &["reduce-gracsim", "f1.json", "--out", "g.json", "--index-out", "gi.json"]));
    let counts = run(&d, &["counts", "g.json"]);
    ok(&counts);
    assert_eq!(json_out(&counts), serde_json::json!({"vertices": 484, "edges": 787}));
    ok(&run(&d, &["draw-gracsim", "g.json", "--index", "gi.json", "--solution", "sol.json", "--out", "d.json"]));
    let verify = run(&d, &["verify-drawing", "g.json", "--drawing", "d.json"]);
    ok(&verify);
    let report = json_out(&verify);
    assert_eq!(report["valid"], true);
    assert_eq!(report["crossings"].as_array().unwrap().len(), 153);
    let decode = run(&d, &["decode-drawing", "g.json", "--index", "gi.json", "--drawing", "d.json"]);
    ok(&decode);
    let sol: Value = serde_json::from_str(&fs::read_to_string(d.join("sol.json")).unwrap()).unwrap();
    assert_eq!(json_out(&decode), sol);
    ok(&run(&d, &["emit-svg", "g.json", "--drawing", "d.json", "--out", "f.svg"]));
    let svg = fs::read_to_string(d.join("f.svg")).unwrap();
    assert_eq!(svg.matches("<line class=\"edge").count(), 787);
    assert_eq!(svg.matches("class=\"crossing\"").count(), 153);
}

#[test]
fn sefe_pipeline_closes() {
    let (_tmp, d) = setup();
    ok(&run(&d, &["solve-3p", "f1.json", "--out", "sol.json"]));
    ok(&run(&d, &["reduce-1sefe", "f1.json", "--out", "s.json", "--index-out", "si.json"]));
    let counts = run(&d, &["counts", "s.json", "--layers"]);
    let c = json_out(&counts);
    assert_eq!((c["vertices"].as_u64(), c["edges"].as_u64()), (Some(300), Some(585)));
    ok(&run(&d, &["make-cert", "s.json", "--index", "si.json", "--solution", "sol.json", "--out", "c.json"]));
    ok(&run(&d, &["verify-cert", "s.json", "--cert", "c.json"]));
    assert_eq!(run(&d, &["verify-cert", "s.json", "--cert", "c.json", "--k", "0"]).status.code(), Some(1));

    ok(&run(&d, &["expand-k", "s.json", "--index", "si.json", "--k", "2", "--out", "s2.json", "--index-out", "si2.json"]));
    ok(&run(&d, &["make-cert", "s2.json", "--index", "si2.json", "--solution", "sol.json", "--out", "c2.json"]));
    let v = run(&d, &["verify-cert", "s2.json", "--cert", "c2.json"]);
    ok(&v);
    assert_eq!(json_out(&v)["k"], 2);
    assert_eq!(run(&d, &["verify-cert", "s2.json", "--cert", "c2.json", "--k", "1"]).status.code(), Some(1));
    ok(&run(&d, &["emit-svg", "s2.json", "--cert", "c2.json", "--out", "c2.svg"]));
}

#[test]
fn stdin_pipeline() {
    let (_tmp, d) = setup();
    let small = br#"{"B":10,"A":[3,3,4]}"#;
    let reduced = run_stdin(&d, &["reduce-gracsim"], small);
    ok(&reduced);
    let counts = run_stdin(&d, &["counts", "-"], &reduced.stdout);
    ok(&counts);
    assert_eq!(json_out(&counts), serde_json::json!({"vertices": 82, "edges": 127}));
}

#[test]
fn generator_and_solver() {
    let (_tmp, d) = setup();
    ok(&run(&d, &["gen-3p", "--m", "3", "--b", "24", "--seed", "5", "--out", "g.json", "--solution-out", "gs.json"]));
    ok(&run(&d, &["verify-3p", "g.json", "--solution", "gs.json"]));
    let again = run(&d, &["gen-3p", "--m", "3", "--b", "24", "--seed", "5"]);
    assert_eq!(again.stdout, fs::read(d.join("g.json")).unwrap());
    let solved = run(&d, &["solve-3p", "g.json"]);
    ok(&solved);
    assert_eq!(json_out(&solved)["triples"].as_array().unwrap().len(), 3);
    assert_eq!(run(&d, &["gen-3p", "--m", "2", "--b", "5"]).status.code(), Some(2));
}

#[test]
fn checkers_reject_with_status_one() {
    let (_tmp, d) = setup();
    fs::write(d.join("no.json"), r#"{"B":13,"A":[4,4,4,4,4,6]}"#).unwrap();
    let o = run(&d, &["solve-3p", "no.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o), Value::Null);

    fs::write(d.join("bad.json"), r#"{"B":10,"A":[3,3,3]}"#).unwrap();
    let o = run(&d, &["verify-3p", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["violations"][0]["code"], "SumMismatch");

    fs::write(d.join("wrong.json"), r#"{"triples":[[0,1,2],[3,4,5],[6,7,8]]}"#).unwrap();
    assert_eq!(run(&d, &["verify-3p", "f1.json", "--solution", "wrong.json"]).status.code(), Some(1));

    ok(&run(&d, &["reduce-gracsim", "f1.json", "--out", "g.json", "--index-out", "gi.json"]));
    let o = run(&d, &["draw-gracsim", "g.json", "--index", "gi.json", "--solution", "wrong.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["error"], "SolutionMismatch");

    ok(&run(&d, &["solve-3p", "f1.json", "--out", "sol.json"]));
    ok(&run(&d, &["draw-gracsim", "g.json", "--index", "gi.json", "--solution", "sol.json", "--out", "d.json"]));
    let mut drawing: Value = serde_json::from_str(&fs::read_to_string(d.join("d.json")).unwrap()).unwrap();
    let first = drawing["coords"]["1"].clone();
    drawing["coords"]["0"] = first;
    fs::write(d.join("bad_d.json"), drawing.to_string()).unwrap();
    assert_eq!(run(&d, &["verify-drawing", "g.json", "--drawing", "bad_d.json"]).status.code(), Some(1));
    let o = run(&d, &["decode-drawing", "g.json", "--index", "gi.json", "--drawing", "bad_d.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["error"], "InvalidDrawing");
}

#[test]
fn wheel_and_min_crossings() {
    let (_tmp, d) = setup();
    ok(&run(&d, &["wheel", "--k", "1", "--out", "w.json"]));
    let o = run(&d, &["min-crossings", "w.json", "--edge", "0-3-p1", "--cap", "3"]);
    ok(&o);
    let v = json_out(&o);
    assert_eq!(v["min"], 2);
    assert_eq!(v["witness"]["e1"]["0-3-p1"].as_array().unwrap().len(), 2);
    let o = run(&d, &["min-crossings", "w.json", "--edge", "0-3-p1", "--cap", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["min"], Value::Null);

    let o = run(&d, &["min-crossings", "w.json", "--edge", "0-3-p1", "--cap", "2", "--size-cap", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"], "SizeLimitExceeded");
    let o = bin()
        .current_dir(&d)
        .env("SIMGADGET_SIZE_CAP", "2")
        .args(["min-crossings", "w.json", "--edge", "0-3-p1", "--cap", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn format_and_usage_errors() {
    let (_tmp, d) = setup();
    fs::write(d.join("junk.json"), "{not json").unwrap();
    let o = run(&d, &["counts", "junk.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"], "parse");

    let o = run(&d, &["counts", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"], "io");

    let o = run(&d, &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["error"], "usage");

    fs::write(d.join("loop.json"), r#"{"n":2,"edges":[[1,1,"shared"]],"tags":{}}"#).unwrap();
    assert_eq!(run(&d, &["counts", "loop.json"]).status.code(), Some(2));

    ok(&run(&d, &["wheel", "--k", "1", "--out", "w.json"]));
    let o = run(&d, &["verify-cert", "w.json", "--cert", "w.json"]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(run(&d, &["--help"]).status.code(), Some(0));
}

#[test]
fn svg_is_deterministic_and_handles_empty_input() {
    let (_tmp, d) = setup();
    fs::write(d.join("empty.json"), r#"{"n":0,"edges":[],"tags":{}}"#).unwrap();
    fs::write(d.join("empty_d.json"), r#"{"coords":{}}"#).unwrap();
    let a = run(&d, &["emit-svg", "empty.json", "--drawing", "empty_d.json"]);
    ok(&a);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));

    fs::write(d.join("small.json"), r#"{"B":10,"A":[3,3,4]}"#).unwrap();
    fs::write(d.join("small_sol.json"), r#"{"triples":[[0,1,2]]}"#).unwrap();
    ok(&run(&d, &["reduce-gracsim", "small.json", "--out", "g.json", "--index-out", "gi.json"]));
    ok(&run(&d, &["draw-gracsim", "g.json", "--index", "gi.json", "--solution", "small_sol.json", "--out", "d.json"]));
    let one = run(&d, &["emit-svg", "g.json", "--drawing", "d.json", "--stretch", "3"]);
    let two = run(&d, &["emit-svg", "g.json", "--drawing", "d.json", "--stretch", "3"]);
    ok(&one);
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(run(&d, &["emit-svg", "g.json", "--drawing", "d.json", "--stretch", "0"]).status.code(), Some(2));
    assert_eq!(run(&d, &["emit-svg", "g.json"]).status.code(), Some(2));
}
