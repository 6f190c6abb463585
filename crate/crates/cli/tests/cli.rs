use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use guesslab::io::from_json;
use guesslab::JointPmf;
use serde_json::Value;
use tempfile::TempDir;

const P: &str = r#"{"x": ["a", "b", "c"], "mass": [[0.5, 0.3, 0.2]]}"#;
const Q: &str = r#"{"x": ["a", "b", "c"], "mass": [[0.2, 0.3, 0.5]]}"#;
const LIST: &str = r#"{"x": ["a", "b", "c"], "rank": [[3, 1, 2]]}"#;
const FAMILY: &str = r#"{"members": [
    {"x": ["a", "b", "c"], "y": ["u", "v"], "mass": [[0.3, 0.1, 0.1], [0.2, 0.2, 0.1]]},
    {"x": ["a", "b", "c"], "y": ["u", "v"], "mass": [[0.05, 0.05, 0.4], [0.1, 0.3, 0.1]]},
    {"x": ["a", "b", "c"], "y": ["u", "v"], "mass": [[0.1, 0.2, 0.2], [0.1, 0.1, 0.3]]}
]}"#;
const HULL: &str = r#"{"vertices": [
    {"x": ["a", "b", "c"], "mass": [[0.5, 0.3, 0.2]]},
    {"x": ["a", "b", "c"], "mass": [[0.1, 0.1, 0.8]]}
]}"#;
const AVS: &str = r#"{"states": ["s", "t"], "letters": ["0", "1"], "channel": [[0.9, 0.1], [0.3, 0.7]], "n": 3, "counts": [1, 2]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Workspace { dir: TempDir::new().unwrap() };
        for (name, body) in
            [("p.json", P), ("q.json", Q), ("l.json", LIST), ("fam.json", FAMILY), ("hull.json", HULL), ("avs.json", AVS)]
        {
            ws.write(name, body);
        }
        ws
    }

    fn write(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_guesslab")).current_dir(self.dir.path()).args(args).output().unwrap()
    }

    fn json(&self, args: &[&str]) -> Value {
        let out = self.run(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice(&out.stdout).unwrap()
    }
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| (p.clone(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn center_solve_reports_weights_center_and_radius() {
    let ws = Workspace::new();
    let v = ws.json(&["center", "solve", "--family", "fam.json", "--alpha", "0.5"]);
    assert_eq!(v["config"]["command"], "center");
    assert_eq!(v["config"]["subcommand"], "solve");
    assert_eq!(v["config"]["alpha"], 0.5);
    assert_eq!(v["config"]["inputs"]["family"], "fam.json");
    let mu: Vec<f64> = serde_json::from_value(v["result"]["mu_star"].clone()).unwrap();
    assert_eq!(mu.len(), 3);
    assert!((mu.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let radius = v["result"]["radius"].as_f64().unwrap();
    for d in v["result"]["member_divergences"].as_array().unwrap() {
        assert!(d.as_f64().unwrap() <= radius + 1e-7);
    }
    assert!(v["result"]["duality_gap"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn redundancy_is_a_scalar_report() {
    let ws = Workspace::new();
    let v = ws.json(&["guess", "redundancy", "--pmf", "p.json", "--list", "l.json", "--rho", "1"]);
    assert_eq!(v["config"]["rho"], 1.0);
    assert!(v["config"].get("alpha").is_none());
    assert!(v["result"]["redundancy"].as_f64().unwrap() > 0.0);
    assert_eq!(v["result"]["within_nuisance"], true);
}

#[test]
fn nats_are_bits_times_ln2() {
    let ws = Workspace::new();
    let bits = ws.json(&["entropy", "--pmf", "p.json", "--alpha", "2"]);
    let nats = ws.json(&["entropy", "--pmf", "p.json", "--alpha", "2", "--log-base", "e"]);
    let (b, n) = (bits["result"]["renyi_entropy"].as_f64().unwrap(), nats["result"]["renyi_entropy"].as_f64().unwrap());
    assert!((n - b * std::f64::consts::LN_2).abs() < 1e-12);
    assert_eq!(bits["result"]["h"], nats["result"]["h"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let ws = Workspace::new();
    let runs: &[&[&str]] = &[
        &["center", "solve", "--family", "fam.json", "--alpha", "0.5", "--restarts", "4", "--seed", "7"],
        &["avs", "stitch", "--spec", "avs.json", "--alpha", "0.5"],
        &["geom", "project", "--hull", "hull.json", "--reference", "q.json", "--rho", "-0.4"],
        &["code", "campbell", "--pmf", "p.json", "--q", "q.json", "--rho", "1", "--format", "csv"],
    ];
    for args in runs {
        let (a, b) = (ws.run(args), ws.run(args));
        assert!(a.status.success(), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    // the worker count does not leak into the numbers
    let one = ws.run(&["center", "solve", "--family", "fam.json", "--alpha", "0.5", "--jobs", "1"]);
    let many = ws.run(&["center", "solve", "--family", "fam.json", "--alpha", "0.5", "--jobs", "3"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn emitted_pmfs_reparse_to_equal_objects() {
    let ws = Workspace::new();
    for (args, key) in [
        (vec!["center", "solve", "--family", "fam.json", "--alpha", "0.7"], "q_star"),
        (vec!["avs", "center", "--spec", "avs.json", "--alpha", "0.5"], "q_star"),
        (vec!["geom", "project", "--hull", "hull.json", "--reference", "q.json", "--alpha", "1.5"], "q"),
    ] {
        let out = ws.run(&args);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = String::from_utf8(out.stdout).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let pmf_text = serde_json::to_string(&v["result"][key]).unwrap();
        let first: JointPmf = from_json(&pmf_text).unwrap();
        let again: JointPmf = from_json(&guesslab::io::to_json(&first).unwrap()).unwrap();
        assert_eq!(first, again);
        // the emitted center also reads back as a `center check` input
        let q = ws.write("center.json", &pmf_text);
        if key == "q_star" && args[0] == "center" {
            let check = ws.json(&["center", "check", "--family", "fam.json", "--q", q.to_str().unwrap(), "--alpha", "0.7"]);
            assert!(check["result"]["excess"].as_f64().unwrap().abs() <= 1e-7);
        }
    }
}

#[test]
fn inputs_are_left_untouched() {
    let ws = Workspace::new();
    let before = snapshot(ws.dir.path());
    for args in [
        vec!["entropy", "--pmf", "p.json", "--alpha", "0.5"],
        vec!["divergence", "--p", "p.json", "--q", "q.json", "--alpha", "0.5"],
        vec!["guess", "moment", "--pmf", "p.json", "--list", "l.json", "--rho", "2"],
        vec!["guess", "sandwich", "--pmf", "p.json", "--rho", "1"],
        vec!["center", "solve", "--family", "fam.json", "--alpha", "0.5"],
        vec!["center", "check", "--family", "fam.json", "--q", "fam.json", "--alpha", "0.5"],
        vec!["geom", "pythagoras", "--hull", "hull.json", "--reference", "q.json", "--alpha", "0.5"],
        vec!["avs", "rate", "--spec", "avs.json", "--u", "0.5,0.5", "--alpha", "0.5"],
    ] {
        ws.run(&args);
    }
    assert_eq!(snapshot(ws.dir.path()), before);
}

#[test]
fn output_flag_writes_the_report_file() {
    let ws = Workspace::new();
    let out = ws.run(&["entropy", "--pmf", "p.json", "--alpha", "0.5", "-o", "report.json"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(ws.path("report.json")).unwrap()).unwrap();
    assert_eq!(v["config"]["output"], "report.json");
}

#[test]
fn csv_export_is_a_flat_table() {
    let ws = Workspace::new();
    let out = ws.run(&["center", "solve", "--family", "fam.json", "--alpha", "0.5", "--format", "csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["member", "mu", "i_value", "divergence", "nasc_residual"]);
    assert_eq!(reader.records().count(), 3);

    let scalar = ws.run(&["entropy", "--pmf", "p.json", "--alpha", "0.5", "--format", "csv"]);
    let text = String::from_utf8(scalar.stdout).unwrap();
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("renyi_entropy,"));
}

#[test]
fn malformed_json_exits_one_with_position() {
    let ws = Workspace::new();
    ws.write("bad.json", "{\"x\": [\"a\", \"b\"],\n \"mass\": [[0.5, 0.5]");
    let out = ws.run(&["entropy", "--pmf", "bad.json", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert!(msg.contains("bad.json") && msg.contains("line 2") && msg.contains("column"), "{msg}");
}

#[test]
fn schema_violations_exit_one() {
    let ws = Workspace::new();
    ws.write("extra.json", r#"{"x": ["a"], "mass": [[1.0]], "weight": 2}"#);
    ws.write("unnormalized.json", r#"{"x": ["a", "b"], "mass": [[0.5, 0.6]]}"#);
    for name in ["extra.json", "unnormalized.json", "missing.json"] {
        let out = ws.run(&["entropy", "--pmf", name, "--alpha", "0.5"]);
        assert_eq!(out.status.code(), Some(1), "{name}: {}", stderr(&out));
    }
}

#[test]
fn alphabet_mismatch_exits_one() {
    let ws = Workspace::new();
    ws.write(
        "mixed.json",
        r#"{"members": [{"x": ["a", "b", "c"], "mass": [[0.5, 0.3, 0.2]]}, {"x": ["a", "b"], "mass": [[0.1, 0.9]]}]}"#,
    );
    let out = ws.run(&["center", "solve", "--family", "mixed.json", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("alphabet"), "{}", stderr(&out));

    ws.write("short.json", r#"{"x": ["a", "b"], "mass": [[0.4, 0.6]]}"#);
    let out = ws.run(&["divergence", "--p", "p.json", "--q", "short.json", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_arguments_exit_one() {
    let ws = Workspace::new();
    let cases: &[&[&str]] = &[
        &["entropy", "--pmf", "p.json"],
        &["entropy", "--pmf", "p.json", "--alpha", "0.5", "--rho", "1"],
        &["entropy", "--pmf", "p.json", "--alpha", "1"],
        &["entropy", "--pmf", "p.json", "--alpha", "0.5", "--tol", "0"],
        &["entropy", "--pmf", "p.json", "--alpha", "0.5", "--jobs", "0"],
        &["guess", "moment", "--pmf", "p.json", "--rho", "-0.5"],
        &["center", "solve", "--alpha", "0.5"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = ws.run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(ws.run(&["--help"]).status.code(), Some(0));
}
