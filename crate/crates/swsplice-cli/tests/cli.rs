use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{Map, Value};

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn swsplice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swsplice")).args(args).current_dir(data()).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().collect::<Map<_, _>>())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}

fn canonical(text: &str) -> String {
    serde_json::to_string_pretty(&sorted(serde_json::from_str(text).unwrap())).unwrap()
}

fn golden(args: &[&str], golden: &str) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.to_str().unwrap();
    full.extend(["--json", out_s]);
    let o = swsplice(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let got = std::fs::read_to_string(&out).unwrap();
    let want = std::fs::read_to_string(data().join(golden)).unwrap();
    assert_eq!(canonical(&got), canonical(&want));
}

#[test]
fn analyze_e8_prints_headline_values() {
    let o = swsplice(&["analyze", "--pairs", "2:3", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("sw0 = 1\n"), "{}", s);
    assert!(s.contains("sigma = -8\n"));
    assert!(s.contains("conjecture (-8 sw0 = sigma): PASS"));
}

#[test]
fn analyze_with_graph_reports_geometric_genus() {
    let o = swsplice(&["analyze", "--pairs", "2:3", "--n", "5", "--graph", "e8.graph"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("K^2 + #V = 8\n"));
    assert!(s.contains("p_g = 0\n"));
}

#[test]
fn analyze_json_matches_golden_files() {
    golden(&["analyze", "--pairs", "2:3", "--n", "5", "--graph", "e8.graph"], "e8_report.json");
    golden(&["analyze", "--pairs", "2:3,2:3", "--n", "2"], "tower_2_3_2_3_n2.json");
}

#[test]
fn json_schema_is_stable_and_float_free() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = swsplice(&["analyze", "--pairs", "2:3,3:7", "--n", "5", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["input", "levels", "checks", "values"]);
    fn walk(v: &Value) {
        match v {
            Value::Number(_) => panic!("bare number in report"),
            Value::Object(m) => m.values().for_each(walk),
            Value::Array(a) => a.iter().for_each(walk),
            _ => {}
        }
    }
    walk(&v);
    for level in v["levels"].as_array().unwrap() {
        for key in ["d", "h1_order", "sigma", "lambda_w", "torsion", "sw0"] {
            let s = level[key].as_str().unwrap();
            assert!(s.split_once('/').is_some(), "{} = {}", key, s);
        }
    }
}

#[test]
fn reports_are_identical_across_runs() {
    let a = swsplice(&["analyze", "--pairs", "2:3,2:5", "--n", "3"]);
    let b = swsplice(&["analyze", "--pairs", "2:3,2:5", "--n", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn analyze_exit_codes() {
    let o = swsplice(&["analyze", "--pairs", "2:3", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(h_l-1)(h̃_l-1)=0 fails at level 1"));
    assert_eq!(swsplice(&["analyze", "--pairs", "2;3", "--n", "5"]).status.code(), Some(1));
    assert_eq!(swsplice(&["analyze", "--pairs", "2:3", "--n", "0"]).status.code(), Some(1));
    assert_eq!(swsplice(&["analyze", "--pairs", "2:3"]).status.code(), Some(1));
    assert_eq!(swsplice(&["analyze", "--pairs", "2:3", "--n", "5", "--graph", "missing.graph"]).status.code(), Some(1));
}

#[test]
fn graph_e8() {
    let o = swsplice(&["graph", "--file", "e8.graph", "--ops", "det,torsion,k2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "det = 1\ntorsion = 0\nk2 = 8\n");
}

#[test]
fn graph_single_vertex_torsion() {
    let o = swsplice(&["graph", "--file", "single_m2.graph", "--ops", "torsion,homology"]);
    assert_eq!(stdout(&o), "torsion = 1/8\nhomology = Z/2\n");
}

#[test]
fn graph_alexander_of_trefoil() {
    let o = swsplice(&["graph", "--file", "trefoil.graph", "--ops", "alexander"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "alexander = t^2 - t + 1\n");
}

#[test]
fn graph_errors() {
    let o = swsplice(&["graph", "--file", "bad.graph", "--ops", "det"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert_eq!(swsplice(&["graph", "--file", "degenerate.graph", "--ops", "det"]).status.code(), Some(2));
    assert_eq!(swsplice(&["graph", "--file", "e8.graph", "--ops", "alexander"]).status.code(), Some(2));
    assert_eq!(swsplice(&["graph", "--file", "e8.graph", "--ops", "volume"]).status.code(), Some(1));
}

#[test]
fn verify_conjecture_small_sweep() {
    let o = swsplice(&["verify", "--suite", "conjecture", "--max-s", "2", "--max-pq", "5", "--max-n", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "conjecture: 1168 towers, all -8·sw0 = sigma, swadd and E_l = 0 hold\n");
}

#[test]
fn verify_lemma_is_deterministic() {
    let a = swsplice(&["verify", "--suite", "lemma", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("fails as expected"));
    let b = swsplice(&["verify", "--suite", "lemma", "--seed", "7"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn verify_all_tiny_bounds() {
    let o = swsplice(&["verify", "--suite", "all", "--max-s", "1", "--max-pq", "3", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn verify_rejects_zero_bounds() {
    assert_eq!(swsplice(&["verify", "--suite", "conjecture", "--max-n", "0"]).status.code(), Some(1));
    assert_eq!(swsplice(&["verify", "--suite", "nonsense"]).status.code(), Some(1));
}
