use std::process::Command;

use serde_json::Value;

fn ocalc() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ocalc"));
    c.env_remove("OCALC_OUT");
    c
}

fn run(args: &[&str]) -> (i32, String) {
    let out = ocalc().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn degor_genus_two_is_clean() {
    let (code, stdout) = run(&["verify", "--suite", "degor", "--genus", "2", "--b", "both"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["suite"], "degor");
    assert_eq!(r["failures"].as_array().unwrap().len(), 0);
    assert_eq!(r["instances"], r["passes"]);
    assert!(r["elapsed_ms"].is_u64());
}

#[test]
fn fprop_includes_worked_example() {
    let (code, stdout) = run(&["verify", "--suite", "fprop", "--genus", "2", "--b", "0"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r["b"], serde_json::json!([0]));
    assert!(r["instances"].as_u64().unwrap() > 2);
}

#[test]
fn all_suites_pass_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let (code, _) = run(&["verify", "--suite", "all", "--genus", "2", "--no-timing", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    let reports: Vec<Value> = serde_json::from_slice(&x).unwrap();
    assert_eq!(reports.len(), 19);
    let remark = reports.iter().find(|r| r["suite"] == "remark-0e1").unwrap();
    assert!(remark["failures"].as_array().unwrap().is_empty());
    assert!(!remark["findings"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(run(&["verify", "--suite", "lm0", "--genus", "1"]).0, 2);
    assert_eq!(run(&["verify", "--b", "7"]).0, 2);
    assert_eq!(run(&["export", "poset", "--kind", "opbar"]).0, 2);
}

#[test]
fn export_graphs_writes_one_file_each() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["export", "graphs", "--genus", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let mut names: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    let g: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(&names[0])).unwrap()).unwrap();
    assert!(g["weights"].is_array() && g["edges"].is_array());
}

#[test]
fn export_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = ocalc()
        .env("OCALC_OUT", dir.path())
        .args(["export", "poset", "--kind", "opbar", "--graph", "THETA", "--b", "0", "--format", "dot"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = std::fs::read_to_string(dir.path().join("OPbar-theta-b0.dot")).unwrap();
    assert_eq!(dot.matches("[label=").count(), 6);
    assert_eq!(dot.matches("->").count(), 9);
}

#[test]
fn export_poset_json_from_inline_graph() {
    let (code, stdout) = run(&[
        "export", "poset", "--kind", "a", "--graph", r#"{"weights":[0,0],"edges":[[0,1],[0,1],[0,1]]}"#, "--b", "1",
    ]);
    assert_eq!(code, 0);
    let p: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(p["elements"].as_array().unwrap().len(), 7);
    assert_eq!(p["ranks"].as_array().unwrap().len(), 7);
}

#[test]
fn export_atlas_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["export", "atlas", "--genus", "2", "--b", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let bundle: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("atlas-g2-b1.json")).unwrap()).unwrap();
    assert_eq!(bundle["graphs"].as_array().unwrap().len(), 7);
    assert_eq!(bundle["conjugacy_classes"]["elements"].as_array().unwrap().len(), 16);
    let mut orders: Vec<u64> = bundle["automorphism_orders"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    orders.sort();
    assert_eq!(orders, vec![1, 2, 2, 2, 8, 8, 12]);
    for f in ["sg-g2.dot", "cop-g2-b1.dot", "strata-g2-b1.json", "strata-g2-b1.dot"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let again = tempfile::tempdir().unwrap();
    run(&["export", "atlas", "--genus", "2", "--b", "1", "--out", again.path().to_str().unwrap()]);
    for f in ["atlas-g2-b1.json", "cop-g2-b1.dot"] {
        assert_eq!(std::fs::read(dir.path().join(f)).unwrap(), std::fs::read(again.path().join(f)).unwrap());
    }
}
