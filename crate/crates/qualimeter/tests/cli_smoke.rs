mod common;

use std::process::Command;

use common::{fixture, fixture_str, run, run_json};
use serde_json::Value;

fn entity<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["entities"].as_array().unwrap().iter().find(|e| e["entity"] == name).unwrap_or_else(|| panic!("no {name}"))
}

#[test]
fn analyze_reports_ck_per_class() {
    let v = run_json(&["analyze", "--suite", "ck", &fixture_str("corpus")]);
    assert_eq!(v["schemaVersion"], 1);
    let book = &entity(&v, "shop.model.Book")["metrics"];
    // Book -> Product -> Item
    assert_eq!(book["dit"], 2);
    assert_eq!(entity(&v, "shop.model.Product")["metrics"]["noc"], 2);
    assert_eq!(entity(&v, "shop.model.Item")["metrics"]["noc"], 1);
}

#[test]
fn csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = run(&["analyze", "--suite", "mood", "--format", "json,csv", "--out", out, &fixture_str("corpus")]);
    assert_eq!(code, 0, "{err}");
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("analysis.json")).unwrap()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("analysis.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let system: Vec<&str> = lines.next().unwrap().split(',').collect();
    for (k, cell) in header.iter().zip(&system).skip(2) {
        assert_eq!(json["entities"][0]["metrics"][*k].to_string(), *cell, "{k}");
    }
}

#[test]
fn two_artifacts_need_an_output_directory() {
    let (code, _, err) = run(&["analyze", "--format", "json,csv", &fixture_str("corpus")]);
    assert_eq!(code, 2);
    assert!(err.starts_with("qualimeter: error[usage]:"), "{err}");
}

#[test]
fn missing_input_is_a_usage_error() {
    let (code, out, err) = run(&["cloc", "/definitely/not/here"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn malformed_model_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json");
    std::fs::write(&p, r#"{"types": [{"name": 3}]}"#).unwrap();
    let (code, _, err) = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.starts_with("qualimeter: error["), "{err}");
}

#[test]
fn model_round_trips_through_interchange() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = run(&["extract", "--out", out, &fixture_str("corpus")]);
    assert_eq!(code, 0, "{err}");
    let model_path = dir.path().join("model.json");
    let direct = qualimeter::sources::load_model(&[fixture("corpus")], qualimeter::sources::InputMode::Java).unwrap().model;
    let reloaded = qualimeter::interchange::load(&model_path).unwrap();
    assert_eq!(direct, reloaded);
    // and analysis sees no difference
    let a = run_json(&["analyze", &fixture_str("corpus")]);
    let b = run_json(&["analyze", model_path.to_str().unwrap()]);
    assert_eq!(a["entities"], b["entities"]);
}

#[test]
fn kiviat_svg_is_deterministic() {
    let args = ["kiviat", "--values", "0.19,90,8,8,5,2,483,68,22,167,0,0,0", "--title", "test"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("<svg"));
    assert_eq!(a.matches(r#"<circle class="alert""#).count(), 4);
}

#[test]
fn kiviat_of_extracted_class() {
    let v = run_json(&["kiviat", "--format", "json", "--class", "shop.model.Item", &fixture_str("corpus")]);
    // constructors are left out by default
    assert_eq!(v["metrics"]["cl_func"]["value"].to_string(), "6.0000");
    assert_eq!(v["metrics"]["cl_data"]["value"].to_string(), "4.0000");
}

#[test]
fn treemap_is_seed_stable() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    std::fs::write(&h, r#"{"name": "r", "children": [{"name": "a", "weight": 2}, {"name": "b", "weight": 1}]}"#).unwrap();
    let args = ["treemap", "--resolution", "64", "--seed", "3", h.to_str().unwrap()];
    let (code, a, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    assert_eq!(a, run(&args).1);
    assert_eq!(a.matches(r#"data-path="r/"#).count(), 2);
}

#[test]
fn stability_and_correlation() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = dir.path().join("s1.json");
    let s2 = dir.path().join("s2.json");
    std::fs::write(&s1, r#"{"iteration": "1", "classes": ["A", "B", "C"]}"#).unwrap();
    std::fs::write(&s2, r#"{"iteration": "2", "classes": ["A", "B2", "D"], "renames": {"B": "B2"}}"#).unwrap();
    let v = run_json(&["stability", s1.to_str().unwrap(), s2.to_str().unwrap()]);
    let t = &v["transitions"][0];
    assert_eq!((t["added"].as_u64(), t["deleted"].as_u64(), t["changed"].as_u64(), t["sdi"].as_u64()), (Some(1), Some(1), Some(1), Some(3)));

    let series = dir.path().join("ranks.csv");
    std::fs::write(&series, "a,b\n1,2\n2,1\n3,4\n4,3\n").unwrap();
    let v = run_json(&["correlate", series.to_str().unwrap()]);
    assert_eq!(v["spearman"].to_string(), "0.6000");
}

#[test]
fn binary_reads_config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("q.json");
    std::fs::write(&cfg, r#"{"format": "csv"}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qualimeter"))
        .args(["cloc", &fixture_str("corpus")])
        .env("QUALIMETER_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("language,files,blank,comment,code"));

    let bad = Command::new(env!("CARGO_BIN_EXE_qualimeter")).arg("--nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
