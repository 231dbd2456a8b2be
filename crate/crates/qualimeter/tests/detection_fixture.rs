mod common;

use common::{fixture_str, run, run_json};
use serde_json::Value;

fn flagged(report: &Value, rule: &str) -> Vec<String> {
    report["rules"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["rule"] == rule)
        .unwrap()["flagged"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["entity"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn god_class_is_flagged_and_near_misses_are_not() {
    let report = run_json(&["detect", &fixture_str("godclass.json")]);
    assert_eq!(flagged(&report, "GodClass"), ["God"]);
}

#[test]
fn evidence_lists_every_leaf() {
    let report = run_json(&["detect", &fixture_str("godclass.json")]);
    let god = &report["rules"][0]["flagged"][0];
    let metrics: Vec<&str> = god["evidence"].as_array().unwrap().iter().map(|e| e["metric"].as_str().unwrap()).collect();
    assert_eq!(metrics, ["atfd", "wmc", "tcc"]);
    assert_eq!(god["evidence"][0]["value"].to_string(), "6.0000");
}

#[test]
fn custom_rules_compose() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("rules.json");
    std::fs::write(
        &rules,
        r#"{"rules": [{"name": "Heavy", "expr": {"or": [
            {"metric": "wmc", "op": "higherThan", "value": 47},
            {"metric": "atfd", "op": "topCount", "value": 1}
        ]}}]}"#,
    )
    .unwrap();
    let report = run_json(&["detect", "--rules", rules.to_str().unwrap(), &fixture_str("godclass.json")]);
    assert_eq!(flagged(&report, "Heavy"), ["Busy", "God", "Lonely"]);
}

#[test]
fn malformed_rule_is_reported_with_its_location() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("rules.json");
    std::fs::write(&rules, r#"[{"name": "X", "expr": {"metric": "wmc", "op": "around", "value": 1}}]"#).unwrap();
    let (code, _, err) = run(&["detect", "--rules", rules.to_str().unwrap(), &fixture_str("godclass.json")]);
    assert_ne!(code, 0);
    assert!(err.contains("around"), "{err}");
}
