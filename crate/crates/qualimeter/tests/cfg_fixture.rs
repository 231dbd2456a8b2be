mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{fixture, fixture_str, run_json};
use serde::Deserialize;

#[derive(Deserialize)]
struct Graph {
    class: String,
    method: String,
    decisions: u64,
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
}

fn graphs() -> Vec<Graph> {
    serde_json::from_str(&std::fs::read_to_string(fixture("cfg/graphs.json")).unwrap()).unwrap()
}

/// v(G) of each extracted method keyed by (class, method name).
fn extracted() -> BTreeMap<(String, String), u64> {
    let report = run_json(&["analyze", "--suite", "complexity", &fixture_str("cfg")]);
    report["entities"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["level"] == "method")
        .map(|e| {
            let id = e["entity"].as_str().unwrap();
            let (owner, rest) = id.split_once('#').unwrap();
            let name = rest.split('(').next().unwrap();
            ((owner.to_string(), name.to_string()), e["metrics"]["vg"].as_u64().unwrap())
        })
        .collect()
}

#[test]
fn hand_graphs_are_well_formed() {
    for g in graphs() {
        let nodes: BTreeSet<&str> = g.nodes.iter().map(String::as_str).collect();
        assert_eq!(nodes.len(), g.nodes.len(), "{}: duplicate node", g.method);
        for (a, b) in &g.edges {
            assert!(nodes.contains(a.as_str()) && nodes.contains(b.as_str()), "{}: dangling edge", g.method);
        }
        let e = g.edges.len() as i64;
        let n = g.nodes.len() as i64;
        assert_eq!(e - n + 2, g.decisions as i64 + 1, "{}", g.method);
    }
}

#[test]
fn extractor_matches_hand_graphs() {
    let got = extracted();
    let graphs = graphs();
    assert_eq!(graphs.len(), 20);
    assert_eq!(got.len(), 20);
    for g in &graphs {
        let v = got[&(g.class.clone(), g.method.clone())];
        assert_eq!(v as i64, g.edges.len() as i64 - g.nodes.len() as i64 + 2, "{}", g.method);
    }
}

#[test]
fn wmc_sums_cyclomatic_numbers() {
    let got = extracted();
    let report = run_json(&["analyze", "--suite", "ck", &fixture_str("cfg")]);
    for class in ["cfg.Flow", "cfg.Paths"] {
        let row = report["entities"].as_array().unwrap().iter().find(|e| e["entity"] == class).unwrap();
        let sum: u64 = got.iter().filter(|((c, _), _)| c == class).map(|(_, v)| v).sum();
        assert_eq!(row["metrics"]["wmc"].as_u64().unwrap(), sum, "{class}");
    }
    let flow: u64 = graphs().iter().filter(|g| g.class == "cfg.Flow").map(|g| g.decisions + 1).sum();
    assert_eq!(flow, 30);
}
