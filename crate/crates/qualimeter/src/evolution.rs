//! Iteration stability, use-case cohesion and rank correlation inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use qualimeter_core::stats::{
    self, use_case_cohesion_global, use_case_cohesion_local, IterationSnapshot, UseCase, UseCaseModel,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::from_json;
use crate::error::{Error, Result};
use crate::number;
use crate::report::SCHEMA_VERSION;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotJson {
    iteration: String,
    classes: Vec<String>,
    #[serde(default)]
    renames: BTreeMap<String, String>,
    /// Total quality index of the iteration, when known.
    tqi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub snapshot: IterationSnapshot,
    pub tqi: Option<f64>,
}

pub fn parse_snapshot(text: &str, path: &Path) -> Result<Snapshot> {
    let s: SnapshotJson = from_json(text, path)?;
    let classes: BTreeSet<String> = s.classes.iter().cloned().collect();
    if classes.len() != s.classes.len() {
        return Err(Error::schema(path, "at `classes`: duplicate class name"));
    }
    Ok(Snapshot {
        snapshot: IterationSnapshot {
            iteration: s.iteration,
            classes,
            renames: s.renames,
        },
        tqi: s.tqi,
    })
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text, path)
}

/// Population z-scores, or `null`s with the reason when undefined.
fn z_json(values: &[f64]) -> (Value, Option<String>) {
    match stats::z_normalize(values) {
        Ok(z) => (z.into_iter().map(|v| number::real(Some(v))).collect(), None),
        Err(e) => (Value::Null, Some(e.to_string())),
    }
}

/// SDI for each consecutive pair plus z-normalized SDI and TQI series.
pub fn stability(snapshots: &[Snapshot]) -> Result<Value> {
    if snapshots.len() < 2 {
        return Err(Error::Usage("stability needs at least two snapshots".into()));
    }
    let mut transitions = Vec::new();
    let mut sdis = Vec::new();
    for w in snapshots.windows(2) {
        let (p, n) = (&w[0].snapshot, &w[1].snapshot);
        let i = stats::sdi(p, n).map_err(|e| Error::analysis(format!("{} -> {}: {e}", p.iteration, n.iteration)))?;
        sdis.push(i.sdi as f64);
        transitions.push(json!({
            "from": p.iteration, "to": n.iteration,
            "added": i.added, "deleted": i.deleted, "changed": i.changed, "sdi": i.sdi,
        }));
    }
    let mut notes = Vec::new();
    let (sdi_z, why) = z_json(&sdis);
    if let Some(w) = why {
        notes.push(format!("sdiZ undefined: {w}"));
    }
    let tqi: Option<Vec<f64>> = snapshots.iter().map(|s| s.tqi).collect();
    let (tqi_z, tqi_raw) = match &tqi {
        Some(t) => {
            let (z, why) = z_json(t);
            if let Some(w) = why {
                notes.push(format!("tqiZ undefined: {w}"));
            }
            (z, t.iter().map(|v| number::real(Some(*v))).collect())
        }
        None => (Value::Null, Value::Null),
    };
    Ok(json!({
        "schemaVersion": SCHEMA_VERSION,
        "iterations": snapshots.iter().map(|s| s.snapshot.iteration.clone()).collect::<Vec<_>>(),
        "transitions": transitions,
        "sdiZ": sdi_z,
        "tqi": tqi_raw,
        "tqiZ": tqi_z,
        "notes": notes,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct UseCasesJson {
    use_cases: Vec<UseCaseJson>,
    #[serde(default)]
    similar_pairs: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UseCaseJson {
    name: String,
    scenarios: Vec<String>,
}

pub fn parse_use_cases(text: &str, path: &Path) -> Result<UseCaseModel> {
    let doc: UseCasesJson = from_json(text, path)?;
    let model = UseCaseModel {
        use_cases: doc
            .use_cases
            .into_iter()
            .map(|u| UseCase {
                name: u.name,
                scenarios: u.scenarios,
            })
            .collect(),
        similar_pairs: doc.similar_pairs,
    };
    model.normalized_pairs().map_err(|e| Error::schema(path, e))?;
    Ok(model)
}

pub fn load_use_cases(path: &Path) -> Result<UseCaseModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_use_cases(&text, path)
}

/// Local cohesion per use case and the global value. Higher local values
/// mean more similar scenarios; the global value is one minus the share
/// of similar pairs, so higher means fewer possible cross-cuttings.
pub fn use_case_report(model: &UseCaseModel) -> Result<Value> {
    let mut local = serde_json::Map::new();
    for u in &model.use_cases {
        let v = use_case_cohesion_local(model, &u.name).map_err(Error::analysis)?;
        local.insert(u.name.clone(), number::real(v));
    }
    let global = use_case_cohesion_global(model).map_err(Error::analysis)?;
    Ok(json!({"local": local, "global": number::real(global)}))
}

/// Two numeric series from CSV (first two columns, header row) or JSON
/// (`{"x": [...], "y": [...]}`).
pub fn parse_series(text: &str, path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Series {
            x: Vec<f64>,
            y: Vec<f64>,
        }
        let s: Series = from_json(text, path)?;
        return Ok((s.x, s.y));
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::schema(path, e))?;
        let line = i + 2;
        let num = |j: usize| -> Result<f64> {
            let cell = rec
                .get(j)
                .ok_or_else(|| Error::schema(path, format!("line {line}: expected two columns")))?;
            cell.parse::<f64>()
                .map_err(|_| Error::schema(path, format!("line {line}: `{cell}` is not a number")))
        };
        x.push(num(0)?);
        y.push(num(1)?);
    }
    Ok((x, y))
}

pub fn correlate(x: &[f64], y: &[f64]) -> Result<Value> {
    let rs = stats::spearman(x, y).map_err(Error::analysis)?;
    Ok(json!({"schemaVersion": SCHEMA_VERSION, "n": x.len(), "spearman": number::real(Some(rs))}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stability_counts_and_normalizes() {
        let p = Path::new("s.json");
        let a = parse_snapshot(r#"{"iteration": "1", "classes": ["A", "B"], "tqi": 1.0}"#, p).unwrap();
        let b = parse_snapshot(r#"{"iteration": "2", "classes": ["A", "C"], "renames": {"B": "C"}, "tqi": 2.0}"#, p).unwrap();
        let c = parse_snapshot(r#"{"iteration": "3", "classes": ["D"], "tqi": 3.0}"#, p).unwrap();
        let v = stability(&[a, b, c]).unwrap();
        assert_eq!(v["transitions"][0]["sdi"], json!(1));
        assert_eq!(v["transitions"][1]["sdi"], json!(3));
        assert_eq!(v["sdiZ"].to_string(), "[-1.0000,1.0000]");
        assert_eq!(v["tqiZ"][0].to_string(), "-1.2247");
    }

    #[test]
    fn use_cases_validate_pairs() {
        let p = Path::new("u.json");
        let bad = r#"{"useCases": [{"name": "U", "scenarios": ["a"]}], "similarPairs": [["a", "zz"]]}"#;
        assert!(parse_use_cases(bad, p).is_err());
        let ok = r#"{"useCases": [{"name": "U", "scenarios": ["a", "b"]}], "similarPairs": [["a", "b"]]}"#;
        let r = use_case_report(&parse_use_cases(ok, p).unwrap()).unwrap();
        assert_eq!(r["local"]["U"].to_string(), "1.0000");
    }

    #[test]
    fn series_from_csv() {
        let (x, y) = parse_series("a,b\n1,3\n2,2\n3,1\n", Path::new("s.csv")).unwrap();
        assert_eq!(correlate(&x, &y).unwrap()["spearman"].to_string(), "-1.0000");
        assert!(parse_series("a,b\n1,x\n", Path::new("s.csv")).is_err());
    }
}
