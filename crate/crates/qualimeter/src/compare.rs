//! Side-by-side comparison of two quality-level distributions.

use std::path::Path;

use qualimeter_core::maintain::{ranking_matrix, Criterion, LevelDistribution, QualityLevel, Winner};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::report::{csv_err, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq)]
pub struct Side {
    pub name: String,
    pub distribution: LevelDistribution,
    /// Threshold profile the distribution was computed with, if recorded.
    pub profile: Option<Value>,
}

fn pct(v: &Value, at: &str, path: &Path) -> Result<u64> {
    v.as_u64()
        .filter(|p| *p <= 100)
        .ok_or_else(|| Error::schema(path, format!("at `{at}`: expected an integer percentage 0..=100")))
}

/// Reads either a distribution document
/// `{"name"?, "distribution": {criterion: {level: pct}}, "profile"?}` or a
/// logiscope metric report produced by `analyze`.
pub fn parse_side(text: &str, path: &Path) -> Result<Side> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::schema(path, e))?;
    let obj = doc.as_object().ok_or_else(|| Error::schema(path, "expected a JSON object"))?;
    let default_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut percent = [[0u64; 4]; 5];
    if let Some(dist) = obj.get("distribution") {
        for k in obj.keys() {
            if !["name", "distribution", "profile"].contains(&k.as_str()) {
                return Err(Error::schema(path, format!("unknown field `{k}`")));
            }
        }
        let dist = dist
            .as_object()
            .ok_or_else(|| Error::schema(path, "at `distribution`: expected an object"))?;
        for c in Criterion::ALL {
            let row = dist
                .get(c.name())
                .and_then(Value::as_object)
                .ok_or_else(|| Error::schema(path, format!("at `distribution`: missing criterion `{}`", c.name())))?;
            if let Some(k) = row.keys().find(|k| QualityLevel::ALL.iter().all(|l| l.name() != k.as_str())) {
                return Err(Error::schema(path, format!("at `distribution.{}`: unknown level `{k}`", c.name())));
            }
            for l in QualityLevel::ALL {
                let at = format!("distribution.{}.{}", c.name(), l.name());
                percent[c as usize][l as usize] = match row.get(l.name()) {
                    Some(v) => pct(v, &at, path)?,
                    None => 0,
                };
            }
        }
        if let Some(k) = dist.keys().find(|k| Criterion::parse(k).is_none()) {
            return Err(Error::schema(path, format!("at `distribution`: unknown criterion `{k}`")));
        }
        let name = match obj.get("name") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::schema(path, "at `name`: expected a string")),
            None => default_name,
        };
        return Ok(Side {
            name,
            distribution: LevelDistribution::from_percentages(percent),
            profile: obj.get("profile").cloned(),
        });
    }
    // metric report from `analyze --suite logiscope`
    let system = obj
        .get("entities")
        .and_then(Value::as_array)
        .and_then(|es| es.iter().find(|e| e.get("level") == Some(&json!("system"))))
        .and_then(|e| e.get("metrics"))
        .and_then(Value::as_object)
        .ok_or_else(|| Error::schema(path, "expected `distribution` or a logiscope report with a system row"))?;
    for c in Criterion::ALL {
        for l in QualityLevel::ALL {
            let key = format!("{}_{}_pct", c.name(), l.name());
            let v = system
                .get(&key)
                .ok_or_else(|| Error::schema(path, format!("report lacks `{key}`; run analyze with --suite logiscope")))?;
            percent[c as usize][l as usize] = pct(v, &key, path)?;
        }
    }
    Ok(Side {
        name: default_name,
        distribution: LevelDistribution::from_percentages(percent),
        profile: obj.get("meta").and_then(|m| m.get("thresholds")).cloned(),
    })
}

pub fn load_side(path: &Path) -> Result<Side> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_side(&text, path)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub a: Side,
    pub b: Side,
    pub ranking: [(Criterion, Winner); 5],
}

/// Fails when both sides record a threshold profile and they differ.
pub fn compare(a: Side, b: Side) -> Result<Comparison> {
    if let (Some(pa), Some(pb)) = (&a.profile, &b.profile) {
        if pa != pb {
            return Err(Error::analysis(format!(
                "`{}` and `{}` were computed with different threshold profiles",
                a.name, b.name
            )));
        }
    }
    let ranking = ranking_matrix(&a.distribution, &b.distribution);
    Ok(Comparison { a, b, ranking })
}

fn winner_name(w: Winner) -> &'static str {
    match w {
        Winner::First => "first",
        Winner::Second => "second",
        Winner::Both => "both",
    }
}

impl Comparison {
    fn side_json(s: &Side, c: Criterion, ticked: bool) -> Value {
        let mut m = Map::new();
        for l in QualityLevel::ALL {
            m.insert(l.name().into(), json!(s.distribution.percent(c, l)));
        }
        m.insert("bad".into(), json!(s.distribution.bad_percent(c)));
        m.insert("ranked".into(), json!(ticked));
        Value::Object(m)
    }

    pub fn to_json(&self) -> Value {
        let criteria: Vec<Value> = self
            .ranking
            .iter()
            .map(|(c, w)| {
                let (ta, tb) = w.marks();
                json!({
                    "criterion": c.name(),
                    "winner": winner_name(*w),
                    self.a.name.clone(): Self::side_json(&self.a, *c, ta),
                    self.b.name.clone(): Self::side_json(&self.b, *c, tb),
                })
            })
            .collect();
        json!({
            "schemaVersion": SCHEMA_VERSION,
            "first": self.a.name,
            "second": self.b.name,
            "criteria": criteria,
        })
    }

    /// `criterion,report,excellent,good,fair,poor,bad,ranked`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["criterion", "report", "excellent", "good", "fair", "poor", "bad", "ranked"])
            .map_err(csv_err)?;
        for (c, win) in &self.ranking {
            let (ta, tb) = win.marks();
            for (s, t) in [(&self.a, ta), (&self.b, tb)] {
                let mut rec = vec![c.name().to_string(), s.name.clone()];
                rec.extend(QualityLevel::ALL.iter().map(|l| s.distribution.percent(*c, *l).to_string()));
                rec.push(s.distribution.bad_percent(*c).to_string());
                rec.push(if t { "x".into() } else { String::new() });
                w.write_record(&rec).map_err(csv_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::analysis(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::analysis(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(name: &str, maint: [u64; 4]) -> String {
        let row = |p: [u64; 4]| json!({"excellent": p[0], "good": p[1], "fair": p[2], "poor": p[3]});
        json!({
            "name": name,
            "distribution": {
                "maintainability": row(maint), "analyzability": row([100, 0, 0, 0]),
                "changeability": row([100, 0, 0, 0]), "stability": row([100, 0, 0, 0]),
                "testability": row([100, 0, 0, 0]),
            }
        })
        .to_string()
    }

    #[test]
    fn identical_reports_tie_everywhere() {
        let p = Path::new("a.json");
        let a = parse_side(&doc("A", [50, 50, 0, 0]), p).unwrap();
        let c = compare(a.clone(), Side { name: "B".into(), ..a }).unwrap();
        assert!(c.ranking.iter().all(|(_, w)| *w == Winner::Both));
        let csv = c.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 11);
    }

    #[test]
    fn profile_mismatch_is_an_error() {
        let p = Path::new("a.json");
        let mut a = parse_side(&doc("A", [50, 50, 0, 0]), p).unwrap();
        let mut b = a.clone();
        a.profile = Some(json!({"bands": [0.5, 1.0]}));
        b.profile = Some(json!({"bands": [0.5, 2.0]}));
        assert!(compare(a, b).is_err());
    }

    #[test]
    fn schema_errors_name_the_spot() {
        let p = Path::new("a.json");
        let e = parse_side(&doc("A", [50, 50, 0, 0]).replace("\"poor\"", "\"awful\""), p).unwrap_err();
        assert!(e.to_string().contains("unknown level `awful`"), "{e}");
        assert!(parse_side(r#"{"distribution": {}}"#, p).is_err());
    }
}
