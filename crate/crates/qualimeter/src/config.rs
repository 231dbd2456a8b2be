//! Threshold profiles, QMOOD weights, detection rules and the run
//! configuration file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qualimeter_core::detect::{DetectionRule, Expr, Filter, FilterKind};
use qualimeter_core::maintain::{Bound, LevelCutoffs, LogiscopeMetric, ThresholdProfile};
use qualimeter_core::qmood::{Property, QmoodWeights, QualityAttribute};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::sources::InputMode;

pub const CONFIG_ENV: &str = "QUALIMETER_CONFIG";

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Deserializes with the failing JSON path in the message.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        if at == "." || at.is_empty() {
            Error::schema(path, inner)
        } else {
            Error::schema(path, format!("at `{at}`: {inner}"))
        }
    })
}

/// A bound endpoint: a number, or `"-inf"` / `"+inf"` / `"inf"`.
#[derive(Debug, Clone, Copy)]
struct Endpoint(f64);

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_f64()
                .filter(|v| v.is_finite())
                .map(Endpoint)
                .ok_or_else(|| D::Error::custom("bound is not a finite number")),
            Value::String(s) => match s.as_str() {
                "-inf" => Ok(Endpoint(f64::NEG_INFINITY)),
                "+inf" | "inf" => Ok(Endpoint(f64::INFINITY)),
                _ => Err(D::Error::custom(format!("expected a number, \"-inf\" or \"+inf\", got `{s}`"))),
            },
            other => Err(D::Error::custom(format!("expected a number, got {other}"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundJson {
    min: Option<Endpoint>,
    max: Option<Endpoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct ProfileJson {
    #[serde(default)]
    bounds: BTreeMap<String, BoundJson>,
    bands: Option<[f64; 2]>,
    criterion_levels: Option<[f64; 3]>,
    factor_levels: Option<[f64; 3]>,
}

fn ascending(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite()) && v.windows(2).all(|w| w[0] <= w[1])
}

/// Parses a thresholds document, merging it over the default profile.
pub fn parse_profile(text: &str, path: &Path) -> Result<ThresholdProfile> {
    let doc: ProfileJson = from_json(text, path)?;
    let mut profile = ThresholdProfile::default();
    for (name, b) in doc.bounds {
        let m = LogiscopeMetric::parse(&name)
            .ok_or_else(|| Error::schema(path, format!("at `bounds.{name}`: unknown metric")))?;
        let old = profile.bounds.get(&m).copied().unwrap_or(Bound::new(f64::NEG_INFINITY, f64::INFINITY));
        profile.bounds.insert(
            m,
            Bound::new(b.min.map_or(old.min, |e| e.0), b.max.map_or(old.max, |e| e.0)),
        );
    }
    if let Some(b) = doc.bands {
        if !ascending(&b) || b[0] <= 0.0 {
            return Err(Error::schema(path, "at `bands`: ratios must be positive and ascending"));
        }
        profile.band_ratios = b;
    }
    for (key, v, slot) in [
        ("criterionLevels", doc.criterion_levels, &mut profile.criterion_levels),
        ("factorLevels", doc.factor_levels, &mut profile.factor_levels),
    ] {
        if let Some(c) = v {
            if !ascending(&c) {
                return Err(Error::schema(path, format!("at `{key}`: cut-offs must be ascending")));
            }
            *slot = LevelCutoffs(c);
        }
    }
    profile.check().map_err(|e| Error::schema(path, e))?;
    Ok(profile)
}

pub fn load_profile(path: &Path) -> Result<ThresholdProfile> {
    parse_profile(&read(path)?, path)
}

/// `{attribute: {property-or-metric: coefficient}}`; a listed attribute
/// replaces its whole row, unlisted ones keep the defaults.
pub fn parse_weights(text: &str, path: &Path) -> Result<QmoodWeights> {
    let doc: BTreeMap<String, BTreeMap<String, f64>> = from_json(text, path)?;
    let mut w = QmoodWeights::default();
    for (attr, row) in doc {
        let a = QualityAttribute::parse(&attr)
            .ok_or_else(|| Error::schema(path, format!("at `{attr}`: unknown quality attribute")))?;
        for p in Property::ALL {
            w.set(a, p, 0.0);
        }
        for (prop, c) in row {
            let p = Property::parse(&prop)
                .ok_or_else(|| Error::schema(path, format!("at `{attr}.{prop}`: unknown design property")))?;
            if !c.is_finite() {
                return Err(Error::schema(path, format!("at `{attr}.{prop}`: coefficient is not finite")));
            }
            w.set(a, p, c);
        }
    }
    Ok(w)
}

pub fn load_weights(path: &Path) -> Result<QmoodWeights> {
    parse_weights(&read(path)?, path)
}

fn schema_at(path: &Path, at: &str, msg: impl std::fmt::Display) -> Error {
    Error::schema(path, format!("at `{at}`: {msg}"))
}

fn to_expr(v: &Value, at: &str, path: &Path) -> Result<Expr> {
    let obj = v.as_object().ok_or_else(|| schema_at(path, at, "expected an object"))?;
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    match keys.as_slice() {
        ["and"] | ["or"] => {
            let key = keys[0];
            let xs = obj[key]
                .as_array()
                .ok_or_else(|| schema_at(path, &format!("{at}.{key}"), "expected an array"))?;
            if xs.is_empty() {
                return Err(schema_at(path, &format!("{at}.{key}"), "empty expression"));
            }
            let kids = xs
                .iter()
                .enumerate()
                .map(|(i, x)| to_expr(x, &format!("{at}.{key}[{i}]"), path))
                .collect::<Result<Vec<_>>>()?;
            Ok(if key == "and" { Expr::And(kids) } else { Expr::Or(kids) })
        }
        _ => {
            let mut sorted = keys.clone();
            sorted.sort_unstable();
            if sorted != ["metric", "op", "value"] {
                return Err(schema_at(
                    path,
                    at,
                    "expected {\"and\": [...]}, {\"or\": [...]} or {\"metric\", \"op\", \"value\"}",
                ));
            }
            let metric = obj["metric"]
                .as_str()
                .ok_or_else(|| schema_at(path, &format!("{at}.metric"), "expected a string"))?;
            let op = obj["op"]
                .as_str()
                .ok_or_else(|| schema_at(path, &format!("{at}.op"), "expected a string"))?;
            let value = obj["value"]
                .as_f64()
                .ok_or_else(|| schema_at(path, &format!("{at}.value"), "expected a number"))?;
            let kind = FilterKind::from_op(op, value).map_err(|e| schema_at(path, at, e))?;
            Ok(Expr::Leaf(Filter::new(metric, kind)))
        }
    }
}

/// An array of `{"name", "expr"}` rules, optionally wrapped as `{"rules": [...]}`.
pub fn parse_rules(text: &str, path: &Path) -> Result<Vec<DetectionRule>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::schema(path, e))?;
    let (list, prefix) = match &doc {
        Value::Array(a) => (a, String::new()),
        Value::Object(o) if o.len() == 1 && o.contains_key("rules") => match &o["rules"] {
            Value::Array(a) => (a, "rules".to_string()),
            _ => return Err(schema_at(path, "rules", "expected an array")),
        },
        _ => return Err(Error::schema(path, "expected an array of rules or {\"rules\": [...]}")),
    };
    list.iter()
        .enumerate()
        .map(|(i, r)| {
            let at = format!("{prefix}[{i}]");
            let obj = r.as_object().ok_or_else(|| schema_at(path, &at, "expected an object"))?;
            if let Some(k) = obj.keys().find(|k| *k != "name" && *k != "expr") {
                return Err(schema_at(path, &at, format!("unknown field `{k}`")));
            }
            let name = obj
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| schema_at(path, &format!("{at}.name"), "expected a string"))?;
            let expr = obj.get("expr").ok_or_else(|| schema_at(path, &at, "missing field `expr`"))?;
            Ok(DetectionRule::new(name, to_expr(expr, &format!("{at}.expr"), path)?))
        })
        .collect()
}

pub fn load_rules(path: &Path) -> Result<Vec<DetectionRule>> {
    parse_rules(&read(path)?, path)
}

/// The run configuration file. Every key mirrors a command-line flag;
/// flags win over the file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RunConfig {
    pub thresholds: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub seed: Option<u64>,
    pub clpm_percent: Option<bool>,
    pub cbo_bidirectional: Option<bool>,
    pub noc_interfaces: Option<bool>,
    pub nom_constructors: Option<bool>,
    pub input_mode: Option<InputMode>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Loads `path`, resolving relative file keys against its directory.
    /// A missing or malformed file is a usage error.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config `{}`: {e}", path.display())))?;
        let mut cfg: RunConfig = from_json(&text, path).map_err(|e| Error::Usage(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.thresholds, &mut cfg.weights, &mut cfg.rules, &mut cfg.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("t.json")
    }

    #[test]
    fn profile_merges_over_default() {
        let prof = parse_profile(r#"{"bounds": {"cl_wmc": {"max": 40}, "cl_comm": {"min": "-inf", "max": 9}}}"#, p()).unwrap();
        assert_eq!(prof.bounds[&LogiscopeMetric::ClWmc], Bound::new(0.0, 40.0));
        assert_eq!(prof.bounds[&LogiscopeMetric::ClComm].max, 9.0);
        assert_eq!(prof.bounds[&LogiscopeMetric::ClData], Bound::new(0.0, 7.0));
    }

    #[test]
    fn profile_rejects_bad_input() {
        assert!(parse_profile(r#"{"bounds": {"nope": {"max": 1}}}"#, p()).is_err());
        assert!(parse_profile(r#"{"bounds": {"cl_wmc": {"min": 5, "max": 1}}}"#, p()).is_err());
        let e = parse_profile(r#"{"bounds": {"cl_wmc": {"max": "lots"}}}"#, p()).unwrap_err();
        assert!(e.to_string().contains("bounds.cl_wmc.max"), "{e}");
        assert!(parse_profile(r#"{"extra": 1}"#, p()).is_err());
    }

    #[test]
    fn weights_replace_rows() {
        let w = parse_weights(r#"{"reusability": {"DSC": 1.0}}"#, p()).unwrap();
        let a = QualityAttribute::parse("reusability").unwrap();
        for prop in Property::ALL {
            let want = if prop.metric() == "DSC" { 1.0 } else { 0.0 };
            assert_eq!(w.coefficient(a, prop), want);
        }
        let f = QualityAttribute::parse("flexibility").unwrap();
        assert_eq!(w.0[f as usize], QmoodWeights::default().0[f as usize]);
        assert!(parse_weights(r#"{"beauty": {}}"#, p()).is_err());
    }

    #[test]
    fn rules_nest() {
        let rules = parse_rules(
            r#"{"rules": [{"name": "r", "expr": {"and": [
                {"metric": "wmc", "op": "higherThan", "value": 10},
                {"or": [{"metric": "tcc", "op": "lowerThan", "value": 0.5}]}
            ]}}]}"#,
            p(),
        )
        .unwrap();
        assert_eq!(rules[0].expr.leaves().len(), 2);
        assert!(parse_rules(r#"[{"name": "r", "expr": {"and": []}}]"#, p()).is_err());
        assert!(parse_rules(r#"[{"name": "r", "expr": {"metric": "x", "op": "near", "value": 1}}]"#, p()).is_err());
    }

    #[test]
    fn run_config_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.json");
        fs::write(&path, r#"{"thresholds": "th.json", "seed": 7}"#).unwrap();
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.thresholds.unwrap(), dir.path().join("th.json"));
        assert_eq!(cfg.seed, Some(7));
        fs::write(&path, r#"{"sede": 7}"#).unwrap();
        assert_eq!(RunConfig::load(&path).unwrap_err().exit_code(), 2);
    }
}
