//! Metric suites and their JSON / CSV rendering.
//!
//! Every suite yields rows keyed by `(level, entity)`; rows from several
//! suites for the same entity are merged, so one CSV line carries all of a
//! class's metrics.

use serde_json::{json, Map, Value};

use qualimeter_core::ck::{ck_metrics, CkMetrics, CkOptions};
use qualimeter_core::complexity::{
    cyclomatic, halstead_volume, maintainability_index, system_complexity_summary, system_mi_inputs, MiInputs,
};
use qualimeter_core::detect::{self, DetectionRule, Flagged, Scope};
use qualimeter_core::maintain::{
    classify_all, distribution_of, kiviat_status, Criterion, LogiscopeMetric, LogiscopeOptions, QualityLevel,
    ThresholdProfile,
};
use qualimeter_core::model::ClassModel;
use qualimeter_core::mood::{mood_report, MoodReport};
use qualimeter_core::qmood::{design_properties, quality_indexes, Property, QmoodWeights, QualityAttribute};

use crate::error::{Error, Result};
use crate::number;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Ck,
    Mood,
    Qmood,
    Logiscope,
    Complexity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Ck, Suite::Mood, Suite::Qmood, Suite::Logiscope, Suite::Complexity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ck => "ck",
            Suite::Mood => "mood",
            Suite::Qmood => "qmood",
            Suite::Logiscope => "logiscope",
            Suite::Complexity => "complexity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Four decimals; `None` renders as `null` / empty.
    Real(Option<f64>),
    Text(String),
}

impl Cell {
    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(r) => number::real(*r),
            Cell::Text(t) => json!(t),
        }
    }

    pub fn to_csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(r) => number::cell(*r),
            Cell::Text(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    System,
    Class,
    Method,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::System => "system",
            Level::Class => "class",
            Level::Method => "method",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub entity: String,
    pub level: Level,
    pub metrics: Vec<(String, Cell)>,
}

impl Row {
    pub fn get(&self, metric: &str) -> Option<&Cell> {
        self.metrics.iter().find(|(k, _)| k == metric).map(|(_, c)| c)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricReport {
    pub suites: Vec<Suite>,
    pub rows: Vec<Row>,
    /// Free-form context (threshold profile, distributions, notes).
    pub meta: Map<String, Value>,
}

impl MetricReport {
    pub fn row(&self, level: Level, entity: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.level == level && r.entity == entity)
    }

    fn add(&mut self, level: Level, entity: &str, metrics: impl IntoIterator<Item = (String, Cell)>) {
        let idx = match self.rows.iter().position(|r| r.level == level && r.entity == entity) {
            Some(i) => i,
            None => {
                self.rows.push(Row {
                    entity: entity.to_string(),
                    level,
                    metrics: Vec::new(),
                });
                self.rows.len() - 1
            }
        };
        self.rows[idx].metrics.extend(metrics);
    }

    /// Metric names in first-seen order across all rows.
    pub fn columns(&self) -> Vec<&str> {
        let mut cols: Vec<&str> = Vec::new();
        for r in &self.rows {
            for (k, _) in &r.metrics {
                if !cols.contains(&k.as_str()) {
                    cols.push(k);
                }
            }
        }
        cols
    }

    pub fn to_json(&self) -> Value {
        let entities: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let metrics: Map<String, Value> = r.metrics.iter().map(|(k, c)| (k.clone(), c.to_json())).collect();
                json!({"entity": r.entity, "level": r.level.name(), "metrics": metrics})
            })
            .collect();
        json!({
            "schemaVersion": SCHEMA_VERSION,
            "suites": self.suites.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "meta": self.meta,
            "entities": entities,
        })
    }

    /// `entity,level,<metric columns>`; cells a row lacks are empty.
    pub fn to_csv(&self) -> Result<String> {
        let cols = self.columns();
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = ["entity", "level"].into_iter().chain(cols.iter().copied());
        w.write_record(header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec = vec![r.entity.clone(), r.level.name().to_string()];
            rec.extend(cols.iter().map(|c| r.get(c).map(Cell::to_csv).unwrap_or_default()));
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::analysis(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::analysis(e.to_string()))
    }

    fn sort(&mut self) {
        self.rows
            .sort_by(|a, b| a.level.cmp(&b.level).then_with(|| a.entity.cmp(&b.entity)));
    }
}

pub fn csv_err(e: csv::Error) -> Error {
    Error::analysis(format!("csv: {e}"))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalysisOptions {
    pub ck: CkOptions,
    pub bases_include_interfaces: bool,
    pub profile: ThresholdProfile,
    pub weights: QmoodWeights,
    /// Replaces the MI inputs derived from the model.
    pub mi: Option<MiInputs>,
}

impl AnalysisOptions {
    pub fn logiscope(&self) -> LogiscopeOptions {
        LogiscopeOptions {
            ck: self.ck,
            bases_include_interfaces: self.bases_include_interfaces,
        }
    }
}

fn int(k: &str, v: u64) -> (String, Cell) {
    (k.to_string(), Cell::Int(v as i64))
}

fn real(k: &str, v: Option<f64>) -> (String, Cell) {
    (k.to_string(), Cell::Real(v))
}

fn text(k: &str, v: &str) -> (String, Cell) {
    (k.to_string(), Cell::Text(v.to_string()))
}

/// Runs `suites` over `model`. Duplicate suites are ignored.
pub fn analyze(model: &ClassModel, suites: &[Suite], opts: &AnalysisOptions) -> Result<MetricReport> {
    let mut suites = suites.to_vec();
    suites.sort();
    suites.dedup();
    let mut report = MetricReport {
        suites: suites.clone(),
        ..Default::default()
    };
    for s in suites {
        match s {
            Suite::Ck => ck_suite(model, opts, &mut report),
            Suite::Mood => mood_suite(model, &mut report),
            Suite::Qmood => qmood_suite(model, opts, &mut report)?,
            Suite::Logiscope => logiscope_suite(model, opts, &mut report)?,
            Suite::Complexity => complexity_suite(model, opts, &mut report),
        }
    }
    report.sort();
    Ok(report)
}

fn ck_suite(model: &ClassModel, opts: &AnalysisOptions, report: &mut MetricReport) {
    for t in model.types() {
        let m = ck_metrics(model, t, &opts.ck);
        let cells = CkMetrics::NAMES.iter().zip(m.values()).map(|(k, v)| int(k, v));
        report.add(Level::Class, &t.qualified_name, cells.collect::<Vec<_>>());
    }
}

fn mood_suite(model: &ClassModel, report: &mut MetricReport) {
    let m = mood_report(model);
    let cells = MoodReport::NAMES.iter().zip(m.values()).map(|(k, v)| real(k, v));
    report.add(Level::System, "system", cells.collect::<Vec<_>>());
}

fn qmood_suite(model: &ClassModel, opts: &AnalysisOptions, report: &mut MetricReport) -> Result<()> {
    let props = design_properties(model).map_err(Error::analysis)?;
    let q = quality_indexes(&props, &opts.weights);
    let mut cells: Vec<_> = Property::ALL.iter().map(|p| real(p.metric(), Some(props.get(*p)))).collect();
    cells.extend(QualityAttribute::ALL.iter().map(|a| real(a.name(), Some(q.get(*a)))));
    cells.push(real("tqi", Some(q.tqi)));
    report.add(Level::System, "system", cells);
    Ok(())
}

fn logiscope_suite(model: &ClassModel, opts: &AnalysisOptions, report: &mut MetricReport) -> Result<()> {
    let profile = &opts.profile;
    let classified = classify_all(model, profile, &opts.logiscope()).map_err(Error::analysis)?;
    for (name, metrics, scores) in &classified {
        let status = kiviat_status(metrics, profile).map_err(Error::analysis)?;
        let mut cells = Vec::new();
        for m in LogiscopeMetric::ALL {
            cells.push(real(m.name(), Some(metrics.get(m))));
        }
        for (m, s) in LogiscopeMetric::ALL.iter().zip(status) {
            cells.push((format!("{}_status", m.name()), Cell::Int(s as i64)));
        }
        for c in Criterion::ALL {
            cells.push(real(&format!("{}_score", c.name()), Some(scores.score(c))));
            if let Some(l) = scores.level(c) {
                cells.push(text(&format!("{}_level", c.name()), l.name()));
            }
        }
        report.add(Level::Class, name, cells);
    }
    if !classified.is_empty() {
        let dist = distribution_of(classified.iter().map(|(_, _, c)| c));
        let mut cells = Vec::new();
        for c in Criterion::ALL {
            for l in QualityLevel::ALL {
                cells.push(int(&format!("{}_{}_pct", c.name(), l.name()), dist.percent(c, l)));
            }
            cells.push(int(&format!("{}_bad_pct", c.name()), dist.bad_percent(c)));
        }
        report.add(Level::System, "system", cells);
    }
    report.meta.insert("thresholds".into(), profile_json(profile));
    Ok(())
}

fn bound_json(v: f64) -> Value {
    if v.is_finite() {
        number::real(Some(v))
    } else if v > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

/// The profile in the same shape the thresholds file accepts.
pub fn profile_json(profile: &ThresholdProfile) -> Value {
    let bounds: Map<String, Value> = profile
        .bounds
        .iter()
        .map(|(m, b)| (m.name().to_string(), json!({"min": bound_json(b.min), "max": bound_json(b.max)})))
        .collect();
    let reals = |xs: &[f64]| -> Value { xs.iter().map(|x| number::real(Some(*x))).collect() };
    json!({
        "bounds": bounds,
        "bands": reals(&profile.band_ratios),
        "criterionLevels": reals(&profile.criterion_levels.0),
        "factorLevels": reals(&profile.factor_levels.0),
    })
}

fn complexity_suite(model: &ClassModel, opts: &AnalysisOptions, report: &mut MetricReport) {
    for t in model.types() {
        for m in &t.methods {
            let entity = format!("{}#{}", t.qualified_name, m.signature());
            report.add(
                Level::Method,
                &entity,
                [int("vg", cyclomatic(m)), real("hv", halstead_volume(&m.halstead).ok())],
            );
        }
    }
    let s = system_complexity_summary(model);
    let mi_inputs = opts.mi.or_else(|| system_mi_inputs(model.types().iter().flat_map(|t| &t.methods)));
    report.add(
        Level::System,
        "system",
        [
            int("sumVg", s.sum_vg),
            real("avgVg", s.avg_vg),
            int("functionCount", s.function_count),
            real("mi", mi_inputs.as_ref().map(maintainability_index)),
        ],
    );
    report.meta.insert("unsupported".into(), json!(["evg", "ivg"]));
}

/// Detection results for a set of rules.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub results: Vec<(DetectionRule, Scope, Vec<Flagged>)>,
}

pub fn detect(model: &ClassModel, rules: &[DetectionRule], ck: &CkOptions) -> Result<DetectionReport> {
    let class_table = detect::class_metric_table(model, ck);
    let method_table = detect::method_metric_table(model);
    let mut results = Vec::new();
    for r in rules {
        let scope = detect::rule_scope(r).map_err(|e| Error::Usage(format!("rule `{}`: {e}", r.name)))?;
        let table = match scope {
            Scope::Class => &class_table,
            Scope::Method => &method_table,
        };
        let flagged = detect::evaluate_rule(r, table).map_err(|e| Error::Usage(format!("rule `{}`: {e}", r.name)))?;
        results.push((r.clone(), scope, flagged));
    }
    Ok(DetectionReport { results })
}

impl DetectionReport {
    pub fn to_json(&self) -> Value {
        let rules: Vec<Value> = self
            .results
            .iter()
            .map(|(rule, scope, flagged)| {
                let hits: Vec<Value> = flagged
                    .iter()
                    .map(|f| {
                        let ev: Vec<Value> = f
                            .evidence
                            .iter()
                            .map(|e| {
                                json!({
                                    "metric": e.metric,
                                    "filter": e.filter.to_string(),
                                    "value": number::real(e.value),
                                    "passed": e.passed,
                                })
                            })
                            .collect();
                        json!({"entity": f.entity, "evidence": ev})
                    })
                    .collect();
                json!({
                    "rule": rule.name,
                    "scope": match scope { Scope::Class => "class", Scope::Method => "method" },
                    "flagged": hits,
                })
            })
            .collect();
        json!({"schemaVersion": SCHEMA_VERSION, "rules": rules})
    }

    /// One line per flagged entity and leaf filter.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["rule", "entity", "metric", "filter", "value", "passed"])
            .map_err(csv_err)?;
        for (rule, _, flagged) in &self.results {
            for f in flagged {
                for e in &f.evidence {
                    w.write_record([
                        rule.name.as_str(),
                        &f.entity,
                        &e.metric,
                        &e.filter.to_string(),
                        &number::cell(e.value),
                        if e.passed { "true" } else { "false" },
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::analysis(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::analysis(e.to_string()))
    }
}
