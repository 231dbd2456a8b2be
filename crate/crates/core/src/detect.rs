//! Metric-based detection strategies.
//!
//! A rule is a tree of marginal filters joined by `and` (intersection) and
//! `or` (union). Relative filters (`top*`/`bottom*`) are cut against the
//! whole population before the tree is combined; ties at the cut go to the
//! entity whose name sorts first, and percentage cuts round up.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cmp::Ordering;
use core::fmt;

use crate::ck::{cbo, cohesion_pairs, dit, instance_field_usage, lcom, noc, nom, rfc, wmc, CkOptions};
use crate::complexity::cyclomatic;
use crate::model::{ClassModel, MethodDecl, TypeDecl};

/// Access To Foreign Data: distinct other declared classes whose fields
/// this class's methods read or write.
pub fn atfd(model: &ClassModel, ty: &TypeDecl) -> u64 {
    ty.methods
        .iter()
        .flat_map(|m| &m.accessed_fields)
        .filter(|a| a.owner != ty.qualified_name && model.is_declared(&a.owner))
        .map(|a| a.owner.as_str())
        .collect::<BTreeSet<_>>()
        .len() as u64
}

/// Tight Class Cohesion: share of method pairs using a common instance
/// field. `None` with fewer than two eligible methods.
pub fn tcc(ty: &TypeDecl) -> Option<f64> {
    let pairs = cohesion_pairs(&instance_field_usage(ty));
    let total = pairs.p + pairs.q;
    (total > 0).then(|| pairs.q as f64 / total as f64)
}

/// Distinct own and foreign fields touched by one method.
pub fn method_access_counts(model: &ClassModel, owner: &TypeDecl, m: &MethodDecl) -> (u64, u64) {
    let own: BTreeSet<&str> = m
        .accessed_fields
        .iter()
        .filter(|a| a.owner == owner.qualified_name)
        .map(|a| a.member.as_str())
        .collect();
    let foreign: BTreeSet<(&str, &str)> = m
        .accessed_fields
        .iter()
        .filter(|a| a.owner != owner.qualified_name && model.is_declared(&a.owner))
        .map(|a| (a.owner.as_str(), a.member.as_str()))
        .collect();
    (own.len() as u64, foreign.len() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterKind {
    HigherThan(f64),
    LowerThan(f64),
    TopCount(u64),
    TopPercent(f64),
    BottomCount(u64),
    BottomPercent(f64),
}

impl FilterKind {
    pub fn op_name(&self) -> &'static str {
        match self {
            FilterKind::HigherThan(_) => "higherThan",
            FilterKind::LowerThan(_) => "lowerThan",
            FilterKind::TopCount(_) => "topCount",
            FilterKind::TopPercent(_) => "topPercent",
            FilterKind::BottomCount(_) => "bottomCount",
            FilterKind::BottomPercent(_) => "bottomPercent",
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            FilterKind::HigherThan(t) | FilterKind::LowerThan(t) => t,
            FilterKind::TopCount(k) | FilterKind::BottomCount(k) => k as f64,
            FilterKind::TopPercent(p) | FilterKind::BottomPercent(p) => p,
        }
    }

    pub fn from_op(op: &str, value: f64) -> Result<Self, DetectError> {
        let count = || {
            if value >= 1.0 && libm::trunc(value) == value {
                Ok(value as u64)
            } else {
                Err(DetectError::BadParameter(format!("{op}({value})")))
            }
        };
        let kind = match op {
            "higherThan" => FilterKind::HigherThan(value),
            "lowerThan" => FilterKind::LowerThan(value),
            "topCount" => FilterKind::TopCount(count()?),
            "bottomCount" => FilterKind::BottomCount(count()?),
            "topPercent" => FilterKind::TopPercent(value),
            "bottomPercent" => FilterKind::BottomPercent(value),
            _ => return Err(DetectError::UnknownOperator(op.to_string())),
        };
        kind.check()?;
        Ok(kind)
    }

    fn check(&self) -> Result<(), DetectError> {
        let ok = match *self {
            FilterKind::HigherThan(t) | FilterKind::LowerThan(t) => t.is_finite(),
            FilterKind::TopCount(k) | FilterKind::BottomCount(k) => k >= 1,
            FilterKind::TopPercent(p) | FilterKind::BottomPercent(p) => p > 0.0 && p <= 100.0,
        };
        if ok {
            Ok(())
        } else {
            Err(DetectError::BadParameter(format!("{self}")))
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.op_name(), self.parameter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    pub metric: String,
    pub kind: FilterKind,
}

impl Filter {
    pub fn new(metric: impl Into<String>, kind: FilterKind) -> Self {
        Filter {
            metric: metric.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Leaf(Filter),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn leaves(&self) -> Vec<&Filter> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Filter>) {
        match self {
            Expr::Leaf(f) => out.push(f),
            Expr::And(xs) | Expr::Or(xs) => xs.iter().for_each(|x| x.collect_leaves(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRule {
    pub name: String,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error("rule references unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("unknown filter operator `{0}`")]
    UnknownOperator(String),
    #[error("invalid filter parameter {0}")]
    BadParameter(String),
    #[error("rule `{0}` has an empty expression")]
    EmptyExpression(String),
}

impl DetectionRule {
    pub fn new(name: impl Into<String>, expr: Expr) -> Self {
        DetectionRule {
            name: name.into(),
            expr,
        }
    }

    /// Checks structural invariants and that every leaf metric exists in `table`.
    pub fn validate(&self, table: &MetricTable) -> Result<(), DetectError> {
        fn non_empty(e: &Expr) -> bool {
            match e {
                Expr::Leaf(_) => true,
                Expr::And(xs) | Expr::Or(xs) => !xs.is_empty() && xs.iter().all(non_empty),
            }
        }
        if !non_empty(&self.expr) {
            return Err(DetectError::EmptyExpression(self.name.clone()));
        }
        for leaf in self.expr.leaves() {
            leaf.kind.check()?;
            if !table.metrics.contains(&leaf.metric) {
                return Err(DetectError::UnknownMetric(leaf.metric.clone()));
            }
        }
        Ok(())
    }

    pub fn metrics(&self) -> BTreeSet<&str> {
        self.expr.leaves().into_iter().map(|f| f.metric.as_str()).collect()
    }
}

/// Named entities with per-metric values. A metric in the schema may be
/// absent for an entity (undefined value); such entities never pass a
/// filter on it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricTable {
    pub metrics: BTreeSet<String>,
    pub entities: Vec<Entity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub name: String,
    pub values: BTreeMap<String, f64>,
}

impl MetricTable {
    pub fn with_metrics<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        MetricTable {
            metrics: names.into_iter().map(ToString::to_string).collect(),
            entities: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, values: impl IntoIterator<Item = (&'static str, Option<f64>)>) {
        let values = values
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect();
        self.entities.push(Entity {
            name: name.into(),
            values,
        });
    }

    pub fn value(&self, entity: usize, metric: &str) -> Option<f64> {
        self.entities[entity].values.get(metric).copied()
    }
}

/// Entities (by index) selected by one filter.
pub fn filter_set(filter: &Filter, table: &MetricTable) -> BTreeSet<usize> {
    let population: Vec<(usize, f64)> = table
        .entities
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.values.get(&filter.metric).map(|v| (i, *v)))
        .filter(|(_, v)| !v.is_nan())
        .collect();
    let n = population.len();
    let cut = |k: u64| (k as usize).min(n);
    let pct = |p: f64| libm::ceil(p / 100.0 * n as f64) as usize;
    let ranked = |descending: bool, take: usize| -> BTreeSet<usize> {
        let mut sorted = population.clone();
        sorted.sort_by(|a, b| {
            let ord = a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal);
            let ord = if descending { ord.reverse() } else { ord };
            ord.then_with(|| table.entities[a.0].name.cmp(&table.entities[b.0].name))
        });
        sorted.into_iter().take(take.min(n)).map(|(i, _)| i).collect()
    };
    match filter.kind {
        FilterKind::HigherThan(t) => population.iter().filter(|(_, v)| *v > t).map(|(i, _)| *i).collect(),
        FilterKind::LowerThan(t) => population.iter().filter(|(_, v)| *v < t).map(|(i, _)| *i).collect(),
        FilterKind::TopCount(k) => ranked(true, cut(k)),
        FilterKind::BottomCount(k) => ranked(false, cut(k)),
        FilterKind::TopPercent(p) => ranked(true, pct(p)),
        FilterKind::BottomPercent(p) => ranked(false, pct(p)),
    }
}

fn eval(expr: &Expr, leaf_sets: &[BTreeSet<usize>], next: &mut usize) -> BTreeSet<usize> {
    match expr {
        Expr::Leaf(_) => {
            let s = leaf_sets[*next].clone();
            *next += 1;
            s
        }
        Expr::And(xs) => {
            let mut acc: Option<BTreeSet<usize>> = None;
            for x in xs {
                let s = eval(x, leaf_sets, next);
                acc = Some(match acc {
                    None => s,
                    Some(a) => a.intersection(&s).copied().collect(),
                });
            }
            acc.unwrap_or_default()
        }
        Expr::Or(xs) => {
            let mut acc = BTreeSet::new();
            for x in xs {
                acc.extend(eval(x, leaf_sets, next));
            }
            acc
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub metric: String,
    pub filter: FilterKind,
    pub value: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flagged {
    pub entity: String,
    pub evidence: Vec<Evidence>,
}

/// Flagged entities in name order, each with every leaf's value and verdict.
pub fn evaluate_rule(rule: &DetectionRule, table: &MetricTable) -> Result<Vec<Flagged>, DetectError> {
    rule.validate(table)?;
    let leaves = rule.expr.leaves();
    let leaf_sets: Vec<BTreeSet<usize>> = leaves.iter().map(|f| filter_set(f, table)).collect();
    let mut next = 0;
    let hits = eval(&rule.expr, &leaf_sets, &mut next);
    let mut out: Vec<Flagged> = hits
        .into_iter()
        .map(|i| Flagged {
            entity: table.entities[i].name.clone(),
            evidence: leaves
                .iter()
                .zip(&leaf_sets)
                .map(|(f, s)| Evidence {
                    metric: f.metric.clone(),
                    filter: f.kind,
                    value: table.value(i, &f.metric),
                    passed: s.contains(&i),
                })
                .collect(),
        })
        .collect();
    out.sort_by(|a, b| a.entity.cmp(&b.entity));
    Ok(out)
}

/// Class-level detection metrics.
pub const CLASS_METRICS: [&str; 9] = ["atfd", "tcc", "wmc", "dit", "noc", "cbo", "rfc", "lcom", "nom"];
/// Method-level detection metrics.
pub const METHOD_METRICS: [&str; 5] = ["methodLoc", "methodVg", "foreignAccess", "ownAccess", "envyMargin"];

pub fn class_metric_table(model: &ClassModel, opts: &CkOptions) -> MetricTable {
    let mut table = MetricTable::with_metrics(CLASS_METRICS);
    for t in model.types() {
        let n = &t.qualified_name;
        table.push(
            n.clone(),
            [
                ("atfd", Some(atfd(model, t) as f64)),
                ("tcc", tcc(t)),
                ("wmc", Some(wmc(t, opts) as f64)),
                ("dit", Some(dit(model, n) as f64)),
                ("noc", Some(noc(model, n, opts) as f64)),
                ("cbo", Some(cbo(model, t, opts) as f64)),
                ("rfc", Some(rfc(t, opts) as f64)),
                ("lcom", Some(lcom(t).0 as f64)),
                ("nom", Some(nom(t, opts) as f64)),
            ],
        );
    }
    table
}

/// Method entities are named `Owner#name(params)`.
pub fn method_metric_table(model: &ClassModel) -> MetricTable {
    let mut table = MetricTable::with_metrics(METHOD_METRICS);
    for t in model.types() {
        for m in &t.methods {
            let (own, foreign) = method_access_counts(model, t, m);
            table.push(
                format!("{}#{}", t.qualified_name, m.signature()),
                [
                    ("methodLoc", Some(m.lines.code as f64)),
                    ("methodVg", Some(cyclomatic(m) as f64)),
                    ("foreignAccess", Some(foreign as f64)),
                    ("ownAccess", Some(own as f64)),
                    ("envyMargin", Some(foreign as f64 - own as f64)),
                ],
            );
        }
    }
    table
}

/// Which table a rule runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Class,
    Method,
}

/// Resolves the scope of a rule from its metric names.
pub fn rule_scope(rule: &DetectionRule) -> Result<Scope, DetectError> {
    let metrics = rule.metrics();
    if metrics.iter().all(|m| CLASS_METRICS.contains(m)) {
        Ok(Scope::Class)
    } else if metrics.iter().all(|m| METHOD_METRICS.contains(m)) {
        Ok(Scope::Method)
    } else {
        let unknown = metrics
            .iter()
            .find(|m| !CLASS_METRICS.contains(m) && !METHOD_METRICS.contains(m))
            .or_else(|| metrics.iter().next())
            .map(|m| m.to_string())
            .unwrap_or_default();
        Err(DetectError::UnknownMetric(unknown))
    }
}

pub fn god_class() -> DetectionRule {
    DetectionRule::new(
        "GodClass",
        Expr::And(vec![
            Expr::Leaf(Filter::new("atfd", FilterKind::TopPercent(20.0))),
            Expr::Leaf(Filter::new("wmc", FilterKind::HigherThan(47.0))),
            Expr::Leaf(Filter::new("tcc", FilterKind::LowerThan(0.33))),
        ]),
    )
}

pub fn long_method() -> DetectionRule {
    DetectionRule::new(
        "LongMethod",
        Expr::Or(vec![
            Expr::Leaf(Filter::new("methodLoc", FilterKind::HigherThan(80.0))),
            Expr::Leaf(Filter::new("methodVg", FilterKind::HigherThan(10.0))),
        ]),
    )
}

/// Foreign field accesses exceed own ones by at least 3.
pub fn feature_envy() -> DetectionRule {
    DetectionRule::new(
        "FeatureEnvy",
        Expr::Leaf(Filter::new("envyMargin", FilterKind::HigherThan(2.0))),
    )
}

pub fn builtin_rules() -> Vec<DetectionRule> {
    vec![god_class(), long_method(), feature_envy()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FieldDecl, MemberRef, Visibility};

    fn table(values: &[(&str, f64)]) -> MetricTable {
        let mut t = MetricTable::with_metrics(["x"]);
        for (n, v) in values {
            t.push(*n, [("x", Some(*v))]);
        }
        t
    }

    fn names(flags: &[Flagged]) -> Vec<&str> {
        flags.iter().map(|f| f.entity.as_str()).collect()
    }

    #[test]
    fn atfd_counts_foreign_owners() {
        let mut m = MethodDecl::new("m", Visibility::Public);
        m.accessed_fields = vec![
            MemberRef::new("Other", "x"),
            MemberRef::new("Other2", "y"),
            MemberRef::new("Other", "z"),
            MemberRef::new("A", "own"),
        ];
        let model = ClassModel::from_types(vec![
            TypeDecl::class("A").with_method(m),
            TypeDecl::class("Other"),
            TypeDecl::class("Other2"),
        ]);
        assert_eq!(atfd(&model, model.get("A").unwrap()), 2);
        assert_eq!(atfd(&model, model.get("Other").unwrap()), 0);
    }

    fn using(name: &str, fields: &[&str]) -> MethodDecl {
        let mut m = MethodDecl::new(name, Visibility::Public);
        m.accessed_fields = fields.iter().map(|f| MemberRef::new("T", *f)).collect();
        m
    }

    fn fields(t: TypeDecl) -> TypeDecl {
        t.with_field(FieldDecl::new("a", "int", Visibility::Private))
            .with_field(FieldDecl::new("b", "int", Visibility::Private))
    }

    #[test]
    fn tcc_examples() {
        let t = fields(TypeDecl::class("T"))
            .with_method(using("m1", &["a"]))
            .with_method(using("m2", &["a"]))
            .with_method(using("m3", &["b"]));
        assert!((tcc(&t).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let all = fields(TypeDecl::class("T"))
            .with_method(using("m1", &["a"]))
            .with_method(using("m2", &["a", "b"]));
        assert_eq!(tcc(&all), Some(1.0));
        let none = fields(TypeDecl::class("T"))
            .with_method(using("m1", &["a"]))
            .with_method(using("m2", &["b"]));
        assert_eq!(tcc(&none), Some(0.0));
        assert_eq!(tcc(&fields(TypeDecl::class("T")).with_method(using("m1", &["a"]))), None);
    }

    #[test]
    fn higher_than_on_empty_population() {
        let rule = DetectionRule::new("r", Expr::Leaf(Filter::new("x", FilterKind::HigherThan(0.0))));
        assert!(evaluate_rule(&rule, &table(&[])).unwrap().is_empty());
    }

    #[test]
    fn top_percent_rounds_up() {
        let t = table(&[("a", 1.0), ("b", 2.0), ("c", 3.0), ("d", 4.0)]);
        let rule = DetectionRule::new("r", Expr::Leaf(Filter::new("x", FilterKind::TopPercent(50.0))));
        assert_eq!(names(&evaluate_rule(&rule, &t).unwrap()), ["c", "d"]);
        let r30 = DetectionRule::new("r", Expr::Leaf(Filter::new("x", FilterKind::TopPercent(30.0))));
        assert_eq!(names(&evaluate_rule(&r30, &t).unwrap()), ["c", "d"]);
        let bottom = DetectionRule::new("r", Expr::Leaf(Filter::new("x", FilterKind::BottomCount(1))));
        assert_eq!(names(&evaluate_rule(&bottom, &t).unwrap()), ["a"]);
    }

    #[test]
    fn ties_at_cut_go_to_first_name() {
        let t = table(&[("z", 5.0), ("m", 5.0), ("a", 5.0)]);
        let rule = DetectionRule::new("r", Expr::Leaf(Filter::new("x", FilterKind::TopCount(2))));
        assert_eq!(names(&evaluate_rule(&rule, &t).unwrap()), ["a", "m"]);
    }

    #[test]
    fn unknown_metric_is_rejected() {
        let rule = DetectionRule::new("r", Expr::Leaf(Filter::new("nope", FilterKind::HigherThan(1.0))));
        assert_eq!(
            evaluate_rule(&rule, &table(&[])),
            Err(DetectError::UnknownMetric("nope".into()))
        );
    }

    #[test]
    fn filter_parameters_checked() {
        assert!(FilterKind::from_op("topPercent", 0.0).is_err());
        assert!(FilterKind::from_op("topPercent", 101.0).is_err());
        assert!(FilterKind::from_op("topCount", 0.0).is_err());
        assert!(FilterKind::from_op("topCount", 1.5).is_err());
        assert!(FilterKind::from_op("higherThan", f64::INFINITY).is_err());
        assert!(FilterKind::from_op("sideways", 1.0).is_err());
        assert_eq!(FilterKind::from_op("topCount", 3.0), Ok(FilterKind::TopCount(3)));
    }

    #[test]
    fn empty_and_is_rejected() {
        let rule = DetectionRule::new("r", Expr::And(vec![]));
        assert_eq!(
            evaluate_rule(&rule, &table(&[])),
            Err(DetectError::EmptyExpression("r".into()))
        );
    }

    fn god_table(rows: &[(&str, f64, f64, Option<f64>)]) -> MetricTable {
        let mut t = MetricTable::with_metrics(CLASS_METRICS);
        for (n, a, w, c) in rows {
            t.push(*n, [("atfd", Some(*a)), ("wmc", Some(*w)), ("tcc", *c)]);
        }
        t
    }

    #[test]
    fn god_class_flagging() {
        let mut rows = vec![("Big", 10.0, 70.0, Some(0.1)), ("Almost", 9.0, 70.0, Some(0.5))];
        for i in 0..8 {
            rows.push((["c0", "c1", "c2", "c3", "c4", "c5", "c6", "c7"][i], 1.0, 5.0, Some(0.9)));
        }
        let flagged = evaluate_rule(&god_class(), &god_table(&rows)).unwrap();
        assert_eq!(names(&flagged), ["Big"]);
        assert_eq!(flagged[0].evidence.len(), 3);
        assert!(flagged[0].evidence.iter().all(|e| e.passed));
        assert!(evaluate_rule(&god_class(), &god_table(&[])).unwrap().is_empty());
    }

    #[test]
    fn builtins_validate_against_standard_tables() {
        let model = ClassModel::from_types(vec![TypeDecl::class("A")]);
        let classes = class_metric_table(&model, &CkOptions::default());
        let methods = method_metric_table(&model);
        for rule in builtin_rules() {
            let t = match rule_scope(&rule).unwrap() {
                Scope::Class => &classes,
                Scope::Method => &methods,
            };
            rule.validate(t).unwrap();
        }
    }

    #[test]
    fn long_method_and_feature_envy() {
        let mut long = MethodDecl::new("long", Visibility::Public);
        long.lines.code = 81;
        let mut branchy = MethodDecl::new("branchy", Visibility::Public);
        branchy.decision_count = 10;
        let mut envious = MethodDecl::new("envious", Visibility::Public);
        envious.accessed_fields = vec![
            MemberRef::new("B", "p"),
            MemberRef::new("B", "q"),
            MemberRef::new("B", "r"),
        ];
        let mut balanced = MethodDecl::new("balanced", Visibility::Public);
        balanced.accessed_fields = vec![
            MemberRef::new("B", "p"),
            MemberRef::new("B", "q"),
            MemberRef::new("B", "r"),
            MemberRef::new("A", "own"),
        ];
        let model = ClassModel::from_types(vec![
            TypeDecl::class("A")
                .with_field(FieldDecl::new("own", "int", Visibility::Private))
                .with_method(long)
                .with_method(branchy)
                .with_method(envious)
                .with_method(balanced),
            TypeDecl::class("B"),
        ]);
        let t = method_metric_table(&model);
        assert_eq!(names(&evaluate_rule(&long_method(), &t).unwrap()), ["A#branchy()", "A#long()"]);
        assert_eq!(names(&evaluate_rule(&feature_envy(), &t).unwrap()), ["A#envious()"]);
    }
}
