//! QMOOD design properties, the six quality-attribute indexes and the
//! Total Quality Index (TQI) used to rank designs.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::ck::{cbo, dit, CkOptions};
use crate::model::{base_type, ClassModel, TypeDecl, TypeKind, Visibility};
use crate::mood::inheritance_census;

/// The eleven design properties, in vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    DesignSize,
    Hierarchies,
    Abstraction,
    Encapsulation,
    Coupling,
    Cohesion,
    Composition,
    Inheritance,
    Polymorphism,
    Messaging,
    Complexity,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::DesignSize,
        Property::Hierarchies,
        Property::Abstraction,
        Property::Encapsulation,
        Property::Coupling,
        Property::Cohesion,
        Property::Composition,
        Property::Inheritance,
        Property::Polymorphism,
        Property::Messaging,
        Property::Complexity,
    ];

    /// Property name as used in weight files.
    pub fn name(self) -> &'static str {
        match self {
            Property::DesignSize => "designSize",
            Property::Hierarchies => "hierarchies",
            Property::Abstraction => "abstraction",
            Property::Encapsulation => "encapsulation",
            Property::Coupling => "coupling",
            Property::Cohesion => "cohesion",
            Property::Composition => "composition",
            Property::Inheritance => "inheritance",
            Property::Polymorphism => "polymorphism",
            Property::Messaging => "messaging",
            Property::Complexity => "complexity",
        }
    }

    /// Metric that measures the property.
    pub fn metric(self) -> &'static str {
        match self {
            Property::DesignSize => "DSC",
            Property::Hierarchies => "NOH",
            Property::Abstraction => "ANA",
            Property::Encapsulation => "DAM",
            Property::Coupling => "DCC",
            Property::Cohesion => "CAMC",
            Property::Composition => "MOA",
            Property::Inheritance => "MFA",
            Property::Polymorphism => "NOP",
            Property::Messaging => "CIS",
            Property::Complexity => "NOM",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s) || p.metric().eq_ignore_ascii_case(s))
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QmoodProperties(pub [f64; 11]);

impl QmoodProperties {
    pub fn get(&self, p: Property) -> f64 {
        self.0[p.index()]
    }

    pub fn set(&mut self, p: Property, v: f64) {
        self.0[p.index()] = v;
    }

    pub fn splat(v: f64) -> Self {
        QmoodProperties([v; 11])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QualityAttribute {
    Reusability,
    Flexibility,
    Understandability,
    Functionality,
    Extendibility,
    Effectiveness,
}

impl QualityAttribute {
    pub const ALL: [QualityAttribute; 6] = [
        QualityAttribute::Reusability,
        QualityAttribute::Flexibility,
        QualityAttribute::Understandability,
        QualityAttribute::Functionality,
        QualityAttribute::Extendibility,
        QualityAttribute::Effectiveness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QualityAttribute::Reusability => "reusability",
            QualityAttribute::Flexibility => "flexibility",
            QualityAttribute::Understandability => "understandability",
            QualityAttribute::Functionality => "functionality",
            QualityAttribute::Extendibility => "extendibility",
            QualityAttribute::Effectiveness => "effectiveness",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(s))
    }
}

/// Coefficient matrix: one row per quality attribute, one column per property.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmoodWeights(pub [[f64; 11]; 6]);

impl Default for QmoodWeights {
    /// The standard index-computation table, including the `+0.25`
    /// coupling term on reusability.
    fn default() -> Self {
        use Property::*;
        let mut w = [[0.0; 11]; 6];
        let mut row = |a: QualityAttribute, terms: &[(Property, f64)]| {
            for &(p, c) in terms {
                w[a as usize][p.index()] = c;
            }
        };
        row(
            QualityAttribute::Reusability,
            &[(Coupling, 0.25), (Cohesion, 0.25), (Messaging, 0.5), (DesignSize, 0.5)],
        );
        row(
            QualityAttribute::Flexibility,
            &[(Encapsulation, 0.25), (Coupling, -0.25), (Composition, 0.5), (Polymorphism, 0.5)],
        );
        row(
            QualityAttribute::Understandability,
            &[
                (Abstraction, 0.33),
                (Encapsulation, 0.33),
                (Coupling, -0.33),
                (Cohesion, 0.33),
                (Polymorphism, -0.33),
                (Complexity, -0.33),
                (DesignSize, -0.33),
            ],
        );
        row(
            QualityAttribute::Functionality,
            &[
                (Cohesion, 0.12),
                (Polymorphism, 0.22),
                (Messaging, 0.22),
                (DesignSize, 0.22),
                (Hierarchies, 0.22),
            ],
        );
        row(
            QualityAttribute::Extendibility,
            &[(Abstraction, 0.5), (Coupling, -0.5), (Inheritance, 0.5), (Polymorphism, 0.5)],
        );
        row(
            QualityAttribute::Effectiveness,
            &[
                (Abstraction, 0.2),
                (Encapsulation, 0.2),
                (Composition, 0.2),
                (Inheritance, 0.2),
                (Polymorphism, 0.2),
            ],
        );
        QmoodWeights(w)
    }
}

impl QmoodWeights {
    pub fn zero() -> Self {
        QmoodWeights([[0.0; 11]; 6])
    }

    pub fn coefficient(&self, a: QualityAttribute, p: Property) -> f64 {
        self.0[a as usize][p.index()]
    }

    pub fn set(&mut self, a: QualityAttribute, p: Property, c: f64) {
        self.0[a as usize][p.index()] = c;
    }

    pub fn is_well_formed(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QualityIndexes {
    pub values: [f64; 6],
    pub tqi: f64,
}

impl QualityIndexes {
    pub fn get(&self, a: QualityAttribute) -> f64 {
        self.values[a as usize]
    }
}

pub fn quality_indexes(props: &QmoodProperties, weights: &QmoodWeights) -> QualityIndexes {
    let mut values = [0.0; 6];
    for (v, row) in values.iter_mut().zip(&weights.0) {
        *v = row.iter().zip(&props.0).map(|(c, p)| c * p).sum();
    }
    QualityIndexes {
        values,
        tqi: values.iter().sum(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum QmoodError {
    #[error("design has no declared types")]
    EmptyModel,
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0u64), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn cohesion_among_methods(ty: &TypeDecl) -> f64 {
    let methods: Vec<BTreeSet<&str>> = ty
        .methods
        .iter()
        .filter(|m| !m.is_constructor)
        .map(|m| {
            m.param_types
                .iter()
                .map(|p| base_type(p))
                .filter(|p| *p != ty.qualified_name && *p != ty.simple_name())
                .collect()
        })
        .collect();
    let union: BTreeSet<&str> = methods.iter().flatten().copied().collect();
    if methods.is_empty() || union.is_empty() {
        return 0.0;
    }
    let hits: usize = methods.iter().map(|s| s.len()).sum();
    hits as f64 / (methods.len() * union.len()) as f64
}

fn polymorphic_methods(model: &ClassModel, ty: &TypeDecl) -> f64 {
    let descendants = model.descendants(&ty.qualified_name);
    ty.methods
        .iter()
        .filter(|m| !m.is_constructor)
        .filter(|m| {
            m.overrides_super
                || descendants.iter().filter_map(|d| model.get(d)).any(|d| {
                    d.methods
                        .iter()
                        .any(|dm| !dm.is_constructor && dm.signature() == m.signature())
                })
        })
        .count() as f64
}

/// Computes the eleven design properties for one design.
pub fn design_properties(model: &ClassModel) -> Result<QmoodProperties, QmoodError> {
    if model.is_empty() {
        return Err(QmoodError::EmptyModel);
    }
    let opts = CkOptions::default();
    let types = model.types();
    let mut p = QmoodProperties::default();

    p.set(Property::DesignSize, types.len() as f64);
    let roots_with_children = types
        .iter()
        .filter(|t| t.kind == TypeKind::Class && model.superclass(&t.qualified_name).is_none())
        .filter(|t| model.direct_subclasses(&t.qualified_name).next().is_some())
        .count();
    p.set(Property::Hierarchies, roots_with_children as f64);
    p.set(Property::Abstraction, mean(types.iter().map(|t| dit(model, &t.qualified_name) as f64)));
    p.set(
        Property::Encapsulation,
        mean(types.iter().filter(|t| !t.fields.is_empty()).map(|t| {
            let hidden = t.fields.iter().filter(|f| f.visibility != Visibility::Public).count();
            hidden as f64 / t.fields.len() as f64
        })),
    );
    p.set(Property::Coupling, mean(types.iter().map(|t| cbo(model, t, &opts) as f64)));
    p.set(Property::Cohesion, mean(types.iter().map(cohesion_among_methods)));
    p.set(
        Property::Composition,
        mean(types.iter().map(|t| {
            t.fields
                .iter()
                .filter(|f| model.is_declared(base_type(&f.declared_type)))
                .count() as f64
        })),
    );
    p.set(
        Property::Inheritance,
        mean(types.iter().map(|t| {
            let c = inheritance_census(model, t);
            if model.superclass(&t.qualified_name).is_none() || c.methods_available() == 0 {
                0.0
            } else {
                c.methods_inherited as f64 / c.methods_available() as f64
            }
        })),
    );
    p.set(Property::Polymorphism, mean(types.iter().map(|t| polymorphic_methods(model, t))));
    p.set(
        Property::Messaging,
        mean(types.iter().map(|t| {
            t.methods
                .iter()
                .filter(|m| !m.is_constructor && m.visibility == Visibility::Public)
                .count() as f64
        })),
    );
    p.set(
        Property::Complexity,
        mean(types.iter().map(|t| t.methods.iter().filter(|m| !m.is_constructor).count() as f64)),
    );
    Ok(p)
}

/// Min-max normalizes each property across a set of designs. A property
/// that is constant across the set maps to 0.
pub fn normalize(designs: &[QmoodProperties]) -> Vec<QmoodProperties> {
    let mut out = designs.to_vec();
    for i in 0..11 {
        let lo = designs.iter().map(|d| d.0[i]).fold(f64::INFINITY, f64::min);
        let hi = designs.iter().map(|d| d.0[i]).fold(f64::NEG_INFINITY, f64::max);
        for d in &mut out {
            d.0[i] = if hi > lo { (d.0[i] - lo) / (hi - lo) } else { 0.0 };
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedDesign {
    pub name: String,
    pub tqi: f64,
}

/// Orders designs by descending TQI, ties broken by name.
pub fn rank_designs(designs: &[(String, QualityIndexes)]) -> Vec<RankedDesign> {
    let mut out: Vec<RankedDesign> = designs
        .iter()
        .map(|(name, q)| RankedDesign {
            name: name.clone(),
            tqi: q.tqi,
        })
        .collect();
    out.sort_by(|a, b| {
        b.tqi
            .partial_cmp(&a.tqi)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.name.cmp(&b.name))
    });
    out
}
