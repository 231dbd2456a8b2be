//! MOOD system-level factors. Every factor is a ratio in `[0, 1]`; an empty
//! denominator yields `None` rather than a fabricated zero.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ck::{outgoing_references, CkOptions};
use crate::model::{ClassModel, TypeDecl, Visibility};

/// Share of the other `TC − 1` types allowed to see a member declared in
/// `owner` with the given visibility. Protected covers subclasses and the
/// owner's package.
pub fn visibility_fraction(visibility: Visibility, owner: &TypeDecl, model: &ClassModel) -> f64 {
    let tc = model.len();
    if tc < 2 {
        return 0.0;
    }
    let others = (tc - 1) as f64;
    let same_package = || {
        model
            .types()
            .iter()
            .filter(|t| t.package == owner.package && t.qualified_name != owner.qualified_name)
            .map(|t| t.qualified_name.clone())
            .collect::<BTreeSet<String>>()
    };
    match visibility {
        Visibility::Public => 1.0,
        Visibility::Private => 0.0,
        Visibility::Package => same_package().len() as f64 / others,
        Visibility::Protected => {
            let mut seen = same_package();
            seen.extend(model.descendants(&owner.qualified_name));
            seen.remove(&owner.qualified_name);
            seen.len() as f64 / others
        }
    }
}

fn hiding_factor<'a>(model: &'a ClassModel, members: impl Fn(&'a TypeDecl) -> Vec<Visibility>) -> Option<f64> {
    let mut hidden = 0.0;
    let mut defined = 0u64;
    for t in model.types() {
        for v in members(t) {
            hidden += 1.0 - visibility_fraction(v, t, model);
            defined += 1;
        }
    }
    (defined > 0).then(|| hidden / defined as f64)
}

/// Attribute Hiding Factor.
pub fn ahf(model: &ClassModel) -> Option<f64> {
    hiding_factor(model, |t| t.fields.iter().map(|f| f.visibility).collect())
}

/// Method Hiding Factor (constructors excluded).
pub fn mhf(model: &ClassModel) -> Option<f64> {
    hiding_factor(model, |t| {
        t.methods
            .iter()
            .filter(|m| !m.is_constructor)
            .map(|m| m.visibility)
            .collect()
    })
}

type MethodKey = (String, Vec<String>);

/// Per-class inheritance census shared by MIF, AIF and PF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InheritanceCensus {
    pub methods_defined: u64,
    pub methods_inherited: u64,
    pub methods_overriding: u64,
    pub methods_new: u64,
    pub attributes_defined: u64,
    pub attributes_inherited: u64,
    pub descendants: u64,
}

impl InheritanceCensus {
    pub fn methods_available(&self) -> u64 {
        self.methods_defined + self.methods_inherited
    }

    pub fn attributes_available(&self) -> u64 {
        self.attributes_defined + self.attributes_inherited
    }
}

pub fn inheritance_census(model: &ClassModel, ty: &TypeDecl) -> InheritanceCensus {
    let chain = model.ancestors(&ty.qualified_name);
    let mut method_pool: BTreeSet<MethodKey> = BTreeSet::new();
    let mut field_pool: BTreeSet<&str> = BTreeSet::new();
    for anc in chain.iter().rev() {
        for m in anc.methods.iter().filter(|m| !m.is_constructor && m.visibility != Visibility::Private) {
            method_pool.insert((m.name.clone(), m.param_types.clone()));
        }
        for f in anc.fields.iter().filter(|f| f.visibility != Visibility::Private) {
            field_pool.insert(&f.name);
        }
    }

    let declared: BTreeSet<MethodKey> = ty
        .methods
        .iter()
        .filter(|m| !m.is_constructor)
        .map(|m| (m.name.clone(), m.param_types.clone()))
        .collect();
    let overriding = declared.intersection(&method_pool).count() as u64;
    let inherited = method_pool.difference(&declared).count() as u64;

    let declared_fields: BTreeSet<&str> = ty.fields.iter().map(|f| f.name.as_str()).collect();
    let fields_inherited = field_pool.difference(&declared_fields).count() as u64;

    InheritanceCensus {
        methods_defined: declared.len() as u64,
        methods_inherited: inherited,
        methods_overriding: overriding,
        methods_new: declared.len() as u64 - overriding,
        attributes_defined: declared_fields.len() as u64,
        attributes_inherited: fields_inherited,
        descendants: model.descendants(&ty.qualified_name).len() as u64,
    }
}

fn census(model: &ClassModel) -> Vec<InheritanceCensus> {
    model.types().iter().map(|t| inheritance_census(model, t)).collect()
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Method Inheritance Factor.
pub fn mif(model: &ClassModel) -> Option<f64> {
    let c = census(model);
    ratio(
        c.iter().map(|x| x.methods_inherited).sum(),
        c.iter().map(|x| x.methods_available()).sum(),
    )
}

/// Attribute Inheritance Factor.
pub fn aif(model: &ClassModel) -> Option<f64> {
    let c = census(model);
    ratio(
        c.iter().map(|x| x.attributes_inherited).sum(),
        c.iter().map(|x| x.attributes_available()).sum(),
    )
}

/// Directed client edges between distinct declared types.
pub fn client_edges(model: &ClassModel) -> u64 {
    let opts = CkOptions::default();
    model
        .types()
        .iter()
        .map(|t| outgoing_references(model, t, &opts).len() as u64)
        .sum()
}

/// Coupling Factor: client edges over the `TC² − TC` possible ones.
pub fn cf(model: &ClassModel) -> Option<f64> {
    let tc = model.len() as u64;
    if tc < 2 {
        return None;
    }
    ratio(client_edges(model), tc * tc - tc)
}

/// Polymorphism Factor; undefined when no new method has a descendant
/// that could override it.
pub fn pf(model: &ClassModel) -> Option<f64> {
    let c = census(model);
    ratio(
        c.iter().map(|x| x.methods_overriding).sum(),
        c.iter().map(|x| x.methods_new * x.descendants).sum(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MoodReport {
    pub mhf: Option<f64>,
    pub ahf: Option<f64>,
    pub mif: Option<f64>,
    pub aif: Option<f64>,
    pub cf: Option<f64>,
    pub pf: Option<f64>,
}

impl MoodReport {
    pub const NAMES: [&'static str; 6] = ["mhf", "ahf", "mif", "aif", "cf", "pf"];

    pub fn values(&self) -> [Option<f64>; 6] {
        [self.mhf, self.ahf, self.mif, self.aif, self.cf, self.pf]
    }
}

pub fn mood_report(model: &ClassModel) -> MoodReport {
    MoodReport {
        mhf: mhf(model),
        ahf: ahf(model),
        mif: mif(model),
        aif: aif(model),
        cf: cf(model),
        pf: pf(model),
    }
}
