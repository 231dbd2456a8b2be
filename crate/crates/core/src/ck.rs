//! Chidamber–Kemerer suite (WMC, DIT, NOC, CBO, RFC, LCOM) plus NOM.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::complexity::cyclomatic;
use crate::model::{base_type, ClassModel, MethodDecl, TypeDecl, TypeKind, UNRESOLVED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CkOptions {
    /// Count constructors in WMC/NOM/RFC.
    pub include_constructors: bool,
    /// CBO also counts classes referencing this one.
    pub cbo_bidirectional: bool,
    /// Supertype edges count as coupling.
    pub cbo_inheritance: bool,
    /// Referenced-but-undeclared types count as coupling.
    pub include_external: bool,
    /// NOC of an interface counts its direct implementors.
    pub noc_interfaces: bool,
}

/// Methods considered by WMC, NOM and RFC.
pub fn counted_methods<'a>(ty: &'a TypeDecl, opts: &CkOptions) -> impl Iterator<Item = &'a MethodDecl> + 'a {
    let include_ctors = opts.include_constructors;
    ty.methods.iter().filter(move |m| include_ctors || !m.is_constructor)
}

pub fn wmc(ty: &TypeDecl, opts: &CkOptions) -> u64 {
    counted_methods(ty, opts).map(cyclomatic).sum()
}

pub fn nom(ty: &TypeDecl, opts: &CkOptions) -> u64 {
    counted_methods(ty, opts).count() as u64
}

/// Depth in the superclass chain; the root has depth 0 and an external
/// parent ends the chain.
pub fn dit(model: &ClassModel, name: &str) -> u64 {
    model.ancestors(name).len() as u64
}

pub fn noc(model: &ClassModel, name: &str, opts: &CkOptions) -> u64 {
    match model.get(name) {
        Some(t) if t.kind == TypeKind::Interface => {
            if opts.noc_interfaces {
                model.direct_implementors(name).count() as u64
            } else {
                0
            }
        }
        Some(_) => model.direct_subclasses(name).count() as u64,
        None => 0,
    }
}

/// Types `ty` references through field types, parameter and return types,
/// call receivers and field-access owners (plus supertypes when
/// `cbo_inheritance` is set). Self is excluded.
pub fn outgoing_references(model: &ClassModel, ty: &TypeDecl, opts: &CkOptions) -> BTreeSet<String> {
    let mut raw: Vec<&str> = Vec::new();
    for f in &ty.fields {
        raw.push(&f.declared_type);
    }
    for m in &ty.methods {
        raw.extend(m.param_types.iter().map(String::as_str));
        raw.push(&m.return_type);
        raw.extend(m.accessed_fields.iter().map(|r| r.owner.as_str()));
        raw.extend(m.called_methods.iter().map(|r| r.owner.as_str()));
    }
    if opts.cbo_inheritance {
        raw.extend(ty.super_types.iter().chain(&ty.interfaces).map(String::as_str));
    }
    raw.into_iter()
        .map(base_type)
        .filter(|n| *n != ty.qualified_name && *n != UNRESOLVED)
        .filter(|n| model.is_declared(n) || (opts.include_external && model.is_external(n)))
        .map(ToString::to_string)
        .collect()
}

/// Declared types whose outgoing references include `name`.
pub fn incoming_references(model: &ClassModel, name: &str, opts: &CkOptions) -> BTreeSet<String> {
    model
        .types()
        .iter()
        .filter(|t| t.qualified_name != name)
        .filter(|t| outgoing_references(model, t, opts).contains(name))
        .map(|t| t.qualified_name.clone())
        .collect()
}

pub fn cbo(model: &ClassModel, ty: &TypeDecl, opts: &CkOptions) -> u64 {
    let mut refs = outgoing_references(model, ty, opts);
    if opts.cbo_bidirectional {
        refs.extend(incoming_references(model, &ty.qualified_name, opts));
    }
    refs.len() as u64
}

/// Declared methods plus distinct `(receiver, name)` calls, where calls to
/// the class's own methods are already in the first term.
pub fn rfc(ty: &TypeDecl, opts: &CkOptions) -> u64 {
    let own = counted_methods(ty, opts).count() as u64;
    let external: BTreeSet<(&str, &str)> = ty
        .methods
        .iter()
        .flat_map(|m| &m.called_methods)
        .filter(|c| {
            let self_call = c.owner == ty.qualified_name || c.owner == UNRESOLVED;
            !(self_call && ty.declares_method(&c.member))
        })
        .map(|c| (c.owner.as_str(), c.member.as_str()))
        .collect();
    own + external.len() as u64
}

/// Method pairs sharing no instance field (`p`) and sharing at least one (`q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CohesionPairs {
    pub p: u64,
    pub q: u64,
}

/// Own instance fields used by each non-constructor, non-static method.
pub fn instance_field_usage(ty: &TypeDecl) -> Vec<BTreeSet<&str>> {
    let instance: BTreeSet<&str> = ty
        .fields
        .iter()
        .filter(|f| !f.is_static)
        .map(|f| f.name.as_str())
        .collect();
    ty.methods
        .iter()
        .filter(|m| !m.is_constructor && !m.is_static)
        .map(|m| {
            m.accessed_fields
                .iter()
                .filter(|a| a.owner == ty.qualified_name && instance.contains(a.member.as_str()))
                .map(|a| a.member.as_str())
                .collect()
        })
        .collect()
}

pub fn cohesion_pairs(usage: &[BTreeSet<&str>]) -> CohesionPairs {
    let mut pairs = CohesionPairs::default();
    for (i, a) in usage.iter().enumerate() {
        for b in &usage[i + 1..] {
            if a.intersection(b).next().is_some() {
                pairs.q += 1;
            } else {
                pairs.p += 1;
            }
        }
    }
    pairs
}

/// LCOM = max(p − q, 0).
pub fn lcom(ty: &TypeDecl) -> (u64, CohesionPairs) {
    let pairs = cohesion_pairs(&instance_field_usage(ty));
    (pairs.p.saturating_sub(pairs.q), pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CkMetrics {
    pub wmc: u64,
    pub dit: u64,
    pub noc: u64,
    pub cbo: u64,
    pub rfc: u64,
    pub lcom: u64,
    pub nom: u64,
}

impl CkMetrics {
    pub const NAMES: [&'static str; 7] = ["wmc", "dit", "noc", "cbo", "rfc", "lcom", "nom"];

    pub fn values(&self) -> [u64; 7] {
        [self.wmc, self.dit, self.noc, self.cbo, self.rfc, self.lcom, self.nom]
    }
}

pub fn ck_metrics(model: &ClassModel, ty: &TypeDecl, opts: &CkOptions) -> CkMetrics {
    CkMetrics {
        wmc: wmc(ty, opts),
        dit: dit(model, &ty.qualified_name),
        noc: noc(model, &ty.qualified_name, opts),
        cbo: cbo(model, ty, opts),
        rfc: rfc(ty, opts),
        lcom: lcom(ty).0,
        nom: nom(ty, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FieldDecl, MemberRef, Visibility};
    use alloc::vec;

    fn method(name: &str, vg: u64) -> MethodDecl {
        let mut m = MethodDecl::new(name, Visibility::Public);
        m.decision_count = vg - 1;
        m
    }

    fn using(name: &str, owner: &str, fields: &[&str]) -> MethodDecl {
        let mut m = MethodDecl::new(name, Visibility::Public);
        m.accessed_fields = fields.iter().map(|f| MemberRef::new(owner, *f)).collect();
        m
    }

    #[test]
    fn wmc_sums_cyclomatic() {
        let opts = CkOptions::default();
        assert_eq!(wmc(&TypeDecl::class("E"), &opts), 0);
        let t = TypeDecl::class("A")
            .with_method(method("a", 2))
            .with_method(method("b", 4))
            .with_method(method("c", 3))
            .with_method(method("d", 1));
        assert_eq!(wmc(&t, &opts), 10);
    }

    #[test]
    fn dit_chain() {
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A"),
            TypeDecl::class("B").extends("A"),
            TypeDecl::class("C").extends("B"),
            TypeDecl::class("SuperC"),
            TypeDecl::class("D").extends("SuperC"),
            TypeDecl::class("X").extends("java.lang.Thread"),
        ]);
        assert_eq!(dit(&m, "A"), 0);
        assert_eq!(dit(&m, "B"), 1);
        assert_eq!(dit(&m, "C"), 2);
        assert_eq!(dit(&m, "D"), 1);
        assert_eq!(dit(&m, "X"), 0);
    }

    #[test]
    fn noc_counts_direct_children() {
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A"),
            TypeDecl::class("B").extends("A"),
            TypeDecl::class("C").extends("A"),
            TypeDecl::class("G").extends("C"),
            TypeDecl::interface("I"),
            TypeDecl::class("P").implements("I"),
            TypeDecl::class("Q").implements("I"),
            TypeDecl::class("R").implements("I"),
        ]);
        let opts = CkOptions::default();
        assert_eq!(noc(&m, "A", &opts), 2);
        assert_eq!(noc(&m, "B", &opts), 0);
        assert_eq!(noc(&m, "I", &opts), 0);
        let flag = CkOptions {
            noc_interfaces: true,
            ..opts
        };
        assert_eq!(noc(&m, "I", &flag), 3);
    }

    #[test]
    fn cbo_counts_declared_references() {
        let mut meth = MethodDecl::new("m", Visibility::Public);
        meth.param_types = vec!["C".into(), "int".into()];
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A")
                .with_field(FieldDecl::new("b", "B", Visibility::Private))
                .with_field(FieldDecl::new("n", "int", Visibility::Private))
                .with_method(meth),
            TypeDecl::class("B"),
            TypeDecl::class("C"),
        ]);
        let opts = CkOptions::default();
        assert_eq!(cbo(&m, m.get("A").unwrap(), &opts), 2);
        assert_eq!(cbo(&m, m.get("B").unwrap(), &opts), 0);
        let bi = CkOptions {
            cbo_bidirectional: true,
            ..opts
        };
        assert_eq!(cbo(&m, m.get("B").unwrap(), &bi), 1);
    }

    #[test]
    fn isolated_classes_have_zero_cbo() {
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A").with_field(FieldDecl::new("x", "int", Visibility::Private)),
            TypeDecl::class("B"),
        ]);
        for t in m.types() {
            assert_eq!(cbo(&m, t, &CkOptions::default()), 0);
        }
    }

    #[test]
    fn rfc_examples() {
        let opts = CkOptions::default();
        let mut m1 = MethodDecl::new("m1", Visibility::Public);
        m1.called_methods = vec![MemberRef::new("X", "foo"), MemberRef::new("Y", "bar")];
        let mut m2 = MethodDecl::new("m2", Visibility::Public);
        m2.called_methods = vec![MemberRef::new("X", "foo")];
        let t = TypeDecl::class("A").with_method(m1).with_method(m2);
        assert_eq!(rfc(&t, &opts), 4);
        assert_eq!(rfc(&TypeDecl::class("E"), &opts), 0);

        let mut a = MethodDecl::new("a", Visibility::Public);
        a.called_methods = vec![MemberRef::new("S", "b")];
        let s = TypeDecl::class("S").with_method(a).with_method(MethodDecl::new("b", Visibility::Public));
        assert_eq!(rfc(&s, &opts), 2);
    }

    #[test]
    fn lcom_examples() {
        let single = TypeDecl::class("S").with_method(using("m", "S", &["a"]));
        assert_eq!(lcom(&single), (0, CohesionPairs { p: 0, q: 0 }));

        let t = TypeDecl::class("T")
            .with_field(FieldDecl::new("a", "int", Visibility::Private))
            .with_field(FieldDecl::new("b", "int", Visibility::Private))
            .with_method(using("m1", "T", &["a"]))
            .with_method(using("m2", "T", &["a"]))
            .with_method(using("m3", "T", &["b"]));
        assert_eq!(lcom(&t), (1, CohesionPairs { p: 2, q: 1 }));

        let all = TypeDecl::class("U")
            .with_field(FieldDecl::new("a", "int", Visibility::Private))
            .with_method(using("m1", "U", &["a"]))
            .with_method(using("m2", "U", &["a"]))
            .with_method(using("m3", "U", &["a"]));
        assert_eq!(lcom(&all), (0, CohesionPairs { p: 0, q: 3 }));
    }

    #[test]
    fn lcom_skips_constructors_and_static_fields() {
        let mut ctor = using("T", "T", &["a", "b"]);
        ctor.is_constructor = true;
        let mut stat = FieldDecl::new("s", "int", Visibility::Private);
        stat.is_static = true;
        let t = TypeDecl::class("T")
            .with_field(FieldDecl::new("a", "int", Visibility::Private))
            .with_field(FieldDecl::new("b", "int", Visibility::Private))
            .with_field(stat)
            .with_method(ctor)
            .with_method(using("m1", "T", &["a", "s"]))
            .with_method(using("m2", "T", &["b", "s"]));
        assert_eq!(lcom(&t), (1, CohesionPairs { p: 1, q: 0 }));
    }

    #[test]
    fn nom_constructor_flag() {
        let mut ctor = MethodDecl::new("A", Visibility::Public);
        ctor.is_constructor = true;
        let t = TypeDecl::class("A")
            .with_method(MethodDecl::new("a", Visibility::Public))
            .with_method(MethodDecl::new("b", Visibility::Public))
            .with_method(ctor);
        assert_eq!(nom(&t, &CkOptions::default()), 2);
        let flag = CkOptions {
            include_constructors: true,
            ..Default::default()
        };
        assert_eq!(nom(&t, &flag), 3);
        assert_eq!(nom(&TypeDecl::class("E"), &CkOptions::default()), 0);
    }
}
