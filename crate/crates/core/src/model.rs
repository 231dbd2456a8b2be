//! Language-agnostic class model consumed by every metric suite.
//!
//! A [`ClassModel`] is built once (by the Java extractor or from an
//! interchange document) and then only read. Types are kept sorted by
//! qualified name so every downstream report iterates in a stable order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Receiver/owner name used when a call or field access could not be
/// attributed to a type.
pub const UNRESOLVED: &str = "?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Visibility {
    Public,
    Protected,
    #[default]
    Package,
    Private,
}

impl Visibility {
    pub const ALL: [Visibility; 4] = [
        Visibility::Public,
        Visibility::Protected,
        Visibility::Package,
        Visibility::Private,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Visibility::Public => "public",
            Visibility::Protected => "protected",
            Visibility::Package => "package",
            Visibility::Private => "private",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == token)
    }
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeKind {
    Class,
    Interface,
}

impl TypeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeKind::Class => "class",
            TypeKind::Interface => "interface",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "class" => Some(TypeKind::Class),
            "interface" => Some(TypeKind::Interface),
            _ => None,
        }
    }
}

/// Halstead token counts: distinct operators/operands (`n1`, `n2`) and
/// total occurrences (`N1`, `N2`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HalsteadCounts {
    pub distinct_operators: u64,
    pub distinct_operands: u64,
    pub total_operators: u64,
    pub total_operands: u64,
}

impl HalsteadCounts {
    pub fn new(n1: u64, n2: u64, big_n1: u64, big_n2: u64) -> Self {
        HalsteadCounts {
            distinct_operators: n1,
            distinct_operands: n2,
            total_operators: big_n1,
            total_operands: big_n2,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.total_operators >= self.distinct_operators
            && self.total_operands >= self.distinct_operands
    }
}

/// Physical line split of a span of source: code, comment and blank lines.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LineCounts {
    pub code: u64,
    pub comment: u64,
    pub blank: u64,
}

impl LineCounts {
    pub fn total(&self) -> u64 {
        self.code + self.comment + self.blank
    }
}

impl core::ops::AddAssign for LineCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.code += rhs.code;
        self.comment += rhs.comment;
        self.blank += rhs.blank;
    }
}

/// `(owner, member)` pair recorded for field accesses and method calls.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberRef {
    pub owner: String,
    pub member: String,
}

impl MemberRef {
    pub fn new(owner: impl Into<String>, member: impl Into<String>) -> Self {
        MemberRef {
            owner: owner.into(),
            member: member.into(),
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.owner != UNRESOLVED
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDecl {
    pub name: String,
    pub declared_type: String,
    pub visibility: Visibility,
    pub is_static: bool,
}

impl FieldDecl {
    pub fn new(name: impl Into<String>, declared_type: impl Into<String>, visibility: Visibility) -> Self {
        FieldDecl {
            name: name.into(),
            declared_type: declared_type.into(),
            visibility,
            is_static: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MethodDecl {
    pub name: String,
    pub param_types: Vec<String>,
    pub return_type: String,
    pub visibility: Visibility,
    pub is_static: bool,
    pub is_abstract: bool,
    pub is_constructor: bool,
    pub accessed_fields: Vec<MemberRef>,
    pub called_methods: Vec<MemberRef>,
    /// Number of decision tokens; cyclomatic complexity is this plus one.
    pub decision_count: u64,
    /// Executable statements in the body.
    pub statements: u64,
    pub halstead: HalsteadCounts,
    pub lines: LineCounts,
    pub overrides_super: bool,
}

impl MethodDecl {
    pub fn new(name: impl Into<String>, visibility: Visibility) -> Self {
        MethodDecl {
            name: name.into(),
            return_type: "void".to_string(),
            visibility,
            ..Default::default()
        }
    }

    pub fn signature(&self) -> Signature<'_> {
        Signature {
            name: &self.name,
            params: &self.param_types,
        }
    }
}

/// Method identity within its owner: name plus ordered parameter types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature<'a> {
    pub name: &'a str,
    pub params: &'a [String],
}

impl fmt::Display for Signature<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(p)?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    pub qualified_name: String,
    pub kind: TypeKind,
    /// `extends` list: at most one entry for a class, any number for an interface.
    pub super_types: Vec<String>,
    pub interfaces: Vec<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub package: String,
    pub source_file: String,
    pub total_lines: u64,
    pub comment_lines: u64,
}

impl TypeDecl {
    pub fn new(qualified_name: impl Into<String>, kind: TypeKind) -> Self {
        let qualified_name = qualified_name.into();
        let package = match qualified_name.rfind('.') {
            Some(i) => qualified_name[..i].to_string(),
            None => String::new(),
        };
        TypeDecl {
            qualified_name,
            kind,
            super_types: Vec::new(),
            interfaces: Vec::new(),
            fields: Vec::new(),
            methods: Vec::new(),
            package,
            source_file: String::new(),
            total_lines: 0,
            comment_lines: 0,
        }
    }

    pub fn class(qualified_name: impl Into<String>) -> Self {
        Self::new(qualified_name, TypeKind::Class)
    }

    pub fn interface(qualified_name: impl Into<String>) -> Self {
        Self::new(qualified_name, TypeKind::Interface)
    }

    pub fn extends(mut self, name: impl Into<String>) -> Self {
        self.super_types.push(name.into());
        self
    }

    pub fn implements(mut self, name: impl Into<String>) -> Self {
        self.interfaces.push(name.into());
        self
    }

    pub fn with_field(mut self, field: FieldDecl) -> Self {
        self.fields.push(field);
        self
    }

    pub fn with_method(mut self, method: MethodDecl) -> Self {
        self.methods.push(method);
        self
    }

    pub fn is_interface(&self) -> bool {
        self.kind == TypeKind::Interface
    }

    pub fn simple_name(&self) -> &str {
        simple_name(&self.qualified_name)
    }

    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn declares_method(&self, name: &str) -> bool {
        self.methods.iter().any(|m| m.name == name)
    }
}

/// Last dotted segment of a qualified name.
pub fn simple_name(qualified: &str) -> &str {
    qualified.rsplit('.').next().unwrap_or(qualified)
}

/// Strips generic arguments and array brackets: `List<B>[]` → `List`.
pub fn base_type(type_text: &str) -> &str {
    let end = type_text
        .find(['<', '['])
        .unwrap_or(type_text.len());
    type_text[..end].trim().trim_end_matches("...")
}

/// Per-file physical line census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileLineCount {
    pub path: String,
    pub language: String,
    pub counts: LineCounts,
}

impl FileLineCount {
    pub fn total(&self) -> u64 {
        self.counts.total()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
}

/// Immutable census of declared types. Duplicate qualified names are kept
/// (so that [`validate`] can report them) but lookups resolve to the first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassModel {
    types: Vec<TypeDecl>,
    index: BTreeMap<String, usize>,
    external_types: BTreeSet<String>,
    files: Vec<FileLineCount>,
}

impl ClassModel {
    pub fn new(
        mut types: Vec<TypeDecl>,
        external_types: BTreeSet<String>,
        mut files: Vec<FileLineCount>,
    ) -> Self {
        types.sort_by(|a, b| a.qualified_name.cmp(&b.qualified_name));
        files.sort_by(|a, b| a.path.cmp(&b.path));
        let mut index = BTreeMap::new();
        for (i, t) in types.iter().enumerate() {
            index.entry(t.qualified_name.clone()).or_insert(i);
        }
        let mut model = ClassModel {
            types,
            index,
            external_types,
            files,
        };
        model.mark_overrides();
        model
    }

    pub fn from_types(types: Vec<TypeDecl>) -> Self {
        Self::new(types, BTreeSet::new(), Vec::new())
    }

    pub fn types(&self) -> &[TypeDecl] {
        &self.types
    }

    pub fn files(&self) -> &[FileLineCount] {
        &self.files
    }

    pub fn external_types(&self) -> &BTreeSet<String> {
        &self.external_types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&TypeDecl> {
        self.index.get(name).map(|&i| &self.types[i])
    }

    pub fn require(&self, name: &str) -> Result<&TypeDecl, ModelError> {
        self.get(name)
            .ok_or_else(|| ModelError::UnknownType(name.to_string()))
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn is_external(&self, name: &str) -> bool {
        self.external_types.contains(name)
    }

    /// Declared superclass of a class; `None` for interfaces, roots and
    /// classes whose parent is external.
    pub fn superclass(&self, name: &str) -> Option<&TypeDecl> {
        let t = self.get(name)?;
        if t.is_interface() {
            return None;
        }
        t.super_types
            .iter()
            .filter_map(|s| self.get(s))
            .find(|s| !s.is_interface())
    }

    /// Direct declared subclasses (class `extends` edges only).
    pub fn direct_subclasses<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a TypeDecl> + 'a {
        self.types.iter().filter(move |t| {
            self.superclass(&t.qualified_name)
                .is_some_and(|s| s.qualified_name == name)
        })
    }

    /// Declared classes naming `name` in their `implements` list.
    pub fn direct_implementors<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a TypeDecl> + 'a {
        self.types
            .iter()
            .filter(move |t| !t.is_interface() && t.interfaces.iter().any(|i| i == name))
    }

    /// Superclass chain root-ward, stopping at a repeated type if the
    /// model is (invalidly) cyclic.
    pub fn ancestors(&self, name: &str) -> Vec<&TypeDecl> {
        let mut chain = Vec::new();
        let mut seen = BTreeSet::new();
        seen.insert(name);
        let mut current = self.superclass(name);
        while let Some(t) = current {
            if !seen.insert(t.qualified_name.as_str()) {
                break;
            }
            chain.push(t);
            current = self.superclass(&t.qualified_name);
        }
        chain
    }

    pub fn descendants(&self, name: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<&str> = alloc::vec![name];
        while let Some(n) = stack.pop() {
            for child in self.direct_subclasses(n) {
                if child.qualified_name != name && out.insert(child.qualified_name.clone()) {
                    stack.push(&child.qualified_name);
                }
            }
        }
        out
    }

    /// Supertypes reachable over both `extends` and `implements` edges.
    fn all_declared_supertypes(&self, name: &str) -> Vec<&TypeDecl> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        seen.insert(name.to_string());
        let mut stack = alloc::vec![name.to_string()];
        while let Some(n) = stack.pop() {
            let Some(t) = self.get(&n) else { continue };
            for s in t.super_types.iter().chain(&t.interfaces) {
                if let Some(st) = self.get(s) {
                    if seen.insert(st.qualified_name.clone()) {
                        out.push(st);
                        stack.push(st.qualified_name.clone());
                    }
                }
            }
        }
        out
    }

    fn mark_overrides(&mut self) {
        let mut flags = Vec::new();
        for (ti, t) in self.types.iter().enumerate() {
            let supers = self.all_declared_supertypes(&t.qualified_name);
            for (mi, m) in t.methods.iter().enumerate() {
                if m.is_constructor || m.is_static || m.overrides_super {
                    continue;
                }
                let sig = m.signature();
                let hit = supers.iter().any(|s| {
                    s.methods.iter().any(|sm| {
                        !sm.is_constructor
                            && !sm.is_static
                            && sm.visibility != Visibility::Private
                            && sm.signature() == sig
                    })
                });
                if hit {
                    flags.push((ti, mi));
                }
            }
        }
        for (ti, mi) in flags {
            self.types[ti].methods[mi].overrides_super = true;
        }
    }
}

/// Result of [`inheritance_closure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InheritanceClosure {
    pub ancestors: Vec<String>,
    pub descendants: BTreeSet<String>,
}

pub fn inheritance_closure(model: &ClassModel, type_name: &str) -> Result<InheritanceClosure, ModelError> {
    model.require(type_name)?;
    Ok(InheritanceClosure {
        ancestors: model
            .ancestors(type_name)
            .into_iter()
            .map(|t| t.qualified_name.clone())
            .collect(),
        descendants: model.descendants(type_name),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    DuplicateType,
    InheritanceCycle,
    MultipleSuperclasses,
    EmptyName,
    DuplicateField,
    DuplicateSignature,
    UnknownOwner,
    HalsteadCounts,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::DuplicateType => "duplicate type",
            Rule::InheritanceCycle => "inheritance cycle",
            Rule::MultipleSuperclasses => "multiple superclasses",
            Rule::EmptyName => "empty name",
            Rule::DuplicateField => "duplicate field",
            Rule::DuplicateSignature => "duplicate method signature",
            Rule::UnknownOwner => "unknown reference owner",
            Rule::HalsteadCounts => "inconsistent halstead counts",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub entity: String,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.rule.as_str())?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of the model. The result is sorted,
/// so it does not depend on construction order.
pub fn validate(model: &ClassModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |entity: &str, rule: Rule, detail: String| {
        out.push(Violation {
            entity: entity.to_string(),
            rule,
            detail,
        })
    };

    let mut seen = BTreeSet::new();
    for t in model.types() {
        if !seen.insert(t.qualified_name.as_str()) {
            push(&t.qualified_name, Rule::DuplicateType, String::new());
        }
    }

    for t in model.types() {
        let name = t.qualified_name.as_str();
        if name.is_empty() {
            push(name, Rule::EmptyName, "type".to_string());
        }
        if !t.is_interface() && t.super_types.len() > 1 {
            push(name, Rule::MultipleSuperclasses, t.super_types.join(", "));
        }
        let mut fields = BTreeSet::new();
        for f in &t.fields {
            if f.name.is_empty() {
                push(name, Rule::EmptyName, "field".to_string());
            } else if !fields.insert(f.name.as_str()) {
                push(name, Rule::DuplicateField, f.name.clone());
            }
        }
        let mut sigs = BTreeSet::new();
        for m in &t.methods {
            let sig = m.signature();
            if m.name.is_empty() {
                push(name, Rule::EmptyName, "method".to_string());
            } else if !sigs.insert(sig) {
                push(name, Rule::DuplicateSignature, format!("{sig}"));
            }
            if !m.halstead.is_consistent() {
                push(name, Rule::HalsteadCounts, format!("{sig}"));
            }
            for r in m.accessed_fields.iter().chain(&m.called_methods) {
                if r.is_resolved() && !model.is_declared(&r.owner) && !model.is_external(&r.owner) {
                    push(name, Rule::UnknownOwner, format!("{sig} -> {}", r.owner));
                }
            }
        }
    }

    for cycle in inheritance_cycles(model) {
        let entity = cycle[0].clone();
        push(&entity, Rule::InheritanceCycle, cycle.join(" -> "));
    }

    out.sort();
    out
}

/// Strongly connected components of the declared supertype graph that
/// contain a cycle, each sorted, listed in name order.
fn inheritance_cycles(model: &ClassModel) -> Vec<Vec<String>> {
    let names: Vec<&str> = model.index.keys().map(String::as_str).collect();
    let pos: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let edges: Vec<Vec<usize>> = names
        .iter()
        .map(|n| {
            let t = model.get(n).expect("indexed");
            t.super_types
                .iter()
                .chain(&t.interfaces)
                .filter_map(|s| pos.get(s.as_str()).copied())
                .collect()
        })
        .collect();

    // Iterative Tarjan.
    let n = names.len();
    let mut index = alloc::vec![usize::MAX; n];
    let mut low = alloc::vec![0usize; n];
    let mut on_stack = alloc::vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut sccs = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = alloc::vec![(start, 0)];
        index[start] = next;
        low[start] = next;
        next += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut ei)) = work.last_mut() {
            if *ei < edges[v].len() {
                let w = edges[v][*ei];
                *ei += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("scc stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    let cyclic = comp.len() > 1 || edges[v].contains(&v);
                    if cyclic {
                        let mut names: Vec<String> = comp.iter().map(|&i| names[i].to_string()).collect();
                        names.sort();
                        sccs.push(names);
                    }
                }
            }
        }
    }
    sccs.sort();
    sccs
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn chain_model() -> ClassModel {
        ClassModel::from_types(vec![
            TypeDecl::class("SuperC"),
            TypeDecl::class("A").extends("SuperC"),
            TypeDecl::class("C").extends("A"),
        ])
    }

    #[test]
    fn empty_model_is_valid() {
        assert!(validate(&ClassModel::default()).is_empty());
    }

    #[test]
    fn two_class_cycle_reported_once() {
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A").extends("B"),
            TypeDecl::class("B").extends("A"),
        ]);
        let v = validate(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::InheritanceCycle);
    }

    #[test]
    fn duplicate_type_reported() {
        let m = ClassModel::from_types(vec![TypeDecl::class("A"), TypeDecl::class("A")]);
        let v = validate(&m);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::DuplicateType);
        assert_eq!(v[0].to_string(), "A: duplicate type");
    }

    #[test]
    fn member_rules() {
        let mut m1 = MethodDecl::new("m", Visibility::Public);
        m1.called_methods.push(MemberRef::new("Nowhere", "x"));
        m1.halstead = HalsteadCounts::new(3, 0, 1, 0);
        let m = ClassModel::from_types(vec![TypeDecl::class("A")
            .extends("X")
            .extends("Y")
            .with_field(FieldDecl::new("f", "int", Visibility::Private))
            .with_field(FieldDecl::new("f", "int", Visibility::Private))
            .with_method(m1.clone())
            .with_method(m1)]);
        let rules: Vec<Rule> = validate(&m).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::MultipleSuperclasses));
        assert!(rules.contains(&Rule::DuplicateField));
        assert!(rules.contains(&Rule::DuplicateSignature));
        assert!(rules.contains(&Rule::UnknownOwner));
        assert!(rules.contains(&Rule::HalsteadCounts));
    }

    #[test]
    fn external_and_unresolved_owners_are_fine() {
        let mut meth = MethodDecl::new("m", Visibility::Public);
        meth.called_methods.push(MemberRef::new(UNRESOLVED, "x"));
        meth.called_methods.push(MemberRef::new("java.util.List", "add"));
        let ext = BTreeSet::from(["java.util.List".to_string()]);
        let m = ClassModel::new(vec![TypeDecl::class("A").with_method(meth)], ext, vec![]);
        assert!(validate(&m).is_empty());
    }

    #[test]
    fn ancestors_follow_superclass_chain() {
        let m = chain_model();
        let c = inheritance_closure(&m, "C").unwrap();
        assert_eq!(c.ancestors, vec!["A".to_string(), "SuperC".to_string()]);
        assert!(inheritance_closure(&m, "SuperC").unwrap().ancestors.is_empty());
        assert_eq!(
            inheritance_closure(&m, "nope"),
            Err(ModelError::UnknownType("nope".into()))
        );
    }

    #[test]
    fn descendants_are_transitive() {
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A"),
            TypeDecl::class("B").extends("A"),
            TypeDecl::class("D").extends("A"),
            TypeDecl::class("E").extends("D"),
        ]);
        let d = inheritance_closure(&m, "A").unwrap().descendants;
        assert_eq!(d, BTreeSet::from(["B".into(), "D".into(), "E".into()]));
    }

    #[test]
    fn interfaces_do_not_enter_dit_chain() {
        let m = ClassModel::from_types(vec![
            TypeDecl::interface("I"),
            TypeDecl::class("A").implements("I"),
            TypeDecl::class("B").extends("I"),
        ]);
        assert!(m.ancestors("A").is_empty());
        assert!(m.ancestors("B").is_empty());
        assert!(m.descendants("I").is_empty());
    }

    #[test]
    fn overrides_marked_from_ancestors() {
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A").with_method(MethodDecl::new("m1", Visibility::Public)),
            TypeDecl::class("B")
                .extends("A")
                .with_method(MethodDecl::new("m1", Visibility::Public))
                .with_method(MethodDecl::new("m2", Visibility::Public)),
        ]);
        let b = m.get("B").unwrap();
        assert!(b.methods[0].overrides_super);
        assert!(!b.methods[1].overrides_super);
    }

    #[test]
    fn base_type_strips_generics_and_arrays() {
        assert_eq!(base_type("List<B>"), "List");
        assert_eq!(base_type("B[]"), "B");
        assert_eq!(base_type("int"), "int");
        assert_eq!(base_type("String..."), "String");
    }
}
