//! Counting census of an extracted model: type kinds, member visibility,
//! inheritance edges and line totals.

use std::collections::BTreeMap;

use qualimeter_core::lines::{aggregate, LanguageTotals};
use qualimeter_core::model::{ClassModel, FileLineCount, TypeKind, Visibility};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VisibilitySplit {
    pub public: u64,
    pub protected: u64,
    pub package: u64,
    pub private: u64,
}

impl VisibilitySplit {
    fn add(&mut self, v: Visibility) {
        match v {
            Visibility::Public => self.public += 1,
            Visibility::Protected => self.protected += 1,
            Visibility::Package => self.package += 1,
            Visibility::Private => self.private += 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "public": self.public,
            "protected": self.protected,
            "package": self.package,
            "private": self.private,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Census {
    pub classes: u64,
    pub interfaces: u64,
    /// Distinct source files declaring at least one type.
    pub source_files: u64,
    pub fields: VisibilitySplit,
    pub methods: VisibilitySplit,
    /// `(subtype, supertype)` for every `extends` entry.
    pub extends: Vec<(String, String)>,
    pub implements: Vec<(String, String)>,
    pub files: Vec<FileLineCount>,
    pub languages: BTreeMap<String, LanguageTotals>,
}

pub fn census(model: &ClassModel) -> Census {
    let mut c = Census::default();
    let mut sources = std::collections::BTreeSet::new();
    for t in model.types() {
        match t.kind {
            TypeKind::Class => c.classes += 1,
            TypeKind::Interface => c.interfaces += 1,
        }
        if !t.source_file.is_empty() {
            sources.insert(t.source_file.as_str());
        }
        t.fields.iter().for_each(|f| c.fields.add(f.visibility));
        t.methods.iter().for_each(|m| c.methods.add(m.visibility));
        for s in &t.super_types {
            c.extends.push((t.qualified_name.clone(), s.clone()));
        }
        for i in &t.interfaces {
            c.implements.push((t.qualified_name.clone(), i.clone()));
        }
    }
    c.source_files = sources.len() as u64;
    c.extends.sort();
    c.implements.sort();
    c.files = model.files().to_vec();
    c.languages = aggregate(&c.files);
    c
}

impl Census {
    pub fn to_json(&self) -> Value {
        let pairs = |v: &[(String, String)]| -> Value { v.iter().map(|(a, b)| json!([a, b])).collect() };
        let mut languages = Map::new();
        for (lang, t) in &self.languages {
            languages.insert(
                lang.clone(),
                json!({"files": t.files, "blank": t.counts.blank, "comment": t.counts.comment, "code": t.counts.code}),
            );
        }
        json!({
            "schemaVersion": crate::report::SCHEMA_VERSION,
            "classes": self.classes,
            "interfaces": self.interfaces,
            "sourceFiles": self.source_files,
            "fields": self.fields.to_json(),
            "methods": self.methods.to_json(),
            "extends": pairs(&self.extends),
            "implements": pairs(&self.implements),
            "files": self.files.iter().map(|f| json!({
                "path": f.path, "language": f.language,
                "code": f.counts.code, "comment": f.counts.comment, "blank": f.counts.blank,
            })).collect::<Vec<_>>(),
            "languages": languages,
        })
    }
}
