//! Language-agnostic JSON interchange for class models.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use qualimeter_core::model::{
    base_type, ClassModel, FieldDecl, FileLineCount, HalsteadCounts, LineCounts, MemberRef, MethodDecl, TypeDecl,
    TypeKind, Visibility, UNRESOLVED,
};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub types: Vec<TypeJson>,
    #[serde(default)]
    pub files: Vec<FileJson>,
    #[serde(default, rename = "externalTypes", skip_serializing_if = "Option::is_none")]
    pub external_types: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeJson {
    pub name: String,
    pub kind: KindJson,
    #[serde(default)]
    pub package: Option<String>,
    #[serde(default)]
    pub extends: Vec<String>,
    #[serde(default)]
    pub implements: Vec<String>,
    #[serde(default)]
    pub fields: Vec<FieldJson>,
    #[serde(default)]
    pub methods: Vec<MethodJson>,
    #[serde(default)]
    pub lines: TypeLines,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub source: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeLines {
    #[serde(default)]
    pub total: u64,
    #[serde(default)]
    pub comment: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub name: String,
    #[serde(rename = "type", default)]
    pub declared_type: String,
    #[serde(default)]
    pub visibility: VisJson,
    #[serde(rename = "static", default)]
    pub is_static: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodJson {
    pub name: String,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub returns: String,
    #[serde(default)]
    pub visibility: VisJson,
    #[serde(rename = "static", default)]
    pub is_static: bool,
    #[serde(rename = "abstract", default)]
    pub is_abstract: bool,
    #[serde(rename = "constructor", default)]
    pub is_constructor: bool,
    #[serde(default)]
    pub decisions: u64,
    #[serde(default)]
    pub statements: u64,
    #[serde(default)]
    pub halstead: HalsteadJson,
    #[serde(default)]
    pub lines: MethodLines,
    #[serde(default)]
    pub accesses: Vec<(String, String)>,
    #[serde(default)]
    pub calls: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub overrides: bool,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalsteadJson {
    #[serde(default)]
    pub n1: u64,
    #[serde(default)]
    pub n2: u64,
    #[serde(rename = "N1", default)]
    pub big_n1: u64,
    #[serde(rename = "N2", default)]
    pub big_n2: u64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodLines {
    #[serde(default)]
    pub code: u64,
    #[serde(default)]
    pub comment: u64,
    #[serde(default)]
    pub blank: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileJson {
    pub path: String,
    #[serde(default)]
    pub language: String,
    #[serde(default)]
    pub code: u64,
    #[serde(default)]
    pub comment: u64,
    #[serde(default)]
    pub blank: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VisJson(pub Visibility);

impl Serialize for VisJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.0.as_str())
    }
}

impl<'de> Deserialize<'de> for VisJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Visibility::parse(&s)
            .map(VisJson)
            .ok_or_else(|| de::Error::custom(format!("unknown visibility `{s}` (expected public, protected, package or private)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KindJson(pub TypeKind);

impl Serialize for KindJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.0.as_str())
    }
}

impl<'de> Deserialize<'de> for KindJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TypeKind::parse(&s)
            .map(KindJson)
            .ok_or_else(|| de::Error::custom(format!("unknown kind `{s}` (expected class or interface)")))
    }
}

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void", ""];

impl Document {
    pub fn from_model(model: &ClassModel) -> Self {
        let types = model
            .types()
            .iter()
            .map(|t| TypeJson {
                name: t.qualified_name.clone(),
                kind: KindJson(t.kind),
                package: Some(t.package.clone()),
                extends: t.super_types.clone(),
                implements: t.interfaces.clone(),
                fields: t
                    .fields
                    .iter()
                    .map(|f| FieldJson {
                        name: f.name.clone(),
                        declared_type: f.declared_type.clone(),
                        visibility: VisJson(f.visibility),
                        is_static: f.is_static,
                    })
                    .collect(),
                methods: t.methods.iter().map(method_json).collect(),
                lines: TypeLines {
                    total: t.total_lines,
                    comment: t.comment_lines,
                },
                source: t.source_file.clone(),
            })
            .collect();
        Document {
            types,
            files: model
                .files()
                .iter()
                .map(|f| FileJson {
                    path: f.path.clone(),
                    language: f.language.clone(),
                    code: f.counts.code,
                    comment: f.counts.comment,
                    blank: f.counts.blank,
                })
                .collect(),
            external_types: Some(model.external_types().iter().cloned().collect()),
        }
    }

    pub fn into_model(self) -> ClassModel {
        let mut types = Vec::with_capacity(self.types.len());
        for t in self.types {
            let mut d = TypeDecl::new(t.name, t.kind.0);
            if let Some(p) = t.package {
                d.package = p;
            }
            d.super_types = t.extends;
            d.interfaces = t.implements;
            d.fields = t
                .fields
                .into_iter()
                .map(|f| {
                    let mut fd = FieldDecl::new(f.name, f.declared_type, f.visibility.0);
                    fd.is_static = f.is_static;
                    fd
                })
                .collect();
            d.methods = t.methods.into_iter().map(method_decl).collect();
            d.total_lines = t.lines.total;
            d.comment_lines = t.lines.comment;
            d.source_file = t.source;
            types.push(d);
        }
        let external = match self.external_types {
            Some(list) => list.into_iter().collect(),
            None => derive_externals(&types),
        };
        let files = self
            .files
            .into_iter()
            .map(|f| FileLineCount {
                path: f.path,
                language: if f.language.is_empty() { "unknown".into() } else { f.language },
                counts: LineCounts {
                    code: f.code,
                    comment: f.comment,
                    blank: f.blank,
                },
            })
            .collect();
        ClassModel::new(types, external, files)
    }
}

fn method_json(m: &MethodDecl) -> MethodJson {
    MethodJson {
        name: m.name.clone(),
        params: m.param_types.clone(),
        returns: m.return_type.clone(),
        visibility: VisJson(m.visibility),
        is_static: m.is_static,
        is_abstract: m.is_abstract,
        is_constructor: m.is_constructor,
        decisions: m.decision_count,
        statements: m.statements,
        halstead: HalsteadJson {
            n1: m.halstead.distinct_operators,
            n2: m.halstead.distinct_operands,
            big_n1: m.halstead.total_operators,
            big_n2: m.halstead.total_operands,
        },
        lines: MethodLines {
            code: m.lines.code,
            comment: m.lines.comment,
            blank: m.lines.blank,
        },
        accesses: m.accessed_fields.iter().map(|r| (r.owner.clone(), r.member.clone())).collect(),
        calls: m.called_methods.iter().map(|r| (r.owner.clone(), r.member.clone())).collect(),
        overrides: m.overrides_super,
    }
}

fn method_decl(m: MethodJson) -> MethodDecl {
    MethodDecl {
        name: m.name,
        param_types: m.params,
        return_type: m.returns,
        visibility: m.visibility.0,
        is_static: m.is_static,
        is_abstract: m.is_abstract,
        is_constructor: m.is_constructor,
        accessed_fields: m.accesses.into_iter().map(|(o, n)| MemberRef::new(o, n)).collect(),
        called_methods: m.calls.into_iter().map(|(o, n)| MemberRef::new(o, n)).collect(),
        decision_count: m.decisions,
        statements: m.statements,
        halstead: HalsteadCounts::new(m.halstead.n1, m.halstead.n2, m.halstead.big_n1, m.halstead.big_n2),
        lines: LineCounts {
            code: m.lines.code,
            comment: m.lines.comment,
            blank: m.lines.blank,
        },
        overrides_super: m.overrides,
    }
}

/// Referenced type names that are not declared, for files that do not
/// list them.
fn derive_externals(types: &[TypeDecl]) -> BTreeSet<String> {
    let declared: BTreeSet<&str> = types.iter().map(|t| t.qualified_name.as_str()).collect();
    let mut out = BTreeSet::new();
    let mut add = |name: &str| {
        let b = base_type(name);
        if !declared.contains(b) && !PRIMITIVES.contains(&b) && b != UNRESOLVED {
            out.insert(b.to_string());
        }
    };
    for t in types {
        t.super_types.iter().chain(&t.interfaces).for_each(|s| add(s));
        t.fields.iter().for_each(|f| add(&f.declared_type));
        for m in &t.methods {
            m.param_types.iter().for_each(|p| add(p));
            add(&m.return_type);
            m.accessed_fields.iter().chain(&m.called_methods).for_each(|r| add(&r.owner));
        }
    }
    out
}

/// Parses an interchange document; errors carry the field path and line.
pub fn parse(text: &str, path: &Path) -> Result<ClassModel> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        if at.is_empty() || at == "." {
            Error::schema(path, inner)
        } else {
            Error::schema(path, format!("at `{at}`: {inner}"))
        }
    })?;
    Ok(doc.into_model())
}

pub fn load(path: &Path) -> Result<ClassModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

pub fn to_string(model: &ClassModel) -> String {
    serde_json::to_string_pretty(&Document::from_model(model)).expect("interchange documents always serialize")
}

pub fn save(model: &ClassModel, path: &Path) -> Result<()> {
    fs::write(path, to_string(model) + "\n").map_err(|e| Error::io(path, e))
}
