//! Filesystem input: walking source trees, extraction and line counting.

use std::fs;
use std::path::{Path, PathBuf};

use qualimeter_core::java::{self, Diagnostic};
use qualimeter_core::lines::{self, LanguageCommentConfig};
use qualimeter_core::model::{ClassModel, FileLineCount};
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::interchange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    /// Interchange if every input is a `.json` file, Java source otherwise.
    #[default]
    Auto,
    Java,
    Interchange,
}

/// A readable file with its display path (relative to the root it was
/// found under, `/`-separated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub display: String,
    pub path: PathBuf,
}

fn display_path(root: &Path, file: &Path) -> String {
    let rel = if root.is_file() {
        Path::new(file.file_name().unwrap_or(file.as_os_str())).to_path_buf()
    } else {
        file.strip_prefix(root).unwrap_or(file).to_path_buf()
    };
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

/// Every regular file under `roots`, sorted by display path. Missing roots
/// are usage errors.
pub fn walk(roots: &[PathBuf]) -> Result<Vec<SourceFile>> {
    let mut out = Vec::new();
    for root in roots {
        if !root.exists() {
            return Err(Error::Usage(format!("input path `{}` does not exist", root.display())));
        }
        for entry in WalkDir::new(root).follow_links(false).sort_by_file_name() {
            let entry = entry.map_err(|e| {
                let path = e.path().unwrap_or(root).to_path_buf();
                Error::io(&path, e.into_io_error().unwrap_or_else(|| std::io::Error::other("walk failed")))
            })?;
            if entry.file_type().is_file() {
                out.push(SourceFile {
                    display: display_path(root, entry.path()),
                    path: entry.path().to_path_buf(),
                });
            }
        }
    }
    out.sort_by(|a, b| a.display.cmp(&b.display).then_with(|| a.path.cmp(&b.path)));
    Ok(out)
}

fn read_lossy(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub model: ClassModel,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn resolve_mode(roots: &[PathBuf], mode: InputMode) -> InputMode {
    match mode {
        InputMode::Auto => {
            let all_json = !roots.is_empty()
                && roots
                    .iter()
                    .all(|r| r.is_file() && r.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")));
            if all_json {
                InputMode::Interchange
            } else {
                InputMode::Java
            }
        }
        m => m,
    }
}

/// Builds the class model from Java trees or interchange files.
pub fn load_model(roots: &[PathBuf], mode: InputMode) -> Result<Loaded> {
    match resolve_mode(roots, mode) {
        InputMode::Interchange => {
            let mut types = Vec::new();
            let mut files = Vec::new();
            let mut external = std::collections::BTreeSet::new();
            for r in roots {
                if !r.is_file() {
                    return Err(Error::Usage(format!("interchange input `{}` is not a file", r.display())));
                }
                let m = interchange::load(r)?;
                types.extend(m.types().iter().cloned());
                files.extend(m.files().iter().cloned());
                external.extend(m.external_types().iter().cloned());
            }
            for t in &types {
                external.remove(&t.qualified_name);
            }
            Ok(Loaded {
                model: ClassModel::new(types, external, files),
                diagnostics: Vec::new(),
            })
        }
        _ => extract(roots, &lines::default_configs()),
    }
}

/// Parses every `.java` file under `roots` and line-counts all files.
pub fn extract(roots: &[PathBuf], configs: &[LanguageCommentConfig]) -> Result<Loaded> {
    let files = walk(roots)?;
    let mut sources = Vec::with_capacity(files.len());
    let mut diagnostics = Vec::new();
    for f in files {
        match read_lossy(&f.path) {
            Ok(text) => sources.push((f.display, text)),
            Err(e) => diagnostics.push(Diagnostic {
                path: f.display,
                severity: java::Severity::Error,
                message: format!("unreadable: {e}; file skipped"),
            }),
        }
    }
    let ex = java::extract(&sources, configs);
    diagnostics.extend(ex.diagnostics);
    diagnostics.sort();
    Ok(Loaded {
        model: ex.model,
        diagnostics,
    })
}

/// Per-file line counts for every file under `roots`.
pub fn count_lines(roots: &[PathBuf], configs: &[LanguageCommentConfig]) -> Result<Vec<FileLineCount>> {
    walk(roots)?
        .into_iter()
        .map(|f| {
            let text = read_lossy(&f.path)?;
            Ok(lines::count_file(&f.display, &text, configs))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_root_is_usage_error() {
        let err = walk(&[PathBuf::from("/definitely/not/here")]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn walk_is_sorted_and_relative() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("b")).unwrap();
        fs::write(dir.path().join("b/Z.java"), "class Z {}").unwrap();
        fs::write(dir.path().join("A.java"), "class A {}").unwrap();
        let files = walk(&[dir.path().to_path_buf()]).unwrap();
        let names: Vec<_> = files.iter().map(|f| f.display.as_str()).collect();
        assert_eq!(names, ["A.java", "b/Z.java"]);
        let loaded = extract(&[dir.path().to_path_buf()], &lines::default_configs()).unwrap();
        assert_eq!(loaded.model.len(), 2);
    }
}
