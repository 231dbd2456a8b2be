//! cloc-style physical line classification.
//!
//! A line is blank if it holds only whitespace, comment if every
//! non-whitespace character lies inside comment syntax, and code otherwise.
//! A line mixing code and a comment is code.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{FileLineCount, LineCounts};

pub const UNKNOWN_LANGUAGE: &str = "unknown";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommentConfigError {
    #[error("language `{0}` has an empty comment delimiter")]
    EmptyDelimiter(String),
    #[error("language `{0}` has no extensions")]
    NoExtensions(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageCommentConfig {
    pub language: String,
    /// Lower-case extensions without the dot. A bare file name such as
    /// `Makefile` may also be listed.
    pub extensions: Vec<String>,
    pub line_prefixes: Vec<String>,
    pub block_pairs: Vec<(String, String)>,
}

impl LanguageCommentConfig {
    pub fn new(language: &str, extensions: &[&str], line: &[&str], blocks: &[(&str, &str)]) -> Self {
        LanguageCommentConfig {
            language: language.into(),
            extensions: extensions.iter().map(|e| (*e).into()).collect(),
            line_prefixes: line.iter().map(|p| (*p).into()).collect(),
            block_pairs: blocks.iter().map(|(a, b)| ((*a).into(), (*b).into())).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), CommentConfigError> {
        if self.extensions.is_empty() {
            return Err(CommentConfigError::NoExtensions(self.language.clone()));
        }
        let empty = self.line_prefixes.iter().any(String::is_empty)
            || self.block_pairs.iter().any(|(a, b)| a.is_empty() || b.is_empty());
        if empty {
            return Err(CommentConfigError::EmptyDelimiter(self.language.clone()));
        }
        Ok(())
    }
}

pub fn default_configs() -> Vec<LanguageCommentConfig> {
    let c_like = [("/*", "*/")];
    alloc::vec![
        LanguageCommentConfig::new("Java", &["java"], &["//"], &c_like),
        LanguageCommentConfig::new("C", &["c", "h"], &["//"], &c_like),
        LanguageCommentConfig::new("C++", &["cpp", "cc", "cxx", "hpp", "hh"], &["//"], &c_like),
        LanguageCommentConfig::new("C#", &["cs"], &["//"], &c_like),
        LanguageCommentConfig::new("JavaScript", &["js"], &["//"], &c_like),
        LanguageCommentConfig::new("Rust", &["rs"], &["//"], &c_like),
        LanguageCommentConfig::new("Python", &["py"], &["#"], &[]),
        LanguageCommentConfig::new("Perl", &["pl", "pm"], &["#"], &[]),
        LanguageCommentConfig::new("Bourne Shell", &["sh"], &["#"], &[]),
        LanguageCommentConfig::new("make", &["mk", "makefile"], &["#"], &[]),
        LanguageCommentConfig::new("XML", &["xml"], &[], &[("<!--", "-->")]),
        LanguageCommentConfig::new("HTML", &["html", "htm"], &[], &[("<!--", "-->")]),
        LanguageCommentConfig::new("CSS", &["css"], &[], &c_like),
        LanguageCommentConfig::new("SQL", &["sql"], &["--"], &c_like),
    ]
}

/// Picks the config for a path by extension, or by whole file name when the
/// file has no extension (`Makefile`). Matching is case-insensitive.
pub fn config_for<'a>(path: &str, configs: &'a [LanguageCommentConfig]) -> Option<&'a LanguageCommentConfig> {
    let file = path.rsplit(['/', '\\']).next().unwrap_or(path).to_ascii_lowercase();
    let key = match file.rfind('.') {
        Some(i) if i > 0 => &file[i + 1..],
        _ => file.as_str(),
    };
    configs.iter().find(|c| c.extensions.iter().any(|e| e.eq_ignore_ascii_case(key)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineClass {
    Blank,
    Comment,
    Code,
}

/// Classifies the lines of `text` under `config`; with `None` every
/// non-blank line is code.
pub fn count_text(text: &str, config: Option<&LanguageCommentConfig>) -> LineCounts {
    let mut counts = LineCounts::default();
    for class in classify_lines(text, config) {
        match class {
            LineClass::Code => counts.code += 1,
            LineClass::Comment => counts.comment += 1,
            LineClass::Blank => counts.blank += 1,
        }
    }
    counts
}

/// One class per physical line, in order.
pub fn classify_lines(text: &str, config: Option<&LanguageCommentConfig>) -> Vec<LineClass> {
    let mut out = Vec::new();
    // Closing delimiter of the block comment we are inside, if any.
    let mut open: Option<&str> = None;
    for line in text.lines() {
        let mut has_code = false;
        let mut has_comment = open.is_some() && !line.trim().is_empty();
        let mut rest = line;
        loop {
            if let Some(close) = open {
                match rest.find(close) {
                    Some(i) => {
                        rest = &rest[i + close.len()..];
                        open = None;
                    }
                    None => break,
                }
                continue;
            }
            let trimmed = rest.trim_start();
            if trimmed.is_empty() {
                break;
            }
            let Some(cfg) = config else {
                has_code = true;
                break;
            };
            if cfg.line_prefixes.iter().any(|p| trimmed.starts_with(p.as_str())) {
                has_comment = true;
                break;
            }
            if let Some((o, c)) = cfg.block_pairs.iter().find(|(o, _)| trimmed.starts_with(o.as_str())) {
                has_comment = true;
                open = Some(c.as_str());
                rest = &trimmed[o.len()..];
                continue;
            }
            has_code = true;
            // The remainder may still open a block comment spanning later lines.
            match earliest_block(trimmed, cfg) {
                Some((i, o, c)) => {
                    open = Some(c);
                    rest = &trimmed[i + o.len()..];
                }
                None => break,
            }
        }
        out.push(if has_code {
            LineClass::Code
        } else if has_comment {
            LineClass::Comment
        } else {
            LineClass::Blank
        });
    }
    out
}

/// First comment opener (line or block) in `s`, ignoring quoted strings.
/// Returns the block opener if it comes first; a line comment ends the scan.
fn earliest_block<'a>(s: &str, cfg: &'a LanguageCommentConfig) -> Option<(usize, &'a str, &'a str)> {
    let bytes = s.as_bytes();
    let mut quote: Option<u8> = None;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if let Some(q) = quote {
            if b == b'\\' {
                i += 2;
                continue;
            }
            if b == q {
                quote = None;
            }
            i += 1;
            continue;
        }
        if b == b'"' || b == b'\'' {
            quote = Some(b);
            i += 1;
            continue;
        }
        let tail = &s[i..];
        if cfg.line_prefixes.iter().any(|p| tail.starts_with(p.as_str())) {
            return None;
        }
        if let Some((o, c)) = cfg.block_pairs.iter().find(|(o, _)| tail.starts_with(o.as_str())) {
            return Some((i, o.as_str(), c.as_str()));
        }
        i += 1;
        while i < bytes.len() && !s.is_char_boundary(i) {
            i += 1;
        }
    }
    None
}

pub fn count_file(path: &str, text: &str, configs: &[LanguageCommentConfig]) -> FileLineCount {
    let cfg = config_for(path, configs);
    FileLineCount {
        path: path.into(),
        language: cfg.map_or(UNKNOWN_LANGUAGE.into(), |c| c.language.clone()),
        counts: count_text(text, cfg),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LanguageTotals {
    pub files: u64,
    pub counts: LineCounts,
}

/// Column sums per language, keyed by language name.
pub fn aggregate(files: &[FileLineCount]) -> BTreeMap<String, LanguageTotals> {
    let mut out: BTreeMap<String, LanguageTotals> = BTreeMap::new();
    for f in files {
        let t = out.entry(f.language.clone()).or_default();
        t.files += 1;
        t.counts += f.counts;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn java() -> LanguageCommentConfig {
        default_configs().remove(0)
    }

    fn lc(code: u64, comment: u64, blank: u64) -> LineCounts {
        LineCounts { code, comment, blank }
    }

    #[test]
    fn empty_file() {
        assert_eq!(count_text("", Some(&java())), lc(0, 0, 0));
    }

    #[test]
    fn three_two_one() {
        let src = "// header\nclass A {\n\n  /* note */\n  int x;\n}\n";
        assert_eq!(count_text(src, Some(&java())), lc(3, 2, 1));
    }

    #[test]
    fn mixed_line_is_code() {
        assert_eq!(count_text("int x; // note", Some(&java())), lc(1, 0, 0));
        assert_eq!(count_text("/* a */ int x;", Some(&java())), lc(1, 0, 0));
    }

    #[test]
    fn block_spanning_lines() {
        let src = "int a; /* start\n still comment\n end */\n/*\n\n*/ int b;";
        // The blank line inside a block comment is whitespace only, so blank.
        assert_eq!(count_text(src, Some(&java())), lc(2, 3, 1));
    }

    #[test]
    fn delimiter_in_string_is_not_comment() {
        let src = "String s = \"/*\";\nint y;";
        assert_eq!(count_text(src, Some(&java())), lc(2, 0, 0));
    }

    #[test]
    fn lookup() {
        let cfgs = default_configs();
        assert_eq!(config_for("a/b/X.JAVA", &cfgs).unwrap().language, "Java");
        assert_eq!(config_for("Makefile", &cfgs).unwrap().language, "make");
        assert!(config_for("notes.txt", &cfgs).is_none());
        let f = count_file("notes.txt", "x\n\n", &cfgs);
        assert_eq!(f.language, UNKNOWN_LANGUAGE);
        assert_eq!(f.counts, lc(1, 0, 1));
    }

    #[test]
    fn aggregate_sums_columns() {
        let cfgs = default_configs();
        let files = [
            count_file("a.java", "int x;\n// c\n", &cfgs),
            count_file("b.java", "\n", &cfgs),
            count_file("run.sh", "# c\necho\n", &cfgs),
        ];
        let agg = aggregate(&files);
        assert_eq!(agg["Java"].files, 2);
        assert_eq!(agg["Java"].counts, lc(1, 1, 1));
        assert_eq!(agg["Bourne Shell"].counts, lc(1, 1, 0));
    }

    #[test]
    fn config_validation() {
        let bad = LanguageCommentConfig::new("X", &["x"], &[""], &[]);
        assert!(bad.validate().is_err());
        assert!(default_configs().iter().all(|c| c.validate().is_ok()));
    }
}
