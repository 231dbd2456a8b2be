//! Shallow Java extraction: a comment- and literal-aware lexer plus a
//! brace-matched declaration parser. Type names are resolved against the
//! declared types of the whole source set using package, imports and
//! nesting; anything else is kept by name as an external type.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::lines::{self, LanguageCommentConfig, LineClass};
use crate::model::{
    base_type, ClassModel, FieldDecl, HalsteadCounts, LineCounts, MemberRef, MethodDecl, TypeDecl,
    TypeKind, Visibility, UNRESOLVED,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JavaError {
    #[error("unbalanced braces near line {0}")]
    UnbalancedBraces(u32),
    #[error("unterminated comment starting at line {0}")]
    UnterminatedComment(u32),
    #[error("unterminated literal at line {0}")]
    UnterminatedLiteral(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub path: String,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub model: ClassModel,
    pub diagnostics: Vec<Diagnostic>,
}

// ---------------------------------------------------------------- lexer

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ident,
    Keyword,
    Number,
    Str,
    Char,
    Punct,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    kind: Kind,
    text: &'a str,
    line: u32,
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long", "native", "new", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false", "null",
];

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

// `>>` and `>>>` are deliberately absent: they are lexed as single `>`
// so that nested generic arguments close correctly.
const PUNCT: &[&str] = &[
    ">>>=", "<<=", ">>=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "<<",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

fn lex(src: &str) -> Result<Vec<Token<'_>>, JavaError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'\n' {
            line += 1;
            i += 1;
            continue;
        }
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let rest = &src[i..];
        if rest.starts_with("//") {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        if let Some(body) = rest.strip_prefix("/*") {
            let end = body.find("*/").ok_or(JavaError::UnterminatedComment(line))? + 4;
            line += rest[..end].matches('\n').count() as u32;
            i += end;
            continue;
        }
        let start_line = line;
        if let Some(body) = rest.strip_prefix("\"\"\"") {
            let end = body.find("\"\"\"").ok_or(JavaError::UnterminatedLiteral(line))? + 6;
            line += rest[..end].matches('\n').count() as u32;
            toks.push(Token { kind: Kind::Str, text: &rest[..end], line: start_line });
            i += end;
            continue;
        }
        if b == b'"' || b == b'\'' {
            let mut j = 1;
            loop {
                match bytes.get(i + j) {
                    None | Some(b'\n') => return Err(JavaError::UnterminatedLiteral(line)),
                    Some(b'\\') => j += 2,
                    Some(&c) if c == b => break,
                    Some(_) => j += 1,
                }
            }
            let kind = if b == b'"' { Kind::Str } else { Kind::Char };
            toks.push(Token { kind, text: &rest[..=j], line });
            i += j + 1;
            continue;
        }
        let c = rest.chars().next().unwrap_or(' ');
        if is_ident_start(c) {
            let len = rest.find(|ch: char| !is_ident_part(ch)).unwrap_or(rest.len());
            let text = &rest[..len];
            let kind = if KEYWORDS.contains(&text) { Kind::Keyword } else { Kind::Ident };
            toks.push(Token { kind, text, line });
            i += len;
            continue;
        }
        if b.is_ascii_digit() || (b == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let hex = rest.starts_with("0x") || rest.starts_with("0X");
            let mut j = 0;
            while let Some(&d) = bytes.get(i + j) {
                let exp_sign = (d == b'+' || d == b'-')
                    && j > 0
                    && matches!(bytes[i + j - 1], b'e' | b'E' | b'p' | b'P')
                    && (!hex || matches!(bytes[i + j - 1], b'p' | b'P'));
                if d.is_ascii_alphanumeric() || d == b'_' || d == b'.' || exp_sign {
                    j += 1;
                } else {
                    break;
                }
            }
            toks.push(Token { kind: Kind::Number, text: &rest[..j], line });
            i += j;
            continue;
        }
        let len = PUNCT
            .iter()
            .find(|p| rest.starts_with(**p))
            .map_or(c.len_utf8(), |p| p.len());
        toks.push(Token { kind: Kind::Punct, text: &rest[..len], line });
        i += len;
    }
    let mut depth = 0i64;
    for t in &toks {
        match t.text {
            "{" if t.kind == Kind::Punct => depth += 1,
            "}" if t.kind == Kind::Punct => {
                depth -= 1;
                if depth < 0 {
                    return Err(JavaError::UnbalancedBraces(t.line));
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(JavaError::UnbalancedBraces(toks.last().map_or(line, |t| t.line)));
    }
    Ok(toks)
}

// ---------------------------------------------------------------- raw declarations

/// Receiver or owner as written in the source, before resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Owner {
    /// Already a qualified declared name (the enclosing type).
    Exact(String),
    /// A type name as written.
    Named(String),
    Unresolved,
}

#[derive(Debug, Clone)]
struct RawMethod {
    decl: MethodDecl,
    type_params: Vec<String>,
    accesses: Vec<(Owner, String)>,
    calls: Vec<(Owner, String)>,
}

#[derive(Debug, Clone)]
struct RawType {
    decl: TypeDecl,
    /// Qualified names of the enclosing types, innermost last.
    enclosing: Vec<String>,
    type_params: Vec<String>,
    methods: Vec<RawMethod>,
}

#[derive(Debug, Clone, Default)]
struct RawFile {
    package: String,
    single_imports: Vec<String>,
    wildcard_imports: Vec<String>,
    types: Vec<RawType>,
}

#[derive(Debug, Clone, Copy)]
struct Span {
    first: u32,
    last: u32,
}

fn span_counts(classes: &[LineClass], span: Span) -> LineCounts {
    let mut c = LineCounts::default();
    let lo = span.first.saturating_sub(1) as usize;
    let hi = (span.last as usize).min(classes.len());
    for class in classes.get(lo..hi).unwrap_or(&[]) {
        match class {
            LineClass::Code => c.code += 1,
            LineClass::Comment => c.comment += 1,
            LineClass::Blank => c.blank += 1,
        }
    }
    c
}

// ---------------------------------------------------------------- parser

struct Parser<'a, 't> {
    toks: &'t [Token<'a>],
    pos: usize,
    package: String,
    classes: &'t [LineClass],
    path: String,
    out: Vec<RawType>,
}

#[derive(Debug, Default, Clone, Copy)]
struct Modifiers {
    visibility: Option<Visibility>,
    is_static: bool,
    is_abstract: bool,
    is_default: bool,
}

const MODIFIER_WORDS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized", "transient",
    "volatile", "strictfp", "default", "sealed",
];

impl<'a, 't> Parser<'a, 't> {
    fn peek(&self, k: usize) -> Option<Token<'a>> {
        self.toks.get(self.pos + k).copied()
    }

    fn at(&self, text: &str) -> bool {
        self.peek(0).is_some_and(|t| t.text == text && t.kind != Kind::Str && t.kind != Kind::Char)
    }

    fn at_k(&self, k: usize, text: &str) -> bool {
        self.peek(k).is_some_and(|t| t.text == text && t.kind != Kind::Str && t.kind != Kind::Char)
    }

    fn line(&self) -> u32 {
        self.peek(0).or(self.toks.last().copied()).map_or(1, |t| t.line)
    }

    /// Index just past the token matching the opener at `open`.
    fn matching(&self, open: usize) -> usize {
        let (o, c) = match self.toks[open].text {
            "(" => ("(", ")"),
            "[" => ("[", "]"),
            _ => ("{", "}"),
        };
        let mut depth = 0usize;
        for (k, t) in self.toks[open..].iter().enumerate() {
            if t.kind != Kind::Punct {
                continue;
            }
            if t.text == o {
                depth += 1;
            } else if t.text == c {
                depth -= 1;
                if depth == 0 {
                    return open + k + 1;
                }
            }
        }
        self.toks.len()
    }

    /// If a generic argument list starts at `i`, the index just past it.
    fn generic_end(&self, i: usize) -> Option<usize> {
        if self.toks.get(i)?.text != "<" {
            return None;
        }
        let mut depth = 0usize;
        for (k, t) in self.toks[i..].iter().enumerate() {
            match (t.kind, t.text) {
                (Kind::Punct, "<") => depth += 1,
                (Kind::Punct, ">") => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i + k + 1);
                    }
                }
                (Kind::Punct, "," | "." | "?" | "&" | "[" | "]" | "@") => {}
                (Kind::Ident, _) => {}
                (Kind::Keyword, w) if PRIMITIVES.contains(&w) || w == "extends" || w == "super" => {}
                _ => return None,
            }
        }
        None
    }

    fn skip_annotation(&mut self) {
        // `@` Name(.Name)* [ ( ... ) ]
        self.pos += 1;
        while self.peek(0).is_some_and(|t| t.kind == Kind::Ident) {
            self.pos += 1;
            if self.at(".") && self.peek(1).is_some_and(|t| t.kind == Kind::Ident) {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.at("(") {
            self.pos = self.matching(self.pos);
        }
    }

    fn modifiers(&mut self) -> Modifiers {
        let mut m = Modifiers::default();
        loop {
            if self.at("@") && !self.at_k(1, "interface") {
                self.skip_annotation();
                continue;
            }
            // `non-sealed`
            if self.at("non") && self.at_k(1, "-") && self.at_k(2, "sealed") {
                self.pos += 3;
                continue;
            }
            let Some(t) = self.peek(0) else { break };
            if !MODIFIER_WORDS.contains(&t.text) || t.kind == Kind::Str {
                break;
            }
            // `default` as a switch label never reaches here; in an
            // interface it marks a method with a body.
            if t.text == "sealed" && !self.peek(1).is_some_and(|n| n.kind == Kind::Keyword || n.kind == Kind::Ident) {
                break;
            }
            match t.text {
                "public" => m.visibility = Some(Visibility::Public),
                "protected" => m.visibility = Some(Visibility::Protected),
                "private" => m.visibility = Some(Visibility::Private),
                "static" => m.is_static = true,
                "abstract" => m.is_abstract = true,
                "default" => m.is_default = true,
                _ => {}
            }
            self.pos += 1;
        }
        m
    }

    /// Parses a type starting at the cursor; returns its source text.
    fn parse_type(&mut self) -> Option<String> {
        let start = self.pos;
        let mut text = String::new();
        while self.at("@") {
            self.skip_annotation();
        }
        let first = self.peek(0)?;
        let ok = first.kind == Kind::Ident || (first.kind == Kind::Keyword && PRIMITIVES.contains(&first.text));
        if !ok {
            self.pos = start;
            return None;
        }
        loop {
            let t = self.peek(0)?;
            text.push_str(t.text);
            self.pos += 1;
            if let Some(end) = self.generic_end(self.pos) {
                text.push_str(&join_tokens(&self.toks[self.pos..end]));
                self.pos = end;
            }
            if self.at(".") && self.peek(1).is_some_and(|t| t.kind == Kind::Ident) {
                text.push('.');
                self.pos += 1;
                continue;
            }
            break;
        }
        loop {
            while self.at("@") {
                self.skip_annotation();
            }
            if self.at("[") && self.at_k(1, "]") {
                text.push_str("[]");
                self.pos += 2;
            } else if self.at("...") {
                text.push_str("...");
                self.pos += 1;
            } else {
                break;
            }
        }
        Some(text)
    }

    fn type_params(&mut self) -> Vec<String> {
        let Some(end) = self.generic_end(self.pos) else {
            return Vec::new();
        };
        let mut names = Vec::new();
        let mut depth = 0;
        let mut expect_name = true;
        for t in &self.toks[self.pos..end] {
            match t.text {
                "<" => {
                    depth += 1;
                    expect_name = depth == 1;
                }
                ">" => depth -= 1,
                "," if depth == 1 => expect_name = true,
                _ if expect_name && t.kind == Kind::Ident => {
                    names.push(t.text.to_string());
                    expect_name = false;
                }
                _ => {}
            }
        }
        self.pos = end;
        names
    }

    fn type_list(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while let Some(t) = self.parse_type() {
            out.push(t);
            if self.at(",") {
                self.pos += 1;
            } else {
                break;
            }
        }
        out
    }

    fn parse_file(&mut self) -> (Vec<String>, Vec<String>) {
        let mut single = Vec::new();
        let mut wildcard = Vec::new();
        while self.pos < self.toks.len() {
            if self.at("@") && !self.at_k(1, "interface") {
                self.skip_annotation();
                continue;
            }
            if self.at("package") {
                self.pos += 1;
                self.package = self.dotted();
                continue;
            }
            if self.at("import") {
                self.pos += 1;
                let is_static = self.at("static");
                if is_static {
                    self.pos += 1;
                }
                let name = self.dotted();
                if !is_static {
                    match name.strip_suffix(".*") {
                        Some(p) => wildcard.push(p.to_string()),
                        None => single.push(name),
                    }
                }
                continue;
            }
            if self.at(";") {
                self.pos += 1;
                continue;
            }
            let start = self.pos;
            self.modifiers();
            if self.type_keyword().is_some() {
                self.parse_type_decl(start, &[]);
            } else {
                // Not a declaration we understand: skip one token.
                self.pos = start.max(self.pos) + 1;
            }
        }
        (single, wildcard)
    }

    fn dotted(&mut self) -> String {
        let mut s = String::new();
        while let Some(t) = self.peek(0) {
            self.pos += 1;
            if t.text == ";" {
                break;
            }
            s.push_str(t.text);
        }
        s
    }

    fn type_keyword(&self) -> Option<TypeKind> {
        let t = self.peek(0)?;
        match (t.kind, t.text) {
            (Kind::Keyword, "class" | "enum") => Some(TypeKind::Class),
            (Kind::Keyword, "interface") => Some(TypeKind::Interface),
            (Kind::Punct, "@") if self.at_k(1, "interface") => Some(TypeKind::Interface),
            (Kind::Ident, "record")
                if self.peek(1).is_some_and(|n| n.kind == Kind::Ident)
                    && (self.at_k(2, "(") || self.at_k(2, "<")) =>
            {
                Some(TypeKind::Class)
            }
            _ => None,
        }
    }

    fn parse_type_decl(&mut self, start: usize, enclosing: &[String]) {
        let kind = self.type_keyword().unwrap_or(TypeKind::Class);
        let keyword = self.peek(0).map_or("class", |t| t.text);
        let is_enum = keyword == "enum";
        let is_record = keyword == "record";
        self.pos += if keyword == "@" { 2 } else { 1 };
        let Some(name) = self.peek(0).filter(|t| t.kind == Kind::Ident).map(|t| t.text) else {
            return;
        };
        self.pos += 1;
        let qualified = match enclosing.last() {
            Some(outer) => format!("{outer}.{name}"),
            None if self.package.is_empty() => name.to_string(),
            None => format!("{}.{name}", self.package),
        };
        let mut decl = TypeDecl::new(qualified.clone(), kind);
        decl.package = self.package.clone();
        decl.source_file = self.path.clone();
        let type_params = self.type_params();
        let mut fields = Vec::new();
        if is_record && self.at("(") {
            let end = self.matching(self.pos);
            for (ty, n) in self.params(self.pos + 1, end - 1) {
                let mut f = FieldDecl::new(n, ty, Visibility::Private);
                f.is_static = false;
                fields.push(f);
            }
            self.pos = end;
        }
        let record_params: Vec<String> = fields.iter().map(|f: &FieldDecl| f.declared_type.clone()).collect();
        loop {
            if self.at("extends") {
                self.pos += 1;
                let list = self.type_list();
                decl.super_types.extend(list);
            } else if self.at("implements") {
                self.pos += 1;
                decl.interfaces.extend(self.type_list());
            } else if self.at("permits") {
                self.pos += 1;
                self.type_list();
            } else {
                break;
            }
        }
        decl.fields = fields;
        if !self.at("{") {
            return;
        }
        let body_end = self.matching(self.pos);
        let first_line = self.toks[start].line;
        let last_line = self.toks[body_end - 1].line;
        let span = span_counts(self.classes, Span { first: first_line, last: last_line });
        decl.total_lines = span.total();
        decl.comment_lines = span.comment;

        let mut chain = enclosing.to_vec();
        chain.push(qualified.clone());
        let slot = self.out.len();
        self.out.push(RawType {
            decl,
            enclosing: enclosing.to_vec(),
            type_params,
            methods: Vec::new(),
        });
        self.pos += 1;
        if is_enum {
            self.enum_constants(slot, name, body_end - 1);
        }
        self.members(slot, kind, name, &chain, body_end - 1, &record_params, is_record);
        self.pos = body_end;
    }

    fn enum_constants(&mut self, slot: usize, enum_name: &str, close: usize) {
        while self.pos < close {
            while self.at("@") {
                self.skip_annotation();
            }
            let Some(t) = self.peek(0).filter(|t| t.kind == Kind::Ident) else { break };
            let mut f = FieldDecl::new(t.text, enum_name, Visibility::Public);
            f.is_static = true;
            self.out[slot].decl.fields.push(f);
            self.pos += 1;
            if self.at("(") {
                self.pos = self.matching(self.pos);
            }
            if self.at("{") {
                self.pos = self.matching(self.pos);
            }
            if self.at(",") {
                self.pos += 1;
                continue;
            }
            break;
        }
        if self.at(";") {
            self.pos += 1;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn members(
        &mut self,
        slot: usize,
        kind: TypeKind,
        simple: &str,
        chain: &[String],
        close: usize,
        record_params: &[String],
        is_record: bool,
    ) {
        let in_interface = kind == TypeKind::Interface;
        while self.pos < close {
            if self.at(";") {
                self.pos += 1;
                continue;
            }
            let start = self.pos;
            let mods = self.modifiers();
            if self.at("{") {
                self.pos = self.matching(self.pos);
                continue;
            }
            if self.type_keyword().is_some() {
                self.parse_type_decl(start, chain);
                continue;
            }
            let method_type_params = self.type_params();
            let visibility = mods.visibility.unwrap_or(if in_interface {
                Visibility::Public
            } else {
                Visibility::Package
            });

            // Constructor, or a record's compact canonical constructor.
            let is_ctor_name = self.at(simple) && self.peek(0).is_some_and(|t| t.kind == Kind::Ident);
            if is_ctor_name && (self.at_k(1, "(") || (is_record && self.at_k(1, "{"))) {
                self.pos += 1;
                let mut m = MethodDecl::new(simple, visibility);
                m.return_type = String::new();
                m.is_constructor = true;
                m.is_static = mods.is_static;
                if self.at("(") {
                    let end = self.matching(self.pos);
                    m.param_types = self.params(self.pos + 1, end - 1).into_iter().map(|(t, _)| t).collect();
                    self.pos = end;
                } else {
                    m.param_types = record_params.to_vec();
                }
                self.finish_method(slot, start, m, method_type_params, in_interface, mods);
                continue;
            }

            let Some(ty) = self.parse_type() else {
                self.skip_member(close);
                continue;
            };
            let Some(name_tok) = self.peek(0).filter(|t| t.kind == Kind::Ident) else {
                self.skip_member(close);
                continue;
            };
            self.pos += 1;
            if self.at("(") {
                let end = self.matching(self.pos);
                let mut m = MethodDecl::new(name_tok.text, visibility);
                m.param_types = self.params(self.pos + 1, end - 1).into_iter().map(|(t, _)| t).collect();
                m.return_type = ty;
                m.is_static = mods.is_static;
                self.pos = end;
                while self.at("[") && self.at_k(1, "]") {
                    m.return_type.push_str("[]");
                    self.pos += 2;
                }
                self.finish_method(slot, start, m, method_type_params, in_interface, mods);
                continue;
            }
            // Field declarators: name [dims] [= init] {, name [dims] [= init]} ;
            let mut name = name_tok.text;
            loop {
                let mut declared = ty.clone();
                while self.at("[") && self.at_k(1, "]") {
                    declared.push_str("[]");
                    self.pos += 2;
                }
                let mut f = FieldDecl::new(name, declared, visibility);
                f.is_static = mods.is_static || in_interface;
                self.out[slot].decl.fields.push(f);
                if self.at("=") {
                    self.skip_initializer(close);
                }
                if self.at(",") && self.peek(1).is_some_and(|t| t.kind == Kind::Ident) {
                    name = self.toks[self.pos + 1].text;
                    self.pos += 2;
                    continue;
                }
                break;
            }
            if self.at(";") {
                self.pos += 1;
            }
        }
    }

    fn skip_member(&mut self, close: usize) {
        while self.pos < close {
            if self.at(";") {
                self.pos += 1;
                return;
            }
            if self.at("{") {
                self.pos = self.matching(self.pos);
                return;
            }
            if self.at("(") || self.at("[") {
                self.pos = self.matching(self.pos);
                continue;
            }
            self.pos += 1;
        }
    }

    /// Moves to the `,` or `;` ending a field initializer.
    fn skip_initializer(&mut self, close: usize) {
        self.pos += 1;
        while self.pos < close {
            if self.at(",") || self.at(";") {
                return;
            }
            if self.at("(") || self.at("[") || self.at("{") {
                self.pos = self.matching(self.pos);
                continue;
            }
            if self.peek(0).is_some_and(|t| t.kind == Kind::Ident) {
                self.pos += 1;
                if let Some(end) = self.generic_end(self.pos) {
                    self.pos = end;
                }
                continue;
            }
            self.pos += 1;
        }
    }

    /// Formal parameters between token indices `lo` (inclusive) and `hi`
    /// (exclusive): (type text, name) pairs.
    fn params(&mut self, lo: usize, hi: usize) -> Vec<(String, String)> {
        let saved = self.pos;
        self.pos = lo;
        let mut out = Vec::new();
        while self.pos < hi {
            self.modifiers();
            let Some(mut ty) = self.parse_type() else { break };
            let Some(name) = self.peek(0).filter(|t| t.kind == Kind::Ident || t.text == "this").map(|t| t.text) else {
                break;
            };
            self.pos += 1;
            while self.at("[") && self.at_k(1, "]") {
                ty.push_str("[]");
                self.pos += 2;
            }
            if name != "this" {
                out.push((ty, name.to_string()));
            }
            if self.at(",") {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.pos = saved;
        out
    }

    fn finish_method(
        &mut self,
        slot: usize,
        start: usize,
        mut m: MethodDecl,
        type_params: Vec<String>,
        in_interface: bool,
        mods: Modifiers,
    ) {
        if self.at("throws") {
            self.pos += 1;
            self.type_list();
        }
        let mut facts = BodyFacts::default();
        let last_line;
        if self.at("{") {
            let end = self.matching(self.pos);
            let owner = &self.out[slot];
            let scope = Scope::new(owner, self.toks, self.pos + 1, end - 1);
            facts = analyze_body(&self.toks[self.pos + 1..end - 1], &scope);
            last_line = self.toks[end - 1].line;
            self.pos = end;
        } else {
            // Abstract, native, or an annotation element with a default.
            while self.pos < self.toks.len() && !self.at(";") {
                self.pos += 1;
            }
            last_line = self.line();
            self.pos += 1;
            m.is_abstract = mods.is_abstract || (in_interface && !mods.is_static && !mods.is_default);
        }
        if mods.is_abstract {
            m.is_abstract = true;
        }
        m.decision_count = facts.decisions;
        m.statements = facts.statements;
        m.halstead = facts.halstead;
        m.lines = span_counts(self.classes, Span { first: self.toks[start].line, last: last_line });
        self.out[slot].methods.push(RawMethod {
            decl: m,
            type_params,
            accesses: facts.accesses,
            calls: facts.calls,
        });
    }
}

fn join_tokens(toks: &[Token<'_>]) -> String {
    let mut s = String::new();
    for t in toks {
        if t.text == "extends" || t.text == "super" || t.text == "&" {
            s.push(' ');
            s.push_str(t.text);
            s.push(' ');
        } else {
            s.push_str(t.text);
        }
    }
    s
}

// ---------------------------------------------------------------- method bodies

/// Names visible in a method body, mapped to their declared type text.
struct Scope<'s> {
    owner: &'s str,
    super_name: Option<&'s str>,
    fields: BTreeMap<&'s str, &'s str>,
    /// Parameters and locals; these shadow fields.
    locals: BTreeMap<String, String>,
}

impl<'s> Scope<'s> {
    fn new(owner: &'s RawType, toks: &[Token<'_>], lo: usize, hi: usize) -> Self {
        let mut locals = BTreeMap::new();
        // Parameter names are not stored on MethodDecl; recover them from
        // the header tokens just before the body.
        let mut k = lo.saturating_sub(1);
        while k > 0 && toks[k].text != ")" {
            k -= 1;
        }
        let mut depth = 0i32;
        let mut j = k;
        while j > 0 {
            match toks[j].text {
                ")" => depth += 1,
                "(" => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            j -= 1;
        }
        if j < k {
            let header = Parser {
                toks,
                pos: 0,
                package: String::new(),
                classes: &[],
                path: String::new(),
                out: Vec::new(),
            };
            let mut header = header;
            for (ty, name) in header.params(j + 1, k) {
                locals.insert(name, ty);
            }
        }
        collect_locals(&toks[lo..hi], &mut locals);
        Scope {
            owner: &owner.decl.qualified_name,
            super_name: owner.decl.super_types.first().filter(|_| !owner.decl.is_interface()).map(String::as_str),
            fields: owner
                .decl
                .fields
                .iter()
                .map(|f| (f.name.as_str(), f.declared_type.as_str()))
                .collect(),
            locals,
        }
    }

    fn type_of(&self, var: &str) -> Option<&str> {
        self.locals
            .get(var)
            .map(String::as_str)
            .or_else(|| self.fields.get(var).copied())
    }
}

/// Local declarations `Type name (= | ; | , | : | ))` preceded by a
/// statement boundary.
fn collect_locals(toks: &[Token<'_>], out: &mut BTreeMap<String, String>) {
    let mut p = Parser {
        toks,
        pos: 0,
        package: String::new(),
        classes: &[],
        path: String::new(),
        out: Vec::new(),
    };
    for i in 0..toks.len() {
        let boundary = i == 0 || matches!(toks[i - 1].text, "{" | "}" | ";" | "(" | "," | "final" | ":");
        if !boundary || !(toks[i].kind == Kind::Ident || PRIMITIVES.contains(&toks[i].text)) {
            continue;
        }
        p.pos = i;
        let Some(ty) = p.parse_type() else { continue };
        let (Some(name), Some(next)) = (p.peek(0), p.peek(1)) else { continue };
        if name.kind == Kind::Ident && matches!(next.text, "=" | ";" | "," | ":" | ")") && ty != "var" {
            out.insert(name.text.to_string(), ty);
        } else if name.kind == Kind::Ident && matches!(next.text, "=" | ";" | ":") {
            // `var x = ...`: type unknown but the name still shadows fields.
            out.insert(name.text.to_string(), String::new());
        }
    }
}

#[derive(Debug, Default)]
struct BodyFacts {
    decisions: u64,
    statements: u64,
    halstead: HalsteadCounts,
    accesses: Vec<(Owner, String)>,
    calls: Vec<(Owner, String)>,
}

const OPERATOR_KEYWORDS: &[&str] = &[
    "if", "else", "for", "while", "do", "switch", "case", "default", "break", "continue", "return", "throw",
    "try", "catch", "finally", "new", "instanceof", "synchronized", "assert",
];

const OPERAND_KEYWORDS: &[&str] = &["this", "super", "true", "false", "null"];

fn is_wildcard(toks: &[Token<'_>], i: usize) -> bool {
    let prev = i.checked_sub(1).map(|k| toks[k].text);
    let next = toks.get(i + 1).map(|t| t.text);
    matches!(prev, Some("<" | ",")) || matches!(next, Some(">" | "," | "extends"))
}

fn analyze_body(toks: &[Token<'_>], scope: &Scope<'_>) -> BodyFacts {
    let mut f = BodyFacts::default();
    let mut operators: BTreeMap<&str, u64> = BTreeMap::new();
    let mut operands: BTreeMap<&str, u64> = BTreeMap::new();
    // Paren depth at which an open `for (` header started.
    let mut for_header: Option<usize> = None;
    let mut paren = 0usize;
    let mut pending_for = false;

    let text = |k: usize| toks.get(k).map_or("", |t| t.text);
    let mut i = 0;
    while i < toks.len() {
        let t = toks[i];
        let code = t.kind != Kind::Str && t.kind != Kind::Char;
        if code && t.text == "@" && toks.get(i + 1).is_some_and(|n| n.kind == Kind::Ident) {
            i += 2;
            while text(i) == "." && toks.get(i + 1).is_some_and(|n| n.kind == Kind::Ident) {
                i += 2;
            }
            continue;
        }

        // Decisions.
        match (t.kind, t.text) {
            (Kind::Keyword, "if" | "for" | "while" | "case" | "catch") | (Kind::Punct, "&&" | "||") => {
                f.decisions += 1
            }
            (Kind::Punct, "?") if !is_wildcard(toks, i) => f.decisions += 1,
            _ => {}
        }

        // Statements.
        match (t.kind, t.text) {
            (Kind::Keyword, "for") => {
                pending_for = true;
                f.statements += 1;
            }
            (Kind::Keyword, "if" | "do" | "switch" | "try") => f.statements += 1,
            (Kind::Keyword, "while") => {
                if !is_do_while_tail(toks, i) {
                    f.statements += 1;
                }
            }
            (Kind::Punct, "(") => {
                paren += 1;
                if pending_for {
                    for_header = Some(paren);
                    pending_for = false;
                }
            }
            (Kind::Punct, ")") => {
                if for_header == Some(paren) {
                    for_header = None;
                }
                paren = paren.saturating_sub(1);
            }
            (Kind::Punct, ";") if for_header.is_none() => f.statements += 1,
            _ => {}
        }

        // Halstead.
        match t.kind {
            Kind::Punct if !matches!(t.text, ")" | "]" | "}") => {
                // Adjacent `>` tokens form a shift operator.
                let mut k = i;
                while t.text == ">" && text(k + 1) == ">" && toks[k + 1].line == t.line && k + 1 - i < 2 {
                    k += 1;
                }
                let op = match k - i {
                    1 => ">>",
                    2 => ">>>",
                    _ => t.text,
                };
                *operators.entry(op).or_default() += 1;
            }
            Kind::Keyword if OPERATOR_KEYWORDS.contains(&t.text) => *operators.entry(t.text).or_default() += 1,
            Kind::Keyword if OPERAND_KEYWORDS.contains(&t.text) => *operands.entry(t.text).or_default() += 1,
            Kind::Ident | Kind::Number | Kind::Str | Kind::Char => *operands.entry(t.text).or_default() += 1,
            _ => {}
        }

        references(toks, i, scope, &mut f);
        i += 1;
    }
    f.halstead = HalsteadCounts::new(
        operators.len() as u64,
        operands.len() as u64,
        operators.values().sum(),
        operands.values().sum(),
    );
    f
}

/// `while (...) ;` closing a `do` loop.
fn is_do_while_tail(toks: &[Token<'_>], i: usize) -> bool {
    if i == 0 || toks[i - 1].text != "}" {
        return false;
    }
    let mut depth = 0;
    for k in (0..i).rev() {
        match toks[k].text {
            "}" => depth += 1,
            "{" => {
                depth -= 1;
                if depth == 0 {
                    return k > 0 && toks[k - 1].text == "do";
                }
            }
            _ => {}
        }
    }
    false
}

fn references(toks: &[Token<'_>], i: usize, scope: &Scope<'_>, f: &mut BodyFacts) {
    let t = toks[i];
    let text = |k: usize| toks.get(k).map_or("", |t| t.text);
    let is_ident = |k: usize| toks.get(k).is_some_and(|t| t.kind == Kind::Ident);
    let prev = i.checked_sub(1).map_or("", |k| toks[k].text);
    let self_owner = || Owner::Exact(scope.owner.to_string());

    match (t.kind, t.text) {
        (Kind::Keyword, "this" | "super") if text(i + 1) == "." && is_ident(i + 2) => {
            let owner = if t.text == "this" {
                self_owner()
            } else {
                scope.super_name.map_or(Owner::Unresolved, |s| Owner::Named(s.to_string()))
            };
            let member = text(i + 2).to_string();
            if text(i + 3) == "(" {
                f.calls.push((owner, member));
            } else {
                f.accesses.push((owner, member));
            }
        }
        (Kind::Keyword, "this") if text(i + 1) == "::" && is_ident(i + 2) => {
            f.calls.push((self_owner(), text(i + 2).to_string()));
        }
        (Kind::Keyword, "new") => {
            let mut p = Parser {
                toks,
                pos: i + 1,
                package: String::new(),
                classes: &[],
                path: String::new(),
                out: Vec::new(),
            };
            if let Some(ty) = p.parse_type() {
                if p.at("(") {
                    let name = base_type(&ty);
                    let simple = name.rsplit('.').next().unwrap_or(name).to_string();
                    f.calls.push((Owner::Named(name.to_string()), simple));
                }
            }
        }
        (Kind::Ident, name) if prev != "." && prev != "::" => {
            let next = text(i + 1);
            if next == "(" {
                // `Type name(` is a declaration inside an anonymous or local class.
                let decl = i > 0 && (toks[i - 1].kind == Kind::Ident || matches!(prev, ">" | "]"));
                if !decl && !matches!(prev, "new" | "@") {
                    f.calls.push((self_owner(), name.to_string()));
                }
                return;
            }
            if (next == "." || next == "::") && is_ident(i + 2) {
                let owner = match scope.type_of(name) {
                    Some("") => Owner::Unresolved,
                    Some(ty) => Owner::Named(base_type(ty).to_string()),
                    None if name.starts_with(|c: char| c.is_uppercase()) => Owner::Named(name.to_string()),
                    None => Owner::Unresolved,
                };
                let member = text(i + 2).to_string();
                if next == "::" || text(i + 3) == "(" {
                    f.calls.push((owner, member));
                } else if owner != Owner::Unresolved {
                    f.accesses.push((owner, member));
                }
                if scope.fields.contains_key(name) && !scope.locals.contains_key(name) {
                    f.accesses.push((self_owner(), name.to_string()));
                }
                return;
            }
            if scope.fields.contains_key(name) && !scope.locals.contains_key(name) {
                // Skip declarations shadowing nothing we track, such as a
                // lambda parameter list `(x) ->`.
                f.accesses.push((self_owner(), name.to_string()));
            }
        }
        // Member of an expression result: `a().b(` or `x[i].y(`.
        (Kind::Ident, name)
            if prev == "." && i >= 2 && !is_ident(i - 2) && !matches!(text(i - 2), "this" | "super") && text(i + 1) == "(" =>
        {
            f.calls.push((Owner::Unresolved, name.to_string()));
        }
        // Member further down a chain: `a.b.c(`.
        (Kind::Ident, name)
            if prev == "." && i >= 3 && is_ident(i - 2) && text(i - 3) == "." && text(i + 1) == "(" =>
        {
            f.calls.push((Owner::Unresolved, name.to_string()));
        }
        _ => {}
    }
}

// ---------------------------------------------------------------- resolution

struct Resolver<'r> {
    declared: &'r BTreeSet<String>,
    package: &'r str,
    single: BTreeMap<&'r str, &'r str>,
    wildcard: &'r [String],
}

impl Resolver<'_> {
    /// Qualified declared name for `name` seen inside `chain` (enclosing
    /// types, innermost last), or `None` if it is not a declared type.
    fn declared(&self, name: &str, chain: &[String]) -> Option<String> {
        let (head, tail) = match name.find('.') {
            Some(i) => (&name[..i], &name[i..]),
            None => (name, ""),
        };
        if tail.is_empty() || !self.declared.contains(name) {
            for outer in chain.iter().rev() {
                // Member types of the enclosing types, and the types themselves.
                let candidate = format!("{outer}.{head}{tail}");
                if self.declared.contains(&candidate) {
                    return Some(candidate);
                }
                if crate::model::simple_name(outer) == head {
                    let candidate = format!("{outer}{tail}");
                    if self.declared.contains(&candidate) {
                        return Some(candidate);
                    }
                }
            }
        }
        if self.declared.contains(name) && name.contains('.') {
            return Some(name.to_string());
        }
        if let Some(full) = self.single.get(head) {
            let candidate = format!("{full}{tail}");
            if self.declared.contains(&candidate) {
                return Some(candidate);
            }
        }
        let local = if self.package.is_empty() {
            name.to_string()
        } else {
            format!("{}.{name}", self.package)
        };
        if self.declared.contains(&local) {
            return Some(local);
        }
        for p in self.wildcard {
            let candidate = format!("{p}.{name}");
            if self.declared.contains(&candidate) {
                return Some(candidate);
            }
        }
        None
    }

    /// Rewrites the base of a type text to its declared qualified name.
    fn type_text(&self, text: &str, chain: &[String], skip: &[String], ext: &mut BTreeSet<String>) -> String {
        let base = base_type(text);
        if base.is_empty() {
            return text.to_string();
        }
        let suffix = &text[text.find(base).map_or(0, |i| i + base.len())..];
        match self.declared(base, chain) {
            Some(q) => format!("{q}{suffix}"),
            None => {
                if PRIMITIVES.contains(&base) || base == "var" || skip.iter().any(|s| s == base) {
                    return text.to_string();
                }
                let e = self.external_name(base);
                let out = format!("{e}{suffix}");
                ext.insert(e);
                out
            }
        }
    }

    fn owner(&self, owner: &Owner, chain: &[String], skip: &[String], ext: &mut BTreeSet<String>) -> String {
        match owner {
            Owner::Exact(q) => q.clone(),
            Owner::Unresolved => UNRESOLVED.to_string(),
            Owner::Named(n) => {
                if PRIMITIVES.contains(&n.as_str()) || skip.iter().any(|s| s == n) {
                    return UNRESOLVED.to_string();
                }
                match self.declared(n, chain) {
                    Some(q) => q,
                    None => {
                        let e = self.external_name(n);
                        ext.insert(e.clone());
                        e
                    }
                }
            }
        }
    }

    /// Import-qualified spelling of an undeclared type where one is known.
    fn external_name(&self, name: &str) -> String {
        let head = name.split('.').next().unwrap_or(name);
        match self.single.get(head) {
            Some(full) => format!("{full}{}", &name[head.len()..]),
            None => name.to_string(),
        }
    }
}

fn resolve_file(file: RawFile, declared: &BTreeSet<String>, ext: &mut BTreeSet<String>) -> Vec<TypeDecl> {
    let single = file
        .single_imports
        .iter()
        .map(|s| (crate::model::simple_name(s), s.as_str()))
        .collect();
    let r = Resolver {
        declared,
        package: &file.package,
        single,
        wildcard: &file.wildcard_imports,
    };
    let mut out = Vec::new();
    for raw in file.types {
        let mut chain = raw.enclosing.clone();
        chain.push(raw.decl.qualified_name.clone());
        let mut decl = raw.decl;
        let tp = &raw.type_params;
        let lookup = |n: &String, ext: &mut BTreeSet<String>| {
            let b = base_type(n);
            match r.declared(b, &raw.enclosing) {
                Some(q) => q,
                None => {
                    let e = r.external_name(b);
                    ext.insert(e.clone());
                    e
                }
            }
        };
        decl.super_types = decl.super_types.iter().map(|n| lookup(n, ext)).collect();
        decl.interfaces = decl.interfaces.iter().map(|n| lookup(n, ext)).collect();
        for f in &mut decl.fields {
            f.declared_type = r.type_text(&f.declared_type, &chain, tp, ext);
        }
        for m in raw.methods {
            let mut skip = tp.clone();
            skip.extend(m.type_params.iter().cloned());
            let mut d = m.decl;
            d.param_types = d.param_types.iter().map(|p| r.type_text(p, &chain, &skip, ext)).collect();
            if !d.return_type.is_empty() {
                d.return_type = r.type_text(&d.return_type, &chain, &skip, ext);
            }
            d.accessed_fields = m
                .accesses
                .iter()
                .map(|(o, n)| MemberRef::new(r.owner(o, &chain, &skip, ext), n.clone()))
                .collect();
            d.called_methods = m
                .calls
                .iter()
                .map(|(o, n)| MemberRef::new(r.owner(o, &chain, &skip, ext), n.clone()))
                .collect();
            decl.methods.push(d);
        }
        out.push(decl);
    }
    out
}

// ---------------------------------------------------------------- entry points

fn parse_file(path: &str, text: &str, classes: &[LineClass]) -> Result<RawFile, JavaError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        package: String::new(),
        classes,
        path: path.to_string(),
        out: Vec::new(),
    };
    let (single, wildcard) = p.parse_file();
    Ok(RawFile {
        package: p.package,
        single_imports: single,
        wildcard_imports: wildcard,
        types: p.out,
    })
}

/// Builds a model from `(path, text)` sources. `.java` files are parsed;
/// every file is line-counted under `configs`.
pub fn extract(sources: &[(String, String)], configs: &[LanguageCommentConfig]) -> Extraction {
    let mut sources: Vec<&(String, String)> = sources.iter().collect();
    sources.sort_by(|a, b| a.0.cmp(&b.0));
    let mut diagnostics = Vec::new();
    let mut files = Vec::new();
    let mut raw_files = Vec::new();
    for (path, text) in sources {
        let cfg = lines::config_for(path, configs);
        let classes = lines::classify_lines(text, cfg);
        files.push(lines::count_file(path, text, configs));
        if !path.to_ascii_lowercase().ends_with(".java") {
            continue;
        }
        match parse_file(path, text, &classes) {
            Ok(raw) => {
                if raw.types.is_empty() {
                    diagnostics.push(Diagnostic {
                        path: path.clone(),
                        severity: Severity::Warning,
                        message: "no types found".into(),
                    });
                }
                raw_files.push(raw);
            }
            Err(e) => diagnostics.push(Diagnostic {
                path: path.clone(),
                severity: Severity::Error,
                message: format!("{e}; file skipped"),
            }),
        }
    }
    let declared: BTreeSet<String> = raw_files
        .iter()
        .flat_map(|f| f.types.iter().map(|t| t.decl.qualified_name.clone()))
        .collect();
    let mut external = BTreeSet::new();
    let mut types = Vec::new();
    for f in raw_files {
        types.extend(resolve_file(f, &declared, &mut external));
    }
    for d in &declared {
        external.remove(d);
    }
    diagnostics.sort();
    Extraction {
        model: ClassModel::new(types, external, files),
        diagnostics,
    }
}

/// Parses a single Java source into a model, propagating lexical errors.
pub fn parse_source(path: &str, text: &str) -> Result<ClassModel, JavaError> {
    let cfgs = lines::default_configs();
    let classes = lines::classify_lines(text, lines::config_for(path, &cfgs));
    let raw = parse_file(path, text, &classes)?;
    let declared = raw.types.iter().map(|t| t.decl.qualified_name.clone()).collect();
    let mut external = BTreeSet::new();
    let types = resolve_file(raw, &declared, &mut external);
    Ok(ClassModel::new(types, external, vec![lines::count_file(path, text, &cfgs)]))
}
