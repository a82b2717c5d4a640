//! Consistency of a constraint's enforcing statements and clone types
//! between them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::trace::TraceLink;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Keyword(&'static str),
    Literal(String),
    Punct(String),
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "var", "yield", "record",
];

const LITERAL_WORDS: [&str; 3] = ["true", "false", "null"];

const PUNCT: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "(", ")", "{", "}", "[", "]", ";",
    ",", ".", "@", "=", ">", "<", "!", "~", "?", ":", "+", "-", "*", "/", "&", "|", "^",
];

/// Java tokens of `text` with whitespace and comments dropped.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                i += 1;
            }
            i += 2;
        } else if c == '"' || c == '\'' {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i] != c {
                if chars[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            i = (i + 1).min(chars.len());
            out.push(Token::Literal(chars[start..i].iter().collect()));
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric()
                    || chars[i] == '.'
                    || chars[i] == '_'
                    || ((chars[i] == '+' || chars[i] == '-')
                        && matches!(chars[i - 1], 'e' | 'E' | 'p' | 'P')
                        && !chars[start..i].iter().any(|c| matches!(c, 'x' | 'X'))))
            {
                i += 1;
            }
            out.push(Token::Literal(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if let Some(k) = KEYWORDS.iter().find(|k| **k == word) {
                out.push(Token::Keyword(k));
            } else if LITERAL_WORDS.contains(&word.as_str()) {
                out.push(Token::Literal(word));
            } else {
                out.push(Token::Ident(word));
            }
        } else {
            let rest: String = chars[i..chars.len().min(i + 4)].iter().collect();
            let p = PUNCT.iter().find(|p| rest.starts_with(**p)).copied();
            let p = p.map_or_else(|| c.to_string(), str::to_string);
            i += p.chars().count();
            out.push(Token::Punct(p));
        }
    }
    out
}

/// Replace identifiers and literals by placeholders numbered in order of
/// first appearance; equal names share a placeholder.
pub fn normalize(tokens: &[Token]) -> Vec<Token> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut lits: HashMap<String, usize> = HashMap::new();
    tokens
        .iter()
        .map(|t| match t {
            Token::Ident(s) => {
                let n = ids.len();
                Token::Ident(format!("$id{}", *ids.entry(s.clone()).or_insert(n)))
            }
            Token::Literal(s) => {
                let n = lits.len();
                Token::Literal(format!("$lit{}", *lits.entry(s.clone()).or_insert(n)))
            }
            other => other.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CloneType {
    #[serde(rename = "type-1")]
    Type1,
    #[serde(rename = "type-2")]
    Type2,
    #[serde(rename = "type-4")]
    Type4,
    #[serde(rename = "not-clone")]
    NotClone,
}

impl CloneType {
    pub const ALL: [CloneType; 4] = [
        CloneType::Type1,
        CloneType::Type2,
        CloneType::Type4,
        CloneType::NotClone,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CloneType::Type1 => "type-1",
            CloneType::Type2 => "type-2",
            CloneType::Type4 => "type-4",
            CloneType::NotClone => "not-clone",
        }
    }
}

impl fmt::Display for CloneType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Clone type of two enforcing statements given their pattern names.
pub fn classify_clone(a: &str, pattern_a: &str, b: &str, pattern_b: &str) -> CloneType {
    let ta = tokenize(a);
    let tb = tokenize(b);
    if ta == tb {
        CloneType::Type1
    } else if normalize(&ta) == normalize(&tb) {
        CloneType::Type2
    } else if pattern_a != pattern_b {
        CloneType::Type4
    } else {
        CloneType::NotClone
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Consistency {
    Consistent,
    Inconsistent,
    Singleton,
}

impl Consistency {
    pub fn as_str(self) -> &'static str {
        match self {
            Consistency::Consistent => "consistent",
            Consistency::Inconsistent => "inconsistent",
            Consistency::Singleton => "singleton",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnforcementGroup {
    pub constraint_id: String,
    /// Links in location order.
    pub links: Vec<TraceLink>,
    pub consistency: Consistency,
}

fn link_key(l: &TraceLink) -> (&str, u32, u32, &str) {
    (&l.enforcing.file, l.enforcing.line, l.enforcing.column, &l.enforcing.pattern)
}

/// One group per constraint id, in id order.
pub fn group(links: &[TraceLink]) -> Vec<EnforcementGroup> {
    let mut by_id: BTreeMap<&str, Vec<TraceLink>> = BTreeMap::new();
    for l in links {
        by_id.entry(&l.constraint_id).or_default().push(l.clone());
    }
    by_id
        .into_iter()
        .map(|(id, mut links)| {
            links.sort_by(|a, b| link_key(a).cmp(&link_key(b)));
            let first = &links[0].enforcing.pattern;
            let consistency = if links.len() == 1 {
                Consistency::Singleton
            } else if links.iter().all(|l| &l.enforcing.pattern == first) {
                Consistency::Consistent
            } else {
                Consistency::Inconsistent
            };
            EnforcementGroup {
                constraint_id: id.to_string(),
                links,
                consistency,
            }
        })
        .collect()
}

fn statement_text(l: &TraceLink) -> &str {
    if l.enforcing.text.is_empty() {
        // links without source text fall back to the bound parts
        l.enforcing.parts.first().map_or("", |p| p.text.as_str())
    } else {
        &l.enforcing.text
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SiteRef {
    pub file: String,
    pub line: u32,
    pub pattern: String,
}

impl SiteRef {
    fn of(l: &TraceLink) -> SiteRef {
        SiteRef {
            file: l.enforcing.file.clone(),
            line: l.enforcing.line,
            pattern: l.enforcing.pattern.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClonePair {
    pub constraint_id: String,
    pub a: SiteRef,
    pub b: SiteRef,
    #[serde(rename = "type")]
    pub clone_type: CloneType,
    /// Whether `a` is the group's first link.
    pub anchor: bool,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Tally {
    #[serde(rename = "type-1")]
    pub type1: usize,
    #[serde(rename = "type-2")]
    pub type2: usize,
    #[serde(rename = "type-4")]
    pub type4: usize,
    #[serde(rename = "not-clone")]
    pub not_clone: usize,
}

impl Tally {
    fn add(&mut self, t: CloneType) {
        *self.slot(t) += 1;
    }

    fn slot(&mut self, t: CloneType) -> &mut usize {
        match t {
            CloneType::Type1 => &mut self.type1,
            CloneType::Type2 => &mut self.type2,
            CloneType::Type4 => &mut self.type4,
            CloneType::NotClone => &mut self.not_clone,
        }
    }

    pub fn get(&self, t: CloneType) -> usize {
        match t {
            CloneType::Type1 => self.type1,
            CloneType::Type2 => self.type2,
            CloneType::Type4 => self.type4,
            CloneType::NotClone => self.not_clone,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct ConsistencyTally {
    pub consistent: usize,
    pub inconsistent: usize,
    pub singleton: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CloneSummary {
    pub schema_version: &'static str,
    /// Each link against its group's first link.
    pub anchor: Tally,
    pub all_pairs: Tally,
    pub consistency: ConsistencyTally,
    pub pairs: Vec<ClonePair>,
}

/// Tally clone types over every multi-link group.
pub fn clone_summary(groups: &[EnforcementGroup]) -> CloneSummary {
    let mut summary = CloneSummary {
        schema_version: "1",
        anchor: Tally::default(),
        all_pairs: Tally::default(),
        consistency: ConsistencyTally::default(),
        pairs: Vec::new(),
    };
    for g in groups {
        match g.consistency {
            Consistency::Consistent => summary.consistency.consistent += 1,
            Consistency::Inconsistent => summary.consistency.inconsistent += 1,
            Consistency::Singleton => summary.consistency.singleton += 1,
        }
        for i in 0..g.links.len() {
            for j in i + 1..g.links.len() {
                let (a, b) = (&g.links[i], &g.links[j]);
                let t = classify_clone(
                    statement_text(a),
                    &a.enforcing.pattern,
                    statement_text(b),
                    &b.enforcing.pattern,
                );
                summary.all_pairs.add(t);
                if i == 0 {
                    summary.anchor.add(t);
                }
                summary.pairs.push(ClonePair {
                    constraint_id: g.constraint_id.clone(),
                    a: SiteRef::of(a),
                    b: SiteRef::of(b),
                    clone_type: t,
                    anchor: i == 0,
                });
            }
        }
    }
    summary
}
