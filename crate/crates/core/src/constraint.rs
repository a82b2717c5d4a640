//! Constraint records, the simplified-expression grammar and the four
//! constraint types.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, Error};

/// Attribute name with whitespace collapsed. Compares case-insensitively;
/// the original spelling is kept for output.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Attribute(String);

impl Attribute {
    pub fn new(text: &str) -> Attribute {
        Attribute(text.split_whitespace().collect::<Vec<_>>().join(" "))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Attribute {
    fn eq(&self, other: &Self) -> bool {
        self.0.eq_ignore_ascii_case(&other.0)
    }
}

impl Eq for Attribute {}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "≥")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "≤")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "≠")]
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Gt => ">",
            CmpOp::Ge => "≥",
            CmpOp::Lt => "<",
            CmpOp::Le => "≤",
            CmpOp::Eq => "=",
            CmpOp::Ne => "≠",
        }
    }

    pub fn is_equality(self) -> bool {
        matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

/// Longest lexemes first so `>=` is not read as `>`.
const OPERATORS: [(&str, CmpOp); 10] = [
    (">=", CmpOp::Ge),
    ("<=", CmpOp::Le),
    ("!=", CmpOp::Ne),
    ("==", CmpOp::Eq),
    ("≥", CmpOp::Ge),
    ("≤", CmpOp::Le),
    ("≠", CmpOp::Ne),
    (">", CmpOp::Gt),
    ("<", CmpOp::Lt),
    ("=", CmpOp::Eq),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "text", rename_all = "kebab-case")]
pub enum Operand {
    Attribute(Attribute),
    Constant(String),
}

impl Operand {
    fn parse(text: &str) -> Operand {
        let t = text.trim();
        let first = t.chars().next().unwrap_or(' ');
        let constant = first.is_ascii_digit()
            || matches!(first, '"' | '\'' | '-' | '+' | '.')
            || matches!(t.to_ascii_lowercase().as_str(), "true" | "false" | "null" | "not-null");
        if constant {
            Operand::Constant(t.to_string())
        } else {
            Operand::Attribute(Attribute::new(t))
        }
    }

    fn text(&self) -> &str {
        match self {
            Operand::Attribute(a) => a.as_str(),
            Operand::Constant(c) => c,
        }
    }
}

/// One side of a two-valued domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    True,
    False,
    Null,
    NotNull,
}

impl Polarity {
    fn parse(text: &str) -> Option<Polarity> {
        Some(match text.trim().to_ascii_lowercase().as_str() {
            "true" => Polarity::True,
            "false" => Polarity::False,
            "null" => Polarity::Null,
            "not-null" | "not null" | "nonnull" => Polarity::NotNull,
            _ => return None,
        })
    }

    pub fn negate(self) -> Polarity {
        match self {
            Polarity::True => Polarity::False,
            Polarity::False => Polarity::True,
            Polarity::Null => Polarity::NotNull,
            Polarity::NotNull => Polarity::Null,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::True => "true",
            Polarity::False => "false",
            Polarity::Null => "null",
            Polarity::NotNull => "not-null",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum ConstraintExpr {
    Comparison {
        attribute: Attribute,
        op: CmpOp,
        operand: Operand,
    },
    Membership {
        attribute: Attribute,
        labels: Vec<String>,
    },
    Assignment {
        attribute: Attribute,
        value: String,
    },
    Boolean {
        attribute: Attribute,
        polarity: Polarity,
    },
}

impl ConstraintExpr {
    pub fn attribute(&self) -> &Attribute {
        match self {
            ConstraintExpr::Comparison { attribute, .. }
            | ConstraintExpr::Membership { attribute, .. }
            | ConstraintExpr::Assignment { attribute, .. }
            | ConstraintExpr::Boolean { attribute, .. } => attribute,
        }
    }
}

impl fmt::Display for ConstraintExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintExpr::Comparison {
                attribute,
                op,
                operand,
            } => write!(f, "{attribute} {} {}", op.symbol(), operand.text()),
            ConstraintExpr::Membership { attribute, labels } => {
                write!(f, "{attribute} in {{{}}}", labels.join(", "))
            }
            ConstraintExpr::Assignment { attribute, value } => write!(f, "{attribute} is {value}"),
            ConstraintExpr::Boolean {
                attribute,
                polarity,
            } => write!(f, "{attribute} == {}", polarity.as_str()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintType {
    CategoricalValue,
    ConcreteValue,
    DualValueComparison,
    ValueComparison,
}

impl ConstraintType {
    pub const ALL: [ConstraintType; 4] = [
        ConstraintType::CategoricalValue,
        ConstraintType::ConcreteValue,
        ConstraintType::DualValueComparison,
        ConstraintType::ValueComparison,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintType::CategoricalValue => "categorical-value",
            ConstraintType::ConcreteValue => "concrete-value",
            ConstraintType::DualValueComparison => "dual-value-comparison",
            ConstraintType::ValueComparison => "value-comparison",
        }
    }
}

impl fmt::Display for ConstraintType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn unrecognized(text: &str) -> Error {
    Error::UnrecognizedConstraint(text.to_string())
}

fn valid_attribute(text: &str) -> bool {
    let t = text.trim();
    !t.is_empty()
        && t.chars().any(|c| c.is_alphabetic())
        && t
            .chars()
            .all(|c| c.is_alphanumeric() || c.is_whitespace() || "_.-$()/'".contains(c))
}

/// Byte position and operator of the leftmost comparison lexeme.
fn find_operator(text: &str) -> Option<(usize, &'static str, CmpOp)> {
    for (i, _) in text.char_indices() {
        for (lex, op) in OPERATORS {
            if text[i..].starts_with(lex) {
                return Some((i, lex, op));
            }
        }
    }
    None
}

/// Position of `word` as a whole, case-insensitive, space-delimited word.
fn find_word(text: &str, word: &str) -> Option<usize> {
    let lower = text.to_ascii_lowercase();
    let needle = format!(" {word} ");
    lower.find(&needle).map(|i| i + 1)
}

/// Split `attr in {..}` (or `attr ∈ {..}`) into the attribute and the braced set.
fn split_membership(text: &str) -> Option<(&str, &str)> {
    let lower = text.to_ascii_lowercase();
    for (i, _) in text.char_indices() {
        let rest = if lower[i..].starts_with(" in ") {
            &text[i + 4..]
        } else if text[i..].starts_with('∈') {
            &text[i + '∈'.len_utf8()..]
        } else {
            continue;
        };
        let rest = rest.trim();
        if rest.starts_with('{') {
            return Some((&text[..i], rest));
        }
    }
    None
}

/// Parse the simplified-constraint mini-grammar:
/// `attr OP value`, `attr in {a, b}`, `attr is value`,
/// `attr == true|false|null|not-null`, `attr` and `not attr`.
pub fn parse_constraint_expr(text: &str) -> Result<ConstraintExpr, Error> {
    let t = text.trim();
    if t.is_empty() {
        return Err(unrecognized(text));
    }
    if let Some((lhs, rest)) = split_membership(t) {
        if !valid_attribute(lhs) || !rest.ends_with('}') {
            return Err(unrecognized(text));
        }
        let mut seen = BTreeSet::new();
        let labels: Vec<String> = rest[1..rest.len() - 1]
            .split(',')
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty() && seen.insert(l.to_ascii_lowercase()))
            .collect();
        if labels.len() < 2 {
            return Err(unrecognized(text));
        }
        return Ok(ConstraintExpr::Membership {
            attribute: Attribute::new(lhs),
            labels,
        });
    }
    if let Some((i, lex, op)) = find_operator(t) {
        let lhs = &t[..i];
        let rhs = t[i + lex.len()..].trim();
        if !valid_attribute(lhs) || rhs.is_empty() || find_operator(rhs).is_some() {
            return Err(unrecognized(text));
        }
        let attribute = Attribute::new(lhs);
        if op.is_equality() {
            if let Some(p) = Polarity::parse(rhs) {
                let polarity = if op == CmpOp::Ne { p.negate() } else { p };
                return Ok(ConstraintExpr::Boolean {
                    attribute,
                    polarity,
                });
            }
        }
        let operand = Operand::parse(rhs);
        if let Operand::Attribute(a) = &operand {
            if !valid_attribute(a.as_str()) {
                return Err(unrecognized(text));
            }
        }
        return Ok(ConstraintExpr::Comparison {
            attribute,
            op,
            operand,
        });
    }
    if let Some(i) = find_word(t, "is") {
        let lhs = &t[..i];
        let value = t[i + 2..].trim();
        if !valid_attribute(lhs) || value.is_empty() {
            return Err(unrecognized(text));
        }
        let attribute = Attribute::new(lhs);
        if let Some(polarity) = Polarity::parse(value) {
            return Ok(ConstraintExpr::Boolean {
                attribute,
                polarity,
            });
        }
        return Ok(ConstraintExpr::Assignment {
            attribute,
            value: value.to_string(),
        });
    }
    let (negated, rest) = match t.strip_prefix('!') {
        Some(r) => (true, r),
        None => match t.get(..4) {
            Some(p) if p.eq_ignore_ascii_case("not ") => (true, &t[4..]),
            _ => (false, t),
        },
    };
    if valid_attribute(rest) {
        return Ok(ConstraintExpr::Boolean {
            attribute: Attribute::new(rest),
            polarity: if negated { Polarity::False } else { Polarity::True },
        });
    }
    Err(unrecognized(text))
}

/// Map an expression to its constraint type.
pub fn classify(expr: &ConstraintExpr) -> ConstraintType {
    match expr {
        ConstraintExpr::Membership { .. } => ConstraintType::CategoricalValue,
        ConstraintExpr::Assignment { .. } => ConstraintType::ConcreteValue,
        ConstraintExpr::Boolean { .. } => ConstraintType::DualValueComparison,
        ConstraintExpr::Comparison { op, operand, .. } => {
            let two_valued =
                matches!(operand, Operand::Constant(c) if Polarity::parse(c).is_some());
            if op.is_equality() && two_valued {
                ConstraintType::DualValueComparison
            } else {
                ConstraintType::ValueComparison
            }
        }
    }
}

/// Reference to a data-definition site, `file:line:kind[:symbol]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRef {
    #[serde(default)]
    pub file: String,
    #[serde(default)]
    pub line: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
}

impl SeedRef {
    pub fn parse(text: &str) -> Result<SeedRef, Error> {
        let bad = |reason: &str| Error::InvalidSeed {
            seed: text.to_string(),
            reason: reason.to_string(),
        };
        let t = text.trim();
        let cols: Vec<&str> = t.splitn(4, ':').collect();
        if cols.len() == 2 && cols[0].eq_ignore_ascii_case("operator") {
            return Ok(SeedRef {
                file: String::new(),
                line: 0,
                kind: "operator".into(),
                symbol: Some(cols[1].trim().to_string()),
            });
        }
        if cols.len() < 3 {
            return Err(bad("expected file:line:kind[:symbol]"));
        }
        let line = cols[1].trim().parse().map_err(|_| bad("line is not a number"))?;
        Ok(SeedRef {
            file: cols[0].trim().to_string(),
            line,
            kind: cols[2].trim().to_string(),
            symbol: cols.get(3).map(|s| s.trim().to_string()).filter(|s| !s.is_empty()),
        })
    }

    pub fn is_operator(&self) -> bool {
        self.kind.eq_ignore_ascii_case("operator")
    }
}

impl fmt::Display for SeedRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.kind)?;
        if let Some(s) = &self.symbol {
            write!(f, ":{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintRecord {
    pub id: String,
    pub system: String,
    pub description: String,
    pub simplified: String,
    pub scenario: String,
    pub seeds: Vec<SeedRef>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manual_pattern: Option<String>,
    pub expr: ConstraintExpr,
}

impl ConstraintRecord {
    pub fn constraint_type(&self) -> ConstraintType {
        classify(&self.expr)
    }
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: String,
    #[serde(default)]
    system: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    simplified: Option<String>,
    #[serde(default)]
    scenario: String,
    #[serde(default)]
    seeds: Vec<SeedRef>,
    #[serde(default)]
    manual_pattern: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintFormat {
    Csv,
    Json,
}

impl ConstraintFormat {
    /// Format implied by the file extension; JSON unless it ends in `.csv`.
    pub fn from_path(path: &Path) -> ConstraintFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ConstraintFormat::Csv,
            _ => ConstraintFormat::Json,
        }
    }
}

/// Constraint records plus a diagnostic for each skipped row.
#[derive(Debug, Clone, Default)]
pub struct LoadedConstraints {
    pub records: Vec<ConstraintRecord>,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn load_constraints(path: &Path, format: ConstraintFormat) -> Result<LoadedConstraints, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_constraints(&path.display().to_string(), &text, format)
}

pub fn parse_constraints(
    path: &str,
    text: &str,
    format: ConstraintFormat,
) -> Result<LoadedConstraints, Error> {
    let rows = match format {
        ConstraintFormat::Json => json_rows(path, text)?,
        ConstraintFormat::Csv => csv_rows(path, text)?,
    };
    let mut out = LoadedConstraints::default();
    let mut ids = BTreeSet::new();
    for (line, row) in rows {
        let raw = match row {
            Ok(r) => r,
            Err(message) => {
                out.diagnostics.push(Diagnostic::new(path, line, 1, &message));
                continue;
            }
        };
        if !ids.insert(raw.id.clone()) {
            return Err(Error::DuplicateConstraint(raw.id));
        }
        let simplified = raw.simplified.unwrap_or_default();
        if simplified.trim().is_empty() {
            let msg = format!("constraint `{}` has no simplified expression", raw.id);
            out.diagnostics.push(Diagnostic::new(path, line, 1, &msg));
            continue;
        }
        let expr = match parse_constraint_expr(&simplified) {
            Ok(e) => e,
            Err(e) => {
                out.diagnostics
                    .push(Diagnostic::new(path, line, 1, &format!("constraint `{}`: {e}", raw.id)));
                continue;
            }
        };
        out.records.push(ConstraintRecord {
            id: raw.id,
            system: raw.system,
            description: raw.description,
            simplified,
            scenario: raw.scenario,
            seeds: raw.seeds,
            manual_pattern: raw.manual_pattern.filter(|p| !p.trim().is_empty()),
            expr,
        });
    }
    Ok(out)
}

type Row = (u32, Result<RawRecord, String>);

fn json_rows(path: &str, text: &str) -> Result<Vec<Row>, Error> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Malformed {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    let items = match value {
        serde_json::Value::Array(items) => items,
        serde_json::Value::Object(mut map) => match map.remove("constraints") {
            Some(serde_json::Value::Array(items)) => items,
            _ => {
                return Err(Error::Malformed {
                    path: path.to_string(),
                    message: "expected an array or an object with `constraints`".into(),
                })
            }
        },
        _ => {
            return Err(Error::Malformed {
                path: path.to_string(),
                message: "expected an array of constraints".into(),
            })
        }
    };
    Ok(items
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let row = serde_json::from_value::<RawRecord>(v)
                .map_err(|e| format!("record {}: {e}", i + 1));
            (i as u32 + 1, row)
        })
        .collect())
}

fn csv_rows(path: &str, text: &str) -> Result<Vec<Row>, Error> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Malformed {
            path: path.to_string(),
            message: e.to_string(),
        })?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let Some(id_col) = col("id") else {
        return Err(Error::Malformed {
            path: path.to_string(),
            message: "missing `id` column".into(),
        });
    };
    let cols = [
        col("system"),
        col("description"),
        col("simplified"),
        col("scenario"),
        col("seeds"),
        col("manual_pattern"),
    ];
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = match rec {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line() as u32);
                rows.push((line, Err(e.to_string())));
                continue;
            }
        };
        let line = rec.position().map_or(0, |p| p.line() as u32);
        let get = |c: Option<usize>| c.and_then(|i| rec.get(i)).unwrap_or_default().to_string();
        let id = get(Some(id_col));
        if id.is_empty() {
            rows.push((line, Err("row has no id".to_string())));
            continue;
        }
        let seeds: Result<Vec<SeedRef>, Error> = get(cols[4])
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(SeedRef::parse)
            .collect();
        let row = seeds.map_err(|e| e.to_string()).map(|seeds| RawRecord {
            id,
            system: get(cols[0]),
            description: get(cols[1]),
            simplified: Some(get(cols[2])),
            scenario: get(cols[3]),
            seeds,
            manual_pattern: Some(get(cols[5])),
        });
        rows.push((line, row));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> ConstraintType {
        classify(&parse_constraint_expr(text).unwrap())
    }

    #[test]
    fn relational_forms() {
        let e = parse_constraint_expr("Content-Length >= 0").unwrap();
        assert_eq!(
            e,
            ConstraintExpr::Comparison {
                attribute: Attribute::new("Content-Length"),
                op: CmpOp::Ge,
                operand: Operand::Constant("0".into()),
            }
        );
        assert_eq!(kind("max   frequency ≤ min frequency"), ConstraintType::ValueComparison);
    }

    #[test]
    fn equality_against_plain_constant_is_value_comparison() {
        assert_eq!(kind("port == 8080"), ConstraintType::ValueComparison);
        assert_eq!(kind("mode = fast"), ConstraintType::ValueComparison);
    }

    #[test]
    fn two_valued_forms() {
        assert_eq!(kind("listener != null"), ConstraintType::DualValueComparison);
        assert_eq!(kind("not visible"), ConstraintType::DualValueComparison);
        assert_eq!(kind("visible"), ConstraintType::DualValueComparison);
        assert_eq!(
            parse_constraint_expr("listener != null").unwrap(),
            ConstraintExpr::Boolean {
                attribute: Attribute::new("listener"),
                polarity: Polarity::NotNull,
            }
        );
    }

    #[test]
    fn membership_needs_two_labels() {
        assert!(parse_constraint_expr("mode in {fast}").is_err());
        assert!(parse_constraint_expr("mode in {fast, fast}").is_err());
        assert_eq!(kind("mode ∈ {fast, slow}"), ConstraintType::CategoricalValue);
        assert_eq!(kind("time in seconds > 5"), ConstraintType::ValueComparison);
    }

    #[test]
    fn rejects_garbage() {
        for t in ["", "   ", "> 3", "a >", "a > b > c", "{x}", "a in {fast, slow"] {
            assert!(parse_constraint_expr(t).is_err(), "{t:?}");
        }
    }

    #[test]
    fn attributes_compare_case_insensitively() {
        assert_eq!(Attribute::new("Max  Frequency"), Attribute::new("max frequency"));
        assert_eq!(Attribute::new("Max  Frequency").as_str(), "Max Frequency");
    }

    #[test]
    fn seed_syntax() {
        let s = SeedRef::parse("a/B.java:12:field:B.x").unwrap();
        assert_eq!((s.file.as_str(), s.line, s.kind.as_str()), ("a/B.java", 12, "field"));
        assert_eq!(s.symbol.as_deref(), Some("B.x"));
        assert!(SeedRef::parse("operator:>").unwrap().is_operator());
        assert!(SeedRef::parse("B.java:x:field").is_err());
        assert_eq!(SeedRef::parse(&s.to_string()).unwrap(), s);
    }
}
