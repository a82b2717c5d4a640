//! Structural pattern matching over the lowered AST.
//!
//! Each pattern has a raw rule. A raw match survives when no higher-ranked
//! pattern matches the same node and no compound match claims the node.

mod precedence;
mod properties;
pub(crate) mod rules;

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::catalog::{builtin_catalog, Cip, CipPattern, PartRole};
use crate::frontend::{FileId, Location, NodeRef, SourceCorpus, SymbolTable};

pub use properties::{match_properties_file, match_properties_roots};
pub use rules::{canonical_op, mirror_op};

use precedence::{outranked_by, CLAIMERS};
use rules::{raw_match, Claim, Cx, Raw};

/// One source fragment bound to one pattern part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundPart {
    pub role: PartRole,
    /// Source text; the operator lexeme for operator parts.
    pub text: String,
    pub node: Option<NodeRef>,
}

impl Serialize for BoundPart {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundPart", 2)?;
        st.serialize_field("role", &self.role.to_string())?;
        st.serialize_field("text", &self.text)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct PartsBinding(pub Vec<BoundPart>);

impl PartsBinding {
    pub fn texts(&self) -> Vec<&str> {
        self.0.iter().map(|p| p.text.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn operator(&self) -> Option<&str> {
        self.0.iter().find(|p| p.role.is_operator()).map(|p| p.text.as_str())
    }

    pub fn data_parts(&self) -> impl Iterator<Item = &BoundPart> {
        self.0.iter().filter(|p| !p.role.is_operator())
    }
}

/// Where in the AST an instance was found. Absent for properties-file lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Site {
    /// Node the rule fired on.
    pub node: NodeRef,
    /// Statement anchor of `node`.
    pub anchor: NodeRef,
    /// Source region covered, wider than `node` for compound patterns.
    pub span: Location,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternInstance {
    pub pattern: Cip,
    pub path: String,
    pub line: u32,
    pub column: u32,
    pub binding: PartsBinding,
    pub statement_text: String,
    /// Value text of a properties-file entry.
    pub value: Option<String>,
    pub site: Option<Site>,
}

impl PatternInstance {
    pub fn file(&self) -> Option<FileId> {
        self.site.map(|s| s.span.file)
    }

    fn sort_key(&self) -> (u32, &str, u32, &'static str, u32) {
        let file = self.file().map_or(u32::MAX, |f| f.0);
        (file, self.path.as_str(), self.line, self.pattern.name(), self.column)
    }
}

impl Serialize for PatternInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PatternInstance", 7)?;
        st.serialize_field("pattern", self.pattern.name())?;
        st.serialize_field("file", &self.path)?;
        st.serialize_field("line", &self.line)?;
        st.serialize_field("column", &self.column)?;
        st.serialize_field("parts", &self.binding)?;
        st.serialize_field("text", &self.statement_text)?;
        if let Some(v) = &self.value {
            st.serialize_field("value", v)?;
        }
        st.end()
    }
}

/// Sort into (file, line, pattern name) order.
pub fn sort_instances(instances: &mut [PatternInstance]) {
    instances.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

fn covers(corpus: &SourceCorpus, claim: Claim, n: NodeRef) -> bool {
    match claim {
        Claim::Node(c) => c == n,
        Claim::Subtree(c) => c == n || corpus.ancestors(n).any(|a| a == c),
        Claim::Below(c) => c != n && corpus.ancestors(n).any(|a| a == c),
    }
}

fn claimed(cx: &Cx<'_>, n: NodeRef) -> bool {
    let corpus = cx.corpus;
    let mut candidates: Vec<NodeRef> = corpus.ancestors(n).collect();
    let mut with_siblings = Vec::new();
    for a in std::iter::once(n).chain(candidates.iter().copied()) {
        if let Some(p) = corpus.parent(a) {
            let kids: Vec<NodeRef> = corpus.children(p).collect();
            if let Some(i) = kids.iter().position(|k| *k == a) {
                with_siblings.extend(kids[..i].iter().copied());
            }
        }
    }
    candidates.extend(with_siblings);
    candidates.push(n);
    candidates.into_iter().any(|c| {
        CLAIMERS.iter().any(|q| {
            raw_match(cx, c, *q).is_some_and(|raw| raw.claims.iter().any(|cl| covers(corpus, *cl, n)))
        })
    })
}

fn surviving(cx: &Cx<'_>, n: NodeRef, cip: Cip) -> Option<Raw> {
    let raw = raw_match(cx, n, cip)?;
    if outranked_by(cip).iter().any(|q| raw_match(cx, n, *q).is_some()) {
        return None;
    }
    if claimed(cx, n) {
        return None;
    }
    Some(raw)
}

/// Bind `pattern`'s parts at `node`, or `None` when it does not match there.
pub fn match_statement(
    corpus: &SourceCorpus,
    symbols: &SymbolTable,
    node: NodeRef,
    pattern: &CipPattern,
) -> Option<PartsBinding> {
    let cx = Cx::new(corpus, symbols);
    surviving(&cx, node, pattern.id).map(|r| PartsBinding(r.parts))
}

/// Like [`match_statement`] but returns a located instance.
pub fn match_instance(
    corpus: &SourceCorpus,
    symbols: &SymbolTable,
    node: NodeRef,
    pattern: Cip,
) -> Option<PatternInstance> {
    let cx = Cx::new(corpus, symbols);
    surviving(&cx, node, pattern).map(|raw| instance(corpus, node, pattern, raw))
}

fn instance(corpus: &SourceCorpus, node: NodeRef, pattern: Cip, raw: Raw) -> PatternInstance {
    let loc = corpus.node(node).location;
    let content = &corpus.file(node.file).content;
    let statement_text = content
        .get(raw.span.start_byte..raw.span.end_byte)
        .unwrap_or_default()
        .to_string();
    PatternInstance {
        pattern,
        path: corpus.display_path(node.file).to_string(),
        line: loc.line,
        column: loc.column,
        binding: PartsBinding(raw.parts),
        statement_text,
        value: None,
        site: Some(Site {
            node,
            anchor: corpus.anchor(node),
            span: raw.span,
        }),
    }
}

/// Every surviving instance of `patterns` in the corpus, sorted.
pub fn match_all(
    corpus: &SourceCorpus,
    patterns: &[&CipPattern],
    symbols: &SymbolTable,
) -> Vec<PatternInstance> {
    let requested: Vec<Cip> = patterns.iter().map(|p| p.id).collect();
    let mut needed: Vec<Cip> = requested.clone();
    needed.extend(CLAIMERS);
    for c in &requested {
        needed.extend(outranked_by(*c));
    }
    needed.sort();
    needed.dedup();
    let files: Vec<FileId> = corpus.asts().map(|(f, _)| f).collect();
    let mut out: Vec<PatternInstance> = files
        .par_iter()
        .flat_map_iter(|&file| {
            let cx = Cx::new(corpus, symbols);
            let ast = corpus.ast(file).expect("parsed file");
            let mut raws: HashMap<NodeRef, Vec<(Cip, Raw)>> = HashMap::new();
            let mut claimed: HashSet<NodeRef> = HashSet::new();
            for i in 0..ast.nodes.len() as u32 {
                let n = NodeRef {
                    file,
                    idx: crate::frontend::NodeIdx(i),
                };
                for &c in &needed {
                    if let Some(raw) = raw_match(&cx, n, c) {
                        for claim in &raw.claims {
                            match *claim {
                                Claim::Node(x) => {
                                    claimed.insert(x);
                                }
                                Claim::Subtree(x) => claimed.extend(corpus.descendants(x)),
                                Claim::Below(x) => {
                                    claimed.extend(corpus.descendants(x).into_iter().skip(1))
                                }
                            }
                        }
                        raws.entry(n).or_default().push((c, raw));
                    }
                }
            }
            let mut found = Vec::new();
            for (n, list) in &raws {
                if claimed.contains(n) {
                    continue;
                }
                for (c, raw) in list {
                    if !requested.contains(c) {
                        continue;
                    }
                    let beaten = outranked_by(*c)
                        .iter()
                        .any(|q| list.iter().any(|(o, _)| o == q));
                    if !beaten {
                        found.push(instance(corpus, *n, *c, raw.clone()));
                    }
                }
            }
            found
        })
        .collect();
    sort_instances(&mut out);
    out
}

/// All catalog patterns that have a structural rule.
pub fn structural_patterns() -> Vec<&'static CipPattern> {
    builtin_catalog()
        .iter()
        .filter(|p| p.id != Cip::PropertiesFile)
        .collect()
}
