//! Enforcing-statement descent, data-definition resolution and trace links.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::Program;
use crate::catalog::CipPattern;
use crate::detectors::{resolve_seed, DetectionReport, Seed};
use crate::constraint::SeedRef;
use crate::dataflow::{forward_slice, intersect};
use crate::error::{Diagnostic, Error};
use crate::frontend::{
    CallOutcome, LiteralKind, MethodId, NodeKind, NodeRef, Resolver, Role, Target,
};
use crate::matcher::{canonical_op, match_instance, mirror_op, PatternInstance};

/// What a candidate statement must look like for descent to stop on it.
#[derive(Debug, Clone)]
pub struct Predicate {
    pub pattern: &'static CipPattern,
    /// Statements in every seed's slice; `None` when there are no def seeds.
    region: Option<BTreeSet<NodeRef>>,
    operators: Vec<&'static str>,
}

impl Predicate {
    pub fn new(
        program: &Program,
        pattern: &'static CipPattern,
        seeds: &[Seed],
        depth: u32,
    ) -> Result<Predicate, Error> {
        let mut slices = Vec::new();
        let mut operators = Vec::new();
        for s in seeds {
            match s {
                Seed::Def(d) => slices.push(forward_slice(&program.defuse, d, depth)?),
                Seed::Operator(op) => operators.push(*op),
            }
        }
        let region = (!slices.is_empty()).then(|| intersect(&slices));
        Ok(Predicate {
            pattern,
            region,
            operators,
        })
    }

    /// Predicate from seed references in `file:line:kind` form.
    pub fn from_refs(
        program: &Program,
        pattern: &'static CipPattern,
        seeds: &[SeedRef],
        depth: u32,
    ) -> Result<Predicate, Error> {
        let seeds: Vec<Seed> = seeds
            .iter()
            .map(|s| resolve_seed(program, s))
            .collect::<Result<_, _>>()?;
        Predicate::new(program, pattern, &seeds, depth)
    }

    /// Instance of the pattern owned by `stmt`, when the predicate holds.
    pub fn instance_at(&self, program: &Program, stmt: NodeRef) -> Option<PatternInstance> {
        if self.region.as_ref().is_some_and(|r| !r.contains(&stmt)) {
            return None;
        }
        own_part(program, stmt).into_iter().find_map(|n| {
            let inst = match_instance(&program.corpus, &program.symbols, n, self.pattern.id)?;
            let op = inst.binding.operator().and_then(canonical_op);
            let ops_ok = self
                .operators
                .iter()
                .all(|w| op.is_some_and(|o| o == *w || o == mirror_op(w)));
            ops_ok.then_some(inst)
        })
    }

    pub fn holds(&self, program: &Program, stmt: NodeRef) -> bool {
        self.instance_at(program, stmt).is_some()
    }
}

/// `stmt` and the nodes it owns, excluding nested statements.
fn own_part(program: &Program, stmt: NodeRef) -> Vec<NodeRef> {
    program
        .corpus
        .descendants(stmt)
        .into_iter()
        .filter(|n| program.corpus.anchor(*n) == stmt)
        .collect()
}

fn method_containing(program: &Program, n: NodeRef) -> Option<MethodId> {
    program
        .corpus
        .enclosing_method(n)
        .and_then(|m| program.symbols.method_of_node(m))
}

fn body_statements(program: &Program, m: MethodId) -> impl Iterator<Item = NodeRef> + '_ {
    let decl = program.symbols.method(m).node;
    program
        .corpus
        .descendants(decl)
        .into_iter()
        .filter(move |n| *n != decl && program.corpus.node(*n).is_stmt())
}

fn source_key(program: &Program, n: NodeRef) -> (u32, usize) {
    (n.file.0, program.corpus.node(n).location.start_byte)
}

/// Follow calls from `candidate` into corpus methods while they contain a
/// statement satisfying `predicate`. Bodies are searched depth-first in
/// source order. When the walk closes a cycle, the earliest statement of
/// the cycle in source order is returned, so the result does not depend on
/// where the cycle was entered.
pub fn descend_enforcing(program: &Program, candidate: NodeRef, predicate: &Predicate) -> NodeRef {
    let candidate = program.corpus.anchor(candidate);
    let mut path: Vec<(NodeRef, Option<MethodId>)> =
        vec![(candidate, method_containing(program, candidate))];
    let mut visited: BTreeSet<MethodId> = path[0].1.into_iter().collect();
    loop {
        let cur = path.last().expect("non-empty path").0;
        let mut next = None;
        let mut closing: Option<usize> = None;
        'calls: for call in own_part(program, cur) {
            if program.corpus.node(call).kind != NodeKind::MethodCall {
                continue;
            }
            for edge in program.calls.callees_at(call) {
                let m = edge.callee;
                if !visited.insert(m) {
                    if let Some(i) = path.iter().position(|(_, pm)| *pm == Some(m)) {
                        closing = Some(closing.map_or(i, |c| c.min(i)));
                    }
                    continue;
                }
                if let Some(t) = body_statements(program, m).find(|s| predicate.holds(program, *s)) {
                    next = Some((t, m));
                    break 'calls;
                }
            }
        }
        match (next, closing) {
            (Some((t, m)), _) => path.push((t, Some(m))),
            (None, Some(i)) => {
                return path[i..]
                    .iter()
                    .map(|(s, _)| *s)
                    .filter(|s| *s != candidate || predicate.holds(program, *s))
                    .min_by_key(|s| source_key(program, *s))
                    .unwrap_or(cur);
            }
            (None, None) => return cur,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefinitionKind {
    FieldDeclaration,
    MethodDeclaration,
    LibraryCallSite,
    LocalAssignment,
    LiteralOccurrence,
    ParameterDefinition,
}

impl DefinitionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DefinitionKind::FieldDeclaration => "field-declaration",
            DefinitionKind::MethodDeclaration => "method-declaration",
            DefinitionKind::LibraryCallSite => "library-call-site",
            DefinitionKind::LocalAssignment => "local-assignment",
            DefinitionKind::LiteralOccurrence => "literal-occurrence",
            DefinitionKind::ParameterDefinition => "parameter-definition",
        }
    }

    /// Node kinds a definition of this kind may point at.
    pub fn node_kinds(self) -> &'static [NodeKind] {
        match self {
            DefinitionKind::FieldDeclaration => &[NodeKind::FieldDecl],
            DefinitionKind::MethodDeclaration => &[NodeKind::MethodDecl],
            DefinitionKind::LibraryCallSite => &[NodeKind::MethodCall],
            DefinitionKind::LocalAssignment => {
                &[NodeKind::LocalVarDecl, NodeKind::Assignment, NodeKind::LoopStmt]
            }
            DefinitionKind::LiteralOccurrence => &[NodeKind::Literal],
            DefinitionKind::ParameterDefinition => &[NodeKind::Parameter],
        }
    }
}

impl fmt::Display for DefinitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataDefinition {
    pub kind: DefinitionKind,
    pub file: String,
    pub line: u32,
    pub column: u32,
    /// Qualified symbol name, or the literal text.
    pub symbol: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unresolved: bool,
    #[serde(skip)]
    pub node: Option<NodeRef>,
}

struct DefResolver<'a> {
    program: &'a Program,
    res: Resolver<'a>,
}

impl<'a> DefResolver<'a> {
    fn at(&self, kind: DefinitionKind, n: NodeRef, symbol: impl Into<String>) -> DataDefinition {
        let loc = self.program.corpus.node(n).location;
        DataDefinition {
            kind,
            file: self.program.corpus.display_path(n.file).to_string(),
            line: loc.line,
            column: loc.column,
            symbol: symbol.into(),
            unresolved: false,
            node: Some(n),
        }
    }

    fn placeholder(&self, n: NodeRef) -> DataDefinition {
        let node = self.program.corpus.node(n);
        let kind = if node.kind == NodeKind::Literal {
            DefinitionKind::LiteralOccurrence
        } else {
            DefinitionKind::FieldDeclaration
        };
        DataDefinition {
            unresolved: node.kind != NodeKind::Literal,
            node: None,
            ..self.at(kind, n, node.text.clone())
        }
    }

    fn child(&self, n: NodeRef, role: Role) -> Option<NodeRef> {
        let corpus = &self.program.corpus;
        corpus.children(n).find(|c| corpus.node(*c).role == role)
    }

    fn resolve(&self, n: NodeRef) -> DataDefinition {
        self.try_resolve(n).unwrap_or_else(|| self.placeholder(n))
    }

    fn try_resolve(&self, n: NodeRef) -> Option<DataDefinition> {
        let corpus = &self.program.corpus;
        let symbols = &self.program.symbols;
        let node = corpus.node(n);
        match node.kind {
            NodeKind::Literal if node.literal != Some(LiteralKind::Null) => {
                Some(self.at(DefinitionKind::LiteralOccurrence, n, node.text.clone()))
            }
            NodeKind::NameRef | NodeKind::FieldAccess => {
                let target = if node.kind == NodeKind::NameRef {
                    self.res.resolve_name(n)
                } else {
                    self.res.resolve_field_access(n)
                };
                match target {
                    Target::Field(q) => Some(self.field(&q)),
                    Target::Local(d) => {
                        Some(self.at(DefinitionKind::LocalAssignment, d, corpus.node(d).name()))
                    }
                    Target::Param(p) => {
                        Some(self.at(DefinitionKind::ParameterDefinition, p, corpus.node(p).name()))
                    }
                    Target::Class(_) | Target::Unresolved => None,
                }
            }
            NodeKind::MethodCall => match self.res.resolve_call(n) {
                CallOutcome::Corpus(targets) => {
                    let (m, _) = *targets.first()?;
                    let sym = symbols.method(m);
                    match symbols.getters.get(&sym.qname) {
                        Some(f) => Some(self.field(f)),
                        None => Some(self.at(DefinitionKind::MethodDeclaration, sym.node, sym.qname.clone())),
                    }
                }
                CallOutcome::Library | CallOutcome::Unresolved => {
                    Some(self.at(DefinitionKind::LibraryCallSite, n, node.text.clone()))
                }
            },
            NodeKind::MethodDecl => {
                let m = symbols.method_of_node(n)?;
                Some(self.at(DefinitionKind::MethodDeclaration, n, symbols.method(m).qname.clone()))
            }
            NodeKind::FieldDecl => symbols.field_of_node(n).map(|f| self.field(&f.qname.clone())),
            NodeKind::LocalVarDecl => Some(self.at(DefinitionKind::LocalAssignment, n, node.name())),
            NodeKind::Parameter => Some(self.at(DefinitionKind::ParameterDefinition, n, node.name())),
            NodeKind::LoopStmt if node.detail() == "foreach" => {
                Some(self.at(DefinitionKind::LocalAssignment, n, node.name()))
            }
            NodeKind::Assignment => self.child(n, Role::Target).and_then(|t| self.try_resolve(t)),
            _ => {
                let kids: Vec<NodeRef> = corpus.children(n).collect();
                kids.into_iter().find_map(|c| self.try_resolve(c))
            }
        }
    }

    /// A field's definition: its declaration, or the literal handed to the
    /// constructor when the field's only write copies a constructor
    /// parameter and that constructor has a single call site.
    fn field(&self, qname: &str) -> DataDefinition {
        let symbols = &self.program.symbols;
        let Some(f) = symbols.fields.get(qname) else {
            let mut d = self.placeholder_named(qname);
            d.unresolved = true;
            return d;
        };
        let decl = self.at(DefinitionKind::FieldDeclaration, f.node, qname);
        self.constructor_literal(qname).unwrap_or(decl)
    }

    fn placeholder_named(&self, symbol: &str) -> DataDefinition {
        DataDefinition {
            kind: DefinitionKind::FieldDeclaration,
            file: String::new(),
            line: 0,
            column: 0,
            symbol: symbol.to_string(),
            unresolved: true,
            node: None,
        }
    }

    fn constructor_literal(&self, qname: &str) -> Option<DataDefinition> {
        let corpus = &self.program.corpus;
        let symbols = &self.program.symbols;
        let f = symbols.fields.get(qname)?;
        if corpus.children(f.node).any(|c| corpus.node(c).role == Role::Value) {
            return None;
        }
        let writes: Vec<NodeRef> = corpus
            .all_nodes()
            .filter(|n| {
                let node = corpus.node(*n);
                let writes_field = |t: NodeRef| match corpus.node(t).kind {
                    NodeKind::NameRef => self.res.resolve_name(t) == Target::Field(qname.to_string()),
                    NodeKind::FieldAccess => {
                        self.res.resolve_field_access(t) == Target::Field(qname.to_string())
                    }
                    _ => false,
                };
                match node.kind {
                    NodeKind::Assignment => self.child(*n, Role::Target).is_some_and(writes_field),
                    NodeKind::UnaryExpr if matches!(node.op(), "++" | "--") => {
                        corpus.children(*n).next().is_some_and(writes_field)
                    }
                    _ => false,
                }
            })
            .collect();
        let [write] = writes.as_slice() else { return None };
        if corpus.node(*write).op() != "=" {
            return None;
        }
        let ctor = method_containing(self.program, *write)?;
        let ctor_sym = symbols.method(ctor);
        if !ctor_sym.is_constructor || ctor_sym.class != f.class {
            return None;
        }
        let value = self.child(*write, Role::Value)?;
        let Target::Param(p) = (corpus.node(value).kind == NodeKind::NameRef)
            .then(|| self.res.resolve_name(value))?
        else {
            return None;
        };
        let index = ctor_sym.params.iter().position(|ps| ps.node == p)?;
        let sites: Vec<NodeRef> = self.program.calls.call_sites_of(ctor).map(|e| e.site).collect();
        let [site] = sites.as_slice() else { return None };
        let arg = corpus
            .children(*site)
            .filter(|c| corpus.node(*c).role == Role::Argument)
            .nth(index)?;
        let an = corpus.node(arg);
        (an.kind == NodeKind::Literal && an.literal != Some(LiteralKind::Null))
            .then(|| self.at(DefinitionKind::LiteralOccurrence, arg, an.text.clone()))
    }
}

/// One definition per data part of `enforcing`, in part order, plus a
/// diagnostic for every operand that could not be resolved.
pub fn resolve_data_definitions(
    program: &Program,
    enforcing: &PatternInstance,
) -> (Vec<DataDefinition>, Vec<Diagnostic>) {
    let r = DefResolver {
        program,
        res: Resolver::new(&program.corpus, &program.symbols),
    };
    let mut defs = Vec::new();
    let mut diags = Vec::new();
    for part in enforcing.binding.data_parts() {
        let d = match part.node {
            Some(n) => r.resolve(n),
            None => DataDefinition {
                kind: DefinitionKind::LiteralOccurrence,
                file: enforcing.path.clone(),
                line: enforcing.line,
                column: enforcing.column,
                symbol: part.text.clone(),
                unresolved: false,
                node: None,
            },
        };
        if d.unresolved {
            diags.push(Diagnostic::new(
                &enforcing.path,
                enforcing.line,
                enforcing.column,
                &format!("unresolved operand `{}`", part.text),
            ));
        }
        defs.push(d);
    }
    (defs, diags)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Manual,
    Detector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkPart {
    pub role: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnforcingSite {
    pub file: String,
    pub line: u32,
    #[serde(default)]
    pub column: u32,
    pub pattern: String,
    pub parts: Vec<LinkPart>,
    /// Source text of the enforcing statement.
    #[serde(default)]
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLink {
    pub constraint_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    pub enforcing: EnforcingSite,
    pub definitions: Vec<DataDefinition>,
    pub provenance: Provenance,
}

impl TraceLink {
    pub fn location(&self) -> (&str, u32, u32) {
        (&self.enforcing.file, self.enforcing.line, self.enforcing.column)
    }
}

pub fn assemble_trace(
    constraint_id: &str,
    system: Option<&str>,
    enforcing: &PatternInstance,
    definitions: Vec<DataDefinition>,
    provenance: Provenance,
) -> Result<TraceLink, Error> {
    let expected = enforcing.pattern.pattern().data_part_count();
    if definitions.len() != expected {
        return Err(Error::DefinitionCount {
            pattern: enforcing.pattern.name().to_string(),
            expected,
            got: definitions.len(),
        });
    }
    Ok(TraceLink {
        constraint_id: constraint_id.to_string(),
        system: system.map(str::to_string),
        enforcing: EnforcingSite {
            file: enforcing.path.clone(),
            line: enforcing.line,
            column: enforcing.column,
            pattern: enforcing.pattern.name().to_string(),
            parts: enforcing
                .binding
                .0
                .iter()
                .map(|p| LinkPart {
                    role: p.role.to_string(),
                    text: p.text.clone(),
                })
                .collect(),
            text: enforcing.statement_text.clone(),
        },
        definitions,
        provenance,
    })
}

/// Detector links for every candidate of a report.
pub fn links_from_report(
    program: &Program,
    report: &DetectionReport,
    system: Option<&str>,
) -> Result<(Vec<TraceLink>, Vec<Diagnostic>), Error> {
    let mut links = Vec::new();
    let mut diags = Vec::new();
    for c in &report.candidates {
        let (defs, d) = resolve_data_definitions(program, &c.instance);
        diags.extend(d);
        links.push(assemble_trace(&c.constraint_id, system, &c.instance, defs, Provenance::Detector)?);
    }
    Ok((links, diags))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinksFile {
    pub schema_version: String,
    pub links: Vec<TraceLink>,
}

impl LinksFile {
    pub fn new(links: Vec<TraceLink>) -> LinksFile {
        LinksFile {
            schema_version: "1".into(),
            links,
        }
    }
}

/// Parse a links document: either `{schema_version, links}` or a bare array.
pub fn parse_links(path: &str, text: &str) -> Result<Vec<TraceLink>, Error> {
    let malformed = |e: serde_json::Error| Error::Malformed {
        path: path.to_string(),
        message: e.to_string(),
    };
    if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(malformed)
    } else {
        serde_json::from_str::<LinksFile>(text)
            .map(|f| f.links)
            .map_err(malformed)
    }
}
