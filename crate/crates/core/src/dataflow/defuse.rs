use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::frontend::{
    CallOutcome, FileId, LiteralKind, MethodId, NodeKind, NodeRef, Resolver, Role,
    SourceCorpus, SymbolTable, Target,
};

use super::callgraph::CallGraph;

/// A data-definition site.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DefKey {
    Field(String),
    /// The return value of a method.
    Method(MethodId),
    Param(NodeRef),
    /// Local declaration, catch parameter or foreach loop variable.
    Local(NodeRef),
    /// Every occurrence of a literal with this source text.
    Literal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefKind {
    Field,
    Method,
    Parameter,
    Local,
    Literal,
}

impl DefKind {
    pub fn parse(s: &str) -> Option<DefKind> {
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "field" | "field-decl" => DefKind::Field,
            "method" | "method-decl" | "getter" => DefKind::Method,
            "parameter" | "param" => DefKind::Parameter,
            "local" | "local-var-decl" | "assignment" => DefKind::Local,
            "literal" | "constant" => DefKind::Literal,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DefKind::Field => "field",
            DefKind::Method => "method",
            DefKind::Parameter => "parameter",
            DefKind::Local => "local",
            DefKind::Literal => "literal",
        }
    }
}

impl DefKey {
    pub fn kind(&self) -> DefKind {
        match self {
            DefKey::Field(_) => DefKind::Field,
            DefKey::Method(_) => DefKind::Method,
            DefKey::Param(_) => DefKind::Parameter,
            DefKey::Local(_) => DefKind::Local,
            DefKey::Literal(_) => DefKind::Literal,
        }
    }

    /// Declaration node, when the definition has a single one.
    pub fn node(&self, symbols: &SymbolTable) -> Option<NodeRef> {
        match self {
            DefKey::Field(q) => symbols.fields.get(q).map(|f| f.node),
            DefKey::Method(m) => Some(symbols.method(*m).node),
            DefKey::Param(n) | DefKey::Local(n) => Some(*n),
            DefKey::Literal(_) => None,
        }
    }

    pub fn describe(&self, corpus: &SourceCorpus, symbols: &SymbolTable) -> String {
        match self {
            DefKey::Field(q) => format!("field {q}"),
            DefKey::Method(m) => format!("method {}", symbols.method(*m).qname),
            DefKey::Param(n) | DefKey::Local(n) => {
                let node = corpus.node(*n);
                let kind = if matches!(self, DefKey::Param(_)) { "parameter" } else { "local" };
                format!(
                    "{kind} {} at {}:{}",
                    node.name(),
                    corpus.display_path(n.file),
                    node.location.line
                )
            }
            DefKey::Literal(t) => format!("literal {t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    DirectRead,
    GetterRead,
    LocalPropagation,
    ParameterPassing,
    ReturnPropagation,
}

impl EdgeKind {
    /// Interprocedural hops the edge costs.
    pub fn cost(self) -> u32 {
        match self {
            EdgeKind::DirectRead | EdgeKind::LocalPropagation => 0,
            EdgeKind::GetterRead | EdgeKind::ParameterPassing | EdgeKind::ReturnPropagation => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::DirectRead => "direct-read",
            EdgeKind::GetterRead => "getter-read",
            EdgeKind::LocalPropagation => "local-propagation",
            EdgeKind::ParameterPassing => "parameter-passing",
            EdgeKind::ReturnPropagation => "return-propagation",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A vertex of the def-use graph: a definition or a statement anchor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphNode {
    Def(DefKey),
    Stmt(NodeRef),
}

#[derive(Debug, Clone, Default)]
pub struct DefUseGraph {
    out: BTreeMap<GraphNode, BTreeSet<(GraphNode, EdgeKind)>>,
    defs: BTreeSet<DefKey>,
}

impl DefUseGraph {
    pub fn contains(&self, def: &DefKey) -> bool {
        self.defs.contains(def)
    }

    pub fn defs(&self) -> impl Iterator<Item = &DefKey> {
        self.defs.iter()
    }

    pub fn successors(&self, n: &GraphNode) -> impl Iterator<Item = &(GraphNode, EdgeKind)> {
        self.out.get(n).into_iter().flatten()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&GraphNode, &GraphNode, EdgeKind)> {
        self.out
            .iter()
            .flat_map(|(from, tos)| tos.iter().map(move |(to, k)| (from, to, *k)))
    }

    pub fn edge_count(&self) -> usize {
        self.out.values().map(BTreeSet::len).sum()
    }

    fn add(&mut self, from: GraphNode, to: GraphNode, kind: EdgeKind) {
        for n in [&from, &to] {
            if let GraphNode::Def(d) = n {
                self.defs.insert(d.clone());
            }
        }
        self.out.entry(from).or_default().insert((to, kind));
    }

    fn add_def(&mut self, def: DefKey) {
        self.defs.insert(def);
    }
}

const CONTAINER_WRITES: [&str; 10] = [
    "add", "addAll", "put", "putAll", "set", "push", "offer", "append", "insert", "addElement",
];

struct Builder<'a> {
    corpus: &'a SourceCorpus,
    symbols: &'a SymbolTable,
    calls: &'a CallGraph,
    res: Resolver<'a>,
    graph: DefUseGraph,
}

impl<'a> Builder<'a> {
    /// Definition a name or field access refers to, if any.
    fn def_of(&self, n: NodeRef) -> Option<DefKey> {
        let node = self.corpus.node(n);
        let target = match node.kind {
            NodeKind::NameRef => self.res.resolve_name(n),
            NodeKind::FieldAccess => self.res.resolve_field_access(n),
            _ => return None,
        };
        match target {
            Target::Field(q) => Some(DefKey::Field(q)),
            Target::Local(d) => Some(DefKey::Local(d)),
            Target::Param(p) => Some(DefKey::Param(p)),
            _ => None,
        }
    }

    /// Definition written through an assignment target, looking through
    /// element writes to the container.
    fn written_def(&self, mut t: NodeRef) -> Option<DefKey> {
        loop {
            let node = self.corpus.node(t);
            if node.kind == NodeKind::Opaque && node.detail() == "array_access" {
                t = self.corpus.children(t).find(|c| self.corpus.node(*c).role == Role::Receiver)?;
                continue;
            }
            return self.def_of(t);
        }
    }

    fn is_pure_write(&self, n: NodeRef) -> bool {
        let node = self.corpus.node(n);
        if node.role != Role::Target {
            return false;
        }
        self.corpus.parent(n).is_some_and(|p| {
            let pn = self.corpus.node(p);
            pn.kind == NodeKind::Assignment && pn.op() == "="
        })
    }

    /// Definitions read anywhere inside `root`, including return values of
    /// calls and literal occurrences.
    fn reads_in(&self, root: NodeRef) -> BTreeSet<DefKey> {
        let mut out = BTreeSet::new();
        for d in self.corpus.descendants(root) {
            let node = self.corpus.node(d);
            match node.kind {
                NodeKind::NameRef | NodeKind::FieldAccess if !self.is_pure_write(d) => {
                    if let Some(k) = self.def_of(d) {
                        out.insert(k);
                    }
                }
                NodeKind::Literal if node.literal != Some(LiteralKind::Null) => {
                    out.insert(DefKey::Literal(node.text.clone()));
                }
                NodeKind::MethodCall => {
                    for e in self.calls.callees_at(d) {
                        out.insert(DefKey::Method(e.callee));
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn build(mut self) -> DefUseGraph {
        for f in self.symbols.fields.keys() {
            self.graph.add_def(DefKey::Field(f.clone()));
        }
        for m in self.symbols.all_methods() {
            self.graph.add_def(DefKey::Method(m.id));
            for p in &m.params {
                self.graph.add_def(DefKey::Param(p.node));
            }
        }
        let nodes: Vec<NodeRef> = self.corpus.all_nodes().collect();
        for n in nodes {
            self.visit(n);
        }
        self.graph
    }

    fn visit(&mut self, n: NodeRef) {
        let corpus = self.corpus;
        let node = corpus.node(n);
        let stmt = || GraphNode::Stmt(corpus.anchor(n));
        match node.kind {
            NodeKind::NameRef | NodeKind::FieldAccess => {
                if !self.is_pure_write(n) {
                    if let Some(d) = self.def_of(n) {
                        self.graph.add(GraphNode::Def(d), stmt(), EdgeKind::DirectRead);
                    }
                }
            }
            NodeKind::Literal if node.literal != Some(LiteralKind::Null) => {
                let d = DefKey::Literal(node.text.clone());
                self.graph.add(GraphNode::Def(d), stmt(), EdgeKind::DirectRead);
            }
            NodeKind::LocalVarDecl => {
                self.graph.add_def(DefKey::Local(n));
                if corpus.children(n).any(|c| corpus.node(c).role == Role::Value) {
                    self.graph
                        .add(stmt(), GraphNode::Def(DefKey::Local(n)), EdgeKind::LocalPropagation);
                }
            }
            NodeKind::FieldDecl => {
                let has_value = corpus.children(n).any(|c| corpus.node(c).role == Role::Value);
                if let (true, Some(f)) = (has_value, self.symbols.field_of_node(n)) {
                    let d = DefKey::Field(f.qname.clone());
                    self.graph.add(stmt(), GraphNode::Def(d), EdgeKind::LocalPropagation);
                }
            }
            NodeKind::Assignment => {
                let target = corpus.children(n).find(|c| corpus.node(*c).role == Role::Target);
                if let Some(d) = target.and_then(|t| self.written_def(t)) {
                    self.graph.add(stmt(), GraphNode::Def(d), EdgeKind::LocalPropagation);
                }
            }
            NodeKind::UnaryExpr if matches!(node.op(), "++" | "--") => {
                if let Some(d) = corpus.children(n).next().and_then(|c| self.written_def(c)) {
                    self.graph.add(stmt(), GraphNode::Def(d), EdgeKind::LocalPropagation);
                }
            }
            NodeKind::LoopStmt if node.detail() == "foreach" => {
                self.graph
                    .add(stmt(), GraphNode::Def(DefKey::Local(n)), EdgeKind::LocalPropagation);
            }
            NodeKind::ReturnStmt => {
                let method = corpus
                    .enclosing_method(n)
                    .and_then(|m| self.symbols.method_of_node(m));
                if let Some(m) = method {
                    self.graph
                        .add(stmt(), GraphNode::Def(DefKey::Method(m)), EdgeKind::LocalPropagation);
                }
            }
            NodeKind::MethodCall => self.visit_call(n),
            _ => {}
        }
    }

    fn visit_call(&mut self, n: NodeRef) {
        let corpus = self.corpus;
        let stmt = GraphNode::Stmt(corpus.anchor(n));
        let args: Vec<NodeRef> = corpus
            .children(n)
            .filter(|c| corpus.node(*c).role == Role::Argument)
            .collect();
        let edges: Vec<_> = self.calls.callees_at(n).copied().collect();
        for e in &edges {
            let callee = self.symbols.method(e.callee);
            self.graph.add(
                GraphNode::Def(DefKey::Method(e.callee)),
                stmt.clone(),
                EdgeKind::ReturnPropagation,
            );
            if let Some(field) = self.symbols.getters.get(&callee.qname) {
                self.graph.add(
                    GraphNode::Def(DefKey::Field(field.clone())),
                    stmt.clone(),
                    EdgeKind::GetterRead,
                );
            }
            if callee.params.is_empty() {
                continue;
            }
            for (i, a) in args.iter().enumerate() {
                let p = &callee.params[i.min(callee.params.len() - 1)];
                for d in self.reads_in(*a) {
                    self.graph.add(
                        GraphNode::Def(d),
                        GraphNode::Def(DefKey::Param(p.node)),
                        EdgeKind::ParameterPassing,
                    );
                }
            }
        }
        // element writes into library containers define the container
        let node = corpus.node(n);
        if edges.is_empty() && CONTAINER_WRITES.contains(&node.name()) && !args.is_empty() {
            if let Some(recv) = corpus.children(n).find(|c| corpus.node(*c).role == Role::Receiver) {
                if matches!(self.res.resolve_call(n), CallOutcome::Library | CallOutcome::Unresolved) {
                    if let Some(d) = self.def_of(recv) {
                        self.graph.add(stmt, GraphNode::Def(d), EdgeKind::LocalPropagation);
                    }
                }
            }
        }
    }
}

pub fn build_def_use(corpus: &SourceCorpus, symbols: &SymbolTable, calls: &CallGraph) -> DefUseGraph {
    Builder {
        corpus,
        symbols,
        calls,
        res: Resolver::new(corpus, symbols),
        graph: DefUseGraph::default(),
    }
    .build()
}

/// Definition declared on `line` of `file`, optionally restricted by kind
/// and by name (or literal text).
pub fn def_at(
    corpus: &SourceCorpus,
    symbols: &SymbolTable,
    file: FileId,
    line: u32,
    kind: Option<DefKind>,
    symbol: Option<&str>,
) -> Option<DefKey> {
    let ast = corpus.ast(file)?;
    let mut candidates: Vec<(u8, u32, DefKey)> = Vec::new();
    for (i, node) in ast.nodes.iter().enumerate() {
        if node.location.line != line {
            continue;
        }
        let r = NodeRef {
            file,
            idx: crate::frontend::NodeIdx(i as u32),
        };
        let (rank, key, name) = match node.kind {
            NodeKind::FieldDecl => match symbols.field_of_node(r) {
                Some(f) => (0, DefKey::Field(f.qname.clone()), node.name()),
                None => continue,
            },
            NodeKind::MethodDecl => match symbols.method_of_node(r) {
                Some(m) => (1, DefKey::Method(m), node.name()),
                None => continue,
            },
            NodeKind::Parameter => (2, DefKey::Param(r), node.name()),
            NodeKind::LocalVarDecl => (3, DefKey::Local(r), node.name()),
            NodeKind::LoopStmt if node.detail() == "foreach" => (3, DefKey::Local(r), node.name()),
            NodeKind::Literal if node.literal != Some(LiteralKind::Null) => {
                (4, DefKey::Literal(node.text.clone()), node.text.as_str())
            }
            _ => continue,
        };
        if kind.is_some_and(|k| k != key.kind()) {
            continue;
        }
        if let Some(s) = symbol {
            if !symbol_matches(name, s) {
                continue;
            }
        }
        candidates.push((rank, node.location.column, key));
    }
    candidates.sort();
    candidates.into_iter().next().map(|(_, _, k)| k)
}

fn symbol_matches(name: &str, wanted: &str) -> bool {
    let wanted = wanted.trim();
    if name == wanted {
        return true;
    }
    let unquoted = name.trim_matches('"').trim_matches('\'');
    let tail = wanted.rsplit('.').next().unwrap_or(wanted);
    unquoted == wanted || (!name.starts_with('"') && name == tail)
}
