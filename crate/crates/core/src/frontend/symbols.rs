//! Corpus-wide symbol table: classes, fields, methods, getters and enums.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{flags, NodeKind, NodeRef, Role, SourceCorpus};
use crate::error::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodId(pub u32);

#[derive(Debug, Clone)]
pub struct ClassSym {
    pub qname: String,
    pub name: String,
    pub package: Option<String>,
    pub node: NodeRef,
    /// Supertype names as written (erased).
    pub supertypes: Vec<String>,
    pub is_interface: bool,
    pub is_enum: bool,
    pub is_abstract: bool,
}

#[derive(Debug, Clone)]
pub struct FieldSym {
    pub qname: String,
    pub class: String,
    pub name: String,
    pub node: NodeRef,
    pub type_name: Option<String>,
    pub is_static: bool,
    pub enum_constant: bool,
}

#[derive(Debug, Clone)]
pub struct ParamSym {
    pub name: String,
    pub type_name: Option<String>,
    pub node: NodeRef,
}

#[derive(Debug, Clone)]
pub struct MethodSym {
    pub id: MethodId,
    /// `Class.name`; constructors use `Class.<init>`.
    pub qname: String,
    pub class: String,
    pub name: String,
    pub node: NodeRef,
    pub params: Vec<ParamSym>,
    pub return_type: Option<String>,
    pub has_body: bool,
    /// Carries an explicit `abstract` modifier.
    pub explicit_abstract: bool,
    pub is_constructor: bool,
    pub is_static: bool,
    pub varargs: bool,
}

impl MethodSym {
    pub fn accepts_arity(&self, n: usize) -> bool {
        if self.varargs {
            n + 1 >= self.params.len()
        } else {
            n == self.params.len()
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    pub classes: BTreeMap<String, ClassSym>,
    pub fields: BTreeMap<String, FieldSym>,
    /// Qualified name to overloads in declaration order.
    pub methods: BTreeMap<String, Vec<MethodId>>,
    method_list: Vec<MethodSym>,
    /// Getter method qualified name to the field it returns unchanged.
    pub getters: BTreeMap<String, String>,
    pub enums: BTreeMap<String, Vec<String>>,
    pub warnings: Vec<Diagnostic>,
    class_by_simple: BTreeMap<String, Vec<String>>,
    field_by_name: BTreeMap<String, Vec<String>>,
    method_by_name: BTreeMap<String, Vec<MethodId>>,
    supers: BTreeMap<String, Vec<String>>,
    subs: BTreeMap<String, Vec<String>>,
    node_class: HashMap<NodeRef, String>,
    node_field: HashMap<NodeRef, String>,
    node_method: HashMap<NodeRef, MethodId>,
}

impl SymbolTable {
    pub fn method(&self, id: MethodId) -> &MethodSym {
        &self.method_list[id.0 as usize]
    }

    pub fn all_methods(&self) -> &[MethodSym] {
        &self.method_list
    }

    pub fn class_of_node(&self, node: NodeRef) -> Option<&str> {
        self.node_class.get(&node).map(String::as_str)
    }

    pub fn field_of_node(&self, node: NodeRef) -> Option<&FieldSym> {
        self.node_field.get(&node).and_then(|q| self.fields.get(q))
    }

    pub fn method_of_node(&self, node: NodeRef) -> Option<MethodId> {
        self.node_method.get(&node).copied()
    }

    pub fn is_getter(&self, qname: &str) -> bool {
        self.getters.contains_key(qname)
    }

    /// Field whose qualified name equals `name` or ends with `.name`.
    pub fn lookup_field(&self, name: &str) -> Option<&FieldSym> {
        self.fields.get(name).or_else(|| {
            let suffix = format!(".{name}");
            self.fields.values().find(|f| f.qname.ends_with(&suffix))
        })
    }

    /// Overloads of the method whose qualified name equals or ends with `name`.
    pub fn lookup_methods(&self, name: &str) -> Vec<MethodId> {
        if let Some(ids) = self.methods.get(name) {
            return ids.clone();
        }
        let suffix = format!(".{name}");
        self.methods
            .iter()
            .filter(|(q, _)| q.ends_with(&suffix))
            .flat_map(|(_, ids)| ids.iter().copied())
            .collect()
    }

    pub fn classes_named(&self, simple: &str) -> &[String] {
        self.class_by_simple
            .get(simple)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn fields_named(&self, simple: &str) -> &[String] {
        self.field_by_name
            .get(simple)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn methods_named(&self, simple: &str) -> &[MethodId] {
        self.method_by_name
            .get(simple)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Corpus-resolved direct supertypes.
    pub fn supertypes(&self, class: &str) -> &[String] {
        self.supers.get(class).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Class plus all transitive corpus supertypes, nearest first.
    pub fn ancestry(&self, class: &str) -> Vec<String> {
        let mut out = vec![class.to_string()];
        let mut seen: BTreeSet<String> = out.iter().cloned().collect();
        let mut i = 0;
        while i < out.len() {
            for s in self.supertypes(&out[i].clone()) {
                if seen.insert(s.clone()) {
                    out.push(s.clone());
                }
            }
            i += 1;
        }
        out
    }

    /// All transitive corpus subtypes in name order.
    pub fn subtypes(&self, class: &str) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.to_string()];
        while let Some(c) = stack.pop() {
            if let Some(ss) = self.subs.get(&c) {
                for s in ss {
                    if seen.insert(s.clone()) {
                        stack.push(s.clone());
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Field `name` declared in `class` or one of its corpus supertypes.
    pub fn field_in_hierarchy(&self, class: &str, name: &str) -> Option<&FieldSym> {
        self.ancestry(class)
            .iter()
            .find_map(|c| self.fields.get(&format!("{c}.{name}")))
    }

    /// Statically named targets: overloads in the nearest class of the
    /// hierarchy that declares `name` with a compatible arity.
    pub fn methods_in_hierarchy(&self, class: &str, name: &str, arity: usize) -> Vec<MethodId> {
        for c in self.ancestry(class) {
            let found: Vec<MethodId> = self
                .methods
                .get(&format!("{c}.{name}"))
                .map(|ids| {
                    ids.iter()
                        .copied()
                        .filter(|id| self.method(*id).accepts_arity(arity))
                        .collect()
                })
                .unwrap_or_default();
            if !found.is_empty() {
                return found;
            }
        }
        Vec::new()
    }

    /// Overrides of `name`/`arity` declared in subtypes of `class`.
    pub fn overrides_below(&self, class: &str, name: &str, arity: usize) -> Vec<MethodId> {
        self.subtypes(class)
            .iter()
            .filter_map(|c| self.methods.get(&format!("{c}.{name}")))
            .flat_map(|ids| ids.iter().copied())
            .filter(|id| self.method(*id).accepts_arity(arity))
            .collect()
    }

    /// Resolve a type name as written at `from` to a corpus class.
    ///
    /// Order: nested classes of the enclosing classes, exact qualified name,
    /// same package, single-type imports, wildcard imports, unique simple name.
    pub fn resolve_type(&self, corpus: &SourceCorpus, from: NodeRef, written: &str) -> Option<String> {
        let written = written.trim_end_matches("[]");
        if written.is_empty() || written.contains('[') {
            return None;
        }
        let (head, rest) = match written.split_once('.') {
            Some((h, r)) => (h, Some(r)),
            None => (written, None),
        };
        if rest.is_some() && self.classes.contains_key(written) {
            return Some(written.to_string());
        }
        let base = self.resolve_simple(corpus, from, head)?;
        match rest {
            None => Some(base),
            Some(r) => {
                let q = format!("{base}.{r}");
                self.classes.contains_key(&q).then_some(q)
            }
        }
        .or_else(|| {
            // `a.b.C` written against a package this corpus also declares
            self.classes.contains_key(written).then(|| written.to_string())
        })
    }

    fn resolve_simple(&self, corpus: &SourceCorpus, from: NodeRef, simple: &str) -> Option<String> {
        let candidates = self.classes_named(simple);
        if candidates.is_empty() {
            return None;
        }
        // enclosing classes and their members
        let enclosing = std::iter::once(from)
            .chain(corpus.ancestors(from))
            .filter_map(|n| self.class_of_node(n));
        for outer in enclosing {
            for c in self.ancestry(outer) {
                if c.rsplit('.').next() == Some(simple) && self.classes.contains_key(&c) {
                    return Some(c);
                }
                let nested = format!("{c}.{simple}");
                if self.classes.contains_key(&nested) {
                    return Some(nested);
                }
            }
        }
        let ast = corpus.ast(from.file)?;
        let pkg = ast.package.as_deref();
        let top_level: Vec<&String> = candidates
            .iter()
            .filter(|q| self.classes.get(*q).is_some_and(|c| self.is_top_level(c)))
            .collect();
        if let Some(q) = top_level
            .iter()
            .find(|q| self.classes[**q].package.as_deref() == pkg)
        {
            return Some((*q).clone());
        }
        for imp in &ast.imports {
            if imp.rsplit('.').next() == Some(simple) {
                if let Some(q) = candidates.iter().find(|q| *q == imp) {
                    return Some(q.clone());
                }
            }
        }
        for imp in &ast.imports {
            if let Some(prefix) = imp.strip_suffix(".*") {
                let q = format!("{prefix}.{simple}");
                if candidates.contains(&q) {
                    return Some(q);
                }
            }
        }
        if candidates.len() == 1 {
            return Some(candidates[0].clone());
        }
        None
    }

    fn is_top_level(&self, c: &ClassSym) -> bool {
        let expected = match &c.package {
            Some(p) => format!("{p}.{}", c.name),
            None => c.name.clone(),
        };
        c.qname == expected
    }
}

/// Index every class, field and method of the parsed corpus.
///
/// Duplicate qualified names keep the first declaration in file-id order
/// and record a warning.
pub fn build_symbols(corpus: &SourceCorpus) -> SymbolTable {
    let mut table = SymbolTable::default();
    for (file, ast) in corpus.asts() {
        let root = NodeRef { file, idx: ast.root };
        let prefix = ast.package.clone();
        for child in corpus.children(root).collect::<Vec<_>>() {
            if corpus.node(child).kind == NodeKind::ClassDecl {
                index_class(corpus, &mut table, child, prefix.as_deref(), &prefix);
            }
        }
    }
    link_hierarchy(corpus, &mut table);
    compute_getters(corpus, &mut table);
    table
}

fn warn(corpus: &SourceCorpus, table: &mut SymbolTable, node: NodeRef, message: String) {
    let loc = corpus.node(node).location;
    table.warnings.push(Diagnostic::new(
        corpus.display_path(node.file),
        loc.line,
        loc.column,
        &message,
    ));
}

fn index_class(
    corpus: &SourceCorpus,
    table: &mut SymbolTable,
    node: NodeRef,
    outer: Option<&str>,
    package: &Option<String>,
) {
    let n = corpus.node(node);
    let name = n.name().to_string();
    let qname = match outer {
        Some(o) => format!("{o}.{name}"),
        None => name.clone(),
    };
    if table.classes.contains_key(&qname) {
        warn(corpus, table, node, format!("duplicate class `{qname}` ignored"));
        return;
    }
    table.classes.insert(
        qname.clone(),
        ClassSym {
            qname: qname.clone(),
            name: name.clone(),
            package: package.clone(),
            node,
            supertypes: n.supertypes.clone(),
            is_interface: n.has(flags::INTERFACE),
            is_enum: n.has(flags::ENUM),
            is_abstract: n.has(flags::ABSTRACT) || n.has(flags::INTERFACE),
        },
    );
    table
        .class_by_simple
        .entry(name.clone())
        .or_default()
        .push(qname.clone());
    table.node_class.insert(node, qname.clone());
    let mut enum_members = Vec::new();
    for member in corpus.children(node).collect::<Vec<_>>() {
        index_member(corpus, table, member, &qname, package, &mut enum_members);
    }
    if n.has(flags::ENUM) {
        table.enums.insert(qname, enum_members);
    }
}

fn index_member(
    corpus: &SourceCorpus,
    table: &mut SymbolTable,
    member: NodeRef,
    class: &str,
    package: &Option<String>,
    enum_members: &mut Vec<String>,
) {
    let m = corpus.node(member);
    match m.kind {
        NodeKind::FieldDecl => {
            let qname = format!("{class}.{}", m.name());
            if m.has(flags::ENUM_CONSTANT) {
                enum_members.push(m.name().to_string());
            }
            if table.fields.contains_key(&qname) {
                warn(corpus, table, member, format!("duplicate field `{qname}` ignored"));
            } else {
                table.fields.insert(
                    qname.clone(),
                    FieldSym {
                        qname: qname.clone(),
                        class: class.to_string(),
                        name: m.name().to_string(),
                        node: member,
                        type_name: m.type_name.clone(),
                        is_static: m.has(flags::STATIC),
                        enum_constant: m.has(flags::ENUM_CONSTANT),
                    },
                );
                table
                    .field_by_name
                    .entry(m.name().to_string())
                    .or_default()
                    .push(qname.clone());
                table.node_field.insert(member, qname);
            }
            index_nested(corpus, table, member, class, package, enum_members);
        }
        NodeKind::MethodDecl => {
            let is_ctor = m.has(flags::CONSTRUCTOR);
            let name = if is_ctor { "<init>".to_string() } else { m.name().to_string() };
            let qname = format!("{class}.{name}");
            let params: Vec<ParamSym> = corpus
                .children(member)
                .filter(|c| corpus.node(*c).kind == NodeKind::Parameter)
                .map(|c| {
                    let p = corpus.node(c);
                    ParamSym {
                        name: p.name().to_string(),
                        type_name: p.type_name.clone(),
                        node: c,
                    }
                })
                .collect();
            let varargs = params
                .last()
                .is_some_and(|p| corpus.node(p.node).has(flags::VARARGS));
            let signature: Vec<Option<String>> = params.iter().map(|p| p.type_name.clone()).collect();
            let duplicate = table.methods.get(&qname).is_some_and(|ids| {
                ids.iter().any(|id| {
                    let other = &table.method_list[id.0 as usize];
                    other.params.iter().map(|p| p.type_name.clone()).collect::<Vec<_>>() == signature
                })
            });
            if duplicate {
                warn(corpus, table, member, format!("duplicate method `{qname}` ignored"));
            } else {
                let id = MethodId(table.method_list.len() as u32);
                table.method_list.push(MethodSym {
                    id,
                    qname: qname.clone(),
                    class: class.to_string(),
                    name: name.clone(),
                    node: member,
                    params,
                    return_type: m.type_name.clone(),
                    has_body: m.has(flags::HAS_BODY),
                    explicit_abstract: m.has(flags::ABSTRACT),
                    is_constructor: is_ctor,
                    is_static: m.has(flags::STATIC),
                    varargs,
                });
                table.methods.entry(qname).or_default().push(id);
                table.method_by_name.entry(name).or_default().push(id);
                table.node_method.insert(member, id);
            }
            index_nested(corpus, table, member, class, package, enum_members);
        }
        NodeKind::ClassDecl => index_class(corpus, table, member, Some(class), package),
        _ => index_nested(corpus, table, member, class, package, enum_members),
    }
}

/// Anonymous and local classes nested anywhere below a member.
fn index_nested(
    corpus: &SourceCorpus,
    table: &mut SymbolTable,
    member: NodeRef,
    class: &str,
    package: &Option<String>,
    _enum_members: &mut Vec<String>,
) {
    let mut stack: Vec<NodeRef> = corpus.children(member).collect();
    stack.reverse();
    while let Some(n) = stack.pop() {
        if corpus.node(n).kind == NodeKind::ClassDecl {
            index_class(corpus, table, n, Some(class), package);
            continue;
        }
        let mut kids: Vec<NodeRef> = corpus.children(n).collect();
        kids.reverse();
        stack.extend(kids);
    }
}

fn link_hierarchy(corpus: &SourceCorpus, table: &mut SymbolTable) {
    let mut supers: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (q, c) in &table.classes {
        let mut resolved = Vec::new();
        for s in &c.supertypes {
            if let Some(r) = table.resolve_type(corpus, c.node, s) {
                if &r != q && !resolved.contains(&r) {
                    resolved.push(r);
                }
            }
        }
        supers.insert(q.clone(), resolved);
    }
    let mut subs: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (c, ss) in &supers {
        for s in ss {
            subs.entry(s.clone()).or_default().push(c.clone());
        }
    }
    table.supers = supers;
    table.subs = subs;
}

/// A getter has no parameters and a body that is exactly one return of a
/// field of its own class (bare name or `this.name`).
fn compute_getters(corpus: &SourceCorpus, table: &mut SymbolTable) {
    let mut getters = BTreeMap::new();
    for m in &table.method_list {
        if m.is_constructor || !m.params.is_empty() || !m.has_body {
            continue;
        }
        let body: Vec<NodeRef> = corpus
            .children(m.node)
            .filter(|c| corpus.node(*c).role == Role::Body)
            .collect();
        let [ret] = body.as_slice() else { continue };
        if corpus.node(*ret).kind != NodeKind::ReturnStmt {
            continue;
        }
        let Some(value) = corpus.children(*ret).next() else { continue };
        let v = corpus.node(value);
        let field_name = match v.kind {
            NodeKind::NameRef => Some(v.name()),
            NodeKind::FieldAccess => {
                let recv = corpus.children(value).next().map(|r| corpus.node(r));
                match recv {
                    Some(r) if r.kind == NodeKind::NameRef && r.name() == "this" => Some(v.name()),
                    _ => None,
                }
            }
            _ => None,
        };
        let Some(field_name) = field_name else { continue };
        if let Some(f) = table.field_in_hierarchy(&m.class, field_name) {
            getters.insert(m.qname.clone(), f.qname.clone());
        }
    }
    table.getters = getters;
}
