//! Syntactic name, type and call resolution over a parsed corpus.

use super::symbols::{MethodId, SymbolTable};
use super::{flags, LiteralKind, NodeKind, NodeRef, Role, SourceCorpus};

/// What a name or field access refers to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target {
    /// Local variable declaration, catch parameter, or foreach loop node.
    Local(NodeRef),
    Param(NodeRef),
    Field(String),
    /// A corpus class used as a qualifier (`Buffer.FILE_CHANGED`).
    Class(String),
    Unresolved,
}

/// Static type of an expression as far as syntax allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeInfo {
    Corpus(String),
    /// A type declared outside the corpus (library or primitive).
    External(String),
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Resolution {
    Static,
    HierarchyApproximate,
}

impl Resolution {
    pub fn as_str(self) -> &'static str {
        match self {
            Resolution::Static => "static",
            Resolution::HierarchyApproximate => "hierarchy-approximate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CallOutcome {
    /// Resolved inside the corpus; may be empty for implicit constructors.
    Corpus(Vec<(MethodId, Resolution)>),
    /// Callee declared outside the corpus.
    Library,
    Unresolved,
}

const PRIMITIVES: [&str; 9] = [
    "int", "long", "short", "byte", "char", "float", "double", "boolean", "void",
];

pub struct Resolver<'a> {
    pub corpus: &'a SourceCorpus,
    pub symbols: &'a SymbolTable,
}

impl<'a> Resolver<'a> {
    pub fn new(corpus: &'a SourceCorpus, symbols: &'a SymbolTable) -> Self {
        Resolver { corpus, symbols }
    }

    /// Qualified name of the innermost class enclosing `r`.
    pub fn enclosing_class(&self, r: NodeRef) -> Option<String> {
        std::iter::once(r)
            .chain(self.corpus.ancestors(r))
            .find_map(|n| self.symbols.class_of_node(n))
            .map(str::to_string)
    }

    /// Resolve a written type name in the context of `from`.
    pub fn type_from_name(&self, from: NodeRef, written: Option<&str>) -> TypeInfo {
        let Some(w) = written else { return TypeInfo::Unknown };
        if w.is_empty() || w == "var" {
            return TypeInfo::Unknown;
        }
        if PRIMITIVES.contains(&w) || w.ends_with("[]") {
            return TypeInfo::External(w.to_string());
        }
        match self.symbols.resolve_type(self.corpus, from, w) {
            Some(q) => TypeInfo::Corpus(q),
            None => TypeInfo::External(w.to_string()),
        }
    }

    /// Resolve a bare name reference by walking outward through scopes.
    pub fn resolve_name(&self, r: NodeRef) -> Target {
        let node = self.corpus.node(r);
        let name = node.name();
        if name == "this" || name == "super" {
            return self
                .enclosing_class(r)
                .map(Target::Class)
                .unwrap_or(Target::Unresolved);
        }
        if name.contains('.') {
            return match self.symbols.resolve_type(self.corpus, r, name) {
                Some(q) => Target::Class(q),
                None => Target::Unresolved,
            };
        }
        let mut child = r;
        for anc in self.corpus.ancestors(r) {
            let a = self.corpus.node(anc);
            let mut found = None;
            for &c in &a.children {
                if c == child.idx {
                    break;
                }
                let cn = self.corpus.ast(r.file).map(|ast| ast.node(c));
                if let Some(cn) = cn {
                    if cn.kind == NodeKind::LocalVarDecl && cn.name() == name {
                        found = Some(NodeRef { file: r.file, idx: c });
                    }
                }
            }
            if let Some(f) = found {
                return Target::Local(f);
            }
            match a.kind {
                NodeKind::LoopStmt
                    if a.detail() == "foreach"
                        && a.name() == name
                        && self.corpus.node(child).role != Role::Iterable =>
                {
                    return Target::Local(anc);
                }
                NodeKind::MethodDecl => {
                    if let Some(p) = self.corpus.children(anc).find(|c| {
                        let cn = self.corpus.node(*c);
                        cn.kind == NodeKind::Parameter && cn.name() == name
                    }) {
                        return Target::Param(p);
                    }
                }
                NodeKind::ClassDecl => {
                    if let Some(class) = self.symbols.class_of_node(anc) {
                        if let Some(f) = self.symbols.field_in_hierarchy(class, name) {
                            return Target::Field(f.qname.clone());
                        }
                    }
                }
                _ => {}
            }
            child = anc;
        }
        match self.symbols.resolve_type(self.corpus, r, name) {
            Some(q) => Target::Class(q),
            None => Target::Unresolved,
        }
    }

    /// Resolve `recv.name` by the receiver's type, a static qualifier, or a
    /// unique field name across the corpus.
    pub fn resolve_field_access(&self, r: NodeRef) -> Target {
        let node = self.corpus.node(r);
        let name = node.name();
        let recv = self
            .corpus
            .children(r)
            .find(|c| self.corpus.node(*c).role == Role::Receiver);
        let owner = match recv {
            Some(rv) => match self.receiver_type(rv) {
                TypeInfo::Corpus(q) => Some(q),
                TypeInfo::External(_) => return Target::Unresolved,
                TypeInfo::Unknown => None,
            },
            None => None,
        };
        if let Some(q) = owner {
            if let Some(f) = self.symbols.field_in_hierarchy(&q, name) {
                return Target::Field(f.qname.clone());
            }
            let nested = format!("{q}.{name}");
            if self.symbols.classes.contains_key(&nested) {
                return Target::Class(nested);
            }
        }
        match self.symbols.fields_named(name) {
            [only] => Target::Field(only.clone()),
            _ => Target::Unresolved,
        }
    }

    /// Type of an expression used as a receiver; class qualifiers count as
    /// their class.
    pub fn receiver_type(&self, r: NodeRef) -> TypeInfo {
        let n = self.corpus.node(r);
        match n.kind {
            NodeKind::NameRef => match self.resolve_name(r) {
                Target::Class(q) => TypeInfo::Corpus(q),
                _ => self.type_of(r),
            },
            NodeKind::FieldAccess => match self.resolve_field_access(r) {
                Target::Class(q) => TypeInfo::Corpus(q),
                _ => self.type_of(r),
            },
            _ => self.type_of(r),
        }
    }

    pub fn type_of(&self, r: NodeRef) -> TypeInfo {
        let n = self.corpus.node(r);
        match n.kind {
            NodeKind::Literal => match n.literal {
                Some(LiteralKind::Str) => TypeInfo::External("String".into()),
                Some(LiteralKind::Int) => {
                    let long = n.text.ends_with('l') || n.text.ends_with('L');
                    TypeInfo::External(if long { "long" } else { "int" }.into())
                }
                Some(LiteralKind::Float) => {
                    let f = n.text.ends_with('f') || n.text.ends_with('F');
                    TypeInfo::External(if f { "float" } else { "double" }.into())
                }
                Some(LiteralKind::Char) => TypeInfo::External("char".into()),
                Some(LiteralKind::Bool) => TypeInfo::External("boolean".into()),
                _ => TypeInfo::Unknown,
            },
            NodeKind::NameRef => match self.resolve_name(r) {
                Target::Local(d) | Target::Param(d) => {
                    self.type_from_name(d, self.corpus.node(d).type_name.as_deref())
                }
                Target::Field(q) => self.field_type(&q),
                Target::Class(q) if n.name() == "this" || n.name() == "super" => {
                    if n.name() == "super" {
                        match self.symbols.supertypes(&q).first() {
                            Some(s) => TypeInfo::Corpus(s.clone()),
                            None => TypeInfo::Unknown,
                        }
                    } else {
                        TypeInfo::Corpus(q)
                    }
                }
                _ => TypeInfo::Unknown,
            },
            NodeKind::FieldAccess => match self.resolve_field_access(r) {
                Target::Field(q) => self.field_type(&q),
                _ => {
                    if n.name() == "length" {
                        TypeInfo::External("int".into())
                    } else {
                        TypeInfo::Unknown
                    }
                }
            },
            NodeKind::MethodCall => {
                if n.has(flags::CONSTRUCTOR_CALL) && n.type_name.is_some() {
                    return self.type_from_name(r, n.type_name.as_deref());
                }
                match self.resolve_call(r) {
                    CallOutcome::Corpus(ts) => match ts.first() {
                        Some((id, _)) => {
                            let m = self.symbols.method(*id);
                            self.type_from_name(m.node, m.return_type.as_deref())
                        }
                        None => TypeInfo::Unknown,
                    },
                    _ => match n.name() {
                        "equals" | "equalsIgnoreCase" | "startsWith" | "endsWith" | "isEmpty"
                        | "contains" | "hasNext" => TypeInfo::External("boolean".into()),
                        "length" | "size" => TypeInfo::External("int".into()),
                        "toString" | "toLowerCase" | "toUpperCase" | "trim" | "substring"
                        | "getName" => TypeInfo::External("String".into()),
                        _ => TypeInfo::Unknown,
                    },
                }
            }
            NodeKind::CastExpr => self.type_from_name(r, n.type_name.as_deref()),
            NodeKind::ClassLiteralAccess => TypeInfo::External("Class".into()),
            NodeKind::BinaryExpr => match n.op() {
                "==" | "!=" | "<" | "<=" | ">" | ">=" | "&&" | "||" => {
                    TypeInfo::External("boolean".into())
                }
                _ => {
                    let left = self.corpus.children(r).next();
                    let right = self.corpus.children(r).nth(1);
                    let lt = left.map(|l| self.type_of(l)).unwrap_or(TypeInfo::Unknown);
                    let rt = right.map(|l| self.type_of(l)).unwrap_or(TypeInfo::Unknown);
                    let string = TypeInfo::External("String".into());
                    if n.op() == "+" && (lt == string || rt == string) {
                        string
                    } else {
                        lt
                    }
                }
            },
            NodeKind::UnaryExpr => {
                if n.op() == "!" {
                    TypeInfo::External("boolean".into())
                } else {
                    self.corpus
                        .children(r)
                        .next()
                        .map(|c| self.type_of(c))
                        .unwrap_or(TypeInfo::Unknown)
                }
            }
            NodeKind::Assignment => self
                .corpus
                .children(r)
                .next()
                .map(|c| self.type_of(c))
                .unwrap_or(TypeInfo::Unknown),
            NodeKind::Opaque => match n.detail() {
                "array_access" => {
                    let arr = self.corpus.children(r).next();
                    match arr.map(|a| self.type_of(a)) {
                        Some(TypeInfo::External(t)) if t.ends_with("[]") => {
                            let elem = t.trim_end_matches("[]").to_string();
                            self.type_from_name(r, Some(&elem))
                        }
                        _ => TypeInfo::Unknown,
                    }
                }
                "ternary" => self
                    .corpus
                    .children(r)
                    .find(|c| self.corpus.node(*c).role == Role::Then)
                    .map(|c| self.type_of(c))
                    .unwrap_or(TypeInfo::Unknown),
                "instanceof" => TypeInfo::External("boolean".into()),
                _ => TypeInfo::Unknown,
            },
            _ => TypeInfo::Unknown,
        }
    }

    fn field_type(&self, q: &str) -> TypeInfo {
        match self.symbols.fields.get(q) {
            Some(f) => self.type_from_name(f.node, f.type_name.as_deref()),
            None => TypeInfo::Unknown,
        }
    }

    fn arity(&self, call: NodeRef) -> usize {
        self.corpus
            .children(call)
            .filter(|c| self.corpus.node(*c).role == Role::Argument)
            .count()
    }

    fn constructors(&self, class: &str, arity: usize) -> Vec<(MethodId, Resolution)> {
        self.symbols
            .methods
            .get(&format!("{class}.<init>"))
            .map(|ids| {
                ids.iter()
                    .copied()
                    .filter(|id| self.symbols.method(*id).accepts_arity(arity))
                    .map(|id| (id, Resolution::Static))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Virtual dispatch by class-hierarchy approximation: the statically
    /// named method plus every override below the receiver's class.
    fn dispatch(&self, class: &str, name: &str, arity: usize, virtual_call: bool) -> CallOutcome {
        let named = self.symbols.methods_in_hierarchy(class, name, arity);
        let mut out: Vec<(MethodId, Resolution)> =
            named.iter().map(|id| (*id, Resolution::Static)).collect();
        if virtual_call {
            for id in self.symbols.overrides_below(class, name, arity) {
                if !out.iter().any(|(o, _)| *o == id) {
                    out.push((id, Resolution::HierarchyApproximate));
                }
            }
        }
        if out.is_empty() {
            // inherited from a supertype outside the corpus
            let external_super = self.symbols.ancestry(class).iter().any(|c| {
                self.symbols.classes.get(c).is_some_and(|cs| {
                    cs.supertypes.len() > self.symbols.supertypes(c).len()
                })
            });
            if external_super || is_object_method(name) {
                return CallOutcome::Library;
            }
            return CallOutcome::Unresolved;
        }
        CallOutcome::Corpus(out)
    }

    pub fn resolve_call(&self, call: NodeRef) -> CallOutcome {
        let n = self.corpus.node(call);
        let arity = self.arity(call);
        let name = n.name();
        if n.has(flags::CONSTRUCTOR_CALL) {
            if n.type_name.is_none() {
                // this(..) / super(..)
                let Some(cls) = self.enclosing_class(call) else {
                    return CallOutcome::Unresolved;
                };
                let target = if name == "super" {
                    let supers: Vec<String> = self
                        .symbols
                        .supertypes(&cls)
                        .iter()
                        .filter(|s| self.symbols.classes.get(*s).is_some_and(|c| !c.is_interface))
                        .cloned()
                        .collect();
                    match supers.first() {
                        Some(s) => s.clone(),
                        None => return CallOutcome::Library,
                    }
                } else {
                    cls
                };
                return CallOutcome::Corpus(self.constructors(&target, arity));
            }
            return match self.symbols.resolve_type(self.corpus, call, n.type_name.as_deref().unwrap_or("")) {
                Some(q) => CallOutcome::Corpus(self.constructors(&q, arity)),
                None => CallOutcome::Library,
            };
        }
        let recv = self
            .corpus
            .children(call)
            .find(|c| self.corpus.node(*c).role == Role::Receiver);
        match recv {
            None => {
                let classes: Vec<String> = std::iter::once(call)
                    .chain(self.corpus.ancestors(call))
                    .filter_map(|a| self.symbols.class_of_node(a))
                    .map(str::to_string)
                    .collect();
                for c in &classes {
                    if !self.symbols.methods_in_hierarchy(c, name, arity).is_empty() {
                        return self.dispatch(c, name, arity, true);
                    }
                }
                match classes.first() {
                    Some(c) => self.dispatch(c, name, arity, true),
                    None => CallOutcome::Unresolved,
                }
            }
            Some(rv) => {
                let rn = self.corpus.node(rv);
                if rn.kind == NodeKind::NameRef && rn.name() == "super" {
                    let Some(cls) = self.enclosing_class(call) else {
                        return CallOutcome::Unresolved;
                    };
                    return match self.symbols.supertypes(&cls).first() {
                        Some(s) => self.dispatch(&s.clone(), name, arity, false),
                        None => CallOutcome::Library,
                    };
                }
                let static_owner = match rn.kind {
                    NodeKind::NameRef => match self.resolve_name(rv) {
                        Target::Class(q) if rn.name() != "this" => Some(q),
                        Target::Unresolved if starts_upper(rn.name()) => {
                            return CallOutcome::Library;
                        }
                        _ => None,
                    },
                    NodeKind::FieldAccess => match self.resolve_field_access(rv) {
                        Target::Class(q) => Some(q),
                        _ => None,
                    },
                    _ => None,
                };
                if let Some(q) = static_owner {
                    return self.dispatch(&q, name, arity, false);
                }
                match self.type_of(rv) {
                    TypeInfo::Corpus(q) => self.dispatch(&q, name, arity, true),
                    TypeInfo::External(_) => CallOutcome::Library,
                    TypeInfo::Unknown => {
                        let candidates: Vec<MethodId> = self
                            .symbols
                            .methods_named(name)
                            .iter()
                            .copied()
                            .filter(|id| self.symbols.method(*id).accepts_arity(arity))
                            .collect();
                        match candidates.as_slice() {
                            [only] => CallOutcome::Corpus(vec![(*only, Resolution::Static)]),
                            _ => CallOutcome::Unresolved,
                        }
                    }
                }
            }
        }
    }
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

fn is_object_method(name: &str) -> bool {
    matches!(
        name,
        "equals" | "hashCode" | "toString" | "getClass" | "clone" | "notify" | "notifyAll" | "wait"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{build_symbols, statements_of};

    fn find(corpus: &SourceCorpus, kind: NodeKind, text: &str) -> NodeRef {
        statements_of(corpus, Some(&[kind]))
            .into_iter()
            .find(|r| corpus.node(*r).text == text)
            .unwrap_or_else(|| panic!("no {kind} `{text}`"))
    }

    #[test]
    fn locals_shadow_fields() {
        let corpus = SourceCorpus::from_sources([(
            "A.java",
            "class A { int x; int f() { int x = 1; return x; } int g() { return x; } }",
        )]);
        let symbols = build_symbols(&corpus);
        let res = Resolver::new(&corpus, &symbols);
        let refs: Vec<NodeRef> = statements_of(&corpus, Some(&[NodeKind::NameRef]));
        assert!(matches!(res.resolve_name(refs[0]), Target::Local(_)));
        assert_eq!(res.resolve_name(refs[1]), Target::Field("A.x".into()));
    }

    #[test]
    fn field_access_by_declared_type() {
        let corpus = SourceCorpus::from_sources([
            ("S.java", "class S { int max; }"),
            ("T.java", "class T { int max; boolean f(S s) { return s.max > 0; } }"),
        ]);
        let symbols = build_symbols(&corpus);
        let res = Resolver::new(&corpus, &symbols);
        let fa = find(&corpus, NodeKind::FieldAccess, "s.max");
        assert_eq!(res.resolve_field_access(fa), Target::Field("S.max".into()));
    }

    #[test]
    fn interface_call_reaches_all_implementors() {
        let corpus = SourceCorpus::from_sources([(
            "A.java",
            "interface Shape { int area(); }
             class Sq implements Shape { public int area() { return 1; } }
             class Ci implements Shape { public int area() { return 2; } }
             class U { int f(Shape s) { return s.area(); } }",
        )]);
        let symbols = build_symbols(&corpus);
        let res = Resolver::new(&corpus, &symbols);
        let call = find(&corpus, NodeKind::MethodCall, "s.area()");
        let CallOutcome::Corpus(ts) = res.resolve_call(call) else { panic!() };
        let approx = ts
            .iter()
            .filter(|(_, r)| *r == Resolution::HierarchyApproximate)
            .count();
        assert_eq!(approx, 2);
    }

    #[test]
    fn library_receivers() {
        let corpus = SourceCorpus::from_sources([(
            "A.java",
            "import java.util.Iterator; class A { Object f(Iterator<Object> it) { return it.next(); } int g() { return Math.max(1, 2); } }",
        )]);
        let symbols = build_symbols(&corpus);
        let res = Resolver::new(&corpus, &symbols);
        let next = find(&corpus, NodeKind::MethodCall, "it.next()");
        assert_eq!(res.resolve_call(next), CallOutcome::Library);
        let max = find(&corpus, NodeKind::MethodCall, "Math.max(1, 2)");
        assert_eq!(res.resolve_call(max), CallOutcome::Library);
    }
}
