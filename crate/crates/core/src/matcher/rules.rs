//! Raw structural rules, one per pattern. Precedence and subsumption are
//! applied by the caller.

use crate::catalog::{Cip, PartRole, RELATIONAL_OPS};
use crate::frontend::{
    flags, CallOutcome, LiteralKind, Location, NodeKind, NodeRef, Resolution, Resolver, Role,
    SourceCorpus, SymbolTable, Target, TypeInfo,
};

use super::BoundPart;

/// Nodes a compound match takes over from finer-grained patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Claim {
    /// Strict descendants of the node.
    Below(NodeRef),
    /// The node and all of its descendants.
    Subtree(NodeRef),
    /// Exactly this node.
    Node(NodeRef),
}

#[derive(Debug, Clone)]
pub(crate) struct Raw {
    pub parts: Vec<BoundPart>,
    pub span: Location,
    pub claims: Vec<Claim>,
}

pub(crate) struct Cx<'a> {
    pub corpus: &'a SourceCorpus,
    pub symbols: &'a SymbolTable,
    pub res: Resolver<'a>,
}

impl<'a> Cx<'a> {
    pub fn new(corpus: &'a SourceCorpus, symbols: &'a SymbolTable) -> Self {
        Cx {
            corpus,
            symbols,
            res: Resolver::new(corpus, symbols),
        }
    }

    fn kind(&self, n: NodeRef) -> NodeKind {
        self.corpus.node(n).kind
    }

    fn text(&self, n: NodeRef) -> &'a str {
        &self.corpus.node(n).text
    }

    fn name(&self, n: NodeRef) -> &'a str {
        self.corpus.node(n).name()
    }

    fn op(&self, n: NodeRef) -> &'a str {
        self.corpus.node(n).op()
    }

    fn role(&self, n: NodeRef) -> Role {
        self.corpus.node(n).role
    }

    fn child(&self, n: NodeRef, role: Role) -> Option<NodeRef> {
        self.corpus.children(n).find(|c| self.role(*c) == role)
    }

    fn children_with(&self, n: NodeRef, role: Role) -> Vec<NodeRef> {
        self.corpus.children(n).filter(|c| self.role(*c) == role).collect()
    }

    fn args(&self, n: NodeRef) -> Vec<NodeRef> {
        self.children_with(n, Role::Argument)
    }

    fn binary_sides(&self, n: NodeRef) -> Option<(NodeRef, NodeRef)> {
        if self.kind(n) != NodeKind::BinaryExpr {
            return None;
        }
        Some((self.child(n, Role::Left)?, self.child(n, Role::Right)?))
    }

    fn prev_sibling(&self, n: NodeRef) -> Option<NodeRef> {
        let p = self.corpus.parent(n)?;
        let kids: Vec<NodeRef> = self.corpus.children(p).collect();
        let i = kids.iter().position(|k| *k == n)?;
        (i > 0).then(|| kids[i - 1])
    }

    fn next_sibling(&self, n: NodeRef) -> Option<NodeRef> {
        let p = self.corpus.parent(n)?;
        let kids: Vec<NodeRef> = self.corpus.children(p).collect();
        let i = kids.iter().position(|k| *k == n)?;
        kids.get(i + 1).copied()
    }

    fn is_null(&self, n: NodeRef) -> bool {
        self.corpus.node(n).literal == Some(LiteralKind::Null)
    }

    /// Non-null literal, optionally signed when numeric.
    fn is_lit(&self, n: NodeRef) -> bool {
        let node = self.corpus.node(n);
        match node.kind {
            NodeKind::Literal => node.literal != Some(LiteralKind::Null),
            NodeKind::UnaryExpr if matches!(node.op(), "-" | "+") && !node.has(flags::POSTFIX) => self
                .corpus
                .children(n)
                .next()
                .is_some_and(|c| {
                    matches!(
                        self.corpus.node(c).literal,
                        Some(LiteralKind::Int) | Some(LiteralKind::Float)
                    )
                }),
            _ => false,
        }
    }

    fn is_zero(&self, n: NodeRef) -> bool {
        let node = self.corpus.node(n);
        node.literal == Some(LiteralKind::Int) && matches!(node.text.as_str(), "0" | "0L" | "0l")
    }

    /// Literal or a constant-style name (`ALL_CAPS` or static final field).
    fn is_constant_like(&self, n: NodeRef) -> bool {
        if self.is_lit(n) {
            return true;
        }
        let node = self.corpus.node(n);
        match node.kind {
            NodeKind::NameRef | NodeKind::FieldAccess => {
                let last = node.name().rsplit('.').next().unwrap_or("");
                if is_constant_name(last) {
                    return true;
                }
                let target = if node.kind == NodeKind::NameRef {
                    self.res.resolve_name(n)
                } else {
                    self.res.resolve_field_access(n)
                };
                match target {
                    Target::Field(q) => self.symbols.fields.get(&q).is_some_and(|f| {
                        let fl = self.corpus.node(f.node);
                        fl.has(flags::STATIC) && fl.has(flags::FINAL)
                    }),
                    _ => false,
                }
            }
            _ => false,
        }
    }

    /// `a.equals(b)` / `a.equalsIgnoreCase(b)` receiver and argument.
    fn equality_call(&self, n: NodeRef) -> Option<(NodeRef, NodeRef)> {
        let node = self.corpus.node(n);
        if node.kind != NodeKind::MethodCall || !matches!(node.name(), "equals" | "equalsIgnoreCase") {
            return None;
        }
        let recv = self.child(n, Role::Receiver)?;
        match self.args(n).as_slice() {
            [a] => Some((recv, *a)),
            _ => None,
        }
    }

    /// Sides of an equality test: `a == b` or an equals call.
    fn equality_sides(&self, n: NodeRef) -> Option<(NodeRef, NodeRef)> {
        if self.kind(n) == NodeKind::BinaryExpr && self.op(n) == "==" {
            return self.binary_sides(n);
        }
        self.equality_call(n)
    }

    /// Root of a receiver chain: `name` in `name.toLowerCase().endsWith(..)`.
    fn chain_root(&self, mut n: NodeRef) -> NodeRef {
        loop {
            let k = self.kind(n);
            if !matches!(k, NodeKind::MethodCall | NodeKind::FieldAccess) {
                return n;
            }
            match self.child(n, Role::Receiver) {
                Some(r) => n = r,
                None => return n,
            }
        }
    }

    fn norm(&self, n: NodeRef) -> String {
        self.text(n).chars().filter(|c| !c.is_whitespace()).collect()
    }

    fn part(&self, role: PartRole, text: impl Into<String>, node: Option<NodeRef>) -> BoundPart {
        BoundPart {
            role,
            text: text.into(),
            node,
        }
    }

    fn var(&self, n: NodeRef) -> BoundPart {
        self.part(PartRole::Variable, self.text(n), Some(n))
    }

    fn loc(&self, n: NodeRef) -> Location {
        self.corpus.node(n).location
    }

    fn span(&self, a: NodeRef, b: NodeRef) -> Location {
        let (la, lb) = (self.loc(a), self.loc(b));
        let (first, last) = if la.start_byte <= lb.start_byte { (la, lb) } else { (lb, la) };
        let end = if la.end_byte >= lb.end_byte { la } else { lb };
        let _ = last;
        Location {
            file: first.file,
            line: first.line,
            column: first.column,
            end_line: end.end_line,
            end_column: end.end_column,
            start_byte: first.start_byte,
            end_byte: end.end_byte,
        }
    }

    fn raw(&self, n: NodeRef, parts: Vec<BoundPart>) -> Option<Raw> {
        Some(Raw {
            parts,
            span: self.loc(n),
            claims: Vec::new(),
        })
    }

    fn local_init(&self, name_ref: NodeRef) -> Option<(NodeRef, NodeRef)> {
        if self.kind(name_ref) != NodeKind::NameRef {
            return None;
        }
        match self.res.resolve_name(name_ref) {
            Target::Local(d) if self.kind(d) == NodeKind::LocalVarDecl => {
                Some((d, self.child(d, Role::Value)?))
            }
            _ => None,
        }
    }

    fn decl_init(&self, n: NodeRef) -> Option<NodeRef> {
        let target = match self.kind(n) {
            NodeKind::NameRef => self.res.resolve_name(n),
            NodeKind::FieldAccess => self.res.resolve_field_access(n),
            _ => return None,
        };
        let decl = match target {
            Target::Local(d) => d,
            Target::Field(q) => self.symbols.fields.get(&q)?.node,
            _ => return None,
        };
        self.child(decl, Role::Value)
    }
}

fn is_constant_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_uppercase())
        && s.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
        && s.chars().any(|c| c.is_ascii_uppercase())
        && (s.len() > 1 || s.contains('_'))
}

fn is_comparison(op: &str) -> bool {
    matches!(op, "==" | "!=" | "<" | "<=" | ">" | ">=")
}

/// Canonical relational symbol of an operator lexeme.
pub fn canonical_op(lexeme: &str) -> Option<&'static str> {
    Some(match lexeme {
        ">" => RELATIONAL_OPS[0],
        ">=" | "≥" => RELATIONAL_OPS[1],
        "<" => RELATIONAL_OPS[2],
        "<=" | "≤" => RELATIONAL_OPS[3],
        "==" | "=" | "equals" | "equalsIgnoreCase" => RELATIONAL_OPS[4],
        "!=" | "≠" => RELATIONAL_OPS[5],
        _ => return None,
    })
}

/// The operator seen from the other side (`a > b` is `b < a`).
pub fn mirror_op(canonical: &str) -> &'static str {
    match canonical {
        ">" => "<",
        "<" => ">",
        "≥" => "≤",
        "≤" => "≥",
        "=" => "=",
        _ => "≠",
    }
}

const STRING_PREDICATES: [&str; 4] = ["equals", "equalsIgnoreCase", "startsWith", "endsWith"];
const BOXED: [&str; 9] = [
    "Integer", "Long", "Double", "Float", "Short", "Byte", "Boolean", "Character", "String",
];

pub(crate) fn raw_match(cx: &Cx<'_>, n: NodeRef, cip: Cip) -> Option<Raw> {
    let kind = cx.kind(n);
    match cip {
        Cip::BooleanProperty => boolean_property(cx, n),
        Cip::BinaryComparison => binary_comparison(cx, n),
        Cip::ConstantArgument if kind == NodeKind::MethodCall => constant_argument(cx, n),
        Cip::NullCheck => null_check(cx, n).and_then(|v| cx.raw(n, vec![cx.var(v)])),
        Cip::AssignConstant => assign_constant(cx, n),
        Cip::BinaryFlagCheck => binary_flag_check(cx, n),
        Cip::IfChain if kind == NodeKind::IfStmt => if_chain(cx, n),
        Cip::EqualsOrChain => equals_or_chain(cx, n),
        Cip::PolymorphicMethod if kind == NodeKind::MethodCall => polymorphic_method(cx, n),
        Cip::NullEmptyCheck => null_compound(cx, n, Cip::NullEmptyCheck),
        Cip::NullZeroCheck => null_compound(cx, n, Cip::NullZeroCheck),
        Cip::NullBooleanCheck => null_compound(cx, n, Cip::NullBooleanCheck),
        Cip::ReturnConstant if kind == NodeKind::ReturnStmt => {
            let v = cx.child(n, Role::Value)?;
            cx.is_lit(v)
                .then(|| cx.raw(n, vec![cx.part(PartRole::Constant, cx.text(v), Some(v))]))
                .flatten()
        }
        Cip::SwitchLenChar if kind == NodeKind::SwitchStmt => switch_len_char(cx, n),
        Cip::SelfComparison => self_comparison(cx, n),
        Cip::StrStarts => str_call(cx, n, "startsWith"),
        Cip::StrEnds => str_call(cx, n, "endsWith"),
        Cip::Setter if kind == NodeKind::MethodCall => setter(cx, n),
        Cip::ConstructorAssign if kind == NodeKind::Assignment => constructor_assign(cx, n),
        Cip::DeltaCheck => delta_check(cx, n),
        Cip::EnumValueOf if kind == NodeKind::MethodCall => enum_value_of(cx, n),
        Cip::IterateAndCheckLiteral if kind == NodeKind::LoopStmt => iterate_and_check(cx, n),
        Cip::ModOp if kind == NodeKind::BinaryExpr && cx.op(n) == "%" => {
            let (l, r) = cx.binary_sides(n)?;
            (!cx.is_lit(l) && cx.is_constant_like(r))
                .then(|| cx.raw(n, vec![cx.var(l)]))
                .flatten()
        }
        Cip::SwitchCase if kind == NodeKind::SwitchStmt => switch_case(cx, n),
        Cip::OverrideValueSet if kind == NodeKind::MethodDecl => {
            let node = cx.corpus.node(n);
            let returns_value = node.type_name.as_deref().is_some_and(|t| t != "void");
            (node.has(flags::ABSTRACT) && !node.has(flags::HAS_BODY) && returns_value)
                .then(|| cx.raw(n, vec![cx.part(PartRole::Method, node.name(), Some(n))]))
                .flatten()
        }
        Cip::CastSelfComparison => cast_self_comparison(cx, n),
        Cip::IndexLoopFind if kind == NodeKind::LoopStmt => index_loop_find(cx, n),
        Cip::AssignClassCall => assign_class_call(cx, n),
        Cip::IfReturnChain if kind == NodeKind::IfStmt => if_return_chain(cx, n),
        _ => None,
    }
}

fn in_boolean_context(cx: &Cx<'_>, n: NodeRef) -> bool {
    let Some(p) = cx.corpus.parent(n) else { return false };
    let pn = cx.corpus.node(p);
    match pn.kind {
        NodeKind::UnaryExpr => pn.op() == "!",
        NodeKind::BinaryExpr => matches!(pn.op(), "&&" | "||"),
        NodeKind::IfStmt | NodeKind::LoopStmt => cx.role(n) == Role::Condition,
        NodeKind::Opaque => pn.detail() == "ternary" && cx.role(n) == Role::Condition,
        _ => false,
    }
}

fn boolean_property(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let node = cx.corpus.node(n);
    let part_text = match node.kind {
        NodeKind::NameRef if !matches!(node.name(), "this" | "super") => node.name().to_string(),
        NodeKind::FieldAccess => node.name().to_string(),
        NodeKind::MethodCall
            if !node.has(flags::CONSTRUCTOR_CALL) && !STRING_PREDICATES.contains(&node.name()) =>
        {
            node.name().to_string()
        }
        NodeKind::Opaque if node.detail() == "array_access" => node.text.clone(),
        _ => return None,
    };
    if !in_boolean_context(cx, n) {
        return None;
    }
    match cx.res.type_of(n) {
        TypeInfo::External(t) if t == "boolean" || t == "Boolean" => {}
        TypeInfo::Unknown => {}
        _ => return None,
    }
    cx.raw(n, vec![cx.part(PartRole::Variable, part_text, Some(n))])
}

fn binary_comparison(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let (l, op, r) = if let Some((recv, arg)) = cx.equality_call(n) {
        (recv, cx.name(n), arg)
    } else {
        let (l, r) = cx.binary_sides(n)?;
        let op = cx.op(n);
        if !is_comparison(op) {
            return None;
        }
        (l, op, r)
    };
    if cx.is_null(l) || cx.is_null(r) || (cx.is_lit(l) && cx.is_lit(r)) {
        return None;
    }
    let op_part = cx.part(RELATIONAL_OPS_PART, op, None);
    cx.raw(n, vec![cx.var(l), op_part, cx.var(r)])
}

const RELATIONAL_OPS_PART: PartRole = PartRole::OperatorInSet(&RELATIONAL_OPS);

fn constant_argument(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let name = cx.name(n);
    if STRING_PREDICATES.contains(&name) {
        return None;
    }
    let lit = cx.args(n).into_iter().find(|a| cx.is_lit(*a))?;
    cx.raw(
        n,
        vec![
            cx.part(PartRole::Method, name, Some(n)),
            cx.part(PartRole::Constant, cx.text(lit), Some(lit)),
        ],
    )
}

/// Operand compared against null, if `n` is `x == null` or `x != null`.
fn null_check(cx: &Cx<'_>, n: NodeRef) -> Option<NodeRef> {
    if !matches!(cx.op(n), "==" | "!=") {
        return None;
    }
    let (l, r) = cx.binary_sides(n)?;
    let other = match (cx.is_null(l), cx.is_null(r)) {
        (true, false) => r,
        (false, true) => l,
        _ => return None,
    };
    (!cx.is_lit(other)).then_some(other)
}

fn assign_constant(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let node = cx.corpus.node(n);
    let (target, value) = match node.kind {
        NodeKind::Assignment if node.op() == "=" => {
            let t = cx.child(n, Role::Target)?;
            (cx.part(PartRole::Variable, cx.text(t), Some(t)), cx.child(n, Role::Value)?)
        }
        NodeKind::FieldDecl => (
            cx.part(PartRole::Variable, node.name(), Some(n)),
            cx.child(n, Role::Value)?,
        ),
        NodeKind::LocalVarDecl if node.role != Role::Init => (
            cx.part(PartRole::Variable, node.name(), Some(n)),
            cx.child(n, Role::Value)?,
        ),
        _ => return None,
    };
    if !cx.is_lit(value) {
        return None;
    }
    cx.raw(n, vec![target, cx.part(PartRole::Constant, cx.text(value), Some(value))])
}

fn binary_flag_check(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let (l, r) = cx.binary_sides(n)?;
    let op = cx.op(n);
    let masked = |m: NodeRef| -> Option<(NodeRef, NodeRef)> {
        if cx.kind(m) != NodeKind::BinaryExpr || !matches!(cx.op(m), "&" | "|") {
            return None;
        }
        let (a, b) = cx.binary_sides(m)?;
        match (cx.is_constant_like(a), cx.is_constant_like(b)) {
            (false, true) => Some((a, b)),
            (true, false) => Some((b, a)),
            _ => None,
        }
    };
    let (var, mask) = if matches!(op, "==" | "!=") {
        // (flag & MASK) == MASK
        if let (Some(vm), true) = (masked(l), cx.is_constant_like(r)) {
            vm
        } else if let (Some(vm), true) = (masked(r), cx.is_constant_like(l)) {
            vm
        } else {
            return None;
        }
    } else if matches!(op, "&" | "|") {
        // flag & MASK == MASK parses as flag & (MASK == MASK)
        if cx.kind(r) != NodeKind::BinaryExpr || cx.op(r) != "==" || cx.is_constant_like(l) {
            return None;
        }
        let (a, b) = cx.binary_sides(r)?;
        if cx.norm(a) != cx.norm(b) || !cx.is_constant_like(a) {
            return None;
        }
        (l, a)
    } else {
        return None;
    };
    Some(Raw {
        parts: vec![cx.var(var), cx.part(PartRole::Constant, cx.text(mask), Some(mask))],
        span: cx.loc(n),
        claims: vec![Claim::Below(n)],
    })
}

/// Variables an equality-style condition tests: the non-literal sides of
/// `==` / equals, or the common variable of an or-chain of such tests.
fn tested_variables(cx: &Cx<'_>, cond: NodeRef) -> Vec<(String, NodeRef)> {
    if let Some((a, b)) = cx.equality_sides(cond) {
        if cx.is_null(a) || cx.is_null(b) {
            return Vec::new();
        }
        return [a, b]
            .into_iter()
            .filter(|s| !cx.is_lit(*s))
            .map(|s| (cx.norm(s), s))
            .collect();
    }
    if cx.kind(cond) == NodeKind::BinaryExpr && cx.op(cond) == "||" {
        let ops = or_operands(cx, cond);
        let mut common: Option<Vec<(String, NodeRef)>> = None;
        for o in ops {
            let vs = tested_variables(cx, o);
            if vs.is_empty() {
                return Vec::new();
            }
            common = Some(match common {
                None => vs,
                Some(c) => c.into_iter().filter(|(t, _)| vs.iter().any(|(u, _)| u == t)).collect(),
            });
        }
        return common.unwrap_or_default();
    }
    Vec::new()
}

fn or_operands(cx: &Cx<'_>, n: NodeRef) -> Vec<NodeRef> {
    if cx.kind(n) == NodeKind::BinaryExpr && cx.op(n) == "||" {
        if let Some((l, r)) = cx.binary_sides(n) {
            let mut out = or_operands(cx, l);
            out.extend(or_operands(cx, r));
            return out;
        }
    }
    vec![n]
}

fn common_variable(
    cx: &Cx<'_>,
    conds: &[NodeRef],
) -> Option<(String, NodeRef)> {
    let mut common = tested_variables(cx, *conds.first()?);
    for c in &conds[1..] {
        let vs = tested_variables(cx, *c);
        common.retain(|(t, _)| vs.iter().any(|(u, _)| u == t));
    }
    common.into_iter().next()
}

fn if_chain(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let is_else_branch = cx.role(n) == Role::Else
        && cx.corpus.parent(n).is_some_and(|p| cx.kind(p) == NodeKind::IfStmt);
    if is_else_branch {
        return None;
    }
    let mut clauses = vec![n];
    let mut cur = n;
    while let Some(e) = cx.children_with(cur, Role::Else).into_iter().next() {
        if cx.kind(e) != NodeKind::IfStmt || cx.children_with(cur, Role::Else).len() != 1 {
            break;
        }
        clauses.push(e);
        cur = e;
    }
    if clauses.len() < 2 {
        return None;
    }
    let conds: Vec<NodeRef> = clauses
        .iter()
        .map(|c| cx.child(*c, Role::Condition))
        .collect::<Option<_>>()?;
    let (text, node) = common_variable(cx, &conds)?;
    let mut claims: Vec<Claim> = clauses[1..].iter().map(|c| Claim::Node(*c)).collect();
    for c in &conds {
        if cx.equality_sides(*c).is_some() {
            claims.push(Claim::Node(*c));
        }
    }
    Some(Raw {
        parts: vec![cx.part(PartRole::Variable, text_of(cx, node, &text), Some(node))],
        span: cx.loc(n),
        claims,
    })
}

fn text_of(cx: &Cx<'_>, node: NodeRef, fallback: &str) -> String {
    let t = cx.text(node);
    if t.is_empty() {
        fallback.to_string()
    } else {
        t.to_string()
    }
}

fn returns_only(cx: &Cx<'_>, if_node: NodeRef) -> bool {
    let then = cx.children_with(if_node, Role::Then);
    cx.children_with(if_node, Role::Else).is_empty()
        && then.len() == 1
        && cx.kind(then[0]) == NodeKind::ReturnStmt
}

fn if_return_chain(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if !returns_only(cx, n) {
        return None;
    }
    let cond = cx.child(n, Role::Condition)?;
    let mine = tested_variables(cx, cond);
    if mine.is_empty() {
        return None;
    }
    if let Some(prev) = cx.prev_sibling(n) {
        if cx.kind(prev) == NodeKind::IfStmt && returns_only(cx, prev) {
            if let Some(pc) = cx.child(prev, Role::Condition) {
                let theirs = tested_variables(cx, pc);
                if mine.iter().any(|(t, _)| theirs.iter().any(|(u, _)| u == t)) {
                    return None;
                }
            }
        }
    }
    let mut run = vec![n];
    let mut conds = vec![cond];
    let mut cur = n;
    while let Some(next) = cx.next_sibling(cur) {
        if cx.kind(next) != NodeKind::IfStmt || !returns_only(cx, next) {
            break;
        }
        let Some(nc) = cx.child(next, Role::Condition) else { break };
        let mut trial = conds.clone();
        trial.push(nc);
        if common_variable(cx, &trial).is_none() {
            break;
        }
        run.push(next);
        conds.push(nc);
        cur = next;
    }
    if run.len() < 2 {
        return None;
    }
    let (text, node) = common_variable(cx, &conds)?;
    let mut claims: Vec<Claim> = run[1..].iter().map(|c| Claim::Node(*c)).collect();
    claims.extend(conds.iter().map(|c| Claim::Subtree(*c)));
    Some(Raw {
        parts: vec![cx.part(PartRole::Variable, text_of(cx, node, &text), Some(node))],
        span: cx.span(n, *run.last().unwrap()),
        claims,
    })
}

fn equals_or_chain(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if cx.kind(n) != NodeKind::BinaryExpr || cx.op(n) != "||" {
        return None;
    }
    if let Some(p) = cx.corpus.parent(n) {
        if cx.kind(p) == NodeKind::BinaryExpr && cx.op(p) == "||" {
            return None;
        }
    }
    let ops = or_operands(cx, n);
    if ops.len() < 2 || ops.iter().any(|o| cx.equality_sides(*o).is_none()) {
        return None;
    }
    let (text, node) = common_variable(cx, &ops)?;
    Some(Raw {
        parts: vec![cx.part(PartRole::Variable, text_of(cx, node, &text), Some(node))],
        span: cx.loc(n),
        claims: vec![Claim::Below(n)],
    })
}

fn polymorphic_method(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let node = cx.corpus.node(n);
    if node.has(flags::CONSTRUCTOR_CALL) {
        return None;
    }
    let CallOutcome::Corpus(targets) = cx.res.resolve_call(n) else { return None };
    let declared = targets.iter().find_map(|(id, r)| {
        let m = cx.symbols.method(*id);
        (*r == Resolution::Static && !m.has_body && !m.is_constructor).then_some(m)
    })?;
    let overridden = targets.iter().any(|(id, r)| {
        *r == Resolution::HierarchyApproximate && cx.symbols.method(*id).has_body
    });
    if !overridden {
        return None;
    }
    let class = declared.class.rsplit('.').next().unwrap_or(&declared.class);
    cx.raw(
        n,
        vec![cx.part(PartRole::Method, format!("{class}.{}()", declared.name), Some(n))],
    )
}

fn strip_not(cx: &Cx<'_>, mut n: NodeRef) -> NodeRef {
    while cx.kind(n) == NodeKind::UnaryExpr && cx.op(n) == "!" {
        match cx.corpus.children(n).next() {
            Some(c) => n = c,
            None => break,
        }
    }
    n
}

fn null_compound(cx: &Cx<'_>, n: NodeRef, which: Cip) -> Option<Raw> {
    if cx.kind(n) != NodeKind::BinaryExpr || !matches!(cx.op(n), "&&" | "||") {
        return None;
    }
    let (l, r) = cx.binary_sides(n)?;
    let var = null_check(cx, l)?;
    let x = cx.norm(var);
    let r = strip_not(cx, r);
    let rn = cx.corpus.node(r);
    let on_var = |m: NodeRef| -> bool {
        cx.child(m, Role::Receiver).is_some_and(|recv| cx.norm(recv) == x)
    };
    let empty_lit = |m: NodeRef| cx.corpus.node(m).literal == Some(LiteralKind::Str) && cx.text(m) == "\"\"";
    let matched = match which {
        Cip::NullEmptyCheck => {
            if let Some((recv, arg)) = cx.equality_call(r) {
                (cx.norm(recv) == x && empty_lit(arg)) || (empty_lit(recv) && cx.norm(arg) == x)
            } else {
                rn.kind == NodeKind::MethodCall && rn.name() == "isEmpty" && on_var(r)
            }
        }
        Cip::NullZeroCheck => match cx.binary_sides(r) {
            Some((a, b)) if is_comparison(rn.op()) => {
                let other = if cx.is_zero(b) {
                    a
                } else if cx.is_zero(a) {
                    b
                } else {
                    return None;
                };
                matches!(cx.kind(other), NodeKind::MethodCall | NodeKind::FieldAccess) && on_var(other)
            }
            _ => false,
        },
        Cip::NullBooleanCheck => {
            let candidate = match rn.kind {
                NodeKind::MethodCall => {
                    !rn.has(flags::CONSTRUCTOR_CALL)
                        && !STRING_PREDICATES.contains(&rn.name())
                        && rn.name() != "isEmpty"
                }
                NodeKind::FieldAccess => true,
                _ => false,
            };
            candidate && on_var(r)
        }
        _ => false,
    };
    if !matched {
        return None;
    }
    Some(Raw {
        parts: vec![cx.var(var)],
        span: cx.loc(n),
        claims: vec![Claim::Below(n)],
    })
}

fn switch_len_char(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let sel = cx.child(n, Role::Selector)?;
    let s = cx.corpus.node(sel);
    if s.kind != NodeKind::MethodCall || s.name() != "length" || !cx.args(sel).is_empty() {
        return None;
    }
    let recv = cx.child(sel, Role::Receiver)?;
    let inspects_chars = cx
        .corpus
        .descendants(n)
        .into_iter()
        .any(|d| cx.kind(d) == NodeKind::MethodCall && cx.name(d) == "charAt");
    if !inspects_chars {
        return None;
    }
    Some(Raw {
        parts: vec![cx.var(recv)],
        span: cx.loc(n),
        claims: vec![Claim::Below(n)],
    })
}

fn switch_case(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let sel = cx.child(n, Role::Selector)?;
    let labels: Vec<NodeRef> = cx
        .children_with(n, Role::Body)
        .into_iter()
        .flat_map(|g| cx.children_with(g, Role::CaseLabel))
        .collect();
    let enum_typed = match cx.res.type_of(sel) {
        TypeInfo::Corpus(q) => cx.symbols.enums.contains_key(&q),
        _ => false,
    };
    let constant_labels = !labels.is_empty()
        && labels.iter().all(|l| {
            matches!(cx.kind(*l), NodeKind::NameRef | NodeKind::FieldAccess)
                && is_constant_name(cx.name(*l).rsplit('.').next().unwrap_or(""))
        });
    if !(enum_typed || constant_labels) {
        return None;
    }
    cx.raw(n, vec![cx.var(sel)])
}

fn self_comparison(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if !is_comparison(cx.op(n)) {
        return None;
    }
    let (l, r) = cx.binary_sides(n)?;
    if cx.is_lit(l) || cx.is_null(l) || cx.norm(l) != cx.norm(r) {
        return None;
    }
    cx.raw(n, vec![cx.var(l)])
}

fn str_call(cx: &Cx<'_>, n: NodeRef, method: &str) -> Option<Raw> {
    let node = cx.corpus.node(n);
    if node.kind != NodeKind::MethodCall || node.name() != method {
        return None;
    }
    let recv = cx.child(n, Role::Receiver)?;
    let root = cx.chain_root(recv);
    if cx.is_lit(root) {
        return None;
    }
    cx.raw(n, vec![cx.var(root)])
}

fn setter(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let node = cx.corpus.node(n);
    let name = node.name();
    let is_setter_name = name.len() > 3
        && name.starts_with("set")
        && name[3..].chars().next().is_some_and(|c| c.is_ascii_uppercase());
    if node.has(flags::CONSTRUCTOR_CALL) || !is_setter_name {
        return None;
    }
    let [arg] = cx.args(n)[..] else { return None };
    if cx.is_lit(arg) || cx.is_null(arg) {
        return None;
    }
    let callee = match cx.child(n, Role::Receiver) {
        Some(r) => format!("{}.{}", cx.text(r), name),
        None => name.to_string(),
    };
    cx.raw(
        n,
        vec![cx.part(PartRole::Method, callee, Some(n)), cx.var(arg)],
    )
}

fn is_class_call(cx: &Cx<'_>, v: NodeRef) -> bool {
    cx.kind(v) == NodeKind::MethodCall
        && cx.child(v, Role::Receiver).is_some()
        && cx.kind(cx.chain_root(v)) == NodeKind::ClassLiteralAccess
}

fn constructor_assign(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if cx.op(n) != "=" {
        return None;
    }
    let method = cx.corpus.enclosing_method(n)?;
    if !cx.corpus.node(method).has(flags::CONSTRUCTOR) {
        return None;
    }
    let target = cx.child(n, Role::Target)?;
    let is_field = match cx.kind(target) {
        NodeKind::NameRef => matches!(cx.res.resolve_name(target), Target::Field(_)),
        NodeKind::FieldAccess => cx
            .child(target, Role::Receiver)
            .is_some_and(|r| cx.kind(r) == NodeKind::NameRef && cx.name(r) == "this"),
        _ => false,
    };
    if !is_field {
        return None;
    }
    let value = cx.child(n, Role::Value)?;
    if cx.is_lit(value) || cx.is_null(value) || is_class_call(cx, value) {
        return None;
    }
    let reads_param = cx.corpus.descendants(value).into_iter().any(|d| {
        cx.kind(d) == NodeKind::NameRef
            && matches!(cx.res.resolve_name(d), Target::Param(p) if cx.corpus.parent(p) == Some(method))
    });
    if reads_param {
        return None;
    }
    let name = cx.name(target);
    cx.raw(n, vec![cx.part(PartRole::Field, name, Some(target))])
}

/// Operands of a subtraction, directly or through a local initialized with one.
fn subtraction(cx: &Cx<'_>, s: NodeRef) -> Option<(NodeRef, NodeRef, Option<NodeRef>)> {
    if cx.kind(s) == NodeKind::BinaryExpr && cx.op(s) == "-" {
        let (a, b) = cx.binary_sides(s)?;
        return Some((a, b, None));
    }
    let (decl, init) = cx.local_init(s)?;
    if cx.kind(init) == NodeKind::BinaryExpr && cx.op(init) == "-" {
        let (a, b) = cx.binary_sides(init)?;
        return Some((a, b, Some(decl)));
    }
    None
}

fn part_name(cx: &Cx<'_>, n: NodeRef) -> String {
    match cx.kind(n) {
        NodeKind::MethodCall | NodeKind::FieldAccess | NodeKind::NameRef => cx.name(n).to_string(),
        _ => cx.text(n).to_string(),
    }
}

fn delta_check(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if !is_comparison(cx.op(n)) {
        return None;
    }
    let (l, r) = cx.binary_sides(n)?;
    let other = if cx.is_zero(r) {
        l
    } else if cx.is_zero(l) {
        r
    } else {
        return None;
    };
    let (a, b, decl) = subtraction(cx, other)?;
    let span = match decl {
        Some(d) => cx.span(d, n),
        None => cx.loc(n),
    };
    Some(Raw {
        parts: vec![
            cx.part(PartRole::Variable, part_name(cx, a), Some(a)),
            cx.part(PartRole::Variable, part_name(cx, b), Some(b)),
        ],
        span,
        claims: Vec::new(),
    })
}

fn cast_self_comparison(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if !matches!(cx.op(n), "==" | "!=") {
        return None;
    }
    let (l, r) = cx.binary_sides(n)?;
    for (p, q) in [(l, r), (r, l)] {
        // (T) d == d
        if cx.kind(p) == NodeKind::CastExpr {
            if let Some(inner) = cx.corpus.children(p).next() {
                if cx.norm(inner) == cx.norm(q) && !cx.is_lit(q) {
                    return cx.raw(n, vec![cx.var(q)]);
                }
            }
        }
        // T id = (T) d; ... id == d
        if let Some((decl, init)) = cx.local_init(p) {
            if cx.kind(init) == NodeKind::CastExpr {
                if let Some(inner) = cx.corpus.children(init).next() {
                    if cx.norm(inner) == cx.norm(q) && !cx.is_lit(q) {
                        return Some(Raw {
                            parts: vec![cx.var(q)],
                            span: cx.span(decl, n),
                            claims: Vec::new(),
                        });
                    }
                }
            }
        }
    }
    None
}

fn enum_value_of(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if cx.name(n) != "valueOf" {
        return None;
    }
    let recv = cx.child(n, Role::Receiver)?;
    let [arg] = cx.args(n)[..] else { return None };
    if !matches!(cx.kind(recv), NodeKind::NameRef | NodeKind::FieldAccess) {
        return None;
    }
    let last = cx.text(recv).rsplit('.').next().unwrap_or("").trim();
    if BOXED.contains(&last) {
        return None;
    }
    let ok = match cx.res.receiver_type(recv) {
        TypeInfo::Corpus(q) => cx.symbols.enums.contains_key(&q),
        _ => last.chars().next().is_some_and(|c| c.is_ascii_uppercase()),
    };
    if !ok {
        return None;
    }
    Some(Raw {
        parts: vec![cx.var(arg)],
        span: cx.loc(n),
        claims: vec![Claim::Subtree(arg)],
    })
}

fn mentions(cx: &Cx<'_>, n: NodeRef, name: &str) -> bool {
    cx.corpus
        .descendants(n)
        .into_iter()
        .any(|d| cx.kind(d) == NodeKind::NameRef && cx.name(d) == name)
}

fn literal_collection(cx: &Cx<'_>, v: NodeRef) -> bool {
    let node = cx.corpus.node(v);
    match node.kind {
        NodeKind::MethodCall => {
            (node.name() == "values" && cx.args(v).is_empty())
                || (matches!(node.name(), "asList" | "of")
                    && !cx.args(v).is_empty()
                    && cx.args(v).iter().all(|a| cx.is_lit(*a) || cx.is_constant_like(*a)))
        }
        NodeKind::Opaque => matches!(node.detail(), "array_initializer" | "array_creation_expression"),
        _ => false,
    }
}

fn iterate_and_check(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let node = cx.corpus.node(n);
    if node.detail() != "foreach" {
        return None;
    }
    let v = node.name();
    let iterable = cx.child(n, Role::Iterable)?;
    let literal_source = literal_collection(cx, iterable)
        || cx.decl_init(iterable).is_some_and(|init| literal_collection(cx, init));
    if !literal_source {
        return None;
    }
    let body: Vec<NodeRef> = cx.children_with(n, Role::Body);
    for b in body {
        for d in cx.corpus.descendants(b) {
            let Some((a, c)) = cx.equality_sides(d) else { continue };
            for (mine, other) in [(a, c), (c, a)] {
                if mentions(cx, mine, v) && !mentions(cx, other, v) && !cx.is_lit(other) && !cx.is_null(other) {
                    return Some(Raw {
                        parts: vec![
                            cx.var(other),
                            cx.part(PartRole::Collection, cx.text(iterable), Some(iterable)),
                        ],
                        span: cx.loc(n),
                        claims: vec![Claim::Below(n)],
                    });
                }
            }
        }
    }
    None
}

fn index_loop_find(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    if cx.corpus.node(n).detail() != "for" {
        return None;
    }
    let init = cx.child(n, Role::Init)?;
    if cx.kind(init) != NodeKind::LocalVarDecl {
        return None;
    }
    let i = cx.name(init).to_string();
    let cond = cx.child(n, Role::Condition)?;
    if cx.op(cond) != "<" {
        return None;
    }
    let (ci, bound) = cx.binary_sides(cond)?;
    if cx.kind(ci) != NodeKind::NameRef || cx.name(ci) != i {
        return None;
    }
    let bn = cx.corpus.node(bound);
    let coll = match bn.kind {
        NodeKind::FieldAccess if bn.name() == "length" => cx.child(bound, Role::Receiver)?,
        NodeKind::MethodCall if bn.name() == "size" && cx.args(bound).is_empty() => {
            cx.child(bound, Role::Receiver)?
        }
        _ => return None,
    };
    let coll_text = cx.norm(coll);
    let element_of = |e: NodeRef| -> bool {
        let en = cx.corpus.node(e);
        let indexed_by_i = |idx: Option<NodeRef>| {
            idx.is_some_and(|x| cx.kind(x) == NodeKind::NameRef && cx.name(x) == i)
        };
        match en.kind {
            NodeKind::Opaque if en.detail() == "array_access" => {
                cx.child(e, Role::Receiver).is_some_and(|r| cx.norm(r) == coll_text)
                    && indexed_by_i(cx.child(e, Role::Argument))
            }
            NodeKind::MethodCall if en.name() == "get" => {
                cx.child(e, Role::Receiver).is_some_and(|r| cx.norm(r) == coll_text)
                    && indexed_by_i(cx.args(e).first().copied())
            }
            _ => false,
        }
    };
    let mut found = None;
    for b in cx.children_with(n, Role::Body) {
        for d in cx.corpus.descendants(b) {
            if cx.kind(d) != NodeKind::IfStmt {
                continue;
            }
            let then = cx.children_with(d, Role::Then);
            let returns_i = then.len() == 1
                && cx.kind(then[0]) == NodeKind::ReturnStmt
                && cx
                    .child(then[0], Role::Value)
                    .is_some_and(|v| cx.kind(v) == NodeKind::NameRef && cx.name(v) == i);
            if !returns_i {
                continue;
            }
            let Some(c) = cx.child(d, Role::Condition) else { continue };
            let Some((a, e)) = cx.equality_sides(c) else { continue };
            if element_of(e) {
                found = Some(a);
            } else if element_of(a) {
                found = Some(e);
            }
            if found.is_some() {
                break;
            }
        }
    }
    let value = found?;
    let ret = cx.next_sibling(n)?;
    let minus_one = cx.kind(ret) == NodeKind::ReturnStmt
        && cx.child(ret, Role::Value).is_some_and(|v| cx.norm(v) == "-1" && cx.is_lit(v));
    if !minus_one {
        return None;
    }
    Some(Raw {
        parts: vec![
            cx.part(PartRole::Collection, cx.text(coll), Some(coll)),
            cx.var(value),
        ],
        span: cx.span(n, ret),
        claims: vec![Claim::Below(n), Claim::Subtree(ret), Claim::Subtree(init)],
    })
}

fn assign_class_call(cx: &Cx<'_>, n: NodeRef) -> Option<Raw> {
    let node = cx.corpus.node(n);
    let (target, value) = match node.kind {
        NodeKind::Assignment if node.op() == "=" => {
            let t = cx.child(n, Role::Target)?;
            (cx.var(t), cx.child(n, Role::Value)?)
        }
        NodeKind::LocalVarDecl | NodeKind::FieldDecl => (
            cx.part(PartRole::Variable, node.name(), Some(n)),
            cx.child(n, Role::Value)?,
        ),
        _ => return None,
    };
    if !is_class_call(cx, value) {
        return None;
    }
    cx.raw(n, vec![target])
}
