//! Lowering of tree-sitter-java concrete syntax into the arena AST.

use tree_sitter::{Node, Parser};

use super::{flags, Ast, AstNode, FileId, LiteralKind, Location, NodeIdx, NodeKind, ParseFailure, Role};

pub(super) fn parse_file(file: FileId, path: &str, src: &str) -> Result<Ast, ParseFailure> {
    let mut parser = Parser::new();
    parser
        .set_language(&tree_sitter_java::LANGUAGE.into())
        .expect("tree-sitter-java grammar is ABI compatible");
    let tree = parser.parse(src, None).ok_or_else(|| ParseFailure {
        file,
        path: path.to_string(),
        line: 1,
        column: 1,
        message: "parser produced no tree".to_string(),
    })?;
    let root = tree.root_node();
    let lines = LineIndex::new(src);
    if root.has_error() {
        let bad = first_error(root).unwrap_or(root);
        let (line, column) = lines.position(src, bad.start_byte());
        let message = if bad.is_missing() {
            format!("syntax error: missing `{}`", bad.kind())
        } else {
            let snippet: String = src[bad.start_byte()..bad.end_byte()]
                .chars()
                .take(24)
                .collect();
            format!("syntax error near `{}`", snippet.trim())
        };
        return Err(ParseFailure {
            file,
            path: path.to_string(),
            line,
            column,
            message,
        });
    }
    let mut lw = Lowerer {
        src,
        file,
        lines,
        nodes: Vec::new(),
        anon: 0,
        package: None,
        imports: Vec::new(),
    };
    let root_idx = lw.lower_program(root);
    Ok(Ast {
        nodes: lw.nodes,
        root: root_idx,
        package: lw.package,
        imports: lw.imports,
    })
}

fn first_error(node: Node<'_>) -> Option<Node<'_>> {
    if node.is_error() || node.is_missing() {
        return Some(node);
    }
    let mut cursor = node.walk();
    for child in node.children(&mut cursor) {
        if child.has_error() || child.is_missing() {
            if let Some(found) = first_error(child) {
                return Some(found);
            }
        }
    }
    None
}

struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    fn new(src: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(src.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    /// 1-based (line, column); columns count characters.
    fn position(&self, src: &str, byte: usize) -> (u32, u32) {
        let line = match self.starts.binary_search(&byte) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let start = self.starts[line];
        let col = src[start..byte].chars().count();
        (line as u32 + 1, col as u32 + 1)
    }
}

/// Erase generic arguments, annotations and whitespace from a type.
pub(crate) fn erase_type(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut depth = 0usize;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            '@' if depth == 0 => {
                // drop the annotation name and an optional argument list
                while chars.peek().is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '.') {
                    chars.next();
                }
                if chars.peek() == Some(&'(') {
                    let mut level = 0;
                    for c in chars.by_ref() {
                        if c == '(' {
                            level += 1;
                        } else if c == ')' {
                            level -= 1;
                            if level == 0 {
                                break;
                            }
                        }
                    }
                }
            }
            c if c.is_whitespace() => {}
            c if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

struct Lowerer<'a> {
    src: &'a str,
    file: FileId,
    lines: LineIndex,
    nodes: Vec<AstNode>,
    anon: u32,
    package: Option<String>,
    imports: Vec<String>,
}

impl<'a> Lowerer<'a> {
    fn text(&self, n: Node<'_>) -> &'a str {
        &self.src[n.start_byte()..n.end_byte()]
    }

    fn push_span(
        &mut self,
        kind: NodeKind,
        start: usize,
        end: usize,
        parent: Option<NodeIdx>,
        role: Role,
    ) -> NodeIdx {
        let (line, column) = self.lines.position(self.src, start);
        let (end_line, end_column) = self.lines.position(self.src, end);
        let idx = NodeIdx(self.nodes.len() as u32);
        self.nodes.push(AstNode {
            kind,
            role,
            parent,
            children: Vec::new(),
            location: Location {
                file: self.file,
                line,
                column,
                end_line,
                end_column,
                start_byte: start,
                end_byte: end,
            },
            text: self.src[start..end].to_string(),
            name: None,
            op: None,
            type_name: None,
            literal: None,
            detail: None,
            supertypes: Vec::new(),
            flags: 0,
        });
        if let Some(p) = parent {
            self.nodes[p.0 as usize].children.push(idx);
        }
        idx
    }

    fn push(&mut self, kind: NodeKind, ts: Node<'_>, parent: Option<NodeIdx>, role: Role) -> NodeIdx {
        self.push_span(kind, ts.start_byte(), ts.end_byte(), parent, role)
    }

    fn node_mut(&mut self, idx: NodeIdx) -> &mut AstNode {
        &mut self.nodes[idx.0 as usize]
    }

    fn set_flag(&mut self, idx: NodeIdx, flag: u16) {
        self.node_mut(idx).flags |= flag;
    }

    fn named_children<'t>(&self, n: Node<'t>) -> Vec<Node<'t>> {
        let mut cursor = n.walk();
        n.named_children(&mut cursor)
            .filter(|c| !c.is_extra())
            .collect()
    }

    fn modifier_flags(&self, n: Node<'_>) -> u16 {
        let mut out = 0;
        let mut cursor = n.walk();
        for child in n.children(&mut cursor) {
            if child.kind() != "modifiers" {
                continue;
            }
            let mut c2 = child.walk();
            for m in child.children(&mut c2) {
                out |= match m.kind() {
                    "abstract" => flags::ABSTRACT,
                    "static" => flags::STATIC,
                    "final" => flags::FINAL,
                    "private" => flags::PRIVATE,
                    _ => 0,
                };
            }
        }
        out
    }

    fn lower_program(&mut self, root: Node<'_>) -> NodeIdx {
        let idx = self.push(NodeKind::Opaque, root, None, Role::None);
        self.node_mut(idx).detail = Some("program".to_string());
        for child in self.named_children(root) {
            match child.kind() {
                "package_declaration" => {
                    let name = self
                        .named_children(child)
                        .into_iter()
                        .find(|c| matches!(c.kind(), "scoped_identifier" | "identifier"))
                        .map(|c| self.text(c).to_string());
                    self.package = name;
                }
                "import_declaration" => {
                    let t = self
                        .text(child)
                        .trim_start_matches("import")
                        .trim()
                        .trim_start_matches("static")
                        .trim_end_matches(';')
                        .replace(char::is_whitespace, "");
                    self.imports.push(t);
                }
                k if is_type_decl(k) => {
                    self.lower_class(child, Some(idx), Role::Member);
                }
                _ => {}
            }
        }
        idx
    }

    fn lower_class(&mut self, n: Node<'_>, parent: Option<NodeIdx>, role: Role) -> NodeIdx {
        let idx = self.push(NodeKind::ClassDecl, n, parent, role);
        let mut fl = flags::STMT | self.modifier_flags(n);
        let detail = match n.kind() {
            "interface_declaration" | "annotation_type_declaration" => {
                fl |= flags::INTERFACE;
                "interface"
            }
            "enum_declaration" => {
                fl |= flags::ENUM;
                "enum"
            }
            "record_declaration" => "record",
            _ => "class",
        };
        let name = n
            .child_by_field_name("name")
            .map(|c| self.text(c).to_string())
            .unwrap_or_default();
        let mut supertypes = Vec::new();
        let mut cursor = n.walk();
        for child in n.named_children(&mut cursor) {
            match child.kind() {
                "superclass" | "super_interfaces" | "extends_interfaces" => {
                    self.collect_types(child, &mut supertypes);
                }
                _ => {}
            }
        }
        {
            let node = self.node_mut(idx);
            node.flags |= fl;
            node.name = Some(name.clone());
            node.detail = Some(detail.to_string());
            node.supertypes = supertypes;
        }
        if let Some(params) = n.child_by_field_name("parameters") {
            // record components behave like final fields
            for p in self.named_children(params) {
                if p.kind() == "formal_parameter" {
                    let f = self.push(NodeKind::FieldDecl, p, Some(idx), Role::Member);
                    let pname = p.child_by_field_name("name").map(|c| self.text(c).to_string());
                    let ptype = p.child_by_field_name("type").map(|c| erase_type(self.text(c)));
                    let node = self.node_mut(f);
                    node.name = pname;
                    node.type_name = ptype;
                    node.flags |= flags::STMT | flags::FINAL | flags::PRIVATE;
                }
            }
        }
        if let Some(body) = n.child_by_field_name("body") {
            self.lower_class_body(body, idx, &name);
        }
        idx
    }

    fn collect_types(&self, n: Node<'_>, out: &mut Vec<String>) {
        match n.kind() {
            "type_identifier" | "scoped_type_identifier" | "generic_type" => {
                out.push(erase_type(self.text(n)));
            }
            _ => {
                let mut cursor = n.walk();
                for c in n.named_children(&mut cursor) {
                    self.collect_types(c, out);
                }
            }
        }
    }

    fn lower_class_body(&mut self, body: Node<'_>, class: NodeIdx, class_name: &str) {
        for member in self.named_children(body) {
            self.lower_member(member, class, class_name);
        }
    }

    fn lower_member(&mut self, member: Node<'_>, class: NodeIdx, class_name: &str) {
        match member.kind() {
            "field_declaration" | "constant_declaration" => {
                let mut fl = self.modifier_flags(member);
                if member.kind() == "constant_declaration"
                    || self.node_mut(class).has(flags::INTERFACE)
                {
                    fl |= flags::STATIC | flags::FINAL;
                }
                self.lower_declarators(member, class, NodeKind::FieldDecl, fl, Role::Member);
            }
            "method_declaration" => {
                self.lower_method(member, class, class_name, false);
            }
            "constructor_declaration" | "compact_constructor_declaration" => {
                self.lower_method(member, class, class_name, true);
            }
            "enum_constant" => {
                let idx = self.push(NodeKind::FieldDecl, member, Some(class), Role::Member);
                let name = member
                    .child_by_field_name("name")
                    .map(|c| self.text(c).to_string());
                {
                    let node = self.node_mut(idx);
                    node.name = name;
                    node.type_name = Some(class_name.to_string());
                    node.flags |= flags::STMT | flags::ENUM_CONSTANT | flags::STATIC | flags::FINAL;
                }
                if let Some(args) = member.child_by_field_name("arguments") {
                    for a in self.named_children(args) {
                        self.lower_expr(a, idx, Role::Argument);
                    }
                }
                if let Some(body) = member.child_by_field_name("body") {
                    self.lower_anonymous(body, idx, class_name);
                }
            }
            "enum_body_declarations" => {
                for m in self.named_children(member) {
                    self.lower_member(m, class, class_name);
                }
            }
            "static_initializer" | "block" => {
                let idx = self.push(NodeKind::Opaque, member, Some(class), Role::Member);
                self.node_mut(idx).detail = Some("initializer".to_string());
                self.set_flag(idx, flags::STMT);
                for c in self.named_children(member) {
                    self.lower_stmt(c, idx, Role::Body);
                }
            }
            k if is_type_decl(k) => {
                self.lower_class(member, Some(class), Role::Member);
            }
            _ => {}
        }
    }

    fn lower_anonymous(&mut self, body: Node<'_>, parent: NodeIdx, base: &str) -> NodeIdx {
        self.anon += 1;
        let name = format!("{}${}", base.rsplit('.').next().unwrap_or(base), self.anon);
        let idx = self.push(NodeKind::ClassDecl, body, Some(parent), Role::Member);
        {
            let node = self.node_mut(idx);
            node.name = Some(name.clone());
            node.detail = Some("class".to_string());
            node.supertypes = vec![base.to_string()];
            node.flags |= flags::STMT | flags::ANONYMOUS;
        }
        self.lower_class_body(body, idx, &name);
        idx
    }

    fn lower_method(&mut self, n: Node<'_>, class: NodeIdx, class_name: &str, ctor: bool) {
        let idx = self.push(NodeKind::MethodDecl, n, Some(class), Role::Member);
        let mut fl = flags::STMT | self.modifier_flags(n);
        if ctor {
            fl |= flags::CONSTRUCTOR;
        }
        let name = if ctor {
            class_name.to_string()
        } else {
            n.child_by_field_name("name")
                .map(|c| self.text(c).to_string())
                .unwrap_or_default()
        };
        let ret = if ctor {
            Some(class_name.to_string())
        } else {
            n.child_by_field_name("type").map(|c| erase_type(self.text(c)))
        };
        let body = n.child_by_field_name("body");
        if body.is_some() {
            fl |= flags::HAS_BODY;
        }
        {
            let node = self.node_mut(idx);
            node.flags |= fl;
            node.name = Some(name);
            node.type_name = ret;
        }
        if let Some(params) = n.child_by_field_name("parameters") {
            for p in self.named_children(params) {
                match p.kind() {
                    "formal_parameter" => {
                        let pi = self.push(NodeKind::Parameter, p, Some(idx), Role::Parameter);
                        let pname = p.child_by_field_name("name").map(|c| self.text(c).to_string());
                        let ptype = p.child_by_field_name("type").map(|c| erase_type(self.text(c)));
                        let node = self.node_mut(pi);
                        node.name = pname;
                        node.type_name = ptype;
                    }
                    "spread_parameter" => {
                        let pi = self.push(NodeKind::Parameter, p, Some(idx), Role::Parameter);
                        let mut pname = None;
                        let mut ptype = None;
                        for c in self.named_children(p) {
                            match c.kind() {
                                "variable_declarator" => {
                                    pname = c.child_by_field_name("name").map(|x| self.text(x).to_string())
                                }
                                "modifiers" => {}
                                _ if ptype.is_none() => ptype = Some(format!("{}[]", erase_type(self.text(c)))),
                                _ => {}
                            }
                        }
                        let node = self.node_mut(pi);
                        node.name = pname;
                        node.type_name = ptype;
                        node.flags |= flags::VARARGS;
                    }
                    _ => {}
                }
            }
        }
        if let Some(body) = body {
            for c in self.named_children(body) {
                self.lower_stmt(c, idx, Role::Body);
            }
        }
    }

    /// One node per declarator. A single-declarator declaration spans the
    /// whole declaration; otherwise each node spans its declarator.
    fn lower_declarators(
        &mut self,
        n: Node<'_>,
        parent: NodeIdx,
        kind: NodeKind,
        fl: u16,
        role: Role,
    ) {
        let ty = n.child_by_field_name("type").map(|c| erase_type(self.text(c)));
        let mut cursor = n.walk();
        let decls: Vec<Node<'_>> = n.children_by_field_name("declarator", &mut cursor).collect();
        let single = decls.len() == 1;
        for d in decls {
            let span = if single { n } else { d };
            let idx = self.push(kind, span, Some(parent), role);
            let name = d.child_by_field_name("name").map(|c| self.text(c).to_string());
            let dims = d
                .child_by_field_name("dimensions")
                .map(|c| self.text(c).replace(char::is_whitespace, ""))
                .unwrap_or_default();
            {
                let node = self.node_mut(idx);
                node.name = name;
                node.type_name = ty.as_ref().map(|t| format!("{t}{dims}"));
                node.flags |= flags::STMT | fl;
            }
            if let Some(v) = d.child_by_field_name("value") {
                self.lower_expr(v, idx, Role::Value);
            }
        }
    }

    fn lower_stmt(&mut self, n: Node<'_>, parent: NodeIdx, role: Role) {
        match n.kind() {
            "block" | "labeled_statement" => {
                for c in self.named_children(n) {
                    if c.kind() != "identifier" {
                        self.lower_stmt(c, parent, role);
                    }
                }
            }
            "expression_statement" => {
                if let Some(e) = self.named_children(n).into_iter().next() {
                    if let Some(idx) = self.lower_expr(e, parent, role) {
                        self.set_flag(idx, flags::STMT);
                    }
                }
            }
            "local_variable_declaration" => {
                let fl = self.modifier_flags(n);
                self.lower_declarators(n, parent, NodeKind::LocalVarDecl, fl, role);
            }
            "if_statement" => {
                let idx = self.push(NodeKind::IfStmt, n, Some(parent), role);
                self.set_flag(idx, flags::STMT);
                if let Some(c) = n.child_by_field_name("condition") {
                    self.lower_expr(c, idx, Role::Condition);
                }
                if let Some(c) = n.child_by_field_name("consequence") {
                    self.lower_stmt(c, idx, Role::Then);
                }
                if let Some(c) = n.child_by_field_name("alternative") {
                    self.lower_stmt(c, idx, Role::Else);
                }
            }
            "while_statement" | "do_statement" => {
                let idx = self.push(NodeKind::LoopStmt, n, Some(parent), role);
                self.set_flag(idx, flags::STMT);
                let flavour = if n.kind() == "while_statement" { "while" } else { "do" };
                self.node_mut(idx).detail = Some(flavour.to_string());
                if let Some(c) = n.child_by_field_name("condition") {
                    self.lower_expr(c, idx, Role::Condition);
                }
                if let Some(c) = n.child_by_field_name("body") {
                    self.lower_stmt(c, idx, Role::Body);
                }
            }
            "for_statement" => {
                let idx = self.push(NodeKind::LoopStmt, n, Some(parent), role);
                self.set_flag(idx, flags::STMT);
                self.node_mut(idx).detail = Some("for".to_string());
                let mut cursor = n.walk();
                let inits: Vec<Node<'_>> = n.children_by_field_name("init", &mut cursor).collect();
                for c in inits {
                    if c.kind() == "local_variable_declaration" {
                        self.lower_stmt(c, idx, Role::Init);
                    } else if let Some(e) = self.lower_expr(c, idx, Role::Init) {
                        self.set_flag(e, flags::STMT);
                    }
                }
                if let Some(c) = n.child_by_field_name("condition") {
                    self.lower_expr(c, idx, Role::Condition);
                }
                let mut cursor = n.walk();
                let updates: Vec<Node<'_>> = n.children_by_field_name("update", &mut cursor).collect();
                for c in updates {
                    if let Some(e) = self.lower_expr(c, idx, Role::Update) {
                        self.set_flag(e, flags::STMT);
                    }
                }
                if let Some(c) = n.child_by_field_name("body") {
                    self.lower_stmt(c, idx, Role::Body);
                }
            }
            "enhanced_for_statement" => {
                let idx = self.push(NodeKind::LoopStmt, n, Some(parent), role);
                let name = n.child_by_field_name("name").map(|c| self.text(c).to_string());
                let ty = n.child_by_field_name("type").map(|c| erase_type(self.text(c)));
                {
                    let node = self.node_mut(idx);
                    node.flags |= flags::STMT;
                    node.detail = Some("foreach".to_string());
                    node.name = name;
                    node.type_name = ty;
                }
                if let Some(c) = n.child_by_field_name("value") {
                    self.lower_expr(c, idx, Role::Iterable);
                }
                if let Some(c) = n.child_by_field_name("body") {
                    self.lower_stmt(c, idx, Role::Body);
                }
            }
            "switch_expression" | "switch_statement" => {
                if let Some(idx) = self.lower_switch(n, parent, role) {
                    self.set_flag(idx, flags::STMT);
                }
            }
            "return_statement" => {
                let idx = self.push(NodeKind::ReturnStmt, n, Some(parent), role);
                self.set_flag(idx, flags::STMT);
                if let Some(e) = self.named_children(n).into_iter().next() {
                    self.lower_expr(e, idx, Role::Value);
                }
            }
            "explicit_constructor_invocation" => {
                let idx = self.push(NodeKind::MethodCall, n, Some(parent), role);
                let ctor = n
                    .child_by_field_name("constructor")
                    .map(|c| self.text(c).to_string())
                    .unwrap_or_else(|| "this".to_string());
                {
                    let node = self.node_mut(idx);
                    node.name = Some(ctor);
                    node.flags |= flags::STMT | flags::CONSTRUCTOR_CALL;
                }
                if let Some(args) = n.child_by_field_name("arguments") {
                    for a in self.named_children(args) {
                        self.lower_expr(a, idx, Role::Argument);
                    }
                }
            }
            "try_statement" | "try_with_resources_statement" => {
                let idx = self.opaque_stmt(n, parent, role, "try");
                for c in self.named_children(n) {
                    match c.kind() {
                        "resource_specification" => {
                            for r in self.named_children(c) {
                                self.lower_resource(r, idx);
                            }
                        }
                        "block" => self.lower_stmt(c, idx, Role::Body),
                        "catch_clause" => {
                            let ci = self.opaque_stmt(c, idx, Role::Body, "catch");
                            for cc in self.named_children(c) {
                                match cc.kind() {
                                    "catch_formal_parameter" => {
                                        let li = self.push(NodeKind::LocalVarDecl, cc, Some(ci), Role::Init);
                                        let name = cc.child_by_field_name("name").map(|x| self.text(x).to_string());
                                        let ty = self
                                            .named_children(cc)
                                            .into_iter()
                                            .find(|x| x.kind() == "catch_type")
                                            .map(|x| erase_type(self.text(x)));
                                        let node = self.node_mut(li);
                                        node.name = name;
                                        node.type_name = ty;
                                        node.flags |= flags::STMT;
                                    }
                                    "block" => self.lower_stmt(cc, ci, Role::Body),
                                    _ => {}
                                }
                            }
                        }
                        "finally_clause" => {
                            let fi = self.opaque_stmt(c, idx, Role::Body, "finally");
                            for cc in self.named_children(c) {
                                self.lower_stmt(cc, fi, Role::Body);
                            }
                        }
                        _ => {}
                    }
                }
            }
            "throw_statement" | "assert_statement" | "yield_statement" | "synchronized_statement" => {
                let label = n.kind().trim_end_matches("_statement").to_string();
                let idx = self.opaque_stmt(n, parent, role, &label);
                for c in self.named_children(n) {
                    if c.kind() == "block" {
                        self.lower_stmt(c, idx, Role::Body);
                    } else {
                        self.lower_expr(c, idx, Role::Value);
                    }
                }
            }
            "break_statement" | "continue_statement" | "empty_statement" => {}
            k if is_type_decl(k) || k == "local_class_declaration" => {
                self.lower_class(n, Some(parent), Role::Member);
            }
            _ => {
                if let Some(idx) = self.lower_expr(n, parent, role) {
                    self.set_flag(idx, flags::STMT);
                }
            }
        }
    }

    fn lower_resource(&mut self, r: Node<'_>, parent: NodeIdx) {
        if r.child_by_field_name("value").is_some() && r.child_by_field_name("name").is_some() {
            let idx = self.push(NodeKind::LocalVarDecl, r, Some(parent), Role::Init);
            let name = r.child_by_field_name("name").map(|c| self.text(c).to_string());
            let ty = r.child_by_field_name("type").map(|c| erase_type(self.text(c)));
            {
                let node = self.node_mut(idx);
                node.name = name;
                node.type_name = ty;
                node.flags |= flags::STMT;
            }
            if let Some(v) = r.child_by_field_name("value") {
                self.lower_expr(v, idx, Role::Value);
            }
        } else if let Some(idx) = self.lower_expr(r, parent, Role::Init) {
            self.set_flag(idx, flags::STMT);
        }
    }

    fn opaque_stmt(&mut self, n: Node<'_>, parent: NodeIdx, role: Role, label: &str) -> NodeIdx {
        let idx = self.push(NodeKind::Opaque, n, Some(parent), role);
        let node = self.node_mut(idx);
        node.detail = Some(label.to_string());
        node.flags |= flags::STMT;
        idx
    }

    fn lower_switch(&mut self, n: Node<'_>, parent: NodeIdx, role: Role) -> Option<NodeIdx> {
        let idx = self.push(NodeKind::SwitchStmt, n, Some(parent), role);
        if let Some(c) = n.child_by_field_name("condition") {
            self.lower_expr(c, idx, Role::Selector);
        }
        let body = n.child_by_field_name("body")?;
        for group in self.named_children(body) {
            if !matches!(group.kind(), "switch_block_statement_group" | "switch_rule") {
                continue;
            }
            let gi = self.push(NodeKind::Opaque, group, Some(idx), Role::Body);
            self.node_mut(gi).detail = Some("case-group".to_string());
            for c in self.named_children(group) {
                if c.kind() == "switch_label" {
                    for label in self.named_children(c) {
                        self.lower_expr(label, gi, Role::CaseLabel);
                    }
                } else {
                    self.lower_stmt(c, gi, Role::Body);
                }
            }
        }
        Some(idx)
    }

    fn lower_expr(&mut self, n: Node<'_>, parent: NodeIdx, role: Role) -> Option<NodeIdx> {
        let p = Some(parent);
        let idx = match n.kind() {
            "parenthesized_expression" => {
                let inner = self.named_children(n).into_iter().next()?;
                return self.lower_expr(inner, parent, role);
            }
            "assignment_expression" => {
                let idx = self.push(NodeKind::Assignment, n, p, role);
                let op = n.child_by_field_name("operator").map(|c| self.text(c).to_string());
                self.node_mut(idx).op = op;
                if let Some(c) = n.child_by_field_name("left") {
                    self.lower_expr(c, idx, Role::Target);
                }
                if let Some(c) = n.child_by_field_name("right") {
                    self.lower_expr(c, idx, Role::Value);
                }
                idx
            }
            "binary_expression" => {
                let idx = self.push(NodeKind::BinaryExpr, n, p, role);
                let op = n.child_by_field_name("operator").map(|c| self.text(c).to_string());
                self.node_mut(idx).op = op;
                if let Some(c) = n.child_by_field_name("left") {
                    self.lower_expr(c, idx, Role::Left);
                }
                if let Some(c) = n.child_by_field_name("right") {
                    self.lower_expr(c, idx, Role::Right);
                }
                idx
            }
            "unary_expression" => {
                let idx = self.push(NodeKind::UnaryExpr, n, p, role);
                let op = n.child_by_field_name("operator").map(|c| self.text(c).to_string());
                self.node_mut(idx).op = op;
                if let Some(c) = n.child_by_field_name("operand") {
                    self.lower_expr(c, idx, Role::Operand);
                }
                idx
            }
            "update_expression" => {
                let idx = self.push(NodeKind::UnaryExpr, n, p, role);
                let t = self.text(n).trim();
                let postfix = t.ends_with("++") || t.ends_with("--");
                let op = if t.contains("++") { "++" } else { "--" };
                {
                    let node = self.node_mut(idx);
                    node.op = Some(op.to_string());
                    if postfix {
                        node.flags |= flags::POSTFIX;
                    }
                }
                if let Some(c) = self.named_children(n).into_iter().next() {
                    self.lower_expr(c, idx, Role::Operand);
                }
                idx
            }
            "cast_expression" => {
                let idx = self.push(NodeKind::CastExpr, n, p, role);
                let ty = n.child_by_field_name("type").map(|c| erase_type(self.text(c)));
                self.node_mut(idx).type_name = ty;
                if let Some(c) = n.child_by_field_name("value") {
                    self.lower_expr(c, idx, Role::Operand);
                }
                idx
            }
            "method_invocation" => {
                let idx = self.push(NodeKind::MethodCall, n, p, role);
                let name = n.child_by_field_name("name").map(|c| self.text(c).to_string());
                self.node_mut(idx).name = name;
                if let Some(obj) = n.child_by_field_name("object") {
                    self.lower_expr(obj, idx, Role::Receiver);
                }
                if let Some(args) = n.child_by_field_name("arguments") {
                    for a in self.named_children(args) {
                        self.lower_expr(a, idx, Role::Argument);
                    }
                }
                idx
            }
            "object_creation_expression" => {
                let idx = self.push(NodeKind::MethodCall, n, p, role);
                let ty = n
                    .child_by_field_name("type")
                    .map(|c| erase_type(self.text(c)))
                    .unwrap_or_default();
                {
                    let node = self.node_mut(idx);
                    node.name = Some(ty.rsplit('.').next().unwrap_or(&ty).to_string());
                    node.type_name = Some(ty.clone());
                    node.flags |= flags::CONSTRUCTOR_CALL;
                }
                if let Some(args) = n.child_by_field_name("arguments") {
                    for a in self.named_children(args) {
                        self.lower_expr(a, idx, Role::Argument);
                    }
                }
                if let Some(body) = self
                    .named_children(n)
                    .into_iter()
                    .find(|c| c.kind() == "class_body")
                {
                    self.lower_anonymous(body, idx, &ty);
                }
                idx
            }
            "field_access" => {
                let idx = self.push(NodeKind::FieldAccess, n, p, role);
                let name = n.child_by_field_name("field").map(|c| self.text(c).to_string());
                self.node_mut(idx).name = name;
                if let Some(obj) = n.child_by_field_name("object") {
                    self.lower_expr(obj, idx, Role::Receiver);
                }
                idx
            }
            "class_literal" => {
                let idx = self.push(NodeKind::ClassLiteralAccess, n, p, role);
                let ty = self
                    .named_children(n)
                    .into_iter()
                    .next()
                    .map(|c| erase_type(self.text(c)));
                self.node_mut(idx).type_name = ty;
                idx
            }
            "identifier" | "this" | "super" => {
                let idx = self.push(NodeKind::NameRef, n, p, role);
                let t = self.text(n).to_string();
                self.node_mut(idx).name = Some(t);
                idx
            }
            "scoped_identifier" => {
                let idx = self.push(NodeKind::NameRef, n, p, role);
                let t = self.text(n).replace(char::is_whitespace, "");
                self.node_mut(idx).name = Some(t);
                idx
            }
            "decimal_integer_literal" | "hex_integer_literal" | "octal_integer_literal"
            | "binary_integer_literal" => self.literal(n, p, role, LiteralKind::Int),
            "decimal_floating_point_literal" | "hex_floating_point_literal" => {
                self.literal(n, p, role, LiteralKind::Float)
            }
            "string_literal" | "text_block" => self.literal(n, p, role, LiteralKind::Str),
            "character_literal" => self.literal(n, p, role, LiteralKind::Char),
            "true" | "false" => self.literal(n, p, role, LiteralKind::Bool),
            "null_literal" => self.literal(n, p, role, LiteralKind::Null),
            "switch_expression" => return self.lower_switch(n, parent, role),
            "ternary_expression" => {
                let idx = self.opaque(n, p, role, "ternary");
                if let Some(c) = n.child_by_field_name("condition") {
                    self.lower_expr(c, idx, Role::Condition);
                }
                if let Some(c) = n.child_by_field_name("consequence") {
                    self.lower_expr(c, idx, Role::Then);
                }
                if let Some(c) = n.child_by_field_name("alternative") {
                    self.lower_expr(c, idx, Role::Else);
                }
                idx
            }
            "array_access" => {
                let idx = self.opaque(n, p, role, "array_access");
                if let Some(c) = n.child_by_field_name("array") {
                    self.lower_expr(c, idx, Role::Receiver);
                }
                if let Some(c) = n.child_by_field_name("index") {
                    self.lower_expr(c, idx, Role::Argument);
                }
                idx
            }
            "instanceof_expression" => {
                let idx = self.opaque(n, p, role, "instanceof");
                let ty = n.child_by_field_name("right").map(|c| erase_type(self.text(c)));
                self.node_mut(idx).type_name = ty;
                if let Some(c) = n.child_by_field_name("left") {
                    self.lower_expr(c, idx, Role::Operand);
                }
                idx
            }
            "lambda_expression" => {
                let idx = self.opaque(n, p, role, "lambda");
                if let Some(body) = n.child_by_field_name("body") {
                    if body.kind() == "block" {
                        for c in self.named_children(body) {
                            self.lower_stmt(c, idx, Role::Body);
                        }
                    } else {
                        self.lower_expr(body, idx, Role::Body);
                    }
                }
                idx
            }
            // types and annotations never carry data flow
            "type_identifier" | "generic_type" | "scoped_type_identifier" | "array_type"
            | "integral_type" | "floating_point_type" | "boolean_type" | "void_type"
            | "marker_annotation" | "annotation" | "dimensions" | "type_arguments"
            | "modifiers" | "line_comment" | "block_comment" => return None,
            other => {
                let idx = self.opaque(n, p, role, other);
                for c in self.named_children(n) {
                    self.lower_expr(c, idx, Role::Argument);
                }
                idx
            }
        };
        Some(idx)
    }

    fn opaque(&mut self, n: Node<'_>, parent: Option<NodeIdx>, role: Role, label: &str) -> NodeIdx {
        let idx = self.push(NodeKind::Opaque, n, parent, role);
        self.node_mut(idx).detail = Some(label.to_string());
        idx
    }

    fn literal(&mut self, n: Node<'_>, parent: Option<NodeIdx>, role: Role, kind: LiteralKind) -> NodeIdx {
        let idx = self.push(NodeKind::Literal, n, parent, role);
        self.node_mut(idx).literal = Some(kind);
        idx
    }
}

fn is_type_decl(kind: &str) -> bool {
    matches!(
        kind,
        "class_declaration"
            | "interface_declaration"
            | "enum_declaration"
            | "record_declaration"
            | "annotation_type_declaration"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erases_generics_and_annotations() {
        assert_eq!(erase_type("List<Map<String, Integer>>"), "List");
        assert_eq!(erase_type("@NonNull String"), "String");
        assert_eq!(erase_type("java.util.List<E> []"), "java.util.List[]");
    }

    #[test]
    fn line_index_counts_characters() {
        let src = "ab\n\u{e9}x";
        let idx = LineIndex::new(src);
        assert_eq!(idx.position(src, 0), (1, 1));
        assert_eq!(idx.position(src, 3), (2, 1));
        assert_eq!(idx.position(src, 5), (2, 2));
    }
}
