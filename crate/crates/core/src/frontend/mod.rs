//! Java front end: parsing into an arena AST with stable locations, symbol
//! tables, and syntactic name resolution.

mod lower;
pub mod resolve;
pub mod symbols;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Diagnostic, Error};

pub use resolve::{CallOutcome, Resolution, Resolver, Target, TypeInfo};
pub use symbols::{build_symbols, ClassSym, FieldSym, MethodId, MethodSym, ParamSym, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FileId(pub u32);

/// Index of a node inside one file's arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeIdx(pub u32);

/// Corpus-wide handle to an AST node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub file: FileId,
    pub idx: NodeIdx,
}

/// 1-based source position plus the byte span it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Location {
    pub file: FileId,
    pub line: u32,
    pub column: u32,
    pub end_line: u32,
    pub end_column: u32,
    #[serde(skip)]
    pub start_byte: usize,
    #[serde(skip)]
    pub end_byte: usize,
}

impl Location {
    pub fn contains(&self, other: &Location) -> bool {
        self.file == other.file
            && self.start_byte <= other.start_byte
            && other.end_byte <= self.end_byte
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    ClassDecl,
    FieldDecl,
    MethodDecl,
    Parameter,
    LocalVarDecl,
    Assignment,
    MethodCall,
    ReturnStmt,
    IfStmt,
    SwitchStmt,
    LoopStmt,
    BinaryExpr,
    UnaryExpr,
    CastExpr,
    Literal,
    NameRef,
    FieldAccess,
    ClassLiteralAccess,
    /// Constructs no pattern inspects (lambdas, ternaries, array access,
    /// try blocks, case groups). `detail` carries the grammar label.
    Opaque,
}

impl NodeKind {
    pub const ALL: [NodeKind; 19] = [
        NodeKind::ClassDecl,
        NodeKind::FieldDecl,
        NodeKind::MethodDecl,
        NodeKind::Parameter,
        NodeKind::LocalVarDecl,
        NodeKind::Assignment,
        NodeKind::MethodCall,
        NodeKind::ReturnStmt,
        NodeKind::IfStmt,
        NodeKind::SwitchStmt,
        NodeKind::LoopStmt,
        NodeKind::BinaryExpr,
        NodeKind::UnaryExpr,
        NodeKind::CastExpr,
        NodeKind::Literal,
        NodeKind::NameRef,
        NodeKind::FieldAccess,
        NodeKind::ClassLiteralAccess,
        NodeKind::Opaque,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::ClassDecl => "class-decl",
            NodeKind::FieldDecl => "field-decl",
            NodeKind::MethodDecl => "method-decl",
            NodeKind::Parameter => "parameter",
            NodeKind::LocalVarDecl => "local-var-decl",
            NodeKind::Assignment => "assignment",
            NodeKind::MethodCall => "method-call",
            NodeKind::ReturnStmt => "return-stmt",
            NodeKind::IfStmt => "if-stmt",
            NodeKind::SwitchStmt => "switch-stmt",
            NodeKind::LoopStmt => "loop-stmt",
            NodeKind::BinaryExpr => "binary-expr",
            NodeKind::UnaryExpr => "unary-expr",
            NodeKind::CastExpr => "cast-expr",
            NodeKind::Literal => "literal",
            NodeKind::NameRef => "name-ref",
            NodeKind::FieldAccess => "field-access",
            NodeKind::ClassLiteralAccess => "class-literal-access",
            NodeKind::Opaque => "opaque",
        }
    }

    pub fn parse(s: &str) -> Option<NodeKind> {
        NodeKind::ALL.iter().copied().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Position of a node relative to its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    None,
    Member,
    Parameter,
    Body,
    Receiver,
    Argument,
    Condition,
    Then,
    Else,
    Left,
    Right,
    Operand,
    Target,
    Value,
    Init,
    Update,
    Iterable,
    Selector,
    CaseLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiteralKind {
    Int,
    Float,
    Str,
    Char,
    Bool,
    Null,
}

pub mod flags {
    /// Node is a statement anchor (owns its non-statement descendants).
    pub const STMT: u16 = 1 << 0;
    pub const STATIC: u16 = 1 << 1;
    /// Explicit `abstract` modifier.
    pub const ABSTRACT: u16 = 1 << 2;
    pub const FINAL: u16 = 1 << 3;
    pub const CONSTRUCTOR: u16 = 1 << 4;
    pub const HAS_BODY: u16 = 1 << 5;
    pub const INTERFACE: u16 = 1 << 6;
    pub const ENUM: u16 = 1 << 7;
    pub const ENUM_CONSTANT: u16 = 1 << 8;
    /// `new T(..)` or `this(..)`/`super(..)`.
    pub const CONSTRUCTOR_CALL: u16 = 1 << 9;
    pub const ANONYMOUS: u16 = 1 << 10;
    pub const POSTFIX: u16 = 1 << 11;
    pub const PRIVATE: u16 = 1 << 12;
    pub const VARARGS: u16 = 1 << 13;
}

#[derive(Debug, Clone)]
pub struct AstNode {
    pub kind: NodeKind,
    pub role: Role,
    pub parent: Option<NodeIdx>,
    pub children: Vec<NodeIdx>,
    pub location: Location,
    /// Exact source slice of `location`.
    pub text: String,
    /// Declared, referenced, or invoked name.
    pub name: Option<String>,
    /// Operator lexeme for binary, unary and assignment nodes.
    pub op: Option<String>,
    /// Erased type name: declared type, method return type, cast or class-literal target.
    pub type_name: Option<String>,
    pub literal: Option<LiteralKind>,
    /// Grammar label for opaque nodes and loop flavours (`for`, `foreach`, `while`, `do`).
    pub detail: Option<String>,
    /// Supertypes of a class declaration.
    pub supertypes: Vec<String>,
    pub flags: u16,
}

impl AstNode {
    pub fn has(&self, flag: u16) -> bool {
        self.flags & flag != 0
    }

    pub fn is_stmt(&self) -> bool {
        self.has(flags::STMT)
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("")
    }

    pub fn op(&self) -> &str {
        self.op.as_deref().unwrap_or("")
    }

    pub fn detail(&self) -> &str {
        self.detail.as_deref().unwrap_or("")
    }
}

#[derive(Debug, Clone)]
pub struct Ast {
    pub nodes: Vec<AstNode>,
    pub root: NodeIdx,
    pub package: Option<String>,
    pub imports: Vec<String>,
}

impl Ast {
    pub fn node(&self, idx: NodeIdx) -> &AstNode {
        &self.nodes[idx.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SourceFile {
    pub id: FileId,
    pub path: PathBuf,
    /// Path relative to the corpus root it was discovered under.
    pub display: String,
    pub content: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParseFailure {
    pub file: FileId,
    pub path: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl ParseFailure {
    pub fn diagnostic(&self) -> Diagnostic {
        Diagnostic::new(&self.path, self.line, self.column, &self.message)
    }
}

/// Parsed corpus. Every file appears either in `asts` or in `parse_failures`.
#[derive(Debug, Clone, Default)]
pub struct SourceCorpus {
    pub files: Vec<SourceFile>,
    asts: Vec<Option<Ast>>,
    pub parse_failures: Vec<ParseFailure>,
}

impl SourceCorpus {
    pub fn file(&self, id: FileId) -> &SourceFile {
        &self.files[id.0 as usize]
    }

    pub fn ast(&self, id: FileId) -> Option<&Ast> {
        self.asts.get(id.0 as usize).and_then(Option::as_ref)
    }

    pub fn asts(&self) -> impl Iterator<Item = (FileId, &Ast)> {
        self.asts
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.as_ref().map(|a| (FileId(i as u32), a)))
    }

    pub fn parsed_count(&self) -> usize {
        self.asts.iter().filter(|a| a.is_some()).count()
    }

    pub fn node(&self, r: NodeRef) -> &AstNode {
        self.ast(r.file)
            .expect("node reference into an unparsed file")
            .node(r.idx)
    }

    pub fn parent(&self, r: NodeRef) -> Option<NodeRef> {
        self.node(r).parent.map(|idx| NodeRef { file: r.file, idx })
    }

    pub fn children(&self, r: NodeRef) -> impl Iterator<Item = NodeRef> + '_ {
        self.node(r)
            .children
            .iter()
            .map(move |&idx| NodeRef { file: r.file, idx })
    }

    pub fn ancestors(&self, r: NodeRef) -> impl Iterator<Item = NodeRef> + '_ {
        std::iter::successors(self.parent(r), move |p| self.parent(*p))
    }

    /// Pre-order walk of the subtree rooted at `r` (including `r`).
    pub fn descendants(&self, r: NodeRef) -> Vec<NodeRef> {
        let mut out = Vec::new();
        let mut stack = vec![r];
        while let Some(n) = stack.pop() {
            out.push(n);
            let node = self.node(n);
            for &c in node.children.iter().rev() {
                stack.push(NodeRef { file: n.file, idx: c });
            }
        }
        out
    }

    /// All nodes of all parsed files in file-id then pre-order.
    pub fn all_nodes(&self) -> impl Iterator<Item = NodeRef> + '_ {
        self.asts().flat_map(|(file, ast)| {
            (0..ast.nodes.len() as u32).map(move |i| NodeRef {
                file,
                idx: NodeIdx(i),
            })
        })
    }

    /// Nearest ancestor-or-self statement anchor.
    pub fn anchor(&self, r: NodeRef) -> NodeRef {
        let mut cur = r;
        loop {
            if self.node(cur).is_stmt() {
                return cur;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return cur,
            }
        }
    }

    /// Nearest enclosing method declaration (ancestor-or-self).
    pub fn enclosing_method(&self, r: NodeRef) -> Option<NodeRef> {
        std::iter::once(r)
            .chain(self.ancestors(r))
            .find(|n| self.node(*n).kind == NodeKind::MethodDecl)
    }

    /// Nearest enclosing class declaration (strict ancestor unless `r` is one).
    pub fn enclosing_class(&self, r: NodeRef) -> Option<NodeRef> {
        std::iter::once(r)
            .chain(self.ancestors(r))
            .find(|n| self.node(*n).kind == NodeKind::ClassDecl)
    }

    pub fn display_path(&self, id: FileId) -> &str {
        &self.file(id).display
    }

    /// Locate a file by path suffix (`a/B.java`, `B.java`).
    pub fn find_file(&self, path: &str) -> Option<FileId> {
        let wanted = path.replace('\\', "/");
        let wanted = wanted.trim_start_matches("./");
        self.files
            .iter()
            .find(|f| f.display == wanted)
            .or_else(|| {
                self.files.iter().find(|f| {
                    let d = f.display.as_str();
                    d.ends_with(wanted)
                        && (d.len() == wanted.len()
                            || d.as_bytes()[d.len() - wanted.len() - 1] == b'/')
                })
            })
            .map(|f| f.id)
    }

    /// Build a corpus from in-memory sources; used by tests and fixtures.
    pub fn from_sources<I, P, S>(sources: I) -> SourceCorpus
    where
        I: IntoIterator<Item = (P, S)>,
        P: Into<String>,
        S: Into<String>,
    {
        let mut entries: Vec<(String, String)> = sources
            .into_iter()
            .map(|(p, s)| (p.into(), s.into()))
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let files = entries
            .into_iter()
            .enumerate()
            .map(|(i, (display, content))| SourceFile {
                id: FileId(i as u32),
                path: PathBuf::from(&display),
                display,
                content,
            })
            .collect();
        Self::parse_files(files, &BTreeSet::new())
    }

    fn parse_files(files: Vec<SourceFile>, undecodable: &BTreeSet<FileId>) -> SourceCorpus {
        let results: Vec<Result<Ast, ParseFailure>> = files
            .par_iter()
            .map(|f| {
                if undecodable.contains(&f.id) {
                    return Err(ParseFailure {
                        file: f.id,
                        path: f.display.clone(),
                        line: 1,
                        column: 1,
                        message: "file is not valid UTF-8".to_string(),
                    });
                }
                lower::parse_file(f.id, &f.display, &f.content)
            })
            .collect();
        let mut asts = Vec::with_capacity(files.len());
        let mut parse_failures = Vec::new();
        for r in results {
            match r {
                Ok(ast) => asts.push(Some(ast)),
                Err(fail) => {
                    asts.push(None);
                    parse_failures.push(fail);
                }
            }
        }
        SourceCorpus {
            files,
            asts,
            parse_failures,
        }
    }
}

fn is_java(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "java")
}

/// Parse every `.java` file under the given files or directory roots.
///
/// File ids follow lexicographic order of the display paths. A syntax error
/// in one file is recorded in `parse_failures`; an unreadable root is fatal.
pub fn parse_corpus<P: AsRef<Path>>(paths: &[P]) -> Result<SourceCorpus, Error> {
    let mut found: Vec<(String, PathBuf)> = Vec::new();
    let mut seen = BTreeSet::new();
    for root in paths {
        let root = root.as_ref();
        let meta = std::fs::metadata(root).map_err(|e| Error::Io {
            path: root.display().to_string(),
            source: e,
        })?;
        if meta.is_file() {
            if is_java(root) && seen.insert(root.to_path_buf()) {
                let display = root
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                found.push((display, root.to_path_buf()));
            }
            continue;
        }
        for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
            let entry = entry.map_err(|e| Error::Io {
                path: root.display().to_string(),
                source: e.into(),
            })?;
            let p = entry.path();
            if entry.file_type().is_file() && is_java(p) && seen.insert(p.to_path_buf()) {
                let rel = p.strip_prefix(root).unwrap_or(p);
                let display = rel
                    .components()
                    .map(|c| c.as_os_str().to_string_lossy())
                    .collect::<Vec<_>>()
                    .join("/");
                found.push((display, p.to_path_buf()));
            }
        }
    }
    found.sort();
    let mut files = Vec::with_capacity(found.len());
    let mut undecodable = BTreeSet::new();
    for (i, (display, path)) in found.into_iter().enumerate() {
        let bytes = std::fs::read(&path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let content = match String::from_utf8(bytes) {
            Ok(s) => s,
            Err(e) => {
                undecodable.insert(FileId(i as u32));
                String::from_utf8_lossy(e.as_bytes()).into_owned()
            }
        };
        files.push(SourceFile {
            id: FileId(i as u32),
            path,
            display,
            content,
        });
    }
    Ok(SourceCorpus::parse_files(files, &undecodable))
}

/// Statements (or any nodes) of the corpus in (file-id, location) order,
/// optionally filtered by kind.
pub fn statements_of(corpus: &SourceCorpus, kinds: Option<&[NodeKind]>) -> Vec<NodeRef> {
    let mut out: Vec<NodeRef> = corpus
        .all_nodes()
        .filter(|r| kinds.is_none_or(|ks| ks.contains(&corpus.node(*r).kind)))
        .collect();
    out.sort_by_key(|r| {
        let loc = corpus.node(*r).location;
        (r.file, loc.line, loc.column, r.idx)
    });
    out
}
