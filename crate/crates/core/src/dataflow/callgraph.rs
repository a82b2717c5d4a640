use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::frontend::{
    CallOutcome, MethodId, NodeKind, NodeRef, Resolution, Resolver, SourceCorpus, SymbolTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CallEdge {
    /// `None` for calls in field initializers.
    pub caller: Option<MethodId>,
    pub callee: MethodId,
    pub site: NodeRef,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, Default)]
pub struct CallGraph {
    pub edges: Vec<CallEdge>,
    /// Call sites whose callee could not be found at all.
    pub unresolved: usize,
    /// Call sites resolved to code outside the corpus.
    pub library: usize,
    by_site: HashMap<NodeRef, Vec<usize>>,
    by_callee: BTreeMap<MethodId, Vec<usize>>,
}

impl CallGraph {
    pub fn callees_at(&self, site: NodeRef) -> impl Iterator<Item = &CallEdge> {
        self.by_site
            .get(&site)
            .into_iter()
            .flatten()
            .map(|i| &self.edges[*i])
    }

    pub fn call_sites_of(&self, callee: MethodId) -> impl Iterator<Item = &CallEdge> {
        self.by_callee
            .get(&callee)
            .into_iter()
            .flatten()
            .map(|i| &self.edges[*i])
    }

    pub fn has_edge(&self, caller: MethodId, callee: MethodId) -> bool {
        self.call_sites_of(callee).any(|e| e.caller == Some(caller))
    }
}

/// Serializable view of one edge.
#[derive(Debug, Clone, Serialize)]
pub struct CallEdgeView {
    pub caller: Option<String>,
    pub callee: String,
    pub file: String,
    pub line: u32,
    pub resolution: &'static str,
}

impl CallEdge {
    pub fn view(&self, corpus: &SourceCorpus, symbols: &SymbolTable) -> CallEdgeView {
        let loc = corpus.node(self.site).location;
        CallEdgeView {
            caller: self.caller.map(|c| symbols.method(c).qname.clone()),
            callee: symbols.method(self.callee).qname.clone(),
            file: corpus.display_path(self.site.file).to_string(),
            line: loc.line,
            resolution: self.resolution.as_str(),
        }
    }
}

/// One edge per resolved (call site, target) pair. Virtual calls reach every
/// override below the statically named method; targets without a body get
/// no edge.
pub fn build_call_graph(corpus: &SourceCorpus, symbols: &SymbolTable) -> CallGraph {
    let res = Resolver::new(corpus, symbols);
    let mut graph = CallGraph::default();
    for site in corpus.all_nodes() {
        if corpus.node(site).kind != NodeKind::MethodCall {
            continue;
        }
        match res.resolve_call(site) {
            CallOutcome::Corpus(targets) => {
                let caller = corpus
                    .enclosing_method(site)
                    .and_then(|m| symbols.method_of_node(m));
                for (callee, resolution) in targets {
                    if !symbols.method(callee).has_body {
                        continue;
                    }
                    graph.edges.push(CallEdge {
                        caller,
                        callee,
                        site,
                        resolution,
                    });
                }
            }
            CallOutcome::Library => graph.library += 1,
            CallOutcome::Unresolved => graph.unresolved += 1,
        }
    }
    for (i, e) in graph.edges.iter().enumerate() {
        graph.by_site.entry(e.site).or_default().push(i);
        graph.by_callee.entry(e.callee).or_default().push(i);
    }
    graph
}
