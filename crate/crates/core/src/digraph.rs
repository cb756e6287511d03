//! Directed graphs on dense vertex indices, text formats, and strongly
//! connected components.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite directed graph on vertices `0..n`.
///
/// Self-loops are allowed. Parallel edges are collapsed, so the edge set is
/// exactly the support of a Boolean adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    succ: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Digraph {
    /// Builds a digraph from an edge iterator. Duplicate edges are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            sets[u].insert(v);
        }
        let succ: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let edge_count = succ.iter().map(Vec::len).sum();
        Ok(Digraph { n, succ, edge_count })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, std::iter::empty())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted successor list of `u`.
    pub fn successors(&self, u: usize) -> &[usize] {
        &self.succ[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.n];
        for (u, v) in self.edges() {
            pred[v].push(u);
        }
        pred
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (_, v) in self.edges() {
            deg[v] += 1;
        }
        deg
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.succ[u].len()
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let succ: Vec<Vec<usize>> = vertices
            .iter()
            .map(|&u| {
                let mut vs: Vec<usize> = self.succ[u]
                    .iter()
                    .filter(|&&v| index[v] != usize::MAX)
                    .map(|&v| index[v])
                    .collect();
                vs.sort_unstable();
                vs
            })
            .collect();
        let edge_count = succ.iter().map(Vec::len).sum();
        Digraph { n: vertices.len(), succ, edge_count }
    }

    /// Vertices reachable from `s` (including `s`) by directed paths.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.succ[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn reaches(&self, s: usize, t: usize) -> bool {
        self.reachable_from(s)[t]
    }

    /// True iff the graph has no directed cycle (self-loops count as cycles).
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = self.in_degrees();
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(u) = queue.pop_front() {
            removed += 1;
            for &v in &self.succ[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        removed == self.n
    }

    /// Serializes to the edge-list format, preceded by `# ` comment lines.
    pub fn to_edgelist(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            edges: Vec<(usize, usize)>,
        }
        Repr { n: self.n(), edges: self.edges().collect() }.serialize(s)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses the edge-list format: the first non-comment line holds the vertex
/// count, every following non-comment line holds one edge `u v`. Lines
/// starting with `#` and blank lines are ignored.
pub fn parse_edgelist(text: &str) -> Result<Digraph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match n {
            None => {
                let count: usize = line
                    .parse()
                    .map_err(|_| parse_error(line_no, format!("expected vertex count, found `{line}`")))?;
                if count == 0 {
                    return Err(parse_error(line_no, "vertex count must be at least 1"));
                }
                n = Some(count);
            }
            Some(count) => {
                let mut fields = line.split_whitespace();
                let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                    return Err(parse_error(line_no, format!("expected `u v`, found `{line}`")));
                };
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_error(line_no, format!("invalid vertex `{s}`")))
                };
                let (u, v) = (parse(a)?, parse(b)?);
                if u >= count || v >= count {
                    return Err(parse_error(line_no, "endpoint out of range"));
                }
                edges.push((u, v));
            }
        }
    }
    let n = n.ok_or_else(|| parse_error(1, "empty input"))?;
    Digraph::from_edges(n, edges)
}

/// Reads the `# key: value` header lines of an edge-list file.
pub fn parse_header(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(|l| l.trim_end_matches('\r').trim())
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .filter_map(|l| {
            let body = l.strip_prefix('#')?.trim();
            let (k, v) = body.split_once(':')?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// A digraph read from DOT together with the identifier of each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotGraph {
    pub graph: Digraph,
    pub names: Vec<String>,
}

/// Parses the DOT subset `digraph NAME { a -> b; ... }`.
///
/// Identifiers get dense indices in order of first appearance. Chains
/// (`a -> b -> c`) and bare node statements (`a;`) are accepted; attributes,
/// subgraphs, undirected edges and graph-level assignments are rejected.
pub fn parse_dot(text: &str) -> Result<DotGraph> {
    let unsupported = |what: &str| Error::UnsupportedSyntax(what.to_string());
    let text = text.trim();
    let open = text.find('{').ok_or_else(|| parse_error(1, "missing `{`"))?;
    let close = text.rfind('}').ok_or_else(|| parse_error(1, "missing `}`"))?;
    if close < open || !text[close + 1..].trim().is_empty() {
        return Err(parse_error(line_of(text, close), "trailing content after `}`"));
    }
    let head: Vec<&str> = text[..open].split_whitespace().collect();
    match head.as_slice() {
        ["digraph"] | ["digraph", _] => {}
        ["strict", ..] => return Err(unsupported("strict graphs")),
        ["graph", ..] => return Err(unsupported("undirected graphs")),
        _ => return Err(parse_error(1, "expected `digraph NAME {`")),
    }
    if let [_, name] = head.as_slice() {
        check_ident(name).ok_or_else(|| parse_error(1, format!("invalid graph name `{name}`")))?;
    }

    let body = &text[open + 1..close];
    let body_offset = open + 1;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };

    let mut pos = 0;
    for stmt in body.split([';', '\n']) {
        let start = pos;
        pos += stmt.len() + 1;
        let stmt = stmt.trim();
        if stmt.is_empty() || stmt.starts_with("//") || stmt.starts_with('#') {
            continue;
        }
        let line = line_of(text, body_offset + start);
        if stmt.contains('[') || stmt.contains(']') {
            return Err(unsupported("attribute lists"));
        }
        if stmt.contains('{') || stmt.contains('}') || stmt.starts_with("subgraph") {
            return Err(unsupported("subgraphs"));
        }
        if stmt.contains("--") {
            return Err(unsupported("undirected edges"));
        }
        if stmt.contains('=') {
            return Err(unsupported("attribute assignments"));
        }
        let parts: Vec<&str> = stmt.split("->").map(str::trim).collect();
        for part in &parts {
            if check_ident(part).is_none() {
                return Err(parse_error(line, format!("invalid identifier `{part}`")));
            }
            if matches!(*part, "node" | "edge" | "graph") {
                return Err(unsupported("default attribute statements"));
            }
        }
        // `"a"` and `a` name the same node.
        let ids: Vec<usize> = parts.iter().map(|p| intern(p.trim_matches('"'), &mut names)).collect();
        edges.extend(ids.windows(2).map(|w| (w[0], w[1])));
    }
    if names.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let graph = Digraph::from_edges(names.len(), edges)?;
    Ok(DotGraph { graph, names })
}

fn line_of(text: &str, byte: usize) -> usize {
    text[..byte.min(text.len())].matches('\n').count() + 1
}

fn check_ident(s: &str) -> Option<()> {
    let quoted = s.len() >= 2 && s.starts_with('"') && s.ends_with('"') && !s[1..s.len() - 1].contains('"');
    let plain = !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.');
    (quoted || plain).then_some(())
}

/// Strongly connected components with condensation metadata.
///
/// Components are numbered in order of their smallest vertex, and each
/// vertex list is sorted, so the decomposition depends only on the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    pub component_id: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// True iff the component contains an internal edge (a self-loop counts).
    pub has_cycle: Vec<bool>,
    /// True iff no edge leaves the component.
    pub is_sink: Vec<bool>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sink_count(&self) -> usize {
        self.is_sink.iter().filter(|&&s| s).count()
    }

    /// Indices of components that contain at least one cycle.
    pub fn cyclic(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&c| self.has_cycle[c])
    }
}

/// Iterative Tarjan decomposition.
pub fn scc_decompose(g: &Digraph) -> SccDecomposition {
    const UNVISITED: usize = usize::MAX;
    let n = g.n();
    let mut order = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;
    // (vertex, next successor position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if order[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut next)) = call.last_mut() {
            if let Some(&w) = g.successors(u).get(*next) {
                *next += 1;
                if order[w] == UNVISITED {
                    order[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(order[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == order[u] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == u {
                        break;
                    }
                }
                comp.sort_unstable();
                raw.push(comp);
            }
        }
    }

    raw.sort_by_key(|c| c[0]);
    let mut component_id = vec![0; n];
    for (cid, comp) in raw.iter().enumerate() {
        for &v in comp {
            component_id[v] = cid;
        }
    }
    let mut has_cycle: Vec<bool> = raw.iter().map(|c| c.len() >= 2).collect();
    let mut is_sink = vec![true; raw.len()];
    for (u, v) in g.edges() {
        let (cu, cv) = (component_id[u], component_id[v]);
        if cu == cv {
            has_cycle[cu] = true;
        } else {
            is_sink[cu] = false;
        }
    }
    SccDecomposition { component_id, components: raw, has_cycle, is_sink }
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    scc_decompose(g).len() == 1
}

/// Exactly one sink component, and it is the only component with a cycle.
pub fn is_almost_strongly_connected(g: &Digraph) -> bool {
    let scc = scc_decompose(g);
    if scc.sink_count() != 1 {
        return false;
    }
    (0..scc.len()).all(|c| !scc.has_cycle[c] || scc.is_sink[c])
}
