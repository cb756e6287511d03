//! Labeled instance generators.
//!
//! The three reduction gadgets turn an `(s, t)`-reachability or path-order
//! question into a digraph whose period or exponent encodes the answer. The
//! label of every instance comes from a plain BFS or order check on the
//! source instance, never from the period or index engines.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// Ground truth attached to a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Period(u64),
    /// Exponent is at most this value (`|V'| / 2`).
    ExponentAtMost(u64),
    /// Exponent is at least this value (`|V'| / 2 + 1`).
    ExponentAtLeast(u64),
    Exponent(u64),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Period(p) => write!(f, "period={p}"),
            Label::ExponentAtMost(b) => write!(f, "exponent_max={b}"),
            Label::ExponentAtLeast(b) => write!(f, "exponent_min={b}"),
            Label::Exponent(e) => write!(f, "exponent={e}"),
        }
    }
}

impl Label {
    /// Parses the `key=value` form written into file headers.
    pub fn parse(text: &str) -> Option<Label> {
        let (key, value) = text.split_once('=')?;
        let value: u64 = value.trim().parse().ok()?;
        match key.trim() {
            "period" => Some(Label::Period(value)),
            "exponent_max" => Some(Label::ExponentAtMost(value)),
            "exponent_min" => Some(Label::ExponentAtLeast(value)),
            "exponent" => Some(Label::Exponent(value)),
            _ => None,
        }
    }
}

/// A generated digraph with its ground truth and named vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetInstance {
    pub graph: Digraph,
    pub labels: Vec<Label>,
    pub family: String,
    /// Short description of the source instance.
    pub source: String,
    pub special: BTreeMap<String, usize>,
}

impl GadgetInstance {
    fn plain(graph: Digraph, family: &str, source: String, labels: Vec<Label>) -> Self {
        GadgetInstance { graph, labels, family: family.to_string(), source, special: BTreeMap::new() }
    }

    pub fn vertex(&self, name: &str) -> usize {
        self.special[name]
    }

    pub fn header(&self) -> Vec<String> {
        let mut lines = vec![format!("family: {}", self.family), format!("source: {}", self.source)];
        lines.extend(self.labels.iter().map(|l| format!("label: {l}")));
        if !self.special.is_empty() {
            let names: Vec<String> = self.special.iter().map(|(k, v)| format!("{k}={v}")).collect();
            lines.push(format!("special: {}", names.join(" ")));
        }
        lines
    }

    /// Edge list preceded by `# family`, `# source`, `# label` and
    /// `# special` comment lines.
    pub fn to_edgelist(&self) -> String {
        self.graph.to_edgelist(&self.header())
    }
}

/// Labels found in the `# label:` header lines of an edge-list file.
pub fn header_labels(text: &str) -> Vec<Label> {
    crate::digraph::parse_header(text)
        .into_iter()
        .filter(|(k, _)| k == "label")
        .filter_map(|(_, v)| Label::parse(&v))
        .collect()
}

/// Result of [`acyclify_layered`]: the layered DAG and the images of `s`, `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layered {
    pub graph: Digraph,
    pub s: usize,
    pub t: usize,
}

fn check_vertex(g: &Digraph, v: usize) -> Result<()> {
    if v < g.n() {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, n: g.n() })
    }
}

/// Layered copy of `g`: copy `i` of `u` (vertex `i·n + u`) has edges to copy
/// `i + 1` of `u` and of every successor of `u`. The first copy of `s`
/// reaches the last copy of `t` iff `s` reaches `t` in `g`.
///
/// A one-vertex input gets two layers so that the images of `s` and `t`
/// are distinct.
pub fn acyclify_layered(g: &Digraph, s: usize, t: usize) -> Result<Layered> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    let n = g.n();
    let layers = n.max(2);
    let mut edges = Vec::with_capacity((layers - 1) * (n + g.edge_count()));
    for i in 0..layers - 1 {
        for u in 0..n {
            edges.push((i * n + u, (i + 1) * n + u));
            for &v in g.successors(u) {
                edges.push((i * n + u, (i + 1) * n + v));
            }
        }
    }
    let graph = Digraph::from_edges(layers * n, edges)?;
    Ok(Layered { graph, s, t: (layers - 1) * n + t })
}

/// A reachability instance in normal form: acyclic, `s` has no incoming
/// edges, `t` has no outgoing edges, `s_prime` is the only other vertex
/// without incoming edges and `t_prime` the only other vertex without
/// outgoing edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub graph: Digraph,
    pub s: usize,
    pub t: usize,
    pub s_prime: usize,
    pub t_prime: usize,
}

/// Layers `g`, then merges all other sources into one `s'` and all other
/// sinks into one `t'`. Merged vertices have no incoming (resp. outgoing)
/// edges, so no `(s, t)`-path passes through them. If no other source
/// (sink) exists, a fresh `s'` with one edge to `t` (a fresh `t'` with one
/// edge from `s`) is added.
pub fn normalize_streach(g: &Digraph, s: usize, t: usize) -> Result<Normalized> {
    let layered = acyclify_layered(g, s, t)?;
    let body = &layered.graph;
    let indeg = body.in_degrees();
    let sources: Vec<usize> = (0..body.n()).filter(|&v| v != layered.s && indeg[v] == 0).collect();
    let sinks: Vec<usize> = (0..body.n()).filter(|&v| v != layered.t && body.out_degree(v) == 0).collect();

    let mut new_id = vec![usize::MAX; body.n()];
    let mut next = 0;
    let mut merged_source = None;
    let mut merged_sink = None;
    for v in 0..body.n() {
        let slot = if sources.binary_search(&v).is_ok() {
            &mut merged_source
        } else if sinks.binary_search(&v).is_ok() {
            &mut merged_sink
        } else {
            new_id[v] = next;
            next += 1;
            continue;
        };
        new_id[v] = *slot.get_or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    let mut edges: Vec<(usize, usize)> = body.edges().map(|(u, v)| (new_id[u], new_id[v])).collect();
    let (s, t) = (new_id[layered.s], new_id[layered.t]);
    let s_prime = merged_source.unwrap_or_else(|| {
        edges.push((next, t));
        next += 1;
        next - 1
    });
    let t_prime = merged_sink.unwrap_or_else(|| {
        edges.push((s, next));
        next += 1;
        next - 1
    });
    let graph = Digraph::from_edges(next, edges)?;
    Ok(Normalized { graph, s, t, s_prime, t_prime })
}

/// Every structural condition of the reachability normal form that `g`
/// violates, as human-readable strings. Empty iff `g` is in normal form.
pub fn normal_form_violations(g: &Digraph, s: usize, t: usize) -> Vec<String> {
    let mut out = Vec::new();
    if s >= g.n() || t >= g.n() || s == t {
        out.push("s and t must be distinct vertices".to_string());
        return out;
    }
    if !g.is_acyclic() {
        out.push("graph has a cycle".into());
    }
    let indeg = g.in_degrees();
    if indeg[s] != 0 {
        out.push("s has incoming edges".into());
    }
    if g.out_degree(t) != 0 {
        out.push("t has outgoing edges".into());
    }
    let sources = (0..g.n()).filter(|&v| v != s && indeg[v] == 0).count();
    if sources != 1 {
        out.push(format!("expected one source besides s, found {sources}"));
    }
    let sinks = (0..g.n()).filter(|&v| v != t && g.out_degree(v) == 0).count();
    if sinks != 1 {
        out.push(format!("expected one sink besides t, found {sinks}"));
    }
    out
}

/// Conditions the period and exponent gadgets rely on: acyclic, `s`
/// without incoming and `t` without outgoing edges, and `t'` the only sink
/// besides `t`.
fn check_gadget_input(g: &Digraph, s: usize, t: usize, t_prime: usize) -> Result<()> {
    let fail = |m: &str| Err(Error::NormalForm(m.to_string()));
    for v in [s, t, t_prime] {
        check_vertex(g, v)?;
    }
    if s == t || t == t_prime || s == t_prime {
        return fail("s, t and t' must be distinct");
    }
    if !g.is_acyclic() {
        return fail("graph has a cycle");
    }
    if g.in_degrees()[s] != 0 {
        return fail("s has incoming edges");
    }
    if g.out_degree(t) != 0 {
        return fail("t has outgoing edges");
    }
    if let Some(v) = (0..g.n()).find(|&v| v != t && v != t_prime && g.out_degree(v) == 0) {
        return Err(Error::NormalForm(format!("vertex {v} is a sink other than t and t'")));
    }
    if g.out_degree(t_prime) != 0 {
        return fail("t' has outgoing edges");
    }
    Ok(())
}

fn st_special(s: usize, t: usize, t_prime: usize) -> BTreeMap<String, usize> {
    BTreeMap::from([("s".to_string(), s), ("t".to_string(), t), ("t'".to_string(), t_prime)])
}

/// Subdivides every edge of `g` and adds `(s, t)`, `(t', t)` and `(t, s)`.
/// The result has period 1 if `s` reaches `t` in `g` and period 2 otherwise.
pub fn gen_period_gadget(g: &Digraph, s: usize, t: usize, t_prime: usize) -> Result<GadgetInstance> {
    check_gadget_input(g, s, t, t_prime)?;
    let n = g.n();
    let mut edges = Vec::with_capacity(2 * g.edge_count() + 3);
    for (e, (u, v)) in g.edges().enumerate() {
        edges.push((u, n + e));
        edges.push((n + e, v));
    }
    edges.extend([(s, t), (t_prime, t), (t, s)]);
    let graph = Digraph::from_edges(n + g.edge_count(), edges)?;
    let period = if g.reaches(s, t) { 1 } else { 2 };
    Ok(GadgetInstance {
        graph,
        labels: vec![Label::Period(period)],
        family: "period-gadget".into(),
        source: format!("st-reachability n={} edges={} s={s} t={t} t'={t_prime}", n, g.edge_count()),
        special: st_special(s, t, t_prime),
    })
}

/// Adds `|V|` fresh vertices `u_1 … u_|V|` forming a path `t' → u_1 → … → t`,
/// an edge from every vertex to `s` and from `t` to every vertex. The
/// result is primitive; its exponent is at most `|V'|/2` if `s` reaches `t`
/// in `g` and at least `|V'|/2 + 1` otherwise.
pub fn gen_exponent_gadget(g: &Digraph, s: usize, t: usize, t_prime: usize) -> Result<GadgetInstance> {
    check_gadget_input(g, s, t, t_prime)?;
    let n = g.n();
    let total = 2 * n;
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    for x in 0..total {
        edges.push((x, s));
        edges.push((t, x));
    }
    edges.push((t_prime, n));
    edges.extend((n..total - 1).map(|u| (u, u + 1)));
    edges.push((total - 1, t));
    let graph = Digraph::from_edges(total, edges)?;
    let half = n as u64;
    let label = if g.reaches(s, t) { Label::ExponentAtMost(half) } else { Label::ExponentAtLeast(half + 1) };
    let mut special = st_special(s, t, t_prime);
    let indeg = g.in_degrees();
    if let Some(sp) = (0..n).find(|&v| v != s && indeg[v] == 0) {
        special.insert("s'".into(), sp);
    }
    special.insert("u1".into(), n);
    Ok(GadgetInstance {
        graph,
        labels: vec![label],
        family: "exponent-gadget".into(),
        source: format!("st-reachability n={} edges={} s={s} t={t} t'={t_prime}", n, g.edge_count()),
        special,
    })
}

/// Recovers the vertex order of a path given as unordered successor pairs.
pub fn path_order(successor: &[(usize, usize)]) -> Result<Vec<usize>> {
    let bad = |m: String| Err(Error::InvalidOrder(m));
    if successor.is_empty() {
        return bad("empty successor relation".into());
    }
    let mut next: HashMap<usize, usize> = HashMap::new();
    let mut has_pred: HashMap<usize, bool> = HashMap::new();
    for &(x, y) in successor {
        if x == y {
            return bad(format!("self-loop at {x}"));
        }
        if next.insert(x, y).is_some() {
            return bad(format!("{x} has two successors"));
        }
        if has_pred.insert(y, true) == Some(true) {
            return bad(format!("{y} has two predecessors"));
        }
        has_pred.entry(x).or_insert(false);
    }
    let starts: Vec<usize> = has_pred.iter().filter(|(_, &p)| !p).map(|(&v, _)| v).collect();
    let [start] = starts[..] else {
        return bad(format!("expected one first vertex, found {}", starts.len()));
    };
    let mut order = vec![start];
    while let Some(&y) = next.get(order.last().expect("nonempty")) {
        order.push(y);
    }
    if order.len() != has_pred.len() {
        return bad("successor relation is not a single path".into());
    }
    Ok(order)
}

/// Path-order gadget. With path `v = x_0 → … → x_m = v'`, every edge is
/// subdivided, the edge entering `s` is rerouted through a fresh `s'`, and
/// the edges `(v', v)`, `(v, s)`, `(v, t)`, `(v, v')` are added. The result
/// is strongly connected with exactly four cycles, all through `v`; its
/// period is 1 if `t` precedes `s` and 2 otherwise.
///
/// Path vertex `x_i` becomes vertex `2i`, the midpoint of `x_i → x_{i+1}`
/// becomes `2i + 1`, and `s'` is the last vertex.
pub fn gen_ord_gadget(successor: &[(usize, usize)], s: usize, t: usize) -> Result<GadgetInstance> {
    let order = path_order(successor)?;
    let pos = |x: usize| order.iter().position(|&y| y == x);
    let (Some(ps), Some(pt)) = (pos(s), pos(t)) else {
        return Err(Error::InvalidOrder("s and t must lie on the path".into()));
    };
    let m = order.len() - 1;
    if ps == pt {
        return Err(Error::InvalidOrder("s and t must differ".into()));
    }
    if ps == m || pt == m {
        return Err(Error::InvalidOrder("the last vertex of the path must differ from s and t".into()));
    }
    if ps == 0 {
        return Err(Error::InvalidOrder("s must not be the first vertex of the path".into()));
    }
    let s_prime = 2 * m + 1;
    let mut edges = Vec::with_capacity(2 * m + 5);
    for i in 0..m {
        edges.push((2 * i, 2 * i + 1));
        let target = 2 * i + 2;
        if target == 2 * ps {
            edges.push((2 * i + 1, s_prime));
            edges.push((s_prime, target));
        } else {
            edges.push((2 * i + 1, target));
        }
    }
    let (v, v_last) = (0, 2 * m);
    edges.extend([(v_last, v), (v, 2 * ps), (v, 2 * pt), (v, v_last)]);
    let graph = Digraph::from_edges(2 * m + 2, edges)?;
    let period = if pt < ps { 1 } else { 2 };
    let names: Vec<String> = order.iter().map(ToString::to_string).collect();
    let special = BTreeMap::from([
        ("v".to_string(), v),
        ("v'".to_string(), v_last),
        ("s".to_string(), 2 * ps),
        ("t".to_string(), 2 * pt),
        ("s'".to_string(), s_prime),
    ]);
    Ok(GadgetInstance {
        graph,
        labels: vec![Label::Period(period)],
        family: "ord-gadget".into(),
        source: format!("order={} s={s} t={t}", names.join(",")),
        special,
    })
}

pub fn gen_cycle(n: usize) -> Result<Digraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("cycle length must be at least 1".into()));
    }
    Digraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// `n`-cycle plus the chord `(n-1) → 1`.
pub fn gen_wielandt(n: usize) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("Wielandt digraph needs n >= 3, got {n}")));
    }
    Digraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)).chain([(n - 1, 1)]))
}

/// Each ordered pair (self-loops included) is an edge with probability
/// `edge_probability`, drawn from a ChaCha8 stream seeded with `seed`.
pub fn gen_random(n: usize, edge_probability: f64, seed: u64) -> Result<Digraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_digraph(&mut rng, n, edge_probability)
}

pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, edge_probability: f64) -> Result<Digraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(Error::InvalidParameter(format!("edge probability {edge_probability} not in [0, 1]")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    Digraph::from_edges(n, edges)
}

/// Labeled wrappers used by the generator registry.
pub fn cycle_instance(n: usize) -> Result<GadgetInstance> {
    let labels = vec![Label::Period(n as u64)];
    Ok(GadgetInstance::plain(gen_cycle(n)?, "cycle", format!("n={n}"), labels))
}

/// The exponent `(n-1)² + 1` is the classical value for this family.
pub fn wielandt_instance(n: usize) -> Result<GadgetInstance> {
    let e = ((n as u64).saturating_sub(1)).pow(2) + 1;
    let labels = vec![Label::Period(1), Label::Exponent(e)];
    Ok(GadgetInstance::plain(gen_wielandt(n)?, "wielandt", format!("n={n}"), labels))
}

pub fn random_instance(n: usize, edge_probability: f64, seed: u64) -> Result<GadgetInstance> {
    let g = gen_random(n, edge_probability, seed)?;
    Ok(GadgetInstance::plain(g, "random", format!("n={n} p={edge_probability} seed={seed}"), Vec::new()))
}

/// Random reachability instance pushed through normalization into the
/// period gadget.
pub fn random_period_gadget<R: Rng>(rng: &mut R, n: usize, edge_probability: f64) -> Result<GadgetInstance> {
    let (base, s, t) = random_st_instance(rng, n, edge_probability)?;
    let norm = normalize_streach(&base, s, t)?;
    let mut inst = gen_period_gadget(&norm.graph, norm.s, norm.t, norm.t_prime)?;
    inst.source = format!("random st-reachability n={n} p={edge_probability} s={s} t={t}");
    Ok(inst)
}

pub fn random_exponent_gadget<R: Rng>(rng: &mut R, n: usize, edge_probability: f64) -> Result<GadgetInstance> {
    let (base, s, t) = random_st_instance(rng, n, edge_probability)?;
    let norm = normalize_streach(&base, s, t)?;
    let mut inst = gen_exponent_gadget(&norm.graph, norm.s, norm.t, norm.t_prime)?;
    inst.source = format!("random st-reachability n={n} p={edge_probability} s={s} t={t}");
    Ok(inst)
}

/// Random path on `len ≥ 3` vertices (labels shuffled) with `s` and `t`
/// placed at distinct positions, `s` not first, neither of them last.
pub fn random_ord_gadget<R: Rng>(rng: &mut R, len: usize) -> Result<GadgetInstance> {
    let (pairs, s, t) = random_ord_instance(rng, len)?;
    gen_ord_gadget(&pairs, s, t)
}

/// Successor pairs of a path plus the chosen `s` and `t`.
pub type OrdInstance = (Vec<(usize, usize)>, usize, usize);

pub fn random_ord_instance<R: Rng>(rng: &mut R, len: usize) -> Result<OrdInstance> {
    if len < 3 {
        return Err(Error::InvalidParameter(format!("path needs at least 3 vertices, got {len}")));
    }
    let mut labels: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    let ps = rng.gen_range(1..len - 1);
    let pt = loop {
        let p = rng.gen_range(0..len - 1);
        if p != ps {
            break p;
        }
    };
    let mut pairs: Vec<(usize, usize)> = labels.windows(2).map(|w| (w[0], w[1])).collect();
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    Ok((pairs, labels[ps], labels[pt]))
}

pub fn random_st_instance<R: Rng>(rng: &mut R, n: usize, edge_probability: f64) -> Result<(Digraph, usize, usize)> {
    let g = random_digraph(rng, n, edge_probability)?;
    let s = rng.gen_range(0..n);
    let t = rng.gen_range(0..n);
    Ok((g, s, t))
}
