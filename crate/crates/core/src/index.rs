//! Index of convergence and exponent of primitivity.
//!
//! A length `K` lies below the index exactly when some pair `(s, t)` has a
//! length-`K` path but no paths of length `K + iP` for large `i`, or the
//! other way round (`P` is the global period). Eventual existence of such
//! paths is decided per strongly connected component `C` of period `p`: it
//! holds iff some `(s, t)`-path through `C` has length `≡ K (mod p)`, which
//! is plain reachability in `V × Z_p × {outside C yet, touched C}`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::arith::PeriodResult;
use crate::boolmatrix::{adjacency, BoolMatrix, PowerSignature};
use crate::digraph::{is_strongly_connected, scc_decompose, Digraph, SccDecomposition};
use crate::error::{Error, Result};
use crate::period::{period_general, period_scc};

/// Does an `(s, t)`-path through `component` have length `≡ target (mod period)`?
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueQuery {
    pub s: usize,
    pub t: usize,
    pub target: u64,
    /// Index into [`scc_decompose`] output.
    pub component: usize,
    /// Period of the component.
    pub period: u64,
    /// Period of the whole digraph; a multiple of `period`.
    pub global_period: PeriodResult,
}

impl ResidueQuery {
    /// Fills in the component and global periods from the graph.
    pub fn new(g: &Digraph, s: usize, t: usize, target: u64, component: usize) -> Result<Self> {
        for v in [s, t] {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
        }
        let scc = scc_decompose(g);
        if component >= scc.len() {
            return Err(Error::InvalidParameter(format!("no component {component}")));
        }
        if !scc.has_cycle[component] {
            return Err(Error::Acyclic);
        }
        let period = period_scc(&g.induced(&scc.components[component]))?;
        Ok(ResidueQuery { s, t, target, component, period, global_period: period_general(g) })
    }
}

/// `true` iff `A^len` has a 1 at `(s, t)`; length 0 means `s = t`.
pub fn has_path_of_length(g: &Digraph, s: usize, t: usize, len: u64) -> bool {
    frontier_after(g, s, len)[t]
}

/// Vertices at the end of some length-`len` walk from `s`.
fn frontier_after(g: &Digraph, s: usize, len: u64) -> Vec<bool> {
    let n = g.n();
    let mut cur = vec![false; n];
    cur[s] = true;
    for _ in 0..len {
        let mut next = vec![false; n];
        for u in (0..n).filter(|&u| cur[u]) {
            for &v in g.successors(u) {
                next[v] = true;
            }
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Breadth-first search over `(vertex, length mod p, touched C)` from `s`.
struct ProductSearch {
    period: usize,
    parent: Vec<Option<usize>>,
    seen: Vec<bool>,
}

impl ProductSearch {
    fn state(&self, u: usize, r: usize, touched: bool) -> usize {
        (u * self.period + r) * 2 + usize::from(touched)
    }

    fn run(g: &Digraph, in_component: &[bool], period: usize, s: usize) -> Self {
        let size = g.n() * period * 2;
        let mut search = ProductSearch { period, parent: vec![None; size], seen: vec![false; size] };
        let start = search.state(s, 0, in_component[s]);
        search.seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let touched = x % 2 == 1;
            let u = x / 2 / period;
            let r = x / 2 % period;
            for &v in g.successors(u) {
                let y = search.state(v, (r + 1) % period, touched || in_component[v]);
                if !search.seen[y] {
                    search.seen[y] = true;
                    search.parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        search
    }

    fn hits(&self, t: usize, residue: usize) -> bool {
        self.seen[self.state(t, residue, true)]
    }

    fn path_to(&self, t: usize, residue: usize) -> Option<Vec<usize>> {
        let mut x = self.state(t, residue, true);
        if !self.seen[x] {
            return None;
        }
        let mut path = vec![x / 2 / self.period];
        while let Some(p) = self.parent[x] {
            x = p;
            path.push(x / 2 / self.period);
        }
        path.reverse();
        Some(path)
    }
}

fn membership(scc: &SccDecomposition, component: usize) -> Vec<bool> {
    scc.component_id.iter().map(|&c| c == component).collect()
}

pub fn residue_path_exists(g: &Digraph, q: &ResidueQuery) -> bool {
    residue_witness(g, q).is_some()
}

/// A shortest `(s, t)`-path through the query component whose length is
/// `≡ target (mod period)`, as its vertex sequence. It visits every product
/// state at most once, so its length is below `2·n·period`.
pub fn residue_witness(g: &Digraph, q: &ResidueQuery) -> Option<Vec<usize>> {
    let scc = scc_decompose(g);
    let in_component = membership(&scc, q.component);
    let p = q.period as usize;
    let search = ProductSearch::run(g, &in_component, p, q.s);
    search.path_to(q.t, (q.target % q.period) as usize)
}

/// Eventual-path tables for one digraph.
///
/// For every cyclic component of period `p` and every residue `r < p`,
/// `by_residue[r]` has a 1 at `(s, t)` iff some `(s, t)`-path through the
/// component has length `≡ r (mod p)`.
struct EventualPaths {
    n: usize,
    components: Vec<(u64, Vec<BoolMatrix>)>,
}

impl EventualPaths {
    fn new(g: &Digraph) -> Self {
        let n = g.n();
        let scc = scc_decompose(g);
        let components = scc
            .cyclic()
            .map(|c| {
                let p = period_scc(&g.induced(&scc.components[c])).expect("cyclic component") as usize;
                let inside = membership(&scc, c);
                let mut by_residue = vec![BoolMatrix::zeros(n); p];
                for s in 0..n {
                    let search = ProductSearch::run(g, &inside, p, s);
                    for (r, m) in by_residue.iter_mut().enumerate() {
                        for t in (0..n).filter(|&t| search.hits(t, r)) {
                            m.set(s, t, true);
                        }
                    }
                }
                (p as u64, by_residue)
            })
            .collect();
        EventualPaths { n, components }
    }

    /// Pairs with an `(s, t)`-path of length `len + iP` for all large `i`.
    fn expected(&self, len: u64) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(self.n);
        for (p, by_residue) in &self.components {
            out.or_assign(&by_residue[(len % p) as usize]);
        }
        out
    }

    /// `power` is `A^len`; `len` is below the index iff it differs from the
    /// eventual pattern in some entry, in either direction.
    fn below(&self, power: &BoolMatrix, len: u64) -> bool {
        *power != self.expected(len)
    }
}

/// `A^len` by frontier propagation from every vertex.
fn power_by_frontiers(g: &Digraph, len: u64) -> BoolMatrix {
    let mut m = BoolMatrix::zeros(g.n());
    for s in 0..g.n() {
        for (t, _) in frontier_after(g, s, len).into_iter().enumerate().filter(|(_, b)| *b) {
            m.set(s, t, true);
        }
    }
    m
}

/// Whether `len` is strictly smaller than the index of convergence.
pub fn k_below_index(g: &Digraph, len: u64) -> bool {
    EventualPaths::new(g).below(&power_by_frontiers(g, len), len)
}

/// Index and period from the structural engines.
pub fn index_of_convergence(g: &Digraph) -> PowerSignature {
    let period = period_general(g);
    let eventual = EventualPaths::new(g);
    let a = adjacency(g);
    let mut power = BoolMatrix::identity(g.n());
    let horizon = (g.n() * g.n()) as u64;
    for len in 0..=horizon {
        if !eventual.below(&power, len) {
            return PowerSignature { index: len, period };
        }
        power = power.mul(&a).expect("same dimension");
    }
    unreachable!("index of convergence exceeds n^2")
}

/// Exponent of a primitive digraph, i.e. its index of convergence.
pub fn exponent(g: &Digraph) -> Result<u64> {
    if !is_strongly_connected(g) {
        return Err(Error::NotStronglyConnected);
    }
    let p = period_scc(g)?;
    if p != 1 {
        return Err(Error::PeriodNotOne(p.to_string()));
    }
    Ok(index_of_convergence(g).index)
}
