//! Structural period computation through residue-lifted undirected graphs.
//!
//! For a strongly connected digraph and a modulus `k`, every directed edge
//! `(u, v)` joins `(u, i)` and `(v, i + 1 mod k)` in an undirected graph on
//! `V × Z_k`. The modulus divides the period exactly when `(v, 0)` cannot
//! reach any `(v, i)` with `i ≠ 0`, and in that case the residue at which
//! each vertex is reached is a consistent `k`-coloring of the digraph.

use std::collections::VecDeque;

use serde::Serialize;

use crate::arith::{lcm_list, PeriodResult};
use crate::digraph::{is_strongly_connected, scc_decompose, Digraph};
use crate::error::{Error, Result};

/// Orientation of the residue step along a directed edge.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LiftRule {
    /// `(u, i)` joined to `(v, i + 1)` for every edge `(u, v)`.
    #[default]
    Forward,
    /// `(u, i)` joined to `(v, i - 1)`; a deliberately wrong rule used to check that
    /// the self-check notices broken lifts.
    Reversed,
}

/// Undirected graph on `V × Z_k`; the pair `(u, i)` is encoded as `u·k + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedGraph {
    base_n: usize,
    k: usize,
    adj: Vec<Vec<usize>>,
}

impl LiftedGraph {
    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn encode(&self, u: usize, i: usize) -> usize {
        u * self.k + i
    }

    pub fn decode(&self, x: usize) -> (usize, usize) {
        (x / self.k, x % self.k)
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x].binary_search(&y).is_ok()
    }

    /// Breadth-first reachability from `start`.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Connected-component label of every lifted vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.adj.len()];
        let mut next = 0;
        for start in 0..self.adj.len() {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

pub fn lift(g: &Digraph, k: usize) -> Result<LiftedGraph> {
    lift_with_rule(g, k, LiftRule::Forward)
}

#[doc(hidden)]
pub fn lift_with_rule(g: &Digraph, k: usize, rule: LiftRule) -> Result<LiftedGraph> {
    if k == 0 {
        return Err(Error::InvalidModulus(k));
    }
    let mut adj = vec![Vec::new(); g.n() * k];
    for (u, v) in g.edges() {
        for i in 0..k {
            let j = match rule {
                LiftRule::Forward => (i + 1) % k,
                LiftRule::Reversed => (i + k - 1) % k,
            };
            let (a, b) = (u * k + i, v * k + j);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    Ok(LiftedGraph { base_n: g.n(), k, adj })
}

/// A labeling of vertices by residues mod `k` under which every edge steps
/// from residue `r` to `r + 1 mod k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistentPartition {
    pub k: usize,
    pub class_of: Vec<usize>,
}

impl ConsistentPartition {
    /// Vertex sets `S_0, …, S_{k-1}`.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.k];
        for (u, &c) in self.class_of.iter().enumerate() {
            classes[c].push(u);
        }
        classes
    }
}

fn check_vertex(g: &Digraph, v: usize) -> Result<()> {
    if v < g.n() {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, n: g.n() })
    }
}

/// Residue classes read off the lift from `(v, 0)`, or `None` when some
/// `(v, i)` with `i ≠ 0` is reachable. Vertices not reached keep `None`.
///
/// The lift is explored implicitly: the neighbours of `(u, i)` are
/// `(w, i + 1)` for successors `w` and `(w, i - 1)` for predecessors.
#[doc(hidden)]
pub fn lifted_classes(g: &Digraph, k: usize, v: usize, rule: LiftRule) -> Result<Option<Vec<Option<usize>>>> {
    check_vertex(g, v)?;
    if k == 0 {
        return Err(Error::InvalidModulus(k));
    }
    let (fwd, back) = match rule {
        LiftRule::Forward => (1, k - 1),
        LiftRule::Reversed => (k - 1, 1),
    };
    let pred = g.predecessors();
    let mut class_of: Vec<Option<usize>> = vec![None; g.n()];
    let mut seen = vec![false; g.n() * k];
    seen[v * k] = true;
    class_of[v] = Some(0);
    let mut queue = VecDeque::from([(v, 0usize)]);
    while let Some((u, i)) = queue.pop_front() {
        let forward = g.successors(u).iter().map(|&w| (w, (i + fwd) % k));
        let backward = pred[u].iter().map(|&w| (w, (i + back) % k));
        for (w, j) in forward.chain(backward) {
            if seen[w * k + j] {
                continue;
            }
            if w == v {
                // j != 0 here, since (v, 0) was seen first
                return Ok(None);
            }
            seen[w * k + j] = true;
            class_of[w].get_or_insert(j);
            queue.push_back((w, j));
        }
    }
    Ok(Some(class_of))
}

/// Length of a shortest cycle through `v`, if any.
fn shortest_cycle_through(g: &Digraph, v: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &w in g.successors(u) {
            if w == v {
                return Some(dist[u] + 1);
            }
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Whether `k` divides the period of the strongly connected digraph `g`,
/// decided by undirected reachability from `(v, 0)` in the lift.
pub fn divides_period(g: &Digraph, k: usize, v: usize) -> Result<bool> {
    if !is_strongly_connected(g) {
        return Err(Error::NotStronglyConnected);
    }
    Ok(lifted_classes(g, k, v, LiftRule::Forward)?.is_some())
}

/// Period of a strongly connected digraph: the largest `k ≤ n` that divides it.
///
/// The period divides the length `c ≤ n` of any cycle, so only divisors of a
/// shortest cycle through vertex 0 are tested, from the largest down.
pub fn period_scc(g: &Digraph) -> Result<u64> {
    if !is_strongly_connected(g) {
        return Err(Error::NotStronglyConnected);
    }
    let c = shortest_cycle_through(g, 0).ok_or(Error::Acyclic)?;
    let best = (1..=c)
        .rev()
        .filter(|k| c % k == 0)
        .find(|&k| matches!(lifted_classes(g, k, 0, LiftRule::Forward), Ok(Some(_))))
        .expect("k = 1 always divides");
    Ok(best as u64)
}

/// The `k`-consistent partition anchored at vertex 0, if `k` divides the period.
pub fn consistent_partition(g: &Digraph, k: usize) -> Result<Option<ConsistentPartition>> {
    if !is_strongly_connected(g) {
        return Err(Error::NotStronglyConnected);
    }
    let Some(classes) = lifted_classes(g, k, 0, LiftRule::Forward)? else {
        return Ok(None);
    };
    // strongly connected, so the lift reaches some copy of every vertex
    let class_of = classes.into_iter().map(|c| c.expect("vertex reached")).collect();
    Ok(Some(ConsistentPartition { k, class_of }))
}

pub fn verify_partition(g: &Digraph, part: &ConsistentPartition) -> bool {
    part.k >= 1
        && part.class_of.len() == g.n()
        && part.class_of.iter().all(|&c| c < part.k)
        && g.edges().all(|(u, v)| part.class_of[v] == (part.class_of[u] + 1) % part.k)
}

/// Period of every strongly connected component, `None` for acyclic ones.
pub fn component_periods(g: &Digraph) -> Vec<Option<u64>> {
    let scc = scc_decompose(g);
    (0..scc.len())
        .map(|c| {
            scc.has_cycle[c]
                .then(|| period_scc(&g.induced(&scc.components[c])).expect("cyclic strongly connected component"))
        })
        .collect()
}

/// lcm of the periods of the components that contain a cycle.
pub fn period_general(g: &Digraph) -> PeriodResult {
    let periods: Vec<u64> = component_periods(g).into_iter().flatten().collect();
    lcm_list(&periods).expect("periods are positive")
}

pub fn is_primitive(g: &Digraph) -> bool {
    is_strongly_connected(g) && matches!(period_scc(g), Ok(1))
}
