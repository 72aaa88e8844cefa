//! Vertex connectivity with separating-set witnesses.
//!
//! Minimum `u`-`v` separators come from max-flow on the split digraph: each
//! vertex `w` becomes `w_in -> w_out` with capacity 1, each edge becomes two
//! unbounded arcs `a_out -> b_in` and `b_out -> a_in`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutWitness {
    pub cut: VertexSet,
    /// Two vertices in different components of `G - cut`.
    pub separated: (Vertex, Vertex),
}

impl CutWitness {
    /// Re-checks the witness against `g`.
    pub fn separates(&self, g: &Graph) -> bool {
        let (a, b) = self.separated;
        if self.cut.contains(a) || self.cut.contains(b) || a >= g.order() || b >= g.order() {
            return false;
        }
        let Ok((rest, map)) = g.delete_vertices(&self.cut) else {
            return false;
        };
        let (Some(a), Some(b)) = (map.to_new(a), map.to_new(b)) else {
            return false;
        };
        !rest.components().iter().any(|c| c.contains(a) && c.contains(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub kappa: usize,
    pub witness: Option<CutWitness>,
}

const UNBOUNDED: u32 = u32::MAX;

struct Arc {
    to: usize,
    cap: u32,
    rev: usize,
}

struct FlowNet {
    arcs: Vec<Vec<Arc>>,
}

impl FlowNet {
    fn split(g: &Graph, s: Vertex, t: Vertex) -> Self {
        let mut net = FlowNet { arcs: (0..2 * g.order()).map(|_| Vec::new()).collect() };
        for w in 0..g.order() {
            let cap = if w == s || w == t { UNBOUNDED } else { 1 };
            net.add(2 * w, 2 * w + 1, cap);
        }
        for e in g.edges() {
            net.add(2 * e.u() + 1, 2 * e.v(), UNBOUNDED);
            net.add(2 * e.v() + 1, 2 * e.u(), UNBOUNDED);
        }
        net
    }

    fn add(&mut self, from: usize, to: usize, cap: u32) {
        let (rf, rt) = (self.arcs[to].len(), self.arcs[from].len());
        self.arcs[from].push(Arc { to, cap, rev: rf });
        self.arcs[to].push(Arc { to: from, cap: 0, rev: rt });
    }

    /// Residual BFS tree from `source`: `(node, arc index)` used to reach each node.
    fn bfs(&self, source: usize) -> Vec<Option<(usize, usize)>> {
        let mut pred = vec![None; self.arcs.len()];
        let mut seen = vec![false; self.arcs.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for (i, arc) in self.arcs[x].iter().enumerate() {
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    pred[arc.to] = Some((x, i));
                    queue.push_back(arc.to);
                }
            }
        }
        pred
    }

    /// Augments unit paths until none remain; every path carries one unit
    /// through some capacity-1 vertex arc.
    fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let mut flow = 0;
        loop {
            let pred = self.bfs(source);
            if pred[sink].is_none() {
                return flow;
            }
            let mut x = sink;
            while let Some((p, i)) = pred[x] {
                let rev = self.arcs[p][i].rev;
                if self.arcs[p][i].cap != UNBOUNDED {
                    self.arcs[p][i].cap -= 1;
                }
                if self.arcs[x][rev].cap != UNBOUNDED {
                    self.arcs[x][rev].cap += 1;
                }
                x = p;
            }
            flow += 1;
        }
    }
}

/// Minimum set of vertices other than `u` and `v` whose removal separates
/// them. The set returned is the one on the source side of the residual
/// network after max-flow, i.e. the separator closest to `u`.
pub fn min_vertex_cut(g: &Graph, u: Vertex, v: Vertex) -> Result<CutWitness> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v || g.has_edge(u, v) {
        return Err(Error::Inseparable { u, v });
    }
    let mut net = FlowNet::split(g, u, v);
    let flow = net.max_flow(2 * u + 1, 2 * v);
    let pred = net.bfs(2 * u + 1);
    let reach = |node: usize| node == 2 * u + 1 || pred[node].is_some();
    let cut: VertexSet = (0..g.order()).filter(|&w| reach(2 * w) && !reach(2 * w + 1)).collect();
    debug_assert_eq!(cut.len(), flow);
    Ok(CutWitness { cut, separated: (u, v) })
}

/// `κ(G)` with a minimum separating set when one exists.
///
/// Conventions: `κ(K_1) = 0`; a disconnected graph has `κ = 0`, witnessed by
/// the empty cut and the smallest vertices of its first two components;
/// `κ(K_n) = n - 1` with no witness. Otherwise `κ` is the minimum separator
/// over all non-adjacent pairs, and the witness is the lexicographically
/// least minimum cut among those found.
pub fn vertex_connectivity(g: &Graph) -> Result<Connectivity> {
    let n = g.order();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n == 1 {
        return Ok(Connectivity { kappa: 0, witness: None });
    }
    let parts = g.components();
    if parts.len() > 1 {
        let a = parts[0].smallest().unwrap_or(0);
        let b = parts[1].smallest().unwrap_or(0);
        let witness = CutWitness { cut: VertexSet::new(), separated: (a, b) };
        return Ok(Connectivity { kappa: 0, witness: Some(witness) });
    }
    let mut best: Option<CutWitness> = None;
    for a in 0..n {
        for b in a + 1..n {
            if g.has_edge(a, b) {
                continue;
            }
            let w = min_vertex_cut(g, a, b)?;
            let better = match &best {
                None => true,
                Some(cur) => (w.cut.len(), &w.cut) < (cur.cut.len(), &cur.cut),
            };
            if better {
                best = Some(w);
            }
        }
    }
    Ok(match best {
        Some(w) => Connectivity { kappa: w.cut.len(), witness: Some(w) },
        None => Connectivity { kappa: n - 1, witness: None },
    })
}

/// `n >= k + 1` and `κ(G) >= k`.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    if g.order() < k + 1 {
        return false;
    }
    vertex_connectivity(g).is_ok_and(|c| c.kappa >= k)
}
