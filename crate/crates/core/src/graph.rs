//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Adjacency is a symmetric bit matrix. Graphs never change after
//! construction; deletion and induced subgraphs build new graphs and return a
//! [`Relabel`] so witnesses can be reported in the caller's labels.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An undirected edge stored as `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Builds the canonical edge between `a` and `b`. Fails on a self-loop.
    pub fn new(a: Vertex, b: Vertex) -> Result<Self> {
        if a == b {
            return Err(Error::NotAnEdge { u: a, v: b });
        }
        Ok(Edge { u: a.min(b), v: a.max(b) })
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn endpoints(&self) -> [Vertex; 2] {
        [self.u, self.v]
    }

    pub fn touches(&self, w: Vertex) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint that is not `w`, if `w` is an endpoint.
    pub fn other(&self, w: Vertex) -> Option<Vertex> {
        if w == self.u {
            Some(self.v)
        } else if w == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;

    fn try_from(pair: [usize; 2]) -> Result<Self> {
        Edge::new(pair[0], pair[1])
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.u, self.v)
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>")]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn largest(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn smallest(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub(crate) fn check_range(&self, n: usize) -> Result<()> {
        match self.largest() {
            Some(v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(mut members: Vec<Vertex>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(members: [Vertex; N]) -> Self {
        VertexSet::from(members.to_vec())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Sides `(X, Y)` of a bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub x: VertexSet,
    pub y: VertexSet,
}

impl Bipartition {
    pub fn new(x: VertexSet, y: VertexSet) -> Self {
        Bipartition { x, y }
    }

    pub fn is_balanced(&self) -> bool {
        self.x.len() == self.y.len()
    }

    /// Checks the sides partition `V(g)` and that neither side contains an edge.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.x.check_range(g.order())?;
        self.y.check_range(g.order())?;
        if self.x.len() + self.y.len() != g.order() || !self.x.intersection(&self.y).is_empty() {
            return Err(Error::InvalidBipartition(format!(
                "sides {} and {} do not partition {} vertices",
                self.x,
                self.y,
                g.order()
            )));
        }
        for side in [&self.x, &self.y] {
            for (i, a) in side.iter().enumerate() {
                for b in side.iter().skip(i + 1) {
                    if g.has_edge(a, b) {
                        return Err(Error::InvalidBipartition(format!(
                            "edge {a}-{b} lies inside one side"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Odd cycle returned when a graph has no bipartition. Starts at its smallest
/// vertex and continues toward the smaller of that vertex's two cycle neighbors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddCycle(pub Vec<Vertex>);

/// Vertex correspondence between a graph and a subgraph built from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabel {
    new_to_old: Vec<Vertex>,
    old_to_new: Vec<Option<Vertex>>,
}

impl Relabel {
    pub fn identity(n: usize) -> Self {
        Relabel { new_to_old: (0..n).collect(), old_to_new: (0..n).map(Some).collect() }
    }

    pub fn to_original(&self, v: Vertex) -> Vertex {
        self.new_to_old[v]
    }

    pub fn to_new(&self, v: Vertex) -> Option<Vertex> {
        self.old_to_new.get(v).copied().flatten()
    }

    pub fn new_to_old(&self) -> &[Vertex] {
        &self.new_to_old
    }

    /// Maps `self` (inner: mid -> new) after `outer` (old -> mid) into old -> new.
    pub fn compose(outer: &Relabel, inner: &Relabel) -> Relabel {
        let new_to_old: Vec<Vertex> =
            inner.new_to_old.iter().map(|&mid| outer.new_to_old[mid]).collect();
        let mut old_to_new = vec![None; outer.old_to_new.len()];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        Relabel { new_to_old, old_to_new }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges()).finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph { n, words, bits: vec![0; n * words] }
    }

    /// Builds a graph from an edge list, collapsing duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            for w in [a, b] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if a == b {
                return Err(Error::NotAnEdge { u: a, v: b });
            }
            g.set(a, b);
        }
        Ok(g)
    }

    pub(crate) fn set(&mut self, a: Vertex, b: Vertex) {
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
        self.bits[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.set(a, b);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for a in 0..n {
                g.set(a, (a + 1) % n);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for a in 1..n {
            g.set(a - 1, a);
        }
        g
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for x in 0..a {
            for y in a..a + b {
                g.set(x, y);
            }
        }
        g
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a < self.n && b < self.n && self.row(a)[b / 64] >> (b % 64) & 1 == 1
    }

    /// Adjacency row of `v` as a bitset of `ceil(n / 64)` words.
    pub fn row(&self, v: Vertex) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &word)| BitIter(word).map(move |b| i * 64 + b))
    }

    /// Edges in ascending canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.n)
            .flat_map(|u| self.neighbors(u).filter(move |&v| v > u).map(move |v| Edge { u, v }))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet((0..self.n).collect())
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// `N_H(S)` where `H = G[within]`, or `H = G` when `within` is `None`.
    /// The result may intersect `s`.
    pub fn neighborhood(&self, s: &VertexSet, within: Option<&VertexSet>) -> Result<VertexSet> {
        s.check_range(self.n)?;
        if let Some(w) = within {
            w.check_range(self.n)?;
        }
        let mut acc = vec![0u64; self.words];
        for v in s.iter() {
            if within.is_some_and(|w| !w.contains(v)) {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(self.row(v)) {
                *a |= b;
            }
        }
        Ok(acc
            .iter()
            .enumerate()
            .flat_map(|(i, &word)| BitIter(word).map(move |b| i * 64 + b))
            .filter(|&v| within.is_none_or(|w| w.contains(v)))
            .collect())
    }

    pub fn min_degree(&self) -> Result<usize> {
        (0..self.n).map(|v| self.degree(v)).min().ok_or(Error::EmptyGraph)
    }

    /// `G[keep]`, relabeled densely in ascending order of old ids.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Graph, Relabel)> {
        keep.check_range(self.n)?;
        let new_to_old = keep.as_slice().to_vec();
        let mut old_to_new = vec![None; self.n];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let mut h = Graph::empty(new_to_old.len());
        for (a, &old_a) in new_to_old.iter().enumerate() {
            for old_b in self.neighbors(old_a) {
                if let Some(b) = old_to_new[old_b] {
                    if a < b {
                        h.set(a, b);
                    }
                }
            }
        }
        Ok((h, Relabel { new_to_old, old_to_new }))
    }

    /// `G - S`, relabeled densely.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<(Graph, Relabel)> {
        s.check_range(self.n)?;
        self.induced_subgraph(&self.vertices().difference(s))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut parts = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut part = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        part.push(w);
                        queue.push_back(w);
                    }
                }
            }
            parts.push(VertexSet::from(part));
        }
        parts
    }

    /// Connected in the usual sense; the null graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Two-coloring by BFS from the smallest vertex of each component, whose
    /// side becomes `X`. Returns an odd cycle when none exists.
    pub fn bipartition(&self) -> std::result::Result<Bipartition, OddCycle> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut depth = vec![0usize; self.n];
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    match color[w] {
                        None => {
                            color[w] = color[v].map(|c| !c);
                            parent[w] = v;
                            depth[w] = depth[v] + 1;
                            queue.push_back(w);
                        }
                        Some(c) if Some(c) == color[v] => {
                            return Err(odd_cycle(v, w, &parent, &depth));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let (x, y): (Vec<_>, Vec<_>) = (0..self.n).partition(|&v| color[v] == Some(false));
        Ok(Bipartition { x: VertexSet(x), y: VertexSet(y) })
    }
}

/// Closes the BFS-tree paths from `a` and `b` (same layer, adjacent) into a
/// cycle, then rotates it into canonical form.
fn odd_cycle(a: Vertex, b: Vertex, parent: &[usize], depth: &[usize]) -> OddCycle {
    let (mut pa, mut pb) = (vec![a], vec![b]);
    let (mut x, mut y) = (a, b);
    while depth[x] > depth[y] {
        x = parent[x];
        pa.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y];
        pb.push(y);
    }
    while x != y {
        x = parent[x];
        y = parent[y];
        pa.push(x);
        pb.push(y);
    }
    pb.pop();
    pb.reverse();
    // pa runs a -> apex, pb runs (below apex) -> b, and b is adjacent to a.
    let mut cycle = pa;
    cycle.extend(pb);
    let len = cycle.len();
    let start = (0..len).min_by_key(|&i| cycle[i]).unwrap_or(0);
    let mut rotated: Vec<Vertex> = (0..len).map(|i| cycle[(start + i) % len]).collect();
    if len > 2 && rotated[len - 1] < rotated[1] {
        rotated[1..].reverse();
    }
    OddCycle(rotated)
}

/// Ascending set-bit positions of a word.
pub(crate) struct BitIter(pub(crate) u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}
