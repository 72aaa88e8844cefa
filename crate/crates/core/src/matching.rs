//! Matchings in general and bipartite graphs.
//!
//! The general engine is Edmonds' blossom-shrinking augmenting-path search,
//! rooted at one free vertex at a time in ascending order. Bipartite graphs
//! also get a Hopcroft-Karp routine, which backs the König-Ore witness.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Edge, Graph, Vertex, VertexSet};

/// Pairwise vertex-disjoint edges, kept in ascending canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Edge>", into = "Vec<Edge>")]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching::default()
    }

    /// Sorts the edges and checks that no two share an endpoint.
    pub fn new(mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            for w in e.endpoints() {
                if !seen.insert(w) {
                    return Err(Error::InvalidMatching(format!("vertex {w} is covered twice")));
                }
            }
        }
        Ok(Matching { edges })
    }

    pub fn from_pairs<I: IntoIterator<Item = (Vertex, Vertex)>>(pairs: I) -> Result<Self> {
        let edges = pairs.into_iter().map(|(a, b)| Edge::new(a, b)).collect::<Result<Vec<_>>>()?;
        Matching::new(edges)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// `V(M)`: every endpoint of an edge of the matching.
    pub fn covered(&self) -> VertexSet {
        self.edges.iter().flat_map(|e| e.endpoints()).collect()
    }

    pub fn is_perfect_in(&self, g: &Graph) -> bool {
        2 * self.len() == g.order()
    }

    /// Checks every edge is an edge of `g`.
    pub fn validate_in(&self, g: &Graph) -> Result<()> {
        for e in &self.edges {
            g.check_vertex(e.v())?;
            if !g.has_edge(e.u(), e.v()) {
                return Err(Error::InvalidMatching(format!("{}-{} is not an edge", e.u(), e.v())));
            }
        }
        Ok(())
    }

    /// Mate of each vertex of an `n`-vertex host.
    pub fn mates(&self, n: usize) -> Vec<Option<Vertex>> {
        let mut mate = vec![None; n];
        for e in &self.edges {
            mate[e.u()] = Some(e.v());
            mate[e.v()] = Some(e.u());
        }
        mate
    }

    fn from_mates(mate: &[Option<Vertex>]) -> Self {
        let edges = mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| Edge::new(u, v)))
            .collect::<Result<Vec<_>>>()
            .unwrap_or_default();
        Matching { edges }
    }

    /// Renames vertices through `f`, which must be injective.
    pub fn map_vertices(&self, f: impl Fn(Vertex) -> Vertex) -> Matching {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge::new(f(e.u()), f(e.v())).unwrap_or(*e))
            .collect();
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn union(&self, other: &Matching) -> Result<Matching> {
        Matching::new(self.edges.iter().chain(&other.edges).copied().collect())
    }
}

impl TryFrom<Vec<Edge>> for Matching {
    type Error = Error;

    fn try_from(edges: Vec<Edge>) -> Result<Self> {
        Matching::new(edges)
    }
}

impl From<Matching> for Vec<Edge> {
    fn from(m: Matching) -> Self {
        m.edges
    }
}

/// A path whose edges alternate non-matching / matching, starting and ending
/// at vertices the reference matching leaves uncovered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlternatingPath {
    pub vertices: Vec<Vertex>,
}

impl AlternatingPath {
    pub fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Checks the path is `m`-augmenting in `g`.
    pub fn validate(&self, g: &Graph, m: &Matching) -> Result<()> {
        let bad = |msg: String| Err(Error::NotAugmenting(msg));
        let vs = &self.vertices;
        if vs.len() < 2 || !vs.len().is_multiple_of(2) {
            return bad(format!("{} vertices; need an even count of at least 2", vs.len()));
        }
        for &v in vs {
            g.check_vertex(v)?;
        }
        if VertexSet::from(vs.clone()).len() != vs.len() {
            return bad("repeated vertex".into());
        }
        let covered = m.covered();
        for end in [vs[0], vs[vs.len() - 1]] {
            if covered.contains(end) {
                return bad(format!("endpoint {end} is covered"));
            }
        }
        for (i, pair) in vs.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            if !g.has_edge(a, b) {
                return bad(format!("{a}-{b} is not an edge"));
            }
            let in_m = m.contains(&Edge::new(a, b)?);
            if in_m != (i % 2 == 1) {
                return bad(format!("edge {a}-{b} breaks alternation"));
            }
        }
        Ok(())
    }
}

/// `|S| - |N(S)|` maximized over `S ⊆ X`, with a set attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeficiencyWitness {
    pub value: usize,
    pub witness: VertexSet,
}

const NONE: usize = usize::MAX;

/// One blossom-shrinking search from `root`. Returns the augmenting path
/// root-first, or `None` when no augmenting path starts at `root`.
fn blossom_search(g: &Graph, mate: &[Option<Vertex>], root: Vertex) -> Option<Vec<Vertex>> {
    let n = g.order();
    let mut used = vec![false; n];
    let mut parent = vec![NONE; n];
    let mut base: Vec<Vertex> = (0..n).collect();
    let mut queue = VecDeque::from([root]);
    used[root] = true;

    let lca = |mut a: Vertex, mut b: Vertex, base: &[Vertex], parent: &[usize]| -> Vertex {
        let mut seen = vec![false; n];
        loop {
            a = base[a];
            seen[a] = true;
            match mate[a] {
                None => break,
                Some(m) => a = parent[m],
            }
        }
        loop {
            b = base[b];
            if seen[b] {
                return b;
            }
            b = parent[mate[b].unwrap_or(NONE)];
        }
    };

    // Marks the blossom vertices on the tree path from `v` up to `top`, and
    // re-points their parents so paths can be read back through the blossom.
    let mark_path = |mut v: Vertex,
                     top: Vertex,
                     mut child: Vertex,
                     base: &[Vertex],
                     parent: &mut [usize],
                     in_blossom: &mut [bool]| {
        while base[v] != top {
            let m = mate[v].unwrap_or(NONE);
            in_blossom[base[v]] = true;
            in_blossom[base[m]] = true;
            parent[v] = child;
            child = m;
            v = parent[m];
        }
    };

    while let Some(v) = queue.pop_front() {
        for to in g.neighbors(v) {
            if base[v] == base[to] || mate[v] == Some(to) {
                continue;
            }
            let outer = to == root || mate[to].is_some_and(|m| parent[m] != NONE);
            if outer {
                let top = lca(v, to, &base, &parent);
                let mut in_blossom = vec![false; n];
                mark_path(v, top, to, &base, &mut parent, &mut in_blossom);
                mark_path(to, top, v, &base, &mut parent, &mut in_blossom);
                for i in 0..n {
                    if in_blossom[base[i]] {
                        base[i] = top;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to] == NONE {
                parent[to] = v;
                match mate[to] {
                    None => {
                        let mut path = Vec::new();
                        let mut cur = to;
                        loop {
                            path.push(cur);
                            let p = parent[cur];
                            path.push(p);
                            match mate[p] {
                                Some(m) => cur = m,
                                None => break,
                            }
                        }
                        path.reverse();
                        return Some(path);
                    }
                    Some(m) => {
                        used[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
    }
    None
}

fn flip(mate: &mut [Option<Vertex>], path: &[Vertex]) {
    for pair in path.chunks(2) {
        mate[pair[0]] = Some(pair[1]);
        mate[pair[1]] = Some(pair[0]);
    }
}

fn checked_mates(g: &Graph, m: &Matching) -> Result<Vec<Option<Vertex>>> {
    m.validate_in(g)?;
    Ok(m.mates(g.order()))
}

/// An `m`-augmenting path, searched from uncovered roots in ascending order.
/// `None` exactly when `m` is maximum.
pub fn find_augmenting_path(g: &Graph, m: &Matching) -> Result<Option<AlternatingPath>> {
    let mate = checked_mates(g, m)?;
    Ok((0..g.order())
        .filter(|&r| mate[r].is_none())
        .find_map(|r| blossom_search(g, &mate, r))
        .map(|vertices| AlternatingPath { vertices }))
}

/// `(E(P) \ M) ∪ (M \ E(P))` for an augmenting path `P`.
pub fn augment(g: &Graph, m: &Matching, p: &AlternatingPath) -> Result<Matching> {
    m.validate_in(g)?;
    p.validate(g, m)?;
    let mut mate = m.mates(g.order());
    flip(&mut mate, &p.vertices);
    Ok(Matching::from_mates(&mate))
}

pub fn maximum_matching(g: &Graph) -> Matching {
    let mut mate = vec![None; g.order()];
    // A root with no augmenting path never gains one after later augmentations,
    // so each vertex is tried once.
    for root in 0..g.order() {
        if mate[root].is_none() {
            if let Some(path) = blossom_search(g, &mate, root) {
                flip(&mut mate, &path);
            }
        }
    }
    Matching::from_mates(&mate)
}

pub fn matching_number(g: &Graph) -> usize {
    maximum_matching(g).len()
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    g.order().is_multiple_of(2) && maximum_matching(g).is_perfect_in(g)
}

/// A perfect matching of `g` containing `m`, if any.
pub fn extends_to_perfect(g: &Graph, m: &Matching) -> Result<Option<Matching>> {
    m.validate_in(g)?;
    if !g.order().is_multiple_of(2) {
        return Ok(None);
    }
    let (rest, map) = g.delete_vertices(&m.covered())?;
    let completion = maximum_matching(&rest);
    if !completion.is_perfect_in(&rest) {
        return Ok(None);
    }
    m.union(&completion.map_vertices(|v| map.to_original(v))).map(Some)
}

/// All matchings with exactly `k` edges, in lexicographic order of their
/// canonical edge lists. Single consumer.
pub fn enumerate_matchings(g: &Graph, k: usize) -> Matchings {
    Matchings {
        edges: g.edges(),
        k,
        stack: Vec::with_capacity(k),
        covered: vec![false; g.order()],
        started: false,
        done: false,
    }
}

pub struct Matchings {
    edges: Vec<Edge>,
    k: usize,
    stack: Vec<usize>,
    covered: Vec<bool>,
    started: bool,
    done: bool,
}

impl Matchings {
    fn fits(&self, i: usize) -> bool {
        let e = self.edges[i];
        !self.covered[e.u()] && !self.covered[e.v()]
    }

    fn push(&mut self, i: usize) {
        let e = self.edges[i];
        self.covered[e.u()] = true;
        self.covered[e.v()] = true;
        self.stack.push(i);
    }

    fn pop(&mut self) -> Option<usize> {
        let i = self.stack.pop()?;
        let e = self.edges[i];
        self.covered[e.u()] = false;
        self.covered[e.v()] = false;
        Some(i)
    }

    /// Fills the stack up to `k` entries choosing indices `>= from` for the
    /// next slot, backtracking no further than the entry depth.
    fn descend(&mut self, mut from: usize) -> bool {
        let floor = self.stack.len();
        loop {
            if self.stack.len() == self.k {
                return true;
            }
            let need = self.k - self.stack.len();
            let last_start = self.edges.len().saturating_sub(need - 1);
            match (from..last_start).find(|&i| self.fits(i)) {
                Some(i) => {
                    self.push(i);
                    from = i + 1;
                }
                None => {
                    if self.stack.len() == floor {
                        return false;
                    }
                    from = self.pop().map_or(0, |j| j + 1);
                }
            }
        }
    }

    fn current(&self) -> Matching {
        Matching { edges: self.stack.iter().map(|&i| self.edges[i]).collect() }
    }
}

impl Iterator for Matchings {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.descend(0) {
                return Some(self.current());
            }
            self.done = true;
            return None;
        }
        while let Some(j) = self.pop() {
            if self.descend(j + 1) {
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}

/// Hopcroft-Karp over the sides of `bp`. Agrees in size with
/// [`maximum_matching`]; usually a different matching.
pub fn bipartite_maximum_matching(g: &Graph, bp: &Bipartition) -> Result<Matching> {
    bp.validate(g)?;
    let n = g.order();
    let xs: Vec<Vertex> = bp.x.iter().collect();
    let mut mate: Vec<Option<Vertex>> = vec![None; n];
    let mut dist = vec![usize::MAX; n];

    fn dfs(
        g: &Graph,
        x: Vertex,
        mate: &mut [Option<Vertex>],
        dist: &mut [usize],
    ) -> bool {
        let neighbors: Vec<Vertex> = g.neighbors(x).collect();
        for y in neighbors {
            let next_ok = match mate[y] {
                None => true,
                Some(x2) => dist[x2] == dist[x] + 1 && dfs(g, x2, mate, dist),
            };
            if next_ok {
                mate[x] = Some(y);
                mate[y] = Some(x);
                return true;
            }
        }
        dist[x] = usize::MAX;
        false
    }

    loop {
        let mut queue = VecDeque::new();
        for &x in &xs {
            if mate[x].is_none() {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for y in g.neighbors(x) {
                match mate[y] {
                    None => found = true,
                    Some(x2) if dist[x2] == usize::MAX => {
                        dist[x2] = dist[x] + 1;
                        queue.push_back(x2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        for &x in &xs {
            if mate[x].is_none() {
                dfs(g, x, &mut mate, &mut dist);
            }
        }
    }
    Ok(Matching::from_mates(&mate))
}

/// Maximum of `|S| - |N(S)|` over `S ⊆ X` with a witness, in polynomial time.
///
/// `S` is the set of X-vertices reachable by alternating paths from the
/// X-vertices a maximum matching leaves free. Every Y-vertex reached is
/// matched back into `S`, so `|S| - |N(S)|` equals the number of free
/// X-vertices, which is `|X| - α'(G)`. When that number is zero, `S` is empty.
pub fn koenig_ore_deficiency(g: &Graph, bp: &Bipartition) -> Result<DeficiencyWitness> {
    let m = bipartite_maximum_matching(g, bp)?;
    let mate = m.mates(g.order());
    let mut reached = vec![false; g.order()];
    let mut queue: VecDeque<Vertex> = bp.x.iter().filter(|&x| mate[x].is_none()).collect();
    for &x in &queue {
        reached[x] = true;
    }
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if reached[y] {
                continue;
            }
            reached[y] = true;
            if let Some(x2) = mate[y] {
                if !reached[x2] {
                    reached[x2] = true;
                    queue.push_back(x2);
                }
            }
        }
    }
    let witness: VertexSet = bp.x.iter().filter(|&x| reached[x]).collect();
    Ok(DeficiencyWitness { value: bp.x.len() - m.len(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(usize, usize)]) -> Matching {
        Matching::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn augmenting_path_on_p4() {
        let p4 = Graph::path(4);
        let path = find_augmenting_path(&p4, &m(&[(1, 2)])).unwrap().unwrap();
        assert_eq!(path.vertices, vec![0, 1, 2, 3]);
        let bigger = augment(&p4, &m(&[(1, 2)]), &path).unwrap();
        assert_eq!(bigger, m(&[(0, 1), (2, 3)]));
        assert_eq!(find_augmenting_path(&Graph::cycle(4), &m(&[(0, 1), (2, 3)])).unwrap(), None);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let p4 = Graph::path(4);
        assert!(Matching::from_pairs([(0, 1), (1, 2)]).is_err());
        assert!(matches!(
            find_augmenting_path(&p4, &m(&[(0, 2)])),
            Err(Error::InvalidMatching(_))
        ));
        let not_aug = AlternatingPath { vertices: vec![0, 1] };
        assert!(matches!(augment(&p4, &m(&[(1, 2)]), &not_aug), Err(Error::NotAugmenting(_))));
        assert!(matches!(extends_to_perfect(&p4, &m(&[(0, 3)])), Err(Error::InvalidMatching(_))));
    }

    #[test]
    fn blossom_needs_shrinking() {
        // Triangle 0-1-2 with pendants 3 (on 2) and 4 (on 0); matching {12}
        // forces the search from 3 through the odd cycle.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (2, 3), (0, 4), (1, 5)]).unwrap();
        assert_eq!(maximum_matching(&g).len(), 3);
        let start = m(&[(0, 1)]);
        let p = find_augmenting_path(&g, &start).unwrap().unwrap();
        p.validate(&g, &start).unwrap();
    }

    #[test]
    fn maximum_matching_sizes() {
        assert_eq!(matching_number(&Graph::cycle(4)), 2);
        assert_eq!(matching_number(&Graph::complete_bipartite(1, 3)), 1);
        assert!(has_perfect_matching(&Graph::complete(2)));
        assert!(!has_perfect_matching(&Graph::path(3)));
        assert!(has_perfect_matching(&Graph::cycle(6)));
        assert_eq!(matching_number(&Graph::empty(0)), 0);
    }

    #[test]
    fn extension_examples() {
        let c4 = Graph::cycle(4);
        assert_eq!(extends_to_perfect(&c4, &m(&[(0, 1)])).unwrap(), Some(m(&[(0, 1), (2, 3)])));
        assert_eq!(extends_to_perfect(&Graph::path(4), &m(&[(1, 2)])).unwrap(), None);
        let pm = extends_to_perfect(&Graph::cycle(6), &Matching::empty()).unwrap().unwrap();
        assert_eq!(pm.len(), 3);
    }

    #[test]
    fn enumeration_examples() {
        let c4 = Graph::cycle(4);
        assert_eq!(enumerate_matchings(&c4, 1).count(), 4);
        let twos: Vec<_> = enumerate_matchings(&c4, 2).collect();
        assert_eq!(twos, vec![m(&[(0, 1), (2, 3)]), m(&[(0, 3), (1, 2)])]);
        assert_eq!(enumerate_matchings(&Graph::complete_bipartite(3, 3), 2).count(), 18);
        assert_eq!(enumerate_matchings(&c4, 0).collect::<Vec<_>>(), vec![Matching::empty()]);
        assert_eq!(enumerate_matchings(&c4, 3).count(), 0);
        assert_eq!(enumerate_matchings(&Graph::empty(0), 1).count(), 0);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all: Vec<_> = enumerate_matchings(&Graph::complete(6), 2).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        // 15 edges, each disjoint from 6 others: 15 * 6 / 2.
        assert_eq!(all.len(), 45);
    }

    #[test]
    fn deficiency_on_stars() {
        let star = Graph::complete_bipartite(1, 3);
        let center = Bipartition::new([0].into(), [1, 2, 3].into());
        let d = koenig_ore_deficiency(&star, &center).unwrap();
        assert_eq!(d, DeficiencyWitness { value: 0, witness: VertexSet::new() });
        let leaves = Bipartition::new([1, 2, 3].into(), [0].into());
        let d = koenig_ore_deficiency(&star, &leaves).unwrap();
        assert_eq!(d, DeficiencyWitness { value: 2, witness: [1, 2, 3].into() });
    }

    #[test]
    fn hopcroft_karp_matches_blossom_size() {
        let g = Graph::complete_bipartite(3, 4);
        let bp = g.bipartition().unwrap();
        assert_eq!(bipartite_maximum_matching(&g, &bp).unwrap().len(), 3);
        let bad = Bipartition::new([0, 1].into(), [2, 3, 4, 5, 6].into());
        assert!(bipartite_maximum_matching(&g, &bad).is_err());
    }
}
