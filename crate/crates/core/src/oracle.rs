//! Exhaustive reference computations.
//!
//! Nothing here calls into the matching, connectivity or extendibility
//! engines; every answer comes from enumerating vertex subsets or matchings
//! over `u64` vertex masks. They are exponential and limited to graphs with at
//! most 64 vertices, and are meant for desk-scale cross-checks.

use crate::graph::{Graph, Vertex, VertexSet};

fn masks(g: &Graph) -> Vec<u64> {
    assert!(g.order() <= 64, "oracles take at most 64 vertices");
    (0..g.order()).map(|v| g.row(v).first().copied().unwrap_or(0)).collect()
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Largest matching inside `alive`, found by branching on the lowest live
/// vertex: leave it unmatched, or match it to each live neighbor.
fn max_matching_in(adj: &[u64], alive: u64) -> usize {
    if alive.count_ones() < 2 {
        return 0;
    }
    let v = alive.trailing_zeros() as usize;
    let rest = alive & !(1 << v);
    let mut best = max_matching_in(adj, rest);
    let mut nbrs = adj[v] & rest;
    while nbrs != 0 {
        let w = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        best = best.max(1 + max_matching_in(adj, rest & !(1 << w)));
        if 2 * best >= alive.count_ones() as usize {
            break;
        }
    }
    best
}

fn has_perfect_in(adj: &[u64], alive: u64) -> bool {
    if alive == 0 {
        return true;
    }
    let v = alive.trailing_zeros() as usize;
    let rest = alive & !(1 << v);
    let mut nbrs = adj[v] & rest;
    while nbrs != 0 {
        let w = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        if has_perfect_in(adj, rest & !(1 << w)) {
            return true;
        }
    }
    false
}

pub fn matching_number(g: &Graph) -> usize {
    let adj = masks(g);
    max_matching_in(&adj, full(g.order()))
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    let adj = masks(g);
    has_perfect_in(&adj, full(g.order()))
}

/// Every matching of `g` with exactly `k` edges, as sorted `(u, v)` pairs with
/// `u < v`, found by checking all `k`-subsets of the edge set.
pub fn matchings_of_size(g: &Graph, k: usize) -> Vec<Vec<(Vertex, Vertex)>> {
    let edges: Vec<(Vertex, Vertex)> = (0..g.order())
        .flat_map(|u| (u + 1..g.order()).filter(move |&v| g.has_edge(u, v)).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(k);
    fn rec(
        edges: &[(Vertex, Vertex)],
        start: usize,
        k: usize,
        used: u64,
        pick: &mut Vec<(Vertex, Vertex)>,
        out: &mut Vec<Vec<(Vertex, Vertex)>>,
    ) {
        if pick.len() == k {
            out.push(pick.clone());
            return;
        }
        for i in start..edges.len() {
            let (u, v) = edges[i];
            let bits = (1u64 << u) | (1u64 << v);
            if used & bits == 0 {
                pick.push((u, v));
                rec(edges, i + 1, k, used | bits, pick, out);
                pick.pop();
            }
        }
    }
    rec(&edges, 0, k, 0, &mut pick, &mut out);
    out
}

fn connected_within(adj: &[u64], alive: u64) -> bool {
    if alive == 0 {
        return true;
    }
    let mut seen = alive & alive.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & alive & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == alive
}

fn same_component(adj: &[u64], alive: u64, a: Vertex, b: Vertex) -> bool {
    let mut seen = 1u64 << a;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & alive & !seen;
        seen |= new;
        frontier |= new;
    }
    seen >> b & 1 == 1
}

pub fn is_connected(g: &Graph) -> bool {
    let adj = masks(g);
    connected_within(&adj, full(g.order()))
}

/// k-extendibility straight from the four-condition definition, with the
/// `k = 0` convention (connected, at least 2 vertices, perfect matching).
pub fn is_k_extendible(g: &Graph, k: usize) -> bool {
    let n = g.order();
    if n < 2 * k + 2 || !is_connected(g) || !has_perfect_matching(g) {
        return false;
    }
    let adj = masks(g);
    matchings_of_size(g, k).iter().all(|m| {
        let used = m.iter().fold(0u64, |acc, &(u, v)| acc | 1 << u | 1 << v);
        has_perfect_in(&adj, full(n) & !used)
    })
}

/// Smallest vertex set whose removal leaves a disconnected graph, by trying
/// all subsets in order of size. `n - 1` when no such set exists (complete
/// graphs), `0` for disconnected graphs and for `K_1`.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.order();
    let adj = masks(g);
    if n <= 1 {
        return 0;
    }
    for size in 0..n.saturating_sub(1) {
        let mut found = false;
        for_each_subset(full(n), size, |cut| {
            let rest = full(n) & !cut;
            if rest.count_ones() >= 2 && !connected_within(&adj, rest) {
                found = true;
            }
            found
        });
        if found {
            return size;
        }
    }
    n - 1
}

/// Size of the smallest set avoiding `a` and `b` whose removal separates them.
/// `None` when `a` and `b` are adjacent or equal.
pub fn min_separator_size(g: &Graph, a: Vertex, b: Vertex) -> Option<usize> {
    if a == b || g.has_edge(a, b) {
        return None;
    }
    let n = g.order();
    let adj = masks(g);
    let others = full(n) & !(1 << a) & !(1 << b);
    for size in 0..=others.count_ones() as usize {
        let mut found = false;
        for_each_subset(others, size, |cut| {
            if !same_component(&adj, full(n) & !cut, a, b) {
                found = true;
            }
            found
        });
        if found {
            return Some(size);
        }
    }
    None
}

/// `max over S ⊆ X of |S| - |N(S)|` by enumerating all `2^|X|` subsets.
/// Returns the value and the first maximizing subset in increasing mask order.
pub fn deficiency(g: &Graph, x: &VertexSet) -> (usize, VertexSet) {
    let adj = masks(g);
    let xs: Vec<Vertex> = x.iter().collect();
    assert!(xs.len() <= 24, "subset oracle takes |X| <= 24");
    let mut best = (0usize, 0u64);
    for sel in 0u64..(1 << xs.len()) {
        let mut nbrs = 0u64;
        for (i, &v) in xs.iter().enumerate() {
            if sel >> i & 1 == 1 {
                nbrs |= adj[v];
            }
        }
        let surplus = sel.count_ones() as i64 - nbrs.count_ones() as i64;
        if surplus > best.0 as i64 {
            best = (surplus as usize, sel);
        }
    }
    let set = xs.iter().enumerate().filter(|(i, _)| best.1 >> i & 1 == 1).map(|(_, &v)| v);
    (best.0, set.collect())
}

/// Calls `f` on each subset of `pool` with `size` members until it returns true.
fn for_each_subset(pool: u64, size: usize, mut f: impl FnMut(u64) -> bool) {
    let members: Vec<u32> = (0..64).filter(|&i| pool >> i & 1 == 1).collect();
    if size > members.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let mask = idx.iter().fold(0u64, |acc, &i| acc | 1 << members[i]);
        if f(mask) {
            return;
        }
        // Next combination in lexicographic order.
        let m = members.len();
        let Some(i) = (0..size).rev().find(|&i| idx[i] < m - size + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
