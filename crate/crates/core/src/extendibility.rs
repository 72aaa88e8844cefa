//! k-extendibility: the definitional checker, the Hall-surplus test for
//! bipartite graphs, peeling, and the extendibility number.
//!
//! A graph is k-extendible when it has at least `2k + 2` vertices, is
//! connected, has a perfect matching, and every matching with `k` edges lies
//! in some perfect matching. For `k = 0` the last condition is vacuous, so
//! 0-extendible means connected with at least two vertices and a perfect
//! matching.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Edge, Graph, Relabel, VertexSet};
use crate::matching::{self, Matching};
use crate::oracle;

/// Largest `|X|` the exhaustive Hall-surplus scan accepts.
pub const HALL_MAX_SIDE: usize = 20;

/// Number of extended perfect matchings attached to a positive certificate.
pub const EXHIBIT_LIMIT: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

/// Why a graph fails to be k-extendible. Conditions are checked in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    SizeTooSmall,
    Disconnected,
    NoPerfectMatching,
    BlockedMatching,
}

/// A size-k matching together with a perfect matching containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub matching: Matching,
    pub perfect: Matching,
}

/// A set `A ⊆ X` with `|N(A)| < |A| + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallViolator {
    pub set: VertexSet,
    pub neighborhood_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum HallOutcome {
    Satisfied,
    Violated(HallViolator),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendibilityCertificate {
    pub k: usize,
    pub verdict: Verdict,
    pub reason: Option<Reason>,
    /// For [`Reason::BlockedMatching`]: a size-k matching with no perfect extension.
    pub witness: Option<Matching>,
    /// Set when the verdict came from the Hall-surplus route.
    pub violator: Option<HallViolator>,
    pub exhibit: Vec<Extension>,
}

impl ExtendibilityCertificate {
    fn yes(k: usize, exhibit: Vec<Extension>) -> Self {
        ExtendibilityCertificate {
            k,
            verdict: Verdict::Yes,
            reason: None,
            witness: None,
            violator: None,
            exhibit,
        }
    }

    fn no(k: usize, reason: Reason) -> Self {
        ExtendibilityCertificate {
            k,
            verdict: Verdict::No,
            reason: Some(reason),
            witness: None,
            violator: None,
            exhibit: Vec::new(),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }

    /// Renames every vertex in the payload through `f`.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize + Copy) -> Self {
        ExtendibilityCertificate {
            k: self.k,
            verdict: self.verdict,
            reason: self.reason,
            witness: self.witness.as_ref().map(|m| m.map_vertices(f)),
            violator: self.violator.as_ref().map(|v| HallViolator {
                set: v.set.iter().map(f).collect(),
                neighborhood_size: v.neighborhood_size,
            }),
            exhibit: self
                .exhibit
                .iter()
                .map(|x| Extension {
                    matching: x.matching.map_vertices(f),
                    perfect: x.perfect.map_vertices(f),
                })
                .collect(),
        }
    }

    /// Re-verifies the certificate against `g` without trusting how it was made.
    /// Positive verdicts are re-derived by the exhaustive oracle, so this is
    /// limited to graphs with at most 64 vertices.
    pub fn recheck(&self, g: &Graph) -> bool {
        let k = self.k;
        match (self.verdict, self.reason) {
            (Verdict::Yes, None) => {
                oracle::is_k_extendible(g, k)
                    && self.exhibit.iter().all(|x| {
                        x.matching.len() == k
                            && x.matching.validate_in(g).is_ok()
                            && x.perfect.validate_in(g).is_ok()
                            && x.perfect.is_perfect_in(g)
                            && x.matching.edges().iter().all(|e| x.perfect.contains(e))
                    })
            }
            (Verdict::No, Some(Reason::SizeTooSmall)) => g.order() < 2 * k + 2,
            (Verdict::No, Some(Reason::Disconnected)) => !oracle::is_connected(g),
            (Verdict::No, Some(Reason::NoPerfectMatching)) => !oracle::has_perfect_matching(g),
            (Verdict::No, Some(Reason::BlockedMatching)) => {
                let Some(w) = &self.witness else {
                    return false;
                };
                let violator_ok = self.violator.as_ref().is_none_or(|v| {
                    g.neighborhood(&v.set, None).is_ok_and(|nb| {
                        nb.len() == v.neighborhood_size && nb.len() < v.set.len() + k
                    })
                });
                w.len() == k
                    && w.validate_in(g).is_ok()
                    && matches!(matching::extends_to_perfect(g, w), Ok(None))
                    && violator_ok
            }
            _ => false,
        }
    }
}

/// First three conditions of the definition; `None` when all hold.
fn structural_failure(g: &Graph, k: usize) -> Option<Reason> {
    if g.order() < 2 * k + 2 {
        Some(Reason::SizeTooSmall)
    } else if !g.is_connected() {
        Some(Reason::Disconnected)
    } else if !matching::has_perfect_matching(g) {
        Some(Reason::NoPerfectMatching)
    } else {
        None
    }
}

/// Decides k-extendibility from the definition. On a blocked matching the
/// witness is the lexicographically least size-k matching with no perfect
/// extension.
pub fn is_k_extendible(g: &Graph, k: usize) -> ExtendibilityCertificate {
    if let Some(reason) = structural_failure(g, k) {
        return ExtendibilityCertificate::no(k, reason);
    }
    let mut exhibit = Vec::new();
    for m in matching::enumerate_matchings(g, k) {
        // Enumerated matchings are always valid in g.
        match matching::extends_to_perfect(g, &m).ok().flatten() {
            Some(perfect) => {
                if exhibit.len() < EXHIBIT_LIMIT {
                    exhibit.push(Extension { matching: m, perfect });
                }
            }
            None => {
                let mut cert = ExtendibilityCertificate::no(k, Reason::BlockedMatching);
                cert.witness = Some(m);
                return cert;
            }
        }
    }
    ExtendibilityCertificate::yes(k, exhibit)
}

/// Largest `k` for which `g` is k-extendible, or `None` when `g` is not even
/// 0-extendible. Every `k` up to the size bound `(n - 2) / 2` is decided; no
/// level is skipped on the strength of monotonicity.
pub fn extendibility_number(g: &Graph) -> Option<usize> {
    let n = g.order();
    if n < 2 {
        return None;
    }
    let passing: Vec<usize> = (0..=(n - 2) / 2).filter(|&k| is_k_extendible(g, k).is_yes()).collect();
    if passing.first() != Some(&0) {
        return None;
    }
    passing.last().copied()
}

fn check_balanced(g: &Graph, bp: &Bipartition) -> Result<()> {
    bp.validate(g)?;
    if !bp.is_balanced() {
        return Err(Error::Unbalanced { x: bp.x.len(), y: bp.y.len() });
    }
    Ok(())
}

/// Checks `|N(A)| >= |A| + k` for every `A ⊆ X` with `1 <= |A| <= |X| - k`,
/// exhaustively. Reports the least violator by size, then lexicographically.
pub fn hall_surplus_check(g: &Graph, bp: &Bipartition, k: usize) -> Result<HallOutcome> {
    check_balanced(g, bp)?;
    if k == 0 {
        return Err(Error::InvalidArgument("Hall-surplus check needs k >= 1".into()));
    }
    let xs: Vec<usize> = bp.x.iter().collect();
    if xs.len() > HALL_MAX_SIDE {
        return Err(Error::TooLarge(format!(
            "|X| = {} exceeds the exhaustive limit {HALL_MAX_SIDE}",
            xs.len()
        )));
    }
    let top = xs.len().saturating_sub(k);
    let words = g.row(0).len().max(1);
    let mut acc = vec![0u64; words];
    for size in 1..=top {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            acc.iter_mut().for_each(|w| *w = 0);
            for &i in &idx {
                for (a, b) in acc.iter_mut().zip(g.row(xs[i])) {
                    *a |= b;
                }
            }
            let nb: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
            if nb < size + k {
                let set = idx.iter().map(|&i| xs[i]).collect();
                return Ok(HallOutcome::Violated(HallViolator { set, neighborhood_size: nb }));
            }
            let Some(i) = (0..size).rev().find(|&i| idx[i] < xs.len() - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(HallOutcome::Satisfied)
}

/// Decides k-extendibility of a balanced bipartite graph through the
/// Hall-surplus condition. A violator `A` is turned into a blocked matching by
/// taking `k` edges of a maximum matching between `N(A)` and `X \ A`: they use
/// up `k` vertices of `N(A)`, leaving fewer than `|A|` partners for `A`. If
/// that subgraph has fewer than `k` matching edges, the blocked matching is
/// found by enumeration instead.
pub fn is_k_extendible_bipartite(
    g: &Graph,
    bp: &Bipartition,
    k: usize,
) -> Result<ExtendibilityCertificate> {
    check_balanced(g, bp)?;
    if let Some(reason) = structural_failure(g, k) {
        return Ok(ExtendibilityCertificate::no(k, reason));
    }
    if k == 0 {
        let perfect = matching::maximum_matching(g);
        return Ok(ExtendibilityCertificate::yes(
            0,
            vec![Extension { matching: Matching::empty(), perfect }],
        ));
    }
    let violator = match hall_surplus_check(g, bp, k)? {
        HallOutcome::Satisfied => return Ok(ExtendibilityCertificate::yes(k, Vec::new())),
        HallOutcome::Violated(v) => v,
    };
    let witness = match blocking_from_violator(g, bp, &violator, k)? {
        Some(m) => m,
        None => first_blocked_matching(g, k).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "Hall violator {} found but every {k}-matching extends",
                violator.set
            ))
        })?,
    };
    let mut cert = ExtendibilityCertificate::no(k, Reason::BlockedMatching);
    cert.witness = Some(witness);
    cert.violator = Some(violator);
    Ok(cert)
}

fn blocking_from_violator(
    g: &Graph,
    bp: &Bipartition,
    violator: &HallViolator,
    k: usize,
) -> Result<Option<Matching>> {
    let nb = g.neighborhood(&violator.set, None)?;
    let keep = nb.union(&bp.x.difference(&violator.set));
    let (h, map) = g.induced_subgraph(&keep)?;
    let inner = matching::maximum_matching(&h);
    if inner.len() < k {
        return Ok(None);
    }
    let picked = Matching::new(inner.edges()[..k].to_vec())?.map_vertices(|v| map.to_original(v));
    Ok(match matching::extends_to_perfect(g, &picked)? {
        None => Some(picked),
        Some(_) => None,
    })
}

fn first_blocked_matching(g: &Graph, k: usize) -> Option<Matching> {
    matching::enumerate_matchings(g, k)
        .find(|m| matches!(matching::extends_to_perfect(g, m), Ok(None)))
}

/// `G - {u, v}` for an edge `uv`, with the relabeling back to `g`.
pub fn peel(g: &Graph, e: Edge) -> Result<(Graph, Relabel)> {
    if !g.has_edge(e.u(), e.v()) {
        return Err(Error::NotAnEdge { u: e.u(), v: e.v() });
    }
    g.delete_vertices(&VertexSet::from([e.u(), e.v()]))
}
