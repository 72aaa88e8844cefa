//! Theorem-checking harness.
//!
//! Each property is an implication about k-extendible graphs. For one graph a
//! property either holds, is violated (with a payload that re-verifies on its
//! own), or is inapplicable because its hypothesis fails. Since the
//! properties are theorems, any violation points at a bug somewhere in the
//! stack.
//!
//! Random corpora use ChaCha8 seeded with `seed_from_u64(seed)`. Graphs are
//! drawn one after another from a single stream; for each graph the vertex
//! pairs are visited in graph6 order `(0,1), (0,2), (1,2), (0,3), ...` and a
//! pair becomes an edge when the next `u64` is below `p * 2^64` (`p >= 1`
//! always adds the edge). This contract is fixed across releases.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connectivity::{self, Connectivity};
use crate::error::{Error, Result};
use crate::extendibility::{self, ExtendibilityCertificate, HallOutcome, HALL_MAX_SIDE};
use crate::format;
use crate::graph::{Edge, Graph, VertexSet};
use crate::matching::{self, DeficiencyWitness};
use crate::oracle;

pub const EXHAUSTIVE_MAX_ORDER: usize = 7;
pub const DEFAULT_EDGE_PROBABILITY: f64 = 0.5;
pub const DEFAULT_KMAX: usize = 3;
pub const TOOL_NAME: &str = "kext";
pub const ZERO_EXTENDIBLE_NOTE: &str =
    "k = 0 convention: 0-extendible means connected, at least 2 vertices, and a perfect matching";

const CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CorpusSpec {
    /// Every labeled graph on `n` vertices.
    Exhaustive { n: usize },
    /// `count` independent `G(n, p)` draws.
    Random { n: usize, count: usize, seed: u64, edge_probability: f64 },
    /// One graph6 graph per line of a file.
    External { source: PathBuf },
}

impl CorpusSpec {
    pub fn random(n: usize, count: usize, seed: u64) -> Self {
        CorpusSpec::Random { n, count, seed, edge_probability: DEFAULT_EDGE_PROBABILITY }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CorpusSpec::Exhaustive { n } if *n > EXHAUSTIVE_MAX_ORDER => Err(Error::InvalidCorpus(
                format!("exhaustive mode takes n <= {EXHAUSTIVE_MAX_ORDER}, got {n}"),
            )),
            CorpusSpec::Random { count: 0, .. } => {
                Err(Error::InvalidCorpus("random mode needs count >= 1".into()))
            }
            CorpusSpec::Random { edge_probability: p, .. } if !(0.0..=1.0).contains(p) => {
                Err(Error::InvalidCorpus(format!("edge probability {p} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

/// A corpus line that failed to parse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

pub type CorpusEntry = std::result::Result<Graph, CorpusError>;

/// Vertex pairs in graph6 order.
fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

fn threshold(p: f64) -> Option<u64> {
    if p >= 1.0 {
        None
    } else {
        Some((p * 18_446_744_073_709_551_616.0) as u64)
    }
}

fn draw_edge(rng: &mut ChaCha8Rng, cut: Option<u64>) -> bool {
    let x = rng.next_u64();
    cut.is_none_or(|c| x < c)
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let cut = threshold(p);
    let mut g = Graph::empty(n);
    for (i, j) in pairs(n) {
        if draw_edge(rng, cut) {
            g.set(i, j);
        }
    }
    g
}

/// `count` random bipartite graphs with sides `0..left` and
/// `left..left + right`; each cross pair is an edge with probability `p`,
/// pairs visited with the left vertex in the outer loop.
pub fn random_bipartite_graphs(
    left: usize,
    right: usize,
    count: usize,
    seed: u64,
    p: f64,
) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cut = threshold(p);
    (0..count)
        .map(|_| {
            let mut g = Graph::empty(left + right);
            for x in 0..left {
                for y in left..left + right {
                    if draw_edge(&mut rng, cut) {
                        g.set(x, y);
                    }
                }
            }
            g
        })
        .collect()
}

/// Streams the graphs described by `spec`.
///
/// Exhaustive mode orders graphs by their upper-triangle bit vector (graph6
/// order, first pair most significant), starting from the edgeless graph.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Box<dyn Iterator<Item = CorpusEntry> + Send>> {
    spec.validate()?;
    Ok(match spec.clone() {
        CorpusSpec::Exhaustive { n } => {
            let all: Vec<(usize, usize)> = pairs(n).collect();
            let m = all.len();
            Box::new((0u64..1 << m).map(move |code| {
                let mut g = Graph::empty(n);
                for (idx, &(i, j)) in all.iter().enumerate() {
                    if code >> (m - 1 - idx) & 1 == 1 {
                        g.set(i, j);
                    }
                }
                Ok(g)
            }))
        }
        CorpusSpec::Random { n, count, seed, edge_probability } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new((0..count).map(move |_| Ok(random_graph(&mut rng, n, edge_probability))))
        }
        CorpusSpec::External { source } => {
            let text = std::fs::read_to_string(&source).map_err(|e| Error::Io {
                path: source.display().to_string(),
                message: e.to_string(),
            })?;
            let lines: Vec<(usize, String)> = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| (i + 1, l.trim_end().to_string()))
                .collect();
            Box::new(lines.into_iter().map(|(line, l)| {
                format::parse_graph6(&l).map_err(|e| CorpusError { line, message: e.to_string() })
            }))
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropertyId {
    /// k-extendible implies (k-1)-extendible.
    P21,
    /// 1-extendible implies 2-connected.
    P22,
    /// Peeling an edge off a k-extendible graph (k >= 2) leaves a
    /// (k-1)-extendible graph.
    P23,
    /// k-extendible implies (k+1)-connected.
    T31,
    /// Bipartite characterization by Hall surplus.
    T32,
    /// König-Ore formula.
    KO,
    /// The extendibility number is consistent over every level up to the size bound.
    #[serde(rename = "MONO-EXT")]
    MonoExt,
}

impl PropertyId {
    pub const ALL: [PropertyId; 7] = [
        PropertyId::P21,
        PropertyId::P22,
        PropertyId::P23,
        PropertyId::T31,
        PropertyId::T32,
        PropertyId::KO,
        PropertyId::MonoExt,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PropertyId::P21 => "P21",
            PropertyId::P22 => "P22",
            PropertyId::P23 => "P23",
            PropertyId::T31 => "T31",
            PropertyId::T32 => "T32",
            PropertyId::KO => "KO",
            PropertyId::MonoExt => "MONO-EXT",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown property {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Violated,
    Inapplicable,
}

/// Evidence attached to a violation. All vertex ids are in the labels of the
/// graph the property was checked on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Monotonicity {
        k: usize,
        upper: ExtendibilityCertificate,
        lower: ExtendibilityCertificate,
    },
    TwoConnectivity {
        certificate: ExtendibilityCertificate,
        connectivity: Connectivity,
    },
    Peeling {
        k: usize,
        edge: Edge,
        certificate: ExtendibilityCertificate,
        peeled: ExtendibilityCertificate,
    },
    ConnectivityBound {
        k: usize,
        certificate: ExtendibilityCertificate,
        connectivity: Connectivity,
    },
    Characterization {
        k: usize,
        definitional: ExtendibilityCertificate,
        hall: HallOutcome,
        bipartite: ExtendibilityCertificate,
    },
    KoenigOre {
        x: VertexSet,
        matching_number: usize,
        oracle_deficiency: usize,
        oracle_witness: VertexSet,
        polynomial: DeficiencyWitness,
        witness_surplus: i64,
    },
    ExtendibilityNumber {
        number: Option<usize>,
        verdicts: Vec<ExtendibilityCertificate>,
    },
}

/// Result of checking one property on one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub status: Status,
    /// For inapplicable findings, the hypothesis that failed.
    pub note: Option<String>,
    pub payload: Option<Payload>,
}

impl Finding {
    fn holds() -> Self {
        Finding { status: Status::Holds, note: None, payload: None }
    }

    fn inapplicable(why: impl Into<String>) -> Self {
        Finding { status: Status::Inapplicable, note: Some(why.into()), payload: None }
    }

    fn violated(payload: Payload) -> Self {
        Finding { status: Status::Violated, note: None, payload: Some(payload) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: PropertyId,
    pub graph: usize,
    #[serde(flatten)]
    pub finding: Finding,
}

pub fn verify_monotonicity(g: &Graph, kmax: usize) -> Finding {
    let mut applicable = false;
    for k in 1..=kmax {
        let upper = extendibility::is_k_extendible(g, k);
        if !upper.is_yes() {
            continue;
        }
        applicable = true;
        let lower = extendibility::is_k_extendible(g, k - 1);
        if !lower.is_yes() {
            return Finding::violated(Payload::Monotonicity { k, upper, lower });
        }
    }
    if applicable {
        Finding::holds()
    } else {
        Finding::inapplicable(format!("not k-extendible for any 1 <= k <= {kmax}"))
    }
}

pub fn verify_one_ext_two_conn(g: &Graph) -> Finding {
    let certificate = extendibility::is_k_extendible(g, 1);
    if !certificate.is_yes() {
        return Finding::inapplicable("not 1-extendible");
    }
    if connectivity::is_k_connected(g, 2) {
        return Finding::holds();
    }
    match connectivity::vertex_connectivity(g) {
        Ok(connectivity) => Finding::violated(Payload::TwoConnectivity { certificate, connectivity }),
        Err(e) => Finding::inapplicable(e.to_string()),
    }
}

/// Peeling at a single level `k >= 2`.
pub fn verify_peeling(g: &Graph, k: usize) -> Finding {
    if k < 2 {
        return Finding::inapplicable("peeling needs k >= 2");
    }
    let certificate = extendibility::is_k_extendible(g, k);
    if !certificate.is_yes() {
        return Finding::inapplicable(format!("not {k}-extendible"));
    }
    for edge in g.edges() {
        let Ok((h, map)) = extendibility::peel(g, edge) else {
            continue;
        };
        let peeled = extendibility::is_k_extendible(&h, k - 1);
        if !peeled.is_yes() {
            let peeled = peeled.map_vertices(|v| map.to_original(v));
            return Finding::violated(Payload::Peeling { k, edge, certificate, peeled });
        }
    }
    Finding::holds()
}

fn verify_peeling_upto(g: &Graph, kmax: usize) -> Finding {
    let mut applicable = false;
    for k in 2..=kmax {
        let f = verify_peeling(g, k);
        match f.status {
            Status::Violated => return f,
            Status::Holds => applicable = true,
            Status::Inapplicable => {}
        }
    }
    if applicable {
        Finding::holds()
    } else {
        Finding::inapplicable(format!("not k-extendible for any 2 <= k <= {kmax}"))
    }
}

pub fn verify_connectivity_bound(g: &Graph, kmax: usize) -> Finding {
    let mut applicable = false;
    let mut kappa: Option<Connectivity> = None;
    for k in 1..=kmax {
        let certificate = extendibility::is_k_extendible(g, k);
        if !certificate.is_yes() {
            continue;
        }
        applicable = true;
        let c = match &kappa {
            Some(c) => c.clone(),
            None => match connectivity::vertex_connectivity(g) {
                Ok(c) => kappa.insert(c).clone(),
                Err(e) => return Finding::inapplicable(e.to_string()),
            },
        };
        if g.order() < k + 2 || c.kappa < k + 1 {
            return Finding::violated(Payload::ConnectivityBound { k, certificate, connectivity: c });
        }
    }
    if applicable {
        Finding::holds()
    } else {
        Finding::inapplicable(format!("not k-extendible for any 1 <= k <= {kmax}"))
    }
}

pub fn verify_bipartite_characterization(g: &Graph, kmax: usize) -> Finding {
    if !g.is_connected() {
        return Finding::inapplicable("disconnected");
    }
    let Ok(bp) = g.bipartition() else {
        return Finding::inapplicable("not bipartite");
    };
    if !bp.is_balanced() {
        return Finding::inapplicable("unbalanced bipartition");
    }
    if !matching::has_perfect_matching(g) {
        return Finding::inapplicable("no perfect matching");
    }
    if bp.x.len() > HALL_MAX_SIDE {
        return Finding::inapplicable(format!("|X| > {HALL_MAX_SIDE}"));
    }
    let mut applicable = false;
    for k in 1..=kmax {
        if g.order() < 2 * k + 2 {
            continue;
        }
        applicable = true;
        let definitional = extendibility::is_k_extendible(g, k);
        let (hall, bipartite) = match (
            extendibility::hall_surplus_check(g, &bp, k),
            extendibility::is_k_extendible_bipartite(g, &bp, k),
        ) {
            (Ok(h), Ok(b)) => (h, b),
            (Err(e), _) | (_, Err(e)) => return Finding::inapplicable(e.to_string()),
        };
        let hall_yes = hall == HallOutcome::Satisfied;
        let witness_ok = bipartite.is_yes()
            || bipartite.witness.as_ref().is_some_and(|w| {
                w.len() == k && matches!(matching::extends_to_perfect(g, w), Ok(None))
            });
        if definitional.is_yes() != hall_yes
            || definitional.verdict != bipartite.verdict
            || !witness_ok
        {
            return Finding::violated(Payload::Characterization {
                k,
                definitional,
                hall,
                bipartite,
            });
        }
    }
    if applicable {
        Finding::holds()
    } else {
        Finding::inapplicable(format!("order below 2k + 2 for every 1 <= k <= {kmax}"))
    }
}

pub fn verify_koenig_ore(g: &Graph) -> Finding {
    let Ok(bp) = g.bipartition() else {
        return Finding::inapplicable("not bipartite");
    };
    if bp.x.len() > HALL_MAX_SIDE || g.order() > 64 {
        return Finding::inapplicable(format!("|X| > {HALL_MAX_SIDE} exceeds the subset oracle"));
    }
    let matching_number = matching::matching_number(g);
    let (oracle_deficiency, oracle_witness) = oracle::deficiency(g, &bp.x);
    let polynomial = match matching::koenig_ore_deficiency(g, &bp) {
        Ok(d) => d,
        Err(e) => return Finding::inapplicable(e.to_string()),
    };
    let witness_surplus = g
        .neighborhood(&polynomial.witness, None)
        .map(|nb| polynomial.witness.len() as i64 - nb.len() as i64)
        .unwrap_or(i64::MIN);
    let ok = matching_number + oracle_deficiency == bp.x.len()
        && polynomial.value == oracle_deficiency
        && witness_surplus == polynomial.value as i64
        && polynomial.witness.is_subset(&bp.x);
    if ok {
        Finding::holds()
    } else {
        Finding::violated(Payload::KoenigOre {
            x: bp.x,
            matching_number,
            oracle_deficiency,
            oracle_witness,
            polynomial,
            witness_surplus,
        })
    }
}

/// Decides every level `0..=(n-2)/2` and checks the passing levels form a
/// prefix ending at [`extendibility::extendibility_number`].
pub fn verify_extendibility_number(g: &Graph) -> Finding {
    let n = g.order();
    if n < 2 {
        return Finding::inapplicable("fewer than 2 vertices");
    }
    let verdicts: Vec<ExtendibilityCertificate> =
        (0..=(n - 2) / 2).map(|k| extendibility::is_k_extendible(g, k)).collect();
    if verdicts.iter().all(|c| !c.is_yes()) {
        return Finding::inapplicable("not 0-extendible");
    }
    let number = extendibility::extendibility_number(g);
    let prefix = verdicts.iter().take_while(|c| c.is_yes()).count();
    let consistent = verdicts[prefix..].iter().all(|c| !c.is_yes())
        && number == Some(prefix - 1)
        && number.is_some_and(|e| 2 * e + 2 <= n);
    if consistent {
        Finding::holds()
    } else {
        Finding::violated(Payload::ExtendibilityNumber { number, verdicts })
    }
}

pub fn verify_property(g: &Graph, property: PropertyId, kmax: usize) -> Finding {
    match property {
        PropertyId::P21 => verify_monotonicity(g, kmax),
        PropertyId::P22 => verify_one_ext_two_conn(g),
        PropertyId::P23 => verify_peeling_upto(g, kmax),
        PropertyId::T31 => verify_connectivity_bound(g, kmax),
        PropertyId::T32 => verify_bipartite_characterization(g, kmax),
        PropertyId::KO => verify_koenig_ore(g),
        PropertyId::MonoExt => verify_extendibility_number(g),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub holds: usize,
    pub violated: usize,
    pub inapplicable: usize,
}

impl Tally {
    fn add(&mut self, status: Status) {
        match status {
            Status::Holds => self.holds += 1,
            Status::Violated => self.violated += 1,
            Status::Inapplicable => self.inapplicable += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.holds + self.violated + self.inapplicable
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// graph6 of the offending graph; absent above 62 vertices.
    pub graph6: Option<String>,
    #[serde(flatten)]
    pub outcome: PropertyOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub corpus: CorpusSpec,
    pub properties: Vec<PropertyId>,
    pub kmax: usize,
    pub graphs_processed: usize,
    pub tallies: BTreeMap<PropertyId, Tally>,
    pub violations: Vec<Violation>,
    pub corpus_errors: Vec<CorpusError>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the machine's parallelism.
    pub workers: Option<usize>,
    /// Abort on the first malformed corpus entry instead of recording it.
    pub strict: bool,
    /// Record wall time in the report. Off by default so reports are byte-stable.
    pub timing: bool,
}

/// Runs `properties` over every graph of the corpus. Graphs are processed in
/// parallel chunks and merged in corpus order, so the report does not depend
/// on the worker count.
pub fn run_corpus(
    spec: &CorpusSpec,
    properties: &[PropertyId],
    kmax: usize,
    options: &RunOptions,
) -> Result<Report> {
    if properties.is_empty() {
        return Err(Error::NoProperties);
    }
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    let start = Instant::now();
    let mut props: Vec<PropertyId> = properties.to_vec();
    props.sort();
    props.dedup();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = options.workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;

    let mut tallies: BTreeMap<PropertyId, Tally> =
        props.iter().map(|&p| (p, Tally::default())).collect();
    let mut violations = Vec::new();
    let mut corpus_errors = Vec::new();
    let mut processed = 0usize;
    let mut corpus = generate_corpus(spec)?.enumerate();

    loop {
        let chunk: Vec<(usize, CorpusEntry)> = corpus.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let mut graphs = Vec::with_capacity(chunk.len());
        for (index, entry) in chunk {
            match entry {
                Ok(g) => graphs.push((index, g)),
                Err(e) if options.strict => {
                    return Err(Error::InvalidCorpus(format!("line {}: {}", e.line, e.message)));
                }
                Err(e) => corpus_errors.push(e),
            }
        }
        let results: Vec<Vec<Finding>> = pool.install(|| {
            graphs
                .par_iter()
                .map(|(_, g)| props.iter().map(|&p| verify_property(g, p, kmax)).collect())
                .collect()
        });
        for ((index, g), findings) in graphs.iter().zip(results) {
            processed += 1;
            for (&property, finding) in props.iter().zip(findings) {
                if let Some(t) = tallies.get_mut(&property) {
                    t.add(finding.status);
                }
                if finding.status == Status::Violated {
                    violations.push(Violation {
                        graph6: format::to_graph6(g).ok(),
                        outcome: PropertyOutcome { property, graph: *index, finding },
                    });
                }
            }
        }
    }

    let mut notes = Vec::new();
    if props.iter().any(|p| matches!(p, PropertyId::P21 | PropertyId::MonoExt)) {
        notes.push(ZERO_EXTENDIBLE_NOTE.to_string());
    }
    Ok(Report {
        tool: TOOL_NAME.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        corpus: spec.clone(),
        properties: props,
        kmax,
        graphs_processed: processed,
        tallies,
        violations,
        corpus_errors,
        notes,
        wall_time_ms: options.timing.then(|| start.elapsed().as_millis() as u64),
    })
}
