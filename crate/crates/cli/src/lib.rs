//! Library side of the `kext` command: argument types, per-graph analysis
//! records, and the subcommand drivers. `main.rs` only maps results to exit
//! codes.

use std::fmt;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use kext::connectivity::{self, Connectivity};
use kext::extendibility::{self, ExtendibilityCertificate};
use kext::format;
use kext::matching::{self, Matching};
use kext::verifier::{self, CorpusSpec, PropertyId, Report, RunOptions, DEFAULT_KMAX};
use kext::{Bipartition, Graph};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "KEXT_WORKERS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "kext", version, about = "Certify k-extendibility of graphs and check the theorems about it")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze each input graph and print one JSON record per graph.
    Analyze(AnalyzeArgs),
    /// Check the theorem suite over a corpus and print a JSON report.
    Verify(VerifyArgs),
    /// Print a corpus as graph6 lines.
    Gen(GenArgs),
    /// Convert between graph6 and edge-list text.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    G6,
    Edges,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input file; stdin when omitted.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "g6")]
    pub format: Format,
    /// Highest k for which a certificate is printed.
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    pub kmax: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random", "input"])))]
pub struct VerifyArgs {
    /// Every labeled graph on N vertices (N <= 7).
    #[arg(long, value_name = "N")]
    pub exhaustive: Option<usize>,
    /// COUNT random G(N, 1/2) graphs from SEED.
    #[arg(long, num_args = 3, value_names = ["N", "COUNT", "SEED"])]
    pub random: Option<Vec<u64>>,
    /// graph6 file, one graph per line.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Comma-separated property ids (P21,P22,P23,T31,T32,KO,MONO-EXT); all by default.
    #[arg(long, value_delimiter = ',')]
    pub properties: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_KMAX)]
    pub kmax: usize,
    /// Abort on the first malformed input line.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random"])))]
pub struct GenArgs {
    #[arg(long, value_name = "N")]
    pub exhaustive: Option<usize>,
    #[arg(long, num_args = 3, value_names = ["N", "COUNT", "SEED"])]
    pub random: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long, value_enum)]
    pub from: Format,
    #[arg(long, value_enum)]
    pub to: Format,
    /// Input file; stdin when omitted.
    pub input: Option<PathBuf>,
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

impl From<kext::Error> for UsageError {
    fn from(e: kext::Error) -> Self {
        UsageError(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        UsageError(e.to_string())
    }
}

/// Everything `analyze` reports about one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    /// graph6 of the input; absent above 62 vertices.
    pub graph6: Option<String>,
    pub n: usize,
    pub edges: usize,
    pub connected: bool,
    pub bipartite: bool,
    pub bipartition: Option<Bipartition>,
    pub odd_cycle: Option<Vec<usize>>,
    pub min_degree: Option<usize>,
    pub matching_number: usize,
    pub maximum_matching: Matching,
    pub has_perfect_matching: bool,
    /// Absent for the null graph.
    pub connectivity: Option<Connectivity>,
    pub extendibility_number: Option<usize>,
    /// One certificate per k in `0..=kmax`.
    pub certificates: Vec<ExtendibilityCertificate>,
}

pub fn analyze_graph(g: &Graph, kmax: usize) -> AnalysisRecord {
    let (bipartition, odd_cycle) = match g.bipartition() {
        Ok(bp) => (Some(bp), None),
        Err(c) => (None, Some(c.0)),
    };
    let maximum_matching = matching::maximum_matching(g);
    AnalysisRecord {
        graph6: format::to_graph6(g).ok(),
        n: g.order(),
        edges: g.edge_count(),
        connected: g.is_connected(),
        bipartite: bipartition.is_some(),
        bipartition,
        odd_cycle,
        min_degree: g.min_degree().ok(),
        matching_number: maximum_matching.len(),
        has_perfect_matching: matching::has_perfect_matching(g),
        maximum_matching,
        connectivity: connectivity::vertex_connectivity(g).ok(),
        extendibility_number: extendibility::extendibility_number(g),
        certificates: (0..=kmax).map(|k| extendibility::is_k_extendible(g, k)).collect(),
    }
}

fn read_input(path: Option<&Path>) -> Result<String, UsageError> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Parses a whole input in the given format, naming the line of the first error.
pub fn parse_graphs(text: &str, fmt: Format) -> Result<Vec<Graph>, UsageError> {
    match fmt {
        Format::G6 => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                format::parse_graph6(l.trim_end())
                    .map_err(|e| UsageError(format!("line {}: {e}", i + 1)))
            })
            .collect(),
        Format::Edges => Ok(format::parse_edge_list_stream(text)?),
    }
}

/// Worker count from the environment, if set.
pub fn workers_from_env() -> Result<Option<usize>, UsageError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| UsageError(format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        Err(_) => Ok(None),
    }
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, UsageError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w.max(1));
    }
    b.build().map_err(|e| UsageError(e.to_string()))
}

pub fn run_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<u8, UsageError> {
    let text = read_input(args.input.as_deref())?;
    let graphs = parse_graphs(&text, args.format)?;
    let records: Vec<AnalysisRecord> = pool(workers_from_env()?)?
        .install(|| graphs.par_iter().map(|g| analyze_graph(g, args.kmax)).collect());
    for r in &records {
        let line = serde_json::to_string(r).map_err(|e| UsageError(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(EXIT_OK)
}

fn random_spec(values: &[u64]) -> Result<CorpusSpec, UsageError> {
    let [n, count, seed] = values else {
        return Err(UsageError("--random takes N COUNT SEED".into()));
    };
    Ok(CorpusSpec::random(*n as usize, *count as usize, *seed))
}

pub fn verify_spec(args: &VerifyArgs) -> Result<CorpusSpec, UsageError> {
    let spec = match (&args.exhaustive, &args.random, &args.input) {
        (Some(n), None, None) => CorpusSpec::Exhaustive { n: *n },
        (None, Some(r), None) => random_spec(r)?,
        (None, None, Some(path)) => CorpusSpec::External { source: path.clone() },
        _ => return Err(UsageError("exactly one corpus mode is required".into())),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn parse_properties(list: &[String]) -> Result<Vec<PropertyId>, UsageError> {
    if list.is_empty() {
        return Ok(PropertyId::ALL.to_vec());
    }
    list.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<PropertyId>().map_err(UsageError::from))
        .collect()
}

pub fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, UsageError> {
    let spec = verify_spec(args)?;
    let properties = parse_properties(&args.properties)?;
    let options = RunOptions { workers: workers_from_env()?, strict: args.strict, timing: false };
    let report = verifier::run_corpus(&spec, &properties, args.kmax, &options)?;
    write_report(&report, out)?;
    Ok(exit_code(&report))
}

/// Violations win over skipped input lines; a clean run exits 0.
pub fn exit_code(report: &Report) -> u8 {
    if report.violation_count() > 0 {
        EXIT_VIOLATION
    } else if !report.corpus_errors.is_empty() {
        EXIT_USAGE
    } else {
        EXIT_OK
    }
}

pub fn write_report(report: &Report, out: &mut dyn Write) -> Result<(), UsageError> {
    let json = serde_json::to_string_pretty(report).map_err(|e| UsageError(e.to_string()))?;
    writeln!(out, "{json}")?;
    Ok(())
}

pub fn run_gen(args: &GenArgs, out: &mut dyn Write) -> Result<u8, UsageError> {
    let spec = match (&args.exhaustive, &args.random) {
        (Some(n), None) => CorpusSpec::Exhaustive { n: *n },
        (None, Some(r)) => random_spec(r)?,
        _ => return Err(UsageError("exactly one corpus mode is required".into())),
    };
    for entry in verifier::generate_corpus(&spec)? {
        let g = entry.map_err(|e| UsageError(format!("line {}: {}", e.line, e.message)))?;
        writeln!(out, "{}", format::to_graph6(&g)?)?;
    }
    Ok(EXIT_OK)
}

pub fn run_convert(args: &ConvertArgs, out: &mut dyn Write) -> Result<u8, UsageError> {
    let text = read_input(args.input.as_deref())?;
    let graphs = parse_graphs(&text, args.from)?;
    for (i, g) in graphs.iter().enumerate() {
        match args.to {
            Format::G6 => writeln!(out, "{}", format::to_graph6(g)?)?,
            Format::Edges => {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", format::to_edge_list(g))?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, UsageError> {
    match &cli.command {
        Command::Analyze(a) => run_analyze(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Gen(a) => run_gen(a, out),
        Command::Convert(a) => run_convert(a, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("kext").chain(args.iter().copied()))
    }

    fn verify_args(args: &[&str]) -> VerifyArgs {
        match parse(args).unwrap().command {
            Command::Verify(v) => v,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn corpus_modes_are_exclusive_and_required() {
        assert!(parse(&["verify"]).is_err());
        assert!(parse(&["verify", "--exhaustive", "4", "--input", "x.g6"]).is_err());
        assert!(parse(&["verify", "--random", "4", "5"]).is_err());
        let spec = verify_spec(&verify_args(&["verify", "--random", "10", "500", "7"])).unwrap();
        assert_eq!(spec, CorpusSpec::random(10, 500, 7));
        assert!(verify_spec(&verify_args(&["verify", "--exhaustive", "8"])).is_err());
    }

    #[test]
    fn property_lists() {
        assert_eq!(parse_properties(&[]).unwrap(), PropertyId::ALL.to_vec());
        let some = parse_properties(&["t31".into(), "MONO-EXT".into()]).unwrap();
        assert_eq!(some, vec![PropertyId::T31, PropertyId::MonoExt]);
        assert!(parse_properties(&["P24".into()]).is_err());
    }

    #[test]
    fn graph6_input_skips_blank_lines_and_names_bad_ones() {
        let gs = parse_graphs("Cl\n\nA_\r\n", Format::G6).unwrap();
        assert_eq!(gs.len(), 2);
        let err = parse_graphs("Cl\n\nA`\n", Format::G6).unwrap_err();
        assert!(err.0.starts_with("line 3"), "{err}");
        assert!(parse_graphs("", Format::Edges).unwrap().is_empty());
    }

    #[test]
    fn record_for_c4() {
        let r = analyze_graph(&Graph::cycle(4), 2);
        assert_eq!(r.graph6.as_deref(), Some("Cl"));
        assert_eq!((r.matching_number, r.extendibility_number), (2, Some(1)));
        assert_eq!(r.connectivity.unwrap().kappa, 2);
        assert_eq!(r.certificates.len(), 3);
        assert!(r.odd_cycle.is_none() && r.bipartite);
    }

    #[test]
    fn run_writes_gen_output() {
        let cli = parse(&["gen", "--exhaustive", "2"]).unwrap();
        let mut out = Vec::new();
        assert_eq!(run(&cli, &mut out).unwrap(), EXIT_OK);
        assert_eq!(out, b"A?\nA_\n");
    }
}
