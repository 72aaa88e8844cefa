//! Helpers shared by the CLI test targets.

#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde_json::Value;

use kext::matching::DeficiencyWitness;
use kext::verifier::{
    run_corpus, CorpusSpec, Finding, Payload, PropertyId, PropertyOutcome, Report, RunOptions,
    Status, Violation,
};
use kext::VertexSet;

/// (golden file, command that regenerates it, expected exit code)
pub const GOLDEN: &[(&str, &[&str], i32)] = &[
    ("analyze_named.jsonl", &["analyze", "named.g6"], 0),
    ("analyze_named_k1.jsonl", &["analyze", "--format", "edges", "--kmax", "1", "named.edges"], 0),
    ("verify_exhaustive_5.json", &["verify", "--exhaustive", "5", "--kmax", "2"], 0),
    ("verify_random_10_500_7.json", &["verify", "--random", "10", "500", "7"], 0),
    (
        "verify_external.json",
        &["verify", "--input", "corpus_with_errors.g6", "--properties", "P21,T31", "--kmax", "2"],
        2,
    ),
];

/// (arguments, stdin, expected exit code)
pub const EXIT_MATRIX: &[(&[&str], &str, i32)] = &[
    (&["analyze"], "Cl\n", 0),
    (&["analyze"], "", 0),
    (&["analyze", "--format", "edges"], "2\n0 1\n", 0),
    (&["verify", "--exhaustive", "3"], "", 0),
    (&["verify", "--random", "6", "20", "1", "--properties", "ko,T32"], "", 0),
    (&["gen", "--exhaustive", "3"], "", 0),
    (&["gen", "--random", "8", "10", "42"], "", 0),
    (&["convert", "--from", "g6", "--to", "edges"], "A_\n", 0),
    (&["analyze"], "C l\n", 2),
    (&["analyze", "--format", "edges"], "3\n0 3\n", 2),
    (&["analyze", "missing.g6"], "", 2),
    (&["verify"], "", 2),
    (&["verify", "--exhaustive", "3", "--random", "3", "1", "1"], "", 2),
    (&["verify", "--exhaustive", "8"], "", 2),
    (&["verify", "--exhaustive", "3", "--properties", "P99"], "", 2),
    (&["verify", "--exhaustive", "3", "--kmax", "0"], "", 2),
    (&["verify", "--input", "missing.g6"], "", 2),
    (&["verify", "--input", "corpus_with_errors.g6", "--strict"], "", 2),
    (&["gen"], "", 2),
    (&["gen", "--exhaustive", "8"], "", 2),
    (&["gen", "--random", "8", "0", "1"], "", 2),
    (&["convert", "--from", "g6", "--to", "edges"], "A`\n", 2),
    (&["frobnicate"], "", 2),
];

pub struct Output {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Output {
    pub fn text(&self) -> &str {
        std::str::from_utf8(&self.stdout).unwrap()
    }
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

/// Schema errors for one instance, rendered; empty when it validates.
pub fn schema_errors(v: &jsonschema::Validator, instance: &Value) -> Vec<String> {
    v.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect()
}

/// Runs the `kext` binary from the golden directory.
pub fn kext(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kext"));
    cmd.args(args)
        .current_dir(golden_dir())
        .env_remove(kext_cli::WORKERS_ENV)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// A clean report with one fabricated violation appended. No correct build
/// produces a violation, so this is how the exit-1 path gets exercised.
pub fn report_with_violation() -> Report {
    let spec = CorpusSpec::Exhaustive { n: 3 };
    let mut report =
        run_corpus(&spec, &[PropertyId::KO], 1, &RunOptions { workers: Some(1), ..Default::default() })
            .unwrap();
    let outcome = PropertyOutcome {
        property: PropertyId::KO,
        graph: 0,
        finding: Finding {
            status: Status::Violated,
            note: None,
            payload: Some(Payload::KoenigOre {
                x: VertexSet::from([0, 1, 2]),
                matching_number: 0,
                oracle_deficiency: 3,
                oracle_witness: VertexSet::from([0, 1, 2]),
                polynomial: DeficiencyWitness { value: 2, witness: VertexSet::from([0, 1]) },
                witness_surplus: 2,
            }),
        },
    };
    report.violations.push(Violation { graph6: Some("B?".into()), outcome });
    report.tallies.get_mut(&PropertyId::KO).unwrap().violated += 1;
    report
}
