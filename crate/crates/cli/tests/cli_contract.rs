mod common;

use serde_json::Value;

use common::{golden_dir, kext, report_with_violation, schema, schema_errors, EXIT_MATRIX, GOLDEN};
use kext::{connectivity, extendibility, format, matching};
use kext_cli::{exit_code, write_report, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};

#[test]
fn golden_outputs_are_reproduced() {
    for (file, args, code) in GOLDEN {
        let expected = std::fs::read(golden_dir().join(file)).unwrap();
        let out = kext(args, "", &[]);
        assert_eq!(out.code, *code, "{args:?}: {}", out.stderr);
        assert!(out.stdout == expected, "{file} drifted from `kext {}`", args.join(" "));
    }
}

#[test]
fn golden_outputs_match_schemas() {
    let analysis = schema("analysis.json");
    let report = schema("report.json");
    for (file, _, _) in GOLDEN {
        let text = std::fs::read_to_string(golden_dir().join(file)).unwrap();
        if file.ends_with(".jsonl") {
            for line in text.lines() {
                let v: Value = serde_json::from_str(line).unwrap();
                assert_eq!(schema_errors(&analysis, &v), Vec::<String>::new(), "{file}");
            }
        } else {
            let v: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(schema_errors(&report, &v), Vec::<String>::new(), "{file}");
        }
    }
}

#[test]
fn violation_report_matches_schema_and_exits_one() {
    let report = report_with_violation();
    assert_eq!(exit_code(&report), EXIT_VIOLATION);
    let mut buf = Vec::new();
    write_report(&report, &mut buf).unwrap();
    let v: Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(schema_errors(&schema("report.json"), &v), Vec::<String>::new());
    assert_eq!(v["violations"][0]["payload"]["kind"], "koenig_ore");

    let mut clean = report.clone();
    clean.violations.clear();
    assert_eq!(exit_code(&clean), EXIT_OK);
    clean.corpus_errors.push(kext::verifier::CorpusError { line: 1, message: "bad".into() });
    assert_eq!(exit_code(&clean), EXIT_USAGE);
}

#[test]
fn schemas_reject_malformed_records() {
    let analysis = schema("analysis.json");
    let text = std::fs::read_to_string(golden_dir().join("analyze_named.jsonl")).unwrap();
    let good: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("matching_number");
    assert!(!schema_errors(&analysis, &missing).is_empty());
    let mut bad_verdict = good.clone();
    bad_verdict["certificates"][0]["verdict"] = "maybe".into();
    assert!(!schema_errors(&analysis, &bad_verdict).is_empty());
    let mut yes_with_reason = good;
    yes_with_reason["certificates"][0]["reason"] = "disconnected".into();
    assert!(!schema_errors(&analysis, &yes_with_reason).is_empty());
}

#[test]
fn exit_code_matrix() {
    for (args, stdin, code) in EXIT_MATRIX {
        let out = kext(args, stdin, &[]);
        assert_eq!(out.code, *code, "kext {args:?} <<< {stdin:?}: {}", out.stderr);
        if *code == 2 {
            assert!(!out.stderr.is_empty());
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    let out = kext(&["convert", "--from", "g6", "--to", "edges"], "A_\nA \n", &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2") && out.stderr.contains("byte 1"), "{}", out.stderr);
    let out = kext(&["analyze", "--format", "edges"], "3\n0 1\n1 x\n", &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
}

#[test]
fn analyze_agrees_with_library_calls() {
    let corpus = kext(&["gen", "--random", "9", "60", "3"], "", &[]);
    let mut input = String::from_utf8(corpus.stdout).unwrap();
    input.push_str("Cl\nCh\nEFz_\nGhCGKC\n");
    let out = kext(&["analyze", "--kmax", "2"], &input, &[]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.text().lines().collect();
    let inputs: Vec<&str> = input.lines().collect();
    assert_eq!(lines.len(), inputs.len());
    for (line, g6) in lines.iter().zip(inputs) {
        let g = format::parse_graph6(g6).unwrap();
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["graph6"], g6);
        assert_eq!(r["n"], g.order());
        assert_eq!(r["edges"], g.edge_count());
        assert_eq!(r["connected"], g.is_connected());
        assert_eq!(r["bipartite"], g.bipartition().is_ok());
        assert_eq!(r["min_degree"], g.min_degree().unwrap());
        assert_eq!(r["matching_number"], matching::matching_number(&g));
        assert_eq!(r["has_perfect_matching"], matching::has_perfect_matching(&g));
        let kappa = connectivity::vertex_connectivity(&g).unwrap();
        assert_eq!(r["connectivity"], serde_json::to_value(&kappa).unwrap());
        assert_eq!(
            r["extendibility_number"],
            serde_json::to_value(extendibility::extendibility_number(&g)).unwrap()
        );
        for k in 0..=2 {
            let cert = extendibility::is_k_extendible(&g, k);
            assert_eq!(r["certificates"][k], serde_json::to_value(&cert).unwrap());
        }
    }
}

#[test]
fn gen_and_convert_round_trip() {
    let a = kext(&["gen", "--random", "8", "10", "42"], "", &[]);
    let b = kext(&["gen", "--random", "8", "10", "42"], "", &[]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.text().lines().count(), 10);

    let three = kext(&["gen", "--exhaustive", "3"], "", &[]);
    assert_eq!(three.text(), "B?\nBG\nBO\nBW\nB_\nBg\nBo\nBw\n");

    let edges = kext(&["convert", "--from", "g6", "--to", "edges"], a.text(), &[]);
    let back = kext(&["convert", "--from", "edges", "--to", "g6"], edges.text(), &[]);
    assert_eq!(back.stdout, a.stdout);

    assert_eq!(kext(&["convert", "--from", "edges", "--to", "g6"], "2\n0 1\n", &[]).text(), "A_\n");
    assert_eq!(kext(&["convert", "--from", "g6", "--to", "edges"], "A_\n", &[]).text(), "2\n0 1\n");
}

#[test]
fn analyze_output_order_ignores_worker_count() {
    let corpus = kext(&["gen", "--random", "10", "40", "5"], "", &[]);
    let input = corpus.text().to_string();
    let one = kext(&["analyze"], &input, &[(kext_cli::WORKERS_ENV, "1")]);
    let four = kext(&["analyze"], &input, &[(kext_cli::WORKERS_ENV, "4")]);
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout, four.stdout);
    let bad = kext(&["analyze"], &input, &[(kext_cli::WORKERS_ENV, "many")]);
    assert_eq!(bad.code, 2);
}
