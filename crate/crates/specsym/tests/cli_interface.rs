//! Drives the installed binary end to end: caching, document round-trips,
//! exit codes, and output stability.

use std::path::Path;
use std::process::{Command, Output};

fn specsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn chain_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();

    let first = specsym(&["chain", "--max-k", "2", "--cache-dir", cache]);
    assert_eq!(code_of(&first), 0);
    assert!(stdout_of(&first).contains("written to"));
    assert!(dir.path().join("chain_k2.v1.json").exists());

    let second = specsym(&["chain", "--max-k", "2", "--cache-dir", cache]);
    assert_eq!(code_of(&second), 0);
    let text = stdout_of(&second);
    assert!(text.contains("loaded from"));
    // The cache hit is still re-verified by default.
    assert!(text.contains("all levels pass"));

    let trusted = specsym(&["chain", "--max-k", "2", "--cache-dir", cache, "--trust-cache"]);
    assert_eq!(code_of(&trusted), 0);
    assert!(stdout_of(&trusted).contains("skipped"));
}

#[test]
fn chain_json_output_is_deterministic() {
    let a = specsym(&["chain", "--max-k", "2", "--format", "json"]);
    let b = specsym(&["chain", "--max-k", "2", "--format", "json"]);
    assert_eq!(code_of(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&a)).unwrap();
    assert_eq!(doc["arity"], 2);
    assert_eq!(doc["document"]["format_version"], 1);
    assert_eq!(doc["verification"]["all_ok"], true);
    assert_eq!(doc["levels"].as_array().unwrap().len(), 2);
}

#[test]
fn corrupted_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let path = dir.path().join("chain_k2.v1.json");

    assert_eq!(code_of(&specsym(&["chain", "--max-k", "2", "--cache-dir", cache])), 0);
    std::fs::write(&path, "{\"format_version\":99}").unwrap();
    let broken = specsym(&["chain", "--max-k", "2", "--cache-dir", cache]);
    assert_eq!(code_of(&broken), 3);
    assert!(!broken.stderr.is_empty());
}

fn write_seed_doc(path: &Path, coeff: &str) {
    let doc = format!(
        "{{\"kind\":\"mixed\",\"arity\":1,\"weight\":1,\"terms\":[\
         {{\"partition\":[],\"coeff\":\"{coeff}\"}},\
         {{\"partition\":[1],\"coeff\":\"1\"}}]}}\n"
    );
    std::fs::write(path, doc).unwrap();
}

#[test]
fn verify_passes_and_fails_honestly() {
    let dir = tempfile::tempdir().unwrap();

    let good = dir.path().join("good.json");
    write_seed_doc(&good, "-d1");
    let ok = specsym(&["verify", "--input", good.to_str().unwrap()]);
    assert_eq!(code_of(&ok), 0);
    assert!(stdout_of(&ok).contains("PASS"));

    // Same document with one damaged coefficient drops to exit 1.
    let bad = dir.path().join("bad.json");
    write_seed_doc(&bad, "-2*d1");
    let fail = specsym(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(code_of(&fail), 1);
    assert!(stdout_of(&fail).contains("FAIL"));

    // Numeric weights work too.
    let numeric = specsym(&["verify", "--input", good.to_str().unwrap(), "--weights", "5"]);
    assert_eq!(code_of(&numeric), 0);
}

#[test]
fn exit_codes_cover_the_contract() {
    // Usage trouble: unknown flags, unknown subcommands, missing modes.
    assert_eq!(code_of(&specsym(&["chain", "--no-such-flag"])), 3);
    assert_eq!(code_of(&specsym(&["frobnicate"])), 3);
    assert_eq!(code_of(&specsym(&["search", "--weights", "2,3"])), 3);
    assert_eq!(code_of(&specsym(&["verify", "--input", "/nonexistent.json"])), 3);

    // Help and version are not errors.
    assert_eq!(code_of(&specsym(&["--help"])), 0);
    assert_eq!(code_of(&specsym(&["chain", "--help"])), 0);

    // Budget exhaustion is its own code.
    let starved = specsym(&["bench", "--max-k", "3", "--term-budget", "50"]);
    assert_eq!(code_of(&starved), 2);

    // Failed mathematical checks exit 1.
    assert_eq!(code_of(&specsym(&["reduce", "--weights", "1,-1", "--power", "5"])), 1);
    let not_zero_sum = specsym(&["obstruction", "--weights", "2,3", "--subset", "1"]);
    assert_eq!(code_of(&not_zero_sum), 1);
}

#[test]
fn analysis_commands_report_cleanly() {
    let hankel = specsym(&["hankel", "--arity", "2", "--max-offset", "2"]);
    assert_eq!(code_of(&hankel), 0);
    assert!(stdout_of(&hankel).contains("every scanned determinant vanishes"));

    let obstruction = specsym(&["obstruction", "--weights", "1,2,-3", "--format", "json"]);
    assert_eq!(code_of(&obstruction), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&obstruction)).unwrap();
    assert_eq!(doc["subset"], serde_json::json!([1, 2, 3]));
    assert_eq!(doc["all_powers_vanish"], true);

    let search = specsym(&["search", "--weights", "2,3", "--minimal", "--format", "json"]);
    assert_eq!(code_of(&search), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&search)).unwrap();
    assert_eq!(doc["mixed_verdict"], "MATCH");
    assert_eq!(doc["found_mixed_weight"], 3);

    let multilinear = specsym(&["multilinear", "--chain", "1"]);
    assert_eq!(code_of(&multilinear), 0);
    assert!(stdout_of(&multilinear).contains("PASS"));

    let reduce = specsym(&["reduce", "--weights", "2,3", "--power", "7", "--format", "json"]);
    assert_eq!(code_of(&reduce), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&reduce)).unwrap();
    assert_eq!(doc["check"], "exact");
}

#[test]
fn sampled_scans_are_reproducible() {
    let args = [
        "hankel", "--arity", "3", "--max-offset", "4", "--mode", "sampled", "--count", "10",
        "--seed", "77", "--format", "json",
    ];
    let a = specsym(&args);
    let b = specsym(&args);
    assert_eq!(code_of(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
