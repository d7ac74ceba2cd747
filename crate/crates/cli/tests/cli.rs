//! End-to-end tests of the `qwhash` binary: flag handling, exit codes,
//! config precedence, and report-file determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qwhash(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwhash"))
        .args(args)
        .env_remove("QWHASH_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn kv_value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("missing {key} in {text}"))
}

#[test]
fn hash_prints_bits_hex_and_fingerprint() {
    let out = qwhash(&["hash", "--message", "1011001", "--format", "kv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(kv_value(&text, "bits").len(), 165);
    assert_eq!(kv_value(&text, "hex").len(), 42);
    assert!(kv_value(&text, "fingerprint").starts_with("n=15;k=11;"));
}

#[test]
fn hash_is_deterministic_across_runs() {
    let a = stdout(&qwhash(&["hash", "--message", "111000111", "--format", "kv"]));
    let b = stdout(&qwhash(&["hash", "--message", "111000111", "--format", "kv"]));
    assert_eq!(a, b);
}

#[test]
fn hash_requires_exactly_one_input_source() {
    let none = qwhash(&["hash"]);
    assert_eq!(none.status.code(), Some(1));
    let both = qwhash(&["hash", "--message", "101", "--bytes", "/no/such/file"]);
    assert_eq!(both.status.code(), Some(1));
}

#[test]
fn hash_rejects_malformed_messages_and_parameters() {
    assert_eq!(qwhash(&["hash", "--message", "10x1"]).status.code(), Some(1));
    assert_eq!(qwhash(&["hash", "--message", ""]).status.code(), Some(1));
    assert_eq!(
        qwhash(&["hash", "--message", "101", "--t", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qwhash(&["hash", "--message", "101", "--coin", "penny"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qwhash(&["hash", "--input-file", "/no/such/file"]).status.code(),
        Some(1)
    );
}

#[test]
fn byte_input_expands_msb_first() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("input.bin");
    fs::write(&path, [0xA5u8]).unwrap();
    let from_bytes = stdout(&qwhash(&[
        "hash",
        "--bytes",
        path.to_str().unwrap(),
        "--format",
        "kv",
    ]));
    let from_bits = stdout(&qwhash(&["hash", "--message", "10100101", "--format", "kv"]));
    assert_eq!(kv_value(&from_bytes, "bits"), kv_value(&from_bits, "bits"));
}

#[test]
fn degenerate_evolution_exits_with_runtime_status() {
    // Starting outside the self-loop block, a 0 bit projects the state to
    // zero and the hash aborts.
    let out = qwhash(&["hash", "--message", "0", "--initial-coin", "left"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("degenerate"), "{err}");
}

#[test]
fn analyze_is_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (out_dir, threads) in [(&a, "1"), (&b, "1"), (&c, "2")] {
        let out = qwhash(&[
            "analyze",
            "--trials",
            "200",
            "--msg-len",
            "24",
            "--seed",
            "42",
            "--threads",
            threads,
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    for name in [
        "collision.kv",
        "collision_omega_histogram.csv",
        "avalanche.kv",
        "uniformity.kv",
        "uniformity_toggles.csv",
        "summary.txt",
    ] {
        let first = fs::read(a.join(name)).unwrap();
        assert_eq!(first, fs::read(b.join(name)).unwrap(), "{name} differs across runs");
        assert_eq!(first, fs::read(c.join(name)).unwrap(), "{name} differs across threads");
    }
}

#[test]
fn analyze_reports_embed_fingerprint_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    let out = qwhash(&[
        "analyze",
        "--trials",
        "50",
        "--seed",
        "9",
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--format",
        "kv",
    ]);
    assert!(out.status.success());
    let kv = stdout(&out);
    assert!(kv.contains("seed=9"));
    assert!(kv.contains("fingerprint=n=15;k=11;"));
    let csv = fs::read_to_string(out_dir.join("uniformity_toggles.csv")).unwrap();
    assert!(csv.starts_with("# fingerprint=n=15"));
    assert!(csv.lines().nth(1).unwrap().starts_with("# seed=9"));
}

#[test]
fn sensitivity_csv_lists_three_conditions() {
    let out = qwhash(&[
        "sensitivity",
        "--message",
        "110100101101",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("condition,distance"));
    assert!(text.contains("C2,"));
    assert!(text.contains("C4,"));
    // too-short messages are usage errors
    assert_eq!(qwhash(&["sensitivity", "--message", "101"]).status.code(), Some(1));
}

#[test]
fn birthday_prints_the_bound() {
    let out = qwhash(&["birthday"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("O(2^82.5)"));
    let kv = stdout(&qwhash(&["birthday", "--format", "kv"]));
    assert_eq!(kv_value(&kv, "attack_exponent"), "82.5");
    let small = stdout(&qwhash(&["birthday", "--n", "2", "--k", "2", "--initial-vertex", "0", "--format", "kv"]));
    assert_eq!(kv_value(&small, "complexity"), "O(2^2)");
}

#[test]
fn selftest_passes() {
    let out = qwhash(&["selftest"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("selftest passed"));
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("qwhash.cfg");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn changing_n_recentres_the_start_vertex() {
    // without an explicit --initial-vertex the walker starts at n/2
    let out = stdout(&qwhash(&["hash", "--message", "101", "--n", "7", "--format", "kv"]));
    assert!(kv_value(&out, "fingerprint").contains("n=7;"));
    assert!(kv_value(&out, "fingerprint").contains("iv=3;"));
    // an explicit start vertex is honoured
    let out = stdout(&qwhash(&[
        "hash", "--message", "101", "--n", "7", "--initial-vertex", "0", "--format", "kv",
    ]));
    assert!(kv_value(&out, "fingerprint").contains("iv=0;"));
    // an out-of-range explicit start vertex is a usage error
    assert_eq!(
        qwhash(&["hash", "--message", "101", "--n", "7", "--initial-vertex", "7"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n=7\nk=5\niv=3\n");
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_qwhash"))
            .args(args)
            .env("QWHASH_CONFIG", &cfg)
            .output()
            .unwrap();
        (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
    };

    // config applies: 7 * 5 = 35 output bits
    let (code, text) = run(&["hash", "--message", "101", "--format", "kv"]);
    assert_eq!(code, Some(0));
    assert_eq!(kv_value(&text, "bits").len(), 35);

    // flags beat the config file
    let (code, text) = run(&["hash", "--message", "101", "--k", "6", "--format", "kv"]);
    assert_eq!(code, Some(0));
    assert_eq!(kv_value(&text, "bits").len(), 42);
    assert!(kv_value(&text, "fingerprint").contains("n=7;k=6;"));

    // --params-default ignores the config file entirely
    let (code, text) = run(&["hash", "--message", "101", "--params-default", "--format", "kv"]);
    assert_eq!(code, Some(0));
    assert_eq!(kv_value(&text, "bits").len(), 165);

    // a broken config file is a usage error
    let bad = write_config(dir.path(), "bogus=1\n");
    let out = Command::new(env!("CARGO_BIN_EXE_qwhash"))
        .args(["hash", "--message", "101"])
        .env("QWHASH_CONFIG", &bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
