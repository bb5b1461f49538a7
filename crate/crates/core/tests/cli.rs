// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn juggle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_juggle")).args(args).output().expect("spawn juggle")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let key = dir.path().join("key.txt");
    let file = dir.path().join("juggle.txt");
    assert_eq!(code(&juggle(&["keygen", "--seed", "5", "--out", path(&key)])), 0);
    let o = juggle(&["juggle", "prove", "--segment-bits", "5", "--recipient", path(&key), "--out", path(&file)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&juggle(&["juggle", "verify", path(&file)])), 0);
    let o = juggle(&["juggle", "verify", path(&file), "--key", path(&key)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("xG = Q"));
}

#[test]
fn verify_rejects_truncated_and_tampered_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("juggle.txt");
    assert_eq!(code(&juggle(&["juggle", "prove", "--segment-bits", "4", "--out", path(&file)])), 0);
    let text = fs::read_to_string(&file).unwrap();

    // drop the last release
    let short: Vec<&str> = text.lines().collect();
    fs::write(&file, short[..short.len() - 1].join("\n")).unwrap();
    let o = juggle(&["juggle", "verify", path(&file)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("4 of 5 releases"));

    // cut mid-line
    fs::write(&file, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&juggle(&["juggle", "verify", path(&file)])), 1);

    // swap two releases
    let mut lines: Vec<&str> = text.lines().collect();
    let n = lines.len();
    lines.swap(n - 1, n - 2);
    fs::write(&file, lines.join("\n")).unwrap();
    assert_eq!(code(&juggle(&["juggle", "verify", path(&file)])), 1);
}

#[test]
fn usage_errors_exit_two() {
    for l in ["0", "1", "17"] {
        assert_eq!(code(&juggle(&["juggle", "prove", "--segment-bits", l, "--out", "/dev/null"])), 2);
        assert_eq!(code(&juggle(&["swap", "--segment-bits", l])), 2);
    }
    assert_eq!(code(&juggle(&["swap", "--adversary", "teleport"])), 2);
    assert_eq!(code(&juggle(&["swap", "--group", "p256"])), 2);
    assert_eq!(code(&juggle(&["swap", "--amount1", "500"])), 2);
    assert_eq!(code(&juggle(&["juggle", "verify", "/nonexistent/file"])), 2);
}

#[test]
fn swap_is_deterministic_and_audits_clean() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    let o = juggle(&["swap", "--seed", "1", "--out", path(&a)]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("advantage 0"));
    let frames = fs::read_to_string(&a).unwrap().lines().count();
    assert!(stdout.contains(&format!("messages: {frames} frames")));
    assert_eq!(code(&juggle(&["swap", "--seed", "1", "--out", path(&b)])), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(code(&juggle(&["audit", path(&a)])), 0);
}

#[test]
fn adversarial_swaps_exit_one() {
    let o = juggle(&["swap", "--adversary", "biased-segments=P1"]);
    assert_eq!(code(&o), 1);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("blaming P1"), "{stdout}");
    assert!(stdout.contains("setup bundle rejected"));

    let o = juggle(&["swap", "--adversary", "corrupt-proof=3:P2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("provider revoked: P2"));
}

#[test]
fn audit_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.txt");
    assert_eq!(code(&juggle(&["swap", "--adversary", "provider-withhold", "--out", path(&t)])), 1);
    let o = juggle(&["audit", path(&t)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("blame S"));

    fs::write(&t, "this is not a transcript\n").unwrap();
    assert_eq!(code(&juggle(&["audit", path(&t)])), 2);
}

#[test]
fn sweep_reports_bounded_advantage() {
    let o = juggle(&["sweep", "--segment-bits", "3"]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    // m = 7 at l = 3: eight abort points per owner
    assert!(stdout.contains("max advantage 1 over 16 runs"), "{stdout}");
}
