use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ilproof::search::{decide_il, SearchLimits};
use ilproof::{parse, Formula};

fn ilproof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilproof"))
        .args(args)
        .env_remove("ILPROOF_LOGIC")
        .env_remove("ILPROOF_FORMAT")
        .env_remove("ILPROOF_LIMITS")
        .env_remove("ILPROOF_PLAIN")
        .env_remove("ILPROOF_BATCH")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(format!("{name}.json"))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn equivalent(a: &Formula, b: &Formula) -> bool {
    decide_il(&Formula::iff(a, b), SearchLimits::default()).unwrap()
}

#[test]
fn prove_exit_codes() {
    assert_eq!(code(&ilproof(&["prove", "p |> q, q |> r => p |> r"])), 0);
    assert_eq!(code(&ilproof(&["prove", "=> p"])), 1);
    let bad = ilproof(&["prove", "=> p |>"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("syntax"));
    assert_eq!(code(&ilproof(&["--limits", "max_nodes=1", "prove", "=> ([]p -> p) |> p"])), 2);
}

#[test]
fn prove_emits_checkable_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("proof.json");
    let dot = dir.path().join("proof.dot");
    let o = ilproof(&["prove", "=> p |> ([]~p & p)", "--emit", s(&json), "--dot", s(&dot)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    assert_eq!(code(&ilproof(&["check", s(&json)])), 0);
    let o = ilproof(&["--format", "json", "prove", "=> []p -> [][]p"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["calculus"], "gil-slim");
}

#[test]
fn check_exit_codes() {
    let k = fixture("appendix_k");
    assert_eq!(code(&ilproof(&["check", s(&k)])), 0);
    let o = ilproof(&["check", "--calculus", "gil", s(&k)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("root/"), "node path printed: {}", stdout(&o));
    let dir = tempfile::tempdir().unwrap();
    let cut = dir.path().join("cut.json");
    let text = std::fs::read_to_string(&k).unwrap();
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&ilproof(&["check", s(&cut)])), 2);
    assert_eq!(code(&ilproof(&["check", s(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn translate_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cyc = dir.path().join("cyc.json");
    assert_eq!(code(&ilproof(&["prove", "=> <>p |> p", "--emit", s(&cyc)])), 0);
    let f = dir.path().join("f.json");
    let o = ilproof(&["translate", "--from", "cyclic", "--to", "fgil", s(&cyc), "-o", s(&f)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ilproof(&["check", "--calculus", "fgil", s(&f)])), 0);

    let h = dir.path().join("h.json");
    let o = ilproof(&["translate", "--from", "fgil-cut", "--to", "hilbert", s(&fixture("appendix_4")), "-o", s(&h)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ilproof(&["check", s(&h)])), 0);

    let fc = dir.path().join("fc.json");
    let o = ilproof(&["translate", "--from", "hilbert", "--to", "fgil-cut", s(&h), "-o", s(&fc)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ilproof(&["check", "--calculus", "fgil-cut", s(&fc)])), 0);

    let clean = dir.path().join("clean.json");
    assert_eq!(code(&ilproof(&["cutelim", s(&fc), "-o", s(&clean)])), 0);
    assert_eq!(code(&ilproof(&["check", "--calculus", "fgil", s(&clean)])), 0);

    let pre = dir.path().join("pre.json");
    let o = ilproof(&["translate", "--from", "fgil-cut", "--to", "gil-prefix", "--fuel", "1", s(&fc), "-o", s(&pre)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ilproof(&["check", "--allow-assumptions", s(&pre)])), 0);

    assert_eq!(code(&ilproof(&["translate", "--from", "cyclic", "--to", "hilbert", s(&cyc)])), 2);
}

#[test]
fn interpolate_and_fixpoint() {
    let o = ilproof(&["interpolate", "p & q", "--vocab", "p", "--verify-cap", "3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let iota = parse(out.lines().next().unwrap()).unwrap();
    assert!(equivalent(&iota, &Formula::atom("p")));
    assert!(out.contains("verification passed"));

    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let o = ilproof(&["--logic", "ilp", "interpolate", "p & q", "--vocab", "p", "--emit-template", s(&t)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&ilproof(&["check", s(&t)])), 0);

    let o = ilproof(&["fixpoint", "--var", "x", "~[]x"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let psi = parse(out.lines().next().unwrap()).unwrap();
    assert!(out.contains("certified"));
    assert!(equivalent(&psi, &parse("~[]F").unwrap()));
    assert_eq!(code(&ilproof(&["fixpoint", "--var", "x", "x"])), 2);
}

#[test]
fn config_from_environment_and_batch() {
    let o = Command::new(env!("CARGO_BIN_EXE_ilproof"))
        .args(["parse", "[]p"])
        .env("ILPROOF_FORMAT", "json")
        .env("ILPROOF_PLAIN", "true")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["printed"], "(p -> F) |> F");

    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("batch.txt");
    std::fs::write(&b, "=> p -> p\n# skipped\n\n=> q\n=> p |>\n").unwrap();
    let o = ilproof(&["--batch", s(&b), "prove"]);
    assert_eq!(code(&o), 2);
    let out = stdout(&o);
    let order: Vec<_> = out.lines().filter(|l| l.starts_with("# ")).collect();
    assert_eq!(order, ["# => p -> p", "# => q", "# => p |>"]);
    assert!(out.contains("error"));
    assert_eq!(code(&ilproof(&["--limits", "nodes=3", "parse", "p"])), 2);
}
