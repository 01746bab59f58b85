use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn cckit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cckit")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, stdout) = cckit(args);
    (code, serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {stdout}")))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn shipped_fixtures_are_current() {
    for (name, text) in cckit::fixtures::fixture_files() {
        let on_disk = std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, text, "{name} is stale; run the write_fixtures example");
    }
}

#[test]
fn verify_exit_codes() {
    assert_eq!(report(&["verify", &fixture("c3.ccm")]).0, 0);
    let (code, r) = report(&["verify", &fixture("c3_perturbed.ccm")]);
    assert_eq!(code, 1);
    assert!(r["witness"].is_object() || r["witness"].is_array(), "{r}");
    let missing = scratch("missing.ccm");
    assert_eq!(report(&["verify", missing.to_str().unwrap()]).0, 2);
    let empty = scratch("empty.ccm");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(report(&["verify", empty.to_str().unwrap()]).0, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cckit(&["--bogus"]).0, 2);
    assert_eq!(cckit(&["hadamard"]).0, 2);
    assert_eq!(cckit(&["--help"]).0, 0);
}

#[test]
fn quiet_lines() {
    let (code, out) = cckit(&["--quiet", "verify", &fixture("c3.ccm")]);
    assert_eq!((code, out.trim()), (0, "verify: pass"));
    let (code, out) = cckit(&["--quiet", "hadamard", &fixture("c9.ccm"), "--p", "3"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("hadamard: fail at hypothesis:"), "{out}");
}

#[test]
fn construct_matches_fixtures() {
    let out = scratch("c3.ccm");
    let (code, _) = report(&["construct", "-o", out.to_str().unwrap(), "cyclic", "3"]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(fixture("c3.ccm")).unwrap());
    let out = scratch("wreath.ccm");
    let (code, _) = report(&["construct", "-o", out.to_str().unwrap(), "wreath", &fixture("c3.ccm"), &fixture("c3.ccm")]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(fixture("c3wrc3.ccm")).unwrap());
    assert_eq!(report(&["verify", out.to_str().unwrap()]).0, 0);
    assert_eq!(cckit(&["construct", "cyclic", "3"]).0, 2);
}

#[test]
fn extend_reproduces_ext27() {
    let out = scratch("ext27.ccm");
    let (code, _) = report(&["extend", &fixture("coset27.ccm"), "-o", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(fixture("ext27.ccm")).unwrap());
    assert_eq!(report(&["verify", out.to_str().unwrap()]).0, 0);
}

#[test]
fn hadamard_pipeline() {
    let (code, r) = report(&["hadamard", &fixture("ext27.ccm"), "--p", "3"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["verdict"], "pass");
    let (code, _) = report(&["hadamard", &fixture("two_orbit_all_regular.ccm"), "--p", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn negative_controls() {
    let cases: [(&[&str], &str); 4] = [
        (&["verify", &fixture("c3_perturbed.ccm")], "coherence"),
        (&["hadamard", &fixture("c9.ccm"), "--p", "3"], "hypothesis"),
        (&["chain", "--cayley", &fixture("z27.cay"), "--subgroup", "0,9,18", "--p", "3"], "chain"),
        (&["gh-check", &fixture("repeated_row.gh")], "generalized hadamard"),
    ];
    for (args, stage) in cases {
        let (code, r) = report(args);
        assert_eq!(code, 1, "{args:?}");
        let failed = r["failed_stage"].as_str().unwrap_or_default();
        assert!(failed.contains(stage), "{args:?}: {failed}");
    }
}

#[test]
fn byte_determinism() {
    let args = ["hadamard", &fixture("three_orbit_all_n.ccm"), "--p", "3"];
    let (a, b) = (cckit(&args), cckit(&args));
    assert_eq!(a, b);
    let (x, y) = (scratch("wl_a.ccm"), scratch("wl_b.ccm"));
    for out in [&x, &y] {
        assert_eq!(cckit(&["wl", &fixture("four_cycle.ccm"), "-o", out.to_str().unwrap()]).0, 0);
    }
    assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap());
}

#[test]
fn point_limit() {
    let out = Command::new(env!("CARGO_BIN_EXE_cckit"))
        .env("CCKIT_MAX_POINTS", "8")
        .args(["verify", &fixture("c9.ccm")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
