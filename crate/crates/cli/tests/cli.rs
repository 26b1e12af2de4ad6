//! End-to-end runs of the `nec` binary. Golden outputs live in
//! `tests/golden`; set `NEC_BLESS=1` to rewrite them after an intended
//! schema change.

use nec_core::coding::GNumber;
use nec_core::corpus::one_variable;
use nec_core::logic::Logic;
use nec_core::prover::{decide, Prover};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn fixture(name: &str) -> String {
    dir("fixtures").join(name).to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn nec(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_nec")).args(args).output().expect("spawn nec");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn golden(name: &str, args: &[&str], code: i32) {
    let r = nec(args);
    assert_eq!(r.code, code, "{args:?}: stderr {}", r.stderr);
    let path = dir("golden").join(name);
    if std::env::var_os("NEC_BLESS").is_some() {
        std::fs::write(&path, &r.stdout).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(r.stdout, want, "golden {name}");
}

fn temp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("nec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

#[test]
fn golden_decide() {
    golden("decide_nd_provable.json", &["decide", "ND", "~([]p & []~p)"], 0);
    golden("decide_nd4_unprovable.json", &["decide", "ND4", "([]~~p -> []p) & ([]p -> []~~p)"], 1);
    golden("decide_np_pretty.txt", &["decide", "--logic", "NP", "~[]false", "--pretty"], 0);
}

#[test]
fn golden_closure() {
    golden("closure.json", &["closure", "[]~p -> q"], 0);
}

#[test]
fn golden_check_frame() {
    golden("check_frame_np.json", &["check-frame", &fixture("np_empty_bot.json"), "NP"], 1);
    golden("check_frame_nr4.json", &["check-frame", &fixture("chain.json"), "NR4"], 1);
    golden("check_frame_n.json", &["check-frame", &fixture("chain.json"), "N"], 0);
}

#[test]
fn golden_check_model() {
    golden("check_model_all.json", &["check-model", &fixture("chain.json"), "[]q -> p"], 1);
    golden("check_model_world.json", &["check-model", &fixture("chain.json"), "p", "--world", "2"], 0);
}

#[test]
fn golden_repair() {
    // Transitive for the p-indices of [][]p but not for q.
    let frame = fixture("gamma.json");
    assert_eq!(nec(&["check-frame", &frame, "transitive"]).code, 1);
    let dot = temp("repair.dot");
    golden("repair.json", &["repair", &frame, "[][]p", "--dot", dot.to_str().unwrap()], 0);
    let dot = std::fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("digraph"), "{dot}");
    let repaired = temp("repaired.json");
    let r = nec(&["repair", &frame, "[][]p", "--out", repaired.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(nec(&["check-frame", repaired.to_str().unwrap(), "transitive"]).code, 0);
}

#[test]
fn golden_simulate() {
    golden("simulate_j.json", &["simulate", &fixture("scenario_j.json")], 0);
    golden("simulate_taut.json", &["simulate", &fixture("scenario_taut.json"), "--horizon", "8"], 0);
}

#[test]
fn golden_enumerate() {
    golden("enumerate_np_2.jsonl", &["enumerate", "NP", "2"], 0);
    golden("enumerate_nd4_3_pretty.txt", &["enumerate", "--logic", "ND4", "3", "--pretty"], 0);
}

#[test]
fn enumerate_is_in_code_order() {
    let r = nec(&["enumerate", "N", "4"]);
    assert_eq!(r.code, 0);
    let gns: Vec<GNumber> = r
        .stdout
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["gn"].as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(gns.len(), one_variable(4).len());
    assert!(gns.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn certify_accepts_decide_output_and_rejects_tampering() {
    for (l, f) in [("ND", "~([]p & []~p)"), ("ND4", "([]~~p -> []p) & ([]p -> []~~p)")] {
        let v = temp(&format!("verdict-{l}.json"));
        nec(&["decide", l, f, "--out", v.to_str().unwrap()]);
        let r = nec(&["certify", v.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        assert_eq!(serde_json::from_str::<Value>(&r.stdout).unwrap()["verified"], true);

        // Claim the verdict for a different formula.
        let mut j: Value = serde_json::from_str(&std::fs::read_to_string(&v).unwrap()).unwrap();
        j["formula"] = Value::from("p -> p");
        std::fs::write(&v, j.to_string()).unwrap();
        assert_eq!(nec(&["certify", v.to_str().unwrap()]).code, 1, "{l}");
    }
}

#[test]
fn decide_then_check_model_refutes_every_unprovable_formula() {
    let corpus = one_variable(4);
    let mut checked = 0;
    for l in Logic::ALL {
        let prover = Prover::new(l);
        for a in &corpus {
            if decide(&prover, a).unwrap().is_provable() {
                continue;
            }
            let (ls, fs) = (l.to_string(), a.to_string());
            let v = temp(&format!("rt-{ls}.json"));
            let r = nec(&["decide", &ls, &fs, "--out", v.to_str().unwrap()]);
            assert_eq!(r.code, 1, "{ls} {fs}");
            let r = nec(&["check-model", v.to_str().unwrap(), &fs, "--logic", &ls]);
            assert_eq!(r.code, 1, "{ls} {fs}: {}", r.stdout);
            let j: Value = serde_json::from_str(&r.stdout).unwrap();
            assert_eq!(j["forced"], false);
            assert_eq!(j["inFrameClass"], true, "{ls} {fs}");
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn decide_writes_dot() {
    let dot = temp("cm.dot");
    let r = nec(&["decide", "N", "[]p -> [][]p", "--dot", dot.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(std::fs::read_to_string(dot).unwrap().contains("digraph"));
}

#[test]
fn errors_are_one_json_line_with_exit_codes() {
    let cases: [(&[&str], i32, &str); 8] = [
        (&["decide", "NR", "p"], 2, "usage"),
        (&["decide", "ND", "p &"], 2, "usage"),
        (&["decide", "p"], 2, "usage"),
        (&["decide", "ND", "p", "--logic", "NP"], 2, "usage"),
        (&["decide", "ND", "p", "--oracle-depth", "0"], 2, "usage"),
        (&["--frobnicate", "closure", "p"], 2, "usage"),
        (&["check-frame", "/nonexistent/frame.json", "NP"], 2, "input"),
        (&["check-frame", "-", "elliptic"], 2, "input"),
    ];
    for (args, code, kind) in cases {
        let r = nec(args);
        assert_eq!(r.code, code, "{args:?}");
        assert!(r.stdout.is_empty());
        assert_eq!(r.stderr.lines().count(), 1, "{args:?}: {}", r.stderr);
        let e: Value = serde_json::from_str(&r.stderr).unwrap();
        assert_eq!(e["error"], kind, "{args:?}");
        assert!(e["reason"].as_str().is_some_and(|s| !s.is_empty()));
    }
    assert_eq!(nec(&["check-frame", &fixture("chain.json"), "elliptic"]).code, 2);
}

#[test]
fn pretty_simulate_lists_claims() {
    let r = nec(&["simulate", &fixture("scenario_j.json"), "--pretty"]);
    assert_eq!(r.code, 0);
    for claim in ["switch", "fidelity", "d", "four", "tail-filter", "no-bot"] {
        assert!(r.stdout.lines().any(|l| l.trim() == format!("pass {claim}")), "{claim}: {}", r.stdout);
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(nec(&["--help"]).code, 0);
    assert_eq!(nec(&["--version"]).code, 0);
}
