use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use factn_cli::commands::COMMAND_TABLE;
use factn_cli::document::Document;
use factn_core::factcat::{random_factorization, random_morphism};
use factn_core::named_backends;
use proptest::prelude::*;
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", self.stdout, self.stderr))
    }

    fn check(&self, name: &str) -> Option<bool> {
        self.json()["checks"].as_array()?.iter().find(|c| c["name"] == name).and_then(|c| c["pass"].as_bool())
    }
}

fn factn(args: &[&str]) -> Run {
    factn_env(args, &[])
}

fn factn_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_factn"));
    cmd.args(args).env_remove("FACTN_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("the binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_accepts_the_corpus() {
    for name in ["fp5.json", "xy.json", "x4.json", "graded.json", "twist.json", "concentrated.json"] {
        let r = factn(&["validate", p(&corpus(name))]);
        assert_eq!(r.code, 0, "{name}: {}", r.stderr);
        assert_eq!(r.check("document.round_trip"), Some(true));
    }
}

#[test]
fn report_envelope_fields() {
    let r = factn(&["validate", p(&corpus("xy.json"))]);
    let v = r.json();
    assert_eq!(v["tool"]["name"], "factn");
    assert_eq!(v["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["seed"].is_null());
    let summary = &v["summary"];
    assert_eq!(summary["fail"], 0);
    for c in v["checks"].as_array().unwrap() {
        let d = c["inputs_digest"].as_str().unwrap();
        assert_eq!(d.len(), 64);
        assert!(d.chars().all(|ch| ch.is_ascii_hexdigit()));
    }
}

#[test]
fn suite_example_runs_every_axiom() {
    let r = factn(&["suite", "--backend", p(&corpus("fp5.json")), "--n", "4", "--samples", "50", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    let names: BTreeSet<String> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap().split('.').next().unwrap().to_string())
        .collect();
    for axiom in ["RTR1", "RTR2", "RTR3", "RTR4", "Sigma"] {
        assert!(names.contains(axiom), "{names:?}");
    }
    assert_eq!(v["seed"], 7);
    let seeds: BTreeSet<u64> = v["checks"].as_array().unwrap().iter().map(|c| c["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds.len(), 50);
}

#[test]
fn paper_mode_deflation_of_the_concentrated_object_fails_at_component_two() {
    let doc = corpus("concentrated.json");
    let r = factn(&["frobenius", "--deflation", "--mode", "paper", "--input", p(&doc)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.check("deflation.surjective[2]"), Some(false));
    assert_eq!(r.json()["values"]["failing_component"], 2);
    let full = factn(&["frobenius", "--deflation", "--mode", "full", "--input", p(&doc)]);
    assert_eq!(full.code, 0);
}

#[test]
fn invalid_composite_is_reported_at_index_zero() {
    let r = factn(&["validate", p(&fixture("bad-index0.json"))]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("/factorizations/X"), "{}", r.stderr);
    assert!(r.stderr.contains("composite[0]"), "{}", r.stderr);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(factn(&["no-such-command"]).code, 2);
    assert_eq!(factn(&[]).code, 2);
    // randomized commands refuse to pick a seed
    let r = factn(&["suite", p(&corpus("fp5.json"))]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--seed"));
    assert_eq!(factn(&["adjoint-identities", p(&corpus("graded.json"))]).code, 2);
    assert_eq!(factn(&["validate", "/nonexistent/doc.json"]).code, 2);
    assert_eq!(factn(&["sum", p(&corpus("xy.json")), "--x", "X", "--y", "Nope"]).code, 2);
    assert_eq!(factn_env(&["validate", p(&corpus("xy.json"))], &[("FACTN_THREADS", "zero")]).code, 2);
    assert_eq!(factn(&["--help"]).code, 0);
    assert_eq!(factn(&["--version"]).code, 0);
}

#[test]
fn unsuspend_needs_an_invertible_twist() {
    let r = factn(&["unsuspend", p(&corpus("twist.json"))]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("quasi-inverse"), "{}", r.stderr);
    assert_eq!(factn(&["unsuspend", p(&corpus("graded.json"))]).code, 0);
}

#[test]
fn printed_cone_isomorphism_is_a_finding() {
    let doc = corpus("xy.json");
    assert_eq!(factn(&["cone", p(&doc), "--homotopy", "h"]).code, 0);
    let r = factn(&["cone", p(&doc), "--homotopy", "h", "--printed"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.check("lambda_valid"), Some(false));
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn schema_error(text: &str) -> String {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "doc.json", text);
    let r = factn(&["validate", p(&path)]);
    assert_eq!(r.code, 2, "{text}");
    r.stderr
}

#[test]
fn schema_errors_carry_json_pointers() {
    let backend = r#""backend":{"kind":"poly-classical","field":{"kind":"Q"},"vars":["x","y"],"w":"x*y"}"#;
    let cases = [
        (format!(r#"{{{backend},"factorizations":{{"X":{{"n":2,"ranks":[1,1],"d":[[["x","y"]],[["y"]]]}}}}}}"#), "/factorizations/X/d/0/0"),
        (format!(r#"{{{backend},"factorizations":{{"X":{{"n":2,"ranks":[1,1],"d":[[["x+"]],[["y"]]]}}}}}}"#), "/factorizations/X/d/0/0/0"),
        (format!(r#"{{{backend},"factorizations":{{"X":{{"n":3,"ranks":[1,1],"d":[]}}}}}}"#), "/factorizations/X/ranks"),
        (format!(r#"{{{backend},"morphisms":{{"f":{{"from":"X","to":"X","comps":[]}}}}}}"#), "/morphisms/f/from"),
        (format!(r#"{{{backend},"colour":1}}"#), "/colour"),
        (r#"{"factorizations":{}}"#.to_string(), "/backend"),
        (format!(r#"{{{backend},"options":{{"seed":-1}}}}"#), "/options/seed"),
        (
            format!(
                r#"{{{backend},"factorizations":{{"X":{{"n":2,"ranks":[1,1],"d":[[["x"]],[["y"]]]}}}},"morphisms":{{"X":{{"from":"X","to":"X","comps":[[["1"]],[["1"]]]}}}}}}"#
            ),
            "/morphisms/X",
        ),
    ];
    for (text, pointer) in cases {
        let err = schema_error(&text);
        assert!(err.contains(&format!("`{pointer}`")), "expected {pointer} in {err}");
    }
    assert!(schema_error("{not json").contains("malformed JSON"));
}

#[test]
fn out_and_emit_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let emit = dir.path().join("result.json");
    let r = factn(&["sum", p(&corpus("xy.json")), "--x", "X", "--y", "Y", "--out", p(&out), "--emit", p(&emit)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["command"], "sum");
    let doc = Document::load(&emit).unwrap();
    assert_eq!(doc.factorizations["sum"].ranks(), vec![2, 2]);
    assert_eq!(std::fs::read_to_string(&emit).unwrap(), doc.to_canonical_string());
}

/// Chains commands through emitted documents over a field backend.
#[test]
fn exact_structure_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n);
    let ok = |args: &[&str]| {
        let r = factn(args);
        assert_eq!(r.code, 0, "{args:?}: {}{}", r.stdout, r.stderr);
        r
    };
    let fp5 = corpus("fp5.json");
    ok(&["suite", p(&fp5), "--kind", "generate", "--n", "4", "--samples", "1", "--max-rank", "2", "--seed", "5", "--emit", p(&d("a.json"))]);
    ok(&["frobenius", p(&d("a.json")), "--deflation", "--x", "random0", "--emit", p(&d("b.json"))]);
    ok(&["kernel", p(&d("b.json")), "--f", "cover.deflation", "--emit", p(&d("c.json"))]);
    ok(&["conflation", p(&d("c.json")), "--l", "ker.k", "--p", "cover.deflation"]);
    let lift = ok(&[
        "conflation", p(&d("c.json")), "--l", "ker.k", "--p", "cover.deflation", "--projective", "cover", "--f", "cover.deflation",
    ]);
    assert_eq!(lift.check("lift"), Some(true));
    ok(&["cokernel", p(&d("c.json")), "--f", "ker.k", "--factor", "cover.deflation"]);
    ok(&["pullback", p(&d("c.json")), "--p", "cover.deflation", "--f", "cover.deflation"]);
    ok(&["frobenius", p(&d("c.json")), "--inflation", "--x", "random0", "--name", "infl", "--emit", p(&d("e.json"))]);
    ok(&["pushout", p(&d("e.json")), "--l", "infl.inflation", "--f", "infl.inflation"]);
    // the cover source is a sum of theta objects, so the cover is stably zero
    let sz = ok(&["stably-zero", p(&d("e.json")), "--f", "cover.deflation"]);
    assert_eq!(sz.check("stably_zero"), Some(true));
}

#[test]
fn triangle_commands() {
    let xy = corpus("xy.json");
    let x4 = corpus("x4.json");
    for args in [
        vec!["cone", p(&xy), "--f", "f"],
        vec!["cone", p(&xy), "--identity", "X"],
        vec!["rotate", p(&xy), "--f", "f"],
        vec!["fill", p(&xy), "--f1", "f", "--f2", "g", "--alpha", "idX", "--beta", "idY", "--homotopy", "h"],
        vec!["octahedron", p(&x4), "--f", "f", "--g", "g"],
        vec!["suspend", p(&xy), "--x", "X"],
        vec!["suspend", p(&xy), "--x", "X", "--shift"],
        vec!["suspend", p(&xy), "--f", "f"],
        vec!["suspend", p(&xy), "--homotopy", "h"],
        vec!["homotopy", p(&xy), "--verify", "--h", "h"],
        vec!["homotopy", p(&xy), "--solve", "--f", "f", "--g", "g"],
        vec!["contractible", p(&x4), "--x", "Z"],
    ] {
        let r = factn(&args);
        assert_eq!(r.code, 0, "{args:?}: {}{}", r.stdout, r.stderr);
    }
    // (x, y) has no bounded contraction: the polynomial search is inconclusive
    let r = factn(&["contractible", p(&xy), "--x", "X"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["checks"][0]["detail"], "unknown");
}

#[test]
fn frobenius_commands() {
    let fp5 = corpus("fp5.json");
    let xy = corpus("xy.json");
    let theta = factn(&["theta", p(&fp5), "--s", "1", "--n", "4", "--rank", "2"]);
    assert_eq!(theta.code, 0);
    assert_eq!(theta.json()["result"]["factorizations"]["theta"]["ranks"], serde_json::json!([2, 2, 2, 2]));
    let proj = factn(&["theta", p(&xy), "--s", "1", "--x", "X"]);
    assert_eq!(proj.json()["values"]["object"]["rank"], 1);
    let proj = factn(&["theta", p(&xy), "--s", "0", "--f", "f"]);
    assert_eq!(proj.json()["values"]["matrix"], serde_json::json!([["x"]]));

    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    for adj in ["1", "3"] {
        let r = factn(&["transpose", p(&xy), "--adj", adj, "--dir", "fwd", "--x", "X", "--rank", "1", "--g", r#"[["x+y"]]"#, "--emit", p(&t)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let back = factn(&["transpose", p(&t), "--adj", adj, "--dir", "bwd", "--m", "transposed"]);
        assert_eq!(back.code, 0, "{}", back.stdout);
        assert_eq!(back.json()["values"]["matrix"], serde_json::json!([["x + y"]]));
    }
    let graded = corpus("graded.json");
    for adj in ["2", "4"] {
        let r = factn(&["transpose", p(&graded), "--adj", adj, "--dir", "fwd", "--x", "X", "--degrees", "0", "--g", r#"[["x"]]"#]);
        assert_eq!(r.code, 0, "adj {adj}: {}{}", r.stdout, r.stderr);
    }
    assert_eq!(factn(&["transpose", p(&xy), "--adj", "5", "--dir", "fwd"]).code, 2);
    let ids = factn(&["adjoint-identities", p(&graded), "--seed", "3", "--samples", "20"]);
    assert_eq!(ids.code, 0);
    assert_eq!(ids.json()["seed"], 3);
    let c0 = corpus("concentrated.json");
    assert_eq!(factn(&["stably-zero", p(&c0), "--x", "K"]).code, 1);
    let v = factn(&["validate", p(&xy), "--iso", "idX", "--iso", "f"]);
    assert_eq!(v.code, 1);
    assert_eq!(v.check("morphism:idX.isomorphism"), Some(true));
    assert_eq!(v.check("morphism:f.isomorphism"), Some(false));
}

#[test]
fn suite_kinds() {
    let fp5 = corpus("fp5.json");
    for kind in ["axioms", "adjunctions", "homotopy-classes", "generate"] {
        let r = factn(&["suite", p(&fp5), "--kind", kind, "--seed", "2", "--samples", "3"]);
        assert_eq!(r.code, 0, "{kind}: {}", r.stderr);
    }
    let seq = factn(&["suite", p(&fp5), "--seed", "2", "--samples", "6", "--sequential"]);
    let par = factn(&["suite", p(&fp5), "--seed", "2", "--samples", "6"]);
    assert_eq!(seq.stdout, par.stdout);
    let odd = factn(&["suite", p(&fp5), "--seed", "2", "--n", "3"]);
    assert_eq!(odd.code, 2);
}

/// One invocation per subcommand; together they must touch the whole table.
#[test]
fn every_subcommand_runs() {
    let xy = corpus("xy.json");
    let fp5 = corpus("fp5.json");
    let c0 = corpus("concentrated.json");
    let graded = corpus("graded.json");
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.json");
    let kk = dir.path().join("kk.json");
    assert_eq!(factn(&["frobenius", p(&c0), "--deflation", "--emit", p(&k)]).code, 0);
    assert_eq!(factn(&["kernel", p(&k), "--f", "cover.deflation", "--emit", p(&kk)]).code, 0);
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", p(&xy)],
        vec!["sum", p(&xy), "--x", "X", "--y", "Y"],
        vec!["suspend", p(&xy), "--x", "X"],
        vec!["unsuspend", p(&xy), "--x", "X"],
        vec!["cone", p(&xy), "--f", "f"],
        vec!["rotate", p(&xy), "--f", "f"],
        vec!["fill", p(&xy), "--f1", "f", "--f2", "g", "--alpha", "idX", "--beta", "idY", "--homotopy", "h"],
        vec!["octahedron", p(&xy), "--f", "idX", "--g", "f"],
        vec!["homotopy", p(&xy), "--verify"],
        vec!["contractible", p(&k), "--x", "cover"],
        vec!["kernel", p(&k), "--f", "cover.deflation"],
        vec!["cokernel", p(&k), "--f", "cover.deflation"],
        vec!["conflation", p(&kk), "--l", "ker.k", "--p", "cover.deflation"],
        vec!["pullback", p(&k), "--p", "cover.deflation", "--f", "cover.deflation"],
        vec!["pushout", p(&kk), "--l", "ker.k", "--f", "ker.k"],
        vec!["theta", p(&fp5), "--s", "0", "--n", "2", "--rank", "1"],
        vec!["transpose", p(&xy), "--adj", "1", "--dir", "fwd", "--x", "X", "--rank", "1", "--g", r#"[["1"]]"#],
        vec!["frobenius", p(&c0), "--inflation"],
        vec!["stably-zero", p(&k), "--f", "cover.deflation"],
        vec!["adjoint-identities", p(&graded), "--seed", "1", "--samples", "5"],
        vec!["suite", p(&fp5), "--seed", "1", "--samples", "2"],
    ];
    let mut seen = BTreeSet::new();
    for args in &runs {
        let r = factn(args);
        assert!(r.code == 0 || r.code == 1, "{args:?} exited {}: {}{}", r.code, r.stdout, r.stderr);
        seen.insert(args[0]);
    }
    let table: BTreeSet<&str> = COMMAND_TABLE.iter().map(|(c, _)| *c).collect();
    assert_eq!(seen, table);
}

#[test]
fn thread_cap_does_not_change_reports() {
    let fp5 = corpus("fp5.json");
    let args = ["suite", p(&fp5), "--seed", "11", "--samples", "8"];
    let one = factn_env(&args, &[("FACTN_THREADS", "1")]);
    let four = factn_env(&args, &[("FACTN_THREADS", "4")]);
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn corpus_round_trips_byte_for_byte() {
    let dir = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let mut count = 0;
    for entry in dir {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = Document::load(&path).unwrap();
        assert_eq!(doc.to_canonical_string(), text, "{}", path.display());
        let copy = tmp.path().join("copy.json");
        doc.save(&copy).unwrap();
        assert_eq!(std::fs::read_to_string(&copy).unwrap(), text);
        count += 1;
    }
    assert!(count >= 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Documents built from random payloads survive save and load unchanged.
    #[test]
    fn random_documents_round_trip(backend in 0usize..8, n in prop::sample::select(vec![2usize, 4]), seed in 0u64..10_000) {
        let (_, b) = named_backends().into_iter().nth(backend).unwrap();
        let x = random_factorization(&b, n, 2, seed).unwrap();
        let y = random_factorization(&b, n, 2, seed + 1).unwrap();
        let f = random_morphism(&x, &y, seed).unwrap();
        let mut doc = Document::new(b.clone());
        doc.add_factorization("X", &x).unwrap();
        doc.add_factorization("Y", &y).unwrap();
        doc.add_morphism("f", &f).unwrap();
        doc.add_homotopy("h", &factn_core::homotopy::Homotopy::reflexive(&f)).unwrap();
        doc.options.seed = Some(seed);
        let text = doc.to_canonical_string();
        let again = Document::parse(&text).unwrap();
        prop_assert_eq!(again.to_canonical_string(), text);
        prop_assert_eq!(&again.factorizations["X"], &x);
        prop_assert!(again.morphisms["f"].morphism.same_comps(&f));
    }
}
