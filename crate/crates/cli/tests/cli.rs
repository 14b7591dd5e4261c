use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FAIR: &str = r#"{"factors":[{"alphabet":2}],"mode":"strict",
    "generators":[{"depth":[1],"table":{"0":"1/2","1":"1/2"}}]}"#;
const BIASED: &str = r#"{"factors":[{"alphabet":2}],"mode":"strict",
    "generators":[{"depth":[1],"table":{"0":"1/3","1":"2/3"}}]}"#;
const BROKEN: &str = r#"{"factors":[{"alphabet":2}],"mode":"strict",
    "generators":[{"depth":[1],"table":{"0":"1/2","1":"3/4"}}]}"#;
const RELAXED: &str = r#"{"factors":[{"alphabet":2}],"mode":"relaxed",
    "generators":[{"depth":[1],"table":{"0":"1","1":"0"}}]}"#;
const KERNEL: &str = r#"{"Z":["z1","z2","z3"],"X":["x1","x2"],
    "pi":{"z1":"x1","z2":"x1","z3":"x2"},
    "rows":{"x1":["2/3","1/3","0"],"x2":["0","0","1"]}}"#;
const DEGENERATE: &str = r#"{"Z":["z1","z2","z3"],"X":["x1","x2"],
    "pi":{"z1":"x1","z2":"x1","z3":"x2"},
    "rows":{"x1":["1","0","0"],"x2":["0","0","1"]}}"#;

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(TempDir::new().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path: PathBuf = self.0.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }
}

fn dilator(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilator"))
        .args(args)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn statuses(report: &Value) -> Vec<String> {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap().to_string())
        .collect()
}

fn entry<'a>(report: &'a Value, check: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == check)
        .unwrap_or_else(|| panic!("no {check} entry"))
}

#[test]
fn axioms_on_fair_cocycle_pass() {
    let files = Files::new();
    let fair = files.write("fair.json", FAIR);
    let out = dilator(&["axioms", &fair, "--depth", "2", "--word-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(statuses(&r).iter().all(|s| s == "pass"));
    assert!(
        entry(&r, "gamma_composition")["instances"]
            .as_u64()
            .unwrap()
            > 0
    );
}

#[test]
fn validate_flags_broken_normalization() {
    let files = Files::new();
    let broken = files.write("broken.json", BROKEN);
    let out = dilator(&["validate", &broken]);
    assert_eq!(out.status.code(), Some(1));
    let norm = entry(&report(&out), "normalization").clone();
    assert_eq!(norm["status"], "fail");
    assert_eq!(norm["witness"]["sum"], "5/4");
    assert!(norm["witness"]["word"].is_string());
}

#[test]
fn validate_passes_biased() {
    let files = Files::new();
    let biased = files.write("biased.json", BIASED);
    let out = dilator(&["validate", &biased]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        entry(&report(&out), "positivity")["parameters"]["mode"],
        "strict"
    );
}

#[test]
fn solenoid_odd_monomial_vanishes() {
    let out = dilator(&["solenoid", "--omega", "w1", "--m", "1:1", "--samples", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let values = entry(&r, "evaluate")["witness"]["values"]
        .as_array()
        .unwrap()
        .clone();
    assert_eq!(values.len(), 8);
    for v in values {
        let (re, im) = (
            v["value"]["re"].as_f64().unwrap(),
            v["value"]["im"].as_f64().unwrap(),
        );
        assert!(re.hypot(im) <= 1e-12, "{v}");
    }
    assert_eq!(entry(&r, "classify")["parameters"]["class"], "index_finite");
}

#[test]
fn solenoid_even_monomial_is_a_power() {
    let out = dilator(&["solenoid", "--m", "1:2", "--samples", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for v in entry(&r, "evaluate")["witness"]["values"]
        .as_array()
        .unwrap()
    {
        assert!(
            (v["value"]["re"].as_f64().unwrap() - v["x"]["re"].as_f64().unwrap()).abs() <= 1e-9
        );
        assert!(
            (v["value"]["im"].as_f64().unwrap() - v["x"]["im"].as_f64().unwrap()).abs() <= 1e-9
        );
    }
}

#[test]
fn dilate_certifies_strict_and_witnesses_relaxed() {
    let files = Files::new();
    let biased = files.write("biased.json", BIASED);
    let relaxed = files.write("relaxed.json", RELAXED);

    let out = dilator(&[
        "dilate",
        &biased,
        "--depth",
        "2",
        "--word-bound",
        "1",
        "--level",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        entry(&report(&out), "faithfulness")["status"],
        "certificate"
    );

    let out = dilator(&[
        "dilate",
        &relaxed,
        "--depth",
        "2",
        "--word-bound",
        "1",
        "--level",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let f = entry(&report(&out), "faithfulness").clone();
    assert_eq!(f["status"], "witness");
    assert!(f["witness"]["b"]["level"].is_array());
}

#[test]
fn kernel_reports_index_and_degeneracy() {
    let files = Files::new();
    let good = files.write("kernel.json", KERNEL);
    let bad = files.write("degenerate.json", DEGENERATE);

    let out = dilator(&["kernel", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert!(statuses(&report(&out))
        .iter()
        .all(|s| s == "pass" || s == "certificate"));

    let out = dilator(&["kernel", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(statuses(&report(&out)).iter().any(|s| s == "witness"));
}

#[test]
fn compare_fair_and_biased() {
    let files = Files::new();
    let fair = files.write("fair.json", FAIR);
    let biased = files.write("biased.json", BIASED);
    for (a, b) in [(&fair, &biased), (&biased, &fair)] {
        let out = dilator(&["compare", a, b, "--depth", "2", "--word-bound", "2"]);
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn malformed_input_exits_2() {
    let files = Files::new();
    let cases = [
        files.write("truncated.json", r#"{"factors":"#),
        files.write("unknown.json", &FAIR.replace("\"mode\"", "\"mood\"")),
        files.write("badvalue.json", &FAIR.replace("1/2\"}", "1/0\"}")),
        files.write("missing.json", &FAIR.replace(r#","1":"1/2""#, "")),
    ];
    for path in &cases {
        let out = dilator(&["validate", path]);
        assert_eq!(out.status.code(), Some(2), "{path}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(
        dilator(&["axioms", "/nonexistent/system.json"])
            .status
            .code(),
        Some(2)
    );
    let kernel = files.write(
        "kernel.json",
        &KERNEL.replace("\"0\",\"0\",\"1\"", "\"0\",\"0\",\"2\""),
    );
    assert_eq!(dilator(&["kernel", &kernel]).status.code(), Some(2));
    assert_eq!(dilator(&["solenoid", "--m", "x:1"]).status.code(), Some(2));
    assert_eq!(
        dilator(&["solenoid", "--omega", "w9"]).status.code(),
        Some(2)
    );
    assert_eq!(dilator(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn compare_rejects_mismatched_systems() {
    let files = Files::new();
    let fair = files.write("fair.json", FAIR);
    let three = files.write(
        "three.json",
        r#"{"factors":[{"alphabet":3}],
            "generators":[{"depth":[1],"table":{"0":"1/3","1":"1/3","2":"1/3"}}]}"#,
    );
    assert_eq!(dilator(&["compare", &fair, &three]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_stable() {
    let files = Files::new();
    let biased = files.write("biased.json", BIASED);
    for args in [
        vec![
            "axioms",
            biased.as_str(),
            "--depth",
            "2",
            "--word-bound",
            "2",
        ],
        vec![
            "dilate",
            biased.as_str(),
            "--depth",
            "2",
            "--word-bound",
            "1",
            "--level",
            "2",
        ],
        vec!["solenoid", "--m", "0:1,2:-1", "--samples", "5"],
    ] {
        let first = dilator(&args);
        let second = dilator(&args);
        assert_eq!(first.status.code(), second.status.code());
        assert_eq!(first.stdout, second.stdout);
    }
}

#[test]
fn input_digest_is_sha256_of_the_file() {
    let files = Files::new();
    let fair = files.write("fair.json", FAIR);
    let r = report(&dilator(&["validate", &fair]));
    let digest = r["input_digest"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    let other = files.write("spaced.json", &format!("{FAIR}\n"));
    let r2 = report(&dilator(&["validate", &other]));
    assert_ne!(r2["input_digest"].as_str().unwrap(), digest);
}

#[test]
fn generated_cocycles_are_valid_and_seeded() {
    let a = dilator(&[
        "generate",
        "--seed",
        "11",
        "--alphabets",
        "3",
        "--depth",
        "2",
    ]);
    let b = dilator(&[
        "generate",
        "--seed",
        "11",
        "--alphabets",
        "3",
        "--depth",
        "2",
    ]);
    let c = dilator(&[
        "generate",
        "--seed",
        "12",
        "--alphabets",
        "3",
        "--depth",
        "2",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    let files = Files::new();
    let gen = files.write("gen.json", std::str::from_utf8(&a.stdout).unwrap());
    assert_eq!(dilator(&["validate", &gen]).status.code(), Some(0));
    assert_eq!(
        dilator(&["axioms", &gen, "--depth", "2", "--word-bound", "1"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn exit_code_matches_report() {
    let files = Files::new();
    for (name, text) in [
        ("fair.json", FAIR),
        ("broken.json", BROKEN),
        ("relaxed.json", RELAXED),
    ] {
        let path = files.write(name, text);
        let out = dilator(&["validate", &path]);
        let ok = statuses(&report(&out))
            .iter()
            .all(|s| s == "pass" || s == "certificate");
        assert_eq!(out.status.code(), Some(if ok { 0 } else { 1 }), "{name}");
    }
}
