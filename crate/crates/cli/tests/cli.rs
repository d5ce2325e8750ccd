use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const EXTRA_SPECIAL: &str = "\
# extra-special of order p^5: [x2,x1] = [x4,x3], all other brackets trivial
p 3
n 4
rel [3,1]
rel [3,2]
rel [4,1]
rel [4,2]
rel [2,1] - [4,3]
";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capable"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn extra_special_p5_is_not_capable() {
    let f = file(EXTRA_SPECIAL);
    let out = run(&["check", path(&f), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["capable"], false);
    assert_eq!(v["reason"], "n4-classification");
    assert_eq!(v["dim_X"], 5);

    let out = run(&["classify4", path(&f)]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "extra-special-p5"
    );
}

#[test]
fn free_group_on_two_generators_is_capable() {
    let f = file("p 3\nn 2\n");
    let out = run(&["check", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("capable: yes"));
}

#[test]
fn bad_input_exits_with_two() {
    let f = file("p 9\nn 2\n");
    let out = run(&["check", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let f = file("p 3\nn 3\nrel [2,3]\n");
    assert_eq!(run(&["check", path(&f)]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/input"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "no-such-suite", "--n", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn closure_dimensions() {
    let cases = [
        ("ambient 4\np 3\n1 0 0 0 0 2\n", (1, 4, 1)),
        (EXTRA_SPECIAL, (5, 20, 6)),
        (
            "p 3\nn 4\nrel [2,1]\nrel [3,1]\nrel [3,2]\nrel [4,1]\nrel [4,2]\nrel [4,3]\n",
            (6, 20, 6),
        ),
    ];
    for (text, (x, star, closure)) in cases {
        let f = file(text);
        let v = json(&run(&["closure", path(&f), "--json"]));
        assert_eq!(v["dim_X"], x, "{text}");
        assert_eq!(v["dim_X_star"], star, "{text}");
        assert_eq!(v["dim_X_closure"], closure, "{text}");
    }
}

#[test]
fn raw_subspace_takes_prime_from_flag() {
    let f = file("ambient 3\n1 1 0\n");
    let out = run(&["closure", path(&f), "--p", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["p"], 5);
}

#[test]
fn verify_suites_pass() {
    for (suite, n) in [("uptofour", "4"), ("n4-dim5", "4"), ("sum-dims", "5")] {
        let out = run(&["verify", suite, "--n", n, "--json"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let v = json(&out);
        assert_eq!(v["violations"], Value::Array(Vec::new()));
        assert!(v["checked"].as_u64().unwrap() > 0);
    }
}

#[test]
fn sampled_verify_is_reproducible() {
    let args = [
        "verify", "bounds", "--n", "5", "--sample", "2000", "--seed", "7", "--json",
    ];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = strip(json(&run(&args)));
    let b = strip(json(&run(&args)));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
    assert_eq!(a["checked"], 2000);
}

#[test]
fn exhaustive_beyond_ceiling_is_refused() {
    let out = run(&["verify", "bounds", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_counts_and_writes_files() {
    let out = run(&["enumerate", "--n", "4", "--k", "5", "--count-only"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "364");

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("lines.json");
    let out = run(&[
        "enumerate",
        "--ambient",
        "3",
        "--k",
        "1",
        "--json",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["count"], 13);
    let lines = v["subspaces"].as_array().unwrap();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0], serde_json::json!([[1, 0, 0]]));
}

#[test]
fn verify_list_names_every_suite() {
    let out = run(&["verify", "list"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().any(|l| l == "cancel-central"));
}
