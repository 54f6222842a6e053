use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_perpcount")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let (code, out) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}")))
}

fn ok(args: &[&str]) -> Value {
    let (code, v) = run_json(args);
    assert_eq!(code, 0, "{args:?}: {v}");
    for key in ["tool_version", "format_version", "command", "params", "results", "timing_ms"] {
        assert!(v.get(key).is_some(), "{args:?} lacks {key}");
    }
    v
}

fn usage_error(args: &[&str]) {
    assert_eq!(run(args).0, 2, "{args:?}");
}

fn error_kind(args: &[&str], code: i32, kind: &str) {
    let (c, v) = run_json(args);
    assert_eq!(c, code, "{args:?}");
    assert_eq!(v["error"]["kind"], kind, "{args:?}");
}

#[test]
fn global_flags() {
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
    usage_error(&[]);
    usage_error(&["--bogus", "sieve", "rational", "--n", "10"]);
    usage_error(&["frobnicate"]);
    usage_error(&["--format-version", "2", "sieve", "rational", "--n", "10"]);
    usage_error(&["--out", "svg", "sieve", "rational", "--n", "10"]);
    let v = ok(&["--seed", "7", "--threads", "2", "sieve", "rational", "--n", "10"]);
    assert_eq!(v["params"]["seed"], 7);
    assert_eq!(v["params"]["threads"], 2);
    assert_eq!(v["format_version"], 1);
}

#[test]
fn sieve() {
    let v = ok(&["sieve", "rational", "--n", "12"]);
    assert_eq!(v["command"], "sieve rational");
    ok(&["sieve", "quadratic", "--disc", "-4", "--radius", "10"]);
    error_kind(&["sieve", "rational", "--n", "0"], 2, "precondition");
    error_kind(&["sieve", "quadratic", "--disc", "-5", "--radius", "10"], 2, "invalid_discriminant");
    usage_error(&["sieve", "rational"]);
    let (code, csv) = run(&["--out", "csv", "sieve", "rational", "--n", "5"]);
    assert_eq!(code, 0);
    assert!(csv.lines().count() >= 6, "{csv}");
}

#[test]
fn count() {
    ok(&["count", "perp", "--pair", "dd", "--s", "8"]);
    ok(&["count", "perp", "--pair", "d1i", "--s", "acosh:sqrt:226"]);
    ok(&["count", "bianchi", "--disc", "-4", "--radius", "40"]);
    ok(&["count", "fit", "--pair", "dd", "--s", "6,7,8"]);
    error_kind(&["count", "perp", "--pair", "xx", "--s", "8"], 2, "precondition");
    error_kind(&["count", "perp", "--pair", "dd", "--s=-1"], 2, "precondition");
    error_kind(&["count", "fit", "--pair", "dd", "--s", "10,10,10"], 1, "degenerate");
    usage_error(&["count", "perp", "--s", "8"]);
}

#[test]
fn verify() {
    let v = ok(&["verify", "prop19", "--max-bc", "100"]);
    assert_eq!(v["results"]["paths_equal"], true);
    ok(&["verify", "eq78", "--samples", "20"]);
    ok(&["verify", "lemma4"]);
    error_kind(&["verify", "eq78", "--disc", "-6"], 2, "invalid_discriminant");
    usage_error(&["verify", "prop19", "--max-bc", "ten"]);
}

#[test]
fn constants() {
    let v = ok(&["constants", "--kfield", "R", "--n", "2"]);
    assert_eq!(v["results"]["delta"], 1);
    let xi: f64 = v["results"]["xi"].as_str().unwrap().parse().unwrap();
    assert_eq!(xi, 4.0);
    ok(&["constants", "--kfield", "C", "--n", "3", "--volume", "1.5"]);
    error_kind(&["constants", "--kfield", "X", "--n", "2"], 2, "precondition");
    usage_error(&["constants", "--n", "two"]);
}

#[test]
fn ambiguous() {
    let v = ok(&["ambiguous", "classify", "--matrix", "2,1,3,2"]);
    assert_eq!(v["results"]["first_kind"], true);
    ok(&["ambiguous", "count", "--s", "8", "--primitive"]);
    ok(&["ambiguous", "census", "--max-trace", "20"]);
    error_kind(&["ambiguous", "classify", "--matrix", "2,1,1,2"], 2, "det_not_one");
    usage_error(&["ambiguous", "classify", "--matrix", "2,1,1"]);
}

#[test]
fn heisenberg() {
    ok(&["heisenberg", "check", "--case", "lemma8", "--points", "5"]);
    ok(&["heisenberg", "check", "--case", "xi", "--samples", "1000"]);
    error_kind(&["heisenberg", "check", "--case", "lemma7", "--kfield", "R"], 2, "precondition");
    usage_error(&["heisenberg", "check", "--case", "lemma9"]);
}

#[test]
fn plot() {
    let v = ok(&["plot", "divergent", "--rational", "3/10"]);
    assert_eq!(v["command"], "plot divergent");
    let (code, svg) = run(&["--out", "svg", "plot", "divergent", "--rational", "3/8"]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    assert!(!svg.contains("<polyline") && svg.contains("<path"));
    let (code, csv) = run(&["--out", "csv", "plot", "divergent", "--rational", "3/8"]);
    assert_eq!(code, 0);
    assert!(csv.starts_with("series,polyline,index,x,y\n"));
    error_kind(&["plot", "divergent", "--rational", "3/0"], 2, "precondition");
}

fn golden(name: &str, args: &[&str]) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    let (code, svg) = run(args);
    assert_eq!(code, 0);
    let (_, again) = run(args);
    assert_eq!(svg, again, "{name}: output differs between runs");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &svg).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(svg == expected, "{name} differs from the golden file");
}

#[test]
fn svg_golden_files() {
    golden("divergent.svg", &["--out", "svg", "plot", "divergent", "--rational", "3/8,31/80,3/10"]);
    golden("divergent_family.svg", &["--out", "svg", "plot", "divergent-family", "--max-den", "6"]);
    golden("perp_family.svg", &["--out", "svg", "plot", "perp-family", "--max-bc", "300", "--rmin", "2.05", "--rmax", "2.1"]);
}
