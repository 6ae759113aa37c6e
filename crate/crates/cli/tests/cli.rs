use std::io::Write;
use std::process::{Command, Stdio};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn m0n(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_m0n"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &[&str], stdin: &str) -> String {
    let r = m0n(args, stdin);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout
}

fn tmp(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("m0n-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn tree_counts() {
    assert_eq!(ok(&["trees", "enumerate", "--n", "4", "--count-only"], ""), "26\n");
    assert_eq!(ok(&["trees", "enumerate", "--n", "5", "--count-only"], ""), "236\n");
    assert_eq!(ok(&["trees", "enumerate", "--n", "3"], "").lines().count(), 4);
}

#[test]
fn enumerate_json_parses() {
    let out = ok(&["trees", "enumerate", "--n", "3", "--format", "json"], "");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn fill_star_faces() {
    // the seven faces of the 7-leaf star, one per line
    let faces = "(1,2,3,4,5)0;\n".repeat(7);
    assert_eq!(ok(&["trees", "fill"], &faces), "(1,2,3,4,5,6)0;\n");
}

#[test]
fn fill_below_the_bound() {
    // compatible (all second faces agree in T_2) but not the faces of any tree
    let faces = format!("((2,3),1)0;\n{}", "(1,2,3)0;\n".repeat(4));
    let r = m0n(&["trees", "fill"], &faces);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("no tree has these faces"), "{}", r.stderr);
    let stars = "(1,2,3)0;\n".repeat(5);
    assert_eq!(ok(&["trees", "fill"], &stars), "(1,2,3,4)0;\n");
}

#[test]
fn face_and_render() {
    assert_eq!(ok(&["trees", "face", "--i", "0"], "(((3,4),2),1)0;"), "((2,3),1)0;\n");
    let dot = ok(&["trees", "render", "--dot"], "((2,3),1)0;");
    assert!(dot.starts_with("graph tree {"));
}

#[test]
fn parse_errors_are_positioned() {
    let r = m0n(&["trees", "face", "--i", "0"], "((1,2),3");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("1:"), "{}", r.stderr);
}

#[test]
fn identity_check() {
    assert!(ok(&["trees", "check", "--n", "4"], "").contains("no violations"));
}

#[test]
fn budget_exceeded() {
    let r = m0n(&["trees", "enumerate", "--n", "5", "--budget", "100"], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("budget"));
}

#[test]
fn coords_verify_reconstruct() {
    let coords = ok(&["moduli", "coords", "--points", "0,1,inf,2,3"], "");
    assert_eq!(coords, "2, 3, -3, 3, 2\n");
    assert_eq!(ok(&["moduli", "verify"], &coords), "OK\n");
    let r = m0n(&["moduli", "verify", "--coords", "2,3,-3,3,5"], "");
    assert_eq!(r.code, 1);
    let rebuilt = ok(&["moduli", "reconstruct", "--coords", "2, 3, -3, 3, 2"], "");
    let direct = ok(&["moduli", "coords", "--points", "0,1,inf,2,3"], "");
    assert_eq!(direct, coords);
    let path = tmp("rebuilt.json", &rebuilt);
    assert_eq!(ok(&["moduli", "coords", "--input", &path], ""), coords);
}

#[test]
fn coincident_points() {
    let r = m0n(&["moduli", "coords", "--points", "0,1,inf,2,2"], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("coincide"), "{}", r.stderr);
}

#[test]
fn verify_general_n() {
    let coords = ok(&["moduli", "coords", "--points", "0,1,inf,2,-3,1/2"], "");
    assert_eq!(ok(&["moduli", "verify", "--n", "6", "--coords", coords.trim()], ""), "all residuals zero\n");
}

#[test]
fn sample_is_deterministic_and_satisfies_equations() {
    let args = ["moduli", "sample", "--n", "6", "--count", "5", "--seed", "11"];
    let a = ok(&args, "");
    assert_eq!(a, ok(&args, ""));
    let path = tmp("sample.json", &a);
    for form in ["reduced", "redundant"] {
        let out = ok(&["eqs", "evaluate", "--n", "6", "--form", form, "--curve", &path], "");
        assert_eq!(out, "all residuals zero\n".repeat(5));
    }
}

#[test]
fn moduli_fill_roundtrip() {
    // a 6-marked curve and its forgetful images through the library format
    let sample = ok(&["moduli", "sample", "--n", "6", "--seed", "4"], "");
    let v: serde_json::Value = serde_json::from_str(&sample).unwrap();
    let curve = serde_json::to_string(&v["entries"][0]).unwrap();
    let c = m0n_core::Curve::from_json(&curve).unwrap();
    let faces: Vec<_> = (0..6).map(|i| c.forget(i).unwrap()).collect();
    let path = tmp("tuple.json", &m0n_core::io::write_curve_tuple(&faces));
    let filled = ok(&["moduli", "fill", "--input", &path], "");
    assert_eq!(m0n_core::Curve::from_json(&filled).unwrap(), c);
}

#[test]
fn equations_output() {
    let plain = ok(&["eqs", "generate", "--n", "5", "--format", "plain"], "");
    assert_eq!(plain.lines().next().unwrap(), "a1*(a4*b5 - a5*b4) - b1*b5*(a4 - b4)");
    assert_eq!(plain.lines().count(), 3);
    let json = ok(&["eqs", "generate", "--n", "6", "--form", "redundant", "--format", "json"], "");
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["equations"].as_array().unwrap().len(), 33);
    let path = tmp("sys.json", &json);
    let cas = ok(&["eqs", "export", "--system", &path, "--format", "cas"], "");
    assert!(cas.starts_with("vars: a_{1,1}, b_{1,1}"));
    let r = m0n(&["eqs", "generate", "--n", "5", "--format", "tex"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn evaluate_at_point() {
    assert_eq!(
        ok(&["eqs", "evaluate", "--n", "5", "--point", "2,3,-3,3,2"], ""),
        "all residuals zero\n"
    );
    let r = m0n(&["eqs", "evaluate", "--n", "5", "--point", "2,3,-3,3,2,1"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(m0n(&["trees", "enumerate"], "").code, 2);
    assert_eq!(m0n(&["frobnicate"], "").code, 2);
}
