use adelic::text::{parse_op, render_op};
use adelic::Op;
use serde_json::Value;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/../adelic/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adelic")).args(args).output().expect("binary runs")
}

fn structured(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn reflect_exp() {
    let exp = fixture("exp");
    let out = run(&["reflect", "--psi", &exp, "--symbolic-st"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("text: (z+t) Dz^1 + (s*z) Dz^0"));
    let v = structured(&["reflect", "--psi", &exp, "--symbolic-st"]);
    assert_eq!(v["result"]["canonical"]["text"], "(z+t) Dz^1 + (s*z) Dz^0");
    assert_eq!(v["result"]["canonical"]["coeffs"], serde_json::json!(["s*z", "z+t"]));
    assert_eq!(v["config"]["subcommand"], "reflect");
    assert_eq!(v["config"]["s"], "s");
}

#[test]
fn rotate_exp() {
    let v = structured(&["rotate", "--psi", &fixture("exp")]);
    assert_eq!(v["result"]["rotated"]["text"], "(z-t) Dz^1 + (-i*s*z) Dz^0");
    assert!(v["result"]["companion"]["text"].as_str().unwrap().contains("-s^2*z^2"));
}

#[test]
fn verify_dg139() {
    let v = structured(&["verify", "--psi", &fixture("dg139"), "--r", "1", "--s", "2", "--t", "1"]);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 4);
    for c in checks {
        assert_eq!(c["pass"], true, "{c}");
        assert!(c["residual"].as_f64().unwrap() <= 1e-8);
        for k in ["check", "residual", "tolerance", "pass"] {
            assert!(c.get(k).is_some());
        }
    }
    assert_eq!(v["config"]["parameters"][0]["name"], "r");
}

#[test]
fn emitted_operators_parse_back() {
    let v = structured(&["reflect", "--psi", &fixture("dg139")]);
    for m in v["result"]["solution_space"].as_array().unwrap() {
        let text = m["text"].as_str().unwrap();
        let op: Op = parse_op(text).unwrap();
        assert_eq!(render_op(&op), text);
    }
}

#[test]
fn other_subcommands() {
    let v = structured(&["kernel", "--psi", &fixture("exp")]);
    assert_eq!(v["result"]["kernel"]["prefactor"], "(1)/(z+w)");
    let v = structured(&["fourier-basis", "--psi", &fixture("exp"), "--caps", "1,1,1,1,1,3"]);
    assert_eq!(v["result"]["dimension"], 4);
    let abab = structured(&["involution", "--psi", &fixture("dg139"), "--word", "abab"]);
    let s = structured(&["involution", "--psi", &fixture("dg139"), "--word", "s"]);
    assert_eq!(abab["result"], s["result"]);
    assert_eq!(s["result"]["fixed"], false);
    let v = structured(&["universal", "--psi", &fixture("exp"), "--psi", &fixture("bessel52")]);
    assert_eq!(v["result"]["partners"].as_array().unwrap().len(), 2);
}

#[test]
fn deterministic_output() {
    let a = run(&["reflect", "--psi", &fixture("dg139"), "--format", "structured"]);
    let b = run(&["reflect", "--psi", &fixture("dg139"), "--format", "structured"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("adelic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = run(&["reflect", "--psi", &fixture("exp"), "--format", "structured", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["canonical"]["text"], "(z+t) Dz^1 + (s*z) Dz^0");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    let exp = fixture("exp");
    assert_eq!(run(&["reflect", "--psi", &exp, "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["reflect", "--psi", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["reflect", "--psi", &fixture("cm1")]).status.code(), Some(2));
    assert_eq!(run(&["reflect", "--psi", &exp, "--caps", "1,1,0,0,0,0"]).status.code(), Some(3));
    // x^3 - 8 vanishes at 2, inside [1, ∞)
    let out = run(&["verify", "--psi", &fixture("dg139"), "--r", "8", "--s", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole on contour"));
    assert_eq!(run(&["rotate", "--psi", &exp, "--t", "1"]).status.code(), Some(2));
}
