use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mellin-pw"))
        .args(args)
        .env_remove("MELLIN_PW_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

fn im(v: &Value) -> f64 {
    v["im"].as_f64().unwrap()
}

#[test]
fn mellin_of_exponential_at_one() {
    let v = json(&["mellin", "eval", "--family", "power_exp", "--d", "0", "--s", "1+0i"]);
    assert_eq!(v["schema"], "mellin-pw/1");
    assert_eq!(v["kind"], "mellin_eval");
    assert!((re(&v["data"]["value"]) - 1.0).abs() < 1e-10);
    assert!(im(&v["data"]["value"]).abs() < 1e-10);
}

#[test]
fn gauss_pow_singular_expansion() {
    let v = json(&["mellin", "singexp", "--family", "gauss_pow", "--d=-0.5", "--terms", "3"]);
    let els = v["data"]["singular_expansion"]["elements"].as_array().unwrap();
    assert_eq!(els.len(), 3);
    let fact = [1.0, 1.0, 2.0];
    for (j, el) in els.iter().enumerate() {
        assert!((re(&el["q"]) - (0.5 - 2.0 * j as f64)).abs() < 1e-14);
        let c = &el["principal"][0];
        let expect = if j % 2 == 0 { 1.0 } else { -1.0 } / fact[j];
        assert!((re(c) - expect).abs() < 1e-14, "residue {j}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["mellin", "continue", "--family", "gauss_pow", "--d", "0.5", "--s=-1.2+0.7i"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["mellin", "eval", "--family", "nope", "--s", "1"][..],
        &["mellin", "eval", "--family", "power_exp", "--d", "0", "--s=-1"],
        &["mellin", "eval", "--family", "power_exp", "--s", "1"],
        &["--tol", "0", "mellin", "eval", "--family", "power_exp", "--d", "0", "--s", "1"],
        &["mellin", "eval", "--family", "power_exp", "--d", "0", "--s", "1 + i"],
        &["--format", "csv", "mellin", "eval", "--family", "power_exp", "--d", "0", "--s", "1"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_three() {
    let out = run(&["mellin", "invert", "--family", "power_exp", "--d", "0", "--c", "1", "--t", "1", "--a", "60"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn inversion_recovers_the_function() {
    let v = json(&["mellin", "invert", "--family", "power_exp", "--d", "0", "--c", "1", "--t", "0.5,1,2"]);
    for p in v["data"]["points"].as_array().unwrap() {
        assert!((re(&p["value"]) - re(&p["u"])).abs() < 1e-9);
    }
}

#[test]
fn line_samples_as_csv() {
    let out = run(&["--format", "csv", "mellin", "eval", "--family", "power_exp", "--d", "0", "--c", "1", "--etas=-2:2:5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,re,im"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn tol_from_environment() {
    let args = ["mellin", "eval", "--family", "gauss_pow", "--d", "1", "--s", "2"];
    let out = Command::new(env!("CARGO_BIN_EXE_mellin-pw"))
        .args(args)
        .env("MELLIN_PW_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("mellin-pw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pair.json");
    let out = run(&["dist", "pair", "--a=-0.5", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    // ⟨x_+^{-1/2}, e^{-x²}⟩ = Γ(1/4) / 2
    assert!((re(&v["data"]["value"]) - 1.812_804_954_110_954).abs() < 1e-9);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn boundary_product_against_both_combos() {
    let v = json(&["dist", "product"]);
    let d = &v["data"];
    assert!(d["product_combo"]["deviation"].as_f64().unwrap() < 1e-8);
    assert!(d["reference_combo"]["deviation"].as_f64().unwrap() > 1.0);
}

#[test]
fn fourier_of_heaviside() {
    let v = json(&["fourier", "eval", "--family", "heaviside_unit", "--z=1-0.5i"]);
    let z = (1.0f64, -0.5f64);
    // (1 - e^{-iz}) / (iz √(2π))
    let e = (z.1.exp() * z.0.cos(), -z.1.exp() * z.0.sin());
    let (nr, ni) = (1.0 - e.0, -e.1);
    let (dr, di) = (-z.1, z.0);
    let den = (dr * dr + di * di) * (2.0 * std::f64::consts::PI).sqrt();
    let w = ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den);
    assert!((re(&v["data"]["value"]) - w.0).abs() < 1e-10);
    assert!((im(&v["data"]["value"]) - w.1).abs() < 1e-10);
}

#[test]
fn bump_support_is_recovered() {
    let v = json(&["pw", "classify", "--family", "bump", "--r0", "0.5", "--r1", "1.5", "--transform", "fourier"]);
    let r = &v["data"]["report"];
    assert_eq!(r["verdict"], true);
    assert!((r["a"].as_f64().unwrap() - 1.5).abs() < 0.1);
}

#[test]
fn verify_all_passes() {
    let out = run(&["--format", "table", "verify", "all", "--tol", "1e-6"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().count(), 16);
}
