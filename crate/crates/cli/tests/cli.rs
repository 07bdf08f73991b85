use std::fs;
use std::process::{Command, Output};

use liouville_cli::{run_command_with, EXIT_FAILURE, EXIT_INVALID, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("liouville").chain(args.iter().copied());
    let code = run_command_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville")).args(args).output().unwrap()
}

fn value(stdout: &str, key: &str) -> f64 {
    let line = stdout
        .lines()
        .find(|l| l.starts_with(key) && l[key.len()..].starts_with("  "))
        .unwrap_or_else(|| panic!("no {key:?} in\n{stdout}"));
    line[key.len()..].trim().parse().unwrap()
}

#[test]
fn hyp2f1_log_two() {
    let (code, out, _) = run(&["hyp2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "0.5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("1.38629436111989"), "{out}");
    assert!((value(&out, "2F1") - 2.0 * 2f64.ln()).abs() < 1e-14);
}

#[test]
fn pohozaev_integer_example() {
    let (code, out, _) = run(&["pohozaev", "--n", "3", "--m", "1", "--kinf", "0.25"]);
    assert_eq!(code, EXIT_OK);
    assert!((value(&out, "closed value") + 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
    assert!((value(&out, "sign factor") + 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(value(&out, "m0"), 1.0);
}

#[test]
fn pohozaev_fractional_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let (code, out, _) = run(&["pohozaev", "--n", "4", "--sigma", "0.3", "--kinf", "1", "--json", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!((value(&out, "sign factor") + 0.15).abs() < 1e-12);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["mode"], "fractional");
    assert!(json["closed_value"].as_f64().unwrap() < 0.0);
    assert!(json["rel_error"].as_f64().unwrap() < 1e-5);
}

#[test]
fn invalid_input_exits_two_with_one_line() {
    for args in [
        &["pohozaev", "--n", "3", "--m", "1", "--kinf", "0.25", "--bogus", "1"][..],
        &["pohozaev", "--n", "3", "--kinf", "0.25"],
        &["pohozaev", "--n", "3", "--m", "1", "--sigma", "0.5", "--kinf", "1"],
        &["fraclap", "--n", "3", "--sigma", "2"],
        &["hyp2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "1"],
        &["hyp2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "abc"],
        &["pohozaev", "--n", "3", "--m", "1", "--kinf", "-1"],
        &["verify", "--suite", "nothing"],
        &["frobnicate"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, EXIT_INVALID, "{args:?}: {err}");
        assert!(out.is_empty(), "{args:?}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error:"), "{err}");
    }
    let (_, _, err) = run(&["fraclap", "--n", "3", "--sigma", "2"]);
    assert!(err.contains("sigma"), "{err}");
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "# pohozaev run\nn = 5   # dimension\nm = 1\nkinf = 3\n").unwrap();
    let cfg = path.to_str().unwrap();
    let (code, out, _) = run(&["pohozaev", "--config", cfg]);
    assert_eq!(code, EXIT_OK);
    // M₀ = ((3/2)²/3)^{3/4}
    assert!((value(&out, "m0") - 0.75f64.powf(0.75)).abs() < 1e-15);
    let (code, out, _) = run(&["pohozaev", "--config", cfg, "--kinf", "0.75"]);
    assert_eq!(code, EXIT_OK);
    assert!((value(&out, "m0") - 3f64.powf(0.75)).abs() < 1e-14);
    assert_eq!(value(&out, "kinf"), 0.75);

    fs::write(&path, "n = 5\nwidth = 2\n").unwrap();
    assert_eq!(run(&["pohozaev", "--config", cfg, "--m", "1", "--kinf", "1"]).0, EXIT_INVALID);
    fs::write(&path, "n 5\n").unwrap();
    assert_eq!(run(&["pohozaev", "--config", cfg]).0, EXIT_INVALID);
    assert_eq!(run(&["pohozaev", "--config", "/nonexistent/run.conf"]).0, EXIT_INVALID);
}

#[test]
fn inteq_writes_profile_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("v.csv");
    let log = dir.path().join("log.csv");
    let (code, out, _) = run(&[
        "inteq",
        "--n",
        "3",
        "--sigma",
        "0.5",
        "--csv",
        csv.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!((value(&out, "constant A") * std::f64::consts::PI.powi(3) - 1.0).abs() < 1e-6);
    assert!(value(&out, "max |V/A - 1|") < 1e-4);
    let profile = fs::read_to_string(&csv).unwrap();
    assert!(profile.starts_with("t,V\n"));
    assert_eq!(profile.lines().count(), 482);
    let log = fs::read_to_string(&log).unwrap();
    assert!(log.starts_with("iter,residual\n1,"));
}

#[test]
fn inteq_picard_reports_failure() {
    let (code, out, err) = run(&["inteq", "--n", "3", "--sigma", "0.5", "--update", "picard", "--max-iters", "40"]);
    assert_eq!(code, EXIT_FAILURE, "{out}{err}");
    assert!(out.contains("converged               false"));
}

#[test]
fn extension_and_fraclap() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let (code, out, _) = run(&["extension", "--n", "4", "--sigma", "0.3", "--x", "1", "--t", "0.5", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let closed = value(&out, "neumann closed");
    assert!((value(&out, "neumann extrapolated") / closed - 1.0).abs() < 1e-4);
    assert!((value(&out, "N measured") / value(&out, "N gamma(1-sigma)") - 1.0).abs() < 1e-4);
    let trace = fs::read_to_string(&csv).unwrap();
    assert!(trace.starts_with("t,quotient\n"));
    assert_eq!(trace.lines().count(), 5);

    let (code, out, _) = run(&["fraclap", "--n", "4", "--sigma", "0.5"]);
    assert_eq!(code, EXIT_OK);
    assert!((value(&out, "C2") - 1.094_219_807_613_238_3).abs() < 1e-14);
    let (code, out, _) = run(&["fraclap", "--n", "9", "--sigma", "2", "--s", "2.5"]);
    assert_eq!(code, EXIT_OK);
    assert!((value(&out, "F(s,m)") - 2025.0 / 16.0).abs() < 1e-12);
}

#[test]
fn verify_suite_json_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let one = binary(&["verify", "--suite", "hypergeometric", "--json", a.to_str().unwrap()]);
    let two = binary(&["verify", "--suite", "hypergeometric", "--json", b.to_str().unwrap()]);
    assert_eq!(one.status.code(), Some(EXIT_OK));
    assert_eq!(one.stdout, two.stdout);
    let strip = |p: &std::path::Path| {
        let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(&a), strip(&b));
    let report = strip(&a);
    let cases = report["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 76);
    for key in ["case_id", "params", "closed_value", "oracle_value", "rel_error", "tolerance", "pass"] {
        assert!(cases.iter().all(|c| c.get(key).is_some()), "{key}");
    }
}

#[test]
fn verify_all_covers_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = binary(&["verify", "--suite", "all", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["overall_pass"], true);
    let cases = report["cases"].as_array().unwrap();
    for k in 1..=11 {
        assert!(cases.iter().any(|c| c["criterion"] == k), "criterion {k}");
    }
    let timing = report["timing"].as_array().unwrap();
    assert_eq!(timing.len(), cases.len());
    assert!(String::from_utf8(out.stdout).unwrap().ends_with("overall PASS\n"));
}

#[test]
fn help_and_version() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for cmd in ["hyp2f1", "fraclap", "extension", "pohozaev", "inteq", "verify"] {
        assert!(out.contains(cmd));
    }
    assert_eq!(run(&["--version"]).0, EXIT_OK);
    assert_eq!(run(&[]).0, EXIT_INVALID);
}
