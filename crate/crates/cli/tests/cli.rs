use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonal-uncertainty"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn compute_gw_json() {
    let o = run(&[
        "compute", "--family", "gw", "--rho", "1e-3", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys.len(), 6);
    for k in [
        "var_space",
        "var_momentum",
        "uncertainty",
        "degree_used",
        "truncation_error",
        "center_denominator",
    ] {
        assert!(keys.contains(&k), "missing {k}");
    }
    // 40-digit reference for the truncated series
    let u = v["uncertainty"].as_f64().unwrap();
    assert!((u - 1.419_404_790_288_489).abs() < 1e-12, "{u}");
    assert!(text.trim_end().starts_with("{\"var_space\":"));
}

#[test]
fn compute_csv_has_header_and_row() {
    let o = run(&["compute", "--rho", "1e-2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("var_space,var_momentum,uncertainty"));
}

#[test]
fn reversed_sweep_range_is_rejected() {
    let o = run(&[
        "sweep",
        "--rho-min",
        "1",
        "--rho-max",
        "0.1",
        "--points",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("--rho-min"));
}

#[test]
fn invalid_numeric_flags() {
    for (args, flag) in [
        (vec!["compute", "--rho", "-1"], "--rho"),
        (vec!["compute", "--rho", "1e-3", "--tol", "2"], "--tol"),
        (vec!["sweep", "--points", "1"], "--points"),
        (
            vec!["compute", "--family", "general", "--rho", "1e-3"],
            "--q",
        ),
        (
            vec![
                "compute", "--family", "general", "--q", "0,x", "--rho", "1e-3",
            ],
            "--q",
        ),
        (
            vec![
                "compute", "--family", "general", "--q", "0,1", "--a", "0", "--rho", "1e-3",
            ],
            "--a",
        ),
        (
            vec!["compute", "--family", "gw", "--q", "0,1", "--rho", "1e-3"],
            "--q",
        ),
        (vec!["compute", "--family", "custom"], "--coeffs"),
        (vec!["compute", "--rho", "abc"], "--rho"),
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert!(err.contains(flag), "{args:?}: {err}");
        assert!(err.starts_with("error"), "{err}");
    }
}

#[test]
fn unknown_flag_and_help() {
    assert_eq!(run(&["compute", "--bogus"]).status.code(), Some(2));
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for sub in ["compute", "sweep", "verify", "family-info"] {
        assert!(stdout(&o).contains(sub));
    }
    let o = run(&["sweep", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let help = stdout(&o);
    for flag in [
        "--family",
        "--a",
        "--c",
        "--q",
        "--coeffs",
        "--rho-min",
        "--rho-max",
        "--points",
        "--tol",
        "--format",
        "--out",
    ] {
        assert!(help.contains(flag), "sweep help lacks {flag}");
    }
    let help = stdout(&run(&["compute", "--help"]));
    assert!(help.contains("--rho"));
    let help = stdout(&run(&["verify", "--help"]));
    assert!(help.contains("--suite"));
}

#[test]
fn sweep_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&[
        "sweep",
        "--rho-min",
        "1e-4",
        "--rho-max",
        "1e-2",
        "--points",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "rho,degree,var_space,var_momentum,uncertainty,rho_varM,varS_over_rho,truncation_error"
    );
    assert_eq!(lines.len(), 6);
    let rhos: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(rhos.windows(2).all(|w| w[0] > w[1]));
    assert_eq!(rhos[0], 1e-2);
}

#[test]
fn sweep_json() {
    let o = run(&[
        "sweep",
        "--rho-min",
        "1e-4",
        "--rho-max",
        "1e-2",
        "--points",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn general_family_sweep() {
    let o = run(&[
        "sweep",
        "--family",
        "general",
        "--a",
        "1",
        "--c",
        "1",
        "--q",
        "0,1",
        "--rho-min",
        "1e-3",
        "--rho-max",
        "1e-2",
        "--points",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn custom_coefficient_files() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.txt");
    fs::write(&one, "# c_0, c_1\n1\n1\n").unwrap();
    let o = run(&[
        "compute",
        "--family",
        "custom",
        "--coeffs",
        one.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["uncertainty"].as_f64().unwrap() - 4.5f64.sqrt()).abs() < 1e-14);

    let two = dir.path().join("two.txt");
    fs::write(&two, "2\n1\n").unwrap();
    let a = format!("0.5={}", one.display());
    let b = format!("0.25={}", two.display());
    let o = run(&[
        "sweep", "--family", "custom", "--coeffs", &a, "--coeffs", &b,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("5.0000000000000000e-1,1,"));

    let o = run(&[
        "compute", "--family", "custom", "--coeffs", &a, "--coeffs", &b, "--rho", "0.25",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["var_space"].as_f64().unwrap() - 2.0625).abs() < 1e-14);
}

#[test]
fn unreadable_or_malformed_coefficients() {
    let o = run(&[
        "compute",
        "--family",
        "custom",
        "--coeffs",
        "/nonexistent/file.txt",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--coeffs"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1\nnot-a-number\n").unwrap();
    let o = run(&[
        "compute",
        "--family",
        "custom",
        "--coeffs",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--coeffs"));

    let zero = dir.path().join("zero.txt");
    fs::write(&zero, "0\n1\n").unwrap();
    let o = run(&[
        "compute",
        "--family",
        "custom",
        "--coeffs",
        zero.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("undefined center"));
}

#[test]
fn verify_suites_pass() {
    let o = run(&["verify", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().count() > 20);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn family_info() {
    let o = run(&["family-info", "--family", "gw", "--rho", "1e-2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gauss-weierstrass"));
    let degree: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("degree: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((80..=200).contains(&degree));

    let o = run(&[
        "family-info",
        "--family",
        "general",
        "--q",
        "-0.5,1",
        "--c",
        "0.5",
    ]);
    assert!(stdout(&o).contains("zeroth coefficient undefined: true"));
}
