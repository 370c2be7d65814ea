use gcplab_cli::run;

fn gcplab(args: &[&str], env_seed: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gcplab").chain(args.iter().copied());
    let code = run(argv, env_seed, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn column(csv: &str, row: usize, col: usize) -> f64 {
    csv.lines().nth(row + 1).unwrap().split(',').nth(col).unwrap().parse().unwrap()
}

#[test]
fn gcp_pmf_example() {
    let (code, out, _) = gcplab(&["pmf", "--rates", "1,1", "--t", "1", "--n-max", "3"], None);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,analytic,mc,mc_stderr\n"));
    assert!((column(&out, 2, 1) - 0.203003).abs() < 1e-6);
    assert!(out.lines().nth(1).unwrap().ends_with(",,"));
}

#[test]
fn bessel_pmf_at_zero() {
    let (_, out, _) = gcplab(&["pmf", "--family", "bessel", "--param", "dim=2", "--n-max", "0"], None);
    assert!((column(&out, 0, 1) - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn first_passage_pgf_at_one() {
    let (code, out, _) = gcplab(&["transform", "--family", "fp", "--args", "1"], None);
    assert_eq!(code, 0);
    assert!((column(&out, 0, 1) - 1.0).abs() < 1e-12);
}

#[test]
fn json_output_has_nulls_for_missing_values() {
    let (_, out, _) = gcplab(&["moments", "--family", "fp", "--format", "json"], None);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["stat"], "mean");
    assert!(v[0]["analytic"].is_null());
}

#[test]
fn validation_errors_exit_2_with_json() {
    for args in [
        &["pmf", "--bogus"][..],
        &["pmf", "--rates", "1,-1"],
        &["pmf", "--family", "nope"],
        &["pmf", "--family", "gsfcp"],
        &["pmf", "--param", "beta=0.5"],
        &["pmf", "--reps", "10"],
        &["pmf", "--t", "1,2"],
        &["lrd"],
    ] {
        let (code, out, err) = gcplab(args, None);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "validation");
        assert_eq!(v["error"]["exit_code"], 2);
    }
}

#[test]
fn help_exits_0() {
    let (code, out, _) = gcplab(&["--help"], None);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let args = ["pmf", "--n-max", "2", "--reps", "1000"];
    let (_, from_env, _) = gcplab(&args, Some("9"));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "9"]);
    let (_, from_flag, _) = gcplab(&with_flag, Some("1"));
    assert_eq!(from_env, from_flag);
    let (code, _, _) = gcplab(&args, Some("x"));
    assert_eq!(code, 2);
}

#[test]
fn monte_carlo_output_is_reproducible() {
    let args = ["simulate", "--rates", "1,2", "--t", "3", "--reps", "5", "--seed", "11"];
    let (_, a, _) = gcplab(&args, None);
    let (_, b, _) = gcplab(&[&args[..], &["--workers", "4"]].concat(), None);
    assert_eq!(a, b);
    assert!(a.lines().count() > 5);
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = std::env::temp_dir().join(format!("gcplab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("exp.json");
    std::fs::write(&cfg, r#"{"schema": 1, "family": "gcp", "rates": [1, 1], "n_max": 2}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let (_, out, _) = gcplab(&["pmf", "--config", cfg], None);
    assert_eq!(out.lines().count(), 4);
    let (_, out, _) = gcplab(&["pmf", "--config", cfg, "--n-max", "4"], None);
    assert_eq!(out.lines().count(), 6);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"schema": 2}"#).unwrap();
    let (code, _, _) = gcplab(&["pmf", "--config", bad.to_str().unwrap()], None);
    assert_eq!(code, 2);
    let out_path = dir.join("out.csv");
    let (code, out, _) = gcplab(&["pmf", "--config", cfg, "--out", out_path.to_str().unwrap()], None);
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(std::fs::read_to_string(&out_path).unwrap().starts_with("n,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_reports_every_check() {
    let (code, out, _) = gcplab(&["verify", "specfun", "--seed", "1"], None);
    assert_eq!(code, 0);
    assert!(out.starts_with("suite,name,passed,measured,tolerance,seed,reps,detail\n"));
    assert!(out.lines().skip(1).all(|l| l.starts_with("specfun,") && l.contains(",true,")));
}

#[test]
fn verify_failure_exits_1_after_writing_table() {
    // Too few replicates for the tail regression to find any exceedances.
    let (code, out, err) = gcplab(&["verify", "subordinated", "--seed", "1", "--reps", "50"], None);
    assert_eq!(code, 1);
    assert!(out.contains(",false,"));
    assert!(err.contains("\"verification\""));
}
