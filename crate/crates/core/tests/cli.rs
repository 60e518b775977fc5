use heatspec::cli::{run, EXIT_FAIL, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("heatspec").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn coeff_prints_exact_and_float() {
    let (code, out, _) = call(&["coeff", "--model", "disk", "--radius", "1", "--p", "0", "--bc", "dirichlet"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("1/4"));
    assert!(out.contains("-1/4·√π"));
    assert!(out.contains("1/128·√π"));
    assert!(out.contains("0.0138472957101993"));
}

#[test]
fn hemisphere_a2_is_one_sixth() {
    let (code, out, _) = call(&["coeff", "--model", "hemisphere", "--p", "0", "--bc", "dirichlet", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["a"][2]["num"], "1");
    assert_eq!(v["a"][2]["den"], "6");
    assert_eq!(v["a"][2]["pi_half_exponent"], 0);
    for key in ["model", "m", "p", "bc"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn spectrum_csv_first_line() {
    let (code, out, _) = call(&[
        "spectrum", "--model", "disk", "--radius", "1", "--bc", "dirichlet", "--lambda-max", "100", "--format", "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let first = out.lines().next().unwrap();
    let (l, k) = first.split_once(',').unwrap();
    assert_eq!(k, "1");
    let l: f64 = l.parse().unwrap();
    assert!((l - 2.404825557695773f64.powi(2)).abs() < 1e-12);
    assert_eq!(first, "5.78318596294678,1");
}

#[test]
fn verify_matrices_passes() {
    let (code, out, _) = call(&["verify", "--suite", "matrices"]);
    assert_eq!(code, EXIT_OK);
    for d in ["det=-144", "det=1584", "det=-432"] {
        assert!(out.contains(d), "{d}");
    }
    assert!(out.lines().last().unwrap().starts_with("PASS"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_traces_is_seed_deterministic() {
    let a = call(&["verify", "--suite", "traces", "--m-range", "2..4", "--seed", "7", "--format", "json"]);
    let b = call(&["verify", "--suite", "traces", "--m-range", "2..4", "--seed", "7", "--format", "json"]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["coeff", "--model", "disk"]).0, EXIT_USAGE);
    assert_eq!(call(&["coeff", "--model", "torus", "--bc", "d"]).0, EXIT_USAGE);
    assert_eq!(call(&["coeff", "--model", "disk", "--radius", "pi", "--bc", "d"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify", "--suite", "matrices", "--m-range", "5..2"]).0, EXIT_USAGE);
    let (code, out, err) = call(&["coeff", "--model", "disk", "--p", "3", "--bc", "d"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(!err.is_empty());
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, err) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("discriminate"));
    assert!(err.is_empty());
}

#[test]
fn short_spectrum_fails_the_tail_precondition() {
    let (code, _, err) = call(&[
        "fit", "--model", "disk", "--bc", "dirichlet", "--lambda-max", "100", "--t-min", "1e-4", "--t-max", "1e-2",
    ]);
    assert_eq!(code, EXIT_NUMERIC, "{err}");
}

#[test]
fn discriminate_exact_models() {
    let (code, out, _) = call(&["discriminate", "--a", "cylinder", "--b", "disk:radius=1", "--pair", "dn", "--m", "2"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["all_transfers_hold"], false);
    assert_eq!(v["delta_i1"]["num"], "2");
    assert_eq!(v["delta_i1"]["pi_half_exponent"], 2);
    assert_eq!(v["properties"][0]["property"], "totally_geodesic");

    let (code, _, err) = call(&["discriminate", "--a", "hemisphere", "--b", "disk"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("τ"));

    assert_eq!(call(&["discriminate", "--a", "disk", "--b", "disk", "--m", "3"]).0, EXIT_USAGE);
}

#[test]
fn discriminate_from_spectrum_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for (model, bc) in [("disk", "dirichlet"), ("disk", "neumann"), ("cylinder", "dirichlet"), ("cylinder", "neumann")] {
        let (code, csv, _) = call(&["spectrum", "--model", model, "--bc", bc, "--lambda-max", "40000"]);
        assert_eq!(code, EXIT_OK);
        let path = dir.path().join(format!("{model}_{bc}.csv"));
        std::fs::write(&path, csv).unwrap();
        paths.push(path.to_string_lossy().into_owned());
    }
    let a = format!("{},{}", paths[2], paths[3]);
    let b = format!("{},{}", paths[0], paths[1]);
    let args = ["discriminate", "--a", &a, "--b", &b, "--pair", "dn", "--tau", "0", "--m", "2"];
    let (code, out, err) = call(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let two_pi = 2.0 * std::f64::consts::PI;
    for key in ["delta_i1", "delta_i2"] {
        let d = v[key].as_f64().unwrap();
        assert!((d - two_pi).abs() < 0.02 * two_pi, "{key} {d}");
    }
    assert_eq!(v["a"]["classification"]["totally_geodesic"], true);
    assert_eq!(v["b"]["classification"]["totally_geodesic"], false);
    assert_eq!(call(&args), (code, out, err));

    let missing_tau = ["discriminate", "--a", &a, "--b", &b, "--m", "2"];
    assert_eq!(call(&missing_tau).0, EXIT_USAGE);
}
