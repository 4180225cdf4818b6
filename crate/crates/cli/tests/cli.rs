use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spherewave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn green_at_the_south_pole_for_half_degree() {
    let out = run(&["eval-green", "--lambda", "0.5", "0", "--theta", "3.141592653589793"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "spherewave/1");
    assert_eq!(v["m_used"], 1);
    let (re, im) = complex(&v["pw"]);
    assert!((re - 0.25).abs() < 1e-10 && im.abs() < 1e-10);
}

#[test]
fn green_with_complex_degree_matches_closed_form() {
    let out = run(&["eval-green", "--lambda", "0.3", "0.2", "--theta", "2.2", "--phi", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["rel_err"].as_f64().unwrap() <= 1e-8);
    assert!(v["quadrature_error_estimate"].as_f64().unwrap() >= 0.0);
}

#[test]
fn green_with_general_source_and_forced_domain() {
    let out = run(&[
        "eval-green", "--lambda", "-0.7", "0.5", "--theta", "1.1", "--phi", "2.0", "--theta0", "2.0",
        "--phi0", "0.3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["rel_err"].as_f64().unwrap() <= 1e-8);

    let out = run(&["eval-green", "--theta", "2.5", "--domain", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["m_used"], 1);
}

#[test]
fn point_in_the_excluded_cap_is_a_run_failure() {
    let out = run(&["eval-green", "--lambda", "0.3", "0.2", "--theta", "0.01"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "NoValidDomain");
}

#[test]
fn invalid_input_is_a_usage_failure() {
    for args in [
        vec!["eval-green", "--theta", "45deg"],
        vec!["eval-green", "--theta", "1.0", "--lambda", "2", "0"],
        vec!["eval-green", "--theta", "1.0", "--delta", "-1"],
        vec!["eval-green", "--theta", "4.0"],
        vec!["build-contour", "--m", "0"],
        vec!["verify", "--tol", "-1"],
        vec!["nonsense"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn legendre_methods_agree() {
    let mut values = Vec::new();
    for method in ["auto", "series", "integral"] {
        let out = run(&["eval-legendre", "--lambda", "0.3", "0.2", "--q", "0.4", "--method", method]);
        assert_eq!(out.status.code(), Some(0));
        values.push(complex(&json(&out)["value"]));
    }
    for (re, im) in &values[1..] {
        assert!((re - values[0].0).abs() < 1e-10 && (im - values[0].1).abs() < 1e-10);
    }
    let out = run(&["eval-legendre", "--lambda", "0.3", "0", "--q", "3.0", "--method", "infinity"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["eval-legendre", "--q", "0.4", "--q-im", "1", "--method", "series"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_sweep_prints_only_the_header() {
    let out = run(&["sweep", "--n-theta", "0", "--n-phi", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "theta,phi,m,closed_re,closed_im,pw_re,pw_im,rel_err,error\n"
    );
}

#[test]
fn sweep_is_accurate_off_the_cap_and_flags_the_cap() {
    let out = run(&["sweep", "--n-theta", "40", "--n-phi", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1600);
    let mut flagged = 0;
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 9);
        let theta: f64 = cols[0].parse().unwrap();
        if cols[8].is_empty() {
            assert!(cols[7].parse::<f64>().unwrap() <= 1e-7, "{row}");
        } else {
            assert!(theta < 0.2, "{row}");
            assert_eq!(cols[8], "NoValidDomain", "{row}");
            assert!(cols[2].is_empty() && cols[7].is_empty());
            flagged += 1;
        }
    }
    assert!(flagged > 0);
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["sweep", "--n-theta", "12", "--n-phi", "9", "--output", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["rows"].as_array().unwrap().len(), 108);
    assert!(v["max_rel_err"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn verify_passes_and_is_reproducible() {
    let a = run(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    let v = json(&a);
    assert_eq!(v["pass"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 10);
    assert!(suites.iter().all(|s| s["pass"] == true && s.get("seconds").is_none()));
    let b = run(&["verify"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn single_suite_and_forced_failure() {
    let out = run(&["verify", "--suite", "planar"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], "planar");

    let out = run(&["verify", "--suite", "maps", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["failed"][0], "maps");

    let out = run(&["verify", "--suite", "residues", "--timing"]);
    assert!(json(&out)["suites"][0]["seconds"].as_f64().is_some());
}

#[test]
fn planar_check_reports_every_domain() {
    let out = run(&["planar-check", "--y1", "1.3", "--y2", "-0.4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let (re, im) = complex(&v["closed"]);
    assert!((re - 0.07956421997338635).abs() < 1e-12 && (im + 0.14707661194574495).abs() < 1e-12);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
    assert!(v["max_rel_err"].as_f64().unwrap() <= 1e-8);

    let out = run(&["planar-check", "--y1", "1", "--y2", "0", "--domain", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn contour_dump_has_schema_and_samples() {
    let out = run(&["build-contour", "--m", "3", "--samples", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "spherewave/1");
    assert_eq!(v["command"], "build-contour");
    assert_eq!(v["contour"]["closed"], true);
    assert_eq!(v["plane_normal"].as_array().unwrap().len(), 3);
    assert!(!v["contour"]["segments"].as_array().unwrap().is_empty());

    let out = run(&["build-contour", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["plane_normal"].is_null());
}
