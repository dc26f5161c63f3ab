use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn qplame(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qplame"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn read_json(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

const MEDIUM: &str = r#""medium": {"lambda": 2, "mu": 1, "rho": 1, "omega": 5}"#;

#[test]
fn verify_quasiperiodicity_on_default_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = qplame(
        dir.path(),
        &[
            "verify",
            "--suite",
            "quasiperiodicity",
            "--out",
            "r.json",
            "--seed",
            "11",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(dir.path(), "r.json");
    assert_eq!(r["passed"], true);
    assert_eq!(r["seed"], 11);
    assert_eq!(r["config"]["seed"], 11);
    let checks = r["suites"][0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert!(c["worst"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn verify_respects_the_geometry_filter() {
    let dir = tempfile::tempdir().unwrap();
    let o = qplame(
        dir.path(),
        &[
            "verify",
            "--suite",
            "reciprocity",
            "--geometry",
            "biqp3d",
            "--out",
            "r.json",
        ],
    );
    assert_eq!(code(&o), 0);
    let r = read_json(dir.path(), "r.json");
    assert_eq!(r["geometries"], serde_json::json!(["biqp3d"]));
    assert_eq!(r["suites"][0]["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn missing_mu_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "c.json",
        r#"{"medium": {"lambda": 2, "rho": 1, "omega": 5}}"#,
    );
    let o = qplame(dir.path(), &["eval", "--config", "c.json"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("`mu`") && err.contains("line 1"), "{err}");
}

#[test]
fn unknown_fields_and_bad_media_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.json", &format!(r#"{{{MEDIUM}, "omgea": 3}}"#));
    assert_eq!(code(&qplame(dir.path(), &["eval", "--config", "a.json"])), 2);
    write(
        dir.path(),
        "b.json",
        r#"{"medium": {"lambda": 2, "mu": -1, "rho": 1, "omega": 5}}"#,
    );
    let o = qplame(dir.path(), &["verify", "--config", "b.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("mu"));
    assert_eq!(code(&qplame(dir.path(), &["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn eval_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "c.json",
        &format!(
            r#"{{{MEDIUM}, "geometry": "qp3d", "quasi_momentum": {{"alpha": [0.4, 0]}},
            "grid": {{"source": [0, 0, 0], "axes": [[0, 0.5, 2], [0.3, 0.6, 3], [0.2, 0.2, 1]]}}}}"#
        ),
    );
    let a = qplame(dir.path(), &["eval", "--config", "c.json", "--threads", "2"]);
    let b = qplame(dir.path(), &["eval", "--config", "c.json"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 3 + 18 + 2);
    assert_eq!(header[3], "G11_re");
    assert_eq!(lines.count(), 6);
}

#[test]
fn points_on_the_source_line_are_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "c.json",
        &format!(r#"{{{MEDIUM}, "grid": {{"source": [0, 0], "points": [[0.3, 0]]}}}}"#),
    );
    let o = qplame(dir.path(), &["eval", "--config", "c.json"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn solve_then_rayleigh_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "c.json",
        &format!(
            r#"{{{MEDIUM}, "profile": {{"a0": 0, "cos": [0], "sin": [0.1]}},
            "solver": {{"n": 64, "incident": {{"kind": "plane_p", "angle": 0.3}}, "modes": 3, "height": 0.5}},
            "rayleigh": {{"height": 0.5, "modes": 3, "count": 16,
                          "coefficients": "sol.json", "samples": "field.csv"}}}}"#
        ),
    );
    let o = qplame(d, &["solve2d", "--config", "c.json", "--out", "sol.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sol = read_json(d, "sol.json");
    assert!(sol["boundary_residual"].as_f64().unwrap() < 1e-8);
    assert!(sol["energy_balance"]["relative"].as_f64().unwrap() < 1e-3);
    assert_eq!(sol["density"].as_array().unwrap().len(), 64);
    // the solve's own coefficients, re-wrapped as an extract output
    let wrapped = serde_json::json!({ "coefficients": sol["rayleigh"] });
    write(d, "sol.json", &wrapped.to_string());
    assert_eq!(
        code(&qplame(
            d,
            &["rayleigh", "eval", "--config", "c.json", "--out", "field.csv"]
        )),
        0
    );
    assert_eq!(
        code(&qplame(
            d,
            &["rayleigh", "extract", "--config", "c.json", "--out", "back.json"]
        )),
        0
    );
    let back = read_json(d, "back.json");
    for k in ["p", "s"] {
        let a = sol["rayleigh"][k].as_array().unwrap();
        let b = back["coefficients"][k].as_array().unwrap();
        assert_eq!(a.len(), 7);
        for (x, y) in a.iter().zip(b) {
            assert_eq!(x[0], y[0]);
            let dre = x[1].as_f64().unwrap() - y[1].as_f64().unwrap();
            let dim = x[2].as_f64().unwrap() - y[2].as_f64().unwrap();
            assert!(dre.hypot(dim) < 1e-10);
        }
    }
}

#[test]
fn solve2d_rejects_other_geometries() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "c.json",
        &format!(r#"{{{MEDIUM}, "solver": {{"n": 64, "incident": {{"kind": "plane_s", "angle": 0.1}}}}}}"#),
    );
    assert_eq!(
        code(&qplame(
            dir.path(),
            &["solve2d", "--config", "c.json", "--geometry", "qp3d"]
        )),
        2
    );
}

fn phaseless_config(profile: &str, datasets: &str, expect: &str) -> String {
    format!(
        r#"{{{MEDIUM}, "quasi_momentum": {{"alpha": [0.4, 0]}}, "profile": {profile},
        "phaseless": {{
            "frequencies": [5.0, 4.5],
            "sources": {{
                "z_fixed": [0.3, 0.3], "q_fixed": [0.6, 0.8],
                "sigma": {{"center": [0.5, 0.6], "semi_axes": [0.2, 0.1], "theta": [0.2, 2.6], "count": 3}},
                "q_movable": [[1, 0], [0, 1]],
                "probes": [[1, 0], [0.6, -0.8]],
                "grid": {{"h": 1.0, "x_range": [0, 0.875], "count": 8}},
                "n_bem": 64
            }},
            "datasets": {datasets}, "expect": "{expect}"
        }}}}"#
    )
}

#[test]
fn phaseless_synth_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sin = r#"{"a0": 0, "cos": [0], "sin": [0.1]}"#;
    let cos = r#"{"a0": 0, "cos": [0.08], "sin": [0]}"#;
    write(d, "a.json", &phaseless_config(sin, "[]", "equal"));
    write(d, "b.json", &phaseless_config(cos, "[]", "equal"));
    assert_eq!(
        code(&qplame(
            d,
            &["phaseless", "synth", "--config", "a.json", "--out", "da.json"]
        )),
        0
    );
    assert_eq!(
        code(&qplame(
            d,
            &["phaseless", "synth", "--config", "b.json", "--out", "db.json"]
        )),
        0
    );
    let da = read_json(d, "da.json");
    assert_eq!(da["datasets"].as_array().unwrap().len(), 2);
    assert_eq!(da["datasets"][1]["omega"].as_f64().unwrap(), 4.5);
    assert_eq!(da["datasets"][0]["dirichlet_eigenvalue_condition"], "assumed");

    write(d, "self.json", &phaseless_config(sin, r#"["da.json"]"#, "equal"));
    let o = qplame(d, &["phaseless", "check", "--config", "self.json", "--out", "r.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        read_json(d, "r.json")["frequencies"][0]["cosine_discrepancy"]
            .as_f64()
            .unwrap(),
        0.0
    );

    write(
        d,
        "same.json",
        &phaseless_config(sin, r#"["da.json", "db.json"]"#, "equal"),
    );
    assert_eq!(
        code(&qplame(
            d,
            &["phaseless", "check", "--config", "same.json", "--out", "r.json"]
        )),
        1
    );
    write(
        d,
        "diff.json",
        &phaseless_config(sin, r#"["da.json", "db.json"]"#, "distinct"),
    );
    assert_eq!(
        code(&qplame(
            d,
            &["phaseless", "check", "--config", "diff.json", "--out", "r.json"]
        )),
        0
    );
    let r = read_json(d, "r.json");
    for f in r["frequencies"].as_array().unwrap() {
        assert!(f["cosine_discrepancy"].as_f64().unwrap() > 1e-6);
    }
}
