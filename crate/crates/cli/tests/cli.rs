use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

fn qetlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qetlab")).args(args).env_remove("QETLAB_SEED").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header plus data rows of a CSV report, keyed by column name.
fn csv_rows(text: &str) -> Vec<HashMap<String, String>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines.next().expect("header").split(',').map(String::from).collect();
    lines.map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect()).collect()
}

fn num(row: &HashMap<String, String>, key: &str) -> f64 {
    row.get(key).unwrap_or_else(|| panic!("missing column {key}")).parse().unwrap()
}

fn record(args: &[&str]) -> HashMap<String, String> {
    let out = qetlab(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    csv_rows(&stdout(&out)).remove(0)
}

#[test]
fn run_reports_reference_extraction() {
    let ff = record(&["run", "--model", "flipflop"]);
    assert!((num(&ff, "extracted") - 0.8028).abs() < 1e-3);
    assert!((num(&ff, "extracted") - num(&ff, "extracted_closed_form")).abs() < 1e-9);
    let orig = record(&["run", "--model", "original"]);
    assert!((num(&orig, "extracted") - 0.1114).abs() < 1e-3);
    let b = record(&["run", "--model", "appendix_b", "--alpha", "0.3", "--beta", "0.2", "--E", "2", "--F", "1"]);
    assert!((num(&b, "extracted") - 0.9211).abs() < 1e-4);
    assert_eq!(b["extracted_closed_form"], "");
}

#[test]
fn certify_examples() {
    let slp = record(&["certify", "--model", "flipflop", "--state", "00", "--post-measurement", "--starts", "8"]);
    assert_eq!(slp["verdict"], "true");
    assert_eq!(slp["agreement"], "true");
    let eig: Vec<f64> = (0..4).map(|i| num(&slp, &format!("m_eigenvalue_{i}"))).collect();
    for (g, w) in eig.iter().zip([0.0, 0.0, 0.0, 2.0]) {
        assert!((g - w).abs() < 1e-9);
    }

    let post = record(&["certify", "--model", "flipflop", "--state", "ground", "--post-measurement", "--starts", "8"]);
    assert_eq!(post["verdict"], "false");
    let eig: Vec<f64> = (0..4).map(|i| num(&post, &format!("m_eigenvalue_{i}"))).collect();
    for (g, w) in eig.iter().zip([-0.5, 0.0, 1.5, 2.0]) {
        assert!((g - w).abs() < 1e-9);
    }
    assert!(num(&post, "oracle_min_delta_e") < -0.1);

    let v2 = record(&[
        "certify",
        "--model",
        "appendix_b",
        "--alpha",
        "0.3",
        "--beta",
        "0.2",
        "--E",
        "2",
        "--F",
        "1",
        "--state",
        "v2",
        "--starts",
        "8",
    ]);
    assert_eq!(v2["verdict"], "true");
    assert_eq!(v2["oracle_verdict"], "true");
}

#[test]
fn certify_indeterminate_exits_3() {
    let out = qetlab(&["certify", "--model", "appendix_b", "--beta", "0.26181", "--state", "v2", "--starts", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let row = csv_rows(&stdout(&out)).remove(0);
    assert_eq!(row["indeterminate"], "true");
    assert_eq!(row["agreement"], "");
    assert!(stdout(&out).contains("# warning: smallest M eigenvalue"));
}

#[test]
fn certify_eigenstates() {
    for k in 0..4 {
        let state = format!("eigenstate-{k}");
        let out = qetlab(&["certify", "--state", &state, "--starts", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let row = csv_rows(&stdout(&out)).remove(0);
        // Spectrum {-3, -2, 2, 3}: the singlet and |00> are passive, the two
        // upper states are not.
        assert_eq!(row["verdict"], if k < 2 { "true" } else { "false" }, "{state}");
        assert_eq!(row["agreement"], "true");
    }
}

#[test]
fn sweep_rows() {
    let out = qetlab(&["sweep", "--kappa-min", "0.5", "--kappa-max", "3", "--steps", "26"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "kappa_over_h,e_new,e_orig,ratio"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 26);
    let at = |k: f64| rows.iter().find(|r| (num(r, "kappa_over_h") - k).abs() < 1e-9).unwrap();
    assert!((num(at(1.5), "ratio") - 7.206).abs() < 0.01);
    assert!((num(at(0.5), "ratio") - 1.626).abs() < 1e-3);
    assert!(rows.iter().all(|r| num(r, "ratio") > 1.0));
    assert!(text.contains("# warning: grid includes kappa = h"));
}

#[test]
fn sweep_validation() {
    assert_eq!(qetlab(&["sweep", "--kappa-min", "2", "--kappa-max", "1"]).status.code(), Some(1));
    assert_eq!(qetlab(&["sweep", "--steps", "1"]).status.code(), Some(1));
    assert_eq!(qetlab(&["sweep", "--kappa-min", "0"]).status.code(), Some(1));
}

#[test]
fn circuit_rows() {
    let after = record(&["circuit", "--stage", "after", "--shots", "20000", "--seed", "42"]);
    assert!((num(&after, "iz_exact") - 0.5547).abs() < 1e-4);
    assert!((num(&after, "xx_exact") + 0.8320).abs() < 1e-4);
    assert!(num(&after, "yy_exact").abs() < 1e-9);
    assert!((num(&after, "e_bob_exact") + 1.8028).abs() < 1e-4);
    assert!((num(&after, "extracted_exact") - 0.8028).abs() < 1e-4);
    assert!((num(&after, "iz_shots") - 0.5547).abs() < 0.02);
    assert!((num(&after, "chebyshev_delta") - 0.125).abs() < 1e-12);
    let err = num(&after, "extracted_std_error");
    assert!(err > 0.0 && (num(&after, "extracted_shots") - 0.8028).abs() < 4.0 * err);

    let before = record(&["circuit", "--stage", "before"]);
    assert_eq!(before["iz_exact"], "1");
    assert_eq!(before["xx_exact"], "0");
    assert_eq!(before["yy_exact"], "0");
    assert_eq!(before["e_bob_exact"], "-1");
    assert_eq!(before["iz_shots"], "1");

    let exact_cols = ["iz_exact", "xx_exact", "yy_exact", "e_bob_exact"];
    let deferred = record(&["circuit", "--stage", "after", "--mode", "deferred"]);
    for c in exact_cols {
        assert!((num(&after, c) - num(&deferred, c)).abs() < 1e-9, "{c}");
    }
}

#[test]
fn zeno_table() {
    let out = qetlab(&["zeno", "--t", "1", "--steps", "100,1000,10000"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    let d: Vec<f64> = rows.iter().map(|r| num(r, "trace_distance")).collect();
    assert_eq!(d.len(), 3);
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    let zero = csv_rows(&stdout(&qetlab(&["zeno", "--t", "0", "--steps", "5"]))).remove(0);
    assert!(num(&zero, "trace_distance") < 1e-12);
    assert_eq!(qetlab(&["zeno", "--steps", "100,10"]).status.code(), Some(1));
    assert_eq!(qetlab(&["zeno", "--t", "-1"]).status.code(), Some(1));
}

#[test]
fn outputs_are_byte_identical_for_equal_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    for (name, seed) in [("a.csv", "5"), ("b.csv", "5"), ("c.csv", "6")] {
        let out = qetlab(&["circuit", "--seed", seed, "--out", &path(name)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));

    for name in ["x.json", "y.json"] {
        qetlab(&["certify", "--starts", "4", "--format", "json", "--out", &path(name)]);
    }
    assert_eq!(read("x.json"), read("y.json"));
}

#[test]
fn json_reports_are_flat_and_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.json");
    qetlab(&["run", "--format", "json", "--out", file.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let obj = v.as_object().unwrap();
    assert_eq!(obj["schema_version"], "1");
    assert_eq!(obj["command"], "run");
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    let expected = [
        "schema_version",
        "command",
        "model",
        "h",
        "kappa",
        "energy_initial",
        "energy_before",
        "energy_after",
        "extracted",
        "extracted_closed_form",
        "p_plus",
        "p_minus",
        "slp_initial_verdict",
        "slp_initial_min_eigenvalue",
        "slp_post_verdict",
        "slp_post_min_eigenvalue",
        "yy_initial",
        "yy_post_measurement",
        "yy_final",
        "warnings",
    ];
    assert_eq!(keys, expected);
    assert!(obj.values().all(|x| !x.is_object()));

    let sweep: serde_json::Value = serde_json::from_slice(&qetlab(&["sweep", "--format", "json"]).stdout).unwrap();
    assert_eq!(sweep["ratio"].as_array().unwrap().len(), 30);
    assert_eq!(sweep["schema_version"], "1");
}

#[test]
fn every_csv_has_schema_line_and_header() {
    for args in [
        vec!["run"],
        vec!["sweep", "--steps", "3"],
        vec!["circuit", "--shots", "10"],
        vec!["zeno", "--steps", "10"],
        vec!["certify", "--starts", "1"],
    ] {
        let text = stdout(&qetlab(&args));
        assert!(text.starts_with("# schema_version: 1\n"), "{args:?}");
        assert!(!csv_rows(&text).is_empty());
    }
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("qetlab.conf");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# experiment\nmodel = original\nkappa = 0.5\nseed = 9\n");
    let row = record(&["run", "--config", &cfg]);
    let direct = record(&["run", "--model", "original", "--kappa", "0.5"]);
    assert_eq!(row["extracted"], direct["extracted"]);
    let overridden = record(&["run", "--config", &cfg, "--kappa", "1.5"]);
    assert!((num(&overridden, "extracted") - 0.1114).abs() < 1e-3);

    // Seed: flag > file > environment > default.
    let seed_of = |args: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_qetlab"));
        cmd.args(args).env_remove("QETLAB_SEED");
        if let Some(v) = env {
            cmd.env("QETLAB_SEED", v);
        }
        let text = String::from_utf8(cmd.output().unwrap().stdout).unwrap();
        text.lines().find_map(|l| l.strip_prefix("# seed: ")).unwrap().to_string()
    };
    assert_eq!(seed_of(&["circuit", "--shots", "1"], None), "42");
    assert_eq!(seed_of(&["circuit", "--shots", "1"], Some("7")), "7");
    let seed_cfg = write_config(dir.path(), "seed=9\n");
    assert_eq!(seed_of(&["circuit", "--shots", "1", "--config", &seed_cfg], Some("7")), "9");
    assert_eq!(seed_of(&["circuit", "--shots", "1", "--config", &seed_cfg, "--seed", "3"], Some("7")), "3");
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "colour = blue\n");
    for args in [
        vec!["frobnicate"],
        vec!["run", "--model", "ising"],
        vec!["run", "--h", "-1"],
        vec!["run", "--config", &bad],
        vec!["run", "--config", "/nonexistent/qetlab.conf"],
        vec!["certify", "--state", "v2"],
        vec!["certify", "--state", "eigenstate-7"],
        vec!["circuit", "--model", "original"],
        vec!["circuit", "--shots", "0"],
        vec!["run", "--out", "/nonexistent/dir/out.csv"],
    ] {
        let out = qetlab(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let env_bad = Command::new(env!("CARGO_BIN_EXE_qetlab")).args(["circuit"]).env("QETLAB_SEED", "x").output();
    assert_eq!(env_bad.unwrap().status.code(), Some(1));
    assert_eq!(qetlab(&["--help"]).status.code(), Some(0));
}
