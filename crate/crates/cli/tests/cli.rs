use std::process::{Command, Output};

use serde_json::Value;

fn ofke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ofke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = ofke(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn hydrogen_bounds_chain_holds() {
    let v = json(&[
        "bounds", "--system", "hydrogen", "--Z", "1", "--format", "json",
    ]);
    let r = &v["report"];
    assert_eq!(r["chain_ok"], serde_json::json!([true, true, true]));
    assert_eq!(r["t_exact"], 0.5);
    assert!((r["lower_lt"].as_f64().unwrap() - 0.45870).abs() < 1e-4);
    assert!((r["upper_tfw"].as_f64().unwrap() - 0.98190).abs() < 1e-4);
    assert_eq!(v["header"]["grids"][0]["n"], 20000);
    assert_eq!(v["header"]["coefficients"]["c_lt"], 9.11);
}

#[test]
fn box_decomposition_residual_is_small() {
    let v = json(&["decompose", "--system", "box1d", "--L", "1", "--n2", "512"]);
    let r = &v["report"];
    let ratio = r["residual"].as_f64().unwrap().abs() / r["multivariate"].as_f64().unwrap();
    assert!(ratio <= 1e-3, "{ratio}");
    assert_eq!(r["grid"]["n1"], 512);
}

#[test]
fn missing_density_file_exits_2() {
    let out = ofke(&["eval", "--density", "missing.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
    assert!(out.stdout.is_empty());
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["bounds"][..],
        &["bounds", "--system", "helium"],
        &["bounds", "--system", "box1d", "--Z", "2"],
        &["bounds", "--system", "hydrogen", "--unknown", "1"],
        &["bounds", "--system", "hydrogen", "--q", "0.5"],
        &["fit-q", "--system", "hydrogen", "--system", "box1d"],
        &["solve", "--system", "box1d"],
        &["eval", "--system", "hydrogen", "--q", "2"],
    ] {
        assert_eq!(ofke(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["fit-q", "--system", "box1d", "--N", "4", "--grid-n", "2049"];
    let a = ofke(&args);
    let b = ofke(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_matches_json() {
    let base = [
        "eval", "--system", "harm1d", "--N", "3", "--C", "1.2", "--q", "0.4",
    ];
    let v = json(&base);
    let mut args = base.to_vec();
    args.extend(["--format", "csv"]);
    let out = ofke(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let mut checked = 0;
    for row in rows.records() {
        let row = row.unwrap();
        let path: Vec<&str> = row[0].split('.').collect();
        let mut node = &v;
        for p in &path {
            node = match p.parse::<usize>() {
                Ok(i) if node.is_array() => &node[i],
                _ => &node[*p],
            };
        }
        if let Some(x) = node.as_f64() {
            assert_eq!(row[1].parse::<f64>().unwrap(), x, "{}", &row[0]);
            checked += 1;
        }
    }
    assert!(checked > 15);
    assert_eq!(
        v["report"]["combined"]["weizsacker_term"].as_f64().unwrap(),
        ofke_core::report::round_sig(0.4 * v["report"]["weizsacker"].as_f64().unwrap())
    );
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = ofke(&[
        "bounds",
        "--system",
        "gauss3d",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["system"], "gauss3d");
}

#[test]
fn density_file_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    let g = ofke_core::reference::default_radial_grid().unwrap();
    let h = ofke_core::reference::hydrogenic(1.0, &g).unwrap();
    ofke_core::density::save_density_file(&h.density, &path).unwrap();
    let from_file = json(&["eval", "--density", path.to_str().unwrap()]);
    let built_in = json(&["eval", "--system", "hydrogen"]);
    assert_eq!(
        from_file["report"]["combined"],
        built_in["report"]["combined"]
    );
    assert_eq!(from_file["report"]["t_exact"], Value::Null);
    let out = ofke(&["eval", "--density", path.to_str().unwrap(), "--Z", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn harmonic_solve_and_strict_mode() {
    let v = json(&["solve", "--system", "harm1d", "--C", "0", "--q", "1"]);
    let e = v["report"]["energy"].as_f64().unwrap();
    assert!((e - 0.5).abs() <= 1e-3, "{e}");
    assert_eq!(v["report"]["converged"], true);
    assert_eq!(v["header"]["solver"]["max_iterations"], 5000);

    let loose = ofke(&["solve", "--system", "harm1d", "--max-iter", "5"]);
    assert_eq!(loose.status.code(), Some(0));
    let strict = ofke(&["solve", "--system", "harm1d", "--max-iter", "5", "--strict"]);
    assert_eq!(strict.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&strict.stdout).unwrap();
    assert_eq!(v["report"]["converged"], false);
}

#[test]
fn thomas_fermi_term_only_raises_the_minimum() {
    let v = json(&[
        "solve",
        "--system",
        "harm1d",
        "--C",
        "1.6449340668",
        "--q",
        "1",
    ]);
    assert!(v["report"]["energy"].as_f64().unwrap() >= 0.5);
}

#[test]
fn text_format_lists_every_field() {
    let out = ofke(&[
        "bounds", "--system", "box1d", "--N", "2", "--format", "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("report.zumbach"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("report.chain_ok.2") && l.ends_with("true")));
}
