use serde_json::Value;

use ofke_wasm::{bounds_json, profile_json, solve_harmonic_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("valid json")
}

#[test]
fn profile_reports_the_combined_functional() {
    let v = parse(&profile_json("hydrogen", 1.0, -1.0, 1.0).unwrap());
    let total = v["breakdown"]["total"].as_f64().unwrap();
    assert!((total - 0.98190).abs() < 2e-3, "{total}");
    assert_eq!(v["measure"], "radial3d");
    assert!(v["density"]["x"].as_array().unwrap().len() <= 400);
    assert_eq!(
        v["density"]["x"].as_array().unwrap().len(),
        v["density"]["y"].as_array().unwrap().len()
    );

    let v = parse(&profile_json("box1d", 3.0, 0.0, 0.5).unwrap());
    assert_eq!(v["breakdown"]["tf_term"], 0.0);
    assert_eq!(v["label"], "box1d(L=1,N=3)");
}

#[test]
fn profile_rejects_bad_input() {
    assert!(profile_json("helium", 1.0, 1.0, 1.0).is_err());
    assert!(profile_json("harm1d", 2.5, 1.0, 1.0).is_err());
    assert!(profile_json("hydrogen", 1.0, 1.0, 1.5).is_err());
}

#[test]
fn bound_chain_matches_the_core_report() {
    let v = parse(&bounds_json("hydrogen", 1.0, 9.11).unwrap());
    assert_eq!(v["chain_ok"], serde_json::json!([true, true, true]));
    let v = parse(&bounds_json("harm1d", 2.0, 9.11).unwrap());
    assert_eq!(v["zumbach"], Value::Null);
    assert!(bounds_json("hydrogen", 1.0, -1.0).is_err());
}

#[test]
fn harmonic_solve_reaches_the_ground_state() {
    let v = parse(&solve_harmonic_json(1.0, 0.0, 1.0, 5000).unwrap());
    assert!((v["energy"].as_f64().unwrap() - 0.5).abs() < 1e-3);
    assert_eq!(v["converged"], true);
    let h = v["energy_history"].as_array().unwrap();
    assert!(h.windows(2).all(|w| w[1].as_f64() <= w[0].as_f64()));
    assert_eq!(h.last().unwrap().as_f64(), v["energy"].as_f64());
    assert!(solve_harmonic_json(0.0, 0.0, 1.0, 10).is_err());
}
