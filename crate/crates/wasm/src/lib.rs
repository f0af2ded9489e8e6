//! Browser bindings. Each export returns a JSON string; the plain-Rust
//! `*_json` functions behind them are what the native tests exercise.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ofke_core::bounds::{verify_chain, BoundReport};
use ofke_core::functionals::{
    c_f_sq, c_lt_1d, combined_q, weizsacker, Coefficients, FunctionalBreakdown,
};
use ofke_core::grid::{make_radial_grid, make_uniform_grid, GridRef, ScalarField};
use ofke_core::reference::{
    box_fermions_1d, default_box_grid, default_harmonic_grid, default_radial_grid, gaussian_3d,
    harmonic_fermions_1d_omega, hydrogenic,
};
use ofke_core::variational::{default_solver_line_grid, minimize_energy, SolverOptions};
use ofke_core::ReferenceSystem;

/// Plotted curves are thinned to at most this many points.
const MAX_PLOT_POINTS: usize = 400;

#[derive(Serialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn thin(x: &[f64], y: &[f64]) -> Curve {
    let stride = x.len().div_ceil(MAX_PLOT_POINTS).max(1);
    Curve {
        x: x.iter().step_by(stride).copied().collect(),
        y: y.iter().step_by(stride).copied().collect(),
    }
}

/// `param` is `Z` for hydrogen, `omega` for gauss3d and `N` for the 1D systems.
fn system(name: &str, param: f64, g: Option<GridRef>) -> Result<ReferenceSystem, String> {
    let count = || -> Result<usize, String> {
        if param.fract() != 0.0 || !(1.0..=20.0).contains(&param) {
            return Err(format!("N must be an integer in 1..=20, got {param}"));
        }
        Ok(param as usize)
    };
    let err = |e: ofke_core::Error| e.to_string();
    match name {
        "hydrogen" => {
            hydrogenic(param, &g.map_or_else(default_radial_grid, Ok).map_err(err)?).map_err(err)
        }
        "gauss3d" => {
            gaussian_3d(param, &g.map_or_else(default_radial_grid, Ok).map_err(err)?).map_err(err)
        }
        "box1d" => box_fermions_1d(
            count()?,
            1.0,
            &g.map_or_else(|| default_box_grid(1.0), Ok).map_err(err)?,
        )
        .map_err(err),
        "harm1d" => harmonic_fermions_1d_omega(
            count()?,
            1.0,
            &g.map_or_else(default_harmonic_grid, Ok).map_err(err)?,
        )
        .map_err(err),
        other => Err(format!("unknown system `{other}`")),
    }
}

/// A lighter grid for interactive redraws.
fn plot_grid(name: &str) -> Result<GridRef, String> {
    match name {
        "hydrogen" | "gauss3d" => make_radial_grid(15.0, 4000),
        "box1d" => make_uniform_grid(0.0, 1.0, 2049),
        _ => make_uniform_grid(-8.0, 8.0, 2049),
    }
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
pub struct Profile {
    pub label: String,
    pub measure: &'static str,
    pub density: Curve,
    pub breakdown: FunctionalBreakdown,
    pub weizsacker: f64,
    pub t_exact: f64,
    /// `(C, q)` actually used.
    pub c: f64,
    pub q: f64,
}

/// Density curve and the combined functional; a negative `c` selects the
/// dimension's default coefficient.
pub fn profile_json(name: &str, param: f64, c: f64, q: f64) -> Result<String, String> {
    let s = system(name, param, Some(plot_grid(name)?))?;
    let g = s.grid().clone();
    let c = if c < 0.0 { default_c(name) } else { c };
    let breakdown = combined_q(&s.density, c, q).map_err(|e| e.to_string())?;
    let p = Profile {
        label: s.label(),
        measure: g.measure().as_str(),
        density: thin(g.nodes(), s.density.values()),
        breakdown,
        weizsacker: weizsacker(&s.density),
        t_exact: s.t_exact,
        c,
        q,
    };
    Ok(serde_json::to_string(&p).expect("profile serializes"))
}

fn default_c(name: &str) -> f64 {
    match name {
        "box1d" | "harm1d" => c_lt_1d(),
        _ => 0.5 * c_f_sq(),
    }
}

/// Bound chain on the default grid, as a `BoundReport`.
pub fn bounds_json(name: &str, param: f64, c_lt: f64) -> Result<String, String> {
    let s = system(name, param, None)?;
    let k = Coefficients::default()
        .with_c_lt(c_lt)
        .map_err(|e| e.to_string())?;
    let r: BoundReport = verify_chain(&s, &k).map_err(|e| e.to_string())?;
    Ok(r.to_json())
}

#[derive(Serialize)]
pub struct Solution {
    pub energy: f64,
    pub kinetic: FunctionalBreakdown,
    pub external: f64,
    pub converged: bool,
    pub iterations: usize,
    pub density: Curve,
    /// Exact ground-state density of the same oscillator.
    pub reference: Curve,
    pub energy_history: Vec<f64>,
}

/// Minimize the combined energy for one particle in `omega^2 x^2 / 2`.
pub fn solve_harmonic_json(
    omega: f64,
    c: f64,
    q: f64,
    max_iterations: usize,
) -> Result<String, String> {
    if !(omega > 0.0 && omega <= 4.0) {
        return Err(format!("omega must be in (0, 4], got {omega}"));
    }
    let g = default_solver_line_grid().map_err(|e| e.to_string())?;
    let v = ScalarField::from_fn(&g, |x| 0.5 * omega * omega * x * x).map_err(|e| e.to_string())?;
    let opts = SolverOptions {
        max_iterations: max_iterations.max(1),
        ..SolverOptions::default()
    };
    let out = minimize_energy(&v, 1.0, c, q, &g, &opts).map_err(|e| e.to_string())?;
    let exact: Vec<f64> = g
        .nodes()
        .iter()
        .map(|x| (omega / std::f64::consts::PI).sqrt() * (-omega * x * x).exp())
        .collect();
    let hist = &out.energy_history;
    let stride = hist.len().div_ceil(MAX_PLOT_POINTS).max(1);
    let mut energy_history: Vec<f64> = hist.iter().step_by(stride).copied().collect();
    if (hist.len() - 1) % stride != 0 {
        energy_history.push(out.energy);
    }
    let s = Solution {
        energy: out.energy,
        kinetic: out.kinetic,
        external: out.external,
        converged: out.converged,
        iterations: out.iterations,
        density: thin(g.nodes(), out.density.values()),
        reference: thin(g.nodes(), &exact),
        energy_history,
    };
    Ok(serde_json::to_string(&s).expect("solution serializes"))
}

#[wasm_bindgen]
pub fn profile(system: &str, param: f64, c: f64, q: f64) -> Result<String, JsError> {
    profile_json(system, param, c, q).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bound_chain(system: &str, param: f64, c_lt: f64) -> Result<String, JsError> {
    bounds_json(system, param, c_lt).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve_harmonic(
    omega: f64,
    c: f64,
    q: f64,
    max_iterations: usize,
) -> Result<String, JsError> {
    solve_harmonic_json(omega, c, q, max_iterations).map_err(|e| JsError::new(&e))
}
