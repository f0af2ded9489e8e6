use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use ofke_core::bounds::verify_chain;
use ofke_core::density::load_density_file;
use ofke_core::functionals::{
    c_lt_1d, combined_q, local_exponent, local_integral, march_young_1d, weizsacker,
    weizsacker_direct, Coefficients, FunctionalBreakdown,
};
use ofke_core::grid::{Grid, GridRef, Measure, ScalarField};
use ofke_core::pair::{box_pair, harmonic_pair, verify_decomposition, DEFAULT_PAIR_HALF_WIDTH};
use ofke_core::variational::{
    fit_q, minimize_energy, SolverOptions, DEFAULT_SOLVER_HALF_WIDTH, DEFAULT_SOLVER_LINE_N,
    DEFAULT_SOLVER_RADIAL_N, DEFAULT_SOLVER_RADIAL_RMAX,
};
use ofke_core::ReferenceSystem;

use crate::args::{BoundsArgs, CoeffArgs, DecomposeArgs, EvalArgs, FitArgs, SolveArgs, SystemArgs};
use crate::systems::{build, default_grid_for, grid_for, single_spec, specs_from_args, Kind};
use crate::CliError;

/// A finished command: the envelope plus an optional strict-mode failure.
pub struct Outcome {
    pub doc: Value,
    pub failure: Option<String>,
}

#[derive(Serialize)]
struct GridInfo {
    measure: &'static str,
    n: usize,
    start: f64,
    end: f64,
    spacing: f64,
}

fn grid_info(g: &Grid) -> GridInfo {
    GridInfo {
        measure: g.measure().as_str(),
        n: g.len(),
        start: g.first(),
        end: g.last(),
        spacing: g.spacing(),
    }
}

fn envelope(
    command: &str,
    grids: &[&Grid],
    coeffs: &Coefficients,
    extra: Option<Value>,
    report: Value,
) -> Value {
    let mut header = json!({
        "grids": grids.iter().map(|g| grid_info(g)).collect::<Vec<_>>(),
        "coefficients": coeffs,
    });
    if let Some(x) = extra {
        header["solver"] = x;
    }
    json!({
        "tool": "ofke",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "header": header,
        "report": report,
    })
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

/// Coefficients from the flags; an absent `--C` becomes `C_F^2/2` on radial
/// grids and `pi^2/6` on line grids.
fn coefficients(a: &CoeffArgs, measure: Measure) -> Result<Coefficients, CliError> {
    let mut k = Coefficients::default();
    if let Some(v) = a.c_lt {
        k = k.with_c_lt(v)?;
    }
    if let Some(v) = a.c_lt_1d {
        k = k.with_c_lt_1d(v)?;
    }
    if let Some(v) = a.c_1d {
        k = k.with_c_1d(v)?;
    }
    if let Some(v) = a.c_my {
        k = k.with_c_my(v)?;
    }
    k = k.with_c(a.c.unwrap_or_else(|| default_c(measure)))?;
    if let Some(v) = a.q {
        k = k.with_q(v)?;
    }
    Ok(k)
}

fn default_c(measure: Measure) -> f64 {
    match measure {
        Measure::Line1d => c_lt_1d(),
        _ => 0.5 * ofke_core::functionals::c_f_sq(),
    }
}

fn reject(unused: &[(&str, bool)], command: &str) -> Result<(), CliError> {
    match unused.iter().find(|(_, given)| *given) {
        Some((flag, _)) => Err(CliError::config(format!("{flag} is not used by {command}"))),
        None => Ok(()),
    }
}

fn one_system(a: &SystemArgs, grid: &crate::args::GridArgs) -> Result<ReferenceSystem, CliError> {
    let spec = single_spec(a)?;
    let g = default_grid_for(&spec, grid)?;
    build(&spec, spec.count()?, &g)
}

#[derive(Serialize)]
struct EvalReport {
    system: String,
    params: BTreeMap<String, f64>,
    n_particles: f64,
    integral: f64,
    local_exponent: f64,
    local_integral: f64,
    weizsacker: f64,
    weizsacker_direct: f64,
    combined: FunctionalBreakdown,
    march_young: Option<f64>,
    t_exact: Option<f64>,
}

pub fn eval(a: &EvalArgs) -> Result<Outcome, CliError> {
    let (name, params, rho, t_exact) = match (&a.density, a.system.system.is_empty()) {
        (Some(path), true) => {
            reject(
                &[
                    ("--Z", a.system.z.is_some()),
                    ("--L", a.system.l.is_some()),
                    ("--N", a.system.n.is_some()),
                    ("--omega", a.system.omega.is_some()),
                    ("--grid-n", a.grid.grid_n.is_some()),
                    ("--grid-rmax", a.grid.grid_rmax.is_some()),
                ],
                "eval --density",
            )?;
            let rho = load_density_file(path).map_err(|e| match e {
                ofke_core::Error::Io(io) => {
                    CliError::config(format!("cannot read {}: {io}", path.display()))
                }
                other => CliError::config(format!("{}: {other}", path.display())),
            })?;
            (path.display().to_string(), BTreeMap::new(), rho, None)
        }
        (None, false) => {
            let s = one_system(&a.system, &a.grid)?;
            (s.name.clone(), s.params.clone(), s.density, Some(s.t_exact))
        }
        (Some(_), false) => {
            return Err(CliError::config(
                "pass either --system or --density, not both",
            ))
        }
        (None, true) => return Err(CliError::config("no input: pass --system or --density")),
    };
    let g = rho.grid().clone();
    let k = coefficients(&a.coeffs, g.measure())?;
    let march_young = match (k.c_my(), g.measure()) {
        (Some(c), Measure::Line1d) => Some(march_young_1d(&rho, c)?),
        (Some(_), _) => return Err(CliError::config("--c-my needs a line (1D) density")),
        (None, _) => None,
    };
    let report = EvalReport {
        system: name,
        params,
        n_particles: rho.n_particles(),
        integral: rho.integral(),
        local_exponent: local_exponent(g.measure()),
        local_integral: local_integral(&rho),
        weizsacker: weizsacker(&rho),
        weizsacker_direct: weizsacker_direct(&rho),
        combined: combined_q(&rho, k.c(), k.q())?,
        march_young,
        t_exact,
    };
    Ok(Outcome {
        doc: envelope("eval", &[&g], &k, None, to_value(report)),
        failure: None,
    })
}

pub fn bounds(a: &BoundsArgs) -> Result<Outcome, CliError> {
    reject(
        &[
            ("--C", a.coeffs.c.is_some()),
            ("--q", a.coeffs.q.is_some()),
            ("--c-my", a.coeffs.c_my.is_some()),
        ],
        "bounds",
    )?;
    let sys = one_system(&a.system, &a.grid)?;
    let g = sys.grid().clone();
    let k = coefficients(&a.coeffs, g.measure())?;
    let report = verify_chain(&sys, &k)?;
    Ok(Outcome {
        doc: envelope("bounds", &[&g], &k, None, to_value(report)),
        failure: None,
    })
}

pub fn decompose(a: &DecomposeArgs) -> Result<Outcome, CliError> {
    let spec = single_spec(&a.system)?;
    if spec.has("N") && spec.get("N") != 2.0 {
        return Err(CliError::config("decompose always uses N = 2"));
    }
    let (pair, g2) = match spec.kind {
        Kind::Box1d => {
            if a.grid_rmax.is_some() {
                return Err(CliError::config(
                    "--grid-rmax does not apply to box1d; the axis is [0, L]",
                ));
            }
            box_pair(spec.get("L"), a.n2)?
        }
        Kind::Harm1d => {
            if spec.has("omega") {
                return Err(CliError::config("decompose uses the omega = 1 oscillator"));
            }
            harmonic_pair(a.grid_rmax.unwrap_or(DEFAULT_PAIR_HALF_WIDTH), a.n2)?
        }
        other => {
            return Err(CliError::config(format!(
                "decompose supports box1d and harm1d, not {}",
                other.name()
            )))
        }
    };
    let report = verify_decomposition(&pair, &g2, g2.axis(), spec.kind.name())?;
    let mut value = to_value(&report);
    value["relative_residual"] = json!(report.relative_residual());
    Ok(Outcome {
        doc: envelope(
            "decompose",
            &[g2.axis()],
            &Coefficients::default(),
            None,
            value,
        ),
        failure: None,
    })
}

/// Default family sizes for fit-q when `N` is not given.
const BOX_FAMILY: usize = 8;
const HARMONIC_FAMILY: usize = 6;

pub fn fit(a: &FitArgs) -> Result<Outcome, CliError> {
    let specs = specs_from_args(&a.system)?;
    if specs.is_empty() {
        return Err(CliError::config("no input: pass one or more --system"));
    }
    let line = specs[0].kind.is_line();
    if specs.iter().any(|s| s.kind.is_line() != line) {
        return Err(CliError::config(
            "fit-q cannot mix line and radial systems under one C",
        ));
    }
    let mut grids: Vec<GridRef> = Vec::new();
    let mut systems = Vec::new();
    for spec in &specs {
        let g = default_grid_for(spec, &a.grid)?;
        let g = match grids.iter().find(|x| ***x == *g) {
            Some(x) => x.clone(),
            None => {
                grids.push(g.clone());
                g
            }
        };
        let top = match (spec.kind, spec.has("N")) {
            (Kind::Box1d | Kind::Harm1d, true) => spec.count()?,
            (Kind::Box1d, false) => BOX_FAMILY,
            (Kind::Harm1d, false) => HARMONIC_FAMILY,
            _ => 1,
        };
        let first = if spec.kind.is_line() { 1 } else { top };
        for n in first..=top {
            systems.push(build(spec, n, &g)?);
        }
    }
    let measure = if line {
        Measure::Line1d
    } else {
        Measure::Radial3d
    };
    let c = a.c.unwrap_or_else(|| default_c(measure));
    let k = Coefficients::default().with_c(c)?;
    let result = fit_q(&systems, c)?;
    let refs: Vec<&Grid> = grids.iter().map(|g| g.as_ref()).collect();
    Ok(Outcome {
        doc: envelope("fit-q", &refs, &k, None, to_value(result)),
        failure: None,
    })
}

#[derive(Serialize)]
struct Profile {
    x: Vec<f64>,
    rho: Vec<f64>,
}

#[derive(Serialize)]
struct SolveReport {
    system: String,
    potential: String,
    n_particles: f64,
    energy: f64,
    kinetic: FunctionalBreakdown,
    external: f64,
    converged: bool,
    iterations: usize,
    accepted_steps: usize,
    max_normalization_error: f64,
    profile: Option<Profile>,
}

pub fn solve(a: &SolveArgs) -> Result<Outcome, CliError> {
    // N is the particle number for every potential here
    let mut sys_args = a.system.clone();
    let n_flag = sys_args.n.take();
    let spec = single_spec(&sys_args)?;
    let n = n_flag.map(|v| v as f64).unwrap_or_else(|| spec.get("N"));
    let g = grid_for(
        &spec,
        &a.grid,
        DEFAULT_SOLVER_LINE_N,
        (DEFAULT_SOLVER_RADIAL_RMAX, DEFAULT_SOLVER_RADIAL_N),
        DEFAULT_SOLVER_HALF_WIDTH,
    )?;
    let (potential, v) = match spec.kind {
        Kind::Harm1d | Kind::Gauss3d => {
            let w = spec.get("omega");
            let v = ScalarField::from_fn(&g, |x| 0.5 * w * w * x * x)?;
            (format!("0.5 * {w}^2 * x^2"), v)
        }
        Kind::Hydrogen => {
            let z = spec.get("Z");
            (format!("-{z} / r"), ScalarField::from_fn(&g, |r| -z / r)?)
        }
        Kind::Box1d => {
            return Err(CliError::config(
                "solve supports harm1d, gauss3d and hydrogen; box1d has no confining potential on the grid",
            ))
        }
    };
    let measure = g.measure();
    let c = a.c.unwrap_or_else(|| default_c(measure));
    let q = a.q.unwrap_or(1.0);
    let k = Coefficients::default().with_c(c)?.with_q(q)?;
    let mut opts = SolverOptions::default();
    if let Some(m) = a.max_iter {
        opts.max_iterations = m;
    }
    if let Some(s) = a.step {
        opts.step = s;
    }
    if let Some(t) = a.tolerance {
        opts.tolerance = t;
    }
    let out = minimize_energy(&v, n, c, q, &g, &opts)?;
    let failure = (a.output.strict && !out.converged).then(|| {
        format!(
            "solver did not converge within {} iterations",
            opts.max_iterations
        )
    });
    let report = SolveReport {
        system: spec.kind.name().to_string(),
        potential,
        n_particles: n,
        energy: out.energy,
        kinetic: out.kinetic,
        external: out.external,
        converged: out.converged,
        iterations: out.iterations,
        accepted_steps: out.energy_history.len() - 1,
        max_normalization_error: out.max_normalization_error,
        profile: a.profile.then(|| Profile {
            x: g.nodes().to_vec(),
            rho: out.density.values().to_vec(),
        }),
    };
    let solver = json!({
        "max_iterations": opts.max_iterations,
        "step": opts.step,
        "tolerance": opts.tolerance,
    });
    Ok(Outcome {
        doc: envelope("solve", &[&g], &k, Some(solver), to_value(report)),
        failure,
    })
}
