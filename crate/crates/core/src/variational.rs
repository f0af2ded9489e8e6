//! Least-squares estimate of the gradient-term weight `q` in
//! `T ~ C * local + q * T_W`, and a projected-gradient minimizer of
//! `E[rho] = C * local + q * T_W + integral v rho` at fixed particle number.

use serde::Serialize;

use crate::density::DensityField;
use crate::error::{domain, Error, Result};
use crate::functionals::{
    local_exponent, local_integral, unit_interval, weizsacker, FunctionalBreakdown,
};
use crate::grid::{ensure_same_grid, make_radial_grid, make_uniform_grid, GridRef, ScalarField};
use crate::reference::ReferenceSystem;
use crate::report::sig12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QFitRow {
    pub name: String,
    #[serde(serialize_with = "sig12")]
    pub t_exact: f64,
    #[serde(serialize_with = "sig12")]
    pub t_model: f64,
    /// `t_model - t_exact`.
    #[serde(serialize_with = "sig12")]
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QFitResult {
    #[serde(serialize_with = "sig12")]
    pub q_star: f64,
    #[serde(rename = "C", serialize_with = "sig12")]
    pub c_used: f64,
    #[serde(serialize_with = "sig12")]
    pub rms_error: f64,
    #[serde(serialize_with = "sig12")]
    pub rms_at_q0: f64,
    #[serde(serialize_with = "sig12")]
    pub rms_at_q1: f64,
    pub per_system: Vec<QFitRow>,
}

/// Per-system ingredients of the linear model: `(t_exact, local, T_W)`.
pub fn model_terms(systems: &[ReferenceSystem]) -> Vec<(f64, f64, f64)> {
    systems
        .iter()
        .map(|s| {
            (
                s.t_exact,
                local_integral(&s.density),
                weizsacker(&s.density),
            )
        })
        .collect()
}

fn rms(terms: &[(f64, f64, f64)], c: f64, q: f64) -> f64 {
    let sum: f64 = terms
        .iter()
        .map(|(t, l, w)| (c * l + q * w - t).powi(2))
        .sum();
    (sum / terms.len() as f64).sqrt()
}

/// Minimize `sum (t_exact - C local - q T_W)^2` over `q in [0, 1]`: the
/// unconstrained normal-equation solution, then clamped.
pub fn fit_q(systems: &[ReferenceSystem], c: f64) -> Result<QFitResult> {
    if systems.is_empty() {
        return domain("fit_q needs at least one system");
    }
    if !(c.is_finite() && c >= 0.0) {
        return domain(format!("C must be >= 0, got {c}"));
    }
    let terms = model_terms(systems);
    let sww: f64 = terms.iter().map(|(_, _, w)| w * w).sum();
    let srw: f64 = terms.iter().map(|(t, l, w)| (t - c * l) * w).sum();
    let scale: f64 = terms
        .iter()
        .map(|(t, l, _)| t.abs() + c * l)
        .sum::<f64>()
        .max(1.0);
    if !(sww > (1e-12 * scale).powi(2)) {
        return Err(Error::Unidentifiable(
            "every system has a vanishing gradient term".into(),
        ));
    }
    let q_star = (srw / sww).clamp(0.0, 1.0);
    let per_system = systems
        .iter()
        .zip(&terms)
        .map(|(s, (t, l, w))| {
            let t_model = c * l + q_star * w;
            QFitRow {
                name: s.label(),
                t_exact: *t,
                t_model,
                error: t_model - t,
            }
        })
        .collect();
    Ok(QFitResult {
        q_star,
        c_used: c,
        rms_error: rms(&terms, c, q_star),
        rms_at_q0: rms(&terms, c, 0.0),
        rms_at_q1: rms(&terms, c, 1.0),
        per_system,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Largest gradient step; backtracking only ever shrinks it.
    pub step: f64,
    /// Convergence threshold on the energy change between accepted steps (Hartree).
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: 5000,
            step: 1e-3,
            tolerance: 1e-10,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || !(self.step > 0.0) || !(self.tolerance > 0.0) {
            return domain("solver options must all be positive");
        }
        Ok(())
    }
}

pub const DEFAULT_SOLVER_HALF_WIDTH: f64 = 10.0;
pub const DEFAULT_SOLVER_LINE_N: usize = 401;
pub const DEFAULT_SOLVER_RADIAL_RMAX: f64 = 20.0;
pub const DEFAULT_SOLVER_RADIAL_N: usize = 400;

/// Line mesh used by the solver when none is given. Explicit gradient steps
/// are stable only for `step < h^2 / (2 q)`, hence the coarse spacing.
pub fn default_solver_line_grid() -> Result<GridRef> {
    make_uniform_grid(
        -DEFAULT_SOLVER_HALF_WIDTH,
        DEFAULT_SOLVER_HALF_WIDTH,
        DEFAULT_SOLVER_LINE_N,
    )
}

pub fn default_solver_radial_grid() -> Result<GridRef> {
    make_radial_grid(DEFAULT_SOLVER_RADIAL_RMAX, DEFAULT_SOLVER_RADIAL_N)
}

/// Solver output. `energy` and `kinetic` use the solver's own second-order
/// discretization, the one its gradient differentiates exactly.
#[derive(Debug, Clone)]
pub struct Minimized {
    pub density: DensityField,
    pub energy: f64,
    pub kinetic: FunctionalBreakdown,
    pub external: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Energies of the initial and every accepted iterate.
    pub energy_history: Vec<f64>,
    /// Largest `|integral rho - N|` seen after any iteration.
    pub max_normalization_error: f64,
}

struct Problem<'a> {
    grid: &'a GridRef,
    v: &'a [f64],
    c: f64,
    q: f64,
    p: f64,
}

impl Problem<'_> {
    fn kinetic(&self, chi: &[f64]) -> FunctionalBreakdown {
        let g = self.grid;
        let local: Vec<f64> = chi.iter().map(|x| (x * x).powf(self.p)).collect();
        let d = g.differentiate(chi);
        let grad: Vec<f64> = d.iter().map(|v| 0.5 * v * v).collect();
        FunctionalBreakdown::new(
            self.c * g.quadrature(&local),
            self.q * g.quadrature(&grad),
            None,
        )
    }

    fn external(&self, chi: &[f64]) -> f64 {
        let vals: Vec<f64> = chi.iter().zip(self.v).map(|(x, v)| v * x * x).collect();
        self.grid.quadrature(&vals)
    }

    fn energy(&self, chi: &[f64]) -> f64 {
        self.kinetic(chi).total + self.external(chi)
    }

    /// `dE/dchi = -q lap chi + 2 chi (p C rho^(p-1) + v)`.
    fn gradient(&self, chi: &[f64]) -> Vec<f64> {
        let lap = self.grid.laplacian(chi);
        chi.iter()
            .zip(&lap)
            .zip(self.v)
            .map(|((&x, &l), &v)| {
                let rho = x * x;
                -self.q * l + 2.0 * x * (self.p * self.c * rho.powf(self.p - 1.0) + v)
            })
            .collect()
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        self.grid.quadrature(&prod)
    }

    fn normalize(&self, chi: &mut [f64], n: f64) -> Result<()> {
        let mass = self.dot(chi, chi);
        if !(mass > 0.0) {
            return Err(Error::Domain("iterate lost all its mass".into()));
        }
        let s = (n / mass).sqrt();
        chi.iter_mut().for_each(|x| *x *= s);
        Ok(())
    }
}

/// Gradient of the energy with respect to the amplitude `chi = sqrt(rho)`,
/// as used for the descent direction.
pub fn amplitude_gradient(
    rho: &DensityField,
    v_ext: &ScalarField,
    c: f64,
    q: f64,
) -> Result<ScalarField> {
    ensure_same_grid(v_ext.grid(), rho.grid())?;
    let problem = Problem {
        grid: rho.grid(),
        v: v_ext.values(),
        c,
        q,
        p: local_exponent(rho.grid().measure()),
    };
    let chi: Vec<f64> = rho.values().iter().map(|v| v.sqrt()).collect();
    ScalarField::new(rho.grid().clone(), problem.gradient(&chi))
}

/// Minimize from a flat initial density.
pub fn minimize_energy(
    v_ext: &ScalarField,
    n: f64,
    c: f64,
    q: f64,
    g: &GridRef,
    opts: &SolverOptions,
) -> Result<Minimized> {
    let flat = DensityField::from_fn(g, n, |_| 1.0)?.renormalized(n)?;
    minimize_energy_from(&flat, v_ext, c, q, opts)
}

/// Projected gradient descent on `chi = sqrt(rho)`: the gradient is projected
/// onto the tangent of the sphere `integral chi^2 = N`, a step is taken, and the
/// iterate is rescaled back onto the sphere. Steps that raise the energy are
/// halved until they do not.
pub fn minimize_energy_from(
    initial: &DensityField,
    v_ext: &ScalarField,
    c: f64,
    q: f64,
    opts: &SolverOptions,
) -> Result<Minimized> {
    opts.validate()?;
    unit_interval("q", q)?;
    if !(c.is_finite() && c >= 0.0) {
        return domain(format!("C must be >= 0, got {c}"));
    }
    let g = initial.grid();
    ensure_same_grid(v_ext.grid(), g)?;
    let n = initial.n_particles();
    if !(n > 0.0) {
        return domain("solver needs a positive particle number");
    }
    let problem = Problem {
        grid: g,
        v: v_ext.values(),
        c,
        q,
        p: local_exponent(g.measure()),
    };

    let mut chi: Vec<f64> = initial.values().iter().map(|v| v.sqrt()).collect();
    problem.normalize(&mut chi, n)?;
    let mut energy = problem.energy(&chi);
    let mut history = vec![energy];
    let mut step = opts.step;
    let mut converged = false;
    let mut iterations = 0;
    let mut max_norm_err: f64 = 0.0;
    let mut trial = vec![0.0; chi.len()];

    'outer: while iterations < opts.max_iterations {
        iterations += 1;
        let mut grad = problem.gradient(&chi);
        let along = problem.dot(&grad, &chi) / problem.dot(&chi, &chi);
        for (gi, x) in grad.iter_mut().zip(&chi) {
            *gi -= along * x;
        }
        let mut backtracked = false;
        loop {
            for ((t, x), gi) in trial.iter_mut().zip(&chi).zip(&grad) {
                *t = x - step * gi;
            }
            problem.normalize(&mut trial, n)?;
            let e_trial = problem.energy(&trial);
            if e_trial <= energy {
                let change = energy - e_trial;
                std::mem::swap(&mut chi, &mut trial);
                energy = e_trial;
                history.push(energy);
                max_norm_err = max_norm_err.max((problem.dot(&chi, &chi) - n).abs());
                if change < opts.tolerance && !backtracked {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            step *= 0.5;
            backtracked = true;
            if step < 1e-12 * opts.step {
                // no descent left at machine precision
                converged = true;
                break 'outer;
            }
        }
        step = (2.0 * step).min(opts.step);
    }

    let kinetic = problem.kinetic(&chi);
    let external = problem.external(&chi);
    let rho: Vec<f64> = chi.iter().map(|x| x * x).collect();
    if !converged {
        log::warn!("solver stopped after {iterations} iterations without converging");
    }
    Ok(Minimized {
        density: DensityField::new(ScalarField::new(g.clone(), rho)?, n)?,
        energy,
        kinetic,
        external,
        converged,
        iterations,
        energy_history: history,
        max_normalization_error: max_norm_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::functional_derivative_combined;
    use crate::reference::{box_fermions_1d, default_box_grid, default_radial_grid, hydrogenic};
    use approx::assert_abs_diff_eq;

    #[test]
    fn fit_rejects_empty_and_degenerate() {
        assert!(fit_q(&[], 1.0).is_err());
        let g = make_uniform_grid(0.0, 1.0, 101).unwrap();
        let flat = DensityField::from_fn(&g, 1.0, |_| 1.0).unwrap();
        let sys = ReferenceSystem::custom("flat", flat, 1.0);
        assert!(matches!(fit_q(&[sys], 1.0), Err(Error::Unidentifiable(_))));
    }

    #[test]
    fn fit_recovers_synthetic_q() {
        let g = default_radial_grid().unwrap();
        let c = 2.0;
        let systems: Vec<ReferenceSystem> = [1.0, 1.7, 2.5]
            .iter()
            .map(|&z| {
                let rho = hydrogenic(z, &g).unwrap().density;
                let t = c * local_integral(&rho) + 0.5 * weizsacker(&rho);
                ReferenceSystem::custom(format!("synthetic{z}"), rho, t)
            })
            .collect();
        let fit = fit_q(&systems, c).unwrap();
        assert_abs_diff_eq!(fit.q_star, 0.5, epsilon = 1e-12);
        assert!(fit.rms_error < 1e-12);
        assert!(fit.rms_error <= fit.rms_at_q0.min(fit.rms_at_q1));
    }

    #[test]
    fn fit_clamps_to_unit_interval() {
        let g = default_radial_grid().unwrap();
        let systems: Vec<ReferenceSystem> = [1.0, 2.0]
            .iter()
            .map(|&z| {
                let rho = hydrogenic(z, &g).unwrap().density;
                let t = 3.0 * weizsacker(&rho);
                ReferenceSystem::custom("steep", rho, t)
            })
            .collect();
        assert_eq!(fit_q(&systems, 0.0).unwrap().q_star, 1.0);
    }

    #[test]
    fn uniform_density_is_stationary_without_potential() {
        let g = default_box_grid(2.0).unwrap();
        let v = ScalarField::zeros(&g);
        let start = DensityField::from_fn(&g, 3.0, |_| 1.5).unwrap();
        let out = minimize_energy_from(&start, &v, 1.3, 0.6, &SolverOptions::default()).unwrap();
        assert!(out.converged);
        for (a, b) in out.density.values().iter().zip(start.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn amplitude_gradient_is_consistent_with_functional_derivative() {
        let g = make_uniform_grid(-10.0, 10.0, 20001).unwrap();
        let rho = DensityField::from_fn(&g, 1.0, |x| {
            (-(x - 0.3).powi(2)).exp() / std::f64::consts::PI.sqrt()
        })
        .unwrap();
        let v = ScalarField::from_fn(&g, |x| 0.5 * x * x).unwrap();
        let (c, q) = (0.8, 0.7);
        let grad = amplitude_gradient(&rho, &v, c, q).unwrap();
        let dfd = functional_derivative_combined(&rho, c, q).unwrap();
        for i in 0..g.len() {
            let x = g.nodes()[i];
            if x.abs() > 3.0 {
                continue;
            }
            let chi = rho.values()[i].sqrt();
            let expected = 2.0 * chi * (dfd.values()[i] + v.values()[i]);
            assert_abs_diff_eq!(grad.values()[i], expected, epsilon = 1e-3 * chi);
        }
    }

    #[test]
    fn harmonic_ground_state_from_weizsacker_alone() {
        let g = default_solver_line_grid().unwrap();
        let v = ScalarField::from_fn(&g, |x| 0.5 * x * x).unwrap();
        let out = minimize_energy(&v, 1.0, 0.0, 1.0, &g, &SolverOptions::default()).unwrap();
        assert_abs_diff_eq!(out.energy, 0.5, epsilon = 1e-3);
        assert!(out.energy_history.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.max_normalization_error < 1e-10);
    }

    #[test]
    fn box_fit_stays_in_range() {
        let g = default_box_grid(1.0).unwrap();
        let systems: Vec<_> = (1..=4)
            .map(|n| box_fermions_1d(n, 1.0, &g).unwrap())
            .collect();
        let fit = fit_q(&systems, std::f64::consts::PI.powi(2) / 6.0).unwrap();
        assert!((0.0..=1.0).contains(&fit.q_star));
        assert_eq!(fit.per_system.len(), 4);
    }

    #[test]
    fn bad_solver_inputs() {
        let g = default_solver_line_grid().unwrap();
        let v = ScalarField::zeros(&g);
        let opts = SolverOptions::default();
        assert!(minimize_energy(&v, 1.0, 0.0, 1.5, &g, &opts).is_err());
        assert!(minimize_energy(&v, 1.0, -1.0, 0.5, &g, &opts).is_err());
        let bad = SolverOptions {
            step: 0.0,
            ..SolverOptions::default()
        };
        assert!(minimize_energy(&v, 1.0, 0.0, 0.5, &g, &bad).is_err());
        let other = default_radial_grid().unwrap();
        assert!(minimize_energy(&v, 1.0, 0.0, 0.5, &other, &opts).is_err());
    }
}
