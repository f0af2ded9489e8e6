//! Exactly solvable non-interacting systems that serve as ground truth:
//! their densities, orbitals and exact kinetic energies.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::density::DensityField;
use crate::error::{domain, Result};
use crate::grid::{
    ensure_same_grid, make_radial_grid, make_uniform_grid, Grid, GridRef, Measure, ScalarField,
};

pub const DEFAULT_RADIAL_RMAX: f64 = 30.0;
pub const DEFAULT_RADIAL_N: usize = 20000;
pub const DEFAULT_LINE_N: usize = 8192;
pub const DEFAULT_HARMONIC_HALF_WIDTH: f64 = 12.0;

/// Boundary density above which a harmonic-oscillator grid is too narrow.
const HARMONIC_EDGE_DENSITY: f64 = 1e-12;

pub fn default_radial_grid() -> Result<GridRef> {
    make_radial_grid(DEFAULT_RADIAL_RMAX, DEFAULT_RADIAL_N)
}

pub fn default_box_grid(length: f64) -> Result<GridRef> {
    make_uniform_grid(0.0, length, DEFAULT_LINE_N)
}

pub fn default_harmonic_grid() -> Result<GridRef> {
    make_uniform_grid(
        -DEFAULT_HARMONIC_HALF_WIDTH,
        DEFAULT_HARMONIC_HALF_WIDTH,
        DEFAULT_LINE_N,
    )
}

/// Normalized Hermite functions `psi_0 .. psi_{count-1}` at `x` (unit
/// frequency), via the three-term recurrence
/// `psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}`.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let psi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(psi0);
    if count > 1 {
        out.push(std::f64::consts::SQRT_2 * x * psi0);
    }
    for n in 1..count.saturating_sub(1) {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Real single-particle orbitals, each singly occupied (spinless).
#[derive(Debug, Clone)]
pub struct OrbitalSet {
    orbitals: Vec<ScalarField>,
    occupancy: Vec<f64>,
}

impl OrbitalSet {
    pub fn new(orbitals: Vec<ScalarField>) -> Result<Self> {
        if let Some(first) = orbitals.first() {
            for o in &orbitals[1..] {
                ensure_same_grid(o.grid(), first.grid())?;
            }
        }
        let occupancy = vec![1.0; orbitals.len()];
        Ok(OrbitalSet {
            orbitals,
            occupancy,
        })
    }

    pub fn orbitals(&self) -> &[ScalarField] {
        &self.orbitals
    }

    pub fn occupancy(&self) -> &[f64] {
        &self.occupancy
    }

    pub fn len(&self) -> usize {
        self.orbitals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbitals.is_empty()
    }

    /// `sum_i occ_i phi_i^2`.
    pub fn density(&self) -> Result<DensityField> {
        let Some(first) = self.orbitals.first() else {
            return domain("empty orbital set has no grid");
        };
        let mut values = vec![0.0; first.len()];
        for (o, occ) in self.orbitals.iter().zip(&self.occupancy) {
            for (v, p) in values.iter_mut().zip(o.values()) {
                *v += occ * p * p;
            }
        }
        let n: f64 = self.occupancy.iter().sum();
        DensityField::new(ScalarField::new(first.grid().clone(), values)?, n)
    }

    /// Largest deviation of the overlap matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.orbitals.iter().enumerate() {
            for (j, b) in self.orbitals.iter().enumerate().skip(i) {
                let prod: Vec<f64> = a
                    .values()
                    .iter()
                    .zip(b.values())
                    .map(|(x, y)| x * y)
                    .collect();
                let overlap = a.grid().quadrature(&prod);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((overlap - target).abs());
            }
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceSystem {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub density: DensityField,
    pub orbitals: Option<OrbitalSet>,
    /// Exact kinetic energy in Hartree.
    pub t_exact: f64,
}

impl ReferenceSystem {
    /// A system whose exact kinetic energy is supplied by the caller.
    pub fn custom(name: impl Into<String>, density: DensityField, t_exact: f64) -> Self {
        ReferenceSystem {
            name: name.into(),
            params: BTreeMap::new(),
            density,
            orbitals: None,
            t_exact,
        }
    }

    pub fn grid(&self) -> &GridRef {
        self.density.grid()
    }

    pub fn n_particles(&self) -> f64 {
        self.density.n_particles()
    }

    /// `name(k=v,...)`, used as a row label in reports.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.name.clone();
        }
        let parts: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}({})", self.name, parts.join(","))
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn require_radial(g: &Grid, what: &str) -> Result<()> {
    if g.measure() != Measure::Radial3d {
        return domain(format!("{what} needs a radial grid"));
    }
    Ok(())
}

fn require_line(g: &Grid, what: &str) -> Result<()> {
    if g.measure() != Measure::Line1d {
        return domain(format!("{what} needs a line grid"));
    }
    Ok(())
}

/// Hydrogen-like 1s state of nuclear charge `z`.
pub fn hydrogenic(z: f64, g: &GridRef) -> Result<ReferenceSystem> {
    if !(z.is_finite() && z > 0.0) {
        return domain(format!("nuclear charge must be > 0, got {z}"));
    }
    require_radial(g, "hydrogenic")?;
    let amp = (z.powi(3) / PI).sqrt();
    let orbital = ScalarField::from_fn(g, |r| amp * (-z * r).exp())?;
    let orbitals = OrbitalSet::new(vec![orbital])?;
    Ok(ReferenceSystem {
        name: "hydrogen".into(),
        params: params(&[("Z", z)]),
        density: orbitals.density()?,
        orbitals: Some(orbitals),
        t_exact: 0.5 * z * z,
    })
}

/// Ground state of the isotropic 3D harmonic oscillator, one particle.
pub fn gaussian_3d(omega: f64, g: &GridRef) -> Result<ReferenceSystem> {
    if !(omega.is_finite() && omega > 0.0) {
        return domain(format!("omega must be > 0, got {omega}"));
    }
    require_radial(g, "gauss3d")?;
    let amp = (omega / PI).powf(0.75);
    let orbital = ScalarField::from_fn(g, |r| amp * (-0.5 * omega * r * r).exp())?;
    let orbitals = OrbitalSet::new(vec![orbital])?;
    Ok(ReferenceSystem {
        name: "gauss3d".into(),
        params: params(&[("omega", omega)]),
        density: orbitals.density()?,
        orbitals: Some(orbitals),
        t_exact: 0.75 * omega,
    })
}

/// `n` spinless fermions in a hard-wall box `[0, length]`.
pub fn box_fermions_1d(n: usize, length: f64, g: &GridRef) -> Result<ReferenceSystem> {
    if n == 0 {
        return domain("box needs at least one particle");
    }
    if !(length.is_finite() && length > 0.0) {
        return domain(format!("box length must be > 0, got {length}"));
    }
    require_line(g, "box1d")?;
    let tol = 1e-9 * length;
    if g.first().abs() > tol || (g.last() - length).abs() > tol {
        return domain(format!(
            "box grid must span [0, {length}], got [{}, {}]",
            g.first(),
            g.last()
        ));
    }
    let amp = (2.0 / length).sqrt();
    let orbitals = (1..=n)
        .map(|k| {
            let kx = k as f64 * PI / length;
            ScalarField::from_fn(g, |x| amp * (kx * x).sin())
        })
        .collect::<Result<Vec<_>>>()?;
    let orbitals = OrbitalSet::new(orbitals)?;
    let t_exact = (1..=n).map(|k| (k * k) as f64).sum::<f64>() * PI * PI / (2.0 * length * length);
    Ok(ReferenceSystem {
        name: "box1d".into(),
        params: params(&[("L", length), ("N", n as f64)]),
        density: orbitals.density()?,
        orbitals: Some(orbitals),
        t_exact,
    })
}

/// Lowest `n` levels of the 1D oscillator `v = omega^2 x^2 / 2`, spinless.
pub fn harmonic_fermions_1d_omega(n: usize, omega: f64, g: &GridRef) -> Result<ReferenceSystem> {
    if n == 0 {
        return domain("oscillator needs at least one particle");
    }
    if !(omega.is_finite() && omega > 0.0) {
        return domain(format!("omega must be > 0, got {omega}"));
    }
    require_line(g, "harm1d")?;
    let scale = omega.sqrt();
    let amp = omega.powf(0.25);
    let mut columns = vec![Vec::with_capacity(g.len()); n];
    for &x in g.nodes() {
        for (col, psi) in columns.iter_mut().zip(hermite_functions(n, scale * x)) {
            col.push(amp * psi);
        }
    }
    let orbitals = columns
        .into_iter()
        .map(|c| ScalarField::new(g.clone(), c))
        .collect::<Result<Vec<_>>>()?;
    let orbitals = OrbitalSet::new(orbitals)?;
    let density = orbitals.density()?;
    let edge = density.values()[0].max(density.values()[g.len() - 1]);
    if edge >= HARMONIC_EDGE_DENSITY {
        return domain(format!(
            "grid too narrow: boundary density {edge:e} >= 1e-12"
        ));
    }
    let t_exact = omega * (0..n).map(|k| 0.5 * k as f64 + 0.25).sum::<f64>();
    Ok(ReferenceSystem {
        name: "harm1d".into(),
        params: params(&[("N", n as f64), ("omega", omega)]),
        density,
        orbitals: Some(orbitals),
        t_exact,
    })
}

/// Unit-frequency oscillator.
pub fn harmonic_fermions_1d(n: usize, g: &GridRef) -> Result<ReferenceSystem> {
    harmonic_fermions_1d_omega(n, 1.0, g)
}

/// `1/2 sum_i occ_i integral |phi_i'|^2`, the kinetic energy of a Slater
/// determinant of real orbitals.
pub fn exact_kinetic_from_orbitals(s: &OrbitalSet, g: &Grid) -> Result<f64> {
    let mut total = 0.0;
    for (phi, occ) in s.orbitals().iter().zip(s.occupancy()) {
        ensure_same_grid(phi.grid(), g)?;
        if g.len() < 3 {
            return domain("derivative needs at least 3 nodes");
        }
        let sq: Vec<f64> = g
            .differentiate4(phi.values())
            .iter()
            .map(|v| v * v)
            .collect();
        total += 0.5 * occ * g.quadrature(&sq);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn hydrogen_defaults() {
        let g = default_radial_grid().unwrap();
        let h = hydrogenic(1.0, &g).unwrap();
        assert_eq!(h.t_exact, 0.5);
        assert_relative_eq!(h.density.integral(), 1.0, max_relative = 1e-6);
        let t = exact_kinetic_from_orbitals(h.orbitals.as_ref().unwrap(), &g).unwrap();
        assert_abs_diff_eq!(t, 0.5, epsilon = 1e-5);

        let h2 = hydrogenic(2.0, &g).unwrap();
        assert_eq!(h2.t_exact, 2.0);
        assert!(hydrogenic(0.0, &g).is_err());
        assert!(hydrogenic(1.0, &default_box_grid(1.0).unwrap()).is_err());
    }

    #[test]
    fn box_values() {
        let g = default_box_grid(1.0).unwrap();
        let b1 = box_fermions_1d(1, 1.0, &g).unwrap();
        assert_relative_eq!(b1.t_exact, PI * PI / 2.0, max_relative = 1e-15);
        assert_abs_diff_eq!(b1.density.integral(), 1.0, epsilon = 1e-8);
        let b2 = box_fermions_1d(2, 1.0, &g).unwrap();
        assert_relative_eq!(b2.t_exact, 5.0 * PI * PI / 2.0, max_relative = 1e-15);
        let b3 = box_fermions_1d(3, 1.0, &g).unwrap();
        let t3 = exact_kinetic_from_orbitals(b3.orbitals.as_ref().unwrap(), &g).unwrap();
        assert_abs_diff_eq!(t3, 14.0 * PI * PI / 2.0, epsilon = 1e-6 * t3);
        let t1 = exact_kinetic_from_orbitals(b1.orbitals.as_ref().unwrap(), &g).unwrap();
        assert_abs_diff_eq!(t1, PI * PI / 2.0, epsilon = 1e-6 * t1);
    }

    #[test]
    fn box_rejects_grid_not_covering_interval() {
        let g = make_uniform_grid(0.0, 0.5, 100).unwrap();
        assert!(box_fermions_1d(1, 1.0, &g).is_err());
        let g = default_box_grid(1.0).unwrap();
        assert!(box_fermions_1d(0, 1.0, &g).is_err());
    }

    #[test]
    fn harmonic_values() {
        let g = default_harmonic_grid().unwrap();
        let h1 = harmonic_fermions_1d(1, &g).unwrap();
        assert_eq!(h1.t_exact, 0.25);
        for (x, v) in g.nodes().iter().zip(h1.density.values()) {
            assert_abs_diff_eq!(*v, (-x * x).exp() / PI.sqrt(), epsilon = 1e-10);
        }
        let h2 = harmonic_fermions_1d(2, &g).unwrap();
        assert_eq!(h2.t_exact, 1.0);
    }

    #[test]
    fn harmonic_rejects_narrow_grid() {
        let g = make_uniform_grid(-3.0, 3.0, 200).unwrap();
        assert!(harmonic_fermions_1d(1, &g).is_err());
    }

    #[test]
    fn hermite_functions_are_orthonormal_up_to_twenty() {
        let g = make_uniform_grid(-14.0, 14.0, 6001).unwrap();
        let sys = harmonic_fermions_1d(20, &g).unwrap();
        assert!(sys.orbitals.as_ref().unwrap().orthonormality_error() < 1e-6);
    }

    #[test]
    fn gaussian_3d_one_particle() {
        let g = default_radial_grid().unwrap();
        let s = gaussian_3d(1.0, &g).unwrap();
        assert_relative_eq!(s.density.integral(), 1.0, max_relative = 1e-6);
        let t = exact_kinetic_from_orbitals(s.orbitals.as_ref().unwrap(), &g).unwrap();
        assert_relative_eq!(t, 0.75, max_relative = 1e-5);
    }

    #[test]
    fn density_matches_orbital_sum() {
        let g = default_harmonic_grid().unwrap();
        let s = harmonic_fermions_1d(4, &g).unwrap();
        let orbs = s.orbitals.as_ref().unwrap();
        for (i, v) in s.density.values().iter().enumerate() {
            let sum: f64 = orbs.orbitals().iter().map(|o| o.values()[i].powi(2)).sum();
            assert_abs_diff_eq!(*v, sum, epsilon = 1e-14);
        }
    }
}
