//! Two-particle brute-force check of the split of the multivariate kinetic
//! functional into the Weizsaecker term plus an information term built from
//! the conditional density `f(x2 | x1) = 2 theta(x1, x2)^2 / rho(x1)`:
//!
//! ```text
//! sum_i 1/2 integral |d_i theta|^2 = T_W[rho] + 1/8 integral rho(x1) |d_1 f|^2 / f
//! ```
//!
//! All integrals run on a tensor-product square mesh.

use serde::Serialize;

use crate::density::DensityField;
use crate::error::{domain, Result};
use crate::functionals::{weizsacker, DENSITY_MASK};
use crate::grid::{ensure_same_grid, make_uniform_grid, Grid, GridRef, ScalarField, SquareGrid};
use crate::reference::hermite_functions;
use crate::report::sig12;

/// Largest boundary amplitude of theta accepted by the kinetic evaluation.
pub const BOUNDARY_TOL: f64 = 1e-8;
/// Allowed deviation of `integral theta^2` from 1 before a decomposition run.
pub const NORM_TOL: f64 = 1e-6;

pub const DEFAULT_PAIR_N: usize = 512;
pub const DEFAULT_PAIR_HALF_WIDTH: f64 = 8.0;

/// Antisymmetrized product of two real orbitals on the same line mesh,
/// `theta(x1, x2) = (a(x1) b(x2) - b(x1) a(x2)) / sqrt(2)`.
#[derive(Debug, Clone)]
pub struct PairState {
    orbital_a: ScalarField,
    orbital_b: ScalarField,
}

impl PairState {
    pub fn new(orbital_a: ScalarField, orbital_b: ScalarField) -> Result<Self> {
        ensure_same_grid(orbital_a.grid(), orbital_b.grid())?;
        if orbital_a.grid().measure() != crate::grid::Measure::Line1d {
            return domain("pair orbitals must live on a line mesh");
        }
        Ok(PairState {
            orbital_a,
            orbital_b,
        })
    }

    pub fn axis(&self) -> &GridRef {
        self.orbital_a.grid()
    }

    pub fn orbital_a(&self) -> &ScalarField {
        &self.orbital_a
    }

    pub fn orbital_b(&self) -> &ScalarField {
        &self.orbital_b
    }

    /// Row-major samples `theta[i * n + j] = theta(x_i, x_j)`.
    pub fn theta(&self) -> Vec<f64> {
        let a = self.orbital_a.values();
        let b = self.orbital_b.values();
        let n = a.len();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(s * (a[i] * b[j] - b[i] * a[j]));
            }
        }
        out
    }

    pub fn norm(&self, g2: &SquareGrid) -> Result<f64> {
        self.check_grid(g2)?;
        let t = self.theta();
        let sq: Vec<f64> = t.iter().map(|v| v * v).collect();
        g2.integrate(&sq)
    }

    fn check_grid(&self, g2: &SquareGrid) -> Result<()> {
        ensure_same_grid(g2.axis(), self.axis())
    }
}

/// Pair of the two lowest hard-wall box orbitals on `[0, length]`.
pub fn box_pair(length: f64, n: usize) -> Result<(PairState, SquareGrid)> {
    if !(length.is_finite() && length > 0.0) {
        return domain(format!("box length must be > 0, got {length}"));
    }
    let axis = make_uniform_grid(0.0, length, n)?;
    let amp = (2.0 / length).sqrt();
    let k = std::f64::consts::PI / length;
    let a = ScalarField::from_fn(&axis, |x| amp * (k * x).sin())?;
    let b = ScalarField::from_fn(&axis, |x| amp * (2.0 * k * x).sin())?;
    Ok((PairState::new(a, b)?, SquareGrid::new(axis)?))
}

/// Pair of the two lowest unit-frequency oscillator orbitals on
/// `[-half_width, half_width]`.
pub fn harmonic_pair(half_width: f64, n: usize) -> Result<(PairState, SquareGrid)> {
    let axis = make_uniform_grid(-half_width, half_width, n)?;
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for &x in axis.nodes() {
        let h = hermite_functions(2, x);
        a.push(h[0]);
        b.push(h[1]);
    }
    let a = ScalarField::new(axis.clone(), a)?;
    let b = ScalarField::new(axis.clone(), b)?;
    Ok((PairState::new(a, b)?, SquareGrid::new(axis)?))
}

fn max_boundary_amplitude(theta: &[f64], n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for idx in [k, (n - 1) * n + k, k * n, k * n + n - 1] {
            worst = worst.max(theta[idx].abs());
        }
    }
    worst
}

/// `1/2 sum_i integral |d_i theta|^2`, computed as `integral |d_1 theta|^2`
/// (the two particle terms coincide by antisymmetry).
pub fn multivariate_kinetic(p: &PairState, g2: &SquareGrid) -> Result<f64> {
    p.check_grid(g2)?;
    let theta = p.theta();
    let edge = max_boundary_amplitude(&theta, g2.n());
    if edge > BOUNDARY_TOL {
        return domain(format!(
            "pair state does not vanish on the boundary (|theta| = {edge:e})"
        ));
    }
    let d1 = g2.d_first(&theta);
    let sq: Vec<f64> = d1.iter().map(|v| v * v).collect();
    g2.integrate(&sq)
}

/// One-electron density `rho(x) = 2 integral theta(x, y)^2 dy`.
pub fn pair_density(p: &PairState, g2: &SquareGrid) -> Result<DensityField> {
    p.check_grid(g2)?;
    let n = g2.n();
    let theta = p.theta();
    let axis = g2.axis();
    let values: Vec<f64> = theta
        .chunks_exact(n)
        .map(|row| {
            let sq: Vec<f64> = row.iter().map(|v| v * v).collect();
            2.0 * axis.quadrature(&sq)
        })
        .collect();
    DensityField::new(ScalarField::new(axis.clone(), values)?, 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationTerm {
    pub value: f64,
    /// Electrons sitting on rows with `rho(x1) < 1e-14`, which are skipped.
    pub masked_mass: f64,
}

/// `1/8 integral rho(x1) |d_1 f(x2|x1)|^2 / f(x2|x1) dx2 dx1`.
///
/// With `f = 2 theta^2 / rho` the integrand reduces to
/// `(d_1 theta - theta rho'(x1) / (2 rho(x1)))^2`; the common `theta^2` factor
/// is cancelled analytically, so nodal lines of `theta` (including the
/// diagonal) need no masking. Only rows where `rho(x1)` itself vanishes are
/// skipped.
pub fn information_term(p: &PairState, g2: &SquareGrid) -> Result<InformationTerm> {
    let norm = p.norm(g2)?;
    if norm <= NORM_TOL {
        return domain("pair state has zero norm");
    }
    let n = g2.n();
    let axis = g2.axis();
    let theta = p.theta();
    let d1 = g2.d_first(&theta);
    let rho = pair_density(p, g2)?;
    let rho_v = rho.values();
    let drho = axis.differentiate4(rho_v);
    let w = axis.weights();
    let mut value = 0.0;
    let mut masked_mass = 0.0;
    for i in 0..n {
        if rho_v[i] < DENSITY_MASK {
            masked_mass += w[i] * rho_v[i];
            continue;
        }
        let shift = 0.5 * drho[i] / rho_v[i];
        let row: Vec<f64> = (0..n)
            .map(|j| {
                let k = i * n + j;
                let v = d1[k] - theta[k] * shift;
                v * v
            })
            .collect();
        value += w[i] * axis.quadrature(&row);
    }
    Ok(InformationTerm { value, masked_mass })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridDims {
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub system: String,
    pub grid: GridDims,
    #[serde(serialize_with = "sig12")]
    pub multivariate: f64,
    #[serde(serialize_with = "sig12")]
    pub weizsacker: f64,
    #[serde(serialize_with = "sig12")]
    pub info: f64,
    #[serde(serialize_with = "sig12")]
    pub residual: f64,
    #[serde(serialize_with = "sig12")]
    pub masked_mass: f64,
}

impl DecompositionReport {
    pub fn relative_residual(&self) -> f64 {
        if self.multivariate == 0.0 {
            self.residual.abs()
        } else {
            (self.residual / self.multivariate).abs()
        }
    }
}

/// Evaluate both sides of the decomposition; the residual is reported, not
/// checked.
pub fn verify_decomposition(
    p: &PairState,
    g2: &SquareGrid,
    g1: &Grid,
    system: &str,
) -> Result<DecompositionReport> {
    ensure_same_grid(g1, g2.axis())?;
    let norm = p.norm(g2)?;
    if (norm - 1.0).abs() > NORM_TOL {
        return domain(format!(
            "pair state is not normalized: integral theta^2 = {norm}"
        ));
    }
    let multivariate = multivariate_kinetic(p, g2)?;
    let rho = pair_density(p, g2)?;
    let tw = weizsacker(&rho);
    let info = information_term(p, g2)?;
    Ok(DecompositionReport {
        system: system.to_string(),
        grid: GridDims {
            n1: g2.n(),
            n2: g2.n(),
        },
        multivariate,
        weizsacker: tw,
        info: info.value,
        residual: multivariate - tw - info.value,
        masked_mass: info.masked_mass,
    })
}
