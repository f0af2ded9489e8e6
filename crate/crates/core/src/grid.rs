//! Discretization primitives: 1D and radial meshes, tensor-product square
//! meshes, quadrature and finite-difference stencils.
//!
//! Radial meshes never contain `r = 0`; nodes sit at `(i + 1/2) h`, which
//! turns the composite trapezoid rule into the midpoint rule and keeps the
//! `2/r` term of the radial Laplacian finite.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Relative tolerance used to classify a node set as uniformly spaced.
const UNIFORM_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Plain `dx` on an interval.
    Line1d,
    /// Spherically symmetric `4 pi r^2 dr`.
    Radial3d,
    /// Tensor product `dx1 dx2` of two identical line axes.
    Square2d,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Line1d => "line1d",
            Measure::Radial3d => "radial3d",
            Measure::Square2d => "square2d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    #[default]
    Trapezoid,
    /// Composite Simpson; line meshes with an odd node count only.
    Simpson,
}

/// An ordered 1D mesh with quadrature weights that already include the
/// measure's Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    measure: Measure,
    spacing: f64,
    uniform: bool,
    rule: QuadratureRule,
}

pub type GridRef = Arc<Grid>;

/// `n` equally spaced nodes on `[a, b]` with composite trapezoid weights.
pub fn make_uniform_grid(a: f64, b: f64, n: usize) -> Result<GridRef> {
    make_uniform_grid_with_rule(a, b, n, QuadratureRule::Trapezoid)
}

pub fn make_uniform_grid_with_rule(
    a: f64,
    b: f64,
    n: usize,
    rule: QuadratureRule,
) -> Result<GridRef> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return domain(format!("uniform grid needs a < b, got [{a}, {b}]"));
    }
    if n < 3 {
        return domain(format!("uniform grid needs at least 3 nodes, got {n}"));
    }
    let h = (b - a) / (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    nodes[n - 1] = b;
    let weights = match rule {
        QuadratureRule::Trapezoid => {
            let mut w = vec![h; n];
            w[0] = 0.5 * h;
            w[n - 1] = 0.5 * h;
            w
        }
        QuadratureRule::Simpson => {
            if n.is_multiple_of(2) {
                return domain(format!("Simpson rule needs an odd node count, got {n}"));
            }
            (0..n)
                .map(|i| {
                    let c = if i == 0 || i == n - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    c * h / 3.0
                })
                .collect()
        }
    };
    Ok(Arc::new(Grid {
        nodes,
        weights,
        measure: Measure::Line1d,
        spacing: h,
        uniform: true,
        rule,
    }))
}

/// Radial mesh on `(0, r_max)` with nodes at `(i + 1/2) h`, `h = r_max / n`.
pub fn make_radial_grid(r_max: f64, n: usize) -> Result<GridRef> {
    if !r_max.is_finite() || r_max <= 0.0 {
        return domain(format!("radial grid needs r_max > 0, got {r_max}"));
    }
    if n < 3 {
        return domain(format!("radial grid needs at least 3 nodes, got {n}"));
    }
    let h = r_max / n as f64;
    let nodes: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    let weights = nodes.iter().map(|&r| 4.0 * PI * r * r * h).collect();
    Ok(Arc::new(Grid {
        nodes,
        weights,
        measure: Measure::Radial3d,
        spacing: h,
        uniform: true,
        rule: QuadratureRule::Trapezoid,
    }))
}

impl Grid {
    /// Build a mesh from arbitrary strictly increasing nodes (e.g. read from
    /// a file). Non-uniform meshes get trapezoid weights and Lagrange
    /// three-point stencils.
    pub fn from_nodes(nodes: Vec<f64>, measure: Measure) -> Result<GridRef> {
        let n = nodes.len();
        if n < 3 {
            return domain(format!("a grid needs at least 3 nodes, got {n}"));
        }
        if let Some(i) = nodes.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = nodes.windows(2).position(|w| w[1] <= w[0]) {
            return domain(format!(
                "grid nodes must be strictly increasing (node {})",
                i + 1
            ));
        }
        let h = (nodes[n - 1] - nodes[0]) / (n - 1) as f64;
        let uniform = nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= UNIFORM_RTOL * h);
        let weights = match measure {
            Measure::Line1d => trapezoid_weights(&nodes, |_| 1.0),
            Measure::Radial3d => {
                if nodes[0] <= 0.0 {
                    return domain("radial nodes must be strictly positive");
                }
                if uniform && (nodes[0] - 0.5 * h).abs() <= 1e-6 * h {
                    nodes.iter().map(|&r| 4.0 * PI * r * r * h).collect()
                } else {
                    let mut w = trapezoid_weights(&nodes, |r| 4.0 * PI * r * r);
                    // ball of radius r0 treated with a constant integrand
                    w[0] += 4.0 * PI * nodes[0].powi(3) / 3.0;
                    w
                }
            }
            Measure::Square2d => return domain("use SquareGrid for two-dimensional meshes"),
        };
        Ok(Arc::new(Grid {
            nodes,
            weights,
            measure,
            spacing: h,
            uniform,
            rule: QuadratureRule::Trapezoid,
        }))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    /// Nominal step; the exact step for uniform meshes.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Weighted sum of samples. Panics if the length does not match; use
    /// [`integrate`] for the checked version.
    pub fn quadrature(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.nodes.len(), "sample count != node count");
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// First derivative of the samples along the mesh coordinate.
    pub fn differentiate(&self, f: &[f64]) -> Vec<f64> {
        let n = self.nodes.len();
        assert_eq!(f.len(), n, "sample count != node count");
        let mut out = vec![0.0; n];
        if self.uniform {
            let h = self.spacing;
            let inv2h = 0.5 / h;
            out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
            for i in 1..n - 1 {
                out[i] = (f[i + 1] - f[i - 1]) * inv2h;
            }
            out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
        } else {
            let x = &self.nodes;
            out[0] = lagrange3_d1([x[0], x[1], x[2]], [f[0], f[1], f[2]], x[0]);
            for i in 1..n - 1 {
                out[i] = lagrange3_d1([x[i - 1], x[i], x[i + 1]], [f[i - 1], f[i], f[i + 1]], x[i]);
            }
            out[n - 1] = lagrange3_d1(
                [x[n - 3], x[n - 2], x[n - 1]],
                [f[n - 3], f[n - 2], f[n - 1]],
                x[n - 1],
            );
        }
        out
    }

    /// Second derivative along the mesh coordinate.
    pub fn differentiate2(&self, f: &[f64]) -> Vec<f64> {
        let n = self.nodes.len();
        assert_eq!(f.len(), n, "sample count != node count");
        let mut out = vec![0.0; n];
        if self.uniform {
            let ih2 = 1.0 / (self.spacing * self.spacing);
            for i in 1..n - 1 {
                out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * ih2;
            }
            if n >= 4 {
                out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * ih2;
                out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * ih2;
            } else {
                out[0] = out[1];
                out[n - 1] = out[1];
            }
        } else {
            let x = &self.nodes;
            for i in 1..n - 1 {
                out[i] = lagrange3_d2([x[i - 1], x[i], x[i + 1]], [f[i - 1], f[i], f[i + 1]]);
            }
            out[0] = out[1];
            out[n - 1] = out[n - 2];
        }
        out
    }

    /// Fourth-order first derivative on uniform grids with at least 5 nodes;
    /// otherwise the same as [`Grid::differentiate`].
    pub fn differentiate4(&self, f: &[f64]) -> Vec<f64> {
        let n = self.nodes.len();
        assert_eq!(f.len(), n, "sample count != node count");
        if !self.uniform || n < 5 {
            return self.differentiate(f);
        }
        let s = 1.0 / (12.0 * self.spacing);
        let mut out = vec![0.0; n];
        for i in 2..n - 2 {
            out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
        }
        let fwd0 =
            |g: [f64; 5]| (-25.0 * g[0] + 48.0 * g[1] - 36.0 * g[2] + 16.0 * g[3] - 3.0 * g[4]) * s;
        let fwd1 = |g: [f64; 5]| (-3.0 * g[0] - 10.0 * g[1] + 18.0 * g[2] - 6.0 * g[3] + g[4]) * s;
        let head = [f[0], f[1], f[2], f[3], f[4]];
        let tail = [f[n - 1], f[n - 2], f[n - 3], f[n - 4], f[n - 5]];
        out[0] = fwd0(head);
        out[1] = fwd1(head);
        out[n - 1] = -fwd0(tail);
        out[n - 2] = -fwd1(tail);
        out
    }

    /// Laplacian of a spherically symmetric (radial) or 1D function.
    pub fn laplacian(&self, f: &[f64]) -> Vec<f64> {
        let mut lap = self.differentiate2(f);
        if self.measure == Measure::Radial3d {
            let d1 = self.differentiate(f);
            for ((l, d), r) in lap.iter_mut().zip(&d1).zip(&self.nodes) {
                *l += 2.0 * d / r;
            }
        }
        lap
    }
}

fn trapezoid_weights(x: &[f64], jacobian: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let half = 0.5 * (x[i + 1] - x[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    for (wi, &xi) in w.iter_mut().zip(x) {
        *wi *= jacobian(xi);
    }
    w
}

fn lagrange3_d1(x: [f64; 3], f: [f64; 3], t: f64) -> f64 {
    let [x0, x1, x2] = x;
    f[0] * (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + f[1] * (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
        + f[2] * (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
}

fn lagrange3_d2(x: [f64; 3], f: [f64; 3]) -> f64 {
    let [x0, x1, x2] = x;
    2.0 * (f[0] / ((x0 - x1) * (x0 - x2))
        + f[1] / ((x1 - x0) * (x1 - x2))
        + f[2] / ((x2 - x0) * (x2 - x1)))
}

/// Real samples living on a specific grid.
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: GridRef,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridRef, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn from_fn(grid: &GridRef, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn constant(grid: &GridRef, c: f64) -> Result<Self> {
        Self::new(grid.clone(), vec![c; grid.len()])
    }

    pub fn zeros(grid: &GridRef) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> &GridRef {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise map onto the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    /// `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: f64, other: &ScalarField, beta: f64) -> Result<Self> {
        ensure_same_grid(&self.grid, other.grid())?;
        let values = self
            .values
            .iter()
            .zip(other.values())
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Self::new(self.grid.clone(), values)
    }

    pub fn integrate(&self) -> f64 {
        self.grid.quadrature(&self.values)
    }

    pub fn derivative(&self) -> Result<Self> {
        check_differentiable(&self.grid)?;
        Self::new(self.grid.clone(), self.grid.differentiate(&self.values))
    }

    pub fn laplacian(&self) -> Result<Self> {
        check_differentiable(&self.grid)?;
        Self::new(self.grid.clone(), self.grid.laplacian(&self.values))
    }
}

fn check_differentiable(g: &Grid) -> Result<()> {
    if g.len() < 3 {
        return domain("derivative needs at least 3 nodes");
    }
    match g.measure() {
        Measure::Line1d | Measure::Radial3d => Ok(()),
        Measure::Square2d => domain("use SquareGrid for axis derivatives"),
    }
}

pub(crate) fn ensure_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if std::ptr::eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "field lives on a {}-node {} grid, expected {}-node {}",
            a.len(),
            a.measure().as_str(),
            b.len(),
            b.measure().as_str()
        )))
    }
}

/// Checked quadrature of `f` over `g`.
pub fn integrate(f: &ScalarField, g: &Grid) -> Result<f64> {
    ensure_same_grid(f.grid(), g)?;
    Ok(f.integrate())
}

/// Checked first derivative of `f` on `g`.
pub fn derivative(f: &ScalarField, g: &Grid) -> Result<ScalarField> {
    ensure_same_grid(f.grid(), g)?;
    f.derivative()
}

/// Tensor product of one line axis with itself. Samples are stored row-major,
/// `values[i * n + j] = v(x1_i, x2_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareGrid {
    axis: GridRef,
}

impl SquareGrid {
    pub fn new(axis: GridRef) -> Result<Self> {
        if axis.measure() != Measure::Line1d {
            return domain("square grid axis must be a line mesh");
        }
        Ok(SquareGrid { axis })
    }

    pub fn axis(&self) -> &GridRef {
        &self.axis
    }

    /// Nodes per axis.
    pub fn n(&self) -> usize {
        self.axis.len()
    }

    pub fn measure(&self) -> Measure {
        Measure::Square2d
    }

    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        let n = self.n();
        if values.len() != n * n {
            return Err(Error::GridMismatch(format!(
                "{} values for a {n}x{n} grid",
                values.len()
            )));
        }
        let w = self.axis.weights();
        Ok(values
            .chunks_exact(n)
            .zip(w)
            .map(|(row, wi)| wi * self.axis.quadrature(row))
            .sum())
    }

    /// Fourth-order derivative with respect to the first coordinate `x1`.
    pub fn d_first(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(values.len(), n * n);
        let mut out = vec![0.0; n * n];
        let mut column = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                column[i] = values[i * n + j];
            }
            let d = self.axis.differentiate4(&column);
            for i in 0..n {
                out[i * n + j] = d[i];
            }
        }
        out
    }

    /// Fourth-order derivative with respect to the second coordinate `x2`.
    pub fn d_second(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(values.len(), n * n);
        values
            .chunks_exact(n)
            .flat_map(|row| self.axis.differentiate4(row))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_grid_basics() {
        let g = make_uniform_grid(0.0, 1.0, 11).unwrap();
        assert_abs_diff_eq!(g.spacing(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(g.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert_eq!(g.last(), 1.0);
    }

    #[test]
    fn uniform_grid_rejects_bad_input() {
        assert!(matches!(
            make_uniform_grid(0.0, 1.0, 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            make_uniform_grid(1.0, 1.0, 10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            make_uniform_grid(2.0, 1.0, 10),
            Err(Error::Domain(_))
        ));
        assert!(make_uniform_grid_with_rule(0.0, 1.0, 10, QuadratureRule::Simpson).is_err());
    }

    #[test]
    fn sine_integral() {
        let g = make_uniform_grid(0.0, PI, 20001).unwrap();
        let f = ScalarField::from_fn(&g, f64::sin).unwrap();
        assert_abs_diff_eq!(integrate(&f, &g).unwrap(), 2.0, epsilon = 1e-8);
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let g = make_uniform_grid_with_rule(0.0, 2.0, 11, QuadratureRule::Simpson).unwrap();
        let f = ScalarField::from_fn(&g, |x| x * x * x - x).unwrap();
        assert_abs_diff_eq!(f.integrate(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn radial_grid_hydrogen_moments() {
        let g = make_radial_grid(30.0, 20000).unwrap();
        assert!(g.first() > 0.0);
        let rho = ScalarField::from_fn(&g, |r| (-2.0 * r).exp() / PI).unwrap();
        assert_abs_diff_eq!(rho.integrate(), 1.0, epsilon = 1e-6);
        let r_rho = ScalarField::from_fn(&g, |r| r * (-2.0 * r).exp() / PI).unwrap();
        assert_abs_diff_eq!(r_rho.integrate(), 1.5, epsilon = 1e-5);
    }

    #[test]
    fn radial_grid_rejects_bad_input() {
        assert!(matches!(make_radial_grid(-1.0, 100), Err(Error::Domain(_))));
        assert!(matches!(make_radial_grid(1.0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_of_quadratic_is_exact() {
        let g = make_uniform_grid(0.0, 1.0, 101).unwrap();
        let f = ScalarField::from_fn(&g, |x| x * x).unwrap();
        let d = derivative(&f, &g).unwrap();
        assert_abs_diff_eq!(d.values()[50], 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.values()[0], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.values()[100], 2.0, epsilon = 1e-10);
    }

    #[test]
    fn derivative_of_sine() {
        let g = make_uniform_grid(0.0, 2.0, 2001).unwrap();
        let f = ScalarField::from_fn(&g, f64::sin).unwrap();
        let d = f.derivative().unwrap();
        let err = d
            .values()
            .iter()
            .zip(g.nodes())
            .map(|(d, x)| (d - x.cos()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-6, "max error {err}");
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        for g in [
            make_uniform_grid(-1.0, 3.0, 50).unwrap(),
            make_radial_grid(5.0, 50).unwrap(),
        ] {
            let f = ScalarField::constant(&g, 3.7).unwrap();
            assert!(f
                .derivative()
                .unwrap()
                .values()
                .iter()
                .all(|&v| v.abs() < 1e-12));
            assert!(f
                .laplacian()
                .unwrap()
                .values()
                .iter()
                .all(|&v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn radial_laplacian_of_exponential() {
        // Laplacian of exp(-r) is (1 - 2/r) exp(-r)
        let g = make_radial_grid(20.0, 4000).unwrap();
        let f = ScalarField::from_fn(&g, |r| (-r).exp()).unwrap();
        let lap = f.laplacian().unwrap();
        for (i, &r) in g.nodes().iter().enumerate().skip(10).step_by(97) {
            let exact = (1.0 - 2.0 / r) * (-r).exp();
            assert_abs_diff_eq!(lap.values()[i], exact, epsilon = 2e-6 + 1e-5 * exact.abs());
        }
    }

    #[test]
    fn nonuniform_nodes() {
        let nodes: Vec<f64> = (0..400).map(|i| (i as f64 / 399.0).powi(2) * 3.0).collect();
        let g = Grid::from_nodes(nodes, Measure::Line1d).unwrap();
        assert!(!g.is_uniform());
        let f = ScalarField::from_fn(&g, |x| x * x).unwrap();
        let d = f.derivative().unwrap();
        for (dv, x) in d.values().iter().zip(g.nodes()) {
            assert_abs_diff_eq!(*dv, 2.0 * x, epsilon = 1e-9);
        }
        let one = ScalarField::constant(&g, 1.0).unwrap();
        assert_abs_diff_eq!(one.integrate(), 3.0, epsilon = 1e-13);
    }

    #[test]
    fn from_nodes_rejects_unordered() {
        assert!(Grid::from_nodes(vec![0.0, 2.0, 1.0], Measure::Line1d).is_err());
        assert!(Grid::from_nodes(vec![0.0, 1.0], Measure::Line1d).is_err());
        assert!(Grid::from_nodes(vec![0.0, 1.0, 2.0], Measure::Radial3d).is_err());
    }

    #[test]
    fn from_nodes_recovers_offset_radial_weights() {
        let g = make_radial_grid(10.0, 500).unwrap();
        let h = Grid::from_nodes(g.nodes().to_vec(), Measure::Radial3d).unwrap();
        for (a, b) in g.weights().iter().zip(h.weights()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn field_grid_mismatch() {
        let a = make_uniform_grid(0.0, 1.0, 10).unwrap();
        let b = make_uniform_grid(0.0, 1.0, 11).unwrap();
        let f = ScalarField::constant(&a, 1.0).unwrap();
        assert!(matches!(integrate(&f, &b), Err(Error::GridMismatch(_))));
        assert!(ScalarField::new(b, vec![0.0; 3]).is_err());
    }

    #[test]
    fn square_grid_integrates_products() {
        let axis = make_uniform_grid(0.0, 1.0, 101).unwrap();
        let sq = SquareGrid::new(axis.clone()).unwrap();
        let n = sq.n();
        let x = axis.nodes();
        let vals: Vec<f64> = (0..n * n).map(|k| x[k / n] * x[k % n] * x[k % n]).collect();
        assert_abs_diff_eq!(sq.integrate(&vals).unwrap(), 1.0 / 6.0, epsilon = 1e-4);
        let d1 = sq.d_first(&vals);
        let d2 = sq.d_second(&vals);
        let k = 37 * n + 64;
        assert_abs_diff_eq!(d1[k], x[64] * x[64], epsilon = 1e-10);
        assert_abs_diff_eq!(d2[k], 2.0 * x[37] * x[64], epsilon = 1e-10);
    }

    #[test]
    fn fourth_order_derivative() {
        let err = |n: usize| {
            let g = make_uniform_grid(0.0, 2.0, n).unwrap();
            let f: Vec<f64> = g.nodes().iter().map(|x| x.sin()).collect();
            g.differentiate4(&f)
                .iter()
                .zip(g.nodes())
                .map(|(d, x)| (d - x.cos()).abs())
                .fold(0.0, f64::max)
        };
        let (a, b) = (err(51), err(101));
        assert!(a < 1e-6, "{a}");
        assert!(b / a < 0.07, "{}", b / a);
    }
}
