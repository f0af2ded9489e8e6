//! Kinetic-energy density functionals, evaluated term by term on a grid.
//!
//! Local (Thomas-Fermi-like) terms are `integral rho^(5/3)` on radial meshes and
//! `integral rho^3` on line meshes. The gradient term is the Weizsaecker
//! functional `(1/8) integral |grad rho|^2 / rho`, evaluated in the equivalent
//! form `(1/2) integral |grad sqrt(rho)|^2`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::density::DensityField;
use crate::error::{domain, Result};
use crate::grid::{Measure, ScalarField};

/// `(3 pi^2)^(2/3)`: square of the Fermi-momentum prefactor, `|P_F| = C_F rho^(1/3)`.
pub fn c_f_sq() -> f64 {
    (3.0 * PI * PI).powf(2.0 / 3.0)
}

/// Lieb-Thirring constant as quoted for the rigorous bound.
pub const C_LT: f64 = 9.11;
/// Improved value from numerical calculations.
pub const C_LT_NUMERICAL: f64 = 9.578;

/// Default 1D local coefficient, `pi^2 / 2` (spinless `P_F = pi rho`, every
/// particle at the Fermi momentum).
pub fn c_1d() -> f64 {
    PI * PI / 2.0
}

/// 1D spinless Thomas-Fermi constant `pi^2 / 6`, used as the 1D lower-bound
/// prefactor.
pub fn c_lt_1d() -> f64 {
    PI * PI / 6.0
}

/// Densities below this are treated as zero wherever `1/rho` appears.
pub const DENSITY_MASK: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficients {
    c_f_sq: f64,
    c_lt: f64,
    c_lt_1d: f64,
    c_1d: f64,
    c_my: Option<f64>,
    #[serde(rename = "C")]
    c: f64,
    q: f64,
}

impl Default for Coefficients {
    fn default() -> Self {
        let c_f_sq = c_f_sq();
        Coefficients {
            c_f_sq,
            c_lt: C_LT,
            c_lt_1d: c_lt_1d(),
            c_1d: c_1d(),
            c_my: None,
            c: 0.5 * c_f_sq,
            q: 1.0,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        domain(format!("{name} must be > 0, got {v}"))
    }
}

fn nonnegative(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        domain(format!("{name} must be >= 0, got {v}"))
    }
}

pub(crate) fn unit_interval(name: &str, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        domain(format!("{name} must lie in [0, 1], got {v}"))
    }
}

impl Coefficients {
    pub fn with_c_lt(mut self, v: f64) -> Result<Self> {
        self.c_lt = positive("c_lt", v)?;
        Ok(self)
    }

    pub fn with_c_lt_1d(mut self, v: f64) -> Result<Self> {
        self.c_lt_1d = positive("c_lt_1d", v)?;
        Ok(self)
    }

    pub fn with_c_1d(mut self, v: f64) -> Result<Self> {
        self.c_1d = positive("c_1d", v)?;
        Ok(self)
    }

    pub fn with_c_my(mut self, v: f64) -> Result<Self> {
        self.c_my = Some(nonnegative("c_my", v)?);
        Ok(self)
    }

    pub fn with_c(mut self, v: f64) -> Result<Self> {
        self.c = nonnegative("C", v)?;
        Ok(self)
    }

    pub fn with_q(mut self, v: f64) -> Result<Self> {
        self.q = unit_interval("q", v)?;
        Ok(self)
    }

    pub fn c_f_sq(&self) -> f64 {
        self.c_f_sq
    }
    pub fn c_lt(&self) -> f64 {
        self.c_lt
    }
    pub fn c_lt_1d(&self) -> f64 {
        self.c_lt_1d
    }
    pub fn c_1d(&self) -> f64 {
        self.c_1d
    }
    pub fn c_my(&self) -> Option<f64> {
        self.c_my
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn q(&self) -> f64 {
        self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalBreakdown {
    pub tf_term: f64,
    pub weizsacker_term: f64,
    pub info_term: Option<f64>,
    pub total: f64,
}

impl FunctionalBreakdown {
    pub fn new(tf_term: f64, weizsacker_term: f64, info_term: Option<f64>) -> Self {
        FunctionalBreakdown {
            tf_term,
            weizsacker_term,
            info_term,
            total: tf_term + weizsacker_term + info_term.unwrap_or(0.0),
        }
    }
}

/// `integral rho^p`.
pub fn power_integral(rho: &DensityField, p: f64) -> f64 {
    let vals: Vec<f64> = rho.values().iter().map(|v| v.powf(p)).collect();
    rho.grid().quadrature(&vals)
}

/// Exponent of the local term for a measure: 5/3 in 3D, 3 in 1D.
pub fn local_exponent(m: Measure) -> f64 {
    match m {
        Measure::Line1d => 3.0,
        _ => 5.0 / 3.0,
    }
}

/// `integral rho^(5/3)` (radial) or `integral rho^3` (line).
pub fn local_integral(rho: &DensityField) -> f64 {
    power_integral(rho, local_exponent(rho.grid().measure()))
}

/// `coeff * integral rho^(5/3)`. On a line mesh this is evaluated literally
/// with `dx`, which has no physical meaning but is occasionally handy.
pub fn thomas_fermi_3d(rho: &DensityField, coeff: f64) -> Result<f64> {
    nonnegative("coefficient", coeff)?;
    Ok(coeff * power_integral(rho, 5.0 / 3.0))
}

/// `coeff * integral rho^3` on a line mesh.
pub fn tf_1d(rho: &DensityField, coeff: f64) -> Result<f64> {
    require_line(rho, "tf_1d")?;
    nonnegative("coefficient", coeff)?;
    Ok(coeff * power_integral(rho, 3.0))
}

/// Weizsaecker term `(1/2) integral |grad sqrt(rho)|^2`, with fourth-order differences.
pub fn weizsacker(rho: &DensityField) -> f64 {
    let g = rho.grid();
    let amp: Vec<f64> = rho.values().iter().map(|v| v.sqrt()).collect();
    let d = g.differentiate4(&amp);
    let sq: Vec<f64> = d.iter().map(|v| 0.5 * v * v).collect();
    g.quadrature(&sq)
}

/// Weizsaecker term in the literal form `(1/8) integral |grad rho|^2 / rho`,
/// masking nodes with `rho < 1e-14`.
pub fn weizsacker_direct(rho: &DensityField) -> f64 {
    let g = rho.grid();
    let d = g.differentiate4(rho.values());
    let integrand: Vec<f64> = rho
        .values()
        .iter()
        .zip(&d)
        .map(|(&r, &dr)| {
            if r < DENSITY_MASK {
                0.0
            } else {
                0.125 * dr * dr / r
            }
        })
        .collect();
    g.quadrature(&integrand)
}

/// One-dimensional March-Young form `c_my integral rho^(3/2) + integral |rho'|^2 / rho`.
///
/// The gradient term carries no 1/8 and the local exponent is 3/2, exactly as
/// the expression is usually quoted; neither is adjusted here.
pub fn march_young_1d(rho: &DensityField, c_my: f64) -> Result<f64> {
    require_line(rho, "march_young_1d")?;
    nonnegative("c_my", c_my)?;
    Ok(c_my * power_integral(rho, 1.5) + 8.0 * weizsacker(rho))
}

/// `C * local + q * T_W` with the local term chosen by the grid's measure.
pub fn combined_q(rho: &DensityField, c: f64, q: f64) -> Result<FunctionalBreakdown> {
    nonnegative("C", c)?;
    unit_interval("q", q)?;
    Ok(FunctionalBreakdown::new(
        c * local_integral(rho),
        q * weizsacker(rho),
        None,
    ))
}

/// Functional derivative of [`combined_q`]:
/// `p C rho^(p-1) + q [ |grad rho|^2 / (8 rho^2) - lap rho / (4 rho) ]`,
/// evaluated as `p C rho^(p-1) - q lap(sqrt rho) / (2 sqrt rho)`.
/// The gradient part is zero wherever `rho < 1e-14`.
pub fn functional_derivative_combined(rho: &DensityField, c: f64, q: f64) -> Result<ScalarField> {
    nonnegative("C", c)?;
    unit_interval("q", q)?;
    let g = rho.grid();
    let p = local_exponent(g.measure());
    let vals = rho.values();
    // -(1/2) lap(sqrt rho)/sqrt rho, the same field as the expanded form but
    // discretized like the sqrt-rho energy
    let amp: Vec<f64> = vals.iter().map(|v| v.sqrt()).collect();
    let lap = g.laplacian(&amp);
    let out = vals
        .iter()
        .zip(amp.iter().zip(&lap))
        .map(|(&r, (&a, &l))| {
            let local = p * c * r.powf(p - 1.0);
            if r < DENSITY_MASK {
                local
            } else {
                local - 0.5 * q * l / a
            }
        })
        .collect();
    ScalarField::new(g.clone(), out)
}

fn require_line(rho: &DensityField, what: &str) -> Result<()> {
    if rho.grid().measure() != Measure::Line1d {
        return domain(format!("{what} needs a line-measure density"));
    }
    Ok(())
}
