//! Lower and upper bounds on the kinetic energy and the check of the chain
//! `lower <= T <= upper <= Zumbach` for systems with known exact `T`.
//!
//! Radial (3D) densities use
//! * lower: `(C_LT/2) integral rho^(5/3)`
//! * upper: `(C_F^2/2) integral rho^(5/3) + T_W`
//! * Zumbach: `[1 + C_Zu N^(2/3)] T_W`
//!
//! Line (1D) densities use `c_lt_1d integral rho^3` and `c_1d integral rho^3 + T_W`;
//! the Zumbach bound is three-dimensional and is reported as not applicable.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::density::DensityField;
use crate::error::{domain, Result};
use crate::functionals::{power_integral, weizsacker, Coefficients};
use crate::grid::Measure;
use crate::reference::ReferenceSystem;
use crate::report::{sig12, sig12_map, sig12_opt};

/// `15 (4 pi)^2 (3/5) (1/5)^(2/3)`.
pub fn c_zu() -> f64 {
    15.0 * (4.0 * PI).powi(2) * 0.6 * 0.2f64.powf(2.0 / 3.0)
}

/// `(C_F^2/2) integral rho^(5/3) + T_W` in 3D, `c_1d integral rho^3 + T_W` in 1D.
pub fn upper_bound_tfw(rho: &DensityField, coeffs: &Coefficients) -> f64 {
    let local = match rho.grid().measure() {
        Measure::Line1d => coeffs.c_1d() * power_integral(rho, 3.0),
        _ => 0.5 * coeffs.c_f_sq() * power_integral(rho, 5.0 / 3.0),
    };
    local + weizsacker(rho)
}

/// `(c_lt/2) integral rho^(5/3)`.
pub fn lower_bound_lieb_thirring(rho: &DensityField, c_lt: f64) -> f64 {
    0.5 * c_lt * power_integral(rho, 5.0 / 3.0)
}

/// `c integral rho^3`, the 1D counterpart of the Lieb-Thirring bound.
pub fn lower_bound_1d(rho: &DensityField, c: f64) -> f64 {
    c * power_integral(rho, 3.0)
}

/// `[1 + C_Zu N^(2/3)] T_W`.
pub fn zumbach_bound(rho: &DensityField, n: f64) -> Result<f64> {
    if !(n.is_finite() && n >= 0.0) {
        return domain(format!("particle number must be >= 0, got {n}"));
    }
    Ok((1.0 + c_zu() * n.powf(2.0 / 3.0)) * weizsacker(rho))
}

/// Sides of `integral rho^(5/3) <= C_PG N^(2/3) T_W` for a caller-supplied `C_PG`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn pathak_gadre_check(rho: &DensityField, c_pg: f64) -> Result<SobolevCheck> {
    if !(c_pg.is_finite() && c_pg > 0.0) {
        return domain(format!("C_PG must be > 0, got {c_pg}"));
    }
    let lhs = power_integral(rho, 5.0 / 3.0);
    let rhs = c_pg * rho.n_particles().powf(2.0 / 3.0) * weizsacker(rho);
    Ok(SobolevCheck {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub system: String,
    #[serde(serialize_with = "sig12_map")]
    pub params: BTreeMap<String, f64>,
    #[serde(serialize_with = "sig12")]
    pub t_exact: f64,
    #[serde(serialize_with = "sig12")]
    pub lower_lt: f64,
    #[serde(serialize_with = "sig12")]
    pub upper_tfw: f64,
    /// `None` for line densities.
    #[serde(serialize_with = "sig12_opt")]
    pub zumbach: Option<f64>,
    #[serde(serialize_with = "sig12")]
    pub margin_lower: f64,
    #[serde(serialize_with = "sig12")]
    pub margin_upper: f64,
    /// `[lower <= exact, exact <= upper, upper <= zumbach]`; the last entry is
    /// vacuously true when `zumbach` is absent.
    pub chain_ok: [bool; 3],
}

impl BoundReport {
    pub fn from_values(
        system: impl Into<String>,
        params: BTreeMap<String, f64>,
        t_exact: f64,
        lower_lt: f64,
        upper_tfw: f64,
        zumbach: Option<f64>,
    ) -> Self {
        let margin_lower = t_exact - lower_lt;
        let margin_upper = upper_tfw - t_exact;
        BoundReport {
            system: system.into(),
            params,
            t_exact,
            lower_lt,
            upper_tfw,
            zumbach,
            margin_lower,
            margin_upper,
            chain_ok: [
                margin_lower >= 0.0,
                margin_upper >= 0.0,
                zumbach.is_none_or(|z| upper_tfw <= z),
            ],
        }
    }

    pub fn all_ok(&self) -> bool {
        self.chain_ok.iter().all(|&b| b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Evaluate every bound for `sys`. Violations are recorded in the flags,
/// never raised.
pub fn verify_chain(sys: &ReferenceSystem, coeffs: &Coefficients) -> Result<BoundReport> {
    let rho = &sys.density;
    let upper = upper_bound_tfw(rho, coeffs);
    let (lower, zumbach) = match rho.grid().measure() {
        Measure::Line1d => (lower_bound_1d(rho, coeffs.c_lt_1d()), None),
        _ => (
            lower_bound_lieb_thirring(rho, coeffs.c_lt()),
            Some(zumbach_bound(rho, rho.n_particles())?),
        ),
    };
    Ok(BoundReport::from_values(
        sys.name.clone(),
        sys.params.clone(),
        sys.t_exact,
        lower,
        upper,
        zumbach,
    ))
}
