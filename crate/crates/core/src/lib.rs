//! Orbital-free kinetic-energy functionals on simple grids.
//!
//! * [`grid`]: line, radial and square meshes with quadrature and stencils
//! * [`density`], [`reference`]: densities, the density file format and
//!   exactly solvable reference systems
//! * [`functionals`]: Thomas-Fermi-like, Weizsaecker, March-Young and the
//!   combined `C local + q T_W` functional
//! * [`bounds`]: lower/upper bound chain for systems with known `T`
//! * [`pair`]: two-particle decomposition into Weizsaecker plus information term
//! * [`variational`]: fitting `q` and minimizing the combined energy
//!
//! Everything is in Hartree atomic units.

pub mod bounds;
pub mod density;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod pair;
pub mod reference;
pub mod report;
pub mod variational;

pub use crate::density::DensityField;
pub use crate::error::{Error, Result};
pub use crate::grid::{Grid, GridRef, Measure, ScalarField, SquareGrid};
pub use crate::reference::ReferenceSystem;
