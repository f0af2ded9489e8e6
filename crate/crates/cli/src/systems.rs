//! Built-in system specifications: parsing, flag merging and construction.

use std::collections::BTreeMap;

use ofke_core::grid::{make_radial_grid, make_uniform_grid, GridRef};
use ofke_core::reference::{
    box_fermions_1d, gaussian_3d, harmonic_fermions_1d_omega, hydrogenic,
    DEFAULT_HARMONIC_HALF_WIDTH, DEFAULT_LINE_N, DEFAULT_RADIAL_N, DEFAULT_RADIAL_RMAX,
};
use ofke_core::ReferenceSystem;

use crate::args::{GridArgs, SystemArgs};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Hydrogen,
    Box1d,
    Harm1d,
    Gauss3d,
}

impl Kind {
    pub fn parse(name: &str) -> Result<Kind, CliError> {
        match name {
            "hydrogen" => Ok(Kind::Hydrogen),
            "box1d" => Ok(Kind::Box1d),
            "harm1d" => Ok(Kind::Harm1d),
            "gauss3d" => Ok(Kind::Gauss3d),
            other => Err(CliError::config(format!(
                "unknown system `{other}` (expected hydrogen, box1d, harm1d or gauss3d)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Hydrogen => "hydrogen",
            Kind::Box1d => "box1d",
            Kind::Harm1d => "harm1d",
            Kind::Gauss3d => "gauss3d",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Kind::Hydrogen => &["Z"],
            Kind::Box1d => &["L", "N"],
            Kind::Harm1d => &["N", "omega"],
            Kind::Gauss3d => &["omega"],
        }
    }

    pub fn is_line(self) -> bool {
        matches!(self, Kind::Box1d | Kind::Harm1d)
    }
}

/// A system name with its parameters; unspecified ones take the defaults
/// `Z = 1`, `L = 1`, `N = 1`, `omega = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spec {
    pub kind: Kind,
    pub params: BTreeMap<String, f64>,
}

impl Spec {
    pub fn get(&self, key: &str) -> f64 {
        self.params.get(key).copied().unwrap_or(1.0)
    }

    pub fn count(&self) -> Result<usize, CliError> {
        let n = self.get("N");
        if n.fract() != 0.0 || n < 1.0 {
            return Err(CliError::config(format!(
                "N must be a positive integer, got {n}"
            )));
        }
        Ok(n as usize)
    }

    pub fn has(&self, key: &str) -> bool {
        self.params.contains_key(key)
    }
}

/// Parse `name` or `name:key=value,key=value`.
pub fn parse_spec(text: &str) -> Result<Spec, CliError> {
    let (name, rest) = match text.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (text, None),
    };
    let kind = Kind::parse(name.trim())?;
    let mut params = BTreeMap::new();
    for item in rest
        .into_iter()
        .flat_map(|r| r.split(','))
        .filter(|s| !s.trim().is_empty())
    {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("expected key=value in `{item}`")))?;
        let k = k.trim();
        if !kind.keys().contains(&k) {
            return Err(CliError::config(format!(
                "`{k}` is not a parameter of {}",
                kind.name()
            )));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("`{v}` is not a number (key {k})")))?;
        if params.insert(k.to_string(), v).is_some() {
            return Err(CliError::config(format!(
                "`{k}` given twice for {}",
                kind.name()
            )));
        }
    }
    Ok(Spec { kind, params })
}

/// Every `--system` entry with the global `--Z/--L/--N/--omega` flags merged in.
/// A global flag must apply to every listed system.
pub fn specs_from_args(a: &SystemArgs) -> Result<Vec<Spec>, CliError> {
    let mut specs = a
        .system
        .iter()
        .map(|s| parse_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    let globals = [
        ("Z", a.z),
        ("L", a.l),
        ("N", a.n.map(|n| n as f64)),
        ("omega", a.omega),
    ];
    for (key, value) in globals {
        let Some(v) = value else { continue };
        for s in &mut specs {
            if !s.kind.keys().contains(&key) {
                return Err(CliError::config(format!(
                    "--{key} does not apply to {}",
                    s.kind.name()
                )));
            }
            s.params.entry(key.to_string()).or_insert(v);
        }
    }
    Ok(specs)
}

pub fn single_spec(a: &SystemArgs) -> Result<Spec, CliError> {
    let mut specs = specs_from_args(a)?;
    match specs.len() {
        1 => Ok(specs.remove(0)),
        0 => Err(CliError::config("no input: pass --system")),
        _ => Err(CliError::config("this command takes exactly one --system")),
    }
}

/// Grid for a system: radial `(grid-rmax, grid-n)` for the 3D systems,
/// `[0, L]` for the box and `[-grid-rmax, grid-rmax]` for the oscillator.
pub fn grid_for(
    spec: &Spec,
    grid: &GridArgs,
    line_n: usize,
    radial: (f64, usize),
    half_width: f64,
) -> Result<GridRef, CliError> {
    let g = match spec.kind {
        Kind::Hydrogen | Kind::Gauss3d => make_radial_grid(
            grid.grid_rmax.unwrap_or(radial.0),
            grid.grid_n.unwrap_or(radial.1),
        )?,
        Kind::Box1d => {
            if grid.grid_rmax.is_some() {
                return Err(CliError::config(
                    "--grid-rmax does not apply to box1d; the grid is [0, L]",
                ));
            }
            make_uniform_grid(0.0, spec.get("L"), grid.grid_n.unwrap_or(line_n))?
        }
        Kind::Harm1d => {
            let w = grid.grid_rmax.unwrap_or(half_width);
            make_uniform_grid(-w, w, grid.grid_n.unwrap_or(line_n))?
        }
    };
    Ok(g)
}

/// Grid with the reference-system defaults.
pub fn default_grid_for(spec: &Spec, grid: &GridArgs) -> Result<GridRef, CliError> {
    grid_for(
        spec,
        grid,
        DEFAULT_LINE_N,
        (DEFAULT_RADIAL_RMAX, DEFAULT_RADIAL_N),
        DEFAULT_HARMONIC_HALF_WIDTH,
    )
}

/// Build the system on `g`, with `n` particles for the 1D families.
pub fn build(spec: &Spec, n: usize, g: &GridRef) -> Result<ReferenceSystem, CliError> {
    let sys = match spec.kind {
        Kind::Hydrogen => hydrogenic(spec.get("Z"), g)?,
        Kind::Gauss3d => gaussian_3d(spec.get("omega"), g)?,
        Kind::Box1d => box_fermions_1d(n, spec.get("L"), g)?,
        Kind::Harm1d => harmonic_fermions_1d_omega(n, spec.get("omega"), g)?,
    };
    Ok(sys)
}
