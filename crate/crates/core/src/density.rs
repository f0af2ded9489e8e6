//! One-electron densities and the `ofke-density v1` text format.
//!
//! ```text
//! # ofke-density v1
//! # measure=radial3d n=1 points=20000
//! 7.5e-4 3.1783e-1
//! ...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridRef, Measure, ScalarField};

pub const DENSITY_FILE_MAGIC: &str = "# ofke-density v1";

/// Relative normalization mismatch above which a loaded file is rejected.
pub const FILE_NORMALIZATION_RTOL: f64 = 1e-2;

/// Nonnegative density samples with the particle number they integrate to.
#[derive(Debug, Clone)]
pub struct DensityField {
    field: ScalarField,
    n_particles: f64,
}

impl DensityField {
    pub fn new(field: ScalarField, n_particles: f64) -> Result<Self> {
        if !(n_particles.is_finite() && n_particles >= 0.0) {
            return Err(Error::Domain(format!(
                "particle number must be >= 0, got {n_particles}"
            )));
        }
        if let Some((index, &value)) = field.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeDensity { index, value });
        }
        Ok(DensityField { field, n_particles })
    }

    /// Particle number taken from the integral of the samples.
    pub fn normalized_from(field: ScalarField) -> Result<Self> {
        let n = field.integrate();
        Self::new(field, n)
    }

    pub fn from_fn(grid: &GridRef, n_particles: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(ScalarField::from_fn(grid, f)?, n_particles)
    }

    pub fn zeros(grid: &GridRef) -> Self {
        DensityField {
            field: ScalarField::zeros(grid),
            n_particles: 0.0,
        }
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn grid(&self) -> &GridRef {
        self.field.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.field.values()
    }

    pub fn n_particles(&self) -> f64 {
        self.n_particles
    }

    pub fn integral(&self) -> f64 {
        self.field.integrate()
    }

    /// `|integral - N| / max(N, 1)`.
    pub fn normalization_error(&self) -> f64 {
        (self.integral() - self.n_particles).abs() / self.n_particles.max(1.0)
    }

    pub fn check_normalization(&self, rtol: f64) -> Result<()> {
        if self.normalization_error() > rtol {
            Err(Error::Normalization {
                integral: self.integral(),
                declared: self.n_particles,
            })
        } else {
            Ok(())
        }
    }

    /// Same samples, rescaled so that they integrate to `n`.
    pub fn renormalized(&self, n: f64) -> Result<Self> {
        let total = self.integral();
        if total <= 0.0 {
            return Err(Error::Domain(
                "cannot renormalize a density with zero mass".into(),
            ));
        }
        let s = n / total;
        Self::new(self.field.map(|v| v * s)?, n)
    }
}

pub fn load_density_file(path: impl AsRef<Path>) -> Result<DensityField> {
    let text = fs::read_to_string(path)?;
    parse_density(&text)
}

pub fn parse_density(text: &str) -> Result<DensityField> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_end() == DENSITY_FILE_MAGIC => {}
        _ => return parse_err(1, format!("expected `{DENSITY_FILE_MAGIC}`")),
    }
    let header = match lines.next() {
        Some((_, l)) => l,
        None => return parse_err(2, "missing header line"),
    };
    let Some(fields) = header.trim().strip_prefix('#') else {
        return parse_err(2, "header line must start with `#`");
    };
    let (mut measure, mut n_particles, mut points) = (None, None, None);
    for token in fields.split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            return parse_err(2, format!("malformed header token `{token}`"));
        };
        match key {
            "measure" => {
                measure = Some(match value {
                    "line1d" => Measure::Line1d,
                    "radial3d" => Measure::Radial3d,
                    _ => return parse_err(2, format!("unknown measure `{value}`")),
                })
            }
            "n" => n_particles = Some(parse_real(value, 2)?),
            "points" => {
                points = Some(value.parse::<usize>().map_err(|_| Error::Parse {
                    line: 2,
                    msg: format!("bad point count `{value}`"),
                })?)
            }
            _ => return parse_err(2, format!("unknown header key `{key}`")),
        }
    }
    let (Some(measure), Some(n_particles), Some(points)) = (measure, n_particles, points) else {
        return parse_err(2, "header needs measure=, n= and points=");
    };

    let mut nodes = Vec::with_capacity(points);
    let mut values = Vec::with_capacity(points);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(x), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return parse_err(lineno, "expected `<coordinate> <density>`");
        };
        let x = parse_real(x, lineno)?;
        let v = parse_real(v, lineno)?;
        if v < 0.0 {
            return Err(Error::NegativeDensity {
                index: values.len(),
                value: v,
            });
        }
        if let Some(&prev) = nodes.last() {
            if x <= prev {
                return parse_err(lineno, "coordinates must be strictly increasing");
            }
        }
        nodes.push(x);
        values.push(v);
    }
    if nodes.len() != points {
        return parse_err(
            2,
            format!("header declares {points} points, found {}", nodes.len()),
        );
    }

    let grid = Grid::from_nodes(nodes, measure)?;
    let density = DensityField::new(ScalarField::new(grid, values)?, n_particles)?;
    density.check_normalization(FILE_NORMALIZATION_RTOL)?;
    let err = density.normalization_error();
    if err > 1e-6 {
        log::warn!(
            "density integrates to {} (declared N = {n_particles})",
            density.integral()
        );
    }
    Ok(density)
}

/// Render in the `ofke-density v1` format; values use the shortest
/// representation that parses back to the same `f64`.
pub fn format_density(rho: &DensityField) -> String {
    let g = rho.grid();
    let mut out = String::with_capacity(32 * g.len() + 64);
    out.push_str(DENSITY_FILE_MAGIC);
    out.push('\n');
    let _ = writeln!(
        out,
        "# measure={} n={} points={}",
        g.measure().as_str(),
        rho.n_particles(),
        g.len()
    );
    for (x, v) in g.nodes().iter().zip(rho.values()) {
        let _ = writeln!(out, "{x:e} {v:e}");
    }
    out
}

pub fn save_density_file(rho: &DensityField, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_density(rho))?;
    Ok(())
}

fn parse_real(s: &str, line: usize) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => parse_err(line, format!("bad number `{s}`")),
    }
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_radial_grid, make_uniform_grid};
    use std::f64::consts::PI;

    fn hydrogen() -> DensityField {
        let g = make_radial_grid(30.0, 2000).unwrap();
        DensityField::from_fn(&g, 1.0, |r| (-2.0 * r).exp() / PI).unwrap()
    }

    #[test]
    fn round_trip_radial_file() {
        let rho = hydrogen();
        let text = format_density(&rho);
        let back = parse_density(&text).unwrap();
        assert_eq!(back.n_particles(), 1.0);
        assert_eq!(back.values(), rho.values());
        assert_eq!(back.grid().nodes(), rho.grid().nodes());
        assert_eq!(back.grid().measure(), Measure::Radial3d);
        assert!((back.integral() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn file_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        save_density_file(&hydrogen(), &path).unwrap();
        assert_eq!(load_density_file(&path).unwrap().n_particles(), 1.0);
        assert!(matches!(
            load_density_file(dir.path().join("missing")),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn negative_sample_rejected() {
        let text = "# ofke-density v1\n# measure=line1d n=1 points=3\n0 0.5\n1 -0.1\n2 0.5\n";
        assert!(matches!(
            parse_density(text),
            Err(Error::NegativeDensity { index: 1, .. })
        ));
    }

    #[test]
    fn normalization_mismatch_rejected() {
        let g = make_uniform_grid(0.0, 1.0, 101).unwrap();
        let rho = DensityField::from_fn(&g, 1.0, |_| 0.9).unwrap();
        let text = format_density(&rho);
        assert!(matches!(
            parse_density(&text),
            Err(Error::Normalization { .. })
        ));
    }

    #[test]
    fn malformed_headers() {
        let cases = [
            "",
            "# other v1\n",
            "# ofke-density v1\n",
            "# ofke-density v1\n# measure=cube n=1 points=0\n",
            "# ofke-density v1\n# measure=line1d n=1\n0 1\n",
            "# ofke-density v1\n# measure=line1d n=1 points=3 extra=1\n",
            "# ofke-density v1\n# measure=line1d n=1 points=4\n0 1\n1 1\n2 1\n",
            "# ofke-density v1\n# measure=line1d n=2 points=3\n0 1\n0 1\n2 1\n",
            "# ofke-density v1\n# measure=line1d n=2 points=3\n0 1\n1 x\n2 1\n",
        ];
        for text in cases {
            assert!(parse_density(text).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn constructor_rejects_negative_values() {
        let g = make_uniform_grid(0.0, 1.0, 5).unwrap();
        let f = ScalarField::new(g, vec![0.0, 1.0, -1e-3, 1.0, 0.0]).unwrap();
        assert!(DensityField::new(f, 1.0).is_err());
    }
}
