//! Newton potentials `w = E_2(z; ·) * f` of smooth interior sources.
//!
//! Sources are sums of Gaussian bumps sampled on the lattice of an
//! [`InteriorGrid`]. Cells within two lattice steps of a target use the
//! exact integral of `-ln|t - y|/(2π)` over the square cell plus the smooth
//! remainder at the cell center; all other cells use the midpoint rule.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{BoundaryMesh, DomainSpec, InteriorGrid, Point};
use crate::kernels::{e2, e2_remainder, e2_with_derivative, SpectralParameter};
use crate::par;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Samples below this fraction of the peak amplitude are dropped.
const CUTOFF: f64 = 1e-15;
/// Level defining the support margin of a source.
const SUPPORT_LEVEL: f64 = 1e-12;
/// Minimum number of lattice cells per Gaussian width.
const CELLS_PER_WIDTH: f64 = 8.0;

/// Smooth source `f` supported (numerically) inside the domain.
///
/// JSON: `{"kind":"gaussian","center":[0,0],"width":0.1,"amplitude":1.0}`
/// or `{"kind":"sum","terms":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceField {
    /// `A exp(-|x - c|²/w²)`.
    Gaussian {
        center: Point,
        width: f64,
        amplitude: f64,
    },
    Sum { terms: Vec<SourceField> },
}

impl SourceField {
    pub fn gaussian(center: Point, width: f64, amplitude: f64) -> Self {
        Self::Gaussian {
            center,
            width,
            amplitude,
        }
    }

    /// Gaussian of width `w` with unit total mass.
    pub fn unit_mass(center: Point, width: f64) -> Self {
        Self::gaussian(center, width, 1.0 / (PI * width * width))
    }

    pub fn eval(&self, x: Point) -> f64 {
        match self {
            Self::Gaussian {
                center,
                width,
                amplitude,
            } => {
                let d2 = (x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2);
                amplitude * (-d2 / (width * width)).exp()
            }
            Self::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }

    /// `∫ f` over the plane.
    pub fn mass(&self) -> f64 {
        match self {
            Self::Gaussian {
                width, amplitude, ..
            } => amplitude * PI * width * width,
            Self::Sum { terms } => terms.iter().map(Self::mass).sum(),
        }
    }

    fn gaussians(&self) -> Vec<(Point, f64, f64)> {
        match self {
            Self::Gaussian {
                center,
                width,
                amplitude,
            } => vec![(*center, *width, *amplitude)],
            Self::Sum { terms } => terms.iter().flat_map(Self::gaussians).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gaussians().iter().all(|g| g.2 == 0.0)
    }

    pub fn min_width(&self) -> f64 {
        self.gaussians()
            .iter()
            .map(|g| g.1)
            .fold(f64::INFINITY, f64::min)
    }

    fn validate(&self) -> Result<()> {
        for (c, w, a) in self.gaussians() {
            if !(w.is_finite() && w > 0.0) || !a.is_finite() || !c.iter().all(|v| v.is_finite()) {
                return Err(Error::Domain(format!(
                    "invalid Gaussian source (center {c:?}, width {w}, amplitude {a})"
                )));
            }
        }
        Ok(())
    }

    /// Distance from the boundary at which every term has decayed below
    /// `1e-12` of its amplitude (negative if the support crosses it).
    pub fn support_margin(&self, domain: &DomainSpec) -> f64 {
        let reach = SUPPORT_LEVEL.recip().ln().sqrt();
        self.gaussians()
            .iter()
            .filter(|g| g.2 != 0.0)
            .map(|&(c, w, _)| {
                let d = if domain.contains(c) {
                    domain.distance_to_boundary(c)
                } else {
                    -domain.distance_to_boundary(c)
                };
                d - reach * w
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Lattice samples `f(y_c) h²` of a source.
#[derive(Debug, Clone)]
pub struct SampledSource {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub h: f64,
}

impl SampledSource {
    pub fn new(grid: &InteriorGrid, f: &SourceField) -> Result<Self> {
        f.validate()?;
        let width = f.min_width();
        if width.is_finite() && grid.h > width / CELLS_PER_WIDTH {
            return Err(Error::GridTooCoarse { h: grid.h, width });
        }
        let peak = f
            .gaussians()
            .iter()
            .map(|g| g.2.abs())
            .fold(0.0, f64::max);
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (p, &wt) in grid.points.iter().zip(&grid.cell_weights) {
            let v = f.eval(*p);
            if v.abs() > CUTOFF * peak {
                points.push(*p);
                values.push(v * wt);
            }
        }
        Ok(Self {
            points,
            values,
            h: grid.h,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Antiderivative `F` with `∂²F/∂X∂Y = ln √(X² + Y²)`.
fn log_antiderivative(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return 0.0;
    }
    let xy_log = if x == 0.0 || y == 0.0 { 0.0 } else { x * y * r2.ln() };
    let ax = if x == 0.0 { 0.0 } else { x * x * (y / x).atan() };
    let ay = if y == 0.0 { 0.0 } else { y * y * (x / y).atan() };
    0.5 * (xy_log - 3.0 * x * y + ax + ay)
}

/// `∫_cell ln|t - y| dy` over the square of side `h` centered at `c`.
pub(crate) fn cell_log_integral(t: Point, c: Point, h: f64) -> f64 {
    let x0 = c[0] - 0.5 * h - t[0];
    let x1 = c[0] + 0.5 * h - t[0];
    let y0 = c[1] - 0.5 * h - t[1];
    let y1 = c[1] + 0.5 * h - t[1];
    log_antiderivative(x1, y1) - log_antiderivative(x0, y1) - log_antiderivative(x1, y0)
        + log_antiderivative(x0, y0)
}

fn potential_at(src: &SampledSource, z: &SpectralParameter, t: Point) -> Complex64 {
    let h = src.h;
    let near = 2.0 * h * (1.0 + 1e-9);
    let mut acc = ZERO;
    for (y, &v) in src.points.iter().zip(&src.values) {
        let dx = t[0] - y[0];
        let dy = t[1] - y[1];
        if dx.abs() <= near && dy.abs() <= near {
            // v = f(y) h²
            let fy = v / (h * h);
            let log_part = -cell_log_integral(t, *y, h) / (2.0 * PI);
            let (rem, _) = e2_remainder(z, dx.hypot(dy));
            acc += fy * (rem * (h * h) + log_part);
        } else {
            acc += e2(z, dx.hypot(dy)) * v;
        }
    }
    acc
}

/// Newton potential `w(t) = ∫ E_2(z; t - y) f(y) dy` at arbitrary targets.
pub fn newton_potential(
    grid: &InteriorGrid,
    f: &SourceField,
    z: &SpectralParameter,
    targets: &[Point],
) -> Result<Vec<Complex64>> {
    let src = SampledSource::new(grid, f)?;
    Ok(newton_potential_sampled(&src, z, targets))
}

pub(crate) fn newton_potential_sampled(
    src: &SampledSource,
    z: &SpectralParameter,
    targets: &[Point],
) -> Vec<Complex64> {
    if src.is_empty() {
        return vec![ZERO; targets.len()];
    }
    par::map_range(targets.len(), |i| potential_at(src, z, targets[i]))
}

/// Dirichlet and Neumann traces `(γ_D w, γ_N w)` of the Newton potential.
///
/// The source must stay two panel lengths away from the boundary so that
/// the kernel is smooth on the support.
pub fn newton_boundary_traces(
    grid: &InteriorGrid,
    f: &SourceField,
    z: &SpectralParameter,
    mesh: &BoundaryMesh,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let src = SampledSource::new(grid, f)?;
    check_support(f, mesh, grid)?;
    Ok(traces_sampled(&src, z, mesh))
}

/// Rejects sources reaching within two panel lengths of the boundary or
/// outside the sampled grid.
pub(crate) fn check_support(f: &SourceField, mesh: &BoundaryMesh, grid: &InteriorGrid) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    let reach = SUPPORT_LEVEL.recip().ln().sqrt();
    let margin = f
        .gaussians()
        .iter()
        .filter(|g| g.2 != 0.0)
        .map(|&(c, w, _)| {
            let d = mesh.distance_to_panels(c);
            (if mesh.contains(c) { d } else { -d }) - reach * w
        })
        .fold(f64::INFINITY, f64::min);
    let required = (2.0 * mesh.max_panel_length()).max(grid.margin);
    if !(margin >= required) {
        return Err(Error::SupportTooWide { margin, required });
    }
    Ok(())
}

pub(crate) fn traces_sampled(
    src: &SampledSource,
    z: &SpectralParameter,
    mesh: &BoundaryMesh,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let pairs = par::map_range(mesh.len(), |i| {
        let x = mesh.nodes[i];
        let nu = mesh.normals[i];
        let mut d_acc = ZERO;
        let mut n_acc = ZERO;
        for (y, &v) in src.points.iter().zip(&src.values) {
            let d = [x[0] - y[0], x[1] - y[1]];
            let r = d[0].hypot(d[1]);
            let (e, de) = e2_with_derivative(z, r);
            d_acc += e * v;
            n_acc += de * ((nu[0] * d[0] + nu[1] * d[1]) / r) * v;
        }
        (d_acc, n_acc)
    });
    pairs.into_iter().unzip()
}
