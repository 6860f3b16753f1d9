//! Planar domains, their boundary meshes and interior sample grids.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point = [f64; 2];

/// Resolution of the sampling used to validate star domains and to measure
/// distances to their boundary.
const STAR_SAMPLES: usize = 4096;

fn default_grading() -> f64 {
    3.0
}

/// A bounded planar domain and its boundary resolution.
///
/// Serialized as `{"kind":"disk","radius":1.0,"panels":256}`,
/// `{"kind":"polygon","vertices":[[x,y],...],"panels_per_edge":32,"grading":3.0}`
/// or `{"kind":"star","coeffs":{"0":1.0,"3":0.2},"panels":256}`.
///
/// Star coefficients describe `ρ(φ) = Σ_k c_k cos(kφ)` for keys `k ≥ 0`;
/// a negative key `-k` contributes `c sin(kφ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSpec {
    Disk {
        radius: f64,
        panels: usize,
    },
    Polygon {
        vertices: Vec<Point>,
        panels_per_edge: usize,
        #[serde(default = "default_grading")]
        grading: f64,
    },
    Star {
        coeffs: BTreeMap<String, f64>,
        panels: usize,
    },
}

/// A closed curve `t ↦ ρ(t)(cos t, sin t)`, `t ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCurve {
    /// `(k, c)`: `c cos(kt)` for `k ≥ 0`, `c sin(|k|t)` for `k < 0`.
    terms: Vec<(i64, f64)>,
}

impl SmoothCurve {
    pub fn circle(radius: f64) -> Self {
        Self {
            terms: vec![(0, radius)],
        }
    }

    /// `ρ, ρ', ρ''` at `t`.
    fn radial(&self, t: f64) -> (f64, f64, f64) {
        let mut r = (0.0, 0.0, 0.0);
        for &(k, c) in &self.terms {
            let kf = k.unsigned_abs() as f64;
            let (s, co) = (kf * t).sin_cos();
            if k >= 0 {
                r.0 += c * co;
                r.1 -= c * kf * s;
                r.2 -= c * kf * kf * co;
            } else {
                r.0 += c * s;
                r.1 += c * kf * co;
                r.2 -= c * kf * kf * s;
            }
        }
        r
    }

    pub fn radius_at(&self, t: f64) -> f64 {
        self.radial(t).0
    }

    pub fn point(&self, t: f64) -> Point {
        let rho = self.radius_at(t);
        [rho * t.cos(), rho * t.sin()]
    }

    /// Position, first and second derivative with respect to `t`.
    pub fn derivatives(&self, t: f64) -> (Point, Point, Point) {
        let (r, r1, r2) = self.radial(t);
        let (s, c) = t.sin_cos();
        (
            [r * c, r * s],
            [r1 * c - r * s, r1 * s + r * c],
            [r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s],
        )
    }
}

/// How the mesh was produced; used for singular and near-singular
/// quadrature.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshKind {
    /// Equispaced parameters `t_j = (j + 1/2) 2π/N` on a smooth curve.
    Smooth { curve: SmoothCurve, params: Vec<f64> },
    /// Straight panels; `panels[i]` carries node `i` at its midpoint.
    Polygon { corners: Vec<Point> },
}

/// Discretized boundary: one quadrature node per panel.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMesh {
    pub nodes: Vec<Point>,
    /// Unit outward normals.
    pub normals: Vec<Point>,
    /// Arclength quadrature weights.
    pub weights: Vec<f64>,
    /// Signed curvature (positive on convex arcs), zero on straight panels.
    pub curvature: Vec<f64>,
    /// Panel endpoints `(start, end)` in positive orientation.
    pub panels: Vec<(Point, Point)>,
    pub perimeter: f64,
    pub kind: MeshKind,
    /// `|x'(t_j)|` for smooth meshes, panel length for polygons.
    pub speed: Vec<f64>,
    /// Whether the mesh is an equispaced circle centered at the origin.
    pub circle_radius: Option<f64>,
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_panel_length(&self) -> f64 {
        self.panels
            .iter()
            .zip(&self.weights)
            .map(|(&(a, b), &w)| dist(a, b).max(w))
            .fold(0.0, f64::max)
    }

    /// Polar angle of every node (used for Fourier data on circles).
    pub fn node_angles(&self) -> Vec<f64> {
        self.nodes.iter().map(|p| p[1].atan2(p[0])).collect()
    }

    /// Perimeter of the inscribed polygon through the panel endpoints.
    pub fn chord_length(&self) -> f64 {
        self.panels.iter().map(|&(a, b)| dist(a, b)).sum()
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self.kind, MeshKind::Smooth { .. })
    }

    /// Point-in-polygon test against the polygon through the panel ends.
    pub fn contains(&self, x: Point) -> bool {
        let ends: Vec<Point> = self.panels.iter().map(|p| p.0).collect();
        winding_number(&ends, x) != 0
    }

    /// Distance to the polygon through the panel endpoints.
    pub fn distance_to_panels(&self, x: Point) -> f64 {
        self.panels
            .iter()
            .map(|&(a, b)| segment_distance(x, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Lattice points inside a domain with a volume weight per point.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorGrid {
    pub points: Vec<Point>,
    /// Integer cell coordinates: `points[i] = h * (indices[i] + ½)`.
    pub indices: Vec<(i64, i64)>,
    pub cell_weights: Vec<f64>,
    pub h: f64,
    pub margin: f64,
}

impl InteriorGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.cell_weights.iter().sum()
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

/// Symmetric grading map on `[0, 1]` clustering points at both ends.
fn grade(s: f64, q: f64) -> f64 {
    if s <= 0.5 {
        0.5 * (2.0 * s).powf(q)
    } else {
        1.0 - 0.5 * (2.0 - 2.0 * s).powf(q)
    }
}

impl DomainSpec {
    pub fn disk(radius: f64, panels: usize) -> Self {
        Self::Disk { radius, panels }
    }

    /// Axis-aligned square `[-a/2, a/2]²`.
    pub fn square(side: f64, panels_per_edge: usize) -> Self {
        let a = side / 2.0;
        Self::Polygon {
            vertices: vec![[-a, -a], [a, -a], [a, a], [-a, a]],
            panels_per_edge,
            grading: default_grading(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    fn star_curve(coeffs: &BTreeMap<String, f64>) -> Result<SmoothCurve> {
        let mut terms = Vec::with_capacity(coeffs.len());
        for (key, &c) in coeffs {
            let k: i64 = key.trim().parse().map_err(|_| {
                Error::InvalidDomain(format!("star coefficient key {key:?} is not an integer"))
            })?;
            if !c.is_finite() {
                return Err(Error::InvalidDomain(format!("coefficient {key} is not finite")));
            }
            terms.push((k, c));
        }
        Ok(SmoothCurve { terms })
    }

    /// Checks the structural invariants of the domain.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Disk { radius, panels } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidDomain(format!("radius {radius} must be positive")));
                }
                if *panels < 3 {
                    return Err(Error::InvalidDomain("need at least 3 panels".into()));
                }
            }
            Self::Polygon {
                vertices,
                panels_per_edge,
                grading,
            } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
                }
                if vertices.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidDomain("non-finite vertex".into()));
                }
                if *panels_per_edge < 1 {
                    return Err(Error::InvalidDomain("need at least one panel per edge".into()));
                }
                if !(grading.is_finite() && *grading >= 1.0) {
                    return Err(Error::InvalidDomain(format!("grading {grading} must be ≥ 1")));
                }
                for i in 0..n {
                    if dist(vertices[i], vertices[(i + 1) % n]) == 0.0 {
                        return Err(Error::InvalidDomain(format!("repeated vertex {i}")));
                    }
                    for j in (i + 2)..n {
                        if i == 0 && j == n - 1 {
                            continue;
                        }
                        let (p1, p2) = (vertices[i], vertices[(i + 1) % n]);
                        let (q1, q2) = (vertices[j], vertices[(j + 1) % n]);
                        if segments_intersect(p1, p2, q1, q2) {
                            return Err(Error::InvalidDomain(format!(
                                "edges {i} and {j} intersect"
                            )));
                        }
                    }
                }
                if signed_area(vertices) <= 0.0 {
                    return Err(Error::InvalidDomain(
                        "polygon must be counterclockwise (positive area)".into(),
                    ));
                }
            }
            Self::Star { coeffs, panels } => {
                if *panels < 3 {
                    return Err(Error::InvalidDomain("need at least 3 panels".into()));
                }
                let curve = Self::star_curve(coeffs)?;
                let min = (0..STAR_SAMPLES)
                    .map(|i| curve.radius_at(2.0 * PI * i as f64 / STAR_SAMPLES as f64))
                    .fold(f64::INFINITY, f64::min);
                if !(min > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "star radius is not positive (minimum {min})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn smooth_curve(&self) -> Option<SmoothCurve> {
        match self {
            Self::Disk { radius, .. } => Some(SmoothCurve::circle(*radius)),
            Self::Star { coeffs, .. } => Self::star_curve(coeffs).ok(),
            Self::Polygon { .. } => None,
        }
    }

    /// Point-in-domain test (open domain).
    pub fn contains(&self, x: Point) -> bool {
        match self {
            Self::Disk { radius, .. } => x[0].hypot(x[1]) < *radius,
            Self::Star { .. } => {
                let curve = self.smooth_curve().expect("validated star");
                let r = x[0].hypot(x[1]);
                r == 0.0 || r < curve.radius_at(x[1].atan2(x[0]))
            }
            Self::Polygon { vertices, .. } => winding_number(vertices, x) != 0,
        }
    }

    /// Euclidean distance from `x` to the boundary curve.
    pub fn distance_to_boundary(&self, x: Point) -> f64 {
        match self {
            Self::Disk { radius, .. } => (radius - x[0].hypot(x[1])).abs(),
            Self::Polygon { vertices, .. } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| segment_distance(x, vertices[i], vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            Self::Star { .. } => {
                let curve = self.smooth_curve().expect("validated star");
                let pts: Vec<Point> = (0..STAR_SAMPLES)
                    .map(|i| curve.point(2.0 * PI * i as f64 / STAR_SAMPLES as f64))
                    .collect();
                (0..STAR_SAMPLES)
                    .map(|i| segment_distance(x, pts[i], pts[(i + 1) % STAR_SAMPLES]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Exact area for disks and polygons; trapezoidal `½∮ρ²` for stars.
    pub fn area(&self) -> f64 {
        match self {
            Self::Disk { radius, .. } => PI * radius * radius,
            Self::Polygon { vertices, .. } => signed_area(vertices),
            Self::Star { .. } => {
                let curve = self.smooth_curve().expect("validated star");
                let m = STAR_SAMPLES;
                (0..m)
                    .map(|i| curve.radius_at(2.0 * PI * i as f64 / m as f64).powi(2))
                    .sum::<f64>()
                    * PI
                    / m as f64
            }
        }
    }

    /// Radius of a disk centered at the origin containing the domain.
    fn bounding_radius(&self) -> f64 {
        match self {
            Self::Disk { radius, .. } => *radius,
            Self::Polygon { vertices, .. } => vertices
                .iter()
                .map(|v| v[0].hypot(v[1]))
                .fold(0.0, f64::max),
            Self::Star { .. } => {
                let curve = self.smooth_curve().expect("validated star");
                (0..STAR_SAMPLES)
                    .map(|i| curve.radius_at(2.0 * PI * i as f64 / STAR_SAMPLES as f64).abs())
                    .fold(0.0, f64::max)
                    * 1.01
            }
        }
    }

    /// Panelizes the boundary.
    pub fn build_mesh(&self) -> Result<BoundaryMesh> {
        self.validate()?;
        match self {
            Self::Disk { panels, .. } | Self::Star { panels, .. } => {
                let curve = self.smooth_curve().expect("validated curve");
                let circle_radius = match self {
                    Self::Disk { radius, .. } => Some(*radius),
                    _ => None,
                };
                Ok(smooth_mesh(curve, *panels, circle_radius))
            }
            Self::Polygon {
                vertices,
                panels_per_edge,
                grading,
            } => Ok(polygon_mesh(vertices, *panels_per_edge, *grading)),
        }
    }

    /// Lattice points `(ih, jh)` inside the domain at distance `≥ margin`
    /// from the boundary, each carrying weight `h²`.
    pub fn interior_grid(&self, h: f64, margin: f64) -> Result<InteriorGrid> {
        self.validate()?;
        if !(h.is_finite() && h > 0.0) || !(margin.is_finite() && margin >= 0.0) {
            return Err(Error::Domain(format!(
                "grid spacing {h} and margin {margin} must be positive"
            )));
        }
        let bound = (self.bounding_radius() / h).ceil() as i64 + 1;
        let mut points = Vec::new();
        let mut indices = Vec::new();
        let vertex_box = match self {
            Self::Polygon { vertices, .. } => Some(vertices.clone()),
            _ => None,
        };
        for i in -bound..=bound {
            for j in -bound..=bound {
                let p = [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h];
                if let Some(v) = &vertex_box {
                    let (lo, hi) = bbox(v);
                    if p[0] < lo[0] || p[1] < lo[1] || p[0] > hi[0] || p[1] > hi[1] {
                        continue;
                    }
                }
                let d = self.distance_to_boundary(p);
                if self.contains(p) && d >= margin && d > 0.0 {
                    points.push(p);
                    indices.push((i, j));
                }
            }
        }
        if points.is_empty() {
            return Err(Error::EmptyGrid { h, margin });
        }
        let cell_weights = vec![h * h; points.len()];
        Ok(InteriorGrid {
            points,
            indices,
            cell_weights,
            h,
            margin,
        })
    }
}

fn bbox(v: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in v {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

fn winding_number(v: &[Point], p: Point) -> i32 {
    let n = v.len();
    let mut wn = 0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if a[1] <= p[1] {
            if b[1] > p[1] && cross(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b[1] <= p[1] && cross(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

fn smooth_mesh(curve: SmoothCurve, n: usize, circle_radius: Option<f64>) -> BoundaryMesh {
    let dt = 2.0 * PI / n as f64;
    let params: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * dt).collect();
    let mut nodes = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    let mut panels = Vec::with_capacity(n);
    for (j, &t) in params.iter().enumerate() {
        let (x, d1, d2) = curve.derivatives(t);
        let s = d1[0].hypot(d1[1]);
        nodes.push(x);
        normals.push([d1[1] / s, -d1[0] / s]);
        speed.push(s);
        weights.push(s * dt);
        curvature.push((d1[0] * d2[1] - d1[1] * d2[0]) / (s * s * s));
        panels.push((curve.point(j as f64 * dt), curve.point((j + 1) as f64 * dt)));
    }
    let perimeter = weights.iter().sum();
    BoundaryMesh {
        nodes,
        normals,
        weights,
        curvature,
        panels,
        perimeter,
        kind: MeshKind::Smooth { curve, params },
        speed,
        circle_radius,
    }
}

fn polygon_mesh(vertices: &[Point], per_edge: usize, grading: f64) -> BoundaryMesh {
    let nv = vertices.len();
    let mut nodes = Vec::new();
    let mut normals = Vec::new();
    let mut weights = Vec::new();
    let mut panels = Vec::new();
    for e in 0..nv {
        let (a, b) = (vertices[e], vertices[(e + 1) % nv]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let len = d[0].hypot(d[1]);
        let normal = [d[1] / len, -d[0] / len];
        let at = |s: f64| [a[0] + s * d[0], a[1] + s * d[1]];
        let s: Vec<f64> = (0..=per_edge)
            .map(|k| grade(k as f64 / per_edge as f64, grading))
            .collect();
        for k in 0..per_edge {
            let (p, q) = (at(s[k]), at(s[k + 1]));
            nodes.push(at(0.5 * (s[k] + s[k + 1])));
            normals.push(normal);
            weights.push((s[k + 1] - s[k]) * len);
            panels.push((p, q));
        }
    }
    let n = nodes.len();
    let perimeter = (0..nv)
        .map(|e| dist(vertices[e], vertices[(e + 1) % nv]))
        .sum();
    BoundaryMesh {
        speed: weights.clone(),
        nodes,
        normals,
        weights,
        curvature: vec![0.0; n],
        panels,
        perimeter,
        kind: MeshKind::Polygon {
            corners: vertices.to_vec(),
        },
        circle_radius: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_nodes_and_weights() {
        let mesh = DomainSpec::disk(1.0, 4).build_mesh().unwrap();
        for (k, p) in mesh.nodes.iter().enumerate() {
            let want = PI / 4.0 + k as f64 * PI / 2.0;
            assert!((p[1].atan2(p[0]).rem_euclid(2.0 * PI) - want).abs() < 1e-14);
        }
        assert!(mesh.weights.iter().all(|&w| (w - mesh.weights[0]).abs() < 1e-15));
        assert!((mesh.perimeter - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn square_perimeter_is_exact() {
        let mesh = DomainSpec::square(1.0, 16).build_mesh().unwrap();
        assert_eq!(mesh.len(), 64);
        assert!((mesh.weights.iter().sum::<f64>() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn unit_star_equals_disk() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert("0".to_string(), 1.0);
        let star = DomainSpec::Star { coeffs, panels: 64 }.build_mesh().unwrap();
        let disk = DomainSpec::disk(1.0, 64).build_mesh().unwrap();
        for (a, b) in star.nodes.iter().zip(&disk.nodes) {
            assert!(dist(*a, *b) < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_domains() {
        let bowtie = DomainSpec::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]],
            panels_per_edge: 4,
            grading: 3.0,
        };
        assert!(matches!(bowtie.build_mesh(), Err(Error::InvalidDomain(_))));
        let clockwise = DomainSpec::Polygon {
            vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
            panels_per_edge: 4,
            grading: 3.0,
        };
        assert!(clockwise.build_mesh().is_err());
        let mut coeffs = BTreeMap::new();
        coeffs.insert("0".to_string(), 0.5);
        coeffs.insert("2".to_string(), 0.6);
        assert!(DomainSpec::Star { coeffs, panels: 64 }.build_mesh().is_err());
        assert!(DomainSpec::disk(-1.0, 8).build_mesh().is_err());
    }

    #[test]
    fn containment() {
        let d = DomainSpec::disk(1.0, 8);
        assert!(d.contains([0.0, 0.0]));
        assert!(!d.contains([2.0, 0.0]));
        let sq = DomainSpec::square(2.0, 4);
        assert!(sq.contains([0.999, 0.999]));
        assert!(!sq.contains([1.001, 0.0]));
    }

    #[test]
    fn interior_grid_of_disk() {
        let d = DomainSpec::disk(1.0, 8);
        let g = d.interior_grid(0.5, 0.3).unwrap();
        assert!(g.points.iter().all(|p| p[0].hypot(p[1]) <= 0.7 + 1e-15));
        let g = d.interior_grid(0.02, 0.05).unwrap();
        let a = PI * 0.95 * 0.95;
        assert!(g.area() > 0.98 * a && g.area() < 1.02 * a);
        assert!(matches!(d.interior_grid(0.1, 2.0), Err(Error::EmptyGrid { .. })));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"kind":"polygon","vertices":[[0,0],[1,0],[0,1]],"panels_per_edge":8}"#;
        let spec = DomainSpec::from_json(text).unwrap();
        match &spec {
            DomainSpec::Polygon { grading, .. } => assert_eq!(*grading, 3.0),
            _ => panic!("wrong kind"),
        }
        let again: DomainSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(spec, again);
    }
}
