//! Evaluation of single and double layer potentials off the boundary.
//!
//! Far from the boundary the Nyström nodes are used directly. On smooth
//! curves, targets closer than a few panel lengths get a globally refined
//! trapezoidal rule with the density replaced by its trigonometric
//! interpolant; on polygons every panel is integrated with exact logarithmic
//! and angular weights.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::assembly::{segment_gradient_integral, segment_log_integral};
use crate::geometry::{dist, BoundaryMesh, MeshKind, Point, SmoothCurve};
use crate::kernels::{e2_remainder, e2_with_derivative, SpectralParameter};
use crate::par;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Targets nearer than this many panel lengths trigger refinement.
const NEAR_PANELS: f64 = 4.0;
/// Refined spacing as a fraction of the target distance.
const SPACING_PER_DISTANCE: f64 = 1.0 / 3.0;
const MAX_REFINED_NODES: usize = 1 << 17;

/// Potential values plus the indices of targets that were closer to the
/// boundary than two panel lengths (accuracy is degraded there).
#[derive(Debug, Clone, PartialEq)]
pub struct LayerValues {
    pub values: Vec<Complex64>,
    pub too_close: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq)]
enum Layer {
    Single,
    Double,
}

/// `u(t) = ∫ E_2(z; t - y) g(y) ds(y)`.
pub fn eval_single_layer(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    g: &[Complex64],
    targets: &[Point],
) -> Result<LayerValues> {
    eval_layer(mesh, z, g, targets, Layer::Single)
}

/// `u(t) = ∫ ν(y)·∇_y[E_2(z; t - y)] g(y) ds(y)`.
pub fn eval_double_layer(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    g: &[Complex64],
    targets: &[Point],
) -> Result<LayerValues> {
    eval_layer(mesh, z, g, targets, Layer::Double)
}

/// Quadrature nodes for a smooth curve: position, normal, weight.
struct Rule {
    nodes: Vec<Point>,
    normals: Vec<Point>,
    weights: Vec<f64>,
    density: Vec<Complex64>,
}

fn kernel(z: &SpectralParameter, layer: Layer, t: Point, y: Point, nu: Point) -> Complex64 {
    let d = [t[0] - y[0], t[1] - y[1]];
    let r = d[0].hypot(d[1]);
    let (e, de) = e2_with_derivative(z, r);
    match layer {
        Layer::Single => e,
        // ∇_y E(t - y) = -E'(r) (t - y)/r
        Layer::Double => -de * ((nu[0] * d[0] + nu[1] * d[1]) / r),
    }
}

fn apply_rule(rule: &Rule, z: &SpectralParameter, layer: Layer, t: Point) -> Complex64 {
    let mut acc = ZERO;
    for k in 0..rule.nodes.len() {
        acc += kernel(z, layer, t, rule.nodes[k], rule.normals[k]) * rule.density[k] * rule.weights[k];
    }
    acc
}

/// Distance from `t` to a smooth curve, starting from the nearest node.
fn curve_distance(curve: &SmoothCurve, mesh: &BoundaryMesh, params: &[f64], t: Point) -> f64 {
    let (j, dnode) = mesh
        .nodes
        .iter()
        .enumerate()
        .map(|(j, &p)| (j, dist(p, t)))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let h = 2.0 * PI / params.len() as f64;
    let mut tau = params[j];
    let mut best = dnode;
    for _ in 0..30 {
        let (x, d1, d2) = curve.derivatives(tau);
        let r = [x[0] - t[0], x[1] - t[1]];
        let f = r[0] * d1[0] + r[1] * d1[1];
        let fp = d1[0] * d1[0] + d1[1] * d1[1] + r[0] * d2[0] + r[1] * d2[1];
        let step = if fp > 0.0 { (f / fp).clamp(-h, h) } else { -f.signum() * h * 0.5 };
        tau -= step;
        best = best.min(dist(curve.point(tau), t));
        if step.abs() < 1e-15 {
            break;
        }
    }
    best
}

/// Trigonometric interpolation of node values on `t_j = (j + 1/2) 2π/N`
/// evaluated at `τ_m = (m + 1/2) 2π/M`.
fn upsample(g: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = g.len();
    let half = n / 2;
    let kmax = half;
    // c_k = (1/N) Σ_j g_j e^{-ik t_j}, k in [-kmax, kmax].
    let coeffs: Vec<(i64, Complex64)> = (-(kmax as i64)..=(kmax as i64))
        .map(|k| {
            let mut c = ZERO;
            for (j, &gj) in g.iter().enumerate() {
                let t = (j as f64 + 0.5) * 2.0 * PI / n as f64;
                c += gj * Complex64::from_polar(1.0, -(k as f64) * t);
            }
            let nyquist = n % 2 == 0 && k.unsigned_abs() as usize == half;
            (k, c / n as f64 * if nyquist { 0.5 } else { 1.0 })
        })
        .collect();
    par::map_range(m, |idx| {
        let tau = (idx as f64 + 0.5) * 2.0 * PI / m as f64;
        let base = Complex64::from_polar(1.0, tau);
        let mut p = Complex64::from_polar(1.0, -(kmax as f64) * tau);
        let mut acc = ZERO;
        for &(_, c) in &coeffs {
            acc += c * p;
            p *= base;
        }
        acc
    })
}

fn refined_rule(curve: &SmoothCurve, g: &[Complex64], m: usize) -> Rule {
    let density = upsample(g, m);
    let h = 2.0 * PI / m as f64;
    let mut nodes = Vec::with_capacity(m);
    let mut normals = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for k in 0..m {
        let tau = (k as f64 + 0.5) * h;
        let (x, d1, _) = curve.derivatives(tau);
        let s = d1[0].hypot(d1[1]);
        nodes.push(x);
        normals.push([d1[1] / s, -d1[0] / s]);
        weights.push(s * h);
    }
    Rule {
        nodes,
        normals,
        weights,
        density,
    }
}

fn polygon_value(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    g: &[Complex64],
    t: Point,
    layer: Layer,
) -> Complex64 {
    let mut acc = ZERO;
    for j in 0..mesh.len() {
        if g[j] == ZERO {
            continue;
        }
        let (a, b) = mesh.panels[j];
        let y = mesh.nodes[j];
        let d = [t[0] - y[0], t[1] - y[1]];
        let r = d[0].hypot(d[1]);
        let (rem, drem) = e2_remainder(z, r);
        let entry = match layer {
            Layer::Single => {
                Complex64::new(-segment_log_integral(t, a, b) / (2.0 * PI), 0.0)
                    + rem * mesh.weights[j]
            }
            Layer::Double => {
                let nu = mesh.normals[j];
                let v = segment_gradient_integral(t, a, b);
                let lap = (nu[0] * v[0] + nu[1] * v[1]) / (2.0 * PI);
                let smooth = if r > 0.0 {
                    -drem * ((nu[0] * d[0] + nu[1] * d[1]) / r) * mesh.weights[j]
                } else {
                    ZERO
                };
                Complex64::new(lap, 0.0) + smooth
            }
        };
        acc += entry * g[j];
    }
    acc
}

fn eval_layer(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    g: &[Complex64],
    targets: &[Point],
    layer: Layer,
) -> Result<LayerValues> {
    if g.len() != mesh.len() {
        return Err(Error::MeshMismatch {
            expected: mesh.len(),
            found: g.len(),
        });
    }
    let hmax = mesh.max_panel_length();
    let mut too_close = Vec::new();
    if g.iter().all(|v| *v == ZERO) {
        return Ok(LayerValues {
            values: vec![ZERO; targets.len()],
            too_close,
        });
    }
    let values = match &mesh.kind {
        MeshKind::Polygon { .. } => {
            let d: Vec<f64> = par::map_range(targets.len(), |i| {
                mesh.panels
                    .iter()
                    .map(|&(a, b)| segment_distance(targets[i], a, b))
                    .fold(f64::INFINITY, f64::min)
            });
            too_close.extend((0..targets.len()).filter(|&i| d[i] < 2.0 * hmax));
            par::map_range(targets.len(), |i| polygon_value(mesh, z, g, targets[i], layer))
        }
        MeshKind::Smooth { curve, params } => {
            let d: Vec<f64> =
                par::map_range(targets.len(), |i| curve_distance(curve, mesh, params, targets[i]));
            too_close.extend((0..targets.len()).filter(|&i| d[i] < 2.0 * hmax));
            let base = Rule {
                nodes: mesh.nodes.clone(),
                normals: mesh.normals.clone(),
                weights: mesh.weights.clone(),
                density: g.to_vec(),
            };
            // Group near targets by refinement level.
            let n = mesh.len();
            let smax = mesh.speed.iter().copied().fold(0.0, f64::max);
            let level: Vec<usize> = d
                .iter()
                .map(|&di| {
                    if di >= NEAR_PANELS * hmax {
                        return n;
                    }
                    let need = 2.0 * PI * smax / (SPACING_PER_DISTANCE * di.max(1e-300));
                    let factor = (need / n as f64).ceil().max(2.0);
                    ((factor as usize).saturating_mul(n)).min(MAX_REFINED_NODES.max(n))
                })
                .collect();
            let mut rules: BTreeMap<usize, Rule> = BTreeMap::new();
            for &m in &level {
                if m != n && !rules.contains_key(&m) {
                    rules.insert(m, refined_rule(curve, g, m));
                }
            }
            par::map_range(targets.len(), |i| {
                let rule = if level[i] == n { &base } else { &rules[&level[i]] };
                apply_rule(rule, z, layer, targets[i])
            })
        }
    };
    Ok(LayerValues { values, too_close })
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + s * d[0], a[1] + s * d[1]])
}
