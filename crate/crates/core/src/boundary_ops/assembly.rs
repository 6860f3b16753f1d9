//! Nyström discretizations of `γ_D S_z`, `K_z` and `K#_z`.
//!
//! Smooth closed curves use the logarithmic splitting of the single layer
//! kernel with trigonometric product weights, which converges spectrally.
//! Polygons integrate the logarithm and the Laplace double layer kernel
//! exactly over each straight panel (density constant per panel) and apply
//! the midpoint rule to the smooth remainder `E_2(z; r) + ln(r)/(2π)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::DenseOperator;
use crate::geometry::{BoundaryMesh, MeshKind, Point};
use crate::kernels::{e2_remainder, e2_with_derivative, SpectralParameter, EULER_GAMMA};
use crate::linalg::CMatrix;
use crate::par;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Weights `R_d` with `∫₀^{2π} ln(4 sin²((t_i - τ)/2)) f(τ) dτ ≈ Σ_j R_{|i-j|} f(t_j)`
/// exact for trigonometric interpolants on `N` equispaced nodes.
pub(crate) fn log_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    par::map_range(n, |d| {
        let t = 2.0 * PI * d as f64 / n as f64;
        let mut sum = 0.0;
        let top = if n % 2 == 0 { half - 1 } else { half };
        for m in 1..=top {
            sum += (m as f64 * t).cos() / m as f64;
        }
        let mut r = -4.0 * PI / n as f64 * sum;
        if n % 2 == 0 {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            r -= 4.0 * PI / (n * n) as f64 * sign;
        }
        r
    })
}

/// Value of the smooth remainder `R_z(0) = lim_{r→0} E_2(z;r) + ln(r)/(2π)`.
pub(crate) fn remainder_at_zero(z: &SpectralParameter) -> Complex64 {
    if z.is_zero() {
        ZERO
    } else {
        0.25 * I - ((z.sqrt_z * 0.5).ln() + EULER_GAMMA) / (2.0 * PI)
    }
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `∫_{[a,b]} ln|x - y| ds(y)`, exact.
pub(crate) fn segment_log_integral(x: Point, a: Point, b: Point) -> f64 {
    let d = sub(b, a);
    let len = d[0].hypot(d[1]);
    let t = [d[0] / len, d[1] / len];
    let rel = sub(x, a);
    let u0 = dot(rel, t);
    let h = (rel[0] * t[1] - rel[1] * t[0]).abs();
    let f = |u: f64| {
        let log_part = if u == 0.0 {
            0.0
        } else {
            0.5 * u * (u * u + h * h).ln()
        };
        let atan_part = if h == 0.0 { 0.0 } else { h * (u / h).atan() };
        log_part - u + atan_part
    };
    f(len - u0) - f(-u0)
}

/// `∫_{[a,b]} (x - y)/|x - y|² ds(y)`, exact for `x` off the segment.
pub(crate) fn segment_gradient_integral(x: Point, a: Point, b: Point) -> Point {
    let d = sub(b, a);
    let len = d[0].hypot(d[1]);
    let t = [d[0] / len, d[1] / len];
    let nrm = [t[1], -t[0]];
    let rel = sub(x, a);
    let u0 = dot(rel, t);
    let h = dot(rel, nrm);
    let along = 0.5 * ((u0 * u0 + h * h) / ((u0 - len) * (u0 - len) + h * h)).ln();
    let across = if h == 0.0 {
        0.0
    } else {
        ((len - u0) / h).atan() + (u0 / h).atan()
    };
    [along * t[0] + across * nrm[0], along * t[1] + across * nrm[1]]
}

/// Discrete `γ_D S_z`.
pub fn assemble_single_layer(mesh: &BoundaryMesh, z: &SpectralParameter) -> DenseOperator {
    let n = mesh.len();
    let matrix = match &mesh.kind {
        MeshKind::Smooth { params, .. } => {
            let rw = log_weights(n);
            let h = 2.0 * PI / n as f64;
            let r0 = remainder_at_zero(z);
            let k = z.sqrt_z;
            let zero_z = z.is_zero();
            CMatrix::from_fn(n, n, |i, j| {
                let s = mesh.speed[j];
                if i == j {
                    let m2 = (r0 - s.ln() / (2.0 * PI)) * s;
                    let m1 = -s / (4.0 * PI);
                    return rw[0] * m1 + h * m2;
                }
                let r = crate::geometry::dist(mesh.nodes[i], mesh.nodes[j]);
                let (e, _) = e2_with_derivative(z, r);
                let j0 = if zero_z {
                    Complex64::new(1.0, 0.0)
                } else {
                    crate::kernels::bessel_j(0, k * r)
                };
                let m1 = -j0 * s / (4.0 * PI);
                let lg = (4.0 * (0.5 * (params[i] - params[j])).sin().powi(2)).ln();
                let m2 = e * s - m1 * lg;
                rw[(i + n - j) % n] * m1 + h * m2
            })
        }
        MeshKind::Polygon { .. } => CMatrix::from_fn(n, n, |i, j| {
            let (a, b) = mesh.panels[j];
            let x = mesh.nodes[i];
            let log_part = -segment_log_integral(x, a, b) / (2.0 * PI);
            let r = crate::geometry::dist(x, mesh.nodes[j]);
            let (rem, _) = e2_remainder(z, r);
            log_part + rem * mesh.weights[j]
        }),
    };
    DenseOperator::new(matrix, mesh.weights.clone())
}

/// `∂_r E_2(z; r) + 1/(2πr)`, the derivative of the smooth remainder.
fn remainder_derivative(z: &SpectralParameter, r: f64) -> Complex64 {
    e2_remainder(z, r).1
}

/// Entry of `K#` (`adjoint = false`) or `K` (`adjoint = true`) between
/// nodes of a smooth mesh. The `J_1(kr) ln r` part of `∂_r E_2` is split off
/// and integrated with the log weights `rw`, as for the single layer.
fn smooth_double_layer_entry(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    params: &[f64],
    rw: &[f64],
    i: usize,
    j: usize,
    adjoint: bool,
) -> Complex64 {
    if i == j {
        return Complex64::new(-mesh.weights[i] * mesh.curvature[i] / (4.0 * PI), 0.0);
    }
    let n = mesh.len();
    let h = 2.0 * PI / n as f64;
    // K#: ν(x_i)·∇E(x_i - x_j); K: ν(x_j)·∇E(x_j - x_i).
    let (x, y, nu) = if adjoint {
        (mesh.nodes[j], mesh.nodes[i], mesh.normals[j])
    } else {
        (mesh.nodes[i], mesh.nodes[j], mesh.normals[i])
    };
    let d = sub(x, y);
    let r = d[0].hypot(d[1]);
    let (_, de) = e2_with_derivative(z, r);
    let s = mesh.speed[j];
    let cos_part = dot(nu, d) / r;
    let full = de * cos_part * s;
    if z.is_zero() {
        return h * full;
    }
    let k = z.sqrt_z;
    let l1 = k * crate::kernels::bessel_j(1, k * r) * cos_part * s / (4.0 * PI);
    let lg = (4.0 * (0.5 * (params[i] - params[j])).sin().powi(2)).ln();
    rw[(i + n - j) % n] * l1 + h * (full - l1 * lg)
}

fn polygon_double_layer_entry(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    i: usize,
    j: usize,
    adjoint: bool,
) -> Complex64 {
    if i == j {
        return ZERO;
    }
    let (a, b) = mesh.panels[j];
    let xi = mesh.nodes[i];
    let v = segment_gradient_integral(xi, a, b);
    let d = sub(xi, mesh.nodes[j]);
    let r = d[0].hypot(d[1]);
    let rem = remainder_derivative(z, r) * mesh.weights[j] / r;
    if adjoint {
        // ∫ ν_j · ∇E(y - x_i) ds(y); ∇E(y - x) = -E'(r)(x - y)/r.
        let nu = mesh.normals[j];
        Complex64::new(dot(nu, v) / (2.0 * PI), 0.0) - rem * dot(nu, d)
    } else {
        let nu = mesh.normals[i];
        Complex64::new(-dot(nu, v) / (2.0 * PI), 0.0) + rem * dot(nu, d)
    }
}

fn assemble_double(mesh: &BoundaryMesh, z: &SpectralParameter, adjoint: bool) -> DenseOperator {
    let n = mesh.len();
    let matrix = match &mesh.kind {
        MeshKind::Smooth { params, .. } => {
            let rw = log_weights(n);
            CMatrix::from_fn(n, n, |i, j| {
                smooth_double_layer_entry(mesh, z, params, &rw, i, j, adjoint)
            })
        }
        MeshKind::Polygon { .. } => {
            CMatrix::from_fn(n, n, |i, j| polygon_double_layer_entry(mesh, z, i, j, adjoint))
        }
    };
    DenseOperator::new(matrix, mesh.weights.clone())
}

/// Discrete adjoint double layer `K#_z`: `(K# g)(x) = p.v.∫ ∂_{ν_x} E_2(z; x - y) g(y) ds(y)`.
pub fn assemble_kprime(mesh: &BoundaryMesh, z: &SpectralParameter) -> DenseOperator {
    assemble_double(mesh, z, false)
}

/// Discrete double layer `K_z`: `(K g)(x) = p.v.∫ ∂_{ν_y} E_2(z; y - x) g(y) ds(y)`.
pub fn assemble_k(mesh: &BoundaryMesh, z: &SpectralParameter) -> DenseOperator {
    assemble_double(mesh, z, true)
}

/// `σ/2 I + K#_z` with `σ = +1` (interior) or `σ = -1` (exterior).
pub fn neumann_trace_operator(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    interior: bool,
) -> DenseOperator {
    let mut k = assemble_kprime(mesh, z);
    let half = if interior { 0.5 } else { -0.5 };
    k.matrix.add_diagonal(Complex64::new(half, 0.0));
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric_log(x: Point, a: Point, b: Point) -> f64 {
        let m = 20000;
        (0..m)
            .map(|k| {
                let s = (k as f64 + 0.5) / m as f64;
                let y = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                crate::geometry::dist(x, y).ln()
            })
            .sum::<f64>()
            * crate::geometry::dist(a, b)
            / m as f64
    }

    #[test]
    fn segment_integrals_match_quadrature() {
        let (a, b) = ([0.2, -0.1], [1.0, 0.5]);
        for x in [[0.0, 0.0], [0.5, 0.9], [2.0, 1.0], [0.6, 0.3]] {
            assert!((segment_log_integral(x, a, b) - numeric_log(x, a, b)).abs() < 1e-7);
        }
        // Point on the segment itself.
        let mid = [0.6, 0.2];
        assert!((segment_log_integral(mid, a, b) - numeric_log(mid, a, b)).abs() < 1e-3);

        let x = [0.1, 0.7];
        let g = segment_gradient_integral(x, a, b);
        let m = 20000;
        let mut want = [0.0, 0.0];
        let len = crate::geometry::dist(a, b);
        for k in 0..m {
            let s = (k as f64 + 0.5) / m as f64;
            let y = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
            let d = sub(x, y);
            let r2 = dot(d, d);
            want[0] += d[0] / r2 * len / m as f64;
            want[1] += d[1] / r2 * len / m as f64;
        }
        assert!((g[0] - want[0]).abs() < 1e-7 && (g[1] - want[1]).abs() < 1e-7);
    }

    #[test]
    fn log_weights_integrate_fourier_modes() {
        // ∫ ln(4 sin²(τ/2)) cos(mτ) dτ = -2π/m, and 0 for m = 0.
        for n in [16, 17] {
            let w = log_weights(n);
            for m in 0..(n / 2) {
                let got: f64 = (0..n)
                    .map(|j| w[j] * (m as f64 * 2.0 * PI * j as f64 / n as f64).cos())
                    .sum();
                let want = if m == 0 { 0.0 } else { -2.0 * PI / m as f64 };
                assert!((got - want).abs() < 1e-12, "n={n} m={m}: {got} {want}");
            }
        }
    }
}
