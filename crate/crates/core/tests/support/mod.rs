//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use krein_bem::geometry::{BoundaryMesh, DomainSpec, Point};
use krein_bem::C64;

pub fn disk_mesh(n: usize) -> BoundaryMesh {
    DomainSpec::disk(1.0, n).build_mesh().unwrap()
}

pub fn z(re: f64, im: f64) -> krein_bem::kernels::SpectralParameter {
    krein_bem::kernels::SpectralParameter::new(C64::new(re, im))
}

/// Twelve interior points with `0.1 ≤ |t| ≤ 0.5` on a spiral.
pub fn inner_targets() -> Vec<Point> {
    (0..12)
        .map(|i| {
            let a = 0.7 * i as f64;
            let r = 0.1 + 0.4 * i as f64 / 11.0;
            [r * a.cos(), r * a.sin()]
        })
        .collect()
}

pub fn max_rel(a: &[C64], b: &[C64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

#[derive(Clone, Copy)]
pub enum Edge {
    Dirichlet,
    /// `∂_r u + θ u = 0`.
    Robin(f64),
}

/// Finite-volume solution of `(-Δ - z) u = f` on the disk of radius `radius`
/// on an `nr × nphi` polar grid (cell-centered in `r`). Each discrete angular
/// mode leads to a tridiagonal system in `r`.
pub struct PolarFd {
    radius: f64,
    nr: usize,
    nphi: usize,
    u: Vec<f64>,
}

impl PolarFd {
    pub fn solve(radius: f64, z: f64, edge: Edge, nr: usize, nphi: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let dr = radius / nr as f64;
        let dphi = 2.0 * PI / nphi as f64;
        let r = |i: usize| (i as f64 + 0.5) * dr;
        let phi = |j: usize| j as f64 * dphi;
        let samples: Vec<Vec<f64>> = (0..nr)
            .map(|i| (0..nphi).map(|j| f(r(i) * phi(j).cos(), r(i) * phi(j).sin())).collect())
            .collect();
        let ghost = match edge {
            Edge::Dirichlet => -1.0,
            Edge::Robin(t) => (1.0 - 0.5 * t * dr) / (1.0 + 0.5 * t * dr),
        };
        let mut u = vec![0.0; nr * nphi];
        for m in 0..nphi {
            let lam = (2.0 * (m as f64 * dphi).cos() - 2.0) / (dphi * dphi);
            let rhs: Vec<C64> = samples
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| C64::from_polar(*v, -(m as f64) * phi(j)))
                        .sum::<C64>()
                        / nphi as f64
                })
                .collect();
            // a_i u_{i-1} + b_i u_i + c_i u_{i+1} = rhs_i
            let mut a = vec![0.0; nr];
            let mut b = vec![0.0; nr];
            let mut c = vec![0.0; nr];
            for i in 0..nr {
                let ri = r(i);
                let lo = if i == 0 { 0.0 } else { ri - 0.5 * dr };
                let hi = ri + 0.5 * dr;
                let s = 1.0 / (ri * dr * dr);
                a[i] = -lo * s;
                c[i] = -hi * s;
                b[i] = (lo + hi) * s - lam / (ri * ri) - z;
                if i == nr - 1 {
                    b[i] += c[i] * ghost;
                    c[i] = 0.0;
                }
            }
            let sol = thomas(&a, &b, &c, &rhs);
            for i in 0..nr {
                for j in 0..nphi {
                    u[i * nphi + j] += (sol[i] * C64::from_polar(1.0, m as f64 * phi(j))).re;
                }
            }
        }
        Self { radius, nr, nphi, u }
    }

    /// Bilinear interpolation in `(r, φ)`.
    pub fn eval(&self, p: Point) -> f64 {
        let dr = self.radius / self.nr as f64;
        let dphi = 2.0 * PI / self.nphi as f64;
        let rr = p[0].hypot(p[1]);
        let ph = p[1].atan2(p[0]).rem_euclid(2.0 * PI);
        let x = (rr / dr - 0.5).clamp(0.0, (self.nr - 1) as f64 - 1e-12);
        let i = x.floor() as usize;
        let fx = x - i as f64;
        let y = ph / dphi;
        let j = y.floor() as usize % self.nphi;
        let fy = y - y.floor();
        let j1 = (j + 1) % self.nphi;
        let at = |i: usize, j: usize| self.u[i * self.nphi + j];
        let i1 = (i + 1).min(self.nr - 1);
        (1.0 - fx) * ((1.0 - fy) * at(i, j) + fy * at(i, j1)) + fx * ((1.0 - fy) * at(i1, j) + fy * at(i1, j1))
    }
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &[C64]) -> Vec<C64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![C64::new(0.0, 0.0); n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= cp[i] * next;
    }
    x
}

/// Midpoint rule in `(r, φ)` on the disk of `radius`: points and weights.
pub fn polar_quadrature(radius: f64, nr: usize, nphi: usize) -> (Vec<Point>, Vec<f64>) {
    let dr = radius / nr as f64;
    let dphi = 2.0 * PI / nphi as f64;
    let mut pts = Vec::with_capacity(nr * nphi);
    let mut w = Vec::with_capacity(nr * nphi);
    for i in 0..nr {
        let r = (i as f64 + 0.5) * dr;
        for j in 0..nphi {
            let t = j as f64 * dphi;
            pts.push([r * t.cos(), r * t.sin()]);
            w.push(r * dr * dphi);
        }
    }
    (pts, w)
}

/// `(J_0, J_1, Y_0, Y_1)(x)` for real `x > 0` from 200 ascending-series terms.
pub fn bessel_series_oracle(x: f64) -> (f64, f64, f64, f64) {
    const GAMMA: f64 = 0.577_215_664_901_532_9;
    let q = x * x / 4.0;
    let (mut j0, mut j1, mut s0, mut s1) = (0.0, 0.0, 0.0, 0.0);
    // t_k = (-q)^k / (k!)^2, u_k = (-q)^k / (k! (k+1)!), H_k harmonic numbers.
    let (mut t, mut u, mut hk) = (1.0, 1.0, 0.0);
    for k in 0..200 {
        let kf = k as f64;
        if k > 0 {
            t *= -q / (kf * kf);
            u *= -q / (kf * (kf + 1.0));
            hk += 1.0 / kf;
        }
        j0 += t;
        j1 += u;
        s0 += t * hk;
        s1 += u * (2.0 * hk + 1.0 / (kf + 1.0));
    }
    j1 *= x / 2.0;
    let log = (x / 2.0).ln() + GAMMA;
    let y0 = 2.0 / PI * (log * j0 - s0);
    let y1 = 2.0 / PI * (log * j1) - 2.0 / (PI * x) - x / (2.0 * PI) * s1;
    (j0, j1, y0, y1)
}

/// One line of the small-`|x|` kernel difference estimates.
#[derive(Debug, Clone)]
pub struct EnvelopeLine {
    pub name: String,
    /// Single constant `C = max_k q(r_k)/env(r_k)` over `r_k = 10^{-k}`, `k = 1..8`.
    pub fitted: f64,
    /// Spread of the ratio over `k = 5..8`; small when the ratio has levelled off.
    pub spread: f64,
}

impl EnvelopeLine {
    /// The ratio to the envelope has settled, so `C` bounds it as `r -> 0`.
    pub fn holds(&self) -> bool {
        self.fitted.is_finite() && self.spread <= 0.1 * self.fitted
    }
}

/// Ratios `q/env` at `r = 10^{-k}`, `k = 1..8`, for `E_n(z) - E_n(0)`.
/// Lines: value, gradient, Hessian; `hessian_env` is the Hessian envelope.
pub fn difference_ratios(
    n: usize,
    z: &krein_bem::kernels::SpectralParameter,
    hessian_env: impl Fn(f64) -> f64,
) -> Vec<[f64; 3]> {
    use krein_bem::kernels::kernel_difference;
    (1..=8)
        .map(|k| {
            let r = 10f64.powi(-k);
            let x: Vec<f64> = if n == 2 {
                vec![0.6 * r, -0.8 * r]
            } else {
                vec![0.6 * r, 0.0, -0.8 * r]
            };
            let d = kernel_difference(n, z, &x, 2).unwrap();
            let g = d.gradient.unwrap().iter().map(|v| v.norm()).fold(0.0, f64::max);
            let h = d
                .hessian
                .unwrap()
                .iter()
                .flatten()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            [d.value.norm(), g, h / hessian_env(r)]
        })
        .collect()
}

pub fn envelope_line(name: String, ratios: &[[f64; 3]], line: usize) -> EnvelopeLine {
    let vals: Vec<f64> = ratios.iter().map(|r| r[line]).collect();
    let tail = &vals[4..];
    let hi = tail.iter().copied().fold(f64::MIN, f64::max);
    let lo = tail.iter().copied().fold(f64::MAX, f64::min);
    EnvelopeLine {
        name,
        fitted: vals.iter().copied().fold(0.0, f64::max),
        spread: hi - lo,
    }
}

/// Value and gradient differences bounded; Hessian difference bounded by
/// `C(|ln r| + 1)` for n = 2 and `C(1/r + 1)` for n = 3.
pub fn kernel_envelopes(z: &krein_bem::kernels::SpectralParameter) -> Vec<EnvelopeLine> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let ratios = difference_ratios(n, z, |r| if n == 2 { r.ln().abs() + 1.0 } else { 1.0 / r + 1.0 });
        for (line, name) in ["value", "gradient", "hessian"].iter().enumerate() {
            out.push(envelope_line(format!("n={n} {name}"), &ratios, line));
        }
    }
    out
}
