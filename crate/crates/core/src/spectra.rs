//! Eigenvalue location by scanning the smallest singular value of the
//! boundary operator along the real axis, and closed-form disk oracles.

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary_ops::{assemble_single_layer, RobinCoupling};
use crate::bvp::LayerOperators;
use crate::geometry::BoundaryMesh;
use crate::kernels::{bessel_j, bessel_j_prime, SpectralParameter};
use crate::linalg::{CMatrix, Lu};
use crate::par;
use crate::{Error, Result};

/// Operator whose singular points are scanned.
#[derive(Debug, Clone)]
pub enum ScanOperator {
    /// `½ I + K#_z + Θ S_z`.
    Robin(RobinCoupling),
    /// `S_z S_{z_ref}^{-1}`, singular at Dirichlet eigenvalues. The reference
    /// factor removes the decay of the singular values of `S_z` with panel
    /// size, which would otherwise hide the dips on graded meshes.
    Dirichlet,
}

/// `S_z` is positive definite for negative `z`, so this reference point is
/// never a singular point.
pub const DIRICHLET_REFERENCE_Z: f64 = -1.0;

/// Scans evaluate `z = 0` at this point instead. On curves of logarithmic
/// capacity one the Laplace single layer annihilates constants, so the
/// operators at exactly `z = 0` differ from their limit `z → 0` and would
/// produce a spurious dip there.
pub const ZERO_SHIFT: f64 = 1e-12;

/// Scanned operator plus any precomputed reference factorization.
pub struct Scanner<'a> {
    mesh: &'a BoundaryMesh,
    op: &'a ScanOperator,
    reference: Option<Lu>,
}

impl<'a> Scanner<'a> {
    pub fn new(mesh: &'a BoundaryMesh, op: &'a ScanOperator) -> Result<Self> {
        let reference = match op {
            ScanOperator::Dirichlet => {
                let z = SpectralParameter::real(DIRICHLET_REFERENCE_Z);
                Some(Lu::checked(&assemble_single_layer(mesh, &z).matrix, z.z)?)
            }
            ScanOperator::Robin(_) => None,
        };
        Ok(Self { mesh, op, reference })
    }

    pub fn matrix(&self, z: f64) -> Result<CMatrix> {
        let z = SpectralParameter::real(if z == 0.0 { ZERO_SHIFT } else { z });
        match (self.op, &self.reference) {
            (ScanOperator::Robin(coupling), _) => {
                LayerOperators::assemble(self.mesh, &z).robin_matrix(coupling)
            }
            (ScanOperator::Dirichlet, Some(lu)) => {
                Ok(lu.right_solve_matrix(&assemble_single_layer(self.mesh, &z).matrix))
            }
            (ScanOperator::Dirichlet, None) => unreachable!("reference factor built in new"),
        }
    }

    /// Smallest singular value of the scanned operator at real `z`.
    pub fn sigma_min(&self, z: f64) -> Result<f64> {
        Ok(self.matrix(z)?.sigma_min())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralDip {
    pub z: f64,
    pub sigma_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumScan {
    pub z: Vec<f64>,
    pub sigma_min: Vec<f64>,
    /// Refined local minima, ordered by `z`.
    pub minima: Vec<SpectralDip>,
}

impl SpectrumScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z,sigma_min\n");
        for (z, s) in self.z.iter().zip(&self.sigma_min) {
            out.push_str(&format!("{},{}\n", crate::report::format_f64(*z), crate::report::format_f64(*s)));
        }
        out
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.minima.iter().map(|d| d.z).collect()
    }
}

pub const MIN_STEPS: usize = 16;
const REFINE_TOL: f64 = 1e-9;

/// Samples `σ_min` at `steps + 1` equispaced points of `[z_min, z_max]` and
/// refines every interior local minimum by Brent's method on the bracket
/// formed by its neighbours.
pub fn spectrum_scan(
    mesh: &BoundaryMesh,
    op: &ScanOperator,
    z_min: f64,
    z_max: f64,
    steps: usize,
) -> Result<SpectrumScan> {
    if !(z_min < z_max) || !z_min.is_finite() || !z_max.is_finite() {
        return Err(Error::Domain(format!("empty scan interval [{z_min}, {z_max}]")));
    }
    if steps < MIN_STEPS {
        return Err(Error::Domain(format!("need at least {MIN_STEPS} steps, got {steps}")));
    }
    let dz = (z_max - z_min) / steps as f64;
    let z: Vec<f64> = (0..=steps).map(|i| z_min + i as f64 * dz).collect();
    let scanner = Scanner::new(mesh, op)?;
    let sigma: Vec<f64> = par::map_range(z.len(), |i| scanner.sigma_min(z[i]))
        .into_iter()
        .collect::<Result<_>>()?;
    let candidates: Vec<usize> = (1..steps)
        .filter(|&i| sigma[i] < sigma[i - 1] && sigma[i] <= sigma[i + 1])
        .collect();
    let minima = par::map_range(candidates.len(), |c| {
        let i = candidates[c];
        brent_minimize(|t| scanner.sigma_min(t), z[i - 1], z[i], z[i + 1], sigma[i])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumScan {
        z,
        sigma_min: sigma,
        minima,
    })
}

/// Brent's parabolic/golden-section minimization on `[a, c]` starting at
/// `b` with `f(b) = fb`.
fn brent_minimize<F>(f: F, a: f64, b: f64, c: f64, fb: f64) -> Result<SpectralDip>
where
    F: Fn(f64) -> Result<f64>,
{
    const GOLD: f64 = 0.381_966_011_250_105_1;
    let (mut lo, mut hi) = (a, c);
    let (mut x, mut w, mut v) = (b, b, b);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut step: f64 = 0.0;
    let mut prev_step: f64 = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let tol = REFINE_TOL * x.abs().max(1.0);
        if (x - mid).abs() <= 2.0 * tol - 0.5 * (hi - lo) {
            break;
        }
        let mut golden = true;
        if prev_step.abs() > tol {
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * prev_step).abs() && p > q * (lo - x) && p < q * (hi - x) {
                prev_step = step;
                step = p / q;
                let u = x + step;
                if u - lo < 2.0 * tol || hi - u < 2.0 * tol {
                    step = if x < mid { tol } else { -tol };
                }
                golden = false;
            }
        }
        if golden {
            prev_step = if x < mid { hi - x } else { lo - x };
            step = GOLD * prev_step;
        }
        let u = if step.abs() >= tol {
            x + step
        } else {
            x + tol.copysign(step)
        };
        let fu = f(u)?;
        if fu <= fx {
            if u < x {
                hi = x;
            } else {
                lo = x;
            }
            (v, fv, w, fw, x, fx) = (w, fw, x, fx, u, fu);
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                (v, fv, w, fw) = (w, fw, u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Ok(SpectralDip { z: x, sigma_min: fx })
}

/// `J_m(√z R) / (√z J_m'(√z R) + θ J_m(√z R))`, the Robin-to-Dirichlet
/// eigenvalue on `e^{imφ}` for a disk of radius `R`.
pub fn rtd_eigenvalue(m: usize, z: Complex64, theta: f64, radius: f64) -> Complex64 {
    let k = SpectralParameter::new(z).sqrt_z;
    let x = k * radius;
    let jm = bessel_j(m, x);
    jm / (k * bessel_j_prime(m, x) + theta * jm)
}

/// Root of `f` in `[lo, hi]` by bisection.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Ok(0.5 * (a + b))
}

/// Zero of `J_m` in `[lo, hi]`.
pub fn bessel_zero_in(m: usize, lo: f64, hi: f64) -> Result<f64> {
    bisect(|x| bessel_j(m, Complex64::new(x, 0.0)).re, lo, hi)
}

/// Disk eigenvalue with its angular order `m` and radial index `k ≥ 1`.
/// Orders `m ≥ 1` are double (`cos mφ`, `sin mφ`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskEigenvalue {
    pub lambda: f64,
    pub m: usize,
    pub k: usize,
}

const ROOT_SCAN_STEP: f64 = 0.02;

/// Roots in `(0, x_max]` of `x J_m'(x) + c J_m(x)`, found by sign changes on
/// a fine grid and bisection.
fn radial_roots(m: usize, c: f64, x_max: f64) -> Result<Vec<f64>> {
    let g = |x: f64| {
        let xc = Complex64::new(x, 0.0);
        (xc * bessel_j_prime(m, xc) + c * bessel_j(m, xc)).re
    };
    let mut roots = Vec::new();
    let steps = (x_max / ROOT_SCAN_STEP).ceil() as usize;
    let mut prev_x = 1e-6;
    let mut prev = g(prev_x);
    for s in 1..=steps {
        let x = (s as f64 * ROOT_SCAN_STEP).min(x_max);
        let cur = g(x);
        if prev == 0.0 {
            roots.push(prev_x);
        } else if prev * cur < 0.0 {
            roots.push(bisect(g, prev_x, x)?);
        }
        prev_x = x;
        prev = cur;
    }
    Ok(roots)
}

fn collect_modes<F>(lambda_max: f64, radius: f64, roots: F) -> Result<Vec<DiskEigenvalue>>
where
    F: Fn(usize, f64) -> Result<Vec<f64>>,
{
    let x_max = radius * lambda_max.max(0.0).sqrt();
    let mut out = Vec::new();
    for m in 0.. {
        // The first positive root of either family exceeds m.
        if m as f64 > x_max + 1.0 {
            break;
        }
        for (i, x) in roots(m, x_max)?.into_iter().enumerate() {
            out.push(DiskEigenvalue {
                lambda: (x / radius).powi(2),
                m,
                k: i + 1,
            });
        }
    }
    out.retain(|e| e.lambda <= lambda_max);
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(out)
}

/// Dirichlet eigenvalues `(j_{m,k}/R)² ≤ lambda_max`.
pub fn dirichlet_eigenvalues(radius: f64, lambda_max: f64) -> Result<Vec<DiskEigenvalue>> {
    check_radius(radius)?;
    collect_modes(lambda_max, radius, |m, x_max| {
        let g = |x: f64| bessel_j(m, Complex64::new(x, 0.0)).re;
        let mut roots = Vec::new();
        let mut prev_x = 1e-6;
        let mut prev = g(prev_x);
        let steps = (x_max / ROOT_SCAN_STEP).ceil() as usize;
        for s in 1..=steps {
            let x = (s as f64 * ROOT_SCAN_STEP).min(x_max);
            let cur = g(x);
            if prev * cur < 0.0 {
                roots.push(bisect(g, prev_x, x)?);
            }
            prev_x = x;
            prev = cur;
        }
        Ok(roots)
    })
}

/// Robin eigenvalues `λ ≤ lambda_max` for constant `θ ≥ 0`: roots of
/// `√λ J_m'(√λ R) + θ J_m(√λ R) = 0`, including `λ = 0` when `θ = 0`.
pub fn robin_eigenvalues(radius: f64, theta: f64, lambda_max: f64) -> Result<Vec<DiskEigenvalue>> {
    check_radius(radius)?;
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::Domain(format!(
            "disk Robin oracle needs a finite θ ≥ 0, got {theta}"
        )));
    }
    let c = theta * radius;
    collect_modes(lambda_max, radius, |m, x_max| {
        let mut roots = radial_roots(m, c, x_max)?;
        if m == 0 && c == 0.0 {
            roots.insert(0, 0.0);
        }
        Ok(roots)
    })
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
    }
    Ok(())
}

/// Distinct values of a sorted eigenvalue list (double modes collapse).
pub fn distinct(eigs: &[DiskEigenvalue], tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for e in eigs {
        if out.last().is_none_or(|&l| (e.lambda - l).abs() > tol) {
            out.push(e.lambda);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleQuery {
    DirichletEigen { lambda_max: f64 },
    RobinEigen { theta: f64, lambda_max: f64 },
    RtdEigenvalue { m: usize, z: Complex64, theta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OracleValue {
    Eigenvalues(Vec<DiskEigenvalue>),
    Complex { re: f64, im: f64 },
}

/// Dispatches one disk oracle query.
pub fn disk_oracle(radius: f64, query: &OracleQuery) -> Result<OracleValue> {
    Ok(match *query {
        OracleQuery::DirichletEigen { lambda_max } => {
            OracleValue::Eigenvalues(dirichlet_eigenvalues(radius, lambda_max)?)
        }
        OracleQuery::RobinEigen { theta, lambda_max } => {
            OracleValue::Eigenvalues(robin_eigenvalues(radius, theta, lambda_max)?)
        }
        OracleQuery::RtdEigenvalue { m, z, theta } => {
            check_radius(radius)?;
            let v = rtd_eigenvalue(m, z, theta, radius);
            OracleValue::Complex { re: v.re, im: v.im }
        }
    })
}
