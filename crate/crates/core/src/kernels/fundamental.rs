//! Fundamental solution `E_n(z; x)` of `(-Δ - z)` in `R^n` and its
//! derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::special::{hankel1, hankel1_01, sqrt_upper, EULER_GAMMA};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spectral parameter `z` together with its upper-half-plane square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub z: Complex64,
    pub sqrt_z: Complex64,
}

impl SpectralParameter {
    pub fn new(z: Complex64) -> Self {
        Self {
            z,
            sqrt_z: sqrt_upper(z),
        }
    }

    pub fn real(z: f64) -> Self {
        Self::new(Complex64::new(z, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.z.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.z == Complex64::new(0.0, 0.0)
    }
}

impl From<Complex64> for SpectralParameter {
    fn from(z: Complex64) -> Self {
        Self::new(z)
    }
}

/// Value and (optionally) first and second derivatives of `E_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub gradient: Option<Vec<Complex64>>,
    pub hessian: Option<Vec<Vec<Complex64>>>,
}

fn norm(x: &[f64]) -> Result<f64> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Domain(format!(
            "fundamental solution evaluated at |x| = {r}"
        )));
    }
    Ok(r)
}

/// Surface area of the unit sphere in `R^n`, `2π^{n/2}/Γ(n/2)`.
fn sphere_area(n: usize) -> f64 {
    let sqrt_pi = PI.sqrt();
    let gamma_half_n = match n {
        2 => 1.0,
        3 => 0.5 * sqrt_pi,
        4 => 1.0,
        5 => 0.75 * sqrt_pi,
        6 => 2.0,
        7 => 1.875 * sqrt_pi,
        8 => 6.0,
        9 => 6.5625 * sqrt_pi,
        _ => unreachable!("dimension {n} out of range"),
    };
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half_n
}

/// `E_n(z; r)` for `2 ≤ n ≤ 9`, radial form.
pub(crate) fn radial_value(n: usize, z: &SpectralParameter, r: f64) -> Result<Complex64> {
    if z.is_zero() {
        return Ok(if n == 2 {
            Complex64::new(-r.ln() / (2.0 * PI), 0.0)
        } else {
            let p = r.powi(2 - n as i32) / ((n - 2) as f64 * sphere_area(n));
            Complex64::new(p, 0.0)
        });
    }
    let k = z.sqrt_z;
    let order = (n as f64 - 2.0) / 2.0;
    // (i/4) (k / (2π r))^{(n-2)/2} H_{(n-2)/2}(k r)
    let scale = if n == 2 {
        Complex64::new(1.0, 0.0)
    } else {
        (k / (2.0 * PI * r)).powf(order)
    };
    Ok(0.25 * I * scale * hankel1(order, k * r)?)
}

/// Fundamental solution `E_n(z; x)` for `n ∈ {2, 3, 4, 5}`.
///
/// `x.len()` is not required to equal `n`: only `|x|` enters.
pub fn fundamental_solution(n: usize, z: &SpectralParameter, x: &[f64]) -> Result<Complex64> {
    if !(2..=5).contains(&n) {
        return Err(Error::Domain(format!("dimension {n} not in 2..=5")));
    }
    radial_value(n, z, norm(x)?)
}

/// `E_3(z; x) = e^{i√z|x|}/(4π|x|)`, the exponential closed form.
pub fn e3_closed_form(z: &SpectralParameter, x: &[f64]) -> Result<Complex64> {
    let r = norm(x)?;
    Ok((I * z.sqrt_z * r).exp() / (4.0 * PI * r))
}

/// `dE_n/dr` for `n ∈ {2, 3}` by direct differentiation.
fn radial_derivative(n: usize, z: &SpectralParameter, r: f64) -> Result<Complex64> {
    match n {
        2 => {
            if z.is_zero() {
                Ok(Complex64::new(-1.0 / (2.0 * PI * r), 0.0))
            } else {
                let k = z.sqrt_z;
                let (_, h1) = hankel1_01(k * r)?;
                Ok(-0.25 * I * k * h1)
            }
        }
        3 => {
            let k = z.sqrt_z;
            Ok((I * k * r).exp() * (I * k * r - 1.0) / (4.0 * PI * r * r))
        }
        _ => Err(Error::Domain(format!(
            "derivatives are available for n = 2, 3 only (got {n})"
        ))),
    }
}

/// Gradient of `E_n` for `n ∈ {2, 3}`; `x` must have length `n`.
pub fn fundamental_gradient(n: usize, z: &SpectralParameter, x: &[f64]) -> Result<Vec<Complex64>> {
    check_len(n, x)?;
    let r = norm(x)?;
    let d = radial_derivative(n, z, r)?;
    Ok(x.iter().map(|&xi| d * (xi / r)).collect())
}

/// Hessian of `E_n` for `n ∈ {2, 3}` via
/// `∂_j∂_k E_n = 4π² x_j x_k E_{n+4} - 2π δ_{jk} E_{n+2}`.
pub fn fundamental_hessian(
    n: usize,
    z: &SpectralParameter,
    x: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    check_len(n, x)?;
    let r = norm(x)?;
    let e2 = radial_value(n + 2, z, r)?;
    let e4 = radial_value(n + 4, z, r)?;
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for k in 0..=j {
            let mut v = 4.0 * PI * PI * x[j] * x[k] * e4;
            if j == k {
                v -= 2.0 * PI * e2;
            }
            h[j][k] = v;
            h[k][j] = v;
        }
    }
    Ok(h)
}

/// Value plus requested derivatives (`order` 0, 1 or 2).
pub fn kernel_value(n: usize, z: &SpectralParameter, x: &[f64], order: u8) -> Result<KernelValue> {
    let value = fundamental_solution(n, z, x)?;
    let gradient = if order >= 1 {
        Some(fundamental_gradient(n, z, x)?)
    } else {
        None
    };
    let hessian = if order >= 2 {
        Some(fundamental_hessian(n, z, x)?)
    } else {
        None
    };
    Ok(KernelValue {
        value,
        gradient,
        hessian,
    })
}

fn check_len(n: usize, x: &[f64]) -> Result<()> {
    if !(n == 2 || n == 3) {
        return Err(Error::Domain(format!(
            "derivatives are available for n = 2, 3 only (got {n})"
        )));
    }
    if x.len() != n {
        return Err(Error::Domain(format!(
            "point has {} coordinates, expected {n}",
            x.len()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Two-dimensional fast paths used by the boundary and volume operators.

/// Below this `|√z r|` the smooth remainder is summed as a series.
const REMAINDER_SERIES_RADIUS: f64 = 2.0;

/// `E_2(z; r)` for `r > 0`. Arguments are trusted.
#[inline]
pub fn e2(z: &SpectralParameter, r: f64) -> Complex64 {
    if z.is_zero() {
        return Complex64::new(-r.ln() / (2.0 * PI), 0.0);
    }
    match hankel1_01(z.sqrt_z * r) {
        Ok((h0, _)) => 0.25 * I * h0,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

/// `(E_2, dE_2/dr)` for `r > 0`.
#[inline]
pub fn e2_with_derivative(z: &SpectralParameter, r: f64) -> (Complex64, Complex64) {
    if z.is_zero() {
        return (
            Complex64::new(-r.ln() / (2.0 * PI), 0.0),
            Complex64::new(-1.0 / (2.0 * PI * r), 0.0),
        );
    }
    let k = z.sqrt_z;
    match hankel1_01(k * r) {
        Ok((h0, h1)) => (0.25 * I * h0, -0.25 * I * k * h1),
        Err(_) => {
            let nan = Complex64::new(f64::NAN, f64::NAN);
            (nan, nan)
        }
    }
}

/// Smooth remainder `R_z(r) = E_2(z; r) + ln(r)/(2π)` and its derivative
/// `R_z'(r)`, valid for `r ≥ 0` (both vanish identically when `z = 0`).
pub fn e2_remainder(z: &SpectralParameter, r: f64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    if z.is_zero() {
        return (zero, zero);
    }
    let k = z.sqrt_z;
    if (k * r).norm() > REMAINDER_SERIES_RADIUS {
        let (e, de) = e2_with_derivative(z, r);
        return (
            e + r.ln() / (2.0 * PI),
            de + 1.0 / (2.0 * PI * r),
        );
    }
    // E_2 = (i/4)J_0 - (1/2π)[ln r + ln(k/2) + γ] J_0 + (1/2π) Σ_{k≥1} H_k a_k,
    // a_k = (-(kr/2)²)^k/(k!)².
    let q = -(k * r * 0.5) * (k * r * 0.5);
    let mut a = Complex64::new(1.0, 0.0);
    let mut j0 = a;
    let mut harm_sum = zero;
    // r d/dr of the two sums: Σ 2k a_k and Σ 2k H_k a_k.
    let mut dj0 = zero;
    let mut dharm = zero;
    let mut harmonic = 0.0;
    for m in 1..40 {
        let mf = m as f64;
        a *= q / (mf * mf);
        harmonic += 1.0 / mf;
        j0 += a;
        harm_sum += a * harmonic;
        dj0 += a * (2.0 * mf);
        dharm += a * (2.0 * mf * harmonic);
        if a.norm() * (1.0 + harmonic) * 2.0 * mf < 1e-18 {
            break;
        }
    }
    let c = 0.25 * I - ((k * 0.5).ln() + EULER_GAMMA) / (2.0 * PI);
    let j0m1 = j0 - 1.0;
    let value = if r > 0.0 {
        c * j0 + harm_sum / (2.0 * PI) - r.ln() * j0m1 / (2.0 * PI)
    } else {
        c
    };
    let deriv = if r > 0.0 {
        // dj0/dr = dj0/r, and d[ln r (J0 - 1)]/dr = (dj0 ln r + J0 - 1)/r.
        (c * dj0 + dharm / (2.0 * PI) - (dj0 * r.ln() + j0m1) / (2.0 * PI)) / r
    } else {
        zero
    };
    (value, deriv)
}

/// Radial profile `g = E_n(z; r) - E_n(0; r)` with `g'` and `g''`, for
/// `n ∈ {2, 3}`, evaluated without cancellation as `r → 0`.
fn difference_profile(n: usize, z: &SpectralParameter, r: f64) -> (Complex64, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    if z.is_zero() {
        return (zero, zero, zero);
    }
    let k = z.sqrt_z;
    if n == 2 {
        let (g, dg) = e2_remainder(z, r);
        // Δg = g'' + g'/r = -z E_2(z; r) away from the origin.
        return (g, dg, -z.z * e2(z, r) - dg / r);
    }
    let w = I * k * r;
    if w.norm() >= 0.5 {
        let ew = w.exp();
        let num = ew * (w - 1.0) + 1.0;
        let g = (ew - 1.0) / (4.0 * PI * r);
        let dg = num / (4.0 * PI * r * r);
        let d2g = (w * w * ew - 2.0 * num) / (4.0 * PI * r * r * r);
        return (g, dg, d2g);
    }
    // (e^w - 1)/r = ik Σ_{m≥1} w^{m-1}/m!, and its r-derivatives termwise.
    let ik = I * k;
    let (mut g, mut dg, mut d2g) = (zero, zero, zero);
    let mut wp = Complex64::new(1.0, 0.0); // w^{m-1}
    let mut fact = 1.0; // m!
    for m in 1..30 {
        let mf = m as f64;
        fact *= mf;
        g += wp / fact;
        if m >= 2 {
            dg += (mf - 1.0) * wp / (w * fact) * ik;
        }
        if m >= 3 {
            d2g += (mf - 1.0) * (mf - 2.0) * wp / (w * w * fact) * ik * ik;
        }
        wp *= w;
        if wp.norm() / fact < 1e-18 {
            break;
        }
    }
    let c = ik / (4.0 * PI);
    (c * g, c * dg, c * d2g)
}

/// `E_n(z; x) - E_n(0; x)` and its derivatives up to `order` for
/// `n ∈ {2, 3}`, computed stably for small `|x|`.
pub fn kernel_difference(n: usize, z: &SpectralParameter, x: &[f64], order: u8) -> Result<KernelValue> {
    check_len(n, x)?;
    let r = norm(x)?;
    let (g, dg, d2g) = difference_profile(n, z, r);
    let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
    let gradient = (order >= 1).then(|| unit.iter().map(|&u| dg * u).collect());
    let hessian = (order >= 2).then(|| {
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|l| {
                        let delta = if j == l { 1.0 } else { 0.0 };
                        d2g * unit[j] * unit[l] + dg / r * (delta - unit[j] * unit[l])
                    })
                    .collect()
            })
            .collect()
    });
    Ok(KernelValue {
        value: g,
        gradient,
        hessian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laplace_values() {
        let z0 = SpectralParameter::real(0.0);
        let e = fundamental_solution(3, &z0, &[2.0, 0.0, 0.0]).unwrap();
        assert!((e - c(1.0 / (8.0 * PI), 0.0)).norm() < 1e-16);
        let e = fundamental_solution(2, &z0, &[1.0, 0.0]).unwrap();
        assert_eq!(e, c(0.0, 0.0));
        assert!(fundamental_solution(2, &z0, &[0.0, 0.0]).is_err());
        assert!(fundamental_solution(6, &z0, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn e3_at_z4() {
        let z = SpectralParameter::real(4.0);
        let e = fundamental_solution(3, &z, &[1.0, 0.0, 0.0]).unwrap();
        let want = c(-0.033115913044266365, 0.07235959011002412);
        assert!((e - want).norm() < 1e-15);
        assert!((e - e3_closed_form(&z, &[0.0, 1.0, 0.0]).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn gradients_of_laplace_kernels() {
        let z0 = SpectralParameter::real(0.0);
        let g = fundamental_gradient(3, &z0, &[1.0, 0.0, 0.0]).unwrap();
        assert!((g[0] + 1.0 / (4.0 * PI)).norm() < 1e-16 && g[1].norm() == 0.0);
        let g = fundamental_gradient(2, &z0, &[1.0, 0.0]).unwrap();
        assert!((g[0] + 1.0 / (2.0 * PI)).norm() < 1e-16 && g[1].norm() == 0.0);
        let h = fundamental_hessian(2, &z0, &[1.0, 0.0]).unwrap();
        assert!((h[0][0] - 1.0 / (2.0 * PI)).norm() < 1e-15);
        assert!((h[1][1] + 1.0 / (2.0 * PI)).norm() < 1e-15);
        assert_eq!(h[0][1], h[1][0]);
    }

    #[test]
    fn recursion_and_hessian_trace() {
        let z = SpectralParameter::new(c(1.0, 1.0));
        let x = [0.3, -0.4];
        let g = fundamental_gradient(2, &z, &x).unwrap();
        let e4 = fundamental_solution(4, &z, &x).unwrap();
        assert!((g[0] + 2.0 * PI * 0.3 * e4).norm() < 1e-10);

        let z = SpectralParameter::new(c(2.0, 1.0));
        let x = [0.2, 0.1, -0.3];
        let h = fundamental_hessian(3, &z, &x).unwrap();
        let e = fundamental_solution(3, &z, &x).unwrap();
        let tr = h[0][0] + h[1][1] + h[2][2];
        assert!((tr + z.z * e).norm() <= 1e-8 * (z.z * e).norm());
    }

    #[test]
    fn remainder_series_matches_direct() {
        for zv in [c(2.0, 1.0), c(-5.0, 0.0), c(30.0, 0.0), c(2.0, -1.0)] {
            let z = SpectralParameter::new(zv);
            for r in [0.05, 0.2, 0.3] {
                let (rs, drs) = e2_remainder(&z, r);
                let (e, de) = e2_with_derivative(&z, r);
                assert!((rs - (e + r.ln() / (2.0 * PI))).norm() < 1e-12, "z={zv} r={r}");
                assert!((drs - (de + 1.0 / (2.0 * PI * r))).norm() < 1e-10, "z={zv} r={r}");
            }
            let (r0, _) = e2_remainder(&z, 0.0);
            let (r_small, _) = e2_remainder(&z, 1e-9);
            assert!((r0 - r_small).norm() < 1e-12);
        }
    }

    #[test]
    fn difference_matches_direct_at_moderate_r() {
        let z = SpectralParameter::new(c(2.0, 1.0));
        let zero = SpectralParameter::real(0.0);
        for n in [2usize, 3] {
            for r in [0.05, 0.2, 0.9] {
                let x: Vec<f64> = if n == 2 { vec![0.6 * r, -0.8 * r] } else { vec![0.6 * r, 0.0, -0.8 * r] };
                let d = kernel_difference(n, &z, &x, 2).unwrap();
                let a = kernel_value(n, &z, &x, 2).unwrap();
                let b = kernel_value(n, &zero, &x, 2).unwrap();
                assert!((d.value - (a.value - b.value)).norm() < 1e-10);
                let (ha, hb, hd) = (a.hessian.unwrap(), b.hessian.unwrap(), d.hessian.unwrap());
                let (ga, gb, gd) = (a.gradient.unwrap(), b.gradient.unwrap(), d.gradient.unwrap());
                for j in 0..n {
                    assert!((gd[j] - (ga[j] - gb[j])).norm() < 1e-9, "n={n} r={r}");
                    for l in 0..n {
                        let want = ha[j][l] - hb[j][l];
                        assert!((hd[j][l] - want).norm() < 1e-8 * (1.0 + want.norm()), "n={n} r={r}");
                    }
                }
            }
        }
    }
}
