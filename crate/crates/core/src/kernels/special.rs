//! Complex-argument Bessel and Hankel functions of integer and half-integer
//! order, restricted to the closed upper half-plane.
//!
//! Small arguments (`|ζ| ≤ 12`) use the ascending series of `J_0, J_1,
//! Y_0, Y_1`; larger arguments use the Hankel asymptotic expansion, summed
//! until the terms stop decreasing. Higher integer orders of `H^{(1)}` come
//! from the (stable) upward recurrence, half-integer orders from the
//! spherical Hankel closed forms.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Radius below which the ascending series is used.
pub const SERIES_RADIUS: f64 = 12.0;

/// Arguments with imaginary part below this are rejected.
const IM_TOLERANCE: f64 = -1e-12;

const SERIES_MAX_TERMS: usize = 90;
const ASYMPTOTIC_MAX_TERMS: usize = 30;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square root with nonnegative imaginary part.
///
/// For `z` on the positive real axis this is the ordinary positive root
/// (limit from the upper half-plane).
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    let w = z.sqrt();
    if w.im < 0.0 {
        -w
    } else {
        w
    }
}

/// Digamma function for real `x > 0`.
pub fn digamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 20.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    // Bernoulli tail B_{2k} / (2k x^{2k}).
    let tail = x2
        * (1.0 / 12.0
            - x2 * (1.0 / 120.0
                - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 * (1.0 / 132.0)))));
    acc + x.ln() - 0.5 / x - tail
}

fn check_arg(zeta: Complex64) -> Result<()> {
    if !(zeta.re.is_finite() && zeta.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {zeta}")));
    }
    if zeta == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Bessel function of the second kind at 0".into()));
    }
    if zeta.im < IM_TOLERANCE {
        return Err(Error::Domain(format!(
            "argument {zeta} lies in the lower half-plane"
        )));
    }
    Ok(())
}

/// `J_0, J_1, Y_0, Y_1` at one argument.
#[derive(Debug, Clone, Copy)]
pub struct BesselPair {
    pub j0: Complex64,
    pub j1: Complex64,
    pub y0: Complex64,
    pub y1: Complex64,
}

impl BesselPair {
    pub fn h0(&self) -> Complex64 {
        self.j0 + I * self.y0
    }

    pub fn h1(&self) -> Complex64 {
        self.j1 + I * self.y1
    }
}

/// Joint evaluation of `J_0, J_1, Y_0, Y_1`.
pub fn bessel_01(zeta: Complex64) -> Result<BesselPair> {
    check_arg(zeta)?;
    Ok(if zeta.norm() <= SERIES_RADIUS {
        series_01(zeta)
    } else {
        asymptotic_01(zeta)
    })
}

fn series_01(zeta: Complex64) -> BesselPair {
    let half = zeta * 0.5;
    let q = -half * half; // -(ζ/2)²
    let log_term = half.ln() + EULER_GAMMA;

    // a_k = (-ζ²/4)^k / (k!)², b_k = (-ζ²/4)^k / (k!(k+1)!)
    let mut a = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, 0.0);
    let mut j0 = a;
    let mut j1s = b;
    let mut y0s = Complex64::new(0.0, 0.0);
    // Σ (H_k + H_{k+1}) b_k, with H_0 = 0, H_1 = 1.
    let mut y1s = b;
    let mut harmonic = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        a *= q / (kf * kf);
        b *= q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let next_harmonic = harmonic + 1.0 / (kf + 1.0);
        j0 += a;
        j1s += b;
        y0s += a * harmonic;
        y1s += b * (harmonic + next_harmonic);
        let scale = j0.norm().max(j1s.norm()).max(y0s.norm()).max(1e-300);
        if a.norm() * (1.0 + harmonic) < 1e-17 * scale
            && b.norm() * (1.0 + next_harmonic) < 1e-17 * scale
        {
            break;
        }
    }
    let j1 = half * j1s;
    // Y_0 = (2/π)[ln(ζ/2) + γ] J_0 - (2/π) Σ H_k a_k
    let y0 = FRAC_2_PI * (log_term * j0 - y0s);
    // Y_1 = (2/π) ln(ζ/2) J_1 - 2/(πζ) - (ζ/2)/π Σ [ψ(k+1)+ψ(k+2)] b_k,
    // ψ(k+1) + ψ(k+2) = -2γ + H_k + H_{k+1}.
    let psi_sum = y1s - 2.0 * EULER_GAMMA * j1s;
    let y1 = FRAC_2_PI * half.ln() * j1 - FRAC_2_PI / zeta - half * psi_sum / PI;
    BesselPair { j0, j1, y0, y1 }
}

/// Sums `Σ_k (±i)^k a_k(ν)/ζ^k` with `a_k(ν) = Π(4ν² - (2j-1)²)/(k! 8^k)`,
/// stopping when terms stop decreasing.
fn asymptotic_sum(nu: f64, zeta: Complex64, sign: f64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let step = Complex64::new(0.0, sign) / (8.0 * zeta);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..ASYMPTOTIC_MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = term * step * ((mu - odd * odd) / k as f64);
        let size = next.norm();
        if size >= last || size == 0.0 {
            break;
        }
        sum += next;
        term = next;
        last = size;
        if size < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn hankel_asymptotic(nu: f64, zeta: Complex64, kind: f64) -> Complex64 {
    let pre = (Complex64::new(FRAC_2_PI, 0.0) / zeta).sqrt();
    let phase = (zeta - nu * FRAC_PI_2 - FRAC_PI_4) * Complex64::new(0.0, kind);
    pre * phase.exp() * asymptotic_sum(nu, zeta, kind)
}

fn asymptotic_01(zeta: Complex64) -> BesselPair {
    let h10 = hankel_asymptotic(0.0, zeta, 1.0);
    let h11 = hankel_asymptotic(1.0, zeta, 1.0);
    let h20 = hankel_asymptotic(0.0, zeta, -1.0);
    let h21 = hankel_asymptotic(1.0, zeta, -1.0);
    BesselPair {
        j0: 0.5 * (h10 + h20),
        j1: 0.5 * (h11 + h21),
        y0: (h10 - h20) / (2.0 * I),
        y1: (h11 - h21) / (2.0 * I),
    }
}

/// `H^{(1)}_0` and `H^{(1)}_1` at one argument.
pub fn hankel1_01(zeta: Complex64) -> Result<(Complex64, Complex64)> {
    check_arg(zeta)?;
    if zeta.norm() <= SERIES_RADIUS {
        let p = series_01(zeta);
        Ok((p.h0(), p.h1()))
    } else {
        Ok((
            hankel_asymptotic(0.0, zeta, 1.0),
            hankel_asymptotic(1.0, zeta, 1.0),
        ))
    }
}

/// Hankel function of the first kind `H^{(1)}_ν(ζ)`.
///
/// `nu` must be a nonnegative multiple of `1/2`. Integer orders above one are
/// obtained by upward recurrence, half-integer orders from
/// `H_{l+1/2}(ζ) = √(2ζ/π) h_l(ζ)`.
pub fn hankel1(nu: f64, zeta: Complex64) -> Result<Complex64> {
    let twice = 2.0 * nu;
    if !(nu >= 0.0) || twice.fract() != 0.0 || twice > 200.0 {
        return Err(Error::Domain(format!(
            "unsupported Hankel order {nu} (nonnegative multiples of 1/2 only)"
        )));
    }
    check_arg(zeta)?;
    let twice = twice as usize;
    if twice % 2 == 1 {
        return Ok(hankel1_half(twice / 2, zeta));
    }
    let m = twice / 2;
    let (h0, h1) = hankel1_01(zeta)?;
    Ok(match m {
        0 => h0,
        1 => h1,
        _ => {
            let (mut prev, mut cur) = (h0, h1);
            for k in 1..m {
                let next = (2.0 * k as f64) / zeta * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    })
}

/// `H^{(1)}_{l+1/2}(ζ)` in closed form.
fn hankel1_half(l: usize, zeta: Complex64) -> Complex64 {
    // h_l(ζ) = (-i)^{l+1} e^{iζ}/ζ Σ_{k=0}^{l} i^k (l+k)! / (k!(l-k)! (2ζ)^k)
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coeff = 1.0; // (l+k)!/(k!(l-k)!)
    let mut ipow = Complex64::new(1.0, 0.0);
    let mut zpow = Complex64::new(1.0, 0.0);
    for k in 0..=l {
        if k > 0 {
            let kf = k as f64;
            coeff *= ((l + k) as f64) * ((l - k + 1) as f64) / kf;
            ipow *= I;
            zpow *= 2.0 * zeta;
        }
        sum += ipow * coeff / zpow;
    }
    let phase = (-I).powu(l as u32 + 1);
    let spherical = phase * (I * zeta).exp() / zeta * sum;
    (2.0 * zeta / PI).sqrt() * spherical
}

/// Bessel function of the first kind `J_m(ζ)` for integer `m ≥ 0` and any
/// complex `ζ` (the series branch is entire).
pub fn bessel_j(m: usize, zeta: Complex64) -> Complex64 {
    let r = zeta.norm();
    if r == 0.0 {
        return if m == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    if r <= SERIES_RADIUS || (m as f64) >= r || zeta.im < IM_TOLERANCE {
        return bessel_j_series(m, zeta);
    }
    let p = asymptotic_01(zeta);
    match m {
        0 => p.j0,
        1 => p.j1,
        _ => {
            let (mut prev, mut cur) = (p.j0, p.j1);
            for k in 1..m {
                let next = (2.0 * k as f64) / zeta * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn bessel_j_series(m: usize, zeta: Complex64) -> Complex64 {
    let half = zeta * 0.5;
    let q = -half * half;
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    for k in 1..(SERIES_MAX_TERMS + 2 * m) {
        term *= q / ((k * (k + m)) as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Derivative `J_m'(ζ)`.
pub fn bessel_j_prime(m: usize, zeta: Complex64) -> Complex64 {
    if m == 0 {
        -bessel_j(1, zeta)
    } else {
        0.5 * (bessel_j(m - 1, zeta) - bessel_j(m + 1, zeta))
    }
}
