//! Text literals used by configs and the command line.
//!
//! * complex numbers: `2+1i`, `-3-0.5i`, `4` (imaginary part zero)
//! * couplings: `const:c`, `multiplier:k^s,c`, `matrix:path`, `dirichlet`
//! * boundary data: `fourier:m`, `const:c`, `gauss:center_angle,width`
//! * sources: `gaussian:x,y,width[,amplitude]`
//!
//! `Display` produces the canonical form and `parse(display(x)) == x`.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::boundary_ops::{DenseOperator, RobinCoupling};
use crate::geometry::BoundaryMesh;
use crate::volume::SourceField;
use crate::{Error, Result};

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what} '{s}'")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{what} must be finite, got '{s}'")));
    }
    Ok(v)
}

/// Complex literal `a+bi` / `a-bi` without spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexLiteral(pub Complex64);

impl FromStr for ComplexLiteral {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains(char::is_whitespace) || s.is_empty() {
            return Err(Error::Parse(format!("complex literal '{s}' must look like a+bi")));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self(Complex64::new(parse_f64(s, "complex literal")?, 0.0)));
        };
        let bytes = body.as_bytes();
        // Split at the last sign that is not leading and not an exponent sign.
        let split = (1..bytes.len())
            .rev()
            .find(|&k| {
                (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
            })
            .ok_or_else(|| Error::Parse(format!("complex literal '{s}' must look like a+bi")))?;
        let re = parse_f64(&body[..split], "real part")?;
        let im = parse_f64(&body[split..], "imaginary part")?;
        Ok(Self(Complex64::new(re, im)))
    }
}

impl fmt::Display for ComplexLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", z.re, sign, z.im.abs())
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    s.parse::<ComplexLiteral>().map(|c| c.0)
}

/// Robin coupling literal.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSpec {
    Const(f64),
    /// `e^{ikφ} ↦ c |k|^s e^{ikφ}`.
    Multiplier { s: f64, c: f64 },
    /// `W`-Hermitian matrix stored as a DenseOperator JSON file.
    Matrix(PathBuf),
    /// Formal `Θ = ∞`.
    Dirichlet,
}

impl FromStr for ThetaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "dirichlet" {
            return Ok(Self::Dirichlet);
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown coupling '{s}'")))?;
        match kind {
            "const" => Ok(Self::Const(parse_f64(arg, "θ")?)),
            "multiplier" => {
                let rest = arg
                    .strip_prefix("k^")
                    .ok_or_else(|| Error::Parse(format!("multiplier must be 'k^s,c', got '{arg}'")))?;
                let (sv, cv) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("multiplier must be 'k^s,c', got '{arg}'")))?;
                Ok(Self::Multiplier {
                    s: parse_f64(sv, "exponent")?,
                    c: parse_f64(cv, "multiplier constant")?,
                })
            }
            "matrix" if !arg.is_empty() => Ok(Self::Matrix(PathBuf::from(arg))),
            _ => Err(Error::Parse(format!("unknown coupling '{s}'"))),
        }
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "const:{c}"),
            Self::Multiplier { s, c } => write!(f, "multiplier:k^{s},{c}"),
            Self::Matrix(p) => write!(f, "matrix:{}", p.display()),
            Self::Dirichlet => f.write_str("dirichlet"),
        }
    }
}

impl ThetaSpec {
    /// Discrete coupling on `mesh`; `None` for the Dirichlet sentinel.
    pub fn to_coupling(&self, mesh: &BoundaryMesh) -> Result<Option<RobinCoupling>> {
        Ok(Some(match self {
            Self::Const(c) => RobinCoupling::constant(mesh, *c),
            Self::Multiplier { s, c } => RobinCoupling::fourier_multiplier(mesh, *c, *s, 1.0 - s)?,
            Self::Matrix(path) => {
                let op = DenseOperator::from_json(&std::fs::read_to_string(path)?)?;
                RobinCoupling::explicit(mesh, op.matrix)?
            }
            Self::Dirichlet => return Ok(None),
        }))
    }
}

/// Boundary data family sampled at the node angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DataSpec {
    Fourier(i64),
    Const(f64),
    /// `exp(-d(φ, φ0)²/w²)` with the wrapped angular distance `d`.
    Gauss { center_angle: f64, width: f64 },
}

impl FromStr for DataSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown boundary data '{s}'")))?;
        match kind {
            "fourier" => arg
                .parse()
                .map(Self::Fourier)
                .map_err(|_| Error::Parse(format!("invalid mode '{arg}'"))),
            "const" => Ok(Self::Const(parse_f64(arg, "constant")?)),
            "gauss" => {
                let (a, w) = arg
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("gauss data must be 'angle,width', got '{arg}'")))?;
                let width = parse_f64(w, "width")?;
                if !(width > 0.0) {
                    return Err(Error::Parse(format!("width must be positive, got '{w}'")));
                }
                Ok(Self::Gauss {
                    center_angle: parse_f64(a, "angle")?,
                    width,
                })
            }
            _ => Err(Error::Parse(format!("unknown boundary data '{s}'"))),
        }
    }
}

impl fmt::Display for DataSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fourier(m) => write!(f, "fourier:{m}"),
            Self::Const(c) => write!(f, "const:{c}"),
            Self::Gauss {
                center_angle,
                width,
            } => write!(f, "gauss:{center_angle},{width}"),
        }
    }
}

impl DataSpec {
    pub fn sample(&self, mesh: &BoundaryMesh) -> Vec<Complex64> {
        mesh.node_angles()
            .iter()
            .map(|&t| match *self {
                Self::Fourier(m) => Complex64::from_polar(1.0, m as f64 * t),
                Self::Const(c) => Complex64::new(c, 0.0),
                Self::Gauss {
                    center_angle,
                    width,
                } => {
                    let d = (t - center_angle + PI).rem_euclid(2.0 * PI) - PI;
                    Complex64::new((-(d * d) / (width * width)).exp(), 0.0)
                }
            })
            .collect()
    }
}

/// `gaussian:x,y,width[,amplitude]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub center: [f64; 2],
    pub width: f64,
    pub amplitude: f64,
}

impl FromStr for SourceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let arg = s
            .strip_prefix("gaussian:")
            .ok_or_else(|| Error::Parse(format!("source must be 'gaussian:x,y,width[,amplitude]', got '{s}'")))?;
        let parts: Vec<&str> = arg.split(',').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Parse(format!("source must be 'gaussian:x,y,width[,amplitude]', got '{s}'")));
        }
        Ok(Self {
            center: [parse_f64(parts[0], "x")?, parse_f64(parts[1], "y")?],
            width: parse_f64(parts[2], "width")?,
            amplitude: match parts.get(3) {
                Some(a) => parse_f64(a, "amplitude")?,
                None => 1.0,
            },
        })
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gaussian:{},{},{},{}",
            self.center[0], self.center[1], self.width, self.amplitude
        )
    }
}

impl SourceSpec {
    pub fn to_field(&self) -> SourceField {
        SourceField::gaussian(self.center, self.width, self.amplitude)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2+1i").unwrap(), Complex64::new(2.0, 1.0));
        assert_eq!(parse_complex("-3-0.5i").unwrap(), Complex64::new(-3.0, -0.5));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert_eq!(parse_complex("4").unwrap(), Complex64::new(4.0, 0.0));
        for bad in ["", "2 + 1i", "i", "2+i", "abc", "2+1j"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
        assert_eq!(ComplexLiteral(Complex64::new(2.0, 1.0)).to_string(), "2+1i");
    }

    #[test]
    fn theta_and_data_literals() {
        for s in ["const:1", "const:-0.5", "multiplier:k^0.5,2", "matrix:theta.json", "dirichlet"] {
            assert_eq!(s.parse::<ThetaSpec>().unwrap().to_string(), s);
        }
        for s in ["fourier:3", "fourier:-2", "const:1.5", "gauss:0.5,0.2"] {
            assert_eq!(s.parse::<DataSpec>().unwrap().to_string(), s);
        }
        assert!("const:x".parse::<ThetaSpec>().is_err());
        assert!("multiplier:0.5,2".parse::<ThetaSpec>().is_err());
        assert!("gauss:0.5,-1".parse::<DataSpec>().is_err());
        assert!("fourier:1.5".parse::<DataSpec>().is_err());
        assert_eq!(
            "gaussian:0.2,0,0.1".parse::<SourceSpec>().unwrap().to_string(),
            "gaussian:0.2,0,0.1,1"
        );
    }

    proptest! {
        #[test]
        fn complex_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let lit = ComplexLiteral(Complex64::new(re, im));
            let back: ComplexLiteral = lit.to_string().parse().unwrap();
            prop_assert_eq!(back, lit);
            prop_assert_eq!(back.to_string(), lit.to_string());
        }

        #[test]
        fn theta_round_trip(c in -1e3f64..1e3, s in -2f64..0.99) {
            for spec in [ThetaSpec::Const(c), ThetaSpec::Multiplier { s, c }] {
                let back: ThetaSpec = spec.to_string().parse().unwrap();
                prop_assert_eq!(back, spec);
            }
        }
    }
}
