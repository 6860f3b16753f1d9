//! Deterministic JSON output.
//!
//! Floats are written with 17 significant digits in scientific notation so
//! that every `f64` round-trips bit-exactly and identical inputs give
//! byte-identical reports. Non-finite values become `null`.

use std::collections::BTreeMap;
use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

/// Report schema identifier.
pub const SCHEMA: &str = "krein-bem/1";

/// `{:.16e}` for finite values, `null` otherwise.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

struct ExactFloats<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

/// Pretty-printed JSON with exact float formatting.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serializing in-memory values cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// A complex number as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: BTreeMap<String, f64>,
    /// Computed quantities that are not checked against a tolerance.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, serde_json::Value>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA,
            command: command.into(),
            inputs: BTreeMap::new(),
            residuals: BTreeMap::new(),
            tolerance: BTreeMap::new(),
            outputs: BTreeMap::new(),
            pass: true,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.inputs.insert(key.to_string(), v);
        self
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.outputs.insert(key.to_string(), v);
        self
    }

    /// Records a residual; when a tolerance is given the pass flag is
    /// updated with `residual ≤ tolerance` (NaN fails).
    pub fn check(&mut self, key: &str, residual: f64, tolerance: Option<f64>) -> &mut Self {
        self.residuals.insert(key.to_string(), residual);
        if let Some(tol) = tolerance {
            self.tolerance.insert(key.to_string(), tol);
            self.pass &= residual <= tol;
        }
        self
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(format_f64(f64::NAN), "null");
    }

    #[test]
    fn report_is_deterministic() {
        let mut r = Report::new("check jump");
        r.input("z", ComplexJson::from(Complex64::new(2.0, 1.0)));
        r.check("b", 1e-5, Some(1e-3)).check("a", 0.5, None);
        let a = r.to_json();
        assert_eq!(a, r.clone().to_json());
        assert!(a.find("\"a\"").unwrap() < a.find("\"b\"").unwrap());
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], "krein-bem/1");
        assert_eq!(v["pass"], true);
        r.check("c", f64::NAN, Some(1.0));
        assert!(!r.pass);
    }
}
