use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of a special function or kernel.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("interior grid is empty (h = {h}, margin = {margin})")]
    EmptyGrid { h: f64, margin: f64 },

    #[error("mesh mismatch: expected {expected} nodes, got {found}")]
    MeshMismatch { expected: usize, found: usize },

    #[error("invalid Robin coupling: {0}")]
    InvalidCoupling(String),

    /// The boundary operator is numerically singular at `z`; `z` is (close
    /// to) an eigenvalue or to a point of the exceptional set of the
    /// boundary integral formulation.
    #[error("near-singular boundary operator at z = {z} (condition estimate {condition:.3e})")]
    NearSingular { z: Complex64, condition: f64 },

    #[error("volume grid too coarse: h = {h} but the source width is {width}")]
    GridTooCoarse { h: f64, width: f64 },

    #[error("source support reaches within {margin:.3e} of the boundary (need {required:.3e})")]
    SupportTooWide { margin: f64, required: f64 },

    #[error("boundary data is identically zero")]
    ZeroData,

    #[error("no sign change bracketed in [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
