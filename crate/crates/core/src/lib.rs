//! Nyström boundary integral machinery for the Helmholtz operator `-Δ - z`
//! on bounded planar Lipschitz domains.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernels`]: complex Bessel/Hankel functions and the fundamental
//!   solution `E_n(z; x)` with its first and second derivatives.
//! - [`geometry`]: disks, graded polygons and star-shaped domains, their
//!   boundary meshes and interior sample grids.
//! - [`boundary_ops`]: dense single layer, double layer and adjoint double
//!   layer operators, Robin couplings and layer potential evaluation.
//! - [`volume`]: Newton potentials of smooth interior sources.
//! - [`bvp`]: Dirichlet, Neumann and Robin solvers plus the associated
//!   resolvents applied to interior sources.
//! - [`steklov`]: Robin-to-Dirichlet and Dirichlet-to-Robin maps and the
//!   identities they satisfy.
//! - [`krein`] and [`spectra`]: the Krein resolvent formula check, spectral
//!   scans and analytic disk oracles.
//! - [`config`] and [`report`]: literal parsing and deterministic JSON output
//!   shared with the command-line front end.
//!
//! Heavy loops (matrix assembly, volume sums, spectral scans) run on rayon
//! when the default `parallel` feature is enabled and sequentially otherwise.
//! Every matrix entry and every pointwise value is computed independently, so
//! results do not depend on the number of threads.

pub mod boundary_ops;
pub mod bvp;
pub mod config;
mod error;
pub mod geometry;
pub mod kernels;
pub mod krein;
pub mod linalg;
mod par;
pub mod report;
pub mod spectra;
pub mod steklov;
pub mod volume;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
