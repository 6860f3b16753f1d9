//! Boundary integral operators on a [`BoundaryMesh`](crate::geometry::BoundaryMesh).
//!
//! Sign conventions: `E_2(0; x) = -ln|x|/(2π)`, `K#` has kernel
//! `∂_{ν_x} E_2(z; x - y)` and the interior Neumann trace of the single layer
//! potential is `(½ I + K#_z) g`, the exterior one `(-½ I + K#_z) g`, both
//! taken along the outward normal. These signs are the ones reproduced by
//! the separable solutions on the disk.

mod assembly;
mod coupling;
mod operator;
mod potentials;

use num_complex::Complex64;

pub use assembly::{assemble_k, assemble_kprime, assemble_single_layer, neumann_trace_operator};
pub use coupling::RobinCoupling;
pub use operator::DenseOperator;
pub use potentials::{eval_double_layer, eval_single_layer, LayerValues};

use crate::geometry::{BoundaryMesh, Point};
use crate::kernels::SpectralParameter;
use crate::linalg::norm_w;
use crate::{Error, Result};

/// `Θ g` for a density `g` on the coupling's mesh.
pub fn apply_theta(coupling: &RobinCoupling, f: &[Complex64]) -> Result<Vec<Complex64>> {
    coupling.apply(f)
}

/// Interior Neumann trace `γ_N S_z g = (½ I + K#_z) g`.
pub fn neumann_trace_single_layer(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    g: &[Complex64],
) -> Result<Vec<Complex64>> {
    neumann_trace_operator(mesh, z, true).apply(g)
}

/// Exterior Neumann trace `(-½ I + K#_z) g` (outward normal).
pub fn exterior_neumann_trace_single_layer(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    g: &[Complex64],
) -> Result<Vec<Complex64>> {
    neumann_trace_operator(mesh, z, false).apply(g)
}

/// Residuals of the single layer jump relations for one density.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpReport {
    /// `max_i |u(x_i ± δν_i) - (γ_D S g)_i| / max|g|` with `δ = 1e-3`.
    pub continuity_residual: f64,
    /// Relative max deviation of `(½ + K#) g` from finite differences of
    /// `u` along the inward normal.
    pub interior_trace_error: f64,
    /// Same for `(-½ + K#) g` and the outward normal.
    pub exterior_trace_error: f64,
    /// `‖(½+K#)g - (-½+K#)g - g‖_W / ‖g‖_W`.
    pub density_jump_residual: f64,
    /// Offset used by the finite differences (five panel lengths).
    pub fd_offset: f64,
}

/// Offset used for the Dirichlet continuity check.
pub const CONTINUITY_OFFSET: f64 = 1e-3;

/// Compares the discrete traces of `S_z g` with potential values evaluated
/// on curves offset along the normal.
pub fn check_jump(mesh: &BoundaryMesh, z: &SpectralParameter, g: &[Complex64]) -> Result<JumpReport> {
    if g.len() != mesh.len() {
        return Err(Error::MeshMismatch {
            expected: mesh.len(),
            found: g.len(),
        });
    }
    let gmax = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if gmax == 0.0 {
        return Err(Error::ZeroData);
    }
    let s = assemble_single_layer(mesh, z);
    let dirichlet = s.apply(g)?;
    let interior = neumann_trace_single_layer(mesh, z, g)?;
    let exterior = exterior_neumann_trace_single_layer(mesh, z, g)?;

    let offset = |sign: f64, delta: f64| -> Vec<Point> {
        mesh.nodes
            .iter()
            .zip(&mesh.normals)
            .map(|(x, nu)| [x[0] + sign * delta * nu[0], x[1] + sign * delta * nu[1]])
            .collect()
    };

    let u_in = eval_single_layer(mesh, z, g, &offset(-1.0, CONTINUITY_OFFSET))?.values;
    let u_out = eval_single_layer(mesh, z, g, &offset(1.0, CONTINUITY_OFFSET))?.values;
    let continuity = (0..mesh.len())
        .map(|i| (u_in[i] - dirichlet[i]).norm().max((u_out[i] - dirichlet[i]).norm()))
        .fold(0.0, f64::max)
        / gmax;

    // Fourth-order one-sided differences on s = 0, Δ, 2Δ, 3Δ, 4Δ.
    let fd_offset = 5.0 * mesh.max_panel_length();
    let step = fd_offset / 4.0;
    let one_sided = |sign: f64| -> Result<Vec<Complex64>> {
        let mut samples = vec![dirichlet.clone()];
        for k in 1..=4 {
            samples.push(eval_single_layer(mesh, z, g, &offset(sign, k as f64 * step))?.values);
        }
        Ok((0..mesh.len())
            .map(|i| {
                let d = -25.0 * samples[0][i] + 48.0 * samples[1][i] - 36.0 * samples[2][i]
                    + 16.0 * samples[3][i]
                    - 3.0 * samples[4][i];
                sign * d / (12.0 * step)
            })
            .collect())
    };
    let rel_err = |fd: &[Complex64], trace: &[Complex64]| {
        let scale = trace.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        fd.iter()
            .zip(trace)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    };
    let interior_trace_error = rel_err(&one_sided(-1.0)?, &interior);
    let exterior_trace_error = rel_err(&one_sided(1.0)?, &exterior);

    let jump: Vec<Complex64> = (0..mesh.len())
        .map(|i| interior[i] - exterior[i] - g[i])
        .collect();
    let density_jump_residual = norm_w(&mesh.weights, &jump) / norm_w(&mesh.weights, g);

    Ok(JumpReport {
        continuity_residual: continuity,
        interior_trace_error,
        exterior_trace_error,
        density_jump_residual,
        fd_offset,
    })
}
