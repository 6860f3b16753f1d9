//! Robin-to-Dirichlet and Dirichlet-to-Robin maps as dense operators, plus
//! numerical checks of their mutual inversion, conjugate symmetry and
//! Herglotz property.

use num_complex::Complex64;

use crate::boundary_ops::{DenseOperator, RobinCoupling};
use crate::bvp::LayerOperators;
use crate::geometry::{BoundaryMesh, InteriorGrid};
use crate::kernels::SpectralParameter;
use crate::linalg::{hermitian_eigenvalues, inner_w, weighted_adjoint, weighted_norm, CMatrix, Lu};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapDirection {
    /// Robin datum `g` to `γ_D u`.
    RobinToDirichlet,
    /// Dirichlet datum `f` to `-(γ_N u + Θ γ_D u)`.
    DirichletToRobin,
}

#[derive(Debug, Clone)]
pub struct SteklovMap {
    pub operator: DenseOperator,
    pub z: SpectralParameter,
    pub coupling: RobinCoupling,
    pub direction: MapDirection,
}

impl SteklovMap {
    pub fn matrix(&self) -> &CMatrix {
        &self.operator.matrix
    }

    pub fn apply(&self, g: &[Complex64]) -> Result<Vec<Complex64>> {
        self.operator.apply(g)
    }

    /// Rayleigh quotient `⟨e_m, M e_m⟩_W / ⟨e_m, e_m⟩_W` for `e_m = e^{imφ}`
    /// sampled at the node angles. On a disk this is the eigenvalue on mode `m`.
    pub fn mode_eigenvalue(&self, mesh: &BoundaryMesh, m: i64) -> Result<Complex64> {
        let e = fourier_mode(mesh, m);
        let me = self.apply(&e)?;
        let w = &self.operator.weights;
        Ok(inner_w(w, &e, &me) / inner_w(w, &e, &e))
    }

    /// Singular values of `W^{1/2} M W^{-1/2}`, decreasing.
    pub fn singular_values(&self) -> Vec<f64> {
        let (s, si) = sqrt_weights(&self.operator.weights);
        self.matrix().scale_rows_cols(&s, &si).singular_values()
    }
}

/// `e^{imφ}` at the node angles.
pub fn fourier_mode(mesh: &BoundaryMesh, m: i64) -> Vec<Complex64> {
    mesh.node_angles()
        .iter()
        .map(|&t| Complex64::from_polar(1.0, m as f64 * t))
        .collect()
}

fn sqrt_weights(w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let s: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let si = s.iter().map(|v| 1.0 / v).collect();
    (s, si)
}

/// `M = S_z A^{-1}` with the Robin boundary operator `A = ½ I + K#_z + Θ S_z`.
pub fn assemble_rtd(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    coupling: &RobinCoupling,
) -> Result<SteklovMap> {
    rtd_from(&LayerOperators::assemble(mesh, z), coupling)
}

/// `M = -A S_z^{-1}`.
pub fn assemble_dtr(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    coupling: &RobinCoupling,
) -> Result<SteklovMap> {
    dtr_from(&LayerOperators::assemble(mesh, z), coupling)
}

pub(crate) fn rtd_from(ops: &LayerOperators, coupling: &RobinCoupling) -> Result<SteklovMap> {
    let lu = ops.robin_solver(coupling)?;
    let m = lu.right_solve_matrix(&ops.single.matrix);
    Ok(SteklovMap {
        operator: DenseOperator::new(m, ops.weights().to_vec()),
        z: ops.z,
        coupling: coupling.clone(),
        direction: MapDirection::RobinToDirichlet,
    })
}

pub(crate) fn dtr_from(ops: &LayerOperators, coupling: &RobinCoupling) -> Result<SteklovMap> {
    let lu = ops.dirichlet_solver()?;
    let a = ops.robin_matrix(coupling)?;
    let m = lu.right_solve_matrix(&a).scale(Complex64::new(-1.0, 0.0));
    Ok(SteklovMap {
        operator: DenseOperator::new(m, ops.weights().to_vec()),
        z: ops.z,
        coupling: coupling.clone(),
        direction: MapDirection::DirichletToRobin,
    })
}

/// Residuals of the mutual inversion `M_dtr M_rtd = -I = M_rtd M_dtr`
/// restricted to a low-frequency subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseReport {
    /// `‖(M_dtr M_rtd + I) P‖_W`.
    pub dtr_rtd: f64,
    /// `‖(M_rtd M_dtr + I) P‖_W`.
    pub rtd_dtr: f64,
    /// Dimension of the range of `P`.
    pub subspace_dim: usize,
}

impl InverseReport {
    pub fn residual(&self) -> f64 {
        self.dtr_rtd.max(self.rtd_dtr)
    }
}

/// `N/32`, at least 1.
pub fn default_mode_cutoff(n: usize) -> usize {
    (n / 32).max(1)
}

/// `W`-orthonormal basis (as columns) of the test subspace: Fourier modes
/// `|m| ≤ cutoff` on a circle, otherwise the `2 cutoff + 1` leading right
/// singular vectors of `W^{1/2} S_z W^{-1/2}`.
fn test_subspace(mesh: &BoundaryMesh, ops: &LayerOperators, cutoff: usize) -> Result<CMatrix> {
    let n = mesh.len();
    let k = 2 * cutoff + 1;
    if k > n {
        return Err(Error::Domain(format!(
            "mode cutoff {cutoff} needs more than {n} nodes"
        )));
    }
    let w = ops.weights();
    if mesh.circle_radius.is_some() && 2 * cutoff < n {
        let total: f64 = w.iter().sum();
        let scale = 1.0 / total.sqrt();
        let cols: Vec<Vec<Complex64>> = (-(cutoff as i64)..=cutoff as i64)
            .map(|m| fourier_mode(mesh, m).into_iter().map(|v| v * scale).collect())
            .collect();
        return Ok(CMatrix::from_fn(n, k, |i, j| cols[j][i]));
    }
    let (s, si) = sqrt_weights(w);
    let sym = ops.single.matrix.scale_rows_cols(&s, &si).to_nalgebra();
    let svd = nalgebra::SVD::new(sym, false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Domain("singular value decomposition failed".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    // Rows of Vᴴ are conjugated right singular vectors; map back by W^{-1/2}.
    Ok(CMatrix::from_fn(n, k, |i, j| v_t[(order[j], i)].conj() * si[i]))
}

/// `‖E Q‖` for `W`-orthonormal columns `Q`, measured in `L²(W)`.
fn projected_norm(e_q: &CMatrix, w: &[f64]) -> f64 {
    let k = e_q.cols();
    let gram = CMatrix::from_fn(k, k, |a, b| {
        (0..e_q.rows()).fold(Complex64::new(0.0, 0.0), |acc, i| {
            acc + w[i] * e_q[(i, a)].conj() * e_q[(i, b)]
        })
    });
    let gram = CMatrix::from_fn(k, k, |a, b| 0.5 * (gram[(a, b)] + gram[(b, a)].conj()));
    hermitian_eigenvalues(&gram)
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
        .sqrt()
}

pub fn check_inverse(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    coupling: &RobinCoupling,
    mode_cutoff: usize,
) -> Result<InverseReport> {
    let ops = LayerOperators::assemble(mesh, z);
    let rtd = rtd_from(&ops, coupling)?;
    let dtr = dtr_from(&ops, coupling)?;
    let q = test_subspace(mesh, &ops, mode_cutoff)?;
    let w = ops.weights();
    let residual = |first: &CMatrix, second: &CMatrix| {
        let mut e = first.matmul(&second.matmul(&q));
        for i in 0..e.rows() {
            for j in 0..e.cols() {
                e[(i, j)] += q[(i, j)];
            }
        }
        projected_norm(&e, w)
    };
    Ok(InverseReport {
        dtr_rtd: residual(dtr.matrix(), rtd.matrix()),
        rtd_dtr: residual(rtd.matrix(), dtr.matrix()),
        subspace_dim: q.cols(),
    })
}

/// `‖W^{-1} M(z)ᴴ W - M(z̄)‖_W / ‖M(z)‖_W` for the Robin-to-Dirichlet map.
pub fn check_symmetry(mesh: &BoundaryMesh, z: &SpectralParameter, coupling: &RobinCoupling) -> Result<f64> {
    let m = assemble_rtd(mesh, z, coupling)?;
    let w = &m.operator.weights;
    let m_adj = weighted_adjoint(m.matrix(), w);
    let m_conj = if z.z.im == 0.0 {
        m.matrix().clone()
    } else {
        assemble_rtd(mesh, &z.conj(), coupling)?.operator.matrix
    };
    let norm = weighted_norm(m.matrix(), w);
    Ok(weighted_norm(&m_adj.sub(&m_conj), w) / norm)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HerglotzReport {
    /// `Im ⟨g, M g⟩_W`.
    pub lhs: f64,
    /// `Im z ‖u‖²` over the interior grid.
    pub rhs: f64,
    pub relative_gap: f64,
    /// Smallest eigenvalue of the `W`-self-adjoint part `(M - M*)/(2i)`.
    pub imaginary_part_min: f64,
    /// `‖M‖_W`, for scaling `imaginary_part_min`.
    pub map_norm: f64,
}

pub fn check_herglotz(
    mesh: &BoundaryMesh,
    grid: &InteriorGrid,
    z: &SpectralParameter,
    coupling: &RobinCoupling,
    g: &[Complex64],
) -> Result<HerglotzReport> {
    if !(z.z.im > 0.0) {
        return Err(Error::Domain(format!("Herglotz check needs Im z > 0, got {}", z.z)));
    }
    if g.iter().all(|v| v.norm() == 0.0) {
        return Err(Error::ZeroData);
    }
    let ops = LayerOperators::assemble(mesh, z);
    let rtd = rtd_from(&ops, coupling)?;
    let w = ops.weights();
    let mg = rtd.apply(g)?;
    let two_i = Complex64::new(0.0, 2.0);
    let lhs = ((inner_w(w, g, &mg) - inner_w(w, &mg, g)) / two_i).re;

    let lu = Lu::checked(&ops.robin_matrix(coupling)?, z.z)?;
    let sol = ops.robin_with(&lu, coupling, g)?;
    let u = sol.eval(mesh, &grid.points)?;
    let mass: f64 = u
        .values
        .iter()
        .zip(&grid.cell_weights)
        .map(|(v, c)| v.norm_sqr() * c)
        .sum();
    let rhs = z.z.im * mass;

    let (s, si) = sqrt_weights(w);
    let sym = rtd.matrix().scale_rows_cols(&s, &si);
    let n = sym.rows();
    let imag = CMatrix::from_fn(n, n, |i, j| (sym[(i, j)] - sym[(j, i)].conj()) / two_i);
    let imaginary_part_min = hermitian_eigenvalues(&imag)[0];
    Ok(HerglotzReport {
        lhs,
        rhs,
        relative_gap: (lhs - rhs).abs() / rhs.abs(),
        imaginary_part_min,
        map_norm: weighted_norm(rtd.matrix(), w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::kernels::{bessel_j, bessel_j_prime};

    fn disk(n: usize) -> BoundaryMesh {
        DomainSpec::disk(1.0, n).build_mesh().unwrap()
    }

    #[test]
    fn rtd_disk_eigenvalues() {
        let mesh = disk(128);
        let z = SpectralParameter::new(Complex64::new(2.0, 1.0));
        let k = z.sqrt_z;
        for theta in [0.0, 1.0] {
            let map = assemble_rtd(&mesh, &z, &RobinCoupling::constant(&mesh, theta)).unwrap();
            for m in 0..6 {
                let jm = bessel_j(m, k);
                let want = jm / (k * bessel_j_prime(m, k) + theta * jm);
                let got = map.mode_eigenvalue(&mesh, m as i64).unwrap();
                assert!((got - want).norm() < 1e-8, "θ={theta} m={m}: {got} {want}");
            }
        }
    }

    #[test]
    fn dtr_inverts_rtd_on_low_modes() {
        let mesh = disk(64);
        let z = SpectralParameter::new(Complex64::new(2.0, 1.0));
        let rep = check_inverse(&mesh, &z, &RobinCoupling::constant(&mesh, 1.0), 4).unwrap();
        assert_eq!(rep.subspace_dim, 9);
        assert!(rep.residual() < 1e-10, "{rep:?}");
    }

    #[test]
    fn general_subspace_is_orthonormal() {
        let mesh = DomainSpec::square(2.0, 8).build_mesh().unwrap();
        let ops = LayerOperators::assemble(&mesh, &SpectralParameter::real(1.0));
        let q = test_subspace(&mesh, &ops, 2).unwrap();
        let w = ops.weights();
        for a in 0..q.cols() {
            for b in 0..q.cols() {
                let g = inner_w(w, &q.column(a), &q.column(b));
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn real_z_map_is_self_adjoint() {
        let mesh = disk(64);
        let r = check_symmetry(&mesh, &SpectralParameter::real(-3.0), &RobinCoupling::constant(&mesh, 1.0))
            .unwrap();
        assert!(r < 1e-8, "{r}");
    }
}
