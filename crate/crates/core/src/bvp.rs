//! Dirichlet, Neumann and Robin problems for `(-Δ - z) u = 0` solved with a
//! single layer ansatz `u = S_z h`, and the resolvents `(-Δ_D - z)^{-1}`,
//! `(-Δ_Θ - z)^{-1}` applied to interior sources.
//!
//! Resolvents use the split `w = v + u` where `v` is the Newton potential of
//! the source and `u` a homogeneous correction fixing the boundary condition.

use num_complex::Complex64;

use crate::boundary_ops::{
    assemble_kprime, assemble_single_layer, eval_single_layer, DenseOperator, LayerValues,
    RobinCoupling,
};
use crate::geometry::{BoundaryMesh, InteriorGrid, Point};
use crate::kernels::SpectralParameter;
use crate::linalg::{norm_w, CMatrix, Lu};
use crate::volume::{check_support, newton_potential_sampled, traces_sampled, SampledSource, SourceField};
use crate::{Error, Result};

/// Values of a resolvent applied to a source, at the requested targets.
pub type InteriorField = LayerValues;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Dirichlet,
    Neumann,
    Robin,
}

/// Density and traces of `u = S_z h`.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    pub problem: Problem,
    pub z: SpectralParameter,
    pub density: Vec<Complex64>,
    /// `γ_D u = S_z h`.
    pub dirichlet_trace: Vec<Complex64>,
    /// `γ_N u = (½ I + K#_z) h`.
    pub neumann_trace: Vec<Complex64>,
    /// Relative weighted residual of the discrete boundary condition.
    pub residual: f64,
    /// Condition estimate of the boundary operator that was inverted.
    pub condition: f64,
}

impl BvpSolution {
    /// `u(t) = (S_z h)(t)` at interior targets.
    pub fn eval(&self, mesh: &BoundaryMesh, targets: &[Point]) -> Result<LayerValues> {
        eval_single_layer(mesh, &self.z, &self.density, targets)
    }
}

/// `S_z` and `K#_z` assembled once for repeated solves at one `z`.
#[derive(Debug, Clone)]
pub struct LayerOperators {
    pub z: SpectralParameter,
    pub single: DenseOperator,
    pub kprime: DenseOperator,
}

impl LayerOperators {
    pub fn assemble(mesh: &BoundaryMesh, z: &SpectralParameter) -> Self {
        Self {
            z: *z,
            single: assemble_single_layer(mesh, z),
            kprime: assemble_kprime(mesh, z),
        }
    }

    pub fn n(&self) -> usize {
        self.single.n()
    }

    pub fn weights(&self) -> &[f64] {
        &self.single.weights
    }

    /// Interior Neumann trace operator `½ I + K#_z`.
    pub fn neumann_trace_matrix(&self) -> CMatrix {
        let mut m = self.kprime.matrix.clone();
        m.add_diagonal(Complex64::new(0.5, 0.0));
        m
    }

    /// Robin boundary operator `A = ½ I + K#_z + Θ S_z`.
    pub fn robin_matrix(&self, coupling: &RobinCoupling) -> Result<CMatrix> {
        if coupling.len() != self.n() {
            return Err(Error::MeshMismatch {
                expected: self.n(),
                found: coupling.len(),
            });
        }
        let a = self.neumann_trace_matrix();
        if coupling.is_zero() {
            return Ok(a);
        }
        Ok(a.add(&coupling.left_multiply(&self.single.matrix)))
    }

    pub fn dirichlet_solver(&self) -> Result<Lu> {
        Lu::checked(&self.single.matrix, self.z.z)
    }

    pub fn robin_solver(&self, coupling: &RobinCoupling) -> Result<Lu> {
        Lu::checked(&self.robin_matrix(coupling)?, self.z.z)
    }

    fn check_len(&self, data: &[Complex64]) -> Result<()> {
        if data.len() != self.n() {
            return Err(Error::MeshMismatch {
                expected: self.n(),
                found: data.len(),
            });
        }
        Ok(())
    }

    pub fn solve_dirichlet(&self, f: &[Complex64]) -> Result<BvpSolution> {
        self.check_len(f)?;
        let lu = self.dirichlet_solver()?;
        Ok(self.dirichlet_with(&lu, f))
    }

    pub(crate) fn dirichlet_with(&self, lu: &Lu, f: &[Complex64]) -> BvpSolution {
        let density = lu.solve(f);
        let dirichlet_trace = self.single.matrix.matvec(&density);
        let neumann_trace = self.neumann_trace_matrix().matvec(&density);
        let w = self.weights();
        let diff: Vec<Complex64> = dirichlet_trace.iter().zip(f).map(|(a, b)| a - b).collect();
        BvpSolution {
            problem: Problem::Dirichlet,
            z: self.z,
            residual: relative(norm_w(w, &diff), norm_w(w, f)),
            condition: lu.condition_estimate(),
            density,
            dirichlet_trace,
            neumann_trace,
        }
    }

    pub fn solve_robin(&self, coupling: &RobinCoupling, g: &[Complex64]) -> Result<BvpSolution> {
        self.check_len(g)?;
        let lu = self.robin_solver(coupling)?;
        self.robin_with(&lu, coupling, g)
    }

    pub(crate) fn robin_with(
        &self,
        lu: &Lu,
        coupling: &RobinCoupling,
        g: &[Complex64],
    ) -> Result<BvpSolution> {
        let density = lu.solve(g);
        let dirichlet_trace = self.single.matrix.matvec(&density);
        let neumann_trace = self.neumann_trace_matrix().matvec(&density);
        let theta_d = coupling.apply(&dirichlet_trace)?;
        let diff: Vec<Complex64> = neumann_trace
            .iter()
            .zip(&theta_d)
            .zip(g)
            .map(|((n, t), g)| n + t - g)
            .collect();
        let w = self.weights();
        Ok(BvpSolution {
            problem: if coupling.is_zero() {
                Problem::Neumann
            } else {
                Problem::Robin
            },
            z: self.z,
            residual: relative(norm_w(w, &diff), norm_w(w, g)),
            condition: lu.condition_estimate(),
            density,
            dirichlet_trace,
            neumann_trace,
        })
    }
}

fn relative(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// `u = S_z h` with `γ_D u = f`.
pub fn solve_dirichlet(mesh: &BoundaryMesh, z: &SpectralParameter, f: &[Complex64]) -> Result<BvpSolution> {
    LayerOperators::assemble(mesh, z).solve_dirichlet(f)
}

/// `u = S_z h` with `γ_N u + Θ γ_D u = g`.
pub fn solve_robin(
    mesh: &BoundaryMesh,
    z: &SpectralParameter,
    coupling: &RobinCoupling,
    g: &[Complex64],
) -> Result<BvpSolution> {
    LayerOperators::assemble(mesh, z).solve_robin(coupling, g)
}

/// `u = S_z h` with `γ_N u = g`.
pub fn solve_neumann(mesh: &BoundaryMesh, z: &SpectralParameter, g: &[Complex64]) -> Result<BvpSolution> {
    solve_robin(mesh, z, &RobinCoupling::neumann(mesh), g)
}

/// Pieces of `w = v + S_z h` for a resolvent applied to a source.
#[derive(Debug, Clone)]
pub struct ResolventParts {
    /// Newton potential traces `(γ_D v, γ_N v)`.
    pub newton_dirichlet: Vec<Complex64>,
    pub newton_neumann: Vec<Complex64>,
    /// Homogeneous correction.
    pub correction: BvpSolution,
}

impl ResolventParts {
    /// `γ_N w = γ_N v + (½ I + K#_z) h`.
    pub fn neumann_trace(&self) -> Vec<Complex64> {
        self.newton_neumann
            .iter()
            .zip(&self.correction.neumann_trace)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `γ_D w`.
    pub fn dirichlet_trace(&self) -> Vec<Complex64> {
        self.newton_dirichlet
            .iter()
            .zip(&self.correction.dirichlet_trace)
            .map(|(a, b)| a + b)
            .collect()
    }
}

/// Sampled source with the support check applied once.
pub(crate) struct PreparedSource {
    pub(crate) sampled: SampledSource,
}

impl PreparedSource {
    pub(crate) fn new(mesh: &BoundaryMesh, grid: &InteriorGrid, f: &SourceField) -> Result<Self> {
        let sampled = SampledSource::new(grid, f)?;
        check_support(f, mesh, grid)?;
        Ok(Self { sampled })
    }

    fn traces(&self, ops: &LayerOperators, mesh: &BoundaryMesh) -> (Vec<Complex64>, Vec<Complex64>) {
        traces_sampled(&self.sampled, &ops.z, mesh)
    }

    /// `v + S_z h` at the targets.
    pub(crate) fn field(
        &self,
        mesh: &BoundaryMesh,
        z: &SpectralParameter,
        correction: &BvpSolution,
        targets: &[Point],
    ) -> Result<InteriorField> {
        let v = newton_potential_sampled(&self.sampled, z, targets);
        let mut u = correction.eval(mesh, targets)?;
        for (a, b) in u.values.iter_mut().zip(v) {
            *a += b;
        }
        Ok(u)
    }
}

pub(crate) fn dirichlet_parts(
    ops: &LayerOperators,
    lu: &Lu,
    mesh: &BoundaryMesh,
    src: &PreparedSource,
) -> ResolventParts {
    let (gd, gn) = src.traces(ops, mesh);
    let rhs: Vec<Complex64> = gd.iter().map(|v| -v).collect();
    ResolventParts {
        correction: ops.dirichlet_with(lu, &rhs),
        newton_dirichlet: gd,
        newton_neumann: gn,
    }
}

pub(crate) fn robin_parts(
    ops: &LayerOperators,
    lu: &Lu,
    coupling: &RobinCoupling,
    mesh: &BoundaryMesh,
    src: &PreparedSource,
) -> Result<ResolventParts> {
    let (gd, gn) = src.traces(ops, mesh);
    let theta_d = coupling.apply(&gd)?;
    let rhs: Vec<Complex64> = gn.iter().zip(&theta_d).map(|(n, t)| -(n + t)).collect();
    Ok(ResolventParts {
        correction: ops.robin_with(lu, coupling, &rhs)?,
        newton_dirichlet: gd,
        newton_neumann: gn,
    })
}

/// `((-Δ_D - z)^{-1} f)(t)` at the targets.
pub fn dirichlet_resolvent(
    mesh: &BoundaryMesh,
    grid: &InteriorGrid,
    z: &SpectralParameter,
    f: &SourceField,
    targets: &[Point],
) -> Result<InteriorField> {
    let src = PreparedSource::new(mesh, grid, f)?;
    let ops = LayerOperators::assemble(mesh, z);
    let lu = ops.dirichlet_solver()?;
    let parts = dirichlet_parts(&ops, &lu, mesh, &src);
    src.field(mesh, z, &parts.correction, targets)
}

/// `((-Δ_Θ - z)^{-1} f)(t)` at the targets.
pub fn robin_resolvent(
    mesh: &BoundaryMesh,
    grid: &InteriorGrid,
    z: &SpectralParameter,
    coupling: &RobinCoupling,
    f: &SourceField,
    targets: &[Point],
) -> Result<InteriorField> {
    let src = PreparedSource::new(mesh, grid, f)?;
    let ops = LayerOperators::assemble(mesh, z);
    let lu = ops.robin_solver(coupling)?;
    let parts = robin_parts(&ops, &lu, coupling, mesh, &src)?;
    src.field(mesh, z, &parts.correction, targets)
}

/// `γ_N (-Δ_D - z)^{-1} f` at the mesh nodes.
pub fn neumann_trace_of_dirichlet_resolvent(
    mesh: &BoundaryMesh,
    grid: &InteriorGrid,
    z: &SpectralParameter,
    f: &SourceField,
) -> Result<Vec<Complex64>> {
    let src = PreparedSource::new(mesh, grid, f)?;
    let ops = LayerOperators::assemble(mesh, z);
    let lu = ops.dirichlet_solver()?;
    Ok(dirichlet_parts(&ops, &lu, mesh, &src).neumann_trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::kernels::{bessel_j, bessel_j_prime};

    fn fourier(mesh: &BoundaryMesh, m: i32) -> Vec<Complex64> {
        mesh.node_angles()
            .iter()
            .map(|&t| Complex64::from_polar(1.0, m as f64 * t))
            .collect()
    }

    fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn dirichlet_harmonic_extension() {
        let mesh = DomainSpec::disk(2.0, 128).build_mesh().unwrap();
        let z = SpectralParameter::real(0.0);
        let sol = solve_dirichlet(&mesh, &z, &fourier(&mesh, 1)).unwrap();
        assert!(sol.residual < 1e-8);
        let u = sol.eval(&mesh, &[[1.0, 0.0]]).unwrap();
        assert!((u.values[0] - 0.5).norm() < 1e-8, "{}", u.values[0]);
    }

    #[test]
    fn dirichlet_unit_disk_at_zero_is_near_singular() {
        let mesh = DomainSpec::disk(1.0, 64).build_mesh().unwrap();
        let z = SpectralParameter::real(0.0);
        let err = solve_dirichlet(&mesh, &z, &fourier(&mesh, 1)).unwrap_err();
        assert!(matches!(err, Error::NearSingular { .. }), "{err}");
    }

    #[test]
    fn zero_data_gives_zero() {
        let mesh = DomainSpec::disk(1.0, 64).build_mesh().unwrap();
        let z = SpectralParameter::new(Complex64::new(2.0, 1.0));
        let zero = vec![Complex64::new(0.0, 0.0); 64];
        let d = solve_dirichlet(&mesh, &z, &zero).unwrap();
        let r = solve_robin(&mesh, &z, &RobinCoupling::constant(&mesh, 1.0), &zero).unwrap();
        assert!(d.density.iter().chain(&r.density).all(|v| v.norm() == 0.0));
    }

    #[test]
    fn robin_matches_disk_modes() {
        let mesh = DomainSpec::disk(1.0, 256).build_mesh().unwrap();
        let z = SpectralParameter::new(Complex64::new(2.0, 1.0));
        let ops = LayerOperators::assemble(&mesh, &z);
        let k = z.sqrt_z;
        for theta in [0.0, 1.0] {
            let coupling = RobinCoupling::constant(&mesh, theta);
            for m in 0..4 {
                let g = fourier(&mesh, m);
                let sol = ops.solve_robin(&coupling, &g).unwrap();
                assert!(sol.residual < 1e-8);
                let jm = bessel_j(m as usize, k);
                let jp = bessel_j_prime(m as usize, k);
                let lam = jm / (k * jp + theta * jm);
                let want: Vec<Complex64> = g.iter().map(|v| v * lam).collect();
                assert!(max_dev(&sol.dirichlet_trace, &want) < 1e-6, "θ={theta} m={m}");
            }
        }
    }

    #[test]
    fn dirichlet_radial_value() {
        let mesh = DomainSpec::disk(1.0, 128).build_mesh().unwrap();
        let z = SpectralParameter::real(1.0);
        let one = vec![Complex64::new(1.0, 0.0); 128];
        let u = solve_dirichlet(&mesh, &z, &one)
            .unwrap()
            .eval(&mesh, &[[0.0, 0.0]])
            .unwrap();
        assert!((u.values[0] - 1.3068518339335653).norm() < 1e-8);
    }
}
