use num_complex::Complex64;

use crate::geometry::{BoundaryMesh, MeshKind};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::{Error, Result};

/// Discrete Robin coupling `Θ` in the boundary condition
/// `γ_N u + Θ γ_D u = g`.
#[derive(Debug, Clone, PartialEq)]
pub enum RobinCoupling {
    /// Pointwise multiplication by real samples `θ_i`.
    Multiplication { theta: Vec<f64> },
    /// Fourier multiplier `e^{ikφ} ↦ c |k|^s e^{ikφ}` on an equispaced
    /// circle mesh; `eps` is the declared margin in `s ≤ 1 - eps`.
    FourierMultiplier {
        c: f64,
        s: f64,
        eps: f64,
        matrix: CMatrix,
    },
    /// Explicit `W`-Hermitian matrix acting on node values.
    Explicit { matrix: CMatrix, weights: Vec<f64> },
}

impl RobinCoupling {
    /// `Θ = 0` (Neumann condition).
    pub fn neumann(mesh: &BoundaryMesh) -> Self {
        Self::constant(mesh, 0.0)
    }

    pub fn constant(mesh: &BoundaryMesh, theta: f64) -> Self {
        Self::Multiplication {
            theta: vec![theta; mesh.len()],
        }
    }

    pub fn multiplication(mesh: &BoundaryMesh, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != mesh.len() {
            return Err(Error::MeshMismatch {
                expected: mesh.len(),
                found: theta.len(),
            });
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidCoupling("non-finite θ sample".into()));
        }
        Ok(Self::Multiplication { theta })
    }

    /// Circulant realization of the multiplier `c |k|^s` on a circle mesh.
    pub fn fourier_multiplier(mesh: &BoundaryMesh, c: f64, s: f64, eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !(s <= 1.0 - eps) || !c.is_finite() || !s.is_finite() {
            return Err(Error::InvalidCoupling(format!(
                "multiplier c|k|^s needs s ≤ 1 - ε with ε > 0 (s = {s}, ε = {eps})"
            )));
        }
        let params = match (&mesh.kind, mesh.circle_radius) {
            (MeshKind::Smooth { params, .. }, Some(_)) => params,
            _ => {
                return Err(Error::InvalidCoupling(
                    "Fourier multipliers need an equispaced circle mesh".into(),
                ))
            }
        };
        let n = mesh.len();
        let kmax = n / 2;
        // |0|^s is read as 0 for s > 0 and as 1 for s ≤ 0.
        let symbol: Vec<f64> = (0..=kmax)
            .map(|k| match k {
                0 if s > 0.0 => 0.0,
                0 => c,
                _ => c * (k as f64).powf(s),
            })
            .collect();
        // T_ij = (1/N) Σ_k m_|k| e^{ik(φ_i - φ_j)}, k over one period.
        let row_of = |d: usize| {
            let delta = params[d] - params[0];
            let mut v = symbol[0];
            for (k, &m) in symbol.iter().enumerate().skip(1) {
                let factor = if n % 2 == 0 && k == kmax { 1.0 } else { 2.0 };
                v += factor * m * (k as f64 * delta).cos();
            }
            v / n as f64
        };
        let circ: Vec<f64> = (0..n).map(row_of).collect();
        let matrix = CMatrix::from_fn(n, n, |i, j| {
            Complex64::new(circ[(i + n - j) % n], 0.0)
        });
        Ok(Self::FourierMultiplier { c, s, eps, matrix })
    }

    /// Explicit coupling matrix; must be Hermitian in `⟨·,·⟩_W`.
    pub fn explicit(mesh: &BoundaryMesh, matrix: CMatrix) -> Result<Self> {
        let n = mesh.len();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::MeshMismatch {
                expected: n,
                found: matrix.rows(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidCoupling("non-finite matrix entry".into()));
        }
        let w = &mesh.weights;
        let wt = CMatrix::from_fn(n, n, |i, j| matrix[(i, j)] * w[i]);
        let asym = wt.sub(&wt.conj_transpose()).max_abs();
        if asym > 1e-12 * wt.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidCoupling(format!(
                "matrix is not W-Hermitian (defect {asym:.3e})"
            )));
        }
        Ok(Self::Explicit {
            matrix,
            weights: w.clone(),
        })
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Multiplication { theta } => theta.len(),
            Self::FourierMultiplier { matrix, .. } | Self::Explicit { matrix, .. } => matrix.rows(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether `Θ = 0` exactly.
    pub fn is_zero(&self) -> bool {
        match self {
            Self::Multiplication { theta } => theta.iter().all(|&t| t == 0.0),
            Self::FourierMultiplier { matrix, .. } | Self::Explicit { matrix, .. } => {
                matrix.max_abs() == 0.0
            }
        }
    }

    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.len() {
            return Err(Error::MeshMismatch {
                expected: self.len(),
                found: f.len(),
            });
        }
        Ok(match self {
            Self::Multiplication { theta } => {
                theta.iter().zip(f).map(|(&t, &v)| v * t).collect()
            }
            Self::FourierMultiplier { matrix, .. } | Self::Explicit { matrix, .. } => {
                matrix.matvec(f)
            }
        })
    }

    pub fn to_matrix(&self) -> CMatrix {
        match self {
            Self::Multiplication { theta } => CMatrix::from_diagonal(
                &theta.iter().map(|&t| Complex64::new(t, 0.0)).collect::<Vec<_>>(),
            ),
            Self::FourierMultiplier { matrix, .. } | Self::Explicit { matrix, .. } => {
                matrix.clone()
            }
        }
    }

    /// `Θ · B` without forming `Θ` when it is diagonal.
    pub(crate) fn left_multiply(&self, b: &CMatrix) -> CMatrix {
        match self {
            Self::Multiplication { theta } => {
                CMatrix::from_fn(b.rows(), b.cols(), |i, j| b[(i, j)] * theta[i])
            }
            _ => self.to_matrix().matmul(b),
        }
    }

    /// Largest `c` with `⟨f, Θf⟩_W ≥ c ⟨f, f⟩_W` for all `f`.
    pub fn c_theta(&self, weights: &[f64]) -> f64 {
        match self {
            Self::Multiplication { theta } => theta.iter().copied().fold(f64::INFINITY, f64::min),
            Self::FourierMultiplier { matrix, .. } => hermitian_eigenvalues(matrix)[0],
            Self::Explicit { matrix, .. } => {
                let s: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
                let si: Vec<f64> = s.iter().map(|v| 1.0 / v).collect();
                let sym = matrix.scale_rows_cols(&s, &si);
                let herm = CMatrix::from_fn(sym.rows(), sym.cols(), |i, j| {
                    0.5 * (sym[(i, j)] + sym[(j, i)].conj())
                });
                hermitian_eigenvalues(&herm)[0]
            }
        }
    }
}
