use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{weighted_adjoint, CMatrix};
use crate::{Error, Result};

/// Complex matrix acting on raw node values of a boundary density.
///
/// Entries already contain the quadrature weights, so `apply` is a plain
/// matrix-vector product. `weights` are the arclength weights of the mesh
/// and define the inner product `⟨f, g⟩_W = Σ w_i conj(f_i) g_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: CMatrix,
    pub weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    weights: Vec<f64>,
}

impl DenseOperator {
    pub fn new(matrix: CMatrix, weights: Vec<f64>) -> Self {
        debug_assert_eq!(matrix.rows(), weights.len());
        Self { matrix, weights }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn apply(&self, g: &[Complex64]) -> Result<Vec<Complex64>> {
        if g.len() != self.n() {
            return Err(Error::MeshMismatch {
                expected: self.n(),
                found: g.len(),
            });
        }
        Ok(self.matrix.matvec(g))
    }

    /// `W⁻¹ Aᴴ W`: the adjoint with respect to `⟨·,·⟩_W`.
    pub fn weighted_adjoint(&self) -> DenseOperator {
        DenseOperator::new(weighted_adjoint(&self.matrix, &self.weights), self.weights.clone())
    }

    /// `{"n":N,"re":[row-major],"im":[row-major],"weights":[w_i]}`.
    pub fn to_json(&self) -> String {
        let data = self.matrix.as_slice();
        let doc = OperatorJson {
            n: self.n(),
            re: data.iter().map(|v| v.re).collect(),
            im: data.iter().map(|v| v.im).collect(),
            weights: self.weights.clone(),
        };
        crate::report::to_json_string(&doc)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OperatorJson = serde_json::from_str(text)?;
        let nn = doc.n * doc.n;
        if doc.re.len() != nn || doc.im.len() != nn || doc.weights.len() != doc.n {
            return Err(Error::Parse(format!(
                "operator of size {} needs {} entries and {} weights",
                doc.n, nn, doc.n
            )));
        }
        let data = doc
            .re
            .iter()
            .zip(&doc.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        Ok(Self::new(
            CMatrix::from_row_major(doc.n, doc.n, data)?,
            doc.weights,
        ))
    }

    /// CSV with columns `i,j,re,im`.
    pub fn to_csv(&self) -> String {
        let n = self.n();
        let mut out = String::with_capacity(n * n * 48 + 16);
        out.push_str("i,j,re,im\n");
        for i in 0..n {
            for j in 0..n {
                let v = self.matrix[(i, j)];
                let _ = writeln!(
                    out,
                    "{i},{j},{},{}",
                    crate::report::format_f64(v.re),
                    crate::report::format_f64(v.im)
                );
            }
        }
        out
    }
}
