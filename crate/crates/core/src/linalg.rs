//! Dense complex matrices, LU factorization and the weighted norms used to
//! compare boundary operators.
//!
//! Singular value decompositions and Hermitian eigenproblems are delegated
//! to nalgebra.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::par;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Condition number above which a boundary operator is declared singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix entry by entry; rows are filled in parallel.
    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Complex64 + Sync + Send,
    {
        let mut m = Self::zeros(rows, cols);
        par::for_each_row(&mut m.data, cols, |i, row| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        });
        m
    }

    /// Builds a matrix row by row; rows are filled in parallel.
    pub fn from_row_fn<F>(rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, &mut [Complex64]) + Sync + Send,
    {
        let mut m = Self::zeros(rows, cols);
        par::for_each_row(&mut m.data, cols, f);
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::MeshMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        par::map_range(self.rows, |i| {
            self.row(i)
                .iter()
                .zip(x)
                .fold(ZERO, |acc, (a, b)| acc + a * b)
        })
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let n = other.cols;
        CMatrix::from_row_fn(self.rows, n, |i, out| {
            for (k, a) in self.row(i).iter().enumerate() {
                if *a == ZERO {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        })
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        self.map(|v| v * s)
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &CMatrix, f: F) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add_diagonal(&mut self, d: Complex64) {
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += d;
        }
    }

    /// `diag(r) · A · diag(c)`.
    pub fn scale_rows_cols(&self, r: &[f64], c: &[f64]) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * (r[i] * c[j]))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> CMatrix {
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let sv = self.to_nalgebra().singular_values();
        let mut v: Vec<f64> = sv.iter().copied().collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        v
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values().last().copied().unwrap_or(0.0)
    }

    /// Largest singular value by power iteration on `AᴴA`.
    pub fn spectral_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        let n = self.cols;
        let mut x: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + (i as f64 * 0.618_034).fract(), 0.3 * ((i % 7) as f64)))
            .collect();
        let ah = self.conj_transpose();
        let mut est = 0.0;
        for _ in 0..500 {
            let nx = vec_norm(&x);
            if nx == 0.0 {
                return 0.0;
            }
            x.iter_mut().for_each(|v| *v /= nx);
            let y = self.matvec(&x);
            let ny = vec_norm(&y);
            x = ah.matvec(&y);
            if (ny - est).abs() <= 1e-13 * ny {
                return ny;
            }
            est = ny;
        }
        est
    }

    /// Eigenvalues of the Hermitian part `(A + Aᴴ)/2`, ascending.
    pub fn hermitian_part_eigenvalues(&self) -> Vec<f64> {
        assert_eq!(self.rows, self.cols);
        let h = CMatrix::from_fn(self.rows, self.cols, |i, j| {
            0.5 * (self[(i, j)] + self[(j, i)].conj())
        });
        hermitian_eigenvalues(&h)
    }
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(h.to_nalgebra());
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨f, g⟩_W = Σ w_i conj(f_i) g_i`.
pub fn inner_w(w: &[f64], f: &[Complex64], g: &[Complex64]) -> Complex64 {
    w.iter()
        .zip(f.iter().zip(g))
        .fold(ZERO, |acc, (&wi, (a, b))| acc + wi * a.conj() * b)
}

pub fn norm_w(w: &[f64], f: &[Complex64]) -> f64 {
    inner_w(w, f, f).re.max(0.0).sqrt()
}

/// Weighted adjoint `W⁻¹ Aᴴ W`.
pub fn weighted_adjoint(a: &CMatrix, w: &[f64]) -> CMatrix {
    CMatrix::from_fn(a.cols, a.rows, |i, j| a[(j, i)].conj() * (w[j] / w[i]))
}

/// Operator norm of `A` on `L²(W)`: `‖W^{1/2} A W^{-1/2}‖₂`.
pub fn weighted_norm(a: &CMatrix, w: &[f64]) -> f64 {
    let s: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let si: Vec<f64> = s.iter().map(|v| 1.0 / v).collect();
    a.scale_rows_cols(&s, &si).spectral_norm()
}

/// LU factorization `PA = LU` with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    a_one_norm: f64,
    singular: bool,
}

impl Lu {
    pub fn new(a: &CMatrix) -> Self {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let a_one_norm = a.one_norm();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 || !pmax.is_finite() {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let (head, tail) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let inv = ONE / pivot_row[k];
            par::for_each_row(tail, n, |_, row| {
                let l = row[k] * inv;
                row[k] = l;
                if l != ZERO {
                    for (r, &u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *r -= l * u;
                    }
                }
            });
        }
        Self {
            lu,
            perm,
            a_one_norm,
            singular,
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s = row[..i].iter().zip(&x[..i]).fold(ZERO, |acc, (l, v)| acc + l * v);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = row[i + 1..]
                .iter()
                .zip(&x[i + 1..])
                .fold(ZERO, |acc, (u, v)| acc + u * v);
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `Aᵀ x = b` (`conj = false`) or `Aᴴ x = b` (`conj = true`).
    fn solve_t(&self, b: &[Complex64], conj: bool) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let c = |v: Complex64| if conj { v.conj() } else { v };
        // Aᵀ = Uᵀ Lᵀ P: solve Uᵀ y = b, Lᵀ w = y, then x = Pᵀ w.
        let mut y = b.to_vec();
        for i in 0..n {
            let yi = y[i] / c(self.lu[(i, i)]);
            y[i] = yi;
            let row = self.lu.row(i);
            for j in i + 1..n {
                y[j] -= c(row[j]) * yi;
            }
        }
        for i in (0..n).rev() {
            let yi = y[i];
            let row = self.lu.row(i);
            for j in 0..i {
                y[j] -= c(row[j]) * yi;
            }
        }
        let mut x = vec![ZERO; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    pub fn solve_transpose(&self, b: &[Complex64]) -> Vec<Complex64> {
        self.solve_t(b, false)
    }

    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        self.solve_t(b, true)
    }

    /// `A⁻¹ B`, columns solved in parallel.
    pub fn solve_matrix(&self, b: &CMatrix) -> CMatrix {
        let cols = par::map_range(b.cols, |j| self.solve(&b.column(j)));
        CMatrix::from_fn(b.rows, b.cols, |i, j| cols[j][i])
    }

    /// `B A⁻¹`, rows solved in parallel.
    pub fn right_solve_matrix(&self, b: &CMatrix) -> CMatrix {
        CMatrix::from_row_fn(b.rows, b.cols, |i, out| {
            out.copy_from_slice(&self.solve_transpose(b.row(i)));
        })
    }

    /// 1-norm condition number estimate (Hager's method).
    pub fn condition_estimate(&self) -> f64 {
        if self.singular {
            return f64::INFINITY;
        }
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let one_norm = |v: &[Complex64]| v.iter().map(|c| c.norm()).sum::<f64>();
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            let ny = one_norm(&y);
            if ny <= est {
                break;
            }
            est = ny;
            let xi: Vec<Complex64> = y
                .iter()
                .map(|v| if v.norm() == 0.0 { ONE } else { v / v.norm() })
                .collect();
            let w = self.solve_adjoint(&xi);
            let (jmax, wmax) = w
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            let wx = w.iter().zip(&x).fold(ZERO, |acc, (a, b)| acc + a.conj() * b).re;
            if wmax <= wx {
                break;
            }
            x = vec![ZERO; n];
            x[jmax] = ONE;
        }
        // Alternating test vector guards against unlucky cancellation.
        let alt: Vec<Complex64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                let d = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
                Complex64::new(s * (1.0 + d), 0.0)
            })
            .collect();
        let alt_est = 2.0 * one_norm(&self.solve(&alt)) / (3.0 * n as f64);
        est.max(alt_est) * self.a_one_norm
    }

    /// Factors `a` and rejects it when its condition estimate exceeds
    /// [`CONDITION_LIMIT`].
    pub fn checked(a: &CMatrix, z: Complex64) -> Result<Self> {
        let lu = Self::new(a);
        let condition = lu.condition_estimate();
        if !(condition <= CONDITION_LIMIT) {
            return Err(Error::NearSingular { z, condition });
        }
        Ok(lu)
    }
}
