//! Dense complex linear algebra: matrix arithmetic, LU, Householder
//! Hessenberg reduction, shifted QR eigenvalues and inverse iteration.
//!
//! Everything here is sized for small dense problems (n up to a few dozen).
//! Storage is row-major.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::random;

pub type Complex = Complex64;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is singular to working precision (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },
    #[error("shifted QR did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },
    #[error("inverse iteration stalled: residual {residual:e} above threshold {threshold:e}")]
    InverseIteration { residual: f64, threshold: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("ragged input: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("empty matrix")]
    Empty,
    #[error("invalid tolerances: {0}")]
    InvalidTolerance(String),
}

/// Thresholds used by every numerical decision in the crate.
///
/// `eig_gap_tol` and `zero_tol` are relative: callers multiply them by the
/// Frobenius norm of the matrix under study whenever the compared quantity
/// carries the matrix scale (eigenvalue gaps, eigen-residuals). Quantities
/// built from unit vectors (inner products, triple products, determinants
/// of unit-column matrices) are compared against `zero_tol` and `match_tol`
/// directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub eig_gap_tol: f64,
    pub zero_tol: f64,
    pub match_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eig_gap_tol: 1e-8,
            zero_tol: 1e-9,
            match_tol: 1e-7,
        }
    }
}

impl ToleranceConfig {
    pub fn new(eig_gap_tol: f64, zero_tol: f64, match_tol: f64) -> Result<Self, LinalgError> {
        let cfg = Self {
            eig_gap_tol,
            zero_tol,
            match_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        let all = [self.eig_gap_tol, self.zero_tol, self.match_tol];
        if all.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(LinalgError::InvalidTolerance(format!(
                "all tolerances must be finite and positive, got {self:?}"
            )));
        }
        if self.zero_tol > self.match_tol {
            return Err(LinalgError::InvalidTolerance(format!(
                "zero_tol ({}) must not exceed match_tol ({})",
                self.zero_tol, self.match_tol
            )));
        }
        Ok(())
    }
}

/// Inner product `<x, y> = sum x_k conj(y_k)`, linear in the first slot.
pub fn inner(x: &[Complex], y: &[Complex]) -> Complex {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(x: &[Complex]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `x / |x|`, or `None` for the zero vector.
pub fn normalized(x: &[Complex]) -> Option<Vec<Complex>> {
    let nrm = norm(x);
    if nrm == 0.0 || !nrm.is_finite() {
        return None;
    }
    Some(x.iter().map(|z| z / nrm).collect())
}

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        if n_rows == 0 || rows[0].is_empty() {
            return Err(LinalgError::Empty);
        }
        let n_cols = rows[0].len();
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    found: row.len(),
                    expected: n_cols,
                });
            }
            for (j, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
                data.push(*z);
            }
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn from_real_rows<const N: usize>(rows: &[[f64; N]]) -> Self {
        Self::from_fn(rows.len(), N, |i, j| Complex::new(rows[i][j], 0.0))
    }

    /// Rows of `(re, im)` pairs.
    pub fn from_complex_rows<const N: usize>(rows: &[[(f64, f64); N]]) -> Self {
        Self::from_fn(rows.len(), N, |i, j| Complex::new(rows[i][j].0, rows[i][j].1))
    }

    pub fn from_columns(columns: &[Vec<Complex>]) -> Result<Self, LinalgError> {
        let cols = columns.len();
        if cols == 0 || columns[0].is_empty() {
            return Err(LinalgError::Empty);
        }
        let rows = columns[0].len();
        if let Some((j, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != rows) {
            return Err(LinalgError::Ragged {
                row: j,
                found: c.len(),
                expected: rows,
            });
        }
        Ok(Self::from_fn(rows, cols, |i, j| columns[j][i]))
    }

    pub fn from_diagonal(diag: &[Complex]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { Complex::new(0.0, 0.0) })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[Complex]) {
        assert_eq!(values.len(), self.rows, "column length mismatch");
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// `self - shift * I`.
    pub fn shifted(&self, shift: Complex) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] -= shift;
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex]) -> Vec<Complex> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && (self - &self.adjoint()).frobenius_norm() <= tol
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && (self - &self.transpose()).frobenius_norm() <= tol
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;

    /// Panics on a shape mismatch; use [`Matrix::matmul`] for a checked product.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    a.matmul(b)
}

pub fn adjoint(m: &Matrix) -> Matrix {
    m.adjoint()
}

pub fn transpose(m: &Matrix) -> Matrix {
    m.transpose()
}

fn require_square(m: &Matrix, op: &'static str) -> Result<usize, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            op,
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows == 0 {
        return Err(LinalgError::Empty);
    }
    Ok(m.rows)
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    odd_swaps: bool,
    scale: f64,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self, LinalgError> {
        Self::factor_with_floor(a, None)
    }

    /// When `floor` is set, pivots smaller than it are replaced by it. Used by
    /// inverse iteration, where the factored matrix is singular on purpose.
    fn factor_with_floor(a: &Matrix, floor: Option<f64>) -> Result<Self, LinalgError> {
        let n = require_square(a, "LU factorization")?;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd_swaps = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd_swaps = !odd_swaps;
            }
            if let Some(floor) = floor {
                if pmax < floor {
                    lu[(k, k)] = Complex::new(floor, 0.0);
                }
            }
            let pivot = lu[(k, k)];
            if pivot.norm() == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let upd = factor * lu[(k, j)];
                    lu[(i, j)] -= upd;
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            odd_swaps,
            scale: a.max_abs(),
        })
    }

    pub fn determinant(&self) -> Complex {
        let n = self.lu.rows;
        let prod: Complex = (0..n).map(|i| self.lu[(i, i)]).product();
        if self.odd_swaps {
            -prod
        } else {
            prod
        }
    }

    pub fn solve(&self, b: &[Complex]) -> Result<Vec<Complex>, LinalgError> {
        let n = self.lu.rows;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                op: "LU solve",
                left: self.lu.shape(),
                right: (b.len(), 1),
            });
        }
        let threshold = (n as f64) * EPS * self.scale;
        for k in 0..n {
            let p = self.lu[(k, k)].norm();
            if p <= threshold {
                return Err(LinalgError::Singular { column: k, pivot: p });
            }
        }
        let mut y: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc / self.lu[(i, i)];
        }
        Ok(y)
    }
}

pub fn determinant(m: &Matrix) -> Result<Complex, LinalgError> {
    Ok(Lu::factor(m)?.determinant())
}

pub fn solve_linear(a: &Matrix, b: &[Complex]) -> Result<Vec<Complex>, LinalgError> {
    Lu::factor(a)?.solve(b)
}

/// Inverse of a nonsingular square matrix, column by column.
pub fn inverse(a: &Matrix) -> Result<Matrix, LinalgError> {
    let lu = Lu::factor(a)?;
    let n = a.rows;
    let mut out = Matrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Complex::new(0.0, 0.0); n];
        e[j] = Complex::new(1.0, 0.0);
        out.set_column(j, &lu.solve(&e)?);
    }
    Ok(out)
}

/// Reduces `a` to upper Hessenberg form by Householder similarities.
/// Only the reduced matrix is returned.
pub fn hessenberg(a: &Matrix) -> Result<Matrix, LinalgError> {
    let n = require_square(a, "Hessenberg reduction")?;
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // Left: rows k+1.., every column from k on.
        for j in k..n {
            let dot: Complex = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vr * dot * 2.0;
            }
        }
        // Right: every row, columns k+1..
        for i in 0..n {
            let dot: Complex = v
                .iter()
                .enumerate()
                .map(|(c, vc)| h[(i, k + 1 + c)] * vc)
                .sum();
            for (c, vc) in v.iter().enumerate() {
                h[(i, k + 1 + c)] -= dot * vc.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::new(0.0, 0.0);
        }
    }
    Ok(h)
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with real `c`
/// mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex, b: Complex) -> (f64, Complex) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let nrm = an.hypot(bn);
    let c = an / nrm;
    let s = (a / an) * b.conj() / nrm;
    (c, s)
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex, b: Complex, c: Complex, d: Complex) -> Complex {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let denom = if plus.norm() >= minus.norm() { plus } else { minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// All eigenvalues of a square complex matrix, with multiplicity, by
/// Hessenberg reduction and Wilkinson-shifted QR with deflation. The
/// iteration budget is `100 * n` sweeps per eigenvalue.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<Complex>, LinalgError> {
    let n = require_square(m, "eigenvalues")?;
    if !m.is_finite() {
        let k = m.data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()).unwrap();
        return Err(LinalgError::NonFinite { row: k / n, col: k % n });
    }
    let mut h = hessenberg(m)?;
    let mut eig = vec![Complex::new(0.0, 0.0); n];
    let budget = 100 * n;
    let hnorm = h.frobenius_norm();
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut rotations: Vec<(f64, Complex)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= EPS * diag {
                h[(l, l - 1)] = Complex::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > budget {
            return Err(LinalgError::NoConvergence {
                index: hi,
                iterations: budget,
            });
        }
        let shift = if iter.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            let extra = if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + Complex::new(0.75 * (h[(hi, hi - 1)].norm() + extra), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for i in l..=hi {
            h[(i, i)] -= shift;
        }
        rotations.clear();
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = Complex::new(0.0, 0.0);
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = l + offset;
            for i in l..=(k + 1).min(hi) {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = p * c + q * s.conj();
                h[(i, k + 1)] = -p * s + q * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(eig)
}

/// Eigenvalues of a Hermitian matrix, sorted in descending order.
///
/// The input is symmetrized as `(m + m*)/2` first; the Hessenberg form of a
/// Hermitian matrix is tridiagonal and the QR sweeps keep it Hermitian, so
/// the returned real parts carry the whole answer.
pub fn hermitian_eigenvalues(m: &Matrix) -> Result<Vec<f64>, LinalgError> {
    require_square(m, "hermitian eigenvalues")?;
    let sym = (m + &m.adjoint()).scale(Complex::new(0.5, 0.0));
    let mut vals: Vec<f64> = eigenvalues(&sym)?.into_iter().map(|z| z.re).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Unit eigenvector of `m` for the (approximate) eigenvalue `lambda`, by
/// inverse iteration from a seeded random start with the shift nudged by
/// `1e-12 * |m|_F`. Three solves are performed and the iterate with the
/// smallest residual is kept. The phase of the result is arbitrary.
pub fn unit_eigenvector(
    m: &Matrix,
    lambda: Complex,
    cfg: &ToleranceConfig,
    seed: u64,
) -> Result<Vec<Complex>, LinalgError> {
    let n = require_square(m, "unit eigenvector")?;
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        let mut e = vec![Complex::new(0.0, 0.0); n];
        e[0] = Complex::new(1.0, 0.0);
        return Ok(e);
    }
    let mu = lambda + Complex::new(1e-12 * scale, 0.0);
    let lu = Lu::factor_with_floor(&m.shifted(mu), Some(EPS * scale))?;
    let mut rng = random::rng_from_seed(seed);
    let mut x = random::unit_vector(n, &mut rng);
    let threshold = cfg.zero_tol * scale;
    let residual_of = |x: &[Complex]| {
        let r = m.mul_vec(x);
        norm(&r.iter().zip(x).map(|(a, b)| a - lambda * b).collect::<Vec<_>>())
    };
    let mut best: Option<(f64, Vec<Complex>)> = None;
    for _ in 0..3 {
        let y = lu.solve_unchecked(&x);
        x = match normalized(&y) {
            Some(v) => v,
            None => {
                // Blow-up or cancellation; restart from a fresh vector.
                random::unit_vector(n, &mut rng)
            }
        };
        let residual = residual_of(&x);
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, x.clone()));
        }
    }
    match best {
        Some((residual, x)) if residual <= threshold => Ok(x),
        Some((residual, _)) => Err(LinalgError::InverseIteration { residual, threshold }),
        None => unreachable!("at least one inverse iteration step"),
    }
}

impl Lu {
    /// Triangular solves without the singularity guard.
    fn solve_unchecked(&self, b: &[Complex]) -> Vec<Complex> {
        let n = self.lu.rows;
        let mut y: Vec<Complex> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc / self.lu[(i, i)];
        }
        y
    }
}

/// Unitary factor of a QR decomposition by twice-applied modified
/// Gram-Schmidt. Columns that collapse are replaced by a fallback basis
/// vector so the output is always unitary.
pub fn unitary_factor(a: &Matrix) -> Result<Matrix, LinalgError> {
    let n = require_square(a, "unitary factor")?;
    let mut cols: Vec<Vec<Complex>> = (0..n).map(|j| a.column(j)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj = inner(&cols[j], &cols[k]);
                let (head, tail) = cols.split_at_mut(j);
                for (x, q) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= proj * q;
                }
            }
        }
        match normalized(&cols[j]) {
            Some(v) if norm(&cols[j]) > 1e-12 => cols[j] = v,
            _ => {
                // Degenerate column: take the standard basis vector least
                // aligned with the columns so far, then re-orthogonalize.
                let mut best = vec![Complex::new(0.0, 0.0); n];
                for e in 0..n {
                    let mut cand = vec![Complex::new(0.0, 0.0); n];
                    cand[e] = Complex::new(1.0, 0.0);
                    for k in 0..j {
                        let proj = inner(&cand, &cols[k]);
                        for (x, q) in cand.iter_mut().zip(&cols[k]) {
                            *x -= proj * q;
                        }
                    }
                    if norm(&cand) > norm(&best) {
                        best = cand;
                    }
                }
                cols[j] = normalized(&best).expect("some basis vector lies outside a proper subspace");
            }
        }
    }
    Matrix::from_columns(&cols)
}

/// Matrix exponential by scaling and squaring with a degree-12 Taylor core.
pub fn expm(a: &Matrix) -> Result<Matrix, LinalgError> {
    let n = require_square(a, "matrix exponential")?;
    let one_norm = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    if one_norm > 0.5 {
        squarings = (one_norm / 0.5).log2().ceil() as u32;
    }
    let scaled = a.scale(Complex::new(0.5f64.powi(squarings as i32), 0.0));
    let mut result = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=12 {
        term = (&term * &scaled).scale(Complex::new(1.0 / k as f64, 0.0));
        result = &result + &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Sorts complex numbers lexicographically by `(re, im)`. Real parts within
/// `1e-10 * max|z|` of the first member of a run count as equal, so the two
/// members of a computed conjugate pair are ordered by imaginary part.
pub fn sort_lexicographic(values: &mut [Complex]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let tol = 1e-10 * values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut start = 0;
    while start < values.len() {
        let anchor = values[start].re;
        let end = start + values[start..].iter().take_while(|z| z.re - anchor <= tol).count();
        values[start..end].sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
        start = end;
    }
}
