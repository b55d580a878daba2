//! Construction of a symmetric unitary `S` with `T = S T^t S*`.
//!
//! The ratios `β_ij = <u_i,u_j>/<v_j,v_i>` form a partially defined
//! Hermitian matrix of unimodular numbers. When the cocycle condition holds
//! it completes to a rank-one matrix `β_ij = conj(α_i) α_j`, and then
//! `S = U diag(α_i / <u_i,v_i>) U^t` maps `conj(u_i)` to `α_i v_i`.

use thiserror::Error;

use crate::eigensystem::SpectralData;
use crate::linalg::{inner, norm, transpose, Complex, Matrix, ToleranceConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConjugationError {
    #[error(
        "inconsistent zero pattern at ({}, {}): |<u_i,u_j>| = {u_mag:.3e}, |<v_j,v_i>| = {v_mag:.3e}",
        .i + 1,
        .j + 1
    )]
    Inconsistent { i: usize, j: usize, u_mag: f64, v_mag: f64 },
    #[error("|<u_{}, v_{}>| = {magnitude:.3e} is too small to invert", .index + 1, .index + 1)]
    SingularPairing { index: usize, magnitude: f64 },
    #[error("beta matrix is not fully defined")]
    Incomplete,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaMatrix {
    entries: Matrix,
    defined: Vec<bool>,
    /// Smallest `|<v_j,v_i>|` used as a divisor.
    min_division: f64,
}

impl BetaMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex> {
        self.is_defined(i, j).then(|| self.entries[(i, j)])
    }

    pub fn is_defined(&self, i: usize, j: usize) -> bool {
        self.defined[i * self.n() + j]
    }

    pub fn is_complete(&self) -> bool {
        self.defined.iter().all(|&d| d)
    }

    pub fn defined_count(&self) -> usize {
        self.defined.iter().filter(|&&d| d).count()
    }

    /// Entries, with zeros where undefined.
    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn min_division_magnitude(&self) -> f64 {
        self.min_division
    }

    fn set(&mut self, i: usize, j: usize, value: Complex) {
        let n = self.n();
        self.entries[(i, j)] = value;
        self.entries[(j, i)] = value.conj();
        self.defined[i * n + j] = true;
        self.defined[j * n + i] = true;
    }

    /// Largest `|β_ij - β_ik β_kj|` over all triples of defined entries.
    pub fn composition_defect(&self) -> f64 {
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if let (Some(ij), Some(ik), Some(kj)) = (self.get(i, j), self.get(i, k), self.get(k, j)) {
                        worst = worst.max((ij - ik * kj).norm());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaVector {
    pub alphas: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationCertificate {
    pub s: Matrix,
    pub alphas: AlphaVector,
    /// `|S - S^t|_F`.
    pub residual_symmetry: f64,
    /// `|S* S - I|_F`.
    pub residual_unitarity: f64,
    /// `|T S - S T^t|_F / |T|_F`.
    pub residual_intertwine: f64,
    /// `max_i |S conj(u_i) - α_i v_i|`.
    pub residual_eigvec: f64,
    /// Smallest `|<v_j,v_i>|` above `zero_tol`, i.e. the smallest divisor in
    /// any β ratio.
    pub min_division_magnitude: f64,
}

impl ConjugationCertificate {
    pub fn residuals(&self) -> [f64; 4] {
        [
            self.residual_symmetry,
            self.residual_unitarity,
            self.residual_intertwine,
            self.residual_eigvec,
        ]
    }

    pub fn worst_residual(&self) -> f64 {
        self.residuals().into_iter().fold(0.0, f64::max)
    }

    pub fn is_valid(&self, cfg: &ToleranceConfig) -> bool {
        self.residuals().iter().all(|r| *r <= cfg.match_tol)
    }
}

/// `β_ij = <u_i,u_j>/<v_j,v_i>` wherever both inner products exceed
/// `zero_tol`; the diagonal is 1.
pub fn build_beta(sd: &SpectralData, cfg: &ToleranceConfig) -> Result<BetaMatrix, ConjugationError> {
    let n = sd.n();
    let mut b = BetaMatrix {
        entries: Matrix::zeros(n, n),
        defined: vec![false; n * n],
        min_division: f64::INFINITY,
    };
    let us: Vec<_> = (0..n).map(|i| sd.u(i)).collect();
    let vs: Vec<_> = (0..n).map(|i| sd.v(i)).collect();
    for i in 0..n {
        b.set(i, i, Complex::new(1.0, 0.0));
        for j in i + 1..n {
            let uij = inner(&us[i], &us[j]);
            let vji = inner(&vs[j], &vs[i]);
            let (um, vm) = (uij.norm(), vji.norm());
            match (um > cfg.zero_tol, vm > cfg.zero_tol) {
                (true, true) => {
                    b.min_division = b.min_division.min(vm);
                    b.set(i, j, uij / vji);
                }
                (false, false) => {}
                _ => {
                    return Err(ConjugationError::Inconsistent {
                        i,
                        j,
                        u_mag: um,
                        v_mag: vm,
                    })
                }
            }
        }
    }
    Ok(b)
}

/// Fills every undefined entry column by column. Column `r` is anchored at
/// the lowest row `a < r` with `β_ar` defined and filled by
/// `β_ir = β_ia β_ar`; a column with no defined entry above the diagonal
/// gets `β_0r = 1`.
pub fn complete_beta(b: &BetaMatrix) -> BetaMatrix {
    let mut out = b.clone();
    let n = out.n();
    for r in 1..n {
        let anchor = match (0..r).find(|&a| out.is_defined(a, r)) {
            Some(a) => a,
            None => {
                out.set(0, r, Complex::new(1.0, 0.0));
                0
            }
        };
        let bar = out.entries[(anchor, r)];
        for i in 0..r {
            if !out.is_defined(i, r) {
                let value = out.entries[(i, anchor)] * bar;
                out.set(i, r, value);
            }
        }
    }
    out
}

/// `α_i = β_0i`.
pub fn extract_alpha(b: &BetaMatrix) -> Result<AlphaVector, ConjugationError> {
    if !b.is_complete() {
        return Err(ConjugationError::Incomplete);
    }
    Ok(AlphaVector {
        alphas: (0..b.n()).map(|i| b.entries[(0, i)]).collect(),
    })
}

/// `max |conj(α_i) α_j - β_ij|` over defined entries.
pub fn factorization_residual(b: &BetaMatrix, alpha: &AlphaVector) -> f64 {
    let n = b.n();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if let Some(bij) = b.get(i, j) {
                worst = worst.max((alpha.alphas[i].conj() * alpha.alphas[j] - bij).norm());
            }
        }
    }
    worst
}

/// `max |<u_i,u_j> - conj(α_i) α_j <v_j,v_i>|` over all pairs.
pub fn alpha_condition_residual(sd: &SpectralData, alpha: &AlphaVector) -> f64 {
    let n = sd.n();
    let a = &alpha.alphas;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = inner(&sd.u(i), &sd.u(j));
            let rhs = a[i].conj() * a[j] * inner(&sd.v(j), &sd.v(i));
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// `S = U diag(α_i / <u_i,v_i>) U^t`.
pub fn build_s(sd: &SpectralData, alpha: &AlphaVector, cfg: &ToleranceConfig) -> Result<Matrix, ConjugationError> {
    let n = sd.n();
    let mut d = Vec::with_capacity(n);
    for (index, e) in sd.e_diag().iter().enumerate() {
        if e.norm() <= cfg.zero_tol {
            return Err(ConjugationError::SingularPairing {
                index,
                magnitude: e.norm(),
            });
        }
        d.push(alpha.alphas[index] / e);
    }
    let u = sd.u_basis();
    let ud = Matrix::from_fn(n, n, |r, c| u[(r, c)] * d[c]);
    Ok(&ud * &transpose(u))
}

/// `S conj(x)`: the conjugation `C = S J` applied to `x`.
pub fn apply_conjugation(s: &Matrix, x: &[Complex]) -> Vec<Complex> {
    let xc: Vec<Complex> = x.iter().map(|z| z.conj()).collect();
    s.mul_vec(&xc)
}

/// Computes all certificate residuals for a candidate `S`.
pub fn verify_certificate(
    t: &Matrix,
    s: &Matrix,
    sd: &SpectralData,
    alpha: &AlphaVector,
    cfg: &ToleranceConfig,
) -> ConjugationCertificate {
    let n = s.nrows();
    let residual_symmetry = (s - &transpose(s)).frobenius_norm();
    let residual_unitarity = (&(&s.adjoint() * s) - &Matrix::identity(n)).frobenius_norm();
    let tn = t.frobenius_norm();
    let intertwine = (&(t * s) - &(s * &transpose(t))).frobenius_norm();
    let residual_intertwine = if tn > 0.0 { intertwine / tn } else { intertwine };
    let residual_eigvec = (0..sd.n())
        .map(|i| {
            let lhs = apply_conjugation(s, &sd.u(i));
            let vi = sd.v(i);
            let diff: Vec<Complex> = lhs.iter().zip(&vi).map(|(a, b)| a - alpha.alphas[i] * b).collect();
            norm(&diff)
        })
        .fold(0.0, f64::max);
    let mut min_division = f64::INFINITY;
    for i in 0..sd.n() {
        for j in i + 1..sd.n() {
            let m = inner(&sd.v(j), &sd.v(i)).norm();
            if m > cfg.zero_tol {
                min_division = min_division.min(m);
            }
        }
    }
    ConjugationCertificate {
        s: s.clone(),
        alphas: alpha.clone(),
        residual_symmetry,
        residual_unitarity,
        residual_intertwine,
        residual_eigvec,
        min_division_magnitude: min_division,
    }
}

/// β matrix, completion, α extraction, `S` and its certificate.
pub fn construct_conjugation(
    t: &Matrix,
    sd: &SpectralData,
    cfg: &ToleranceConfig,
) -> Result<ConjugationCertificate, ConjugationError> {
    let beta = complete_beta(&build_beta(sd, cfg)?);
    let alpha = extract_alpha(&beta)?;
    let s = build_s(sd, &alpha, cfg)?;
    Ok(verify_certificate(t, &s, sd, &alpha, cfg))
}
