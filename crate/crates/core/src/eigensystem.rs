//! Paired eigensystems of `T` and `T*`.
//!
//! For a matrix with distinct eigenvalues `λ_i` we collect unit eigenvectors
//! `u_i` of `T` and `v_i` of `T*` (for `conj(λ_i)`), aligned by index. Such a
//! pair of bases is biorthogonal: `<u_i, v_j> = 0` for `i != j` while
//! `<u_i, v_i> != 0`, which makes `V* U` diagonal.

use thiserror::Error;

use crate::linalg::{
    self, eigenvalues, inner, norm, sort_lexicographic, unit_eigenvector, Complex, LinalgError, Matrix,
    ToleranceConfig,
};
use crate::random::derive_seed;

/// Why a matrix falls outside the distinct-spectrum hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub enum Degeneracy {
    /// Two eigenvalues closer than the gap threshold. Indices are 0-based in
    /// the lexicographic eigenvalue order.
    RepeatedEigenvalue {
        i: usize,
        j: usize,
        gap: f64,
        threshold: f64,
    },
    /// Eigenvalues that are separated, but by less than their own
    /// first-order perturbation uncertainty (a numerically defective cluster).
    Coalesced {
        i: usize,
        j: usize,
        gap: f64,
        uncertainty: f64,
    },
    /// `|<u_i, v_i>|` is below `zero_tol`: the eigenvalue is effectively
    /// defective at working precision.
    IllConditioned { index: usize, overlap: f64 },
    /// No eigenvalue of `T*` lies close enough to `conj(λ_i)`.
    Unpaired { index: usize, distance: f64 },
}

impl std::fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degeneracy::RepeatedEigenvalue { i, j, gap, threshold } => write!(
                f,
                "eigenvalues {} and {} coincide (gap {gap:.3e} <= {threshold:.3e})",
                i + 1,
                j + 1
            ),
            Degeneracy::Coalesced { i, j, gap, uncertainty } => write!(
                f,
                "eigenvalues {} and {} are not resolvable (gap {gap:.3e} within uncertainty {uncertainty:.3e})",
                i + 1,
                j + 1
            ),
            Degeneracy::IllConditioned { index, overlap } => write!(
                f,
                "eigenvalue {} is numerically defective (|<u,v>| = {overlap:.3e})",
                index + 1
            ),
            Degeneracy::Unpaired { index, distance } => write!(
                f,
                "no adjoint eigenvalue within reach of conj(lambda_{}) (distance {distance:.3e})",
                index + 1
            ),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EigensystemError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("biorthogonality breakdown: |<u_{}, v_{}>| = {magnitude:.3e}", .i + 1, .j + 1)]
    Biorthogonality { i: usize, j: usize, magnitude: f64 },
    #[error("invalid spectral data: {0}")]
    Invalid(String),
}

/// Validated eigen-data `(λ_i; u_i; v_i)` together with `E = diag(<u_i, v_i>)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    lambdas: Vec<Complex>,
    u: Matrix,
    v: Matrix,
    e_diag: Vec<Complex>,
}

/// Result of pairing the eigensystems; a degenerate spectrum is an ordinary
/// outcome here, not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralOutcome {
    Distinct(SpectralData),
    NotApplicable {
        lambdas: Vec<Complex>,
        reason: Degeneracy,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    U,
    V,
}

/// Checks that every pairwise gap exceeds `cfg.eig_gap_tol * scale`.
pub fn assert_distinct_spectrum(
    lambdas: &[Complex],
    cfg: &ToleranceConfig,
    scale: f64,
) -> Result<(), Degeneracy> {
    let threshold = cfg.eig_gap_tol * scale;
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..lambdas.len() {
        for j in i + 1..lambdas.len() {
            let gap = (lambdas[i] - lambdas[j]).norm();
            if gap <= threshold && worst.is_none_or(|w| gap < w.2) {
                worst = Some((i, j, gap));
            }
        }
    }
    match worst {
        Some((i, j, gap)) => Err(Degeneracy::RepeatedEigenvalue { i, j, gap, threshold }),
        None => Ok(()),
    }
}

/// Eigenvalues, eigenvectors of `T` and `T*`, pairing and validation.
///
/// Eigenvalues are sorted lexicographically by `(re, im)`; eigenvalues of
/// `T*` are matched to `conj(λ_i)` by nearest distance under a half-gap
/// guard. Eigenvector phases are whatever inverse iteration produced.
pub fn compute_spectral_data(
    t: &Matrix,
    cfg: &ToleranceConfig,
    seed: u64,
) -> Result<SpectralOutcome, EigensystemError> {
    if !t.is_square() {
        return Err(LinalgError::NotSquare {
            op: "spectral data",
            rows: t.nrows(),
            cols: t.ncols(),
        }
        .into());
    }
    let n = t.nrows();
    let scale = t.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut lambdas = eigenvalues(t)?;
    sort_lexicographic(&mut lambdas);
    if let Err(reason) = assert_distinct_spectrum(&lambdas, cfg, scale) {
        return Ok(SpectralOutcome::NotApplicable { lambdas, reason });
    }

    let t_adj = t.adjoint();
    let adj_lambdas = eigenvalues(&t_adj)?;
    let mut paired = Vec::with_capacity(n);
    for (i, lambda) in lambdas.iter().enumerate() {
        let target = lambda.conj();
        let (best, distance) = adj_lambdas
            .iter()
            .map(|mu| (*mu, (mu - target).norm()))
            .fold((target, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        if distance >= 0.5 * cfg.eig_gap_tol * scale {
            return Ok(SpectralOutcome::NotApplicable {
                lambdas,
                reason: Degeneracy::Unpaired { index: i, distance },
            });
        }
        paired.push(best);
    }

    let mut u = Matrix::zeros(n, n);
    let mut v = Matrix::zeros(n, n);
    for i in 0..n {
        let ui = unit_eigenvector(t, lambdas[i], cfg, derive_seed(seed, 2 * i as u64))?;
        let vi = unit_eigenvector(&t_adj, paired[i], cfg, derive_seed(seed, 2 * i as u64 + 1))?;
        u.set_column(i, &ui);
        v.set_column(i, &vi);
    }
    let e_diag: Vec<Complex> = (0..n).map(|i| inner(&u.column(i), &v.column(i))).collect();

    if let Some(reason) = conditioning_degeneracy(&lambdas, &e_diag, cfg, scale) {
        return Ok(SpectralOutcome::NotApplicable { lambdas, reason });
    }

    let sd = SpectralData { lambdas, u, v, e_diag };
    sd.validate(t, cfg)?;
    Ok(SpectralOutcome::Distinct(sd))
}

/// First-order eigenvalue uncertainty is `n * eps * |T| / |<u_i, v_i>|`; a
/// pair whose gap is within ten times the combined uncertainty is treated as
/// a single (defective) eigenvalue.
fn conditioning_degeneracy(
    lambdas: &[Complex],
    e_diag: &[Complex],
    cfg: &ToleranceConfig,
    scale: f64,
) -> Option<Degeneracy> {
    if let Some((index, overlap)) = e_diag
        .iter()
        .map(|e| e.norm())
        .enumerate()
        .find(|(_, s)| *s <= cfg.zero_tol)
    {
        return Some(Degeneracy::IllConditioned { index, overlap });
    }
    let n = lambdas.len();
    let backward = n as f64 * f64::EPSILON * scale;
    for i in 0..n {
        for j in i + 1..n {
            let gap = (lambdas[i] - lambdas[j]).norm();
            let uncertainty = backward * (1.0 / e_diag[i].norm() + 1.0 / e_diag[j].norm());
            if gap <= 10.0 * uncertainty {
                return Some(Degeneracy::Coalesced {
                    i,
                    j,
                    gap,
                    uncertainty,
                });
            }
        }
    }
    None
}

impl SpectralData {
    /// Wraps externally supplied eigenvectors (for instance with phases
    /// pinned to a reference) after checking every invariant against `t`.
    pub fn from_vectors(
        t: &Matrix,
        lambdas: Vec<Complex>,
        u: Matrix,
        v: Matrix,
        cfg: &ToleranceConfig,
    ) -> Result<Self, EigensystemError> {
        let n = lambdas.len();
        if !t.is_square() || t.nrows() != n || u.shape() != (n, n) || v.shape() != (n, n) {
            return Err(EigensystemError::Invalid(format!(
                "shape mismatch: T {:?}, {} eigenvalues, U {:?}, V {:?}",
                t.shape(),
                n,
                u.shape(),
                v.shape()
            )));
        }
        let scale = t.frobenius_norm().max(f64::MIN_POSITIVE);
        if let Err(d) = assert_distinct_spectrum(&lambdas, cfg, scale) {
            return Err(EigensystemError::Invalid(d.to_string()));
        }
        let e_diag = (0..n).map(|i| inner(&u.column(i), &v.column(i))).collect();
        let sd = Self { lambdas, u, v, e_diag };
        sd.validate(t, cfg)?;
        Ok(sd)
    }

    /// Checks unit columns, eigen-residuals and biorthogonality.
    pub fn validate(&self, t: &Matrix, cfg: &ToleranceConfig) -> Result<(), EigensystemError> {
        let n = self.n();
        let scale = t.frobenius_norm();
        let t_adj = t.adjoint();
        for i in 0..n {
            let ui = self.u.column(i);
            let vi = self.v.column(i);
            for (name, x) in [("u", &ui), ("v", &vi)] {
                if (norm(x) - 1.0).abs() > cfg.match_tol {
                    return Err(EigensystemError::Invalid(format!(
                        "{name}_{} is not a unit vector (norm {})",
                        i + 1,
                        norm(x)
                    )));
                }
            }
            let ru = residual(t, self.lambdas[i], &ui);
            let rv = residual(&t_adj, self.lambdas[i].conj(), &vi);
            if ru > cfg.zero_tol * scale || rv > cfg.zero_tol * scale {
                return Err(EigensystemError::Invalid(format!(
                    "eigen-residual too large at index {}: |(T - λI)u| = {ru:.3e}, |(T* - conj(λ)I)v| = {rv:.3e}",
                    i + 1
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let m = inner(&self.u.column(i), &self.v.column(j)).norm();
                if i != j && m > cfg.zero_tol {
                    return Err(EigensystemError::Biorthogonality { i, j, magnitude: m });
                }
                if i == j && m <= cfg.zero_tol {
                    return Err(EigensystemError::Biorthogonality { i, j, magnitude: m });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Complex] {
        &self.lambdas
    }

    pub fn u_basis(&self) -> &Matrix {
        &self.u
    }

    pub fn v_basis(&self) -> &Matrix {
        &self.v
    }

    /// Diagonal of `E = V* U`, i.e. `<u_i, v_i>`.
    pub fn e_diag(&self) -> &[Complex] {
        &self.e_diag
    }

    pub fn u(&self, i: usize) -> Vec<Complex> {
        self.u.column(i)
    }

    pub fn v(&self, i: usize) -> Vec<Complex> {
        self.v.column(i)
    }

    /// Multiplies column `i` of `U` by `u_phases[i]` and of `V` by
    /// `v_phases[i]`. Unimodular factors preserve every invariant.
    pub fn rephased(&self, u_phases: &[Complex], v_phases: &[Complex]) -> Self {
        let n = self.n();
        assert!(u_phases.len() == n && v_phases.len() == n, "one phase per column");
        let u = Matrix::from_fn(n, n, |r, c| self.u[(r, c)] * u_phases[c]);
        let v = Matrix::from_fn(n, n, |r, c| self.v[(r, c)] * v_phases[c]);
        let e_diag = (0..n).map(|i| self.e_diag[i] * u_phases[i] * v_phases[i].conj()).collect();
        Self {
            lambdas: self.lambdas.clone(),
            u,
            v,
            e_diag,
        }
    }
}

fn residual(m: &Matrix, lambda: Complex, x: &[Complex]) -> f64 {
    let mx = m.mul_vec(x);
    norm(&mx.iter().zip(x).map(|(a, b)| a - lambda * b).collect::<Vec<_>>())
}

/// Coefficients of `x` in the chosen eigenbasis:
/// `c_j = <x, v_j>/<u_j, v_j>` for the `u` basis and
/// `c_j = <x, u_j>/<v_j, u_j>` for the `v` basis.
pub fn expand_in_eigenbasis(x: &[Complex], sd: &SpectralData, which: Basis) -> Vec<Complex> {
    (0..sd.n())
        .map(|j| match which {
            Basis::U => inner(x, &sd.v(j)) / sd.e_diag[j],
            Basis::V => inner(x, &sd.u(j)) / sd.e_diag[j].conj(),
        })
        .collect()
}

/// Inverse of [`expand_in_eigenbasis`]: `sum_j c_j * (basis column j)`.
pub fn synthesize(coeffs: &[Complex], sd: &SpectralData, which: Basis) -> Vec<Complex> {
    let basis = match which {
        Basis::U => &sd.u,
        Basis::V => &sd.v,
    };
    basis.mul_vec(coeffs)
}

/// `V* U`, which is diagonal for valid data.
pub fn biorthogonality_matrix(sd: &SpectralData) -> Matrix {
    &linalg::adjoint(&sd.v) * &sd.u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::random::{gaussian_matrix, rng_from_seed, unimodular, unit_vector};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn distinct(t: &Matrix, seed: u64) -> SpectralData {
        match compute_spectral_data(t, &ToleranceConfig::default(), seed).unwrap() {
            SpectralOutcome::Distinct(sd) => sd,
            other => panic!("expected distinct spectrum, got {other:?}"),
        }
    }

    fn phase_equivalent(x: &[Complex], y: &[Complex]) -> bool {
        (inner(x, y).norm() - norm(x) * norm(y)).abs() < 1e-10
    }

    #[test]
    fn distinct_spectrum_cases() {
        let cfg = ToleranceConfig::default();
        assert!(assert_distinct_spectrum(&[c(0.0, 0.0), c(1.0, 0.0), c(6.0, 0.0)], &cfg, 1.0).is_ok());
        let quad = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)];
        assert!(matches!(
            assert_distinct_spectrum(&quad, &cfg, 1.0),
            Err(Degeneracy::RepeatedEigenvalue { .. })
        ));
        assert!(assert_distinct_spectrum(&[c(1.0, 0.0), c(1.0 + 1e-12, 0.0)], &cfg, 1.0).is_err());
    }

    #[test]
    fn uecsm_3x3_vectors_match_published() {
        let t = fixtures::section6_example();
        let sd = distinct(&t, 1);
        // Sorted order is 0, 1, 6.
        assert!(phase_equivalent(&sd.u(0), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
        assert!(phase_equivalent(&sd.v(2), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
    }

    #[test]
    fn diagonal_matrix_gives_standard_basis() {
        let t = Matrix::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let sd = distinct(&t, 2);
        for i in 0..3 {
            assert!((sd.u(i)[i].norm() - 1.0).abs() < 1e-12);
            assert!((sd.v(i)[i].norm() - 1.0).abs() < 1e-12);
            assert!((sd.e_diag()[i].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_data_is_biorthogonal() {
        let mut rng = rng_from_seed(3);
        for trial in 0..10 {
            let t = gaussian_matrix(5, &mut rng);
            let sd = distinct(&t, trial);
            let e = biorthogonality_matrix(&sd);
            for i in 0..5 {
                for j in 0..5 {
                    if i == j {
                        assert!(e[(i, j)].norm() > 1e-9);
                        assert!((e[(i, j)] - sd.e_diag()[i]).norm() < 1e-14);
                    } else {
                        assert!(e[(i, j)].norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn normal_matrix_has_aligned_pairs() {
        let mut rng = rng_from_seed(4);
        let q = crate::random::random_unitary(4, &mut rng);
        let d = Matrix::from_diagonal(&[c(1.0, 1.0), c(-2.0, 0.5), c(3.0, 0.0), c(0.0, -1.0)]);
        let t = &(&q * &d) * &q.adjoint();
        let sd = distinct(&t, 5);
        for e in sd.e_diag() {
            assert!((e.norm() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn expansion_round_trips() {
        let mut rng = rng_from_seed(6);
        let t = gaussian_matrix(4, &mut rng);
        let sd = distinct(&t, 7);
        for which in [Basis::U, Basis::V] {
            let x = unit_vector(4, &mut rng);
            let back = synthesize(&expand_in_eigenbasis(&x, &sd, which), &sd, which);
            let diff: Vec<Complex> = back.iter().zip(&x).map(|(a, b)| a - b).collect();
            assert!(norm(&diff) < 1e-9);
            let zero = vec![c(0.0, 0.0); 4];
            assert!(expand_in_eigenbasis(&zero, &sd, which).iter().all(|z| z.norm() == 0.0));
        }
        let coeffs = expand_in_eigenbasis(&sd.u(2), &sd, Basis::U);
        for (j, z) in coeffs.iter().enumerate() {
            let want = if j == 2 { 1.0 } else { 0.0 };
            assert!((z - c(want, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn rephasing_preserves_validity() {
        let mut rng = rng_from_seed(8);
        let t = gaussian_matrix(4, &mut rng);
        let sd = distinct(&t, 9);
        let up: Vec<Complex> = (0..4).map(|_| unimodular(&mut rng)).collect();
        let vp: Vec<Complex> = (0..4).map(|_| unimodular(&mut rng)).collect();
        let re = sd.rephased(&up, &vp);
        re.validate(&t, &ToleranceConfig::default()).unwrap();
        assert!((biorthogonality_matrix(&re)[(1, 1)] - re.e_diag()[1]).norm() < 1e-14);
    }

    #[test]
    fn repeated_spectra_are_not_applicable() {
        let cfg = ToleranceConfig::default();
        for t in [Matrix::identity(4), fixtures::table3()[0].clone(), fixtures::table3()[2].clone()] {
            assert!(matches!(
                compute_spectral_data(&t, &cfg, 0).unwrap(),
                SpectralOutcome::NotApplicable { .. }
            ));
        }
    }

    #[test]
    fn from_vectors_rejects_non_eigenvectors() {
        let t = fixtures::section3_example();
        let cfg = ToleranceConfig::default();
        let sd = distinct(&t, 10);
        let mut bad = sd.u_basis().clone();
        bad.set_column(0, &sd.u(1));
        assert!(SpectralData::from_vectors(&t, sd.lambdas().to_vec(), bad, sd.v_basis().clone(), &cfg).is_err());
        assert!(SpectralData::from_vectors(
            &t,
            sd.lambdas().to_vec(),
            sd.u_basis().clone(),
            sd.v_basis().clone(),
            &cfg
        )
        .is_ok());
    }
}
