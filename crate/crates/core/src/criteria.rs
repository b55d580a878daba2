//! The eigenvector criteria and the classification pipeline.
//!
//! Three necessary conditions (angles, Gram spectra, determinants) and the
//! cocycle condition, which is necessary and sufficient when the spectrum is
//! simple. A passing cocycle test is followed by the explicit construction
//! of a symmetric unitary `S` with `T = S T^t S*`.

use std::fmt;

use thiserror::Error;

use crate::conjugation::{construct_conjugation, ConjugationCertificate, ConjugationError};
use crate::eigensystem::{compute_spectral_data, Degeneracy, EigensystemError, SpectralData, SpectralOutcome};
use crate::linalg::{adjoint, determinant, hermitian_eigenvalues, Complex, LinalgError, Matrix, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestKind {
    Angle,
    Grammian,
    Parallelepiped,
    StrongAngle,
}

impl TestKind {
    pub const ALL: [TestKind; 4] = [
        TestKind::Angle,
        TestKind::Grammian,
        TestKind::Parallelepiped,
        TestKind::StrongAngle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::Angle => "angle",
            TestKind::Grammian => "grammian",
            TestKind::Parallelepiped => "parallelepiped",
            TestKind::StrongAngle => "strong-angle",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

/// The compared quantities at one index tuple. Indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub left: Complex,
    pub right: Complex,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestVerdict {
    pub kind: TestKind,
    pub outcome: Outcome,
    /// Largest discrepancy observed over all comparisons.
    pub max_discrepancy: f64,
    /// Threshold the discrepancy was compared against.
    pub threshold: f64,
    /// The worst comparison; always present on `Fail`.
    pub witness: Option<Witness>,
}

impl TestVerdict {
    fn from_worst(kind: TestKind, worst: Option<Witness>, threshold: f64) -> Self {
        let max_discrepancy = worst.as_ref().map_or(0.0, |w| w.discrepancy);
        let outcome = if max_discrepancy > threshold {
            Outcome::Fail
        } else {
            Outcome::Pass
        };
        Self {
            kind,
            outcome,
            max_discrepancy,
            threshold,
            witness: worst,
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

/// `gram_u = U* U` and `gram_v = V* V`; entry `(i, j)` of `gram_u` is
/// `<u_j, u_i>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramPair {
    pub gram_u: Matrix,
    pub gram_v: Matrix,
}

impl GramPair {
    /// `<u_i, u_j>`.
    pub fn uu(&self, i: usize, j: usize) -> Complex {
        self.gram_u[(j, i)]
    }

    /// `<v_i, v_j>`.
    pub fn vv(&self, i: usize, j: usize) -> Complex {
        self.gram_v[(j, i)]
    }

    pub fn n(&self) -> usize {
        self.gram_u.nrows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinalVerdict {
    Uecsm,
    NotUecsm,
    NotApplicable,
}

impl fmt::Display for FinalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FinalVerdict::Uecsm => "UECSM",
            FinalVerdict::NotUecsm => "not UECSM",
            FinalVerdict::NotApplicable => "not applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// Eigenvalues in lexicographic `(re, im)` order.
    pub lambdas: Vec<Complex>,
    pub verdicts: Vec<TestVerdict>,
    pub final_verdict: FinalVerdict,
    pub degeneracy: Option<Degeneracy>,
    pub certificate: Option<ConjugationCertificate>,
    pub spectral: Option<SpectralData>,
}

impl ClassificationReport {
    pub fn verdict(&self, kind: TestKind) -> Option<&TestVerdict> {
        self.verdicts.iter().find(|v| v.kind == kind)
    }

    /// Angle, Grammian and Parallelepiped pass while the cocycle test fails.
    pub fn is_near_miss(&self) -> bool {
        let pass = |k| self.verdict(k).is_some_and(|v| v.passed());
        pass(TestKind::Angle)
            && pass(TestKind::Grammian)
            && pass(TestKind::Parallelepiped)
            && self
                .verdict(TestKind::StrongAngle)
                .is_some_and(|v| v.outcome == Outcome::Fail)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Eigensystem(#[from] EigensystemError),
    #[error(transparent)]
    Conjugation(#[from] ConjugationError),
    #[error("constructed conjugation failed verification (worst residual {worst:.3e})")]
    Certificate { worst: f64 },
}

pub fn gram_pair(sd: &SpectralData) -> GramPair {
    let u = sd.u_basis();
    let v = sd.v_basis();
    GramPair {
        gram_u: &adjoint(u) * u,
        gram_v: &adjoint(v) * v,
    }
}

/// Every pair `i < j` with `| |<u_i,u_j>| - |<v_i,v_j>| | > match_tol`.
pub fn angle_violations(gp: &GramPair, cfg: &ToleranceConfig) -> Vec<Witness> {
    angle_witnesses(gp)
        .filter(|w| w.discrepancy > cfg.match_tol)
        .collect()
}

fn angle_witnesses(gp: &GramPair) -> impl Iterator<Item = Witness> + '_ {
    let n = gp.n();
    (0..n).flat_map(move |i| {
        (i + 1..n).map(move |j| {
            let left = gp.uu(i, j).norm();
            let right = gp.vv(i, j).norm();
            Witness {
                indices: vec![i + 1, j + 1],
                left: Complex::new(left, 0.0),
                right: Complex::new(right, 0.0),
                discrepancy: (left - right).abs(),
            }
        })
    })
}

fn worst(witnesses: impl Iterator<Item = Witness>) -> Option<Witness> {
    witnesses.fold(None, |best: Option<Witness>, w| match best {
        Some(b) if b.discrepancy >= w.discrepancy => Some(b),
        _ => Some(w),
    })
}

pub fn angle_test(gp: &GramPair, cfg: &ToleranceConfig) -> TestVerdict {
    TestVerdict::from_worst(TestKind::Angle, worst(angle_witnesses(gp)), cfg.match_tol)
}

/// Spectra of both Gram matrices, sorted descending.
pub fn gram_spectra(gp: &GramPair) -> Result<(Vec<f64>, Vec<f64>), LinalgError> {
    Ok((hermitian_eigenvalues(&gp.gram_u)?, hermitian_eigenvalues(&gp.gram_v)?))
}

pub fn grammian_test(gp: &GramPair, cfg: &ToleranceConfig) -> Result<TestVerdict, LinalgError> {
    let (su, sv) = gram_spectra(gp)?;
    let witnesses = su.iter().zip(&sv).enumerate().map(|(k, (a, b))| Witness {
        indices: vec![k + 1],
        left: Complex::new(*a, 0.0),
        right: Complex::new(*b, 0.0),
        discrepancy: (a - b).abs(),
    });
    let threshold = cfg.match_tol * gp.gram_u.frobenius_norm();
    Ok(TestVerdict::from_worst(TestKind::Grammian, worst(witnesses), threshold))
}

/// `(|det U|, |det V|)`.
pub fn determinant_moduli(sd: &SpectralData) -> Result<(f64, f64), LinalgError> {
    Ok((determinant(sd.u_basis())?.norm(), determinant(sd.v_basis())?.norm()))
}

pub fn parallelepiped_test(sd: &SpectralData, cfg: &ToleranceConfig) -> Result<TestVerdict, LinalgError> {
    let (du, dv) = determinant_moduli(sd)?;
    let w = Witness {
        indices: Vec::new(),
        left: Complex::new(du, 0.0),
        right: Complex::new(dv, 0.0),
        discrepancy: (du - dv).abs(),
    };
    Ok(TestVerdict::from_worst(TestKind::Parallelepiped, Some(w), cfg.match_tol))
}

/// `(<u_i,u_j><u_j,u_k><u_k,u_i>, conj(<v_i,v_j><v_j,v_k><v_k,v_i>))`,
/// 0-based indices.
pub fn cocycle_products(gp: &GramPair, i: usize, j: usize, k: usize) -> (Complex, Complex) {
    let left = gp.uu(i, j) * gp.uu(j, k) * gp.uu(k, i);
    let right = (gp.vv(i, j) * gp.vv(j, k) * gp.vv(k, i)).conj();
    (left, right)
}

/// All triples `i <= j <= k`, not all equal, as 0-based indices.
pub fn cocycle_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (i..n).flat_map(move |j| (j..n).filter(move |&k| !(i == j && j == k)).map(move |k| (i, j, k)))
    })
}

pub fn strong_angle_test(gp: &GramPair, cfg: &ToleranceConfig) -> TestVerdict {
    let witnesses = cocycle_triples(gp.n()).map(|(i, j, k)| {
        let (left, right) = cocycle_products(gp, i, j, k);
        Witness {
            indices: vec![i + 1, j + 1, k + 1],
            left,
            right,
            discrepancy: (left - right).norm(),
        }
    });
    TestVerdict::from_worst(TestKind::StrongAngle, worst(witnesses), cfg.match_tol)
}

/// Runs the full pipeline on `t`.
pub fn classify(t: &Matrix, cfg: &ToleranceConfig, seed: u64) -> Result<ClassificationReport, ClassifyError> {
    cfg.validate()?;
    if !t.is_finite() {
        let (row, col) = (0..t.nrows())
            .flat_map(|r| (0..t.ncols()).map(move |c| (r, c)))
            .find(|&(r, c)| !(t[(r, c)].re.is_finite() && t[(r, c)].im.is_finite()))
            .unwrap_or((0, 0));
        return Err(LinalgError::NonFinite { row, col }.into());
    }
    match compute_spectral_data(t, cfg, seed)? {
        SpectralOutcome::NotApplicable { lambdas, reason } => {
            let verdicts = TestKind::ALL
                .iter()
                .map(|&kind| TestVerdict {
                    kind,
                    outcome: Outcome::NotApplicable,
                    max_discrepancy: 0.0,
                    threshold: 0.0,
                    witness: None,
                })
                .collect();
            Ok(ClassificationReport {
                lambdas,
                verdicts,
                final_verdict: FinalVerdict::NotApplicable,
                degeneracy: Some(reason),
                certificate: None,
                spectral: None,
            })
        }
        SpectralOutcome::Distinct(sd) => classify_spectral(t, sd, cfg),
    }
}

/// Runs the four tests on already computed eigen-data, building and
/// verifying a conjugation when the cocycle test passes.
pub fn classify_spectral(
    t: &Matrix,
    sd: SpectralData,
    cfg: &ToleranceConfig,
) -> Result<ClassificationReport, ClassifyError> {
    let gp = gram_pair(&sd);
    let strong = strong_angle_test(&gp, cfg);
    let verdicts = vec![
        angle_test(&gp, cfg),
        grammian_test(&gp, cfg)?,
        parallelepiped_test(&sd, cfg)?,
        strong,
    ];
    let (final_verdict, certificate) = if verdicts[3].passed() {
        let cert = construct_conjugation(t, &sd, cfg)?;
        if !cert.is_valid(cfg) {
            return Err(ClassifyError::Certificate {
                worst: cert.worst_residual(),
            });
        }
        (FinalVerdict::Uecsm, Some(cert))
    } else {
        (FinalVerdict::NotUecsm, None)
    };
    Ok(ClassificationReport {
        lambdas: sd.lambdas().to_vec(),
        verdicts,
        final_verdict,
        degeneracy: None,
        certificate,
        spectral: Some(sd),
    })
}
