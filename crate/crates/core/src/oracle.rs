//! Ground truth that does not depend on eigenvectors.
//!
//! [`brute_force_uecsm`] searches the unitary orbit for a symmetric
//! representative by minimizing `|X - X^t|_F^2` with `X = Q* T Q`. The
//! remaining helpers cover closed forms for small nilpotents, zero padding
//! and the Cartesian decomposition.

use rayon::prelude::*;

use crate::linalg::{expm, hermitian_eigenvalues, transpose, unitary_factor, Complex, Matrix, ToleranceConfig};
use crate::random::{derive_seed, random_unitary, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Relative residual at or below which the orbit counts as symmetric.
    pub oracle_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 2000,
            oracle_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleOutcome {
    Uecsm,
    NotUecsm,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub outcome: OracleOutcome,
    /// Smallest `|Q* T Q - (Q* T Q)^t|_F / |T|_F` found.
    pub best_residual: f64,
    pub restarts_used: usize,
}

const BATCH: usize = 8;
const REUNITARIZE_EVERY: usize = 25;
const STAGNATION_WINDOW: usize = 100;
const STAGNATION_REL: f64 = 1e-9;
const ARMIJO: f64 = 1e-4;

/// `|X - X^t|_F` with `X = Q* T Q`.
pub fn symmetry_defect(t: &Matrix, q: &Matrix) -> f64 {
    objective(t, q).sqrt()
}

/// `g(Q) = |X - X^t|_F^2` with `X = Q* T Q`.
pub fn objective(t: &Matrix, q: &Matrix) -> f64 {
    let x = &(&q.adjoint() * t) * q;
    skew_part(&x).frobenius_norm().powi(2)
}

fn skew_part(x: &Matrix) -> Matrix {
    x - &transpose(x)
}

/// Gradient of `g` at `Q` in the right-trivialized tangent space: a
/// skew-Hermitian `Γ` with `d/dε g(Q exp(εK)) = Re tr(Γ* K)` at `ε = 0`.
pub fn riemannian_gradient(t: &Matrix, q: &Matrix) -> Matrix {
    let x = &(&q.adjoint() * t) * q;
    let r_adj = skew_part(&x).adjoint();
    let g = &(&r_adj * &x) - &(&x * &r_adj);
    (&g.adjoint() - &g).scale(Complex::new(2.0, 0.0))
}

fn real_inner(a: &Matrix, b: &Matrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x.conj() * y).re).sum()
}

struct Descent {
    residual: f64,
}

/// Steepest descent with Barzilai-Borwein steps and Armijo backtracking.
/// `t` must have unit Frobenius norm; `target` applies to `sqrt(g)`.
fn descend(t: &Matrix, mut q: Matrix, max_iters: usize, target: f64) -> Descent {
    let mut g = objective(t, &q);
    let mut grad = riemannian_gradient(t, &q);
    let mut step = 1.0;
    let mut history: Vec<f64> = Vec::with_capacity(max_iters + 1);
    history.push(g);
    for iter in 1..=max_iters {
        if g.sqrt() <= target {
            break;
        }
        let gnorm2 = real_inner(&grad, &grad);
        if gnorm2 <= f64::MIN_POSITIVE {
            break;
        }
        let direction = grad.scale(Complex::new(-1.0, 0.0));
        let mut accepted = None;
        let mut tau = step;
        for _ in 0..40 {
            let trial = match expm(&direction.scale(Complex::new(tau, 0.0))) {
                Ok(e) => &q * &e,
                Err(_) => break,
            };
            let gt = objective(t, &trial);
            if gt <= g - ARMIJO * tau * gnorm2 {
                accepted = Some((trial, gt));
                break;
            }
            tau *= 0.5;
        }
        let Some((mut q_new, g_new)) = accepted else {
            break;
        };
        if iter % REUNITARIZE_EVERY == 0 {
            if let Ok(p) = unitary_factor(&q_new) {
                q_new = p;
            }
        }
        let grad_new = riemannian_gradient(t, &q_new);
        // BB1 step from s = -tau * grad and y = grad_new - grad.
        let y = &grad_new - &grad;
        let sy = -tau * real_inner(&grad, &y);
        let ss = tau * tau * gnorm2;
        step = if sy > 0.0 { (ss / sy).clamp(1e-6, 1e6) } else { (2.0 * tau).min(1e6) };
        q = q_new;
        g = g_new;
        grad = grad_new;
        history.push(g);
        if history.len() > STAGNATION_WINDOW {
            let past = history[history.len() - 1 - STAGNATION_WINDOW];
            if past - g < STAGNATION_REL * past {
                break;
            }
        }
    }
    Descent { residual: g.sqrt() }
}

/// Multi-start search for a unitary `Q` making `Q* T Q` symmetric.
///
/// Restart 0 starts at the identity; restart `r` starts at a random unitary
/// seeded by `derive_seed(seed, r)`. Restarts run in parallel batches of 8
/// and the search stops after the first batch that reaches `oracle_tol`, so
/// the result is independent of scheduling.
pub fn brute_force_uecsm(t: &Matrix, oracle: &OracleConfig, seed: u64) -> OracleVerdict {
    let n = t.nrows();
    let scale = t.frobenius_norm();
    if scale == 0.0 || n <= 1 {
        return OracleVerdict {
            outcome: OracleOutcome::Uecsm,
            best_residual: 0.0,
            restarts_used: 0,
        };
    }
    let tn = t.scale(Complex::new(1.0 / scale, 0.0));
    let restarts = oracle.restarts.max(1);
    let target = 0.1 * oracle.oracle_tol;
    let mut best = f64::INFINITY;
    let mut used = 0;
    while used < restarts && best > oracle.oracle_tol {
        let end = (used + BATCH).min(restarts);
        let batch_best = (used..end)
            .into_par_iter()
            .map(|r| {
                let start = if r == 0 {
                    Matrix::identity(n)
                } else {
                    random_unitary(n, &mut rng_from_seed(derive_seed(seed, r as u64)))
                };
                descend(&tn, start, oracle.max_iters, target).residual
            })
            .reduce(|| f64::INFINITY, f64::min);
        best = best.min(batch_best);
        used = end;
    }
    let outcome = if best <= oracle.oracle_tol {
        OracleOutcome::Uecsm
    } else if best > 10.0 * oracle.oracle_tol {
        OracleOutcome::NotUecsm
    } else {
        OracleOutcome::Inconclusive
    };
    OracleVerdict {
        outcome,
        best_residual: best,
        restarts_used: used,
    }
}

/// `[[0, a, 0], [0, 0, b], [0, 0, 0]]`.
pub fn nilpotent3(a: Complex, b: Complex) -> Matrix {
    crate::fixtures::nilpotent3(a, b)
}

/// Closed form for [`nilpotent3`]: UECSM iff `ab = 0` or `|a| = |b|`.
/// Comparisons are relative to `max(|a|, |b|)`.
pub fn nilpotent3_verdict(a: Complex, b: Complex, cfg: &ToleranceConfig) -> OracleOutcome {
    let (ma, mb) = (a.norm(), b.norm());
    let scale = ma.max(mb);
    if scale == 0.0 || ma <= cfg.zero_tol * scale || mb <= cfg.zero_tol * scale || (ma - mb).abs() <= cfg.match_tol * scale
    {
        OracleOutcome::Uecsm
    } else {
        OracleOutcome::NotUecsm
    }
}

/// `t ⊕ 0_k`.
pub fn direct_sum_zero(t: &Matrix, k: usize) -> Matrix {
    let (r, c) = t.shape();
    Matrix::from_fn(r + k, c + k, |i, j| {
        if i < r && j < c {
            t[(i, j)]
        } else {
            Complex::new(0.0, 0.0)
        }
    })
}

/// `T = A + iB` with `A`, `B` Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianParts {
    pub a_part: Matrix,
    pub b_part: Matrix,
}

pub fn cartesian_parts(t: &Matrix) -> CartesianParts {
    let t_adj = t.adjoint();
    CartesianParts {
        a_part: (t + &t_adj).scale(Complex::new(0.5, 0.0)),
        b_part: (t - &t_adj).scale(Complex::new(0.0, -0.5)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Applicability {
    pub applicable: bool,
    pub reason: Option<String>,
}

/// Whether both Cartesian parts have simple spectra (gaps above
/// `eig_gap_tol * |T|_F`).
pub fn tener_applicable(t: &Matrix, cfg: &ToleranceConfig) -> Applicability {
    let parts = cartesian_parts(t);
    let threshold = cfg.eig_gap_tol * t.frobenius_norm().max(f64::MIN_POSITIVE);
    for (name, part) in [("A", &parts.a_part), ("B", &parts.b_part)] {
        let spec = match hermitian_eigenvalues(part) {
            Ok(s) => s,
            Err(e) => {
                return Applicability {
                    applicable: false,
                    reason: Some(format!("spectrum of {name} unavailable: {e}")),
                }
            }
        };
        for k in 1..spec.len() {
            if (spec[k - 1] - spec[k]).abs() <= threshold {
                return Applicability {
                    applicable: false,
                    reason: Some(format!(
                        "{name} has eigenvalues {} and {} equal to {:.6}",
                        k,
                        k + 1,
                        spec[k]
                    )),
                };
            }
        }
    }
    Applicability {
        applicable: true,
        reason: None,
    }
}
