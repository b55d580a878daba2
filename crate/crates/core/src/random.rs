//! Seeded random sources: complex Gaussian matrices, Haar-ish unitaries and
//! per-task seed derivation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{normalized, unitary_factor, Complex, Matrix};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a master seed with a task index (splitmix64 finalizer), so that
/// parallel workers get independent, schedule-free streams.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Square matrix with independent standard complex normal entries
/// (real and imaginary parts each N(0, 1)).
pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Real matrix with N(0, 1) entries.
pub fn real_gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(n, n, |_, _| Complex::new(rng.sample(StandardNormal), 0.0))
}

pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex> {
    loop {
        let v: Vec<Complex> = (0..n).map(|_| gaussian(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

/// Unitary factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    unitary_factor(&gaussian_matrix(n, rng)).expect("square input")
}

/// Complex symmetric matrix `(G + G^t)/2` with Gaussian `G`.
pub fn random_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let g = gaussian_matrix(n, rng);
    (&g + &g.transpose()).scale(Complex::new(0.5, 0.0))
}

/// Random unimodular scalar.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex::from_polar(1.0, theta)
}
