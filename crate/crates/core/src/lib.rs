//! Decide whether a square complex matrix with distinct eigenvalues is
//! unitarily equivalent to a complex symmetric matrix (UECSM), by comparing
//! the geometry of the eigenvectors of `T` with that of `T*`, and build the
//! symmetric unitary `S` with `T = S T^t S*` when it is.
//!
//! Pipeline: [`eigensystem::compute_spectral_data`] pairs the eigenvectors
//! of `T` and `T*`; [`criteria`] runs the angle, Gram-spectrum,
//! parallelepiped and strong (cocycle) tests; [`conjugation`] completes the
//! unimodular ratio matrix and assembles `S`. [`oracle`] is an independent
//! brute-force search over the unitary orbit together with closed-form
//! special cases.

pub mod conjugation;
pub mod criteria;
pub mod eigensystem;
pub mod fixtures;
pub mod linalg;
pub mod oracle;
pub mod random;

pub use criteria::{classify, ClassificationReport, ClassifyError, FinalVerdict};
pub use linalg::{Complex, Matrix, ToleranceConfig};
