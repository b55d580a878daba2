//! Reference matrices with known verdicts.
//!
//! Each fixture carries the expected outcome of the eigenvector criteria
//! (which need distinct eigenvalues) and, separately, the ground-truth
//! answer used to check the brute-force oracle.

use crate::linalg::{Complex, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedCriteria {
    Uecsm,
    NotUecsm,
    NotApplicable,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub group: &'static str,
    pub matrix: Matrix,
    pub criteria: ExpectedCriteria,
    /// True when the matrix is unitarily equivalent to a complex symmetric one.
    pub uecsm: bool,
}

pub const GROUPS: [&str; 7] = [
    "section1-family",
    "section3",
    "section6",
    "example64",
    "table1",
    "table2",
    "table3",
];

/// `[[0, 7, 0], [0, 1, s], [0, 0, 6]]`; UECSM exactly when `|s| = 5` among
/// the integers 2..=6.
pub fn section1_family(s: f64) -> Matrix {
    Matrix::from_real_rows(&[[0.0, 7.0, 0.0], [0.0, 1.0, s], [0.0, 0.0, 6.0]])
}

pub fn section3_example() -> Matrix {
    Matrix::from_real_rows(&[[0.0, 1.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]])
}

pub fn section6_example() -> Matrix {
    section1_family(-5.0)
}

/// Published eigenvectors of [`section6_example`] in the order
/// `λ = 6, 1, 0`: returns `(lambdas, U, V)`.
pub fn section6_published_vectors() -> (Vec<Complex>, Matrix, Matrix) {
    let r2 = 2f64.sqrt();
    let lambdas = vec![Complex::new(6.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
    let u = Matrix::from_real_rows(&[
        [-7.0 / 11.0, 7.0 / (5.0 * r2), 1.0],
        [-6.0 / 11.0, 1.0 / (5.0 * r2), 0.0],
        [6.0 / 11.0, 0.0, 0.0],
    ]);
    let v = Matrix::from_real_rows(&[
        [0.0, 0.0, -6.0 / 55.0],
        [0.0, 1.0 / r2, 42.0 / 55.0],
        [1.0, 1.0 / r2, 7.0 / 11.0],
    ]);
    (lambdas, u, v)
}

/// Published symmetric unitary for [`section6_example`].
pub fn section6_published_s() -> Matrix {
    Matrix::from_real_rows(&[
        [6.0 / 55.0, -42.0 / 55.0, -7.0 / 11.0],
        [-42.0 / 55.0, 19.0 / 55.0, -6.0 / 11.0],
        [-7.0 / 11.0, -6.0 / 11.0, 6.0 / 11.0],
    ])
}

/// 4x4 integer matrix passing the angle, Gram-spectrum and parallelepiped
/// tests while failing the cocycle test.
pub fn counterexample_4x4() -> Matrix {
    Matrix::from_real_rows(&[
        [5.0, 0.0, -1.0, 3.0],
        [2.0, 4.0, 1.0, 2.0],
        [2.0, -2.0, 6.0, -2.0],
        [0.0, -2.0, 1.0, 4.0],
    ])
}

/// Eigenvalues of [`counterexample_4x4`] in published order.
pub fn counterexample_published_lambdas() -> [Complex; 4] {
    let s5 = 5f64.sqrt();
    let s15 = 15f64.sqrt();
    [
        Complex::new(5.0, s5),
        Complex::new(5.0, -s5),
        Complex::new(4.5, s15 / 2.0),
        Complex::new(4.5, -s15 / 2.0),
    ]
}

/// Distinct spectrum, one Cartesian part with a repeated eigenvalue.
/// Rows 3 and 4 are unitary conjugates of rows 1 and 2.
pub fn table1() -> [Matrix; 4] {
    [
        Matrix::from_real_rows(&[
            [2.0, 0.0, 0.0, 0.0],
            [0.0, 4.0, 0.0, 0.0],
            [0.0, 0.0, 8.0, 4.0],
            [0.0, 0.0, 0.0, -2.0],
        ]),
        Matrix::from_real_rows(&[
            [2.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 4.0, 0.0],
            [0.0, 0.0, 0.0, 2.0],
            [0.0, 8.0, 0.0, 0.0],
        ]),
        Matrix::from_real_rows(&[
            [4.0, 1.0, -1.0, -2.0],
            [3.0, 2.0, -4.0, 1.0],
            [-1.0, -2.0, 4.0, 1.0],
            [-4.0, 1.0, 3.0, 2.0],
        ]),
        Matrix::from_real_rows(&[
            [4.0, -1.0, 1.0, -2.0],
            [-2.0, 1.0, -1.0, 4.0],
            [-1.0, 4.0, -2.0, 1.0],
            [1.0, -2.0, 4.0, -1.0],
        ]),
    ]
}

pub const TABLE1_UECSM: [bool; 4] = [true, false, true, false];

/// Nilpotent 3x3 matrices (`σ(T) = {0, 0, 0}`) with simple Cartesian parts.
pub fn table2() -> [Matrix; 4] {
    [
        nilpotent3(Complex::new(18.0, 0.0), Complex::new(0.0, 18.0)),
        nilpotent3(Complex::new(18.0, 0.0), Complex::new(0.0, 9.0)),
        Matrix::from_complex_rows(&[
            [(8.0, 4.0), (4.0, 8.0), (-8.0, 8.0)],
            [(-8.0, 2.0), (-4.0, 4.0), (8.0, 4.0)],
            [(4.0, -4.0), (2.0, -8.0), (-4.0, -8.0)],
        ]),
        Matrix::from_complex_rows(&[
            [(8.0, 2.0), (4.0, 4.0), (-8.0, 4.0)],
            [(-8.0, 1.0), (-4.0, 2.0), (8.0, 2.0)],
            [(4.0, -2.0), (2.0, -4.0), (-4.0, -4.0)],
        ]),
    ]
}

pub const TABLE2_UECSM: [bool; 4] = [true, false, true, false];

/// `σ(T) = {0, 0, 0, c}` and a Cartesian part with a repeated eigenvalue.
pub fn table3() -> [Matrix; 4] {
    [
        Matrix::from_real_rows(&[
            [4.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 8.0, 0.0],
            [0.0, 0.0, 0.0, 8.0],
            [0.0, 0.0, 0.0, 0.0],
        ]),
        Matrix::from_real_rows(&[
            [8.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 4.0, 0.0],
            [0.0, 0.0, 0.0, 8.0],
            [0.0, 0.0, 0.0, 0.0],
        ]),
        Matrix::from_real_rows(&[
            [5.0, 1.0, -3.0, 1.0],
            [1.0, -3.0, 1.0, 5.0],
            [1.0, 5.0, 1.0, -3.0],
            [-3.0, 1.0, 5.0, 1.0],
        ]),
        Matrix::from_real_rows(&[
            [5.0, 1.0, -1.0, 3.0],
            [3.0, -1.0, 1.0, 5.0],
            [1.0, 5.0, 3.0, -1.0],
            [-1.0, 3.0, 5.0, 1.0],
        ]),
    ]
}

pub const TABLE3_UECSM: [bool; 4] = [true, false, true, false];

/// `[[0, a, 0], [0, 0, b], [0, 0, 0]]`.
pub fn nilpotent3(a: Complex, b: Complex) -> Matrix {
    let z = Complex::new(0.0, 0.0);
    Matrix::from_rows(&[vec![z, a, z], vec![z, z, b], vec![z, z, z]]).expect("finite 3x3")
}

/// Every fixture, in group order.
pub fn corpus() -> Vec<Fixture> {
    use ExpectedCriteria::*;
    let mut out = Vec::new();
    for s in 2..=6 {
        let uecsm = s == 5;
        out.push(Fixture {
            name: format!("family s={s}"),
            group: "section1-family",
            matrix: section1_family(s as f64),
            criteria: if uecsm { Uecsm } else { NotUecsm },
            uecsm,
        });
    }
    out.push(Fixture {
        name: "[[0,1,1],[0,1,0],[0,0,2]]".into(),
        group: "section3",
        matrix: section3_example(),
        criteria: NotUecsm,
        uecsm: false,
    });
    out.push(Fixture {
        name: "[[0,7,0],[0,1,-5],[0,0,6]]".into(),
        group: "section6",
        matrix: section6_example(),
        criteria: Uecsm,
        uecsm: true,
    });
    out.push(Fixture {
        name: "4x4 counterexample".into(),
        group: "example64",
        matrix: counterexample_4x4(),
        criteria: NotUecsm,
        uecsm: false,
    });
    for (k, m) in table1().into_iter().enumerate() {
        out.push(Fixture {
            name: format!("table 1 row {}", k + 1),
            group: "table1",
            matrix: m,
            criteria: if TABLE1_UECSM[k] { Uecsm } else { NotUecsm },
            uecsm: TABLE1_UECSM[k],
        });
    }
    for (k, m) in table2().into_iter().enumerate() {
        out.push(Fixture {
            name: format!("table 2 row {}", k + 1),
            group: "table2",
            matrix: m,
            criteria: NotApplicable,
            uecsm: TABLE2_UECSM[k],
        });
    }
    for (k, m) in table3().into_iter().enumerate() {
        out.push(Fixture {
            name: format!("table 3 row {}", k + 1),
            group: "table3",
            matrix: m,
            criteria: NotApplicable,
            uecsm: TABLE3_UECSM[k],
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, sort_lexicographic};

    #[test]
    fn corpus_covers_every_group() {
        let corpus = corpus();
        for g in GROUPS {
            assert!(corpus.iter().any(|f| f.group == g), "missing group {g}");
        }
        assert_eq!(corpus.iter().filter(|f| f.group == "table3").count(), 4);
    }

    #[test]
    fn published_vectors_are_eigenvectors() {
        let t = section6_example();
        let (lambdas, u, v) = section6_published_vectors();
        for i in 0..3 {
            let tu = t.mul_vec(&u.column(i));
            let tv = t.adjoint().mul_vec(&v.column(i));
            for r in 0..3 {
                assert!((tu[r] - lambdas[i] * u[(r, i)]).norm() < 1e-14);
                assert!((tv[r] - lambdas[i].conj() * v[(r, i)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rotated_rows_share_spectra() {
        let t1 = table1();
        for (a, b) in [(0, 2), (1, 3)] {
            let mut ea = eigenvalues(&t1[a]).unwrap();
            let mut eb = eigenvalues(&t1[b]).unwrap();
            sort_lexicographic(&mut ea);
            sort_lexicographic(&mut eb);
            for (x, y) in ea.iter().zip(&eb) {
                assert!((x - y).norm() < 1e-9);
            }
            // Unitarily equivalent matrices share the Frobenius norm.
            assert!((t1[a].frobenius_norm() - t1[b].frobenius_norm()).abs() < 1e-12);
        }
    }
}
