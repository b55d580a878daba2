//! Random integer-matrix search for near misses: matrices passing the
//! angle, Gram-spectrum and determinant tests but failing the cocycle test.

use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use uecsm::random::{derive_seed, rng_from_seed};
use uecsm::{classify, Complex, FinalVerdict, Matrix, ToleranceConfig};

use crate::document::MatrixDocument;

const CHUNK: usize = 4096;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub count: usize,
    pub dim: usize,
    pub range: i64,
    pub seed: u64,
    pub cfg: ToleranceConfig,
    /// Replaces candidate 0.
    pub inject: Option<Matrix>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTally {
    pub examined: usize,
    pub not_applicable: usize,
    pub numerical_failures: usize,
    pub uecsm: usize,
    pub not_uecsm: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub index: usize,
    pub matrix: MatrixDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub count: usize,
    pub dim: usize,
    pub range: i64,
    pub seed: u64,
    pub tally: SearchTally,
    pub hits: Vec<Hit>,
}

enum Status {
    NotApplicable,
    Failure,
    Uecsm,
    NotUecsm { near_miss: bool },
}

/// Candidate `index`: i.i.d. integers uniform on `[-range, range]` from the
/// seed `derive_seed(seed, index)`.
pub fn candidate(sc: &SearchConfig, index: usize) -> Matrix {
    if index == 0 {
        if let Some(m) = &sc.inject {
            return m.clone();
        }
    }
    let mut rng = rng_from_seed(derive_seed(sc.seed, index as u64));
    let n = sc.dim;
    let values: Vec<i64> = (0..n * n).map(|_| rng.random_range(-sc.range..=sc.range)).collect();
    Matrix::from_fn(n, n, |r, c| Complex::new(values[r * n + c] as f64, 0.0))
}

fn examine(sc: &SearchConfig, index: usize) -> (Status, Matrix) {
    let m = candidate(sc, index);
    let status = match classify(&m, &sc.cfg, derive_seed(sc.seed ^ 0x5eed, index as u64)) {
        Err(_) => Status::Failure,
        Ok(r) => match r.final_verdict {
            FinalVerdict::NotApplicable => Status::NotApplicable,
            FinalVerdict::Uecsm => Status::Uecsm,
            FinalVerdict::NotUecsm => Status::NotUecsm {
                near_miss: r.is_near_miss(),
            },
        },
    };
    (status, m)
}

/// Examines every candidate on the rayon pool. Results are collected in
/// candidate order, so the summary depends only on the configuration.
pub fn run_search(sc: &SearchConfig) -> SearchSummary {
    let mut tally = SearchTally::default();
    let mut hits = Vec::new();
    let mut start = 0;
    while start < sc.count {
        let end = (start + CHUNK).min(sc.count);
        let results: Vec<(usize, Status, Matrix)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let (s, m) = examine(sc, i);
                (i, s, m)
            })
            .collect();
        for (index, status, m) in results {
            tally.examined += 1;
            match status {
                Status::NotApplicable => tally.not_applicable += 1,
                Status::Failure => tally.numerical_failures += 1,
                Status::Uecsm => tally.uecsm += 1,
                Status::NotUecsm { near_miss } => {
                    tally.not_uecsm += 1;
                    if near_miss {
                        hits.push(Hit {
                            index,
                            matrix: MatrixDocument::from_matrix(&m, Some(format!("search hit {index}"))),
                        });
                    }
                }
            }
        }
        start = end;
    }
    SearchSummary {
        count: sc.count,
        dim: sc.dim,
        range: sc.range,
        seed: sc.seed,
        tally,
        hits,
    }
}

/// Writes `hits.json` and one `hit-<index>.json` matrix document per hit.
pub fn write_hits(summary: &SearchSummary, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut list = serde_json::to_string_pretty(summary).expect("summary serializes");
    list.push('\n');
    std::fs::write(dir.join("hits.json"), list)?;
    for hit in &summary.hits {
        std::fs::write(dir.join(format!("hit-{:08}.json", hit.index)), hit.matrix.to_json())?;
    }
    Ok(())
}
