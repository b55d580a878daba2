//! JSON matrix documents.
//!
//! ```json
//! { "format_version": 1, "n": 2, "label": "example",
//!   "entries": [[[1, 0], [0, 2]], [[0, 0], [3, -1]]] }
//! ```
//!
//! Each entry is an `[re, im]` pair.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use uecsm::{Complex, Matrix};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub format_version: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("invalid matrix: {0}")]
    Shape(String),
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix, label: Option<String>) -> Self {
        let entries = (0..m.nrows())
            .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            n: m.nrows(),
            label,
            entries,
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        doc.check()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, DocumentError> {
        let text = std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    fn check(&self) -> Result<(), DocumentError> {
        if self.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.format_version));
        }
        if self.n == 0 {
            return Err(DocumentError::Shape("n must be at least 1".into()));
        }
        if self.entries.len() != self.n {
            return Err(DocumentError::Shape(format!(
                "expected {} rows, found {}",
                self.n,
                self.entries.len()
            )));
        }
        for (r, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(DocumentError::Shape(format!(
                    "row {} has {} entries, expected {}",
                    r + 1,
                    row.len(),
                    self.n
                )));
            }
            if let Some(c) = row.iter().position(|z| !(z[0].is_finite() && z[1].is_finite())) {
                return Err(DocumentError::Shape(format!("entry ({}, {}) is not finite", r + 1, c + 1)));
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |r, c| {
            let [re, im] = self.entries[r][c];
            Complex::new(re, im)
        })
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(k) => message[..k].to_string(),
        None => message.to_string(),
    }
}
