//! Machine-readable classification reports and their text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use uecsm::criteria::{Outcome, TestVerdict, Witness};
use uecsm::oracle::{Applicability, OracleOutcome, OracleVerdict};
use uecsm::{ClassificationReport, Complex, FinalVerdict, Matrix, ToleranceConfig};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FinalField {
    #[serde(rename = "UECSM")]
    Uecsm,
    #[serde(rename = "NotUECSM")]
    NotUecsm,
    NotApplicable,
}

impl From<FinalVerdict> for FinalField {
    fn from(v: FinalVerdict) -> Self {
        match v {
            FinalVerdict::Uecsm => FinalField::Uecsm,
            FinalVerdict::NotUecsm => FinalField::NotUecsm,
            FinalVerdict::NotApplicable => FinalField::NotApplicable,
        }
    }
}

impl FinalField {
    pub fn exit_code(self) -> i32 {
        match self {
            FinalField::Uecsm => 0,
            FinalField::NotUecsm => 1,
            FinalField::NotApplicable => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    /// 1-based indices in lexicographic eigenvalue order.
    pub indices: Vec<usize>,
    pub left: [f64; 2],
    pub right: [f64; 2],
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub test: String,
    pub outcome: String,
    pub max_discrepancy: f64,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplicabilityRecord {
    pub distinct_spectrum: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub cartesian_parts_simple: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartesian_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub s: Vec<Vec<[f64; 2]>>,
    pub alphas: Vec<[f64; 2]>,
    pub residual_symmetry: f64,
    pub residual_unitarity: f64,
    pub residual_intertwine: f64,
    pub residual_eigvec: f64,
    /// Absent when no β ratio needed a division.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_division_magnitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub outcome: String,
    pub best_residual: f64,
    pub restarts_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancesRecord {
    pub eig_gap_tol: f64,
    pub zero_tol: f64,
    pub match_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub spectrum: Vec<[f64; 2]>,
    pub applicability: ApplicabilityRecord,
    pub verdicts: Vec<VerdictRecord>,
    #[serde(rename = "final")]
    pub final_verdict: FinalField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleRecord>,
    pub tolerances: TolerancesRecord,
    pub seed: u64,
}

fn pair(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

fn rows(m: &Matrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().map(pair).collect()).collect()
}

pub fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::NotApplicable => "n/a",
    }
}

pub fn oracle_name(o: OracleOutcome) -> &'static str {
    match o {
        OracleOutcome::Uecsm => "UECSM",
        OracleOutcome::NotUecsm => "NotUECSM",
        OracleOutcome::Inconclusive => "Inconclusive",
    }
}

fn witness_record(w: &Witness) -> WitnessRecord {
    WitnessRecord {
        indices: w.indices.clone(),
        left: pair(w.left),
        right: pair(w.right),
        discrepancy: w.discrepancy,
    }
}

fn verdict_record(v: &TestVerdict) -> VerdictRecord {
    VerdictRecord {
        test: v.kind.name().to_string(),
        outcome: outcome_name(v.outcome).to_string(),
        max_discrepancy: v.max_discrepancy,
        threshold: v.threshold,
        witness: v.witness.as_ref().map(witness_record),
    }
}

pub struct ReportInputs<'a> {
    pub label: Option<String>,
    pub n: usize,
    pub report: &'a ClassificationReport,
    pub cartesian: &'a Applicability,
    pub oracle: Option<&'a OracleVerdict>,
    pub cfg: &'a ToleranceConfig,
    pub seed: u64,
}

impl ReportDocument {
    pub fn build(inputs: ReportInputs<'_>) -> Self {
        let r = inputs.report;
        let certificate = r.certificate.as_ref().map(|c| CertificateRecord {
            s: rows(&c.s),
            alphas: c.alphas.alphas.iter().copied().map(pair).collect(),
            residual_symmetry: c.residual_symmetry,
            residual_unitarity: c.residual_unitarity,
            residual_intertwine: c.residual_intertwine,
            residual_eigvec: c.residual_eigvec,
            min_division_magnitude: c.min_division_magnitude.is_finite().then_some(c.min_division_magnitude),
        });
        Self {
            format_version: FORMAT_VERSION,
            label: inputs.label,
            n: inputs.n,
            spectrum: r.lambdas.iter().copied().map(pair).collect(),
            applicability: ApplicabilityRecord {
                distinct_spectrum: r.degeneracy.is_none(),
                reason: r.degeneracy.as_ref().map(|d| d.to_string()),
                cartesian_parts_simple: inputs.cartesian.applicable,
                cartesian_reason: inputs.cartesian.reason.clone(),
            },
            verdicts: r.verdicts.iter().map(verdict_record).collect(),
            final_verdict: r.final_verdict.into(),
            certificate,
            oracle: inputs.oracle.map(|o| OracleRecord {
                outcome: oracle_name(o.outcome).to_string(),
                best_residual: o.best_residual,
                restarts_used: o.restarts_used,
            }),
            tolerances: TolerancesRecord {
                eig_gap_tol: inputs.cfg.eig_gap_tol,
                zero_tol: inputs.cfg.zero_tol,
                match_tol: inputs.cfg.match_tol,
            },
            seed: inputs.seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn exit_code(&self) -> i32 {
        self.final_verdict.exit_code()
    }
}

fn fmt_c(z: [f64; 2]) -> String {
    let [re, im] = z;
    let clean = |x: f64| if x.abs() < 5e-16 { 0.0 } else { x };
    let (re, im) = (clean(re), clean(im));
    if im == 0.0 {
        format!("{re:.6}")
    } else if im < 0.0 {
        format!("{re:.6}-{:.6}i", -im)
    } else {
        format!("{re:.6}+{im:.6}i")
    }
}

pub fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "matrix: {} ({}x{})",
        doc.label.as_deref().unwrap_or("<unlabelled>"),
        doc.n,
        doc.n
    );
    let spec: Vec<String> = doc.spectrum.iter().copied().map(fmt_c).collect();
    let _ = writeln!(out, "spectrum: {}", spec.join(", "));
    match &doc.applicability.reason {
        Some(r) => {
            let _ = writeln!(out, "criteria: not applicable ({r})");
        }
        None => {
            for v in &doc.verdicts {
                let _ = write!(out, "  {:<15} {:<4} max discrepancy {:.3e}", v.test, v.outcome, v.max_discrepancy);
                if let (Some(w), true) = (&v.witness, v.outcome == "fail") {
                    let idx: Vec<String> = w.indices.iter().map(|i| i.to_string()).collect();
                    let at = if idx.is_empty() {
                        String::new()
                    } else {
                        format!(" at ({})", idx.join(","))
                    };
                    let _ = write!(out, "{at}: {} vs {}", fmt_c(w.left), fmt_c(w.right));
                }
                out.push('\n');
            }
        }
    }
    let _ = writeln!(
        out,
        "cartesian parts simple: {}{}",
        if doc.applicability.cartesian_parts_simple { "yes" } else { "no" },
        doc.applicability
            .cartesian_reason
            .as_ref()
            .map(|r| format!(" ({r})"))
            .unwrap_or_default()
    );
    if let Some(c) = &doc.certificate {
        out.push_str("symmetric unitary S:\n");
        for row in &c.s {
            let cells: Vec<String> = row.iter().map(|z| format!("{:>22}", fmt_c(*z))).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
        let alphas: Vec<String> = c.alphas.iter().copied().map(fmt_c).collect();
        let _ = writeln!(out, "alpha: {}", alphas.join(", "));
        let _ = writeln!(
            out,
            "residuals: symmetry {:.2e}, unitarity {:.2e}, intertwine {:.2e}, eigenvector {:.2e}",
            c.residual_symmetry, c.residual_unitarity, c.residual_intertwine, c.residual_eigvec
        );
    }
    if let Some(o) = &doc.oracle {
        let _ = writeln!(
            out,
            "oracle: {} (best residual {:.3e}, {} restarts)",
            o.outcome, o.best_residual, o.restarts_used
        );
    }
    let verdict = match doc.final_verdict {
        FinalField::Uecsm => "UECSM",
        FinalField::NotUecsm => "not UECSM",
        FinalField::NotApplicable => "not applicable",
    };
    let _ = writeln!(out, "verdict: {verdict}");
    out
}
