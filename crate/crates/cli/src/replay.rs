//! Replays the built-in fixture corpus against the classifier and oracle.

use uecsm::fixtures::{corpus, ExpectedCriteria, Fixture};
use uecsm::oracle::{brute_force_uecsm, OracleConfig, OracleOutcome};
use uecsm::{classify, FinalVerdict, ToleranceConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureRow {
    pub name: String,
    pub group: &'static str,
    pub expected_criteria: ExpectedCriteria,
    /// `None` on numerical failure.
    pub criteria: Option<FinalVerdict>,
    pub expected_uecsm: bool,
    pub oracle: Option<OracleOutcome>,
    pub ok: bool,
}

fn matches(expected: ExpectedCriteria, got: FinalVerdict) -> bool {
    matches!(
        (expected, got),
        (ExpectedCriteria::Uecsm, FinalVerdict::Uecsm)
            | (ExpectedCriteria::NotUecsm, FinalVerdict::NotUecsm)
            | (ExpectedCriteria::NotApplicable, FinalVerdict::NotApplicable)
    )
}

/// Runs one fixture. The oracle runs when the criteria do not apply, or
/// for every fixture when `force_oracle` is set.
pub fn replay_fixture(
    f: &Fixture,
    cfg: &ToleranceConfig,
    oracle: &OracleConfig,
    seed: u64,
    force_oracle: bool,
) -> FixtureRow {
    let criteria = classify(&f.matrix, cfg, seed).ok().map(|r| r.final_verdict);
    let run_oracle = force_oracle || criteria != Some(FinalVerdict::Uecsm) && criteria != Some(FinalVerdict::NotUecsm);
    let oracle_outcome = run_oracle.then(|| brute_force_uecsm(&f.matrix, oracle, seed).outcome);
    let criteria_ok = criteria.is_some_and(|c| matches(f.criteria, c));
    let expected_oracle = if f.uecsm { OracleOutcome::Uecsm } else { OracleOutcome::NotUecsm };
    let oracle_ok = oracle_outcome.is_none_or(|o| o == expected_oracle);
    FixtureRow {
        name: f.name.clone(),
        group: f.group,
        expected_criteria: f.criteria,
        criteria,
        expected_uecsm: f.uecsm,
        oracle: oracle_outcome,
        ok: criteria_ok && oracle_ok,
    }
}

pub fn replay(
    only: Option<&str>,
    cfg: &ToleranceConfig,
    oracle: &OracleConfig,
    seed: u64,
    force_oracle: bool,
) -> Vec<FixtureRow> {
    corpus()
        .iter()
        .filter(|f| only.is_none_or(|g| f.group == g))
        .map(|f| replay_fixture(f, cfg, oracle, seed, force_oracle))
        .collect()
}

fn criteria_label(c: Option<FinalVerdict>) -> &'static str {
    match c {
        Some(FinalVerdict::Uecsm) => "Yes",
        Some(FinalVerdict::NotUecsm) => "No",
        Some(FinalVerdict::NotApplicable) => "n/a",
        None => "error",
    }
}

fn expected_label(c: ExpectedCriteria) -> &'static str {
    match c {
        ExpectedCriteria::Uecsm => "Yes",
        ExpectedCriteria::NotUecsm => "No",
        ExpectedCriteria::NotApplicable => "n/a",
    }
}

pub fn render_table(rows: &[FixtureRow]) -> String {
    let mut out = format!(
        "{:<16} {:<28} {:>9} {:>9} {:>9} {:>13}  {}\n",
        "group", "fixture", "expected", "criteria", "uecsm", "oracle", "status"
    );
    for r in rows {
        let oracle = match r.oracle {
            Some(OracleOutcome::Uecsm) => "Yes",
            Some(OracleOutcome::NotUecsm) => "No",
            Some(OracleOutcome::Inconclusive) => "Inconclusive",
            None => "-",
        };
        out.push_str(&format!(
            "{:<16} {:<28} {:>9} {:>9} {:>9} {:>13}  {}\n",
            r.group,
            r.name,
            expected_label(r.expected_criteria),
            criteria_label(r.criteria),
            if r.expected_uecsm { "Yes" } else { "No" },
            oracle,
            if r.ok { "ok" } else { "MISMATCH" }
        ));
    }
    let failed = rows.iter().filter(|r| !r.ok).count();
    out.push_str(&format!("{} fixtures, {} mismatches\n", rows.len(), failed));
    out
}
