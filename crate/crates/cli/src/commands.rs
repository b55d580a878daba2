use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use uecsm::fixtures::GROUPS;
use uecsm::oracle::{brute_force_uecsm, tener_applicable, OracleConfig};
use uecsm::{classify, FinalVerdict, ToleranceConfig};

use crate::document::{DocumentError, MatrixDocument};
use crate::replay::{render_table, replay};
use crate::report::{render_text, ReportDocument, ReportInputs};
use crate::search::{run_search, write_hits, SearchConfig};

pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "uecsm", version, about = "Test whether a matrix is unitarily equivalent to a complex symmetric matrix")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the matrix stored in a JSON document.
    Classify(ClassifyArgs),
    /// Hunt for random integer matrices that pass every necessary test but fail the cocycle test.
    Search(SearchArgs),
    /// Replay the built-in reference matrices.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Relative eigenvalue separation required to call the spectrum simple.
    #[arg(long, default_value_t = ToleranceConfig::default().eig_gap_tol)]
    pub eig_gap_tol: f64,
    /// Magnitude below which inner products and residuals count as zero.
    #[arg(long, default_value_t = ToleranceConfig::default().zero_tol)]
    pub zero_tol: f64,
    /// Tolerance for equality of magnitudes and triple products.
    #[arg(long, default_value_t = ToleranceConfig::default().match_tol)]
    pub match_tol: f64,
}

impl ToleranceArgs {
    fn config(&self) -> Result<ToleranceConfig, String> {
        ToleranceConfig::new(self.eig_gap_tol, self.zero_tol, self.match_tol).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Restarts for the unitary-orbit search.
    #[arg(long, default_value_t = OracleConfig::default().restarts)]
    pub restarts: usize,
    /// Iteration cap per restart.
    #[arg(long, default_value_t = OracleConfig::default().max_iters)]
    pub max_iters: usize,
}

impl OracleArgs {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            ..OracleConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub path: PathBuf,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub oracle_args: OracleArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the machine-readable report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Run the oracle even when the eigenvector criteria apply.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(3..))]
    pub dim: u64,
    /// Entries are drawn uniformly from [-range, range].
    #[arg(long, default_value_t = 9)]
    pub range: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving hits.json and one document per hit.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replace candidate 0 with a built-in matrix (only `example64`).
    #[arg(long, value_parser = ["example64"])]
    pub inject: Option<String>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// Restrict to one group.
    #[arg(long, value_parser = GROUPS)]
    pub only: Option<String>,
    /// Run the oracle on every fixture.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub oracle_args: OracleArgs,
}

/// Output of a command: text for standard output, text for standard error,
/// and the process exit code.
#[derive(Debug, Default)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CommandOutput {
    fn error(code: i32, message: String) -> Self {
        Self {
            stdout: String::new(),
            stderr: message,
            code,
        }
    }
}

pub fn run(cli: &Cli) -> CommandOutput {
    match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Search(a) => cmd_search(a),
        Command::Fixtures(a) => cmd_fixtures(a),
    }
}

/// Classifies a document. The oracle runs when the spectrum is not simple,
/// or always when `force_oracle` is set.
pub fn classify_document(
    doc: &MatrixDocument,
    cfg: &ToleranceConfig,
    oracle: &OracleConfig,
    force_oracle: bool,
    seed: u64,
) -> Result<ReportDocument, uecsm::ClassifyError> {
    let t = doc.to_matrix();
    let report = classify(&t, cfg, seed)?;
    let oracle_verdict = (force_oracle || report.final_verdict == FinalVerdict::NotApplicable)
        .then(|| brute_force_uecsm(&t, oracle, seed));
    let cartesian = tener_applicable(&t, cfg);
    Ok(ReportDocument::build(ReportInputs {
        label: doc.label.clone(),
        n: doc.n,
        report: &report,
        cartesian: &cartesian,
        oracle: oracle_verdict.as_ref(),
        cfg,
        seed,
    }))
}

pub fn cmd_classify(a: &ClassifyArgs) -> CommandOutput {
    let cfg = match a.tolerances.config() {
        Ok(c) => c,
        Err(e) => return CommandOutput::error(EXIT_PARSE, format!("error: {e}\n")),
    };
    let doc = match MatrixDocument::read(&a.path) {
        Ok(d) => d,
        Err(e @ DocumentError::Io { .. }) => return CommandOutput::error(EXIT_PARSE, format!("error: {e}\n")),
        Err(e) => return CommandOutput::error(EXIT_PARSE, format!("error: {}: {e}\n", a.path.display())),
    };
    let report = match classify_document(&doc, &cfg, &a.oracle_args.config(), a.oracle, a.seed) {
        Ok(r) => r,
        Err(e) => return CommandOutput::error(EXIT_NUMERICAL, format!("numerical failure: {e}\n")),
    };
    let mut out = CommandOutput {
        stdout: render_text(&report),
        stderr: String::new(),
        code: report.exit_code(),
    };
    if let Some(path) = &a.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            out.stderr = format!("error: cannot write {}: {e}\n", path.display());
            out.code = EXIT_PARSE;
        }
    }
    out
}

pub fn cmd_search(a: &SearchArgs) -> CommandOutput {
    let cfg = match a.tolerances.config() {
        Ok(c) => c,
        Err(e) => return CommandOutput::error(EXIT_PARSE, format!("error: {e}\n")),
    };
    if a.count == 0 || a.range < 0 {
        return CommandOutput::error(EXIT_PARSE, "error: count must be positive and range non-negative\n".into());
    }
    let sc = SearchConfig {
        count: a.count,
        dim: a.dim as usize,
        range: a.range,
        seed: a.seed,
        cfg,
        inject: a.inject.as_ref().map(|_| uecsm::fixtures::counterexample_4x4()),
    };
    if sc.inject.is_some() && sc.dim != 4 {
        return CommandOutput::error(EXIT_PARSE, "error: --inject example64 needs --dim 4\n".into());
    }
    let summary = run_search(&sc);
    let t = &summary.tally;
    let mut stdout = format!(
        "examined {} {}x{} matrices (entries in [-{}, {}], seed {})\n  not applicable: {}\n  numerical failures: {}\n  UECSM: {}\n  not UECSM: {}\n  near misses: {}\n",
        t.examined,
        sc.dim,
        sc.dim,
        sc.range,
        sc.range,
        sc.seed,
        t.not_applicable,
        t.numerical_failures,
        t.uecsm,
        t.not_uecsm,
        summary.hits.len()
    );
    for h in &summary.hits {
        stdout.push_str(&format!("  hit at candidate {}\n", h.index));
    }
    let mut out = CommandOutput {
        stdout,
        stderr: String::new(),
        code: 0,
    };
    if let Some(dir) = &a.out {
        if let Err(e) = write_hits(&summary, dir) {
            out.stderr = format!("error: cannot write hits to {}: {e}\n", dir.display());
            out.code = EXIT_PARSE;
        }
    }
    out
}

pub fn cmd_fixtures(a: &FixturesArgs) -> CommandOutput {
    let cfg = match a.tolerances.config() {
        Ok(c) => c,
        Err(e) => return CommandOutput::error(EXIT_PARSE, format!("error: {e}\n")),
    };
    let rows = replay(a.only.as_deref(), &cfg, &a.oracle_args.config(), a.seed, a.oracle);
    let code = if rows.iter().all(|r| r.ok) { 0 } else { 1 };
    CommandOutput {
        stdout: render_table(&rows),
        stderr: String::new(),
        code,
    }
}
