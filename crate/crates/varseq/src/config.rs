//! Verification-suite configuration and the suite runner.
//!
//! A suite is a JSON document: a schema version, a base seed, and a list of
//! checks. Each check names a verifier, its parameters, an ensemble, and a
//! grid; reports are written as canonical JSON (sorted keys) plus a CSV of
//! per-trial ratios.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use varseq_core::ensemble::Ensemble;
use varseq_core::operators::Grid;

use crate::harness::{
    self, family_from_name, ExponentSpec, HarnessError, OpKind, RunOptions, VerificationReport,
    WeightSpec, WeightedKind,
};

pub const CONFIG_VERSION: &str = "v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub version: String,
    pub seed: u64,
    pub checks: Vec<CheckConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckConfig {
    pub name: String,
    #[serde(flatten)]
    pub verifier: VerifierConfig,
    pub ensemble: EnsembleConfig,
    /// `[lo, hi]`
    pub grid: (i64, i64),
    #[serde(default)]
    pub double: bool,
    #[serde(default)]
    pub bound: Option<f64>,
    #[serde(default)]
    pub expect_fail: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub family: String,
    pub size: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verifier", rename_all = "snake_case")]
pub enum VerifierConfig {
    OperatorNorm {
        op: OpKind,
        #[serde(default)]
        alpha: f64,
        p: ExponentSpec,
        q: ExponentSpec,
    },
    HilbertBound {
        p: ExponentSpec,
        r: f64,
        #[serde(default)]
        bypass_preconditions: bool,
    },
    RieszBound {
        q: ExponentSpec,
        s: f64,
        alpha: f64,
    },
    MaximalFamilyBound {
        q: ExponentSpec,
        s: f64,
        alpha: f64,
        theta: f64,
        family_count: usize,
    },
    Weighted {
        #[serde(flatten)]
        kind: WeightedKind,
        weight: WeightSpec,
    },
}

/// Parse and validate a suite configuration.
pub fn parse_config(text: &str) -> Result<SuiteConfig, HarnessError> {
    let config: SuiteConfig =
        serde_json::from_str(text).map_err(|e| HarnessError(format!("bad config: {e}")))?;
    if config.version != CONFIG_VERSION {
        return Err(HarnessError(format!(
            "unsupported config version {:?} (expected {CONFIG_VERSION:?})",
            config.version
        )));
    }
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<SuiteConfig, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|e| HarnessError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Execute one check.
pub fn run_check(
    check: &CheckConfig,
    seed: u64,
    rel_tol: f64,
    jobs: usize,
) -> Result<VerificationReport, HarnessError> {
    let family = family_from_name(&check.ensemble.family)?;
    let grid = Grid::new(check.grid.0, check.grid.1)?;
    let ens = Ensemble::new(family, check.ensemble.size, grid, seed);
    let run = RunOptions {
        name: check.name.clone(),
        rel_tol,
        jobs,
        double: check.double,
        bound: check.bound,
        expect_fail: check.expect_fail,
    };
    match &check.verifier {
        VerifierConfig::OperatorNorm { op, alpha, p, q } => {
            harness::empirical_operator_norm(*op, *alpha, p, q, &ens, &run)
        }
        VerifierConfig::HilbertBound {
            p,
            r,
            bypass_preconditions,
        } => harness::verify_hilbert_bound(p, *r, &ens, *bypass_preconditions, &run),
        VerifierConfig::RieszBound { q, s, alpha } => {
            harness::verify_riesz_bound(q, *s, *alpha, &ens, &run)
        }
        VerifierConfig::MaximalFamilyBound {
            q,
            s,
            alpha,
            theta,
            family_count,
        } => harness::verify_maximal_family_bound(q, *s, *alpha, *theta, *family_count, &ens, &run),
        VerifierConfig::Weighted { kind, weight } => {
            harness::verify_weighted_inequality(kind, weight, &ens, &run)
        }
    }
}

/// Canonical JSON for a report: sorted keys, trailing newline.
pub fn canonical_report_json(report: &VerificationReport) -> String {
    let value = serde_json::to_value(report).expect("report serializes");
    // serde_json maps sort keys (BTreeMap-backed), so `to_value` canonicalizes
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

/// Per-trial CSV (`trial_index,ratio`).
pub fn report_csv(ratios: &[f64]) -> String {
    let mut out = String::from("trial_index,ratio\n");
    for (k, r) in ratios.iter().enumerate() {
        out.push_str(&format!("{k},{r}\n"));
    }
    out
}

/// Run every check in the config; write reports under `out_dir` when given.
///
/// Returns the reports; the suite is considered successful when every report
/// has `ok == true` (negative controls pass by failing their criterion).
pub fn run_suite(
    config: &SuiteConfig,
    seed_override: Option<u64>,
    out_dir: Option<&Path>,
    rel_tol: f64,
    jobs: usize,
    mut progress: impl FnMut(&VerificationReport),
) -> Result<Vec<VerificationReport>, HarnessError> {
    let seed = seed_override.unwrap_or(config.seed);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)
            .map_err(|e| HarnessError(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut reports = Vec::with_capacity(config.checks.len());
    for (index, check) in config.checks.iter().enumerate() {
        let report = run_check(check, seed, rel_tol, jobs)
            .map_err(|e| HarnessError(format!("check {:?}: {e}", check.name)))?;
        if let Some(dir) = out_dir {
            let stem = format!("{index:02}_{}", sanitize(&check.name));
            fs::write(dir.join(format!("{stem}.json")), canonical_report_json(&report))
                .map_err(|e| HarnessError(format!("cannot write report: {e}")))?;
            fs::write(dir.join(format!("{stem}.csv")), report_csv(&report.ratios))
                .map_err(|e| HarnessError(format!("cannot write csv: {e}")))?;
            if let Some(doubled) = &report.ratios_doubled {
                fs::write(dir.join(format!("{stem}_doubled.csv")), report_csv(doubled))
                    .map_err(|e| HarnessError(format!("cannot write csv: {e}")))?;
            }
        }
        progress(&report);
        reports.push(report);
    }
    Ok(reports)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}
