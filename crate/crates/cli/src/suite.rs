//! Runs the check catalog over randomized trials and aggregates a report.
//!
//! Trials execute in index order; each produces one JSON line (when a sink is
//! given) and folds into per-check summaries. Every grid point of every check
//! appears exactly once per trial as a pass, a failure, or a skip, so
//! `evaluations == passes + failures + skips` holds per check and in total.
//! The aggregate report is deterministic except for the `wall_ms` field.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

use meanforge::checks::{
    run_checks_with_tol, CheckId, CheckOutcome, CheckParams, Verdict, ALL_CHECKS,
};

use crate::config::TrialConfig;
use crate::gen::gen_instance;

/// Which checks a run covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteSelection {
    All,
    One(CheckId),
}

impl SuiteSelection {
    pub fn ids(self) -> Vec<CheckId> {
        match self {
            SuiteSelection::All => ALL_CHECKS.to_vec(),
            SuiteSelection::One(id) => vec![id],
        }
    }

    pub fn label(self) -> String {
        match self {
            SuiteSelection::All => "all".to_string(),
            SuiteSelection::One(id) => id.to_string(),
        }
    }
}

/// Where and at which parameters a slack was observed.
#[derive(Clone, Debug, Serialize)]
pub struct PointFingerprint {
    pub trial: usize,
    pub dim: usize,
    pub n: usize,
    pub map: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    pub slack: f64,
    pub relative_slack: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

/// Aggregate over all trials for one check.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckSummary {
    /// Grid points attempted: `passes + failures + skips`.
    pub evaluations: usize,
    pub passes: usize,
    pub failures: usize,
    pub skips: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_relative_slack: Option<f64>,
    /// Fingerprint of the point with the smallest relative slack.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<PointFingerprint>,
    /// Up to five failing points, in trial order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failure_examples: Vec<PointFingerprint>,
}

const MAX_FAILURE_EXAMPLES: usize = 5;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteTotals {
    pub trials: usize,
    pub evaluations: usize,
    pub passes: usize,
    pub failures: usize,
    pub skips: usize,
}

/// The aggregate document for one `verify` run.
#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub version: String,
    pub suite: String,
    pub configs: Vec<TrialConfig>,
    pub totals: SuiteTotals,
    pub checks: BTreeMap<String, CheckSummary>,
    /// Wall-clock runtime; the only nondeterministic field.
    pub wall_ms: u64,
}

impl SuiteReport {
    /// Failures on checks whose negative verdicts are genuine (the probe
    /// entry never counts).
    pub fn theorem_failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|(name, _)| {
                name.parse::<CheckId>().map(|id| id.counts_failures()).unwrap_or(true)
            })
            .map(|(_, s)| s.failures)
            .sum()
    }
}

fn fingerprint(
    trial: usize,
    dim: usize,
    n: usize,
    map: &str,
    v: &Verdict<f64>,
    with_notes: bool,
) -> PointFingerprint {
    let axes = v.id.axes();
    PointFingerprint {
        trial,
        dim,
        n,
        map: map.to_string(),
        t: axes.uses_t.then_some(v.params.t),
        p: axes.uses_p.then_some(v.params.p),
        norm: axes.uses_norm.then(|| v.params.norm.to_string()),
        slack: v.slack,
        relative_slack: v.relative_slack,
        notes: if with_notes { v.notes.clone() } else { String::new() },
    }
}

fn skip_json(id: CheckId, params: &CheckParams<f64>, reason: &str) -> serde_json::Value {
    let axes = id.axes();
    serde_json::json!({
        "id": id.as_str(),
        "skipped": true,
        "reason": reason,
        "t": axes.uses_t.then_some(params.t),
        "p": axes.uses_p.then_some(params.p),
        "norm": axes.uses_norm.then(|| params.norm.to_string()),
    })
}

/// Runs `selection` over every config in order, folding trial results into
/// one report and appending one JSON line per trial to `jsonl` when given.
pub fn run_suite(
    configs: &[TrialConfig],
    selection: SuiteSelection,
    mut jsonl: Option<&mut dyn Write>,
) -> anyhow::Result<SuiteReport> {
    anyhow::ensure!(!configs.is_empty(), "at least one configuration is required");
    for cfg in configs {
        cfg.validate()?;
    }
    let ids = selection.ids();
    let started = Instant::now();

    let mut checks: BTreeMap<String, CheckSummary> = BTreeMap::new();
    let mut totals = SuiteTotals::default();
    let mut global_trial = 0usize;

    for (config_index, cfg) in configs.iter().enumerate() {
        let grid = cfg.grid();
        for local in 0..cfg.trials {
            let inst = gen_instance(cfg, local)
                .with_context(|| format!("generating trial {local} of config {config_index}"))?;
            let outcomes = run_checks_with_tol(&inst.tuple, &inst.map, &ids, &grid, cfg.tol_rel)
                .with_context(|| format!("trial {local} of config {config_index}"))?;

            let mut lines = Vec::with_capacity(outcomes.len());
            for outcome in &outcomes {
                match outcome {
                    CheckOutcome::Evaluated(v) => {
                        let entry = checks.entry(v.id.to_string()).or_default();
                        entry.evaluations += 1;
                        totals.evaluations += 1;
                        if v.holds {
                            entry.passes += 1;
                            totals.passes += 1;
                        } else {
                            entry.failures += 1;
                            totals.failures += 1;
                            if entry.failure_examples.len() < MAX_FAILURE_EXAMPLES {
                                entry.failure_examples.push(fingerprint(
                                    global_trial,
                                    inst.dim,
                                    inst.n,
                                    inst.map_kind,
                                    v,
                                    true,
                                ));
                            }
                        }
                        let better = entry
                            .min_relative_slack
                            .map_or(true, |current| v.relative_slack < current);
                        if better {
                            entry.min_relative_slack = Some(v.relative_slack);
                            entry.worst = Some(fingerprint(
                                global_trial,
                                inst.dim,
                                inst.n,
                                inst.map_kind,
                                v,
                                false,
                            ));
                        }
                        if entry.min_slack.map_or(true, |current| v.slack < current) {
                            entry.min_slack = Some(v.slack);
                        }
                        lines.push(v.to_json());
                    }
                    CheckOutcome::Skipped { id, params, reason } => {
                        let entry = checks.entry(id.to_string()).or_default();
                        entry.evaluations += 1;
                        entry.skips += 1;
                        totals.evaluations += 1;
                        totals.skips += 1;
                        lines.push(skip_json(*id, params, reason));
                    }
                }
            }

            if let Some(sink) = jsonl.as_deref_mut() {
                let line = serde_json::json!({
                    "trial": global_trial,
                    "config": config_index,
                    "dim": inst.dim,
                    "n": inst.n,
                    "map": inst.map_kind,
                    "outcomes": lines,
                });
                serde_json::to_writer(&mut *sink, &line)?;
                sink.write_all(b"\n")?;
            }
            global_trial += 1;
        }
    }
    totals.trials = global_trial;

    Ok(SuiteReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        suite: selection.label(),
        configs: configs.to_vec(),
        totals,
        checks,
        wall_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> TrialConfig {
        let mut cfg = TrialConfig::standard((1.0, 2.0));
        cfg.trials = 4;
        cfg.dims = vec![2];
        cfg.tuple_sizes = vec![2, 3];
        cfg.t_grid = vec![-0.5, 0.5, 1.0];
        cfg.p_grid = vec![1.0, 2.0];
        cfg
    }

    #[test]
    fn accounting_balances_per_check_and_in_total() {
        let report = run_suite(&[tiny_config()], SuiteSelection::All, None).unwrap();
        assert_eq!(report.totals.trials, 4);
        let mut evals = 0;
        let mut rest = 0;
        for summary in report.checks.values() {
            assert_eq!(
                summary.evaluations,
                summary.passes + summary.failures + summary.skips
            );
            evals += summary.evaluations;
            rest += summary.passes + summary.failures + summary.skips;
        }
        assert_eq!(report.totals.evaluations, evals);
        assert_eq!(
            report.totals.evaluations,
            report.totals.passes + report.totals.failures + report.totals.skips
        );
        assert_eq!(evals, rest);
        // Every catalog check appears.
        assert_eq!(report.checks.len(), ALL_CHECKS.len());
    }

    #[test]
    fn tiny_sweep_has_no_failures() {
        let report = run_suite(&[tiny_config()], SuiteSelection::All, None).unwrap();
        assert_eq!(report.totals.failures, 0, "{:#?}", report.checks);
        assert_eq!(report.theorem_failures(), 0);
    }

    #[test]
    fn reports_are_deterministic_apart_from_timing() {
        let mut lines_a = Vec::new();
        let mut lines_b = Vec::new();
        let a = run_suite(&[tiny_config()], SuiteSelection::All, Some(&mut lines_a)).unwrap();
        let b = run_suite(&[tiny_config()], SuiteSelection::All, Some(&mut lines_b)).unwrap();
        let mut ja = serde_json::to_value(&a).unwrap();
        let mut jb = serde_json::to_value(&b).unwrap();
        ja.as_object_mut().unwrap().remove("wall_ms");
        jb.as_object_mut().unwrap().remove("wall_ms");
        assert_eq!(ja, jb);
        assert_eq!(lines_a, lines_b);
        assert!(!lines_a.is_empty());
    }

    #[test]
    fn single_check_selection_restricts_the_report() {
        let report =
            run_suite(&[tiny_config()], SuiteSelection::One(CheckId::InterpPower), None).unwrap();
        assert_eq!(report.suite, "interp_power");
        assert_eq!(report.checks.len(), 1);
        let summary = &report.checks["interp_power"];
        // 3 t values x 4 trials, all evaluated.
        assert_eq!(summary.evaluations, 12);
        assert_eq!(summary.passes, 12);
        assert!(summary.worst.is_some());
        assert!(summary.min_relative_slack.unwrap() >= -1e-8);
    }

    #[test]
    fn jsonl_lines_parse_and_cover_all_trials() {
        let mut sink = Vec::new();
        let report =
            run_suite(&[tiny_config()], SuiteSelection::One(CheckId::Amgm), Some(&mut sink))
                .unwrap();
        let text = String::from_utf8(sink).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), report.totals.trials);
        for line in lines {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v["trial"].is_number());
            assert_eq!(v["outcomes"].as_array().unwrap().len(), 1);
            assert_eq!(v["outcomes"][0]["id"], "amgm");
        }
    }
}
