//! Seeded batches of random point sets: certify each one, re-validate the
//! Hilbert function and Cayley-Bacharach invariants on it, and tally which
//! rules fire.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use waring_core::certify::{cubic_family_q, Rule, Verdict};
use waring_core::{certify, cubic_containment, gkr_audit, kruskal_rank, PointSet, PointSetDocument};

use crate::error::CliError;
use crate::generators::{sample, trial_rng, Generator};
use crate::suites::{check_cb_down_closure, check_decay, check_grassmann, check_inclusion};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarnessConfig {
    pub seed: u64,
    pub trials: u64,
    pub generator: Generator,
    pub size: usize,
    pub degree: u32,
    pub bound: i64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: 100,
            generator: Generator::UniformBox,
            size: 11,
            degree: 7,
            bound: 20,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    pub trial: u64,
    pub verdict: Verdict,
    pub rule: Option<Rule>,
    /// Kruskal ranks computed while certifying, keyed by degree.
    pub k: BTreeMap<u32, usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    pub cb_max: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessViolation {
    pub trial: u64,
    pub check: &'static str,
    pub detail: String,
    pub points: PointSetDocument,
}

/// How often a rule's rank hypotheses held and how often it then fired.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HypothesisTally {
    pub met: u64,
    pub fired: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessReport {
    pub seed: u64,
    pub trials: u64,
    pub generator: String,
    pub size: usize,
    pub degree: u32,
    #[serde(rename = "box")]
    pub bound: i64,
    pub verdicts: BTreeMap<String, u64>,
    pub rules: BTreeMap<String, u64>,
    pub hypotheses: BTreeMap<String, HypothesisTally>,
    pub invariant_checks: u64,
    pub gkr_audits: u64,
    pub violations: Vec<HarnessViolation>,
    pub results: Vec<TrialResult>,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        let rules: Vec<String> = self.rules.iter().map(|(r, c)| format!("{r} {c}")).collect();
        let hypotheses: Vec<String> = self
            .hypotheses
            .iter()
            .map(|(r, t)| format!("{r} hypotheses met {} fired {}", t.met, t.fired))
            .collect();
        format!(
            "harness seed {} {} trials of {} (l = {}, d = {}): {}; {}; {} invariant checks, {} violations",
            self.seed,
            self.trials,
            self.generator,
            self.size,
            self.degree,
            rules.join(", "),
            hypotheses.join(", "),
            self.invariant_checks,
            self.violations.len()
        )
    }
}

struct Trial {
    result: TrialResult,
    septic: Option<bool>,
    cubic: Option<bool>,
    checks: u64,
    audits: u64,
    violations: Vec<HarnessViolation>,
}

/// Whether the extended septic rank hypotheses hold: ℓ = 11 points of P²,
/// d = 7, k₁ = 3 and k₃ = 10.
fn septic_hypotheses(z: &PointSet, d: u32) -> Result<Option<bool>, CliError> {
    if d != 7 || z.len() != 11 {
        return Ok(None);
    }
    Ok(Some(
        kruskal_rank(z, 1)?.rank == 3 && kruskal_rank(z, 3)?.rank == 10,
    ))
}

/// Whether the cubic family hypotheses hold: d = 7 + 2q, ℓ = 3q + 10,
/// k₁ = 3, k_{q+3} = 3q + 9, and for q ≥ 0 the points lie on a cubic.
fn cubic_hypotheses(z: &PointSet, d: u32) -> Result<Option<bool>, CliError> {
    let Some(q) = cubic_family_q(d) else {
        return Ok(None);
    };
    if z.len() as i64 != 3 * q + 10 {
        return Ok(None);
    }
    if q >= 0 && !cubic_containment(z)?.contained {
        return Ok(Some(false));
    }
    Ok(Some(
        kruskal_rank(z, 1)?.rank == 3 && kruskal_rank(z, (q + 3) as u32)?.rank as i64 == 3 * q + 9,
    ))
}

fn run_trial(config: &HarnessConfig, trial: u64) -> Result<Trial, CliError> {
    let mut rng = trial_rng(config.seed, trial);
    let z = sample(config.generator, &mut rng, config.size, config.bound)?;
    let certificate = certify(&z, config.degree)?;

    let mut violations = Vec::new();
    let mut checks = 0;
    let mut record = |check: &'static str, outcome: Result<(), String>| {
        checks += 1;
        if let Err(detail) = outcome {
            violations.push(HarnessViolation {
                trial,
                check,
                detail,
                points: z.to_document(),
            });
        }
    };

    let d_max = config.degree.max(z.len() as u32);
    if z.len() > 1 {
        let size = rng.gen_range(1..z.len());
        let mut picked = index::sample(&mut rng, z.len(), size).into_vec();
        picked.sort_unstable();
        let sub = z.subset(&picked).expect("indices are in range");
        record("inclusion", check_inclusion(&z, &sub, d_max));

        let rest: Vec<usize> = (0..z.len()).filter(|i| !picked.contains(i)).collect();
        let other = z.subset(&rest).expect("indices are in range");
        for d in 0..=config.degree {
            record("grassmann", check_grassmann(&sub, &other, d));
        }
    }
    record("decay", check_decay(&z, d_max));

    // CB always fails from degree ℓ − 1 on
    let mut audits = 0;
    let cb_max = match check_cb_down_closure(&z, z.len() as u32 - 1) {
        Ok(holds) => {
            record("cb-down-closure", Ok(()));
            for &i in &holds {
                audits += 1;
                let outcome = match gkr_audit(&z, i) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err(format!("CB({i}) set violates the Dh sum inequality")),
                    Err(e) => Err(e.to_string()),
                };
                record("gkr", outcome);
            }
            holds.last().copied()
        }
        Err(detail) => {
            record("cb-down-closure", Err(detail));
            None
        }
    };

    Ok(Trial {
        septic: septic_hypotheses(&z, config.degree)?,
        cubic: cubic_hypotheses(&z, config.degree)?,
        result: TrialResult {
            trial,
            verdict: certificate.verdict,
            rule: certificate.rule,
            k: certificate.evidence.kruskal_ranks.clone(),
            diagnostics: certificate.evidence.diagnostics.clone(),
            cb_max,
        },
        checks,
        audits,
        violations,
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Identifiable => "IDENTIFIABLE",
        Verdict::Inconclusive => "INCONCLUSIVE",
    }
}

/// Runs the batch. Trials run in parallel, each on its own stream of the
/// seed, and are reported in trial order.
pub fn harness(config: &HarnessConfig) -> Result<HarnessReport, CliError> {
    if config.trials == 0 {
        return Err(CliError::Usage("at least one trial is required".into()));
    }
    if config.size == 0 {
        return Err(CliError::Usage("the point sets need at least one point".into()));
    }
    if config.degree == 0 {
        return Err(CliError::Usage("degree must be at least 1".into()));
    }
    let trials: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<_, _>>()?;

    let mut verdicts = BTreeMap::new();
    let mut rules: BTreeMap<String, u64> = [
        Rule::TrivialRankOne,
        Rule::Kruskal,
        Rule::ExtendedSeptic,
        Rule::CubicFamily,
    ]
    .iter()
    .map(|r| (r.name().to_string(), 0))
    .collect();
    let mut hypotheses = BTreeMap::new();
    let mut report_violations = Vec::new();
    let (mut checks, mut audits) = (0, 0);
    for trial in &trials {
        *verdicts
            .entry(verdict_name(trial.result.verdict).to_string())
            .or_insert(0) += 1;
        if let Some(rule) = trial.result.rule {
            *rules.entry(rule.name().to_string()).or_insert(0) += 1;
        }
        for (rule, met) in [
            (Rule::ExtendedSeptic, trial.septic),
            (Rule::CubicFamily, trial.cubic),
        ] {
            let Some(met) = met else { continue };
            let tally: &mut HypothesisTally = hypotheses.entry(rule.name().to_string()).or_default();
            if met {
                tally.met += 1;
                if trial.result.rule == Some(rule) {
                    tally.fired += 1;
                }
            }
        }
        checks += trial.checks;
        audits += trial.audits;
        report_violations.extend(trial.violations.iter().cloned());
    }

    Ok(HarnessReport {
        seed: config.seed,
        trials: config.trials,
        generator: config.generator.name().to_string(),
        size: config.size,
        degree: config.degree,
        bound: config.bound,
        verdicts,
        rules,
        hypotheses,
        invariant_checks: checks,
        gkr_audits: audits,
        violations: report_violations,
        results: trials.into_iter().map(|t| t.result).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_triple_is_inconclusive() {
        let config = HarnessConfig {
            trials: 1,
            generator: Generator::WithCollinearTriple,
            ..HarnessConfig::default()
        };
        let report = harness(&config).unwrap();
        assert!(report.passed());
        let result = &report.results[0];
        assert_eq!(result.verdict, Verdict::Inconclusive);
        assert!(result.diagnostics.iter().any(|d| d.contains("k₁ < 3")));
        assert_eq!(report.hypotheses["EXTENDED_SEPTIC"], HypothesisTally::default());
    }

    #[test]
    fn same_seed_same_report() {
        let config = HarnessConfig {
            trials: 4,
            size: 7,
            degree: 5,
            ..HarnessConfig::default()
        };
        let a = serde_json::to_string(&harness(&config).unwrap()).unwrap();
        let b = serde_json::to_string(&harness(&config).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_empty_batches() {
        let config = HarnessConfig {
            trials: 0,
            ..HarnessConfig::default()
        };
        assert!(matches!(harness(&config), Err(CliError::Usage(_))));
    }
}
