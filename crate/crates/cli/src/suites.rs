//! Randomized invariant checks. Each check returns a description of the
//! violation it found, if any; the suites run a check over many seeded
//! instances and collect counterexamples.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use waring_core::{
    cb_check, cb_failure_by_definition, gkr_audit, grassmann_intersection_dim, hilbert_profile, kruskal_rank,
    kruskal_rank_by_circuits, rank, rank_by_minors, span_intersection_dim_direct, PointSet, PointSetDocument,
    Rational, RationalMatrix,
};

use crate::error::CliError;
use crate::generators::{sample, trial_rng, Generator};

/// h_{Z'}(d) ≤ h_Z(d) and Dh_{Z'}(d) ≤ Dh_Z(d) for Z' ⊆ Z, 0 ≤ d ≤ d_max.
pub fn check_inclusion(z: &PointSet, sub: &PointSet, d_max: u32) -> Result<(), String> {
    let big = hilbert_profile(z, Some(d_max)).map_err(|e| e.to_string())?;
    let small = hilbert_profile(sub, Some(d_max)).map_err(|e| e.to_string())?;
    for d in 0..=d_max as usize {
        if small.h[d] > big.h[d] || small.dh[d] > big.dh[d] {
            return Err(format!(
                "degree {d}: subset has h = {}, Dh = {} but the set has h = {}, Dh = {}",
                small.h[d], small.dh[d], big.h[d], big.dh[d]
            ));
        }
    }
    Ok(())
}

/// Dh(j) ≤ j with j > 0 forces Dh(j+1) ≤ Dh(j), and Dh vanishes from its
/// first zero on.
pub fn check_decay(z: &PointSet, d_max: u32) -> Result<(), String> {
    let profile = hilbert_profile(z, Some(d_max)).map_err(|e| e.to_string())?;
    let dh = &profile.dh;
    for j in 1..dh.len().saturating_sub(1) {
        if dh[j] <= j && dh[j + 1] > dh[j] {
            return Err(format!("Dh = {dh:?} grows after Dh({j}) = {} ≤ {j}", dh[j]));
        }
    }
    if let Some(first_zero) = dh.iter().position(|&v| v == 0) {
        if dh[first_zero..].iter().any(|&v| v != 0) {
            return Err(format!("Dh = {dh:?} is nonzero after Dh({first_zero}) = 0"));
        }
    }
    Ok(())
}

/// The h¹ formula for dim(⟨v_d(A)⟩ ∩ ⟨v_d(B)⟩) against the explicit
/// intersection of spans.
pub fn check_grassmann(a: &PointSet, b: &PointSet, d: u32) -> Result<(), String> {
    let formula = grassmann_intersection_dim(a, b, d).map_err(|e| e.to_string())?;
    let direct = span_intersection_dim_direct(a, b, d).map_err(|e| e.to_string())?;
    if formula != direct {
        return Err(format!(
            "degree {d}: h¹ formula gives {formula}, direct intersection {direct}"
        ));
    }
    Ok(())
}

/// Degrees 0..=d_max where CB holds; CB(d) must imply CB(d − 1).
pub fn check_cb_down_closure(z: &PointSet, d_max: u32) -> Result<Vec<u32>, String> {
    let mut holds = Vec::new();
    let mut previous = true;
    for d in 0..=d_max {
        let now = cb_check(z, d).map_err(|e| e.to_string())?.holds;
        if now && !previous {
            return Err(format!("CB({d}) holds but CB({}) fails", d - 1));
        }
        if now {
            holds.push(d);
        }
        previous = now;
    }
    Ok(holds)
}

/// The rank comparison and the definition must blame the same point.
pub fn check_cb_definition(z: &PointSet, d: u32) -> Result<(), String> {
    let fast = cb_check(z, d).map_err(|e| e.to_string())?.separating_point;
    let slow = cb_failure_by_definition(z, d).map_err(|e| e.to_string())?;
    if fast != slow {
        return Err(format!(
            "degree {d}: rank comparison reports {fast:?}, the definition {slow:?}"
        ));
    }
    Ok(())
}

/// Runs the audit for every i in 0..=d_max with CB(i); returns how many
/// degrees were audited.
pub fn check_gkr(z: &PointSet, d_max: u32) -> Result<usize, String> {
    let holds = check_cb_down_closure(z, d_max)?;
    for &i in &holds {
        if !gkr_audit(z, i).map_err(|e| e.to_string())? {
            return Err(format!("CB({i}) set violates the Dh sum inequality"));
        }
    }
    Ok(holds.len())
}

pub fn check_rank(m: &RationalMatrix) -> Result<(), String> {
    let fast = rank(m);
    let oracle = rank_by_minors(m).map_err(|e| e.to_string())?;
    if fast != oracle {
        return Err(format!("elimination rank {fast}, largest nonzero minor {oracle}"));
    }
    Ok(())
}

pub fn check_kruskal(z: &PointSet, d: u32) -> Result<(), String> {
    let scan = kruskal_rank(z, d).map_err(|e| e.to_string())?;
    let circuits = kruskal_rank_by_circuits(z, d).map_err(|e| e.to_string())?;
    if scan != circuits {
        return Err(format!("subset scan {scan:?}, circuits {circuits:?}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Inclusion,
    Decay,
    Grassmann,
    CbDownClosure,
    CbDefinition,
    RankOracle,
    KruskalOracle,
    Gkr,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Inclusion,
        Suite::Decay,
        Suite::Grassmann,
        Suite::CbDownClosure,
        Suite::CbDefinition,
        Suite::RankOracle,
        Suite::KruskalOracle,
        Suite::Gkr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Inclusion => "inclusion",
            Suite::Decay => "decay",
            Suite::Grassmann => "grassmann",
            Suite::CbDownClosure => "cb-down-closure",
            Suite::CbDefinition => "cb-definition",
            Suite::RankOracle => "rank-vs-minors",
            Suite::KruskalOracle => "kruskal-vs-circuits",
            Suite::Gkr => "gkr",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Largest set and degree used by the point-set suites.
pub const MAX_POINTS: usize = 10;
pub const MAX_DEGREE: u32 = 5;
/// Small boxes make coincidences (collinear triples, points on conics) common.
const SUITE_BOX: i64 = 5;

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub check: String,
    pub instance: u64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<PointSetDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: u64,
    /// Individual comparisons made across all instances.
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn random_set(rng: &mut ChaCha8Rng, min_size: usize) -> PointSet {
    let generator = Generator::ALL[rng.gen_range(0..Generator::ALL.len())];
    let min_size = match generator {
        Generator::WithCollinearTriple => min_size.max(3),
        _ => min_size,
    };
    let size = rng.gen_range(min_size..=MAX_POINTS);
    sample(generator, rng, size, SUITE_BOX).expect("suite parameters fit the box")
}

/// A nonempty proper subset when possible, else the whole set.
fn random_subset(rng: &mut ChaCha8Rng, z: &PointSet) -> PointSet {
    if z.len() == 1 {
        return z.clone();
    }
    let size = rng.gen_range(1..z.len());
    let mut picked = index::sample(rng, z.len(), size).into_vec();
    picked.sort_unstable();
    z.subset(&picked).expect("indices are in range")
}

fn random_entries(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
    let entries = (0..rows * cols)
        .map(|_| Rational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=3).into()))
        .collect();
    RationalMatrix::new(rows, cols, entries).expect("shape")
}

fn random_matrix(rng: &mut ChaCha8Rng) -> RationalMatrix {
    let rows = rng.gen_range(1..=12);
    let cols = rng.gen_range(1..=12);
    if rng.gen_bool(0.5) {
        random_entries(rng, rows, cols)
    } else {
        // a product through a narrow middle forces low rank
        let inner = rng.gen_range(1..=rows.min(cols));
        let left = random_entries(rng, rows, inner);
        let right = random_entries(rng, inner, cols);
        left.mul(&right).expect("inner dimensions agree")
    }
}

struct Outcome {
    checks: usize,
    violation: Option<Violation>,
}

fn point_violation(suite: Suite, instance: u64, z: &PointSet, detail: String) -> Violation {
    Violation {
        check: suite.name().to_string(),
        instance,
        detail,
        points: Some(z.to_document()),
        matrix: None,
    }
}

fn run_instance(suite: Suite, seed: u64, instance: u64) -> Outcome {
    let mut rng = trial_rng(seed, instance);
    let rng = &mut rng;
    let single = |result: Result<(), String>, z: &PointSet| Outcome {
        checks: 1,
        violation: result
            .err()
            .map(|detail| point_violation(suite, instance, z, detail)),
    };
    match suite {
        Suite::Inclusion => {
            let z = random_set(rng, 1);
            let sub = random_subset(rng, &z);
            let detail = check_inclusion(&z, &sub, MAX_DEGREE)
                .err()
                .map(|e| format!("{e}; subset {:?}", sub.to_document().points));
            Outcome {
                checks: 1,
                violation: detail.map(|d| point_violation(suite, instance, &z, d)),
            }
        }
        Suite::Decay => {
            let z = random_set(rng, 1);
            let d_max = (z.len() as u32).max(MAX_DEGREE);
            single(check_decay(&z, d_max), &z)
        }
        Suite::Grassmann => {
            let z = random_set(rng, 2);
            let a_size = rng.gen_range(1..z.len());
            let mut a_indices = index::sample(rng, z.len(), a_size).into_vec();
            a_indices.sort_unstable();
            let b_indices: Vec<usize> = (0..z.len()).filter(|i| !a_indices.contains(i)).collect();
            let a = z.subset(&a_indices).expect("in range");
            let b = z.subset(&b_indices).expect("in range");
            let d = rng.gen_range(0..=MAX_DEGREE);
            let detail = check_grassmann(&a, &b, d)
                .err()
                .map(|e| format!("{e}; A = points {a_indices:?}"));
            Outcome {
                checks: 1,
                violation: detail.map(|d| point_violation(suite, instance, &z, d)),
            }
        }
        Suite::CbDownClosure => {
            let z = random_set(rng, 1);
            let result = check_cb_down_closure(&z, MAX_DEGREE).map(|_| ());
            Outcome {
                checks: MAX_DEGREE as usize + 1,
                ..single(result, &z)
            }
        }
        Suite::CbDefinition => {
            let z = random_set(rng, 1);
            let d = rng.gen_range(0..=MAX_DEGREE);
            single(check_cb_definition(&z, d), &z)
        }
        Suite::RankOracle => {
            let m = random_matrix(rng);
            let violation = check_rank(&m).err().map(|detail| Violation {
                check: suite.name().to_string(),
                instance,
                detail,
                points: None,
                matrix: Some(
                    (0..m.rows())
                        .map(|r| m.row(r).iter().map(|v| v.to_string()).collect())
                        .collect(),
                ),
            });
            Outcome { checks: 1, violation }
        }
        Suite::KruskalOracle => {
            let z = random_set(rng, 1);
            let d = rng.gen_range(1..=MAX_DEGREE);
            single(check_kruskal(&z, d), &z)
        }
        Suite::Gkr => {
            let z = random_set(rng, 2);
            match check_gkr(&z, z.len() as u32 - 1) {
                Ok(audited) => Outcome {
                    checks: audited,
                    violation: None,
                },
                Err(detail) => single(Err(detail), &z),
            }
        }
    }
}

/// Runs `instances` seeded instances of one suite. Instance i always uses
/// stream i of the seed, and results are gathered in instance order, so the
/// report does not depend on scheduling.
pub fn run_suite(suite: Suite, seed: u64, instances: u64) -> Result<SuiteReport, CliError> {
    if instances == 0 {
        return Err(CliError::Usage("at least one instance is required".into()));
    }
    let outcomes: Vec<Outcome> = (0..instances)
        .into_par_iter()
        .map(|i| run_instance(suite, seed, i))
        .collect();
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        seed,
        instances,
        checks: outcomes.iter().map(|o| o.checks).sum(),
        violations: outcomes.into_iter().filter_map(|o| o.violation).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[Vec<i64>]) -> PointSet {
        PointSet::from_i64_rows(2, rows).unwrap()
    }

    #[test]
    fn checks_pass_on_known_sets() {
        let z = set(&[
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![1, 2, 0],
            vec![1, 3, 0],
            vec![1, 4, 0],
            vec![0, 0, 1],
        ]);
        let sub = z.subset(&[0, 1, 5]).unwrap();
        assert!(check_inclusion(&z, &sub, 5).is_ok());
        assert!(check_decay(&z, 6).is_ok());
        assert!(check_grassmann(&sub, &z.subset(&[2, 3, 4]).unwrap(), 1).is_ok());
        assert_eq!(check_cb_down_closure(&z, 5).unwrap(), vec![0]);
        assert!(check_cb_definition(&z, 1).is_ok());
        assert!(check_kruskal(&z, 1).is_ok());
        assert_eq!(check_gkr(&z, 5).unwrap(), 1);
    }

    #[test]
    fn reversed_inclusion_is_reported() {
        let z = set(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let sub = z.subset(&[0]).unwrap();
        assert!(check_inclusion(&sub, &z, 2).is_err());
    }

    #[test]
    fn suites_are_deterministic() {
        for suite in Suite::ALL {
            let a = run_suite(suite, 3, 12).unwrap();
            let b = run_suite(suite, 3, 12).unwrap();
            assert!(a.passed(), "{suite}: {:?}", a.violations);
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
        }
    }
}
