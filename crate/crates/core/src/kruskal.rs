//! Higher Kruskal ranks k_d(A) and the symmetric Kruskal criterion.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::json::format_rational;
use crate::linalg::{kernel_basis, rank, Rational, RationalMatrix};
use crate::projective::{binomial, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KruskalError {
    #[error("the point set is empty")]
    EmptySet,
    #[error("Kruskal ranks need degree at least 1")]
    ZeroDegree,
}

/// k_d(A) with, when it falls short of min(ℓ(A), binom(n+d, d)), the
/// lexicographically first dependent subset of size k_d(A) + 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KruskalReport {
    #[serde(rename = "d")]
    pub degree: u32,
    #[serde(rename = "k")]
    pub rank: usize,
    pub witness: Option<Vec<usize>>,
}

fn veronese_rows(a: &PointSet, d: u32) -> Result<RationalMatrix, KruskalError> {
    if a.is_empty() {
        return Err(KruskalError::EmptySet);
    }
    if d == 0 {
        return Err(KruskalError::ZeroDegree);
    }
    Ok(a.evaluation_matrix(d))
}

/// Upper bound min(ℓ(A), binom(n+d, d)) on k_d(A).
pub fn max_kruskal_rank(a: &PointSet, d: u32) -> usize {
    a.len().min(binomial(a.ambient_dim() + d as usize, d as usize))
}

fn first_dependent_subset(rows: &RationalMatrix, size: usize) -> Option<Vec<usize>> {
    (0..rows.rows())
        .combinations(size)
        .find(|subset| rank(&rows.select_rows(subset)) < size)
}

/// k_d(A): the largest k such that every k points of v_d(A) are linearly
/// independent.
///
/// If all of v_d(A) is independent the answer is ℓ(A) at once. Otherwise
/// sizes are scanned downward from the upper bound; each size is tested by
/// walking its subsets in lexicographic order until one is dependent. The
/// first size with no dependent subset is the rank, and the dependent subset
/// found one size up is the witness. Since independence passes to subsets,
/// this is the same witness an upward scan would stop at.
pub fn kruskal_rank(a: &PointSet, d: u32) -> Result<KruskalReport, KruskalError> {
    let rows = veronese_rows(a, d)?;
    let cap = max_kruskal_rank(a, d);
    if rank(&rows) == a.len() {
        return Ok(KruskalReport {
            degree: d,
            rank: cap,
            witness: None,
        });
    }
    let mut witness = None;
    for k in (1..=cap).rev() {
        match first_dependent_subset(&rows, k) {
            Some(subset) => witness = Some(subset),
            None => {
                return Ok(KruskalReport {
                    degree: d,
                    rank: k,
                    witness: if k < cap { witness } else { None },
                })
            }
        }
    }
    unreachable!("a single Veronese point is never zero")
}

/// k_d(A) through the dependency space of v_d(A) instead of subset ranks.
///
/// The kernel K of the N × ℓ matrix with columns v_d(Pᵢ) holds every linear
/// relation among the points. A subset S is dependent iff some nonzero
/// relation is supported inside S, i.e. iff the rows of a basis of K outside
/// S have rank below dim K. The smallest such S is a minimal circuit and
/// k_d(A) is its size minus one.
pub fn kruskal_rank_by_circuits(a: &PointSet, d: u32) -> Result<KruskalReport, KruskalError> {
    let rows = veronese_rows(a, d)?;
    let len = a.len();
    let cap = max_kruskal_rank(a, d);
    let relations = kernel_basis(&rows.transpose());
    if relations.is_empty() {
        return Ok(KruskalReport {
            degree: d,
            rank: len,
            witness: None,
        });
    }
    let dim = relations.len();
    // row i = coefficients of point i in each basis relation
    let mut entries = Vec::with_capacity(len * dim);
    for i in 0..len {
        entries.extend(relations.iter().map(|r| r[i].clone()));
    }
    let by_point = RationalMatrix::new(len, dim, entries).expect("shape");
    for size in 1..=len {
        let circuit = (0..len).combinations(size).find(|subset| {
            let outside: Vec<usize> = (0..len).filter(|i| !subset.contains(i)).collect();
            rank(&by_point.select_rows(&outside)) < dim
        });
        if let Some(subset) = circuit {
            let k = size - 1;
            return Ok(KruskalReport {
                degree: d,
                rank: k,
                witness: if k < cap { Some(subset) } else { None },
            });
        }
    }
    unreachable!("a nonzero relation is supported on the whole set")
}

/// Memoized k_d(A) over several degrees of one set.
#[derive(Debug)]
pub struct KruskalRanks<'a> {
    set: &'a PointSet,
    reports: BTreeMap<u32, KruskalReport>,
}

impl<'a> KruskalRanks<'a> {
    pub fn new(set: &'a PointSet) -> Self {
        Self {
            set,
            reports: BTreeMap::new(),
        }
    }

    pub fn report(&mut self, d: u32) -> Result<&KruskalReport, KruskalError> {
        if !self.reports.contains_key(&d) {
            let report = kruskal_rank(self.set, d)?;
            self.reports.insert(d, report);
        }
        Ok(&self.reports[&d])
    }

    pub fn rank(&mut self, d: u32) -> Result<usize, KruskalError> {
        Ok(self.report(d)?.rank)
    }

    /// Every rank computed so far, keyed by degree.
    pub fn computed(&self) -> BTreeMap<u32, usize> {
        self.reports.iter().map(|(&d, r)| (d, r.rank)).collect()
    }
}

fn serialize_bound<S: Serializer>(bound: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(bound))
}

/// One partition a + b + c = d tested against r ≤ (k_a + k_b + k_c − 2)/2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionCheck {
    pub partition: [u32; 3],
    pub ranks: [usize; 3],
    #[serde(serialize_with = "serialize_bound")]
    pub bound: Rational,
    pub passes: bool,
}

/// Partitions a ≥ b ≥ c ≥ 1 of d, a descending then b descending.
pub fn three_part_partitions(d: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in (1..=d).rev() {
        for b in (1..=a.min(d.saturating_sub(a))).rev() {
            let Some(c) = d.checked_sub(a + b) else {
                continue;
            };
            if c >= 1 && c <= b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

pub(crate) fn partition_checks(
    ranks: &mut KruskalRanks<'_>,
    length: usize,
    d: u32,
) -> Result<Vec<PartitionCheck>, KruskalError> {
    let mut checks = Vec::new();
    for partition in three_part_partitions(d) {
        let mut k = [0usize; 3];
        for (slot, &part) in k.iter_mut().zip(&partition) {
            *slot = ranks.rank(part)?;
        }
        let total = k.iter().sum::<usize>();
        checks.push(PartitionCheck {
            partition,
            ranks: k,
            bound: Rational::new((total as i64 - 2).into(), 2.into()),
            passes: 2 * length + 2 <= total,
        });
    }
    checks.sort_by(|x, y| y.bound.cmp(&x.bound));
    Ok(checks)
}

/// Every three-part partition of d checked against the Kruskal bound with
/// r = ℓ(A), sorted by bound, largest first. The criterion succeeds when any
/// check passes, and then only under the assumption that A is a minimal
/// decomposition. For d < 3 no partition exists and the list is empty, which
/// callers report as "criterion inapplicable".
pub fn kruskal_criterion(a: &PointSet, d: u32) -> Result<Vec<PartitionCheck>, KruskalError> {
    if a.is_empty() {
        return Err(KruskalError::EmptySet);
    }
    let mut ranks = KruskalRanks::new(a);
    partition_checks(&mut ranks, a.len(), d)
}
