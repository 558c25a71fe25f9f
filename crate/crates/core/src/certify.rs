//! Identifiability certificates.
//!
//! Rules, in the order they are cited:
//!
//! * `TRIVIAL_RANK_ONE`: a single point.
//! * `KRUSKAL`: some partition a + b + c = d has 2ℓ(A) ≤ k_a + k_b + k_c − 2.
//! * `EXTENDED_SEPTIC`: ternary septics with 11 points, k₁ = 3 and k₃ = 10.
//! * `CUBIC_FAMILY`: ternary forms of odd degree d = 7 + 2q (q ≥ −1) with
//!   3q + 10 points on a plane cubic, k₁ = 3 and k_{q+3} = 3q + 9. For q = −1
//!   the cubic is automatic.
//!
//! Every rule is a sufficient condition that holds only when A is a minimal
//! decomposition of the tensor. Without weights that is recorded as an
//! assumption; [`certify_weighted`] verifies it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::hilbert::{hilbert_profile, HilbertError};
use crate::json::{ints_to_json, JsonInt};
use crate::kruskal::{partition_checks, KruskalError, KruskalRanks, PartitionCheck};
use crate::linalg::{kernel_basis, primitive_integer_vector, rank, Rational};
use crate::projective::PointSet;
use crate::tensor::{is_minimal, synthesize, WeightedDecomposition};

pub const MINIMALITY: &str = "A is a minimal decomposition of T";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("the point set is empty")]
    EmptySet,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("plane cubics need points of P^2, got P^{found}")]
    WrongAmbientDim { found: usize },
    #[error("{weights} weights given for {points} points")]
    WeightCount { points: usize, weights: usize },
    #[error("weight {index} is zero")]
    ZeroWeight { index: usize },
    #[error("decomposition not minimal: v_{degree}(A) is linearly dependent")]
    NotMinimal { degree: u32 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl From<KruskalError> for CertifyError {
    fn from(e: KruskalError) -> Self {
        match e {
            KruskalError::EmptySet => CertifyError::EmptySet,
            KruskalError::ZeroDegree => CertifyError::ZeroDegree,
        }
    }
}

impl From<HilbertError> for CertifyError {
    fn from(e: HilbertError) -> Self {
        CertifyError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Identifiable,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    TrivialRankOne,
    Kruskal,
    ExtendedSeptic,
    CubicFamily,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::TrivialRankOne => "TRIVIAL_RANK_ONE",
            Rule::Kruskal => "KRUSKAL",
            Rule::ExtendedSeptic => "EXTENDED_SEPTIC",
            Rule::CubicFamily => "CUBIC_FAMILY",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AssumptionStatus {
    Assumed,
    Verified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumption {
    pub statement: String,
    pub status: AssumptionStatus,
}

/// Plane cubics through A: the degree-3 kernel of the evaluation map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicContainment {
    pub contained: bool,
    /// First kernel basis vector, graded-lex coefficients, primitive.
    pub cubic_form: Option<Vec<BigInt>>,
    pub unique: bool,
}

#[derive(Serialize)]
struct CubicContainmentJson {
    contained: bool,
    cubic_form: Option<Vec<JsonInt>>,
    unique: bool,
}

impl Serialize for CubicContainment {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CubicContainmentJson {
            contained: self.contained,
            cubic_form: self.cubic_form.as_deref().map(ints_to_json),
            unique: self.unique,
        }
        .serialize(serializer)
    }
}

pub fn cubic_containment(a: &PointSet) -> Result<CubicContainment, CertifyError> {
    if a.ambient_dim() != 2 {
        return Err(CertifyError::WrongAmbientDim {
            found: a.ambient_dim(),
        });
    }
    let kernel = if a.is_empty() {
        kernel_basis(&crate::linalg::RationalMatrix::zeros(0, 10))
    } else {
        kernel_basis(&a.evaluation_matrix(3))
    };
    Ok(CubicContainment {
        contained: !kernel.is_empty(),
        cubic_form: kernel.first().map(|v| primitive_integer_vector(v)),
        unique: kernel.len() == 1,
    })
}

/// Everything computed on the way to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub n: usize,
    pub d: u32,
    pub length: usize,
    /// k_j(A) for every degree j that was needed.
    pub kruskal_ranks: BTreeMap<u32, usize>,
    pub kruskal_applicable: bool,
    pub kruskal_checks: Vec<PartitionCheck>,
    /// Every rule whose hypotheses were verified, not only the cited one.
    pub applicable_rules: Vec<Rule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubic: Option<CubicContainment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dh: Option<Vec<usize>>,
    /// Why each rule that did not apply fell short.
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub rule: Option<Rule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<String>,
    pub evidence: Evidence,
    pub assumptions: Vec<Assumption>,
}

impl Certificate {
    pub fn is_identifiable(&self) -> bool {
        self.verdict == Verdict::Identifiable
    }
}

/// d = 7 + 2q with q ≥ −1, if d has that shape.
pub fn cubic_family_q(d: u32) -> Option<i64> {
    (d >= 5 && d % 2 == 1).then(|| (d as i64 - 7) / 2)
}

/// Dh of 3q + 10 points meeting the cubic-family hypotheses:
/// 1, 2, then q + 2 threes, then 1, then zeros through `d_max`.
pub fn cubic_family_dh(q: i64, d_max: usize) -> Vec<usize> {
    let mut dh = vec![0usize; d_max + 1];
    for (j, slot) in dh.iter_mut().enumerate() {
        let j = j as i64;
        *slot = match j {
            0 => 1,
            1 => 2,
            _ if j <= q + 3 => 3,
            _ if j == q + 4 => 1,
            _ => 0,
        };
    }
    dh
}

struct RuleOutcome {
    holds: bool,
    diagnostics: Vec<String>,
}

fn septic_rule(a: &PointSet, d: u32, ranks: &mut KruskalRanks<'_>) -> Result<RuleOutcome, CertifyError> {
    let mut diagnostics = Vec::new();
    if a.ambient_dim() != 2 {
        diagnostics.push(format!("EXTENDED_SEPTIC: needs P^2, got P^{}", a.ambient_dim()));
    }
    if d != 7 {
        diagnostics.push(format!("EXTENDED_SEPTIC: needs d = 7, got d = {d}"));
    }
    if a.len() != 11 {
        diagnostics.push(format!("EXTENDED_SEPTIC: needs ℓ(A) = 11, got {}", a.len()));
    }
    if diagnostics.is_empty() {
        let k1 = ranks.rank(1)?;
        if k1 < 3 {
            diagnostics.push(format!("EXTENDED_SEPTIC: k₁ < 3 (k₁ = {k1})"));
        }
        let k3 = ranks.rank(3)?;
        if k3 < 10 {
            diagnostics.push(format!("EXTENDED_SEPTIC: k₃ < 10 (k₃ = {k3})"));
        }
    }
    Ok(RuleOutcome {
        holds: diagnostics.is_empty(),
        diagnostics,
    })
}

struct CubicOutcome {
    rule: RuleOutcome,
    q: Option<i64>,
    cubic: Option<CubicContainment>,
    /// The ℓ(A) < 3q + 10 branch with the rank hypotheses met, which Kruskal
    /// must settle with the partition (q+3, q+3, 1).
    short_branch: bool,
}

fn cubic_rule(a: &PointSet, d: u32, ranks: &mut KruskalRanks<'_>) -> Result<CubicOutcome, CertifyError> {
    let mut diagnostics = Vec::new();
    let q = cubic_family_q(d);
    if a.ambient_dim() != 2 {
        diagnostics.push(format!("CUBIC_FAMILY: needs P^2, got P^{}", a.ambient_dim()));
    }
    let Some(q) = q else {
        diagnostics.push(format!("CUBIC_FAMILY: needs odd d ≥ 5, got d = {d}"));
        return Ok(CubicOutcome {
            rule: RuleOutcome {
                holds: false,
                diagnostics,
            },
            q: None,
            cubic: None,
            short_branch: false,
        });
    };
    if !diagnostics.is_empty() {
        return Ok(CubicOutcome {
            rule: RuleOutcome {
                holds: false,
                diagnostics,
            },
            q: Some(q),
            cubic: None,
            short_branch: false,
        });
    }
    let len = a.len();
    let target = (3 * q + 10) as usize;
    let cubic = cubic_containment(a)?;
    if len > target {
        diagnostics.push(format!("CUBIC_FAMILY: ℓ(A) = {len} exceeds 3q+10 = {target}"));
    }
    if q >= 0 && !cubic.contained {
        diagnostics.push("CUBIC_FAMILY: A lies on no plane cubic".to_string());
    }
    let k1 = ranks.rank(1)?;
    if k1 < len.min(3) {
        diagnostics.push(format!("CUBIC_FAMILY: k₁ < {} (k₁ = {k1})", len.min(3)));
    }
    let high = (q + 3) as u32;
    let k_high = ranks.rank(high)?;
    let wanted = len.min(target - 1);
    if k_high < wanted {
        diagnostics.push(format!("CUBIC_FAMILY: k_{high} < {wanted} (k_{high} = {k_high})"));
    }
    let short_branch = len < target && diagnostics.iter().all(|m| m.contains("plane cubic"));
    if len < target {
        diagnostics.push(format!(
            "CUBIC_FAMILY: ℓ(A) = {len} < 3q+10 = {target}, the case Kruskal covers with partition ({high},{high},1)"
        ));
    }
    Ok(CubicOutcome {
        rule: RuleOutcome {
            holds: diagnostics.is_empty(),
            diagnostics,
        },
        q: Some(q),
        cubic: Some(cubic),
        short_branch,
    })
}

/// Runs every rule on A in degree d and cites the first that applies.
pub fn certify(a: &PointSet, d: u32) -> Result<Certificate, CertifyError> {
    if a.is_empty() {
        return Err(CertifyError::EmptySet);
    }
    if d == 0 {
        return Err(CertifyError::ZeroDegree);
    }
    let assumptions = vec![Assumption {
        statement: MINIMALITY.to_string(),
        status: AssumptionStatus::Assumed,
    }];
    let mut ranks = KruskalRanks::new(a);
    let len = a.len();

    if len == 1 {
        return Ok(Certificate {
            verdict: Verdict::Identifiable,
            rule: Some(Rule::TrivialRankOne),
            conclusion: Some("T is a pure power: rank 1, identifiable".to_string()),
            evidence: Evidence {
                n: a.ambient_dim(),
                d,
                length: 1,
                kruskal_ranks: BTreeMap::new(),
                kruskal_applicable: d >= 3,
                kruskal_checks: Vec::new(),
                applicable_rules: vec![Rule::TrivialRankOne],
                q: None,
                cubic: None,
                dh: None,
                diagnostics: Vec::new(),
            },
            assumptions,
        });
    }

    let mut applicable = Vec::new();
    let mut diagnostics = Vec::new();

    let checks = partition_checks(&mut ranks, len, d)?;
    let kruskal_applicable = !checks.is_empty();
    if !kruskal_applicable {
        diagnostics.push(format!(
            "KRUSKAL: inapplicable, d = {d} has no three-part partition"
        ));
    } else if checks.iter().any(|c| c.passes) {
        applicable.push(Rule::Kruskal);
    } else {
        let best = &checks[0];
        diagnostics.push(format!(
            "KRUSKAL: no partition passes; widest is {:?} with ranks {:?} and bound {} < {len}",
            best.partition, best.ranks, best.bound
        ));
    }

    let septic = septic_rule(a, d, &mut ranks)?;
    if septic.holds {
        if applicable.contains(&Rule::Kruskal) {
            return Err(CertifyError::Internal(
                "the septic hypotheses hold but a Kruskal partition passes".to_string(),
            ));
        }
        applicable.push(Rule::ExtendedSeptic);
    }
    diagnostics.extend(septic.diagnostics);

    let cubic = cubic_rule(a, d, &mut ranks)?;
    let mut dh = None;
    if cubic.short_branch {
        let q = cubic.q.expect("q is known on this branch");
        let high = (q + 3) as u32;
        let widened = checks
            .iter()
            .find(|c| c.partition == [high, high, 1])
            .is_some_and(|c| c.passes);
        if !widened {
            return Err(CertifyError::Internal(format!(
                "ℓ(A) < 3q+10 with the rank hypotheses but partition ({high},{high},1) fails"
            )));
        }
    }
    if cubic.rule.holds {
        let q = cubic.q.expect("q is known when the rule holds");
        let d_max = (q + 5) as usize;
        let profile = hilbert_profile(a, Some(d_max as u32))?;
        let expected = cubic_family_dh(q, d_max);
        if profile.dh != expected {
            return Err(CertifyError::Internal(format!(
                "cubic-family hypotheses hold but Dh = {:?}, expected {:?}",
                profile.dh, expected
            )));
        }
        if q >= 0 && !cubic.cubic.as_ref().is_some_and(|c| c.unique) {
            return Err(CertifyError::Internal(
                "cubic-family hypotheses hold but the cubic through A is not unique".to_string(),
            ));
        }
        dh = Some(profile.dh);
        applicable.push(Rule::CubicFamily);
    }
    diagnostics.extend(cubic.rule.diagnostics);

    let rule = applicable.first().copied();
    let (verdict, conclusion) = match rule {
        Some(rule) => (
            Verdict::Identifiable,
            Some(format!(
                "by {}: T has rank {len} and A is its unique decomposition up to order and scaling",
                rule.name()
            )),
        ),
        None => (Verdict::Inconclusive, None),
    };
    Ok(Certificate {
        verdict,
        rule,
        conclusion,
        evidence: Evidence {
            n: a.ambient_dim(),
            d,
            length: len,
            kruskal_ranks: ranks.computed(),
            kruskal_applicable,
            kruskal_checks: checks,
            applicable_rules: applicable,
            q: cubic.q,
            cubic: cubic.cubic,
            dh,
            diagnostics,
        },
        assumptions,
    })
}

/// Certifies the decomposition Σ wᵢ v_d(Pᵢ) after checking that it is
/// minimal: all weights nonzero and v_d(A) independent.
pub fn certify_weighted(a: &PointSet, weights: &[Rational], d: u32) -> Result<Certificate, CertifyError> {
    if a.is_empty() {
        return Err(CertifyError::EmptySet);
    }
    if d == 0 {
        return Err(CertifyError::ZeroDegree);
    }
    if weights.len() != a.len() {
        return Err(CertifyError::WeightCount {
            points: a.len(),
            weights: weights.len(),
        });
    }
    if let Some(index) = weights.iter().position(Zero::is_zero) {
        return Err(CertifyError::ZeroWeight { index });
    }
    if rank(&a.evaluation_matrix(d)) < a.len() {
        return Err(CertifyError::NotMinimal { degree: d });
    }
    let decomposition =
        WeightedDecomposition::new(a.clone(), weights.to_vec()).expect("weights were checked");
    let t = synthesize(&decomposition, d);
    if !is_minimal(&t, a).map_err(|e| CertifyError::Internal(e.to_string()))? {
        return Err(CertifyError::Internal(
            "independent points with nonzero weights failed the minimality check".to_string(),
        ));
    }
    let mut certificate = certify(a, d)?;
    for assumption in &mut certificate.assumptions {
        if assumption.statement == MINIMALITY {
            assumption.status = AssumptionStatus::Verified;
        }
    }
    Ok(certificate)
}
