//! Cayley-Bacharach checks and the Geramita–Kreuzer–Robbiano inequality.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::hilbert::{hilbert_profile, HilbertError};
use crate::json::{ints_to_json, JsonInt};
use crate::linalg::{kernel_basis, primitive_integer_vector, rank, Rational};
use crate::projective::{MonomialBasis, PointSet, ProjectivePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CbError {
    #[error("the point set is empty")]
    EmptySet,
    #[error("at least {required} points are needed, got {found}")]
    TooFewPoints { required: usize, found: usize },
    #[error("the set does not satisfy CB({degree})")]
    NotCayleyBacharach { degree: u32 },
}

impl From<HilbertError> for CbError {
    fn from(_: HilbertError) -> Self {
        CbError::EmptySet
    }
}

/// Outcome of a CB(d) check. On failure, `separating_form` is a degree-d
/// form (graded-lex coefficients) vanishing on Z ∖ {P} but not at P, where
/// P is point `separating_point`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CbReport {
    pub degree: u32,
    pub holds: bool,
    pub separating_point: Option<usize>,
    pub separating_form: Option<Vec<BigInt>>,
}

#[derive(Serialize)]
struct CbReportJson {
    d: u32,
    holds: bool,
    separating_point: Option<usize>,
    separating_form: Option<Vec<JsonInt>>,
}

impl Serialize for CbReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CbReportJson {
            d: self.degree,
            holds: self.holds,
            separating_point: self.separating_point,
            separating_form: self.separating_form.as_deref().map(ints_to_json),
        }
        .serialize(serializer)
    }
}

fn evaluation_rank(z: &PointSet, d: u32) -> usize {
    if z.is_empty() {
        0
    } else {
        rank(&z.evaluation_matrix(d))
    }
}

/// Value of a form given by graded-lex coefficients at the canonical
/// coordinates of `p`.
pub fn evaluate_form(form: &[Rational], d: u32, p: &ProjectivePoint) -> Rational {
    let basis = MonomialBasis::new(p.ambient_dim(), d);
    assert_eq!(
        form.len(),
        basis.len(),
        "form has the wrong number of coefficients"
    );
    basis
        .exponents()
        .iter()
        .zip(form)
        .filter(|(_, c)| !c.is_zero())
        .fold(Rational::zero(), |acc, (e, c)| {
            acc + c * Rational::from_integer(p.monomial(e))
        })
}

/// First kernel basis form of Z ∖ {P} that does not vanish at P.
fn separating_form(z: &PointSet, index: usize, d: u32) -> Option<Vec<BigInt>> {
    let rest = z.without(index);
    let p = &z.points()[index];
    let kernel = if rest.is_empty() {
        // every form vanishes on the empty set
        let size = MonomialBasis::new(z.ambient_dim(), d).len();
        (0..size)
            .map(|i| {
                let mut v = vec![Rational::zero(); size];
                v[i] = Rational::from_integer(1.into());
                v
            })
            .collect()
    } else {
        kernel_basis(&rest.evaluation_matrix(d))
    };
    kernel
        .into_iter()
        .find(|form| !evaluate_form(form, d, p).is_zero())
        .map(|form| primitive_integer_vector(&form))
}

/// CB(d): every degree-d form through all but one point of Z also passes
/// through the last one.
///
/// Removing P can only enlarge the space of degree-d forms vanishing on the
/// set, and it does so exactly when h_{Z∖{P}}(d) < h_Z(d). The first such P
/// (lowest index) is reported together with an explicit separating form.
pub fn cb_check(z: &PointSet, d: u32) -> Result<CbReport, CbError> {
    if z.is_empty() {
        return Err(CbError::EmptySet);
    }
    let full = evaluation_rank(z, d);
    for index in 0..z.len() {
        if evaluation_rank(&z.without(index), d) < full {
            return Ok(CbReport {
                degree: d,
                holds: false,
                separating_point: Some(index),
                separating_form: separating_form(z, index, d),
            });
        }
    }
    Ok(CbReport {
        degree: d,
        holds: true,
        separating_point: None,
        separating_form: None,
    })
}

/// CB(d) straight from the definition: for each P, take a basis of the
/// degree-d forms vanishing on Z ∖ {P} and evaluate each at P. Returns the
/// first point where some form does not vanish, or `None` when CB(d) holds.
pub fn cb_failure_by_definition(z: &PointSet, d: u32) -> Result<Option<usize>, CbError> {
    if z.is_empty() {
        return Err(CbError::EmptySet);
    }
    Ok((0..z.len()).find(|&index| separating_form(z, index, d).is_some()))
}

/// Largest d with CB(d), or −1 if even CB(0) fails. CB holds in a
/// down-closed range of degrees and always fails from ℓ(Z) − 1 on, so the
/// upward scan stops there at the latest.
pub fn cb_max_degree(z: &PointSet) -> Result<i64, CbError> {
    if z.len() < 2 {
        return Err(CbError::TooFewPoints {
            required: 2,
            found: z.len(),
        });
    }
    for d in 0..z.len() as u32 {
        if !cb_check(z, d)?.holds {
            return Ok(d as i64 - 1);
        }
    }
    Ok(z.len() as i64 - 1)
}

/// For a CB(i) set, checks
/// Dh(0) + … + Dh(j) ≤ Dh(i+1−j) + … + Dh(i+1) for every 0 ≤ j ≤ i+1.
///
/// The inequality is a theorem for CB(i) sets, so `Ok(false)` means the
/// Hilbert function or CB computation is wrong somewhere.
pub fn gkr_audit(z: &PointSet, i: u32) -> Result<bool, CbError> {
    if !cb_check(z, i)?.holds {
        return Err(CbError::NotCayleyBacharach { degree: i });
    }
    let d_max = (i + 1).max(z.len() as u32 - 1);
    let profile = hilbert_profile(z, Some(d_max))?;
    let top = i as i64 + 1;
    Ok((0..=top).all(|j| profile.dh_sum(0, j) <= profile.dh_sum(top - j, top)))
}
