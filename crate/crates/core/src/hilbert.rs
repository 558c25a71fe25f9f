//! Hilbert functions of finite point sets and the bookkeeping built on them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kernel_basis, rank, RationalMatrix};
use crate::projective::PointSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("the point set is empty")]
    EmptySet,
    #[error("the two point sets share point {point}")]
    NotDisjoint { point: String },
    #[error("point sets live in P^{left} and P^{right}")]
    AmbientMismatch { left: usize, right: usize },
}

/// h_Z(d): rank of the degree-d evaluation map.
pub fn hilbert_function(z: &PointSet, d: u32) -> Result<usize, HilbertError> {
    if z.is_empty() {
        return Err(HilbertError::EmptySet);
    }
    Ok(rank(&z.evaluation_matrix(d)))
}

/// h, Dh and h¹ of one point set over degrees `0..=d_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertProfile {
    /// ℓ(Z)
    #[serde(rename = "l")]
    pub set_size: usize,
    pub h: Vec<usize>,
    pub dh: Vec<usize>,
    pub h1: Vec<usize>,
}

impl HilbertProfile {
    pub fn d_max(&self) -> u32 {
        (self.h.len() - 1) as u32
    }

    /// Dh_Z(j), zero past the computed range once the profile has stabilized.
    pub fn dh_at(&self, j: i64) -> usize {
        if j < 0 {
            return 0;
        }
        match self.dh.get(j as usize) {
            Some(&v) => v,
            None => {
                assert!(self.is_stable(), "degree {j} lies past an unstabilized profile");
                0
            }
        }
    }

    /// True once h has reached ℓ(Z).
    pub fn is_stable(&self) -> bool {
        self.h.last() == Some(&self.set_size)
    }

    /// Sum of Dh(j) for `from <= j <= to`.
    pub fn dh_sum(&self, from: i64, to: i64) -> usize {
        (from.max(0)..=to).map(|j| self.dh_at(j)).sum()
    }
}

/// Profile through `d_max`, which defaults to ℓ(Z) − 1, the degree by which
/// any finite set imposes independent conditions.
pub fn hilbert_profile(z: &PointSet, d_max: Option<u32>) -> Result<HilbertProfile, HilbertError> {
    if z.is_empty() {
        return Err(HilbertError::EmptySet);
    }
    let len = z.len();
    let d_max = d_max.unwrap_or((len - 1) as u32);
    let mut h = Vec::with_capacity(d_max as usize + 1);
    for d in 0..=d_max {
        // once h reaches ℓ(Z) it stays there
        let value = match h.last() {
            Some(&prev) if prev == len => len,
            _ => hilbert_function(z, d)?,
        };
        h.push(value);
    }
    let dh = h
        .iter()
        .scan(0usize, |prev, &v| {
            let diff = v - *prev;
            *prev = v;
            Some(diff)
        })
        .collect();
    let h1 = h.iter().map(|&v| len - v).collect();
    Ok(HilbertProfile {
        set_size: len,
        h,
        dh,
        h1,
    })
}

/// Projective dimension of the span of v_d(Z).
pub fn span_dim(z: &PointSet, d: u32) -> Result<i64, HilbertError> {
    Ok(hilbert_function(z, d)? as i64 - 1)
}

/// h¹_Z(d) = ℓ(Z) − h_Z(d).
pub fn h1(z: &PointSet, d: u32) -> Result<usize, HilbertError> {
    Ok(z.len() - hilbert_function(z, d)?)
}

fn check_disjoint(a: &PointSet, b: &PointSet) -> Result<(), HilbertError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(HilbertError::AmbientMismatch {
            left: a.ambient_dim(),
            right: b.ambient_dim(),
        });
    }
    if a.is_empty() || b.is_empty() {
        return Err(HilbertError::EmptySet);
    }
    if let Some(p) = a.points().iter().find(|p| b.points().contains(p)) {
        return Err(HilbertError::NotDisjoint { point: p.to_string() });
    }
    Ok(())
}

/// dim(⟨v_d(A)⟩ ∩ ⟨v_d(B)⟩) for disjoint A and B, read off the h¹ values of
/// A, B and Z = A ∪ B:
///
/// `h¹_Z(d) − h¹_A(d) − h¹_B(d) − 1`
///
/// When v_d(A) and v_d(B) are each independent (as for minimal
/// decompositions) the correction terms vanish and this is h¹_Z(d) − 1.
/// The empty intersection has dimension −1.
pub fn grassmann_intersection_dim(a: &PointSet, b: &PointSet, d: u32) -> Result<i64, HilbertError> {
    check_disjoint(a, b)?;
    let z = a.union(b).expect("disjointness was checked");
    Ok(h1(&z, d)? as i64 - h1(a, d)? as i64 - h1(b, d)? as i64 - 1)
}

/// The same dimension computed from explicit spans: pairs (x, y) with
/// Σ xᵢ v_d(Aᵢ) = Σ yⱼ v_d(Bⱼ) form the kernel of [V_Aᵀ | −V_Bᵀ], and the
/// vectors V_Aᵀ x they produce span the intersection.
pub fn span_intersection_dim_direct(a: &PointSet, b: &PointSet, d: u32) -> Result<i64, HilbertError> {
    check_disjoint(a, b)?;
    let va = a.evaluation_matrix(d).transpose();
    let vb = b.evaluation_matrix(d).transpose();
    let neg_vb = RationalMatrix::new(vb.rows(), vb.cols(), vb.entries().iter().map(|v| -v).collect())
        .expect("same shape");
    let stacked = va.hstack(&neg_vb).expect("same row count");
    let witnesses: Vec<_> = kernel_basis(&stacked)
        .into_iter()
        .map(|v| va.mul_vec(&v[..a.len()]).expect("length matches"))
        .collect();
    if witnesses.is_empty() {
        return Ok(-1);
    }
    let dim = witnesses[0].len();
    let m = RationalMatrix::new(witnesses.len(), dim, witnesses.concat()).expect("shape");
    Ok(rank(&m) as i64 - 1)
}
