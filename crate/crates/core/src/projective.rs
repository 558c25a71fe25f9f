//! Points of projective space, finite point sets, graded-lex monomial bases
//! and Veronese embeddings.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::{ints_to_json, JsonInt};
use crate::linalg::{clear_denominators, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    CoordinateCount {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("points {first} and {second} are the same projective point")]
    DuplicatePoint { first: usize, second: usize },
    #[error("index {index} is out of range for a set of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A point of Pⁿ stored as its canonical representative: a primitive integer
/// vector whose first nonzero coordinate is positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<BigInt>,
}

impl ProjectivePoint {
    /// Canonical representative of the line through `raw`.
    pub fn normalize(raw: &[BigInt]) -> Result<Self, ProjectiveError> {
        let gcd = raw.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if gcd.is_zero() {
            return Err(ProjectiveError::ZeroVector);
        }
        let negative = raw.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
        let coords = raw
            .iter()
            .map(|v| {
                let q = v / &gcd;
                if negative {
                    -q
                } else {
                    q
                }
            })
            .collect();
        Ok(Self { coords })
    }

    pub fn from_i64s(raw: &[i64]) -> Result<Self, ProjectiveError> {
        let big: Vec<BigInt> = raw.iter().map(|&v| BigInt::from(v)).collect();
        Self::normalize(&big)
    }

    /// Rational coordinates are cleared to a primitive integer vector.
    pub fn from_rationals(raw: &[Rational]) -> Result<Self, ProjectiveError> {
        Self::normalize(&clear_denominators(raw))
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// The scalar s with `raw = s · self`, if `raw` represents this point.
    pub fn scale_of(&self, raw: &[BigInt]) -> Option<Rational> {
        if raw.len() != self.coords.len() {
            return None;
        }
        let k = self.coords.iter().position(|c| !c.is_zero())?;
        let s = Rational::new(raw[k].clone(), self.coords[k].clone());
        self.coords
            .iter()
            .zip(raw)
            .all(|(c, r)| Rational::from_integer(c.clone()) * &s == Rational::from_integer(r.clone()))
            .then_some(s)
    }

    /// n for a point of Pⁿ.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Value of the monomial with the given exponent vector at the canonical
    /// coordinates.
    pub fn monomial(&self, exponent: &[u32]) -> BigInt {
        self.coords
            .iter()
            .zip(exponent)
            .filter(|(_, &e)| e > 0)
            .fold(BigInt::one(), |acc, (c, &e)| {
                acc * num_traits::pow(c.clone(), e as usize)
            })
    }

    /// All degree-d monomials of the canonical coordinates, in graded-lex
    /// order. Not normalized.
    pub fn monomials(&self, d: u32) -> Vec<BigInt> {
        MonomialBasis::new(self.ambient_dim(), d)
            .exponents()
            .iter()
            .map(|e| self.monomial(e))
            .collect()
    }

    /// Image under the degree-d Veronese embedding, as a normalized point of
    /// P^N with N = binom(n+d, d) − 1.
    pub fn veronese(&self, d: u32) -> ProjectivePoint {
        assert!(d >= 1, "Veronese embedding needs degree at least 1");
        ProjectivePoint::normalize(&self.monomials(d)).expect("powers of a nonzero vector are not all zero")
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Ordered set of distinct points of Pⁿ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ambient_dim: usize,
    points: Vec<ProjectivePoint>,
}

impl PointSet {
    /// Rejects points of the wrong length and repeated points (after
    /// normalization). An empty set is allowed.
    pub fn new(ambient_dim: usize, points: Vec<ProjectivePoint>) -> Result<Self, ProjectiveError> {
        for (index, p) in points.iter().enumerate() {
            if p.coords.len() != ambient_dim + 1 {
                return Err(ProjectiveError::CoordinateCount {
                    index,
                    expected: ambient_dim + 1,
                    found: p.coords.len(),
                });
            }
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]).then(a.cmp(&b)));
        for pair in order.windows(2) {
            if points[pair[0]] == points[pair[1]] {
                return Err(ProjectiveError::DuplicatePoint {
                    first: pair[0].min(pair[1]),
                    second: pair[0].max(pair[1]),
                });
            }
        }
        Ok(Self { ambient_dim, points })
    }

    /// Normalizes raw integer rows and builds the set.
    pub fn from_integer_rows(ambient_dim: usize, rows: &[Vec<BigInt>]) -> Result<Self, ProjectiveError> {
        let mut points = Vec::with_capacity(rows.len());
        for (index, row) in rows.iter().enumerate() {
            if row.len() != ambient_dim + 1 {
                return Err(ProjectiveError::CoordinateCount {
                    index,
                    expected: ambient_dim + 1,
                    found: row.len(),
                });
            }
            points.push(ProjectivePoint::normalize(row)?);
        }
        Self::new(ambient_dim, points)
    }

    pub fn from_i64_rows(ambient_dim: usize, rows: &[Vec<i64>]) -> Result<Self, ProjectiveError> {
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::from_integer_rows(ambient_dim, &big)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    /// ℓ(Z)
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Subset picked by index, keeping the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, ProjectiveError> {
        let mut points = Vec::with_capacity(indices.len());
        for &index in indices {
            let p = self.points.get(index).ok_or(ProjectiveError::IndexOutOfRange {
                index,
                len: self.points.len(),
            })?;
            points.push(p.clone());
        }
        Self::new(self.ambient_dim, points)
    }

    /// The set with one point removed.
    pub fn without(&self, index: usize) -> Self {
        let mut points = self.points.clone();
        points.remove(index);
        Self {
            ambient_dim: self.ambient_dim,
            points,
        }
    }

    /// Concatenation; fails if the two sets share a point.
    pub fn union(&self, other: &Self) -> Result<Self, ProjectiveError> {
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        Self::new(self.ambient_dim, points)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.points.iter().all(|p| !other.points.contains(p))
    }

    /// The degree-d evaluation map as an ℓ(Z) × binom(n+d, d) matrix: row i
    /// holds every basis monomial evaluated at the canonical coordinates of
    /// point i.
    pub fn evaluation_matrix(&self, d: u32) -> RationalMatrix {
        let basis = MonomialBasis::new(self.ambient_dim, d);
        let mut entries = Vec::with_capacity(self.len() * basis.len());
        for p in &self.points {
            entries.extend(
                basis
                    .exponents()
                    .iter()
                    .map(|e| Rational::from_integer(p.monomial(e))),
            );
        }
        RationalMatrix::new(self.len(), basis.len(), entries).expect("shape is consistent")
    }

    pub fn to_document(&self) -> PointSetDocument {
        PointSetDocument {
            n: self.ambient_dim,
            points: self.points.iter().map(|p| ints_to_json(&p.coords)).collect(),
        }
    }
}

/// The JSON form `{"n": 2, "points": [[1,0,0], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetDocument {
    pub n: usize,
    pub points: Vec<Vec<JsonInt>>,
}

impl PointSetDocument {
    /// Coordinates exactly as written.
    pub fn raw_rows(&self) -> Vec<Vec<BigInt>> {
        self.points
            .iter()
            .map(|row| row.iter().map(|v| v.0.clone()).collect())
            .collect()
    }

    pub fn into_point_set(self) -> Result<PointSet, ProjectiveError> {
        let rows: Vec<Vec<BigInt>> = self
            .points
            .into_iter()
            .map(|row| row.into_iter().map(BigInt::from).collect())
            .collect();
        PointSet::from_integer_rows(self.n, &rows)
    }
}

/// Exponent vectors of all degree-d monomials in n+1 variables, in graded
/// lexicographic order with x₀ > x₁ > … > xₙ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: u32,
    exponents: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: u32) -> Self {
        let mut exponents = Vec::with_capacity(binomial(n + d as usize, d as usize));
        let mut current = vec![0u32; n + 1];
        fill_exponents(0, d, &mut current, &mut exponents);
        Self { n, d, exponents }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    /// Position of an exponent vector, if it belongs to this basis.
    pub fn index_of(&self, exponent: &[u32]) -> Option<usize> {
        self.exponents.binary_search_by(|e| exponent.cmp(e)).ok()
    }
}

fn fill_exponents(var: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(current.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e;
        fill_exponents(var + 1, remaining - e, current, out);
    }
    current[var] = 0;
}

/// binom(n, k) for desk-sized arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
