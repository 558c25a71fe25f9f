//! Symmetric tensors as exact coefficient vectors over the graded-lex
//! monomial basis.
//!
//! The stored coefficient of monomial xᵉ is the Veronese coordinate, so
//! Σ aᵢ Lᵢᵈ is stored as Σ aᵢ Pᵢᵉ: a pure power Lᵈ has exactly the
//! coordinates of v_d(L). Multiplying coordinate e by the multinomial
//! d!/(e₀!⋯eₙ!) gives the coefficient of xᵉ in the expanded polynomial; see
//! [`SymmetricTensor::polynomial_coefficients`].

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json::{rationals_to_json, JsonRational};
use crate::linalg::{rank, solve, Rational, RationalMatrix};
use crate::projective::{MonomialBasis, PointSet, ProjectiveError};

/// Coefficient order tag written into tensor documents.
pub const GRLEX: &str = "grlex";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("weight {index} is zero")]
    ZeroWeight { index: usize },
    #[error("{weights} weights given for {points} points")]
    WeightCount { points: usize, weights: usize },
    #[error("expected {expected} coefficients for degree {d} in {vars} variables, found {found}")]
    CoefficientCount {
        vars: usize,
        d: u32,
        expected: usize,
        found: usize,
    },
    #[error("tensor lives in P^{tensor} but the points in P^{points}")]
    AmbientMismatch { tensor: usize, points: usize },
    #[error("unsupported coefficient order {0:?}, only \"grlex\" is understood")]
    UnknownOrder(String),
    #[error("catalecticant degree {s} must lie in 1..={max}")]
    CatalecticantDegree { s: u32, max: u32 },
    #[error("the tensor is not in the span of the Veronese images of the points")]
    NotInSpan,
    #[error(transparent)]
    Points(#[from] ProjectiveError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricTensor {
    n: usize,
    d: u32,
    coeffs: Vec<Rational>,
}

impl SymmetricTensor {
    pub fn new(n: usize, d: u32, coeffs: Vec<Rational>) -> Result<Self, TensorError> {
        let expected = MonomialBasis::new(n, d).len();
        if coeffs.len() != expected {
            return Err(TensorError::CoefficientCount {
                vars: n + 1,
                d,
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { n, d, coeffs })
    }

    pub fn zero(n: usize, d: u32) -> Self {
        let len = MonomialBasis::new(n, d).len();
        Self {
            n,
            d,
            coeffs: vec![Rational::zero(); len],
        }
    }

    /// Builds a tensor from the coefficients of the expanded polynomial.
    pub fn from_polynomial_coefficients(
        n: usize,
        d: u32,
        coeffs: Vec<Rational>,
    ) -> Result<Self, TensorError> {
        let mut t = Self::new(n, d, coeffs)?;
        let basis = t.basis();
        for (c, e) in t.coeffs.iter_mut().zip(basis.exponents()) {
            *c /= Rational::from_integer(multinomial(e));
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.n, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficient of a monomial given by its exponent vector.
    pub fn coefficient(&self, exponent: &[u32]) -> Option<&Rational> {
        self.basis().index_of(exponent).map(|i| &self.coeffs[i])
    }

    /// Coefficients of the expanded polynomial, i.e. each Veronese
    /// coordinate times its multinomial.
    pub fn polynomial_coefficients(&self) -> Vec<Rational> {
        self.basis()
            .exponents()
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| c * Rational::from_integer(multinomial(e)))
            .collect()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn to_document(&self) -> TensorDocument {
        TensorDocument {
            n: self.n,
            d: self.d,
            order: GRLEX.to_string(),
            coeffs: rationals_to_json(&self.coeffs),
        }
    }
}

impl std::ops::Add for &SymmetricTensor {
    type Output = SymmetricTensor;

    fn add(self, other: &SymmetricTensor) -> SymmetricTensor {
        assert_eq!((self.n, self.d), (other.n, other.d), "tensor shapes differ");
        SymmetricTensor {
            n: self.n,
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// d!/(e₀!⋯eₙ!)
pub fn multinomial(exponent: &[u32]) -> BigInt {
    let factorial = |k: u32| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    let d: u32 = exponent.iter().sum();
    exponent.iter().fold(factorial(d), |acc, &e| acc / factorial(e))
}

/// `{"n":2, "d":7, "order":"grlex", "coeffs":["2191","-849", ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDocument {
    pub n: usize,
    pub d: u32,
    #[serde(default = "default_order")]
    pub order: String,
    pub coeffs: Vec<JsonRational>,
}

fn default_order() -> String {
    GRLEX.to_string()
}

impl TensorDocument {
    pub fn into_tensor(self) -> Result<SymmetricTensor, TensorError> {
        if self.order != GRLEX {
            return Err(TensorError::UnknownOrder(self.order));
        }
        SymmetricTensor::new(
            self.n,
            self.d,
            self.coeffs.into_iter().map(Rational::from).collect(),
        )
    }
}

/// Σ aᵢ Lᵢᵈ for linear forms Lᵢ = sᵢ · Pᵢ, where Pᵢ is the canonical
/// representative of the point and sᵢ a nonzero scale (1 unless the
/// decomposition was built from forms as written).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDecomposition {
    points: PointSet,
    scales: Vec<Rational>,
    weights: Vec<Rational>,
}

impl WeightedDecomposition {
    /// Weights on the canonical representatives.
    pub fn new(points: PointSet, weights: Vec<Rational>) -> Result<Self, TensorError> {
        let scales = vec![Rational::one(); points.len()];
        Self::with_scales(points, scales, weights)
    }

    fn with_scales(
        points: PointSet,
        scales: Vec<Rational>,
        weights: Vec<Rational>,
    ) -> Result<Self, TensorError> {
        if points.len() != weights.len() {
            return Err(TensorError::WeightCount {
                points: points.len(),
                weights: weights.len(),
            });
        }
        if let Some(index) = weights.iter().position(Zero::is_zero) {
            return Err(TensorError::ZeroWeight { index });
        }
        Ok(Self {
            points,
            scales,
            weights,
        })
    }

    /// Weights on linear forms given by their coordinates as written; a form
    /// and its negative give opposite odd powers.
    pub fn from_linear_forms(
        n: usize,
        forms: &[Vec<BigInt>],
        weights: Vec<Rational>,
    ) -> Result<Self, TensorError> {
        let points = PointSet::from_integer_rows(n, forms)?;
        let scales = points
            .points()
            .iter()
            .zip(forms)
            .map(|(p, raw)| p.scale_of(raw).expect("a form is a multiple of its own point"))
            .collect();
        Self::with_scales(points, scales, weights)
    }

    pub fn unit_weights(points: PointSet) -> Self {
        let weights = vec![Rational::one(); points.len()];
        Self::new(points, weights).expect("unit weights are nonzero")
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// sᵢ with Lᵢ = sᵢ · Pᵢ.
    pub fn scales(&self) -> &[Rational] {
        &self.scales
    }

    /// aᵢ sᵢᵈ: the same tensor written on canonical representatives, which is
    /// what [`membership`] recovers.
    pub fn canonical_weights(&self, d: u32) -> Vec<Rational> {
        self.weights
            .iter()
            .zip(&self.scales)
            .map(|(a, s)| a * num_traits::pow(s.clone(), d as usize))
            .collect()
    }
}

/// Σ aᵢ Lᵢᵈ, with coordinate e equal to Σ aᵢ sᵢᵈ Pᵢᵉ.
pub fn synthesize(decomposition: &WeightedDecomposition, d: u32) -> SymmetricTensor {
    let n = decomposition.points.ambient_dim();
    let basis = MonomialBasis::new(n, d);
    let weights = decomposition.canonical_weights(d);
    let coeffs = basis
        .exponents()
        .iter()
        .map(|e| {
            decomposition
                .points
                .points()
                .iter()
                .zip(&weights)
                .fold(Rational::zero(), |acc, (p, a)| {
                    acc + a * Rational::from_integer(p.monomial(e))
                })
        })
        .collect();
    SymmetricTensor { n, d, coeffs }
}

fn check_ambient(t: &SymmetricTensor, a: &PointSet) -> Result<(), TensorError> {
    if t.n != a.ambient_dim() {
        return Err(TensorError::AmbientMismatch {
            tensor: t.n,
            points: a.ambient_dim(),
        });
    }
    Ok(())
}

/// Weights w with T = Σ wᵢ v_d(Pᵢ), if T lies in the span. The answer is
/// unique when v_d(A) is independent; otherwise free weights are zero.
pub fn membership(t: &SymmetricTensor, a: &PointSet) -> Result<Option<Vec<Rational>>, TensorError> {
    check_ambient(t, a)?;
    if a.is_empty() {
        return Ok(t.is_zero().then(Vec::new));
    }
    let columns = a.evaluation_matrix(t.d).transpose();
    Ok(solve(&columns, &t.coeffs).expect("row count equals coefficient count"))
}

/// A is a minimal decomposition of T: v_d(A) is independent and the unique
/// weights are all nonzero.
pub fn is_minimal(t: &SymmetricTensor, a: &PointSet) -> Result<bool, TensorError> {
    let weights = membership(t, a)?.ok_or(TensorError::NotInSpan)?;
    if a.is_empty() {
        return Ok(true);
    }
    let independent = rank(&a.evaluation_matrix(t.d)) == a.len();
    Ok(independent && weights.iter().all(|w| !w.is_zero()))
}

/// The catalecticant Cat_{s,d−s}(T): rows indexed by degree-s monomials,
/// columns by degree-(d−s) monomials, entry (α, β) the coordinate of
/// x^(α+β). For T = Lᵈ this is the outer product of the monomial vectors of
/// L in degrees s and d−s.
pub fn catalecticant(t: &SymmetricTensor, s: u32) -> Result<RationalMatrix, TensorError> {
    if s == 0 || s >= t.d {
        return Err(TensorError::CatalecticantDegree {
            s,
            max: t.d.saturating_sub(1),
        });
    }
    let full = t.basis();
    let rows = MonomialBasis::new(t.n, s);
    let cols = MonomialBasis::new(t.n, t.d - s);
    let mut entries = Vec::with_capacity(rows.len() * cols.len());
    for alpha in rows.exponents() {
        for beta in cols.exponents() {
            let sum: Vec<u32> = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
            let index = full.index_of(&sum).expect("sum of exponents has degree d");
            entries.push(t.coeffs[index].clone());
        }
    }
    Ok(RationalMatrix::new(rows.len(), cols.len(), entries).expect("shape"))
}

/// Rank of Cat_{s,d−s}(T), a lower bound for the Waring rank of T.
pub fn catalecticant_rank(t: &SymmetricTensor, s: u32) -> Result<usize, TensorError> {
    Ok(rank(&catalecticant(t, s)?))
}
