//! Exact-arithmetic identifiability certificates for Waring decompositions.
//!
//! A decomposition T = Σ aᵢ Lᵢᵈ is handled through its point set
//! A = {P₁, …, P_r} ⊂ Pⁿ. From A alone the crate computes Hilbert functions,
//! higher Kruskal ranks and Cayley-Bacharach properties, and from those
//! decides whether T is certainly identifiable:
//!
//! * the symmetric Kruskal criterion, in any number of variables;
//! * an extension covering ternary septics of rank 11;
//! * an extension covering ternary forms of odd degree 7 + 2q whose
//!   3q + 10 points lie on a plane cubic.
//!
//! All arithmetic is exact over ℚ; ranks over ℚ of rational matrices agree
//! with ranks over ℂ.

pub mod cayley_bacharach;
pub mod certify;
pub mod hilbert;
pub mod json;
pub mod kruskal;
pub mod linalg;
pub mod projective;
pub mod tensor;

pub use cayley_bacharach::{cb_check, cb_failure_by_definition, cb_max_degree, gkr_audit, CbError, CbReport};
pub use certify::{
    certify, certify_weighted, cubic_containment, Assumption, AssumptionStatus, Certificate, CertifyError,
    CubicContainment, Evidence, Rule, Verdict,
};
pub use hilbert::{
    grassmann_intersection_dim, hilbert_function, hilbert_profile, span_dim, span_intersection_dim_direct,
    HilbertError, HilbertProfile,
};
pub use kruskal::{
    kruskal_criterion, kruskal_rank, kruskal_rank_by_circuits, KruskalError, KruskalReport, PartitionCheck,
};
pub use linalg::{kernel_basis, rank, rank_by_minors, solve, LinalgError, Rational, RationalMatrix};
pub use projective::{MonomialBasis, PointSet, PointSetDocument, ProjectiveError, ProjectivePoint};
pub use tensor::{
    catalecticant_rank, is_minimal, membership, synthesize, SymmetricTensor, TensorDocument, TensorError,
    WeightedDecomposition,
};
