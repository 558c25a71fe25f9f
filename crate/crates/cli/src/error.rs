use serde::Serialize;
use thiserror::Error;
use waring_core::{CbError, CertifyError, HilbertError, KruskalError, ProjectiveError, TensorError};

/// Failures reported to the caller, each with a stable machine-readable code
/// and its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    MalformedJson { path: String, message: String },
    #[error("{0}")]
    DuplicatePoint(String),
    #[error("{0}")]
    ZeroVector(String),
    #[error("{0}")]
    ZeroWeight(String),
    #[error("{0}")]
    DimensionMismatch(String),
    #[error("{0}")]
    NotMinimal(String),
    #[error("{0}")]
    InvariantViolation(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "USAGE",
            CliError::Io { .. } => "IO_ERROR",
            CliError::MalformedJson { .. } => "MALFORMED_JSON",
            CliError::DuplicatePoint(_) => "DUPLICATE_POINT",
            CliError::ZeroVector(_) => "ZERO_VECTOR",
            CliError::ZeroWeight(_) => "ZERO_WEIGHT",
            CliError::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            CliError::NotMinimal(_) => "NOT_MINIMAL",
            CliError::InvariantViolation(_) => "INVARIANT_VIOLATION",
            CliError::Internal(_) => "INTERNAL",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::MalformedJson { .. } => 4,
            CliError::DuplicatePoint(_) => 5,
            CliError::ZeroVector(_) => 6,
            CliError::ZeroWeight(_) => 7,
            CliError::DimensionMismatch(_) => 8,
            CliError::NotMinimal(_) => 9,
            CliError::InvariantViolation(_) => 10,
            CliError::Internal(_) => 70,
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport {
            error: ErrorBody {
                code: self.code(),
                message: self.to_string(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
}

impl From<ProjectiveError> for CliError {
    fn from(e: ProjectiveError) -> Self {
        let message = e.to_string();
        match e {
            ProjectiveError::ZeroVector => CliError::ZeroVector(message),
            ProjectiveError::DuplicatePoint { .. } => CliError::DuplicatePoint(message),
            ProjectiveError::CoordinateCount { .. } => CliError::DimensionMismatch(message),
            ProjectiveError::IndexOutOfRange { .. } => CliError::Internal(message),
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        let message = e.to_string();
        match e {
            TensorError::ZeroWeight { .. } => CliError::ZeroWeight(message),
            TensorError::WeightCount { .. }
            | TensorError::CoefficientCount { .. }
            | TensorError::AmbientMismatch { .. } => CliError::DimensionMismatch(message),
            TensorError::UnknownOrder(_) | TensorError::CatalecticantDegree { .. } => {
                CliError::Usage(message)
            }
            TensorError::NotInSpan => CliError::Internal(message),
            TensorError::Points(inner) => inner.into(),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        let message = e.to_string();
        match e {
            CertifyError::EmptySet | CertifyError::ZeroDegree => CliError::Usage(message),
            CertifyError::WrongAmbientDim { .. } | CertifyError::WeightCount { .. } => {
                CliError::DimensionMismatch(message)
            }
            CertifyError::ZeroWeight { .. } => CliError::ZeroWeight(message),
            CertifyError::NotMinimal { .. } => CliError::NotMinimal(message),
            CertifyError::Internal(_) => CliError::Internal(message),
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        let message = e.to_string();
        match e {
            HilbertError::EmptySet => CliError::Usage(message),
            HilbertError::AmbientMismatch { .. } => CliError::DimensionMismatch(message),
            HilbertError::NotDisjoint { .. } => CliError::DuplicatePoint(message),
        }
    }
}

impl From<KruskalError> for CliError {
    fn from(e: KruskalError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CbError> for CliError {
    fn from(e: CbError) -> Self {
        let message = e.to_string();
        match e {
            CbError::NotCayleyBacharach { .. } => CliError::Internal(message),
            CbError::EmptySet | CbError::TooFewPoints { .. } => CliError::Usage(message),
        }
    }
}
