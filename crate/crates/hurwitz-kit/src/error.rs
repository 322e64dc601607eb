//! Error type shared across the crate.

use std::collections::BTreeMap;
use std::fmt;

use crate::certify::Certificate;

/// Violation of one of the Metzler lift conditions.
///
/// Indices are 1-based, matching the usual h_i / k_j parameter naming.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// h_i < 0 at the given position.
    NegativeH(usize),
    /// k_j < 0 at the given position.
    NegativeK(usize),
    /// The corner value is not strictly negative.
    NonNegativeCorner,
    /// Off-diagonal entry (row, col) of the lift would be negative.
    OffDiagonal { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeH(i) => write!(f, "h_{i} is negative"),
            Violation::NegativeK(j) => write!(f, "k_{j} is negative"),
            Violation::NonNegativeCorner => write!(f, "corner value is not strictly negative"),
            Violation::OffDiagonal { row, col } => {
                write!(f, "lifted off-diagonal entry ({row}, {col}) would be negative")
            }
        }
    }
}

/// Details carried by [`Error::OracleDisagreement`].
#[derive(Clone, Debug)]
pub struct Disagreement {
    /// Certificate produced by the recursive reduction.
    pub certificate: Certificate,
    /// Verdict of every oracle that ran.
    pub oracles: BTreeMap<String, bool>,
}

/// Errors produced by the toolkit.
#[derive(Clone, Debug)]
pub enum Error {
    /// The operation needs a larger matrix (e.g. partitioning a 1x1).
    DimensionTooSmall { n: usize },
    /// Dimension outside the supported range 1..=64.
    DimensionOutOfRange { n: usize },
    /// Two values that must agree in length do not.
    DimensionMismatch { expected: usize, got: usize },
    /// Exact and float values were mixed, or a tolerance does not fit the mode.
    ModeMismatch,
    /// A float value is NaN or infinite where a finite value is required.
    NonFinite,
    /// Division by an exact zero.
    DivisionByZero,
    /// The (n, n) pivot of a reduction stage is too close to zero to divide by.
    SingularPivot { stage: usize },
    /// Gaussian elimination found no usable pivot in the given column.
    SingularMatrix { pivot_col: usize },
    /// Matrix is not symmetric (within tolerance).
    NotSymmetric,
    /// Matrix is not Metzler (within tolerance).
    NotMetzler,
    /// A float-mode pivot is within eps of zero; the verdict is undecidable
    /// at this tolerance.
    TolDisagreement { stage: usize },
    /// An oracle hit a marginal case it refuses to classify.
    Inconclusive { detail: String },
    /// The recursive certifier and a classical oracle disagree.
    OracleDisagreement(Box<Disagreement>),
    /// Input matrix must be Hurwitz but is not.
    NotHurwitz,
    /// Diagonal corner entry is nonnegative, so the log coordinate is undefined.
    NonNegativeDiagonal,
    /// The base of a lift must be Hurwitz but is not.
    BaseNotHurwitz,
    /// A direct corner parameter is not strictly negative.
    NonNegativeCorner,
    /// The Metzler lift conditions do not hold.
    ConditionViolated { violations: Vec<Violation> },
    /// No draw of a ball family was Hurwitz.
    EmptyFamily,
    /// Simulation step size must be positive.
    NonPositiveStep,
    /// A parameter is outside its documented domain.
    InvalidParameter { detail: String },
    /// Malformed input (JSON or fraction syntax).
    Parse { detail: String },
    /// A postcondition the underlying theory guarantees was violated.
    Internal { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionTooSmall { n } => write!(f, "matrix dimension {n} is too small"),
            Error::DimensionOutOfRange { n } => {
                write!(f, "matrix dimension {n} is outside the supported range 1..=64")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::ModeMismatch => write!(f, "exact and float values cannot be mixed"),
            Error::NonFinite => write!(f, "non-finite float value"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::SingularPivot { stage } => {
                write!(f, "reduction pivot at stage {stage} is singular")
            }
            Error::SingularMatrix { pivot_col } => {
                write!(f, "singular matrix at pivot column {pivot_col}")
            }
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::NotMetzler => write!(f, "matrix is not Metzler"),
            Error::TolDisagreement { stage } => write!(
                f,
                "pivot at stage {stage} is within eps of zero; verdict undecidable at this tolerance"
            ),
            Error::Inconclusive { detail } => write!(f, "inconclusive: {detail}"),
            Error::OracleDisagreement(d) => {
                write!(f, "oracle disagreement: certifier says {:?}, oracles say ", d.certificate.verdict)?;
                let mut first = true;
                for (name, verdict) in &d.oracles {
                    if !first {
                        write!(f, ", ")?;
                    }
                    write!(f, "{name}={verdict}")?;
                    first = false;
                }
                Ok(())
            }
            Error::NotHurwitz => write!(f, "matrix is not Hurwitz"),
            Error::NonNegativeDiagonal => {
                write!(f, "corner diagonal entry is nonnegative; log coordinate undefined")
            }
            Error::BaseNotHurwitz => write!(f, "lift base is not Hurwitz"),
            Error::NonNegativeCorner => write!(f, "corner parameter must be strictly negative"),
            Error::ConditionViolated { violations } => {
                write!(f, "lift conditions violated:")?;
                for v in violations {
                    write!(f, " [{v}]")?;
                }
                Ok(())
            }
            Error::EmptyFamily => write!(f, "no sampled matrix was Hurwitz"),
            Error::NonPositiveStep => write!(f, "simulation step size must be positive"),
            Error::InvalidParameter { detail } => write!(f, "invalid parameter: {detail}"),
            Error::Parse { detail } => write!(f, "parse error: {detail}"),
            Error::Internal { detail } => write!(f, "internal inconsistency: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
