use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A full matrix row was applied to an infinite-support sequence with no
    /// closed-form summation.
    #[error("row {0} has no computable sum against the given sequence")]
    NonComputableRow(u64),

    /// Triangle inversion hit a zero diagonal entry.
    #[error("singular diagonal at index {0}")]
    SingularDiagonal(u64),

    /// A tail sum was requested on a row with infinite support.
    #[error("row {0} has infinite support")]
    InfiniteRowSupport(u64),

    /// Norm series of an infinite-support family has no closed form here.
    #[error("norm series is not summable in closed form: {0}")]
    NotSummable(String),

    /// The space/decoration pair carries no norm in this catalogue.
    #[error("space {0} is not normable here: {1}")]
    NotNormable(String, String),

    /// A matrix row fails the beta-dual precondition of a reduction.
    #[error("row {0} is not in the required beta-dual")]
    RowNotInDual(u64),

    /// Unknown verification suite name.
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    /// Literal grammar violation.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
