use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library.
///
/// [`Error::is_usage`] separates malformed input (bad syntax, bad shapes in
/// serialized data) from mathematical-domain refusals.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` (only {var_count} variables available)")]
    UnknownVariable { name: String, var_count: usize },
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("rank {rank} is unattainable once the forbidden columns are removed")]
    RankUnattainable { rank: usize },
    #[error("the given columns are linearly dependent")]
    DependentColumns,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system is underdetermined (rank {rank} < {unknowns} unknowns)")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("boundary maps do not compose to zero at term {0}")]
    NotAComplex(usize),
    #[error("complex is not exact at term {0}")]
    NotExact(usize),
    #[error("complex has a zero-dimensional edge term; trim it first")]
    ZeroEdgeTerm,
    #[error("every term of the complex is zero")]
    AllTermsZero,
    #[error("invalid basis choice at term {0}: the resulting square matrix is singular or misshapen")]
    InvalidChoice(usize),
    #[error("variable index {index} out of range for {var_count} variables")]
    VariableOutOfRange { index: usize, var_count: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("twist {m} is below the Macaulay bound {bound}")]
    BelowMacaulayBound { m: i64, bound: i64 },
    #[error("degree {0} is too low (need at least 2)")]
    DegreeTooLow(u32),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("interpolation inconsistency: {0}")]
    InterpolationInconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by malformed input rather than a mathematical refusal.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::UnknownVariable { .. } | Error::InvalidRational(_)
        )
    }
}
