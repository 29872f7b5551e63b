use thiserror::Error;

/// Everything that can go wrong while building or splitting an algebra.
///
/// The variants fall into three families that the command line front end maps
/// onto distinct exit codes: malformed input, an inconclusive search (budget,
/// precision), and a certified negative answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("algebra has no two-sided identity")]
    NoIdentity,

    #[error("algebra dimension {0} over the base field is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("invalid number field: {0}")]
    InvalidField(String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("integer factoring budget exceeded; unfactored cofactor {0}")]
    FactoringBudget(String),

    #[error("no splitting element found within the retry budget at place {0}")]
    SplittingElement(usize),

    #[error("ill-conditioned numerical data: {0}")]
    IllConditioned(String),

    #[error("precision ceiling of {0} bits reached without certificate")]
    PrecisionCeiling(u32),

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    /// A certified proof that the algebra is not a full matrix algebra.
    #[error("algebra is not split: {0}")]
    NonSplit(String),

    /// The input violates the promise that it is a full matrix algebra.
    #[error("structural failure: {0}")]
    Structural(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// True for outcomes that mean "gave up", as opposed to "no".
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::BudgetExhausted(_)
                | Error::SplittingElement(_)
                | Error::IllConditioned(_)
                | Error::PrecisionCeiling(_)
                | Error::FactoringBudget(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
