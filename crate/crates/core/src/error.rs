use thiserror::Error;

/// Errors raised by the exact engines, the numeric special functions and the
/// Monte Carlo sampler.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(i64),
    #[error("polynomial division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("coefficient {requested:?} lies beyond truncation orders {orders:?}")]
    TruncationExceeded { requested: Vec<usize>, orders: Vec<usize> },
    #[error("series have {left} and {right} variables")]
    VariableMismatch { left: usize, right: usize },
    #[error("series exponential needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("matrix entries are not of one kind: {0}")]
    MixedEntryKinds(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("hypergeometric series does not terminate")]
    NonTerminating,
    #[error("Pochhammer pole: lower parameter vanishes at term {index}")]
    PochhammerPole { index: usize },
    #[error("hypergeometric series diverges at z = 1 (parameter excess {excess} <= 0)")]
    ConvergenceConditionViolated { excess: String },
    #[error("hypergeometric series did not converge within {terms} terms")]
    SlowConvergence { terms: usize },
    #[error("q = |x|^2 = 1 is excluded from the general-x formula")]
    QEqualsOne,
    #[error("vanishing pivot solving for c_{j} at N = {n}, k = {k}")]
    DegeneratePivot { j: usize, n: u64, k: u64 },
    #[error("{p} divides a coefficient denominator more than once: {coefficient}")]
    ResidualPDenominator { p: u64, coefficient: String },
    #[error("4k-1 = {0} is not prime")]
    NotPrime(u64),
    #[error("root finder did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("zeros of the derivative could not be located: {0}")]
    RootFindingFailure(String),
    #[error("matrix size {n} exceeds the supported maximum {max}")]
    SizeTooLarge { n: usize, max: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    /// Errors that signal a broken internal contract rather than bad input.
    pub fn is_contract_violation(&self) -> bool {
        matches!(
            self,
            Error::NonzeroRemainder
                | Error::ResidualPDenominator { .. }
                | Error::DegeneratePivot { .. }
                | Error::NonConvergence { .. }
                | Error::RootFindingFailure(_)
                | Error::TruncationExceeded { .. }
                | Error::MixedEntryKinds(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
