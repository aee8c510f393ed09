use thiserror::Error;

/// Errors raised by the exact and numeric routines.
///
/// Messages are stable: the command-line reports echo them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined valuation")]
    UndefinedValuation,
    #[error("unsupported splitting field")]
    UnsupportedSplittingField,
    #[error("singular")]
    Singular,
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular germ")]
    SingularGerm,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("ordering violated")]
    OrderingViolated,
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("not a bundle pair: {0}")]
    NotABundlePair(String),
    #[error("explicit backend required")]
    ExplicitBackendRequired,
    #[error("need nonzero type")]
    NeedNonzeroType,
    #[error("divisor not principal")]
    DivisorNotPrincipal,
    #[error("not rho-invariant at point")]
    NotInvariantAtPoint,
    #[error("insufficient pole budget")]
    InsufficientPoleBudget,
    #[error("theorem hypothesis violated (flat-case real rank {flat_real_rank})")]
    TheoremHypothesisViolated { flat_real_rank: i64 },
    #[error("genericity required")]
    GenericityRequired,
    #[error("simple pair required")]
    SimpleRequired,
    #[error("Riemann-Roch regime not covered")]
    RiemannRochRegime,
    #[error("branch parity violated")]
    BranchParity,
    #[error("divisor of f incorrect")]
    PolarDivisorMismatch,
    #[error("non-reduced spectral curve")]
    NonReducedSpectralCurve,
    #[error("Prym dimension undefined here")]
    PrymUndefined,
    #[error("no periodic solution")]
    NoPeriodicSolution,
    #[error("near-singularity evaluation refused")]
    NearSingularity,
    #[error("sample at a singular time refused")]
    SingularTime,
    #[error("refused: {0}")]
    Refused(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
