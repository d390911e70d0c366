use thiserror::Error;

/// Errors raised by the exact and numeric constructions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CftError {
    #[error("conductor must be at least 1")]
    ZeroConductor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{a} is not a unit modulo {m}")]
    NotAUnit { a: i64, m: u64 },
    #[error("degenerate extension: conductor {0} has a trivial Galois group")]
    DegenerateExtension(u64),
    #[error("conductor mismatch: {0} does not divide {1}")]
    ConductorMismatch(u64, u64),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("element is not fixed by the lower subgroup")]
    NotInField,
    #[error("element does not generate the extension")]
    NotAGenerator,
    #[error("element is not an algebraic integer")]
    NotAlgebraicInteger,
    #[error("generator search exhausted for subgroup {0:?}")]
    GeneratorSearchExhausted(Vec<u64>),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("empty input")]
    EmptyInput,
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("precision unreachable: {0}")]
    PrecisionUnreachable(String),
    #[error("argument lies on the period lattice")]
    LatticePoint,
    #[error("indices coincide up to sign modulo Z^2")]
    IndexCollision,
    #[error("invalid fractional index: {0}")]
    InvalidIndex(String),
    #[error("denominator vanishes at tau = {0}")]
    DenominatorVanishes(String),
    #[error("unsupported discriminant {0}: {1}")]
    UnsupportedDiscriminant(i64, &'static str),
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: u64, found: u64 },
    #[error(
        "recognition failed: residual 1e{residual_log10:.1} exceeds 1e-{tol_digits}; \
         raise the working precision and retry"
    )]
    RecognitionFailed { residual_log10: f64, tol_digits: u32 },
    #[error("conjugates separated by only 1e{min_sep_log10:.1} (need 1e-{tol_digits}); raise precision")]
    SeparationTooTight { min_sep_log10: f64, tol_digits: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, CftError>;
