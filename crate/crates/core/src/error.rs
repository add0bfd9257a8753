use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure mode of the library.
///
/// Variants fall in three groups: malformed input (parse and dimension
/// errors), violated preconditions (degenerate or special configurations),
/// and mathematical outcomes that are reported rather than guessed (a missing
/// certificate, irrational excess points, partial 2-torsion).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} is out of range (must be in 2..2^63)")]
    ModulusOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration is degenerate (rank {rank}, need {needed})")]
    Degenerate { rank: usize, needed: usize },
    #[error("too few points: {found} points in P^{dim} (need at least {needed})")]
    TooFewPoints { found: usize, dim: usize, needed: usize },
    #[error("Gale transform has a zero row at index {0}")]
    ZeroRowInDual(usize),
    #[error("configurations are not Gale dual (diagonal system kernel has dimension {kernel_dim})")]
    NotGaleDual { kernel_dim: usize },
    #[error("diagonal kernel of dimension {kernel_dim} is nonzero but no all-nonzero vector found within budget")]
    CertificateSearchExhausted { kernel_dim: usize },
    #[error("no projective transport: every solution drops a point")]
    NoTransport,
    #[error("transport solution space has dimension {0}, expected 1")]
    TransportNotUnique(usize),

    #[error("linear system is not unique (kernel dimension {0})")]
    NotUnique(usize),
    #[error("Gale points {0} and {1} coincide")]
    CoincidentGalePoints(usize, usize),
    #[error("cubics through the points form a space of dimension {0}, expected {1}")]
    PencilDimWrong(usize, usize),
    #[error("intersection is not reduced at a remaining point")]
    NonReducedIntersection,
    #[error("remaining intersection points are not rational over the field")]
    NonRationalExcess,
    #[error("no generic coordinate system found within {0} coordinate changes")]
    DegenerateAfterRetries(usize),
    #[error("curves share a common component")]
    CommonComponent,
    #[error("field too small: resampling budget exhausted")]
    FieldTooSmall,
    #[error("retry budget of {0} exhausted")]
    RetryBudgetExhausted(usize),
    #[error("characteristic {0} is not supported here")]
    UnsupportedCharacteristic(u64),
    #[error("field too large for enumeration (p = {0})")]
    FieldTooLarge(u64),

    #[error("dual degree {0} is negative")]
    NegativeDualDegree(i64),
    #[error("linear series is not complementary to the restriction kernel")]
    WNotComplementary,
    #[error("Gale certificate not found: {0}")]
    CertificateNotFound(String),
    #[error("linear system has dimension {found}, expected {expected}")]
    SystemDimWrong { expected: usize, found: usize },

    #[error("operation requires a finite field")]
    FieldNotFinite,
    #[error("line lies on the curve")]
    LineOnCurve,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("curve is singular or its smoothness could not be certified")]
    SingularCurve,
    #[error("class is not divisible by two over the field")]
    NoSolution,
    #[error("cubic through the points is not unique (dimension {0})")]
    CubicNotUnique(usize),
    #[error("only {0} rational square roots (need 4 for the full count)")]
    PartialTorsion(usize),
    #[error("at least {needed} samples required, got {found}")]
    InsufficientSamples { needed: usize, found: usize },
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
