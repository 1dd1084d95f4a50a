use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not rational: {0}")]
    NotRational(String),
    #[error("invalid Newton pairs: {0}")]
    InvalidNewtonPairs(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a rational homology sphere: {0}")]
    NotRationalHomologySphere(String),
    #[error("degenerate plumbing graph (det I = 0)")]
    DegenerateGraph,
    #[error("plumbing graph is not negative definite")]
    NotNegativeDefinite,
    #[error("malformed plumbing graph: {0}")]
    MalformedGraph(String),
    #[error("line {line}: {msg}")]
    GraphParse { line: usize, msg: String },
    #[error("plumbing graph carries no arrow")]
    ArrowMissing,
    #[error("torsion limit does not exist for character {0}")]
    LimitDoesNotExist(String),
    #[error("no Seifert normal form passes the checks for {0}")]
    NoConsistentSeifertForm(String),
    #[error("several Seifert normal forms pass the checks for {0}")]
    AmbiguousSeifertForm(String),
    #[error("identity violated at level {level}: {detail}")]
    IdentityViolated { level: usize, detail: String },
    #[error("conjecture violated: {0}")]
    ConjectureViolated(String),
    #[error("unsupported tower: {0}")]
    UnsupportedTower(String),
    #[error("surgery coefficient q must be nonzero")]
    ZeroSurgeryCoefficient,
    #[error("mode precondition violated: {0}")]
    ModePreconditionViolated(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("case precondition violated: {0}")]
    CasePreconditionViolated(String),
    #[error("no pole-free sample point found")]
    PoleAtSamplePoint,
    #[error("work bound exceeded: {work} > {bound}")]
    WorkBoundExceeded { work: u128, bound: u128 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// Coarse classification used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input (exit 1).
    Usage,
    /// Input violates a mathematical precondition (exit 2).
    Domain,
    /// A checked identity failed: always a bug (exit 3).
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            GraphParse { .. } | InvalidNewtonPairs(_) | InvalidInput(_) | MalformedGraph(_) => ErrorKind::Usage,
            NotRational(_) | IdentityViolated { .. } | ConjectureViolated(_) | InternalInconsistency(_)
            | AmbiguousSeifertForm(_) => ErrorKind::Internal,
            _ => ErrorKind::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
