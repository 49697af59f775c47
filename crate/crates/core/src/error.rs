use thiserror::Error;

/// Every failure mode the engine can report. Verdict-like outcomes
/// (perfect/not-perfect, pass/fail/unresolved) are not errors; these are
/// genuine contract violations or impossibilities.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: expected {expected} rows, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("arrow ideal not nilpotent within bound {bound}")]
    NotNilpotent { bound: usize },
    #[error("inconsistent relations: {0}")]
    InconsistentRelations(String),
    #[error("algebras live over different fields")]
    FieldMismatch,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("algebra is not elementary: {0}")]
    NotElementary(String),
    #[error("radical computation needs p > {needed}, field has p = {prime}")]
    RadicalNeedsLargerPrime { needed: usize, prime: u64 },

    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("bimodule tags do not match: {0}")]
    TagMismatch(String),

    #[error("not a chain complex: d∘d ≠ 0 at degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("not a chain map: square at degree {degree} does not commute")]
    NotAChainMap { degree: i64 },
    #[error("not a module map: fails to intertwine the action")]
    NotAModuleMap,
    #[error("invalid module action: {0}")]
    InvalidAction(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("construction exhausted after trying indices up to {tried}")]
    ConstructionExhausted { tried: usize },
    #[error("injective dimensions over the two sides disagree ({left} vs {right}); this indicates a bug")]
    ZaksViolated { left: usize, right: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation error at line {line}: {msg}")]
    Validation { line: usize, msg: String },
    #[error("unknown task: {0}")]
    UnknownTask(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
