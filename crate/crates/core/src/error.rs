use thiserror::Error;

/// Every failure mode an operation in this crate can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("compositum degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("height computation unsupported for this point: {0}")]
    UnsupportedPoint(String),
    #[error("precision exhausted at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("enumeration of {count} items exceeds the budget {budget}")]
    BudgetExceeded { count: f64, budget: u64 },
    #[error("zero polynomial has no norm or degree")]
    ZeroPolynomial,
    #[error("interpolation nodes {0} and {1} are not separated")]
    NodesNotSeparated(usize, usize),
    #[error("ambiguous samples {ambiguous} of {total} at the precision ceiling")]
    AmbiguityOverflow { ambiguous: u64, total: u64 },
    #[error("sublevel set is empty at the requested threshold")]
    SublevelEmpty,
    #[error("could not place {needed} points with separation {gap:e}; placed {placed}")]
    SeparationFailed { needed: usize, placed: usize, gap: f64 },
    #[error("replay certificate violated: {0}")]
    CertificateViolated(String),
    #[error("residue classes still undecided at resolution p^{cap}")]
    ResolutionCapExceeded { cap: u32 },
    #[error("linearly dependent basis")]
    DependentBasis,
    #[error("value cannot be separated from zero at the precision ceiling")]
    PossiblyZero,
    #[error("no nonzero kernel vector: constraints exhaust the space")]
    NoKernel,
    #[error("point is not rational: {0}")]
    NonRationalPoint(String),
    #[error("sample count must be positive")]
    EmptySample,
    #[error("radius {r} exceeds the validity radius {validity}")]
    RadiusExceeded { r: f64, validity: f64 },
    #[error("policy violation: {0}")]
    PolicyViolation(String),
    #[error("quadrature did not meet tolerance with {points} points")]
    QuadratureStall { points: usize },
    #[error("degree budget infeasible: need degree {needed}, allowed {allowed:.3}; minimal feasible T = {min_t:.6}")]
    DegreeBudgetInfeasible { needed: u32, allowed: f64, min_t: f64 },
    #[error("function vanishes identically at the center")]
    ZeroAtCenter,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
