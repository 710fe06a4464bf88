use thiserror::Error;

/// Every fallible operation in the crate returns this error.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("argument {0} is a pole (nonpositive integer)")]
    PoleAtNonpositiveInteger(String),
    #[error("parameter pole: {0}")]
    ParameterPole(String),
    #[error("no convergent route for {op}: {detail}")]
    NoConvergentRoute { op: &'static str, detail: String },
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("exponent {0} is in the distributional regime (Re a <= -1)")]
    DistributionalRegime(String),
    #[error("size guard exceeded: {what} > {limit}")]
    SizeGuard { what: String, limit: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid coordinates: {0}")]
    InvalidCoords(String),
    #[error("parameters are not admissible: {0}")]
    InadmissibleParams(String),
    #[error("point outside the polydisc of convergence: {0}")]
    OutsidePolydisc(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("quadrature failed to reach tolerance: {0}")]
    QuadratureFailure(String),
    #[error("integration contour passes through a pole: {0}")]
    PoleOnContour(String),
    #[error("degenerate difference quotient: {0}")]
    DegenerateDifference(String),
    #[error("parameters outside the supported regime: {0}")]
    RegimeError(String),
    #[error("fit failed: {0}")]
    FitFailure(String),
    #[error("result has a non-negligible imaginary part: {0}")]
    ComplexResidue(String),
}

pub type Result<T> = std::result::Result<T, Error>;
