use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("target chart cannot represent the point: {0}")]
    ChartOverflow(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("argument outside the domain of the function: {0}")]
    DomainError(String),
    #[error("pole of the gamma function at {0}")]
    PoleError(String),
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },
    #[error("degree {0} is within the resonance guard of an integer")]
    ResonantDegree(String),
    #[error("plane wave is singular at this point: {0}")]
    SingularPoint(String),
    #[error("branch tracking needs a finer step: {0}")]
    StepTooLarge(String),
    #[error("integrand is singular on the contour near {0}")]
    SingularOnPath(String),
    #[error("quadrature did not reach tolerance at depth {depth} (error estimate {estimate:e})")]
    QuadratureNoConvergence { depth: usize, estimate: f64 },
    #[error("contour orientation could not be resolved: {0}")]
    OrientationUnresolved(String),
    #[error("observation point coincides with the source")]
    SourceCoincidence,
    #[error("point lies outside the requested domain: {0}")]
    DomainViolation(String),
    #[error("no sliding-contour domain is valid for this point: {0}")]
    NoValidDomain(String),
    #[error("vertical contour tail did not converge: {0}")]
    TailNotConverged(String),
    #[error("finite-difference stencil too close to a singular set: {0}")]
    StencilTooClose(String),
    #[error("affine chart invalid at this point: {0}")]
    ChartInvalid(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ChartOverflow(_) => "ChartOverflow",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::DomainError(_) => "DomainError",
            Error::PoleError(_) => "PoleError",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::ResonantDegree(_) => "ResonantDegree",
            Error::SingularPoint(_) => "SingularPoint",
            Error::StepTooLarge(_) => "StepTooLarge",
            Error::SingularOnPath(_) => "SingularOnPath",
            Error::QuadratureNoConvergence { .. } => "NoConvergence",
            Error::OrientationUnresolved(_) => "OrientationUnresolved",
            Error::SourceCoincidence => "SourceCoincidence",
            Error::DomainViolation(_) => "DomainViolation",
            Error::NoValidDomain(_) => "NoValidDomain",
            Error::TailNotConverged(_) => "TailNotConverged",
            Error::StencilTooClose(_) => "StencilTooClose",
            Error::ChartInvalid(_) => "ChartInvalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
