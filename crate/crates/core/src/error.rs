use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KiteError {
    #[error("invalid angle: {0}")]
    InvalidAngle(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("mass formula denominator vanishes at (alpha={alpha_deg} deg, beta={beta_deg} deg)")]
    SingularDenominator { alpha_deg: f64, beta_deg: f64 },

    #[error("masses outside the admissible range: mu1={mu1}, mu2={mu2}")]
    InvalidMasses { mu1: f64, mu2: f64 },

    #[error("derivative denominator vanishes ({0})")]
    ZeroDenominator(f64),

    #[error("family {0} has no interior extremum")]
    NoExtremum(String),

    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations (last x = {last_x})")]
    ConvergenceFailure { iterations: usize, last_x: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("bodies {0} and {1} collide")]
    CollisionSingularity(usize, usize),

    #[error("body {0} sits at the barycenter with non-negligible acceleration")]
    DegenerateBody(usize),

    #[error("configuration has no masses attached")]
    MissingMasses,

    #[error("trace of {family} failed at {failed} of {total} grid points")]
    TraceFailure {
        family: String,
        failed: usize,
        total: usize,
    },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl KiteError {
    /// Short machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            KiteError::InvalidAngle(_) => "invalid-angle",
            KiteError::DegenerateGeometry(_) => "degenerate-geometry",
            KiteError::SingularDenominator { .. } => "singular-denominator",
            KiteError::InvalidMasses { .. } => "invalid-masses",
            KiteError::ZeroDenominator(_) => "zero-denominator",
            KiteError::NoExtremum(_) => "no-extremum",
            KiteError::OutOfDomain(_) => "out-of-domain",
            KiteError::NoBracket { .. } => "no-bracket",
            KiteError::ConvergenceFailure { .. } => "convergence-failure",
            KiteError::NoSolution(_) => "no-solution",
            KiteError::CollisionSingularity(..) => "collision-singularity",
            KiteError::DegenerateBody(_) => "degenerate-body",
            KiteError::MissingMasses => "missing-masses",
            KiteError::TraceFailure { .. } => "trace-failure",
            KiteError::VerificationFailed(_) => "verification-failed",
            KiteError::InvalidArguments(_) => "invalid-arguments",
            KiteError::Io(_) => "io-failure",
        }
    }

    /// Module the error originates from.
    pub fn module(&self) -> &'static str {
        match self {
            KiteError::InvalidAngle(_) | KiteError::DegenerateGeometry(_) => "angles",
            KiteError::SingularDenominator { .. } | KiteError::InvalidMasses { .. } => "masses",
            KiteError::ZeroDenominator(_)
            | KiteError::NoExtremum(_)
            | KiteError::OutOfDomain(_) => "analysis",
            KiteError::NoBracket { .. }
            | KiteError::ConvergenceFailure { .. }
            | KiteError::NoSolution(_)
            | KiteError::TraceFailure { .. } => "solver",
            KiteError::CollisionSingularity(..)
            | KiteError::DegenerateBody(_)
            | KiteError::MissingMasses => "oracle",
            KiteError::VerificationFailed(_)
            | KiteError::InvalidArguments(_)
            | KiteError::Io(_) => "cli",
        }
    }
}

impl From<std::io::Error> for KiteError {
    fn from(e: std::io::Error) -> Self {
        KiteError::Io(e.to_string())
    }
}

impl From<csv::Error> for KiteError {
    fn from(e: csv::Error) -> Self {
        KiteError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for KiteError {
    fn from(e: serde_json::Error) -> Self {
        KiteError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, KiteError>;
