use thiserror::Error;

/// Errors raised by operators, evolution systems, diagnostics and integrators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("symbol of `{op}` is not finite at mode {mode}")]
    SymbolDomain { op: String, mode: usize },
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("constraint violated: a+b+c+d = {sum}, expected 1/3 - tau = {expected}")]
    Constraint { sum: f64, expected: f64 },
    #[error("linearly ill-posed sign pattern: (a,b,c,d) = ({a}, {b}, {c}, {d})")]
    IllPosed { a: f64, b: f64, c: f64, d: f64 },
    #[error("no registry case matches (a,b,c,d) = ({a}, {b}, {c}, {d})")]
    NoRegistryMatch { a: f64, b: f64, c: f64, d: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("cavitation: min(1 + eps*eta) = {min}")]
    Cavitation { min: f64 },
    #[error("resolution {kmax2} exceeds the well-posed band 3/eps = {limit}")]
    IllPosedResolution { kmax2: f64, limit: f64 },
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("stability budget exceeded: dt*max|lambda| = {0}")]
    StabilityBudget(f64),
    #[error("non-finite value at t = {0}")]
    NonFinite(f64),
    #[error("missing coefficients: {0}")]
    MissingCoefficients(String),
    #[error("derivative bundle error: {0}")]
    Bundle(String),
    #[error("fit failed: {0}")]
    FitFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
