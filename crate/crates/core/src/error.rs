use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not orthogonal (defect {defect:.3e})")]
    NotOrthogonal { defect: f64 },

    #[error("matrix is not skew-symmetric (defect {defect:.3e})")]
    NotSkew { defect: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("operators {i} and {j} do not commute (commutator norm {norm:.3e})")]
    NotCommuting { i: usize, j: usize, norm: f64 },

    #[error("degenerate eigenvalue {value:.3e} within sign tolerance {sign_tol:.1e}")]
    DegenerateEigenvalue { value: f64, sign_tol: f64 },

    #[error("subspace not invariant under holonomy generator {generator} (violation {violation:.3e})")]
    NotInvariant { generator: String, violation: f64 },

    #[error("invalid closure datum `{closure}`: {reason}")]
    InvalidClosure { closure: String, reason: String },

    #[error("operator L property violated for pair ({j}, {k}): {reason}")]
    LProperty { j: usize, k: usize, reason: String },

    #[error("closure `{closure}`: {source}")]
    InClosure {
        closure: String,
        #[source]
        source: Box<Error>,
    },

    #[error("codimension {0} is even; the chirality-product perturbation requires odd codimension")]
    EvenCodimension(usize),

    #[error("route mismatch: {0}")]
    RouteMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-simple zero of the perturbation at t = {t:.6} (smallest singular value of Z'(t) is {sigma:.3e})")]
    NonSimpleZero { t: f64, sigma: f64 },

    #[error("discretization not converged at s = {s}: doubling the mode count moved eigenvalue {j} by {delta:.3e}; increase the number of modes above {modes}")]
    NotConverged { s: f64, j: usize, delta: f64, modes: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn in_closure(self, closure: &str) -> Self {
        Error::InClosure { closure: closure.to_string(), source: Box::new(self) }
    }

    /// True for errors caused by malformed input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Parse { .. } | Error::Schema { .. } | Error::Io { .. } | Error::Shape(_) => true,
            Error::InClosure { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
