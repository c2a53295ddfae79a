use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Polynomial division left a nonzero remainder.
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("degree {n}: located {found} interior roots, expected {expected}")]
    RootCountMismatch { n: usize, expected: usize, found: usize },

    #[error("Newton iteration for the order-{order} Gauss-Legendre rule did not converge")]
    ConvergenceFailure { order: usize },

    #[error("quadrature did not reach tolerance (last difference {est_error:e})")]
    NoConvergence { value: f64, est_error: f64 },

    #[error("function outside the admissible span: {0}")]
    InadmissibleFunction(String),

    #[error("singular linear system")]
    SingularSystem,

    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
