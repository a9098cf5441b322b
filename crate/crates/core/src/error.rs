use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its allowed domain (negative hopping, zero chain, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The impurity levels or couplings leave the perturbative regime.
    #[error("regime violation: {0}")]
    RegimeViolation(String),

    /// `|a| >= 1`: the impurity level touches the band edge and `1/sqrt(1 - a^2)` diverges.
    #[error("band edge reached: a = {a} (|a| must be < 1)")]
    BandEdge { a: f64 },

    #[error(
        "separation R = {separation} is not allowed on a chain with N = {half_length} ({reason})"
    )]
    Dimension {
        separation: usize,
        half_length: usize,
        reason: &'static str,
    },

    /// The symmetric eigensolver did not deflate an eigenvalue within its iteration budget.
    #[error(
        "eigensolver failed to converge: eigenvalue {index} after {iterations} sweeps, \
         relative off-diagonal {residual:e} (tolerance {tolerance:e})"
    )]
    Convergence {
        index: usize,
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    /// An adaptive quadrature exhausted its point budget.
    #[error("quadrature did not converge: {points} points, last relative change {last_change:e}")]
    NonConvergence { points: usize, last_change: f64 },

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl Error {
    /// Whether the failure is numerical rather than a bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::NonConvergence { .. } | Error::Numerical(_)
        )
    }
}
