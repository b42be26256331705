use thiserror::Error;

/// Error variants shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its stated precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The log-moment generating function was evaluated outside its finite domain.
    #[error("log-MGF domain error: {0}")]
    Domain(String),

    /// A disorder field is shorter than the requested system size.
    #[error("disorder field of length {have} is shorter than requested size {need}")]
    FieldTooShort { need: usize, have: usize },

    /// Conditioning on an event of probability zero.
    #[error("conditioning on an unreachable event: P(tau_{q} = {n}) = 0")]
    UnreachableConditioning { q: usize, n: usize },

    /// A dynamic-programming table would exceed the configured memory budget.
    #[error("DP table of {required} entries exceeds the budget of {budget}")]
    BudgetExceeded { required: usize, budget: usize },

    /// Too few data points for a fit.
    #[error("insufficient data: need at least {need} points, got {have}")]
    InsufficientData { need: usize, have: usize },

    /// Certificate preconditions violated; names the failed inequality.
    #[error("infeasible parameters: violated `{inequality}`")]
    Infeasible { inequality: String },

    /// Bisection endpoints do not straddle the decision criterion.
    #[error("bracket endpoints do not straddle the criterion: F(lo)={f_lo}, F(hi)={f_hi}")]
    Bracket { f_lo: f64, f_hi: f64 },

    /// An iterative search hit its cap without converging.
    #[error("search did not converge: {0}")]
    SearchFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
