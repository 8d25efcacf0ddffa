use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{function}: argument outside the supported domain ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("integrand is not finite at x = {abscissa:e}")]
    NonFinite { abscissa: f64 },

    #[error("quadrature did not converge: value {value:e}, error estimate {error_estimate:e}")]
    NoConvergence { value: f64, error_estimate: f64 },

    #[error("{function}: series did not converge after {iterations} terms")]
    SeriesDivergence { function: &'static str, iterations: usize },

    #[error("variance {0:e} is not positive; tighten the quadrature tolerance")]
    NonPositiveVariance(f64),

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error("unknown figure recipe `{0}`")]
    UnknownRecipe(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
