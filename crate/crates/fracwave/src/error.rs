use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite input `{0}`")]
    NonFinite(&'static str),

    #[error("time ordering violated: s = {s} exceeds t = {t}")]
    TimeOrder { t: f64, s: f64 },

    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("exponent {alpha} is outside the integrable range (> -1)")]
    Domain { alpha: f64 },

    #[error("envelope exponent {beta} <= 1: tail integral is not absolutely convergent")]
    Divergent { beta: f64 },

    #[error("quadrature did not converge: value {value:e}, error estimate {err_est:e}")]
    Convergence { value: f64, err_est: f64 },

    #[error("argument |z| = {z} exceeds the series regime limit {z_max}")]
    SeriesRegime { z: f64, z_max: f64 },

    #[error("grid rejected: {0}")]
    Grid(String),

    #[error("matrix is not symmetric (max |C - C^T| = {0:e})")]
    Asymmetric(f64),

    #[error("factorization failed; smallest failing relative jitter {jitter:e}")]
    Factorization { jitter: f64 },

    #[error("not enough data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

pub(crate) fn ensure_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}
