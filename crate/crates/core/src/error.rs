use thiserror::Error;

/// Errors raised by the special-function, spectral and shooting routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    GammaPole(f64),

    #[error("invalid parameter c = {0}: the Kummer series is undefined at nonpositive integers")]
    InvalidC(f64),

    #[error("series for M({a}, {c}, {z}) did not converge within {terms} terms")]
    SeriesNonConvergence { a: f64, c: f64, z: f64, terms: usize },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("root not bracketed on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("flux nu = {0} outside (-1/2, 1/2]")]
    FluxOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ground-state search window exceeded |n - {seed}| <= {limit}")]
    WindowOverflow { seed: i64, limit: i64 },

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("non-finite result: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
