use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Gamma pole: |z + {n}| below guard at z = {re:e} + {im:e}i")]
    Pole { n: u64, re: f64, im: f64 },

    #[error("degenerate Euler factor at p = {p}: |p^(1/2+eps) - cos(.)| = {denominator:e}")]
    DegenerateArctan { p: u64, denominator: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("oscillation boundaries exceed p_max = {p_max}; largest valid k is {largest_valid_k}")]
    Truncation { p_max: u64, largest_valid_k: i64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
