use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("n must be at least 3 (got {0})")]
    Domain(i64),
    #[error("point ({x}, {y}) is not in the section")]
    OutsideSection { x: f64, y: f64 },
    #[error("no candidate vector is admissible at this point")]
    NoCandidate,
    #[error("quadrature did not converge: estimated error {achieved:e} above tolerance {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::Domain(n as i64))
    } else {
        Ok(())
    }
}
