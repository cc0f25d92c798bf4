use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The argument sits on (or within tolerance of) a pole at a nonpositive integer.
    #[error("pole: argument {x} is a nonpositive integer")]
    Pole { x: f64 },

    /// The term cap was reached before the tail bound fell below epsilon.
    #[error("no convergence after {terms} terms (tail bound {bound:e})")]
    Convergence { terms: u64, bound: f64 },

    /// The base is closer to 1 than the truncation policy supports.
    #[error("base {q} is beyond the supported limit {max_base} of the truncation policy")]
    BaseNearOne { q: f64, max_base: f64 },
}

impl Error {
    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::BaseNearOne { .. })
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
