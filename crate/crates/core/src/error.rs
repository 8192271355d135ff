use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain on which the quantity is defined.
    #[error("{what} out of domain: {detail}")]
    Domain { what: &'static str, detail: String },

    /// The integral bounding `I(p)` diverges for the given exponent.
    #[error("integral diverges: exponent alpha = {alpha} must exceed 1")]
    Divergent { alpha: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
