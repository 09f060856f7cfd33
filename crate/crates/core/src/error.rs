use thiserror::Error;

/// Errors raised by the special-function kernel and the physics modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Energy sits on ε = −C, where τ = (ω/2)/(C+ε) and the kinetic-balance prefactor blow up.
    #[error("pole at epsilon = -C = {c}")]
    Pole { c: f64 },

    #[error("degenerate recursion: leading coefficient vanishes at n = {n}")]
    DegenerateRecursion { n: usize },

    #[error("state has no degeneracy partner: {0}")]
    NoPartner(String),

    #[error("singular representation: p(epsilon) = 0")]
    SingularRepresentation,

    #[error("degenerate basis: tau = 0")]
    DegenerateBasis,

    #[error("usage error: {0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("threshold divergence: |epsilon| - 1 = {0:e} is too close to the rest-mass threshold")]
    ThresholdDivergence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
