use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("jet order {order} exceeds the maximum {max}")]
    OrderOverflow { order: usize, max: usize },

    #[error("composition count exceeds cap {cap} (partial count {partial})")]
    CapExceeded { cap: usize, partial: usize },

    #[error("expected s <= t, got s = {s}, t = {t}")]
    Order { s: f64, t: f64 },

    #[error("moment is infinite: {0}")]
    InfiniteMoment(String),

    #[error("rejection sampler exceeded {0} rejections")]
    RejectionCap(usize),

    #[error("no crossing of level {level} before horizon cap {cap}")]
    HorizonExceeded { level: f64, cap: f64 },

    #[error("only {found} exceedances at y = {y}, need at least {needed}")]
    InsufficientSamples { y: f64, found: usize, needed: usize },

    #[error("conditioning on a null event: {0}")]
    ConditioningOnNull(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Fails with a domain error unless `cond` holds.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
