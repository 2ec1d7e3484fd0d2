use thiserror::Error;

/// Errors raised by the model and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("model ill-posed: 1 - c - omega^2 d h = {denominator} must be positive")]
    IllPosed { denominator: f64 },
    #[error("non-finite state produced by the map")]
    NonFinite,
    #[error("no sign change in bracket [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    RootNotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("state is not a steady state (residual {residual})")]
    NotASteadyState { residual: f64 },
    #[error("requested steady state does not exist anywhere on the scanned range")]
    TargetAbsent,
    #[error("argument {value} outside admissible domain ({lo}, {hi})")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("orbit diverged")]
    DivergentOrbit,
    #[error("series too short: {len} entries, need at least {min}")]
    TooShort { len: usize, min: usize },
    #[error("degenerate series (zero variance or too few valid entries)")]
    DegenerateSeries,
}

pub type Result<T> = std::result::Result<T, Error>;
