use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("cannot parse complex literal {0:?}")]
    ParseComplex(String),

    #[error("{what} is a pole of the ratio at mu = {mu}")]
    Pole { what: &'static str, mu: Complex64 },

    #[error("rho = {0} is excluded for this operation")]
    ExcludedRho(Complex64),

    #[error("u = {0} is outside the differentiability domain")]
    Domain(f64),

    #[error("{0} did not converge")]
    NonConvergence(&'static str),

    #[error("overflow while computing {0}")]
    Overflow(&'static str),

    #[error("precision loss in {what}: self-check error {rel_err:e}")]
    PrecisionLoss { what: &'static str, rel_err: f64 },

    #[error("eigenvalue {0} matches both symmetry blocks")]
    AmbiguousType(Complex64),

    #[error("point {0} lies on the curve (distance {1:e})")]
    OnCurve(Complex64, f64),

    #[error("need at least {needed} samples, have {have}")]
    InsufficientSamples { needed: usize, have: usize },

    #[error("no sample pairs satisfy the parameter gap")]
    EmptyPairs,

    #[error("grid resolution {0} is too coarse to separate the regions")]
    AmbiguousRegion(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
