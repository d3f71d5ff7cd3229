use thiserror::Error;

use crate::distributions::AldParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    Bracketing {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error(
        "quadrature did not converge on [{lo}, {hi}] after {intervals} subintervals \
         (estimate {estimate}, error {error_estimate})"
    )]
    NonConvergence {
        lo: f64,
        hi: f64,
        intervals: usize,
        estimate: f64,
        error_estimate: f64,
    },

    /// The sample shows no excess variance to attribute to the effects.
    #[error("degenerate moment fit (sample mean {mean}, sample variance {variance})")]
    DegenerateFit {
        mean: f64,
        variance: f64,
        fallback: AldParams,
    },

    #[error("rejection probability {msdr:e} is numerically zero for this region")]
    DegenerateRegion { msdr: f64 },

    #[error("no feasible (alpha, s) keeps the sign error rate below {alpha_s}")]
    Infeasible { alpha_s: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("configuration error at `{key}`: {message}")]
    Config { key: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
