use thiserror::Error;

use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// A sub-expression was evaluated outside its natural domain.
    #[error("domain error in {op} at argument {arg}")]
    Domain { op: &'static str, arg: f64 },

    #[error("unsupported differentiation order {0} (supported: 0..=4)")]
    UnsupportedOrder(usize),

    #[error("point {t} lies outside the kernel domain {domain}")]
    KernelDomain { t: f64, domain: String },

    #[error("kernel derivative g'({t}) = {value} is not positive")]
    KernelNotIncreasing { t: f64, value: f64 },

    #[error("kernel inversion failed for s = {s}: {reason}")]
    KernelInversion { s: f64, reason: String },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("gamma function pole at {0}")]
    GammaPole(f64),

    #[error("eigenvalue iteration did not converge for {0} nodes")]
    EigenNonConvergence(usize),

    #[error("{0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
