//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors raised by solver construction, evaluation, and analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// f'(x) vanished where an iteration needs to divide by it.
    DerivativeSingularity { at: String },
    /// A step produced f(z) = f(x) with the iterate not yet converged,
    /// so the divided difference is undefined.
    DegenerateStep,
    /// An error magnitude was zero or non-finite where the digit schedule
    /// needs a positive value; the caller must treat the iterate as
    /// converged instead.
    DegenerateInput,
    /// A derivative of order `k` was requested but the problem only
    /// supplies derivatives up to `max`.
    UnsupportedOrder { k: u32, max: u32 },
    /// Evaluation outside the function's domain (e.g. log at x <= 0).
    DomainViolation { problem: String },
    /// The Newton bootstrap for a reference root did not converge.
    RootBootstrapFailure { steps: u32 },
    /// Fewer error magnitudes than an estimator needs.
    InsufficientData { needed: usize, got: usize },
    /// An argument combination violated an operation's contract.
    ContractViolation { what: String },
    /// A number failed to parse or an operation produced NaN/Inf.
    NonFinite { what: String },
    /// Arithmetic backend failure (allocation, precision overflow).
    Backend { what: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DerivativeSingularity { at } => {
                write!(f, "derivative is zero at {at}; iteration cannot proceed")
            }
            Error::DegenerateStep => {
                write!(f, "degenerate step: f(z) = f(x), divided difference undefined")
            }
            Error::DegenerateInput => {
                write!(f, "error magnitude is zero or non-finite")
            }
            Error::UnsupportedOrder { k, max } => {
                write!(f, "derivative order {k} unsupported (highest available is {max})")
            }
            Error::DomainViolation { problem } => {
                write!(f, "argument outside the domain of {problem}")
            }
            Error::RootBootstrapFailure { steps } => {
                write!(f, "reference-root bootstrap failed to converge in {steps} steps")
            }
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} values, got {got}")
            }
            Error::ContractViolation { what } => write!(f, "contract violation: {what}"),
            Error::NonFinite { what } => write!(f, "non-finite value: {what}"),
            Error::Backend { what } => write!(f, "arithmetic backend error: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
