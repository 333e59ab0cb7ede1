//! Crate-wide error type.

use std::fmt;

/// Result alias used across the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors reported by the estimation library.
///
/// Diagnostics are carried as `f64` regardless of the working scalar type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    Domain {
        what: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// An integer argument exceeds the guarded range.
    Range {
        what: &'static str,
        max: u32,
        got: u32,
    },
    /// Postselection probability is zero, so the amplification factor is
    /// undefined (δ = φ = 0).
    DegeneratePostselection,
    /// The expected number of postselected events P·M is below one.
    ExpectedZeroPostselections { expected: f64 },
    /// A simulated experiment produced no postselected events.
    ZeroPostselections,
    /// Every simulated trial produced zero postselections.
    AllTrialsFailed,
    /// The configured amplification factor is zero, so φ cannot be estimated.
    ZeroAmplification,
    /// Sample vector length does not match the covariance dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// |α|² is below the Gaussian-limit threshold; the exact
    /// Poisson-difference sampler must be used instead.
    BelowGaussianThreshold { alpha_sq: f64, threshold: f64 },
    /// Covariance matrix is numerically singular.
    SingularCovariance,
    /// An empty range was supplied where at least one element is required.
    EmptyRange { what: &'static str },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            constraint,
        }
    }

    /// True for statistically degenerate runs (no usable postselections), as
    /// opposed to invalid configuration input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::ExpectedZeroPostselections { .. }
                | Error::ZeroPostselections
                | Error::AllTrialsFailed
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain {
                what,
                value,
                constraint,
            } => write!(f, "parameter `{what}` = {value} violates {constraint}"),
            Error::Range { what, max, got } => {
                write!(f, "`{what}` = {got} exceeds the supported maximum {max}")
            }
            Error::DegeneratePostselection => {
                write!(f, "postselection probability is zero (delta = phi = 0)")
            }
            Error::ExpectedZeroPostselections { expected } => write!(
                f,
                "expected postselected count P*M = {expected} is below one"
            ),
            Error::ZeroPostselections => {
                write!(f, "no photon was postselected in this experiment")
            }
            Error::AllTrialsFailed => {
                write!(f, "every trial ended with zero postselected photons")
            }
            Error::ZeroAmplification => {
                write!(f, "amplification factor is zero; phi is not identifiable")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::BelowGaussianThreshold {
                alpha_sq,
                threshold,
            } => write!(
                f,
                "alpha_sq = {alpha_sq} is below the Gaussian-limit threshold {threshold}"
            ),
            Error::SingularCovariance => write!(f, "covariance matrix is singular"),
            Error::EmptyRange { what } => write!(f, "`{what}` must contain at least one element"),
        }
    }
}

impl std::error::Error for Error {}
