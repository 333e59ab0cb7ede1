//! Simulation and estimation of a weak-value-amplified optomechanical
//! coupling measurement.
//!
//! A stream of single photons drives an optomechanical cavity inside one
//! interferometer; postselection in its dark port triggers a phase
//! measurement of a classical beam in a second interferometer. This crate
//! implements the full statistical chain:
//!
//! * [`model`] — postselection probability, amplification factor / weak
//!   value, regime classification and physical-parameter conversions;
//! * [`photostats`] — exact photocount statistics of the phase measurement
//!   (Skellam difference law, Stirling/Touchard moments, samplers and the
//!   Gaussian limit);
//! * [`noise`] — technical-noise covariance models (white, colored, purely
//!   quantum, exponential) with analytic inverses;
//! * [`inference`] — likelihood, score, analytic and Monte-Carlo Fisher
//!   information, the maximum-likelihood estimator and its predicted
//!   precision;
//! * [`simulator`] — end-to-end Monte-Carlo experiments, trial ensembles and
//!   the parameter sweeps of the information landscape;
//! * [`bessel`] — the log-scaled modified Bessel function backing the exact
//!   count law.
//!
//! The numeric kernels are generic over the floating-point type through
//! [`Scalar`]; the aliases below fix the double-precision instantiations
//! used by the command-line front end.

pub mod bessel;
pub mod error;
pub mod inference;
pub mod model;
pub mod noise;
pub mod photostats;
mod scalar;
pub mod simulator;

pub use error::{Error, Result};
pub use scalar::Scalar;

// Re-exported so downstream users construct the amplitude types without
// pinning their own copy of the dependency.
pub use num_complex;

/// Double-precision instantiations of the core types.
pub type PhysicalParams64 = model::PhysicalParams<f64>;
pub type ExperimentConfig64 = model::ExperimentConfig<f64>;
pub type PostselectionStats64 = model::PostselectionStats<f64>;
pub type OutputAmplitudes64 = photostats::OutputAmplitudes<f64>;
pub type SkellamParams64 = photostats::SkellamParams<f64>;
pub type NoiseModel64 = noise::NoiseModel<f64>;
pub type CovarianceMatrix64 = noise::CovarianceMatrix<f64>;
pub type DataSet64 = inference::DataSet<f64>;
pub type FisherReport64 = inference::FisherReport<f64>;
pub type EstimatorStats64 = inference::EstimatorStats<f64>;
pub type TrialSummary64 = simulator::TrialSummary<f64>;
pub type TrialRecord64 = simulator::TrialRecord<f64>;
pub type SweepResult64 = simulator::SweepResult<f64>;
pub type Table1Report64 = simulator::Table1Report<f64>;
