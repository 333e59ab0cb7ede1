//! Likelihood, score, Fisher information and the maximum-likelihood
//! estimator of the coupling ratio φ.
//!
//! The postselected, normalized difference counts are modelled as a
//! multivariate normal with mean vector μ_i = f·φ and covariance C set by the
//! noise model. Closed forms for the information:
//!
//! * white / purely quantum: I = f²·N·|α|²/(1 + η̃²|α|²);
//! * colored:                I = f²·N·|α|²/(1 + N·η̃²|α|²);
//! * exponential:            I = f²·Σ_ij C⁻¹_ij, evaluated numerically.
//!
//! (f, N) are the mode calibration constants: (1, M) without postselection
//! and (−1/(2δ), δ²M) / (−1/(2φ), φ²M/2) for weak/strong postselection.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{ExperimentConfig, MeasurementMode};
use crate::noise::{NoiseKind, NoiseModel, Precision};
use crate::scalar::{cast, Scalar};
use crate::simulator;

/// Postselected, normalized difference-count samples with the configuration
/// snapshot that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet<T> {
    samples: Vec<T>,
    config: ExperimentConfig<T>,
}

impl<T: Scalar> DataSet<T> {
    /// Requires 1 ≤ N ≤ M and a valid configuration.
    pub fn new(samples: Vec<T>, config: ExperimentConfig<T>) -> Result<Self> {
        config.validate()?;
        if samples.is_empty() {
            return Err(Error::EmptyRange { what: "samples" });
        }
        if samples.len() as u64 > config.m_photons {
            return Err(Error::DimensionMismatch {
                expected: config.m_photons as usize,
                got: samples.len(),
            });
        }
        Ok(DataSet { samples, config })
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn config(&self) -> &ExperimentConfig<T> {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn precision(&self) -> Result<Precision<T>> {
        Precision::new(self.samples.len(), &NoiseModel::from_config(&self.config)?)
    }
}

/// Analytic and Monte-Carlo Fisher information for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherReport<T> {
    /// Closed-form (or factorization-based) information per experiment.
    pub analytic: T,
    /// Monte-Carlo estimate of E[score²], when computed.
    pub numeric: Option<T>,
    /// Standard error of the Monte-Carlo estimate.
    pub numeric_se: Option<T>,
    pub regime: MeasurementMode,
    pub noise_kind: NoiseKind,
    /// Cramér–Rao lower bound 1/analytic.
    pub crlb: T,
}

/// Predicted estimator quality derived from the analytic information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorStats<T> {
    /// Standard deviation 1/√I(φ).
    pub std_dev: T,
    /// Signal-to-noise ratio φ/std_dev = φ·√I(φ).
    pub snr: T,
}

/// Log of the multivariate normal density,
/// −½(s−μ)ᵀC⁻¹(s−μ) − ½ ln((2π)^N |C|), with μ_i = f·φ.
pub fn log_likelihood<T: Scalar>(data: &DataSet<T>, phi: T) -> Result<T> {
    let f = data.config().calibration()?.amp_factor;
    let mu = f * phi;
    let centered: Vec<T> = data.samples().iter().map(|&s| s - mu).collect();
    let precision = data.precision()?;
    let quad = precision.quadratic(&centered)?;
    let n_t = cast::<T>(data.len() as f64);
    let half = cast::<T>(0.5);
    Ok(-half * quad - half * (n_t * (cast::<T>(2.0) * T::PI()).ln() + precision.log_det_cov()))
}

/// Score ∂φ ln L = ½ Σ_ij C⁻¹_ij [f(s_i + s_j) − 2f²φ]
///               = f·𝟙ᵀC⁻¹s − f²φ·Σ_ij C⁻¹_ij.
pub fn score<T: Scalar>(data: &DataSet<T>, phi: T) -> Result<T> {
    let f = data.config().calibration()?.amp_factor;
    let precision = data.precision()?;
    Ok(f * precision.weighted_sum(data.samples())? - f * f * phi * precision.total())
}

/// Closed-form Fisher information for the configured (noise × measurement)
/// cell, with N = round(P·M).
pub fn fisher_analytic<T: Scalar>(config: &ExperimentConfig<T>) -> Result<FisherReport<T>> {
    config.validate()?;
    let calibration = config.calibration()?;
    let f = calibration.amp_factor;
    let n = config.expected_data_count()?;
    let n_t = cast::<T>(n as f64);
    let alpha_sq = config.alpha_sq;
    let eta_sq = config.effective_eta_sq();
    let model = NoiseModel::from_config(config)?;

    let analytic = match config.noise_regime {
        NoiseKind::White | NoiseKind::PurelyQuantum => {
            alpha_sq / (T::one() + eta_sq * alpha_sq) * f * f * n_t
        }
        NoiseKind::Colored => {
            f * f * alpha_sq * n_t / (T::one() + alpha_sq * n_t * eta_sq)
        }
        NoiseKind::Exponential => f * f * Precision::new(n as usize, &model)?.total(),
    };

    Ok(FisherReport {
        analytic,
        numeric: None,
        numeric_se: None,
        regime: config.measurement_mode,
        noise_kind: config.noise_regime,
        crlb: analytic.recip(),
    })
}

/// Monte-Carlo Fisher information: mean of score² over synthetic datasets
/// drawn from the simulator's data law at the true φ, with its standard
/// error. Experiments that happen to postselect nothing contribute zero
/// score.
pub fn fisher_numeric<T: Scalar, R: Rng + ?Sized>(
    config: &ExperimentConfig<T>,
    n_datasets: usize,
    rng: &mut R,
) -> Result<FisherReport<T>> {
    if n_datasets < 100 {
        return Err(Error::domain(
            "n_datasets",
            n_datasets as f64,
            "n_datasets >= 100",
        ));
    }
    let mut report = fisher_analytic(config)?;

    let mut sum = T::zero();
    let mut sum_sq = T::zero();
    for _ in 0..n_datasets {
        let sq = match simulator::run_experiment(config, rng) {
            Ok(data) => {
                let s = score(&data, config.phi)?;
                s * s
            }
            Err(Error::ZeroPostselections) => T::zero(),
            Err(other) => return Err(other),
        };
        sum += sq;
        sum_sq += sq * sq;
    }
    let n_t = cast::<T>(n_datasets as f64);
    let mean = sum / n_t;
    let var = (sum_sq / n_t - mean * mean).max(T::zero());
    report.numeric = Some(mean);
    report.numeric_se = Some((var / n_t).sqrt());
    Ok(report)
}

/// Maximum-likelihood estimate φ̂ = (1/f)·(Σ s_i)/N; the same closed form for
/// every noise kind.
pub fn mle_estimate<T: Scalar>(data: &DataSet<T>) -> Result<T> {
    let f = data.config().calibration()?.amp_factor;
    if f == T::zero() {
        return Err(Error::ZeroAmplification);
    }
    let mean = data.samples().iter().copied().sum::<T>() / cast::<T>(data.len() as f64);
    Ok(mean / f)
}

/// Predicted estimator standard deviation and SNR at the configured working
/// point.
pub fn estimator_stats<T: Scalar>(config: &ExperimentConfig<T>) -> Result<EstimatorStats<T>> {
    let info = fisher_analytic(config)?.analytic;
    let std_dev = info.sqrt().recip();
    Ok(EstimatorStats {
        std_dev,
        snr: config.phi / std_dev,
    })
}
