//! Run configuration: a flat JSON document merged with command-line
//! overrides, then validated into an [`ExperimentConfig64`].

use std::path::Path;

use serde::Deserialize;
use wva_core::model::MeasurementMode;
use wva_core::noise::NoiseKind;
use wva_core::ExperimentConfig64;

use crate::CliError;

/// Documented defaults (a colored-noise weak measurement at P = 1%).
pub const DEFAULT_PHI: f64 = 0.001;
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_ALPHA_SQ: f64 = 100.0;
pub const DEFAULT_M_PHOTONS: u64 = 1000;
pub const DEFAULT_GAMMA_RATE: f64 = 1.0;
pub const DEFAULT_TAU_CORR: f64 = 0.0;
pub const DEFAULT_ETA_SQ: f64 = 0.05;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: usize = 1000;

/// On-disk configuration document. Unknown keys are rejected.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    pub phi: Option<f64>,
    pub delta: Option<f64>,
    pub alpha_sq: Option<f64>,
    pub m_photons: Option<u64>,
    pub gamma_rate: Option<f64>,
    pub tau_corr: Option<f64>,
    pub eta_sq: Option<f64>,
    pub noise: Option<String>,
    pub measurement: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

impl RunConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Command-line overrides; each takes precedence over the file value.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub phi: Option<f64>,
    pub delta: Option<f64>,
    pub alpha_sq: Option<f64>,
    pub m_photons: Option<u64>,
    pub gamma_rate: Option<f64>,
    pub tau_corr: Option<f64>,
    pub eta_sq: Option<f64>,
    pub noise: Option<String>,
    pub measurement: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

/// Fully resolved run settings.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub experiment: ExperimentConfig64,
    pub seed: u64,
    pub trials: usize,
}

pub fn parse_noise(label: &str) -> Result<NoiseKind, CliError> {
    match label {
        "white" => Ok(NoiseKind::White),
        "colored" => Ok(NoiseKind::Colored),
        "quantum" => Ok(NoiseKind::PurelyQuantum),
        "exponential" => Ok(NoiseKind::Exponential),
        other => Err(CliError::config(format!(
            "unknown noise kind `{other}` (expected white|colored|quantum|exponential)"
        ))),
    }
}

pub fn parse_measurement(label: &str) -> Result<MeasurementMode, CliError> {
    match label {
        "none" => Ok(MeasurementMode::NoPostselection),
        "weak" => Ok(MeasurementMode::WeakPostselection),
        "strong" => Ok(MeasurementMode::StrongPostselection),
        other => Err(CliError::config(format!(
            "unknown measurement mode `{other}` (expected none|weak|strong)"
        ))),
    }
}

/// defaults ← file ← flags, then core validation.
pub fn resolve(file: &RunConfigFile, overrides: &Overrides) -> Result<Resolved, CliError> {
    let noise_label = overrides
        .noise
        .clone()
        .or_else(|| file.noise.clone())
        .unwrap_or_else(|| "colored".to_string());
    let measurement_label = overrides
        .measurement
        .clone()
        .or_else(|| file.measurement.clone())
        .unwrap_or_else(|| "weak".to_string());

    let experiment = ExperimentConfig64 {
        phi: overrides.phi.or(file.phi).unwrap_or(DEFAULT_PHI),
        delta: overrides.delta.or(file.delta).unwrap_or(DEFAULT_DELTA),
        alpha_sq: overrides
            .alpha_sq
            .or(file.alpha_sq)
            .unwrap_or(DEFAULT_ALPHA_SQ),
        m_photons: overrides
            .m_photons
            .or(file.m_photons)
            .unwrap_or(DEFAULT_M_PHOTONS),
        gamma_rate: overrides
            .gamma_rate
            .or(file.gamma_rate)
            .unwrap_or(DEFAULT_GAMMA_RATE),
        tau_corr: overrides
            .tau_corr
            .or(file.tau_corr)
            .unwrap_or(DEFAULT_TAU_CORR),
        eta_sq: overrides.eta_sq.or(file.eta_sq).unwrap_or(DEFAULT_ETA_SQ),
        noise_regime: parse_noise(&noise_label)?,
        measurement_mode: parse_measurement(&measurement_label)?,
    };
    experiment.validate()?;

    Ok(Resolved {
        experiment,
        seed: overrides.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        trials: overrides.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
    })
}
