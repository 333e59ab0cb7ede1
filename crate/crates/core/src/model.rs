//! Experiment configuration, postselection statistics and physical-parameter
//! conversions for the two-interferometer estimation setup.
//!
//! The quantity being estimated is the dimensionless coupling ratio
//! φ = g₀/ω_m. A single photon is postselected in the dark port with
//! probability P = δ² + φ²/4, and a successful postselection amplifies the
//! phase imprinted on the classical beam by f = −δ√(1−δ²)/(2P).

use crate::error::{Error, Result};
use crate::noise::NoiseKind;
use crate::scalar::{cast, Scalar};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054571817e-34;

/// Default ratio δ²/φ² above which a working point counts as weak. Keeps the
/// neglected φ²/(4δ²) correction below 1%.
pub const WEAK_RATIO_THRESHOLD: f64 = 100.0;

/// Strong measurements are pinned to δ = φ/2; a working point is flagged
/// strong when |δ − φ/2| ≤ `STRONG_DELTA_TOLERANCE`·φ.
pub const STRONG_DELTA_TOLERANCE: f64 = 0.1;

/// Couplings above this trip a diagnostic warning: the small-angle closed
/// forms degrade for large φ.
pub const PHI_WARN_THRESHOLD: f64 = 0.1;

/// Fixed physical parameters of the optomechanical cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    /// Optical resonator mode frequency ω_cav (rad/s).
    pub omega_cav: T,
    /// Effective length L of each side of the cavity (m).
    pub cavity_length: T,
    /// Mass of the moving mirror (kg).
    pub mech_mass: T,
    /// Mechanical mode frequency ω_m (rad/s).
    pub omega_m: T,
    /// Reduced Planck constant (J·s).
    pub hbar: T,
}

impl<T: Scalar> PhysicalParams<T> {
    /// Builds a parameter set with ħ fixed to [`HBAR`]. All inputs must be
    /// strictly positive.
    pub fn new(omega_cav: T, cavity_length: T, mech_mass: T, omega_m: T) -> Result<Self> {
        let params = PhysicalParams {
            omega_cav,
            cavity_length,
            mech_mass,
            omega_m,
            hbar: cast(HBAR),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("omega_cav", self.omega_cav)?;
        require_positive("cavity_length", self.cavity_length)?;
        require_positive("mech_mass", self.mech_mass)?;
        require_positive("omega_m", self.omega_m)?;
        require_positive("hbar", self.hbar)?;
        Ok(())
    }
}

/// Measurement strategy of one estimation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasurementMode {
    /// Every photon is kept; no amplification (f = 1).
    NoPostselection,
    /// Postselection far from the dark-port singularity, δ² ≫ φ².
    WeakPostselection,
    /// Postselection at the δ = φ/2 working point.
    StrongPostselection,
}

impl MeasurementMode {
    pub fn label(&self) -> &'static str {
        match self {
            MeasurementMode::NoPostselection => "none",
            MeasurementMode::WeakPostselection => "weak",
            MeasurementMode::StrongPostselection => "strong",
        }
    }
}

/// Regime classification of a (δ, φ) working point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PostselectionRegime {
    Weak,
    Strong,
    Intermediate,
    NoPostselection,
}

/// Postselection probability and amplification factor of a working point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostselectionStats<T> {
    /// Probability that a photon is kept. P = δ² + φ²/4 when postselecting,
    /// 1 otherwise.
    pub prob: T,
    /// Signed amplification factor f of the imprinted phase.
    pub amp_factor: T,
    pub regime: PostselectionRegime,
}

impl<T: Scalar> PostselectionStats<T> {
    /// Working point without postselection: everything is kept, nothing is
    /// amplified.
    pub fn no_postselection() -> Self {
        PostselectionStats {
            prob: T::one(),
            amp_factor: T::one(),
            regime: PostselectionRegime::NoPostselection,
        }
    }

    /// Exact statistics of a postselecting working point: P = δ² + φ²/4 and
    /// f = −δ√(1−δ²)/(2P), classified with the default weak threshold.
    pub fn exact(delta: T, phi: T) -> Result<Self> {
        Ok(PostselectionStats {
            prob: postselection_probability(delta, phi)?,
            amp_factor: amplification_factor(delta, phi)?,
            regime: classify_regime(delta, phi, cast(WEAK_RATIO_THRESHOLD)),
        })
    }

    /// Calibration constants (P, f) for a configured measurement mode, in the
    /// small-imbalance limit used by the closed-form information expressions:
    ///
    /// * no postselection: (1, 1);
    /// * weak:   (δ², −1/(2δ));
    /// * strong: (φ²/2, −1/(2φ)), the δ = φ/2 working point.
    ///
    /// The estimator treats f as a known calibration constant, so the same
    /// value is used for data generation, the score and the information
    /// formulas.
    pub fn for_mode(mode: MeasurementMode, delta: T, phi: T) -> Result<Self> {
        let two = cast::<T>(2.0);
        match mode {
            MeasurementMode::NoPostselection => Ok(Self::no_postselection()),
            MeasurementMode::WeakPostselection => {
                validate_delta(delta)?;
                validate_phi(phi)?;
                if delta == T::zero() {
                    return Err(Error::domain(
                        "delta",
                        0.0,
                        "delta != 0 for weak postselection",
                    ));
                }
                Ok(PostselectionStats {
                    prob: delta * delta,
                    amp_factor: -(two * delta).recip(),
                    regime: PostselectionRegime::Weak,
                })
            }
            MeasurementMode::StrongPostselection => {
                validate_phi(phi)?;
                if phi == T::zero() {
                    return Err(Error::domain(
                        "phi",
                        0.0,
                        "phi > 0 for strong postselection",
                    ));
                }
                Ok(PostselectionStats {
                    prob: phi * phi / two,
                    amp_factor: -(two * phi).recip(),
                    regime: PostselectionRegime::Strong,
                })
            }
        }
    }
}

/// All physical and statistical parameters of one estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    /// Coupling ratio φ = g₀/ω_m to be estimated (φ ≥ 0, expected φ ≪ 1).
    pub phi: T,
    /// PDBS imbalance δ for vertical polarization, |δ| ≤ 1/√2.
    pub delta: T,
    /// Mean photon number |α|² of the classical beam.
    pub alpha_sq: T,
    /// Number M of injected single photons.
    pub m_photons: u64,
    /// Photon injection rate Γ (photons/s).
    pub gamma_rate: T,
    /// Technical-noise correlation time τ (s).
    pub tau_corr: T,
    /// Technical-noise strength η̃².
    pub eta_sq: T,
    pub noise_regime: NoiseKind,
    pub measurement_mode: MeasurementMode,
}

impl<T: Scalar> ExperimentConfig<T> {
    pub fn validate(&self) -> Result<()> {
        validate_delta(self.delta)?;
        validate_phi(self.phi)?;
        require_positive("alpha_sq", self.alpha_sq)?;
        require_positive("gamma_rate", self.gamma_rate)?;
        require_nonnegative("tau_corr", self.tau_corr)?;
        require_nonnegative("eta_sq", self.eta_sq)?;
        if self.m_photons < 1 {
            return Err(Error::domain("m_photons", 0.0, "m_photons >= 1"));
        }
        Ok(())
    }

    /// η̃² with the purely-quantum override applied.
    pub fn effective_eta_sq(&self) -> T {
        match self.noise_regime {
            NoiseKind::PurelyQuantum => T::zero(),
            _ => self.eta_sq,
        }
    }

    /// Calibration (P, f) for the configured measurement mode.
    pub fn calibration(&self) -> Result<PostselectionStats<T>> {
        PostselectionStats::for_mode(self.measurement_mode, self.delta, self.phi)
    }

    /// Exact dark-port detection probability at this working point, or 1 when
    /// no postselection is performed.
    pub fn keep_probability(&self) -> Result<T> {
        match self.measurement_mode {
            MeasurementMode::NoPostselection => Ok(T::one()),
            _ => postselection_probability(self.delta, self.phi),
        }
    }

    /// Expected number of postselected events round(P·M), as substituted into
    /// the closed-form information expressions. Errors when P·M < 1.
    pub fn expected_data_count(&self) -> Result<u64> {
        if self.measurement_mode == MeasurementMode::NoPostselection {
            return Ok(self.m_photons);
        }
        let prob = self.calibration()?.prob.to_f64().unwrap_or(f64::NAN);
        let expected = prob * self.m_photons as f64;
        if expected < 1.0 || expected.is_nan() {
            return Err(Error::ExpectedZeroPostselections { expected });
        }
        Ok(expected.round() as u64)
    }
}

/// Dark-port detection probability P = δ² + φ²/4.
///
/// Never clamps: inputs for which the formula leaves [0, 1] are rejected.
pub fn postselection_probability<T: Scalar>(delta: T, phi: T) -> Result<T> {
    validate_delta(delta)?;
    validate_phi(phi)?;
    let p = delta * delta + phi * phi / cast(4.0);
    if p > T::one() {
        return Err(Error::domain(
            "phi",
            phi.to_f64().unwrap_or(f64::NAN),
            "delta^2 + phi^2/4 <= 1",
        ));
    }
    Ok(p)
}

/// Amplification factor f = −δ√(1−δ²)/(2P) of the postselected phase.
///
/// The sign follows −sign(δ). Errors when P = 0 (δ = φ = 0).
pub fn amplification_factor<T: Scalar>(delta: T, phi: T) -> Result<T> {
    let p = postselection_probability(delta, phi)?;
    if p == T::zero() {
        return Err(Error::DegeneratePostselection);
    }
    Ok(-delta * (T::one() - delta * delta).sqrt() / (cast::<T>(2.0) * p))
}

/// Weak value N_w = −√(1−δ²)/(2δ), the φ → 0 limit of
/// [`amplification_factor`].
pub fn weak_value<T: Scalar>(delta: T) -> Result<T> {
    validate_delta(delta)?;
    if delta == T::zero() {
        return Err(Error::domain("delta", 0.0, "delta != 0"));
    }
    Ok(-(T::one() - delta * delta).sqrt() / (cast::<T>(2.0) * delta))
}

/// Classifies a (δ, φ) working point.
///
/// Weak when δ² ≥ `weak_ratio_threshold`·φ²; strong when |δ − φ/2| ≤ 0.1·φ;
/// intermediate otherwise.
pub fn classify_regime<T: Scalar>(delta: T, phi: T, weak_ratio_threshold: T) -> PostselectionRegime {
    if delta * delta >= weak_ratio_threshold * phi * phi {
        PostselectionRegime::Weak
    } else if (delta - phi / cast(2.0)).abs() <= cast::<T>(STRONG_DELTA_TOLERANCE) * phi {
        PostselectionRegime::Strong
    } else {
        PostselectionRegime::Intermediate
    }
}

/// Single-photon coupling rate g₀ = (ω_cav/L)·√(ħ/(2 ω_m M)) (rad/s).
pub fn g0_from_physical<T: Scalar>(params: &PhysicalParams<T>) -> Result<T> {
    params.validate()?;
    let radicand = params.hbar / (cast::<T>(2.0) * params.omega_m * params.mech_mass);
    Ok(params.omega_cav / params.cavity_length * radicand.sqrt())
}

/// Mirror mass M = ħ ω_cav²/(2 L² ω_m³ φ̂²) inferred from an estimated
/// coupling ratio. Exact algebraic inverse of [`g0_from_physical`] combined
/// with φ = g₀/ω_m.
pub fn mass_from_phi<T: Scalar>(
    phi_hat: T,
    omega_cav: T,
    cavity_length: T,
    omega_m: T,
) -> Result<T> {
    require_positive("phi_hat", phi_hat)?;
    require_positive("omega_cav", omega_cav)?;
    require_positive("cavity_length", cavity_length)?;
    require_positive("omega_m", omega_m)?;
    let two = cast::<T>(2.0);
    Ok(cast::<T>(HBAR) * omega_cav * omega_cav
        / (two * cavity_length * cavity_length * omega_m.powi(3) * phi_hat * phi_hat))
}

fn validate_delta<T: Scalar>(delta: T) -> Result<()> {
    if !delta.is_finite() || delta.abs() > T::FRAC_1_SQRT_2() {
        return Err(Error::domain(
            "delta",
            delta.to_f64().unwrap_or(f64::NAN),
            "|delta| <= 1/sqrt(2)",
        ));
    }
    Ok(())
}

fn validate_phi<T: Scalar>(phi: T) -> Result<()> {
    if !phi.is_finite() || phi < T::zero() {
        return Err(Error::domain(
            "phi",
            phi.to_f64().unwrap_or(f64::NAN),
            "phi >= 0",
        ));
    }
    if phi > cast(PHI_WARN_THRESHOLD) {
        log::warn!(
            "phi = {phi} exceeds {PHI_WARN_THRESHOLD}; small-angle closed forms degrade"
        );
    }
    Ok(())
}

fn require_positive<T: Scalar>(what: &'static str, value: T) -> Result<()> {
    if !value.is_finite() || value <= T::zero() {
        return Err(Error::domain(
            what,
            value.to_f64().unwrap_or(f64::NAN),
            "strictly positive",
        ));
    }
    Ok(())
}

fn require_nonnegative<T: Scalar>(what: &'static str, value: T) -> Result<()> {
    if !value.is_finite() || value < T::zero() {
        return Err(Error::domain(
            what,
            value.to_f64().unwrap_or(f64::NAN),
            "nonnegative",
        ));
    }
    Ok(())
}
