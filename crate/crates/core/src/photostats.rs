//! Exact photocount statistics of the phase-measurement interferometer.
//!
//! A coherent beam of mean photon number |α|² is split, picks up a total
//! phase θ = π + Δθ − π/2 (mirror reflection, signal, phase shifter) and is
//! recombined onto two counters. The difference count D = n_A′ − n_B′ then
//! follows a Skellam law whose Poisson intensities are |β|² and |γ|²; its
//! moments are reachable through Stirling/Touchard machinery and, for strong
//! beams, the normalized difference D̃ = D/|α|² is well approximated by
//! N(Δθ, 1/|α|²).

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::bessel::log_bessel_i;
use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

/// Largest order accepted by the exact Stirling/Touchard routines.
pub const MAX_STIRLING_ORDER: u32 = 64;

/// Largest moment order evaluated in floating point.
pub const MAX_MOMENT_ORDER: u32 = 32;

/// |α|² above which the Gaussian limit of the difference law may be sampled.
/// Below it the exact Poisson-difference sampler is mandatory.
pub const GAUSSIAN_THRESHOLD: f64 = 50.0;

/// Half-width of the truncated counting support, in units of √|α|². The
/// discarded tail mass is below 1e-80.
pub const SUPPORT_SIGMAS: f64 = 20.0;

/// Output-port amplitudes of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputAmplitudes<T> {
    /// Amplitude at port A′: β = −(iα/2)(1 − e^{iθ}).
    pub beta: Complex<T>,
    /// Amplitude at port B′: γ = −(α/2)(1 + e^{iθ}).
    pub gamma: Complex<T>,
    /// Total phase θ (rad).
    pub theta: T,
}

/// Decomposition of the total interferometer phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition<T> {
    /// Reflection shift, fixed at π.
    pub theta0: T,
    /// Phase-shifter setting, fixed at −π/2.
    pub capital_theta: T,
    /// Signal phase Δθ = f·φ carrying the mechanical displacement.
    pub delta_theta: T,
}

impl<T: Scalar> PhaseDecomposition<T> {
    pub fn new(delta_theta: T) -> Self {
        PhaseDecomposition {
            theta0: T::PI(),
            capital_theta: -T::FRAC_PI_2(),
            delta_theta,
        }
    }

    /// θ = θ₀ + Δθ + Θ.
    pub fn total(&self) -> T {
        self.theta0 + self.delta_theta + self.capital_theta
    }
}

/// Poisson intensities of the balanced-detector difference count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkellamParams<T> {
    /// Intensity |β|² of counter A′.
    pub mu_a: T,
    /// Intensity |γ|² of counter B′.
    pub mu_b: T,
}

impl<T: Scalar> SkellamParams<T> {
    pub fn new(mu_a: T, mu_b: T) -> Result<Self> {
        for (what, value) in [("mu_a", mu_a), ("mu_b", mu_b)] {
            if !value.is_finite() || value < T::zero() {
                return Err(Error::domain(
                    what,
                    value.to_f64().unwrap_or(f64::NAN),
                    "nonnegative",
                ));
            }
        }
        Ok(SkellamParams { mu_a, mu_b })
    }

    /// Intensities at the working phase θ = π + Δθ − π/2:
    /// |β|² = |α|²(1 + sin Δθ)/2 and |γ|² = |α|²(1 − sin Δθ)/2.
    pub fn from_phase(alpha_sq: T, delta_theta: T) -> Result<Self> {
        validate_phase_inputs(alpha_sq, delta_theta)?;
        let half = alpha_sq / cast(2.0);
        let s = delta_theta.sin();
        SkellamParams::new(half * (T::one() + s), half * (T::one() - s))
    }

    /// Mean of D: |β|² − |γ|².
    pub fn mean(&self) -> T {
        self.mu_a - self.mu_b
    }

    /// Variance of D: |β|² + |γ|².
    pub fn variance(&self) -> T {
        self.mu_a + self.mu_b
    }

    /// Skellam probability mass at k, in the generic two-intensity form
    /// e^{−(μ_a+μ_b)}·(μ_a/μ_b)^{k/2}·I_{|k|}(2√(μ_a μ_b)), evaluated in log
    /// space. Degenerate zero intensities reduce to a (reflected) Poisson law.
    pub fn pmf(&self, k: i64) -> T {
        let (mu_a, mu_b) = (self.mu_a, self.mu_b);
        if mu_b == T::zero() {
            return poisson_pmf_nonneg(mu_a, k);
        }
        if mu_a == T::zero() {
            return poisson_pmf_nonneg(mu_b, -k);
        }
        let half_k = cast::<T>(k as f64) / cast(2.0);
        let log_p = -(mu_a + mu_b)
            + half_k * (mu_a.ln() - mu_b.ln())
            + log_bessel_i(k.unsigned_abs(), cast::<T>(2.0) * (mu_a * mu_b).sqrt());
        log_p.exp()
    }
}

/// Poisson mass e^{−μ}μ^k/k! for k ≥ 0, zero for negative k.
fn poisson_pmf_nonneg<T: Scalar>(mu: T, k: i64) -> T {
    if k < 0 {
        return T::zero();
    }
    if mu == T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    let kf = cast::<T>(k as f64);
    let mut log_p = -mu + kf * mu.ln();
    for j in 2..=k {
        log_p -= cast::<T>(j as f64).ln();
    }
    log_p.exp()
}

/// Output amplitudes for input amplitude α and total phase θ.
pub fn interferometer_output<T: Scalar>(alpha: Complex<T>, theta: T) -> OutputAmplitudes<T> {
    let half = cast::<T>(0.5);
    let phase = Complex::new(theta.cos(), theta.sin());
    let one = Complex::new(T::one(), T::zero());
    let i_unit = Complex::new(T::zero(), T::one());
    let beta = -(i_unit * alpha * (one - phase)) * half;
    let gamma = -(alpha * (one + phase)) * half;
    OutputAmplitudes { beta, gamma, theta }
}

/// Stirling number of the second kind S(r, m), exact.
///
/// Satisfies S(n+1, k) = k·S(n, k) + S(n, k−1) with S(0, 0) = 1 and
/// S(r, 0) = 0 for r ≥ 1. Guarded to r ≤ 64; values near the top of that
/// range exceed 64-bit (and 128-bit) integers, hence the big-integer result.
pub fn stirling2(r: u32, m: u32) -> Result<BigUint> {
    if r > MAX_STIRLING_ORDER {
        return Err(Error::Range {
            what: "r",
            max: MAX_STIRLING_ORDER,
            got: r,
        });
    }
    if m > r {
        return Err(Error::Range {
            what: "m",
            max: r,
            got: m,
        });
    }
    Ok(stirling_row(r).swap_remove(m as usize))
}

/// Row S(r, 0..=r) of the Stirling triangle.
fn stirling_row(r: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for n in 1..=r {
        let mut next = Vec::with_capacity(n as usize + 1);
        next.push(BigUint::zero());
        for k in 1..=n {
            let above = if (k as usize) < row.len() {
                &row[k as usize] * BigUint::from(k)
            } else {
                BigUint::zero()
            };
            next.push(above + &row[k as usize - 1]);
        }
        row = next;
    }
    row
}

/// Touchard polynomial T_k(x) = Σ_{m=0}^{k} S(k, m)·x^m, the k-th raw moment
/// of a Poisson variable with mean x.
pub fn touchard<T: Scalar>(k: u32, x: T) -> Result<T> {
    if k > MAX_STIRLING_ORDER {
        return Err(Error::Range {
            what: "k",
            max: MAX_STIRLING_ORDER,
            got: k,
        });
    }
    let row = stirling_row(k);
    let mut power = T::one();
    let mut sum = T::zero();
    for coeff in row {
        sum += cast::<T>(coeff.to_f64().unwrap_or(f64::INFINITY)) * power;
        power *= x;
    }
    Ok(sum)
}

/// n-th raw moment of the difference count,
/// ⟨Dⁿ⟩ = Σ_{k=0}^{n} C(n,k)(−1)^{n−k} T_k(|β|²) T_{n−k}(|γ|²).
pub fn moment_d<T: Scalar>(n: u32, params: &SkellamParams<T>) -> Result<T> {
    if n > MAX_MOMENT_ORDER {
        return Err(Error::Range {
            what: "n",
            max: MAX_MOMENT_ORDER,
            got: n,
        });
    }
    let mut sum = T::zero();
    for k in 0..=n {
        let sign = if (n - k).is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
        let weight = cast::<T>(binomial(n, k) as f64);
        sum += sign * weight * touchard(k, params.mu_a)? * touchard(n - k, params.mu_b)?;
    }
    Ok(sum)
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    let mut result = 1u128;
    for j in 0..k {
        result = result * (n - j) as u128 / (j + 1) as u128;
    }
    result
}

/// Difference-count probability mass in phase form,
/// P(k) = e^{−|α|²}·((1+sinΔθ)/(1−sinΔθ))^{k/2}·I_{|k|}(|α|² cosΔθ),
/// evaluated as exp(−|α|² + k·atanh(sinΔθ) + ln I_{|k|}(·)).
///
/// Defined for |Δθ| < π/2, where the odds ratio is regular.
pub fn skellam_pmf<T: Scalar>(k: i64, alpha_sq: T, delta_theta: T) -> Result<T> {
    validate_phase_inputs(alpha_sq, delta_theta)?;
    let log_odds_half = delta_theta.sin().atanh();
    let log_p = -alpha_sq
        + cast::<T>(k as f64) * log_odds_half
        + log_bessel_i(k.unsigned_abs(), alpha_sq * delta_theta.cos());
    Ok(log_p.exp())
}

/// Truncated counting support [mean − 20σ, mean + 20σ] with σ = √|α|², used
/// for normalization and moment sums.
pub fn truncated_support<T: Scalar>(alpha_sq: T, delta_theta: T) -> (i64, i64) {
    let mean = (alpha_sq * delta_theta.sin()).to_f64().unwrap_or(0.0);
    let width = SUPPORT_SIGMAS * alpha_sq.sqrt().to_f64().unwrap_or(0.0);
    ((mean - width).floor() as i64, (mean + width).ceil() as i64)
}

/// One exact draw of the difference count D = X_A′ − X_B′ with independent
/// Poisson counters at the phase-derived intensities.
pub fn sample_d<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    alpha_sq: T,
    delta_theta: T,
) -> Result<i64> {
    let params = SkellamParams::from_phase(alpha_sq, delta_theta)?;
    let a = sample_poisson(rng, params.mu_a.to_f64().unwrap_or(0.0));
    let b = sample_poisson(rng, params.mu_b.to_f64().unwrap_or(0.0));
    Ok(a as i64 - b as i64)
}

/// One draw from the Gaussian limit of the normalized difference,
/// D̃ ~ N(Δθ, 1/|α|²). Only valid for |α|² ≥ [`GAUSSIAN_THRESHOLD`]; smaller
/// beams must use [`sample_d`] divided by |α|².
pub fn sample_dtilde_gaussian<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    alpha_sq: T,
    delta_theta: T,
) -> Result<T> {
    if alpha_sq < cast(GAUSSIAN_THRESHOLD) {
        return Err(Error::BelowGaussianThreshold {
            alpha_sq: alpha_sq.to_f64().unwrap_or(f64::NAN),
            threshold: GAUSSIAN_THRESHOLD,
        });
    }
    Ok(delta_theta + T::standard_normal(rng) / alpha_sq.sqrt())
}

/// Exact Poisson draw; counts are integers regardless of the working scalar.
pub(crate) fn sample_poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("positive finite Poisson mean");
    let draw: f64 = dist.sample(rng);
    draw.round() as u64
}

fn validate_phase_inputs<T: Scalar>(alpha_sq: T, delta_theta: T) -> Result<()> {
    if !alpha_sq.is_finite() || alpha_sq <= T::zero() {
        return Err(Error::domain(
            "alpha_sq",
            alpha_sq.to_f64().unwrap_or(f64::NAN),
            "strictly positive",
        ));
    }
    if !delta_theta.is_finite() || delta_theta.abs() >= T::FRAC_PI_2() {
        return Err(Error::domain(
            "delta_theta",
            delta_theta.to_f64().unwrap_or(f64::NAN),
            "|delta_theta| < pi/2",
        ));
    }
    Ok(())
}
