//! End-to-end Monte-Carlo of the two-interferometer experiment and the
//! parameter sweeps behind the information tables and saturation curves.
//!
//! One experiment injects M photons; each postselection triggers a
//! phase measurement producing a normalized difference count, onto which a
//! technical-noise path is overlaid. Repeated experiments validate the
//! maximum-likelihood estimator against its closed-form information.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inference::{fisher_analytic, fisher_numeric, mle_estimate, DataSet};
use crate::model::{
    classify_regime, ExperimentConfig, MeasurementMode, PostselectionRegime,
    WEAK_RATIO_THRESHOLD,
};
use crate::noise::{sample_noise, NoiseKind, NoiseModel};
use crate::photostats::{sample_d, sample_dtilde_gaussian, GAUSSIAN_THRESHOLD};
use crate::scalar::{cast, neumaier_sum, Scalar};
use rand::SeedableRng;

/// Which index distance the exponential noise correlation decays with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeSemantics {
    /// Correlation decays with the distance between postselected data
    /// indices (the default).
    IndexBased,
    /// Correlation decays with the distance between injection slots, so
    /// discarded photons still advance the noise clock.
    PhysicalTime,
}

/// Simulation switches. Defaults reproduce the linearized data law
/// (mean Δθ = f·φ) with index-based noise correlations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// Draw the Gaussian phase samples around sin(f·φ) instead of f·φ. The
    /// exact Poisson-difference sampler used below the Gaussian threshold
    /// carries the sine inherently.
    pub exact_sine: bool,
    pub time_semantics: TimeSemantics,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            exact_sine: false,
            time_semantics: TimeSemantics::IndexBased,
        }
    }
}

/// Runs one experiment with default options.
pub fn run_experiment<T: Scalar, R: Rng + ?Sized>(
    config: &ExperimentConfig<T>,
    rng: &mut R,
) -> Result<DataSet<T>> {
    run_experiment_with(config, &SimOptions::default(), rng)
}

/// Runs one experiment: postselection over M injected photons, one phase
/// sample per success, technical noise overlaid across the kept events.
pub fn run_experiment_with<T: Scalar, R: Rng + ?Sized>(
    config: &ExperimentConfig<T>,
    options: &SimOptions,
    rng: &mut R,
) -> Result<DataSet<T>> {
    config.validate()?;
    let keep_prob = config.keep_probability()?.to_f64().unwrap_or(f64::NAN);
    let f = config.calibration()?.amp_factor;
    let delta_theta = f * config.phi;

    let track_slots = options.time_semantics == TimeSemantics::PhysicalTime
        && config.noise_regime == NoiseKind::Exponential;

    // Postselection. The kept count is Binomial(M, P); per-photon Bernoulli
    // draws are only needed when slot positions matter for the noise clock.
    let slots: Option<Vec<u64>> = if track_slots {
        let kept: Vec<u64> = (0..config.m_photons)
            .filter(|_| rng.random_bool(keep_prob))
            .collect();
        Some(kept)
    } else {
        None
    };
    let n = match &slots {
        Some(kept) => kept.len(),
        None => {
            if config.measurement_mode == MeasurementMode::NoPostselection {
                config.m_photons as usize
            } else {
                let binomial = Binomial::new(config.m_photons, keep_prob)
                    .expect("validated postselection probability");
                binomial.sample(rng) as usize
            }
        }
    };
    if n == 0 {
        return Err(Error::ZeroPostselections);
    }

    // Phase samples: Gaussian limit above the threshold, exact
    // Poisson-difference law below it.
    let gaussian_mean = if options.exact_sine {
        delta_theta.sin()
    } else {
        delta_theta
    };
    let use_gaussian = config.alpha_sq >= cast(GAUSSIAN_THRESHOLD);
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let dtilde = if use_gaussian {
            sample_dtilde_gaussian(rng, config.alpha_sq, gaussian_mean)?
        } else {
            cast::<T>(sample_d(rng, config.alpha_sq, delta_theta)? as f64) / config.alpha_sq
        };
        samples.push(dtilde);
    }

    // Technical noise across the kept events.
    let model = NoiseModel::from_config(config)?;
    let noise = match &slots {
        Some(kept) => sample_noise_at_slots(rng, kept, &model),
        None => sample_noise(rng, n, &model),
    };
    for (s, eta) in samples.iter_mut().zip(&noise) {
        *s += *eta;
    }

    DataSet::new(samples, config.clone())
}

/// Stationary AR(1) noise evaluated only at the kept injection slots. A gap
/// of g slots decays the state by ρ^g and reinjects variance
/// η̃²(1 − ρ^{2g}), which reproduces the slot-distance covariance exactly.
fn sample_noise_at_slots<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    slots: &[u64],
    model: &NoiseModel<T>,
) -> Vec<T> {
    let eta = model.effective_eta_sq().sqrt();
    let mut path = Vec::with_capacity(slots.len());
    let mut previous_slot = 0u64;
    let mut state = T::zero();
    for (index, &slot) in slots.iter().enumerate() {
        state = if index == 0 {
            eta * T::standard_normal(rng)
        } else {
            let gap = (slot - previous_slot) as i32;
            let decay = model.rho.powi(gap);
            decay * state
                + eta * (T::one() - decay * decay).sqrt() * T::standard_normal(rng)
        };
        previous_slot = slot;
        path.push(state);
    }
    path
}

/// Per-trial estimation record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord<T> {
    pub trial: u64,
    pub n_postselected: usize,
    pub phi_hat: T,
}

/// Aggregate over repeated experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSummary<T> {
    /// Requested number of trials.
    pub n_trials: usize,
    pub mean_estimate: T,
    /// Unbiased sample variance of the estimates.
    pub var_estimate: T,
    /// Var(φ̂)·I_analytic; 1 at the Cramér–Rao bound.
    pub efficiency: T,
    /// mean/√var over the trial estimates.
    pub snr_empirical: T,
    /// Average realized postselected count.
    pub mean_postselected: T,
    /// Trials dropped for having zero postselections.
    pub failed_trials: usize,
}

/// Independent per-trial stream: one fixed master seed, the trial index
/// selecting the counter-mode stream. Reproducible regardless of execution
/// order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `n_trials` independent experiments and summarizes the estimator.
pub fn run_trials<T: Scalar>(
    config: &ExperimentConfig<T>,
    n_trials: usize,
    seed: u64,
) -> Result<TrialSummary<T>> {
    run_trials_with(config, &SimOptions::default(), n_trials, seed).map(|(_, summary)| summary)
}

/// As [`run_trials`], also returning the per-trial records (successful trials
/// only, in trial order).
pub fn run_trials_with<T: Scalar>(
    config: &ExperimentConfig<T>,
    options: &SimOptions,
    n_trials: usize,
    seed: u64,
) -> Result<(Vec<TrialRecord<T>>, TrialSummary<T>)> {
    if n_trials < 2 {
        return Err(Error::domain(
            "n_trials",
            n_trials as f64,
            "n_trials >= 2",
        ));
    }
    config.validate()?;
    let info = fisher_analytic(config)?.analytic;

    let outcomes: Vec<Result<TrialRecord<T>>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            match run_experiment_with(config, options, &mut rng) {
                Ok(data) => Ok(TrialRecord {
                    trial,
                    n_postselected: data.len(),
                    phi_hat: mle_estimate(&data)?,
                }),
                Err(err) => Err(err),
            }
        })
        .collect();

    let mut records = Vec::with_capacity(n_trials);
    let mut failed = 0usize;
    for outcome in outcomes {
        match outcome {
            Ok(record) => records.push(record),
            Err(Error::ZeroPostselections) => failed += 1,
            Err(other) => return Err(other),
        }
    }
    if records.is_empty() {
        return Err(Error::AllTrialsFailed);
    }

    let count = cast::<T>(records.len() as f64);
    let mean = neumaier_sum(records.iter().map(|r| r.phi_hat)) / count;
    let var = if records.len() > 1 {
        neumaier_sum(records.iter().map(|r| {
            let d = r.phi_hat - mean;
            d * d
        })) / cast::<T>((records.len() - 1) as f64)
    } else {
        log::warn!("single successful trial; variance is undefined, reporting 0");
        T::zero()
    };
    let mean_postselected =
        neumaier_sum(records.iter().map(|r| cast::<T>(r.n_postselected as f64))) / count;

    let summary = TrialSummary {
        n_trials,
        mean_estimate: mean,
        var_estimate: var,
        efficiency: var * info,
        snr_empirical: mean / var.sqrt(),
        mean_postselected,
        failed_trials: failed,
    };
    Ok((records, summary))
}

/// Monte-Carlo value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate<T> {
    pub value: T,
    pub std_error: T,
}

/// One labeled curve of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve<T> {
    pub label: String,
    pub fisher_analytic: Vec<T>,
    pub fisher_numeric: Option<Vec<MonteCarloEstimate<T>>>,
}

/// Axis plus the curves evaluated over it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub axis: Vec<T>,
    pub curves: Vec<SweepCurve<T>>,
}

/// Monte-Carlo overlay configuration for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    /// Datasets per sweep point; `None` keeps sweeps purely analytic.
    pub numeric_datasets: Option<usize>,
    pub seed: u64,
}

/// Information against postselection probability P = δ², weak measurement,
/// with the constant no-postselection curve as reference.
pub fn sweep_postselection<T: Scalar>(
    base: &ExperimentConfig<T>,
    delta_values: &[T],
) -> Result<SweepResult<T>> {
    sweep_postselection_with(base, delta_values, &SweepOptions::default())
}

pub fn sweep_postselection_with<T: Scalar>(
    base: &ExperimentConfig<T>,
    delta_values: &[T],
    options: &SweepOptions,
) -> Result<SweepResult<T>> {
    if delta_values.is_empty() {
        return Err(Error::EmptyRange {
            what: "delta_values",
        });
    }
    base.validate()?;

    let mut axis = Vec::with_capacity(delta_values.len());
    let mut weak = Vec::with_capacity(delta_values.len());
    let mut weak_numeric = options.numeric_datasets.map(|_| Vec::new());

    for (index, &delta) in delta_values.iter().enumerate() {
        if classify_regime(delta, base.phi, cast(WEAK_RATIO_THRESHOLD))
            != PostselectionRegime::Weak
        {
            log::warn!(
                "delta = {delta} leaves the weak regime for phi = {}",
                base.phi
            );
        }
        let mut config = base.clone();
        config.delta = delta;
        config.measurement_mode = MeasurementMode::WeakPostselection;
        let point = fisher_analytic(&config)?;
        axis.push(config.calibration()?.prob);
        weak.push(point.analytic);
        if let (Some(numeric), Some(n_datasets)) =
            (weak_numeric.as_mut(), options.numeric_datasets)
        {
            let mut rng = trial_rng(options.seed, index as u64);
            let report = fisher_numeric(&config, n_datasets, &mut rng)?;
            numeric.push(MonteCarloEstimate {
                value: report.numeric.unwrap(),
                std_error: report.numeric_se.unwrap(),
            });
        }
    }

    let mut no_ps_config = base.clone();
    no_ps_config.measurement_mode = MeasurementMode::NoPostselection;
    let reference = fisher_analytic(&no_ps_config)?.analytic;

    Ok(SweepResult {
        axis,
        curves: vec![
            SweepCurve {
                label: "weak".to_string(),
                fisher_analytic: weak,
                fisher_numeric: weak_numeric,
            },
            SweepCurve {
                label: "no_postselection".to_string(),
                fisher_analytic: vec![reference; delta_values.len()],
                fisher_numeric: None,
            },
        ],
    })
}

/// Information against the number of injected photons M, one weak curve per
/// postselection probability plus the no-postselection curve.
pub fn sweep_photons<T: Scalar>(
    base: &ExperimentConfig<T>,
    m_values: &[u64],
    post_probs: &[T],
) -> Result<SweepResult<T>> {
    if m_values.is_empty() {
        return Err(Error::EmptyRange { what: "m_values" });
    }
    if post_probs.is_empty() {
        return Err(Error::EmptyRange { what: "post_probs" });
    }
    base.validate()?;

    let axis: Vec<T> = m_values.iter().map(|&m| cast(m as f64)).collect();
    let mut curves = Vec::with_capacity(post_probs.len() + 1);
    for &p in post_probs {
        if p <= T::zero() || p > T::one() {
            return Err(Error::domain(
                "post_prob",
                p.to_f64().unwrap_or(f64::NAN),
                "0 < P <= 1",
            ));
        }
        let delta = p.sqrt();
        let mut values = Vec::with_capacity(m_values.len());
        for &m in m_values {
            let mut config = base.clone();
            config.delta = delta;
            config.m_photons = m;
            config.measurement_mode = MeasurementMode::WeakPostselection;
            values.push(fisher_analytic(&config)?.analytic);
        }
        curves.push(SweepCurve {
            label: format!("weak_p{}", p),
            fisher_analytic: values,
            fisher_numeric: None,
        });
    }

    let mut no_ps = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let mut config = base.clone();
        config.m_photons = m;
        config.measurement_mode = MeasurementMode::NoPostselection;
        no_ps.push(fisher_analytic(&config)?.analytic);
    }
    curves.push(SweepCurve {
        label: "no_postselection".to_string(),
        fisher_analytic: no_ps,
        fisher_numeric: None,
    });

    Ok(SweepResult { axis, curves })
}

/// The nine closed-form information entries: rows white / purely quantum /
/// colored, columns no-postselection / weak / strong. The colored row is the
/// large-|α|²M limit; the strong column sits at the δ = φ/2 working point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Report<T> {
    pub entries: [[T; 3]; 3],
}

pub const TABLE1_ROWS: [&str; 3] = ["white", "quantum", "colored"];
pub const TABLE1_COLS: [&str; 3] = ["no_postselection", "weak", "strong"];

pub fn table1<T: Scalar>(
    alpha_sq: T,
    m_photons: u64,
    eta_sq: T,
    delta_weak: T,
    phi: T,
) -> Result<Table1Report<T>> {
    for (what, value) in [
        ("alpha_sq", alpha_sq),
        ("eta_sq", eta_sq),
        ("phi", phi),
    ] {
        if !value.is_finite() || value <= T::zero() {
            return Err(Error::domain(
                what,
                value.to_f64().unwrap_or(f64::NAN),
                "strictly positive",
            ));
        }
    }
    if delta_weak == T::zero() || delta_weak.abs() > T::FRAC_1_SQRT_2() {
        return Err(Error::domain(
            "delta",
            delta_weak.to_f64().unwrap_or(f64::NAN),
            "0 < |delta| <= 1/sqrt(2)",
        ));
    }
    if m_photons < 1 {
        return Err(Error::domain("m_photons", 0.0, "m_photons >= 1"));
    }

    let four = cast::<T>(4.0);
    let eight = cast::<T>(8.0);
    let m_t = cast::<T>(m_photons as f64);
    let resources = alpha_sq * m_t;
    let white_base = resources / (T::one() + alpha_sq * eta_sq);
    let white = [white_base, white_base / four, white_base / eight];
    let quantum = [resources, resources / four, resources / eight];
    let colored = [
        eta_sq.recip(),
        (four * delta_weak * delta_weak * eta_sq).recip(),
        (four * phi * phi * eta_sq).recip(),
    ];
    Ok(Table1Report {
        entries: [white, quantum, colored],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn fig3_config() -> ExperimentConfig<f64> {
        ExperimentConfig {
            phi: 0.001,
            delta: 0.1,
            alpha_sq: 100.0,
            m_photons: 1000,
            gamma_rate: 1.0,
            tau_corr: 0.0,
            eta_sq: 0.05,
            noise_regime: NoiseKind::Colored,
            measurement_mode: MeasurementMode::WeakPostselection,
        }
    }

    #[test]
    fn no_postselection_keeps_every_photon() {
        let mut config = fig3_config();
        config.measurement_mode = MeasurementMode::NoPostselection;
        config.m_photons = 257;
        let mut rng = trial_rng(0, 0);
        let data = run_experiment(&config, &mut rng).unwrap();
        assert_eq!(data.len(), 257);
    }

    #[test]
    fn realized_count_tracks_binomial_mean() {
        let config = fig3_config();
        let mut rng = trial_rng(1, 0);
        let mut total = 0usize;
        let runs = 400;
        for _ in 0..runs {
            total += run_experiment(&config, &mut rng).unwrap().len();
        }
        let mean = total as f64 / runs as f64;
        // Binomial(1000, ~0.01): SE of the mean over 400 runs ≈ 0.157.
        close(mean, 10.0, 3.0 * (10.0f64 * 0.99 / runs as f64).sqrt());
    }

    #[test]
    fn per_sample_variance_is_quantum_limited() {
        let mut config = fig3_config();
        config.eta_sq = 0.0;
        config.measurement_mode = MeasurementMode::NoPostselection;
        config.m_photons = 50_000;
        let mut rng = trial_rng(2, 0);
        let data = run_experiment(&config, &mut rng).unwrap();
        let n = data.len() as f64;
        let mean: f64 = data.samples().iter().sum::<f64>() / n;
        let var: f64 =
            data.samples().iter().map(|&s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0);
        assert!((var / 0.01 - 1.0).abs() < 0.05, "var = {var}");
    }

    #[test]
    fn exact_sampler_used_below_threshold() {
        let mut config = fig3_config();
        config.alpha_sq = 9.0;
        config.measurement_mode = MeasurementMode::NoPostselection;
        config.m_photons = 2000;
        let mut rng = trial_rng(3, 0);
        let data = run_experiment(&config, &mut rng).unwrap();
        // Samples live on the 1/9 lattice shifted by the noise path; with
        // colored noise the shared offset preserves lattice spacing.
        let first = data.samples()[0];
        let on_lattice = data
            .samples()
            .iter()
            .all(|&s| ((s - first) * 9.0 - ((s - first) * 9.0).round()).abs() < 1e-9);
        assert!(on_lattice);
    }

    #[test]
    fn trials_are_deterministic_per_seed() {
        let config = fig3_config();
        let (records_a, summary_a) = run_trials_with(&config, &SimOptions::default(), 64, 11)
            .unwrap();
        let (records_b, summary_b) = run_trials_with(&config, &SimOptions::default(), 64, 11)
            .unwrap();
        assert_eq!(records_a, records_b);
        assert_eq!(summary_a, summary_b);

        let (_, summary_c) = run_trials_with(&config, &SimOptions::default(), 64, 12).unwrap();
        assert_ne!(summary_a.mean_estimate, summary_c.mean_estimate);
    }

    #[test]
    fn trial_streams_are_independent_of_order() {
        let config = fig3_config();
        let mut direct = trial_rng(7, 3);
        let expected = run_experiment(&config, &mut direct).unwrap();
        let (records, _) = run_trials_with(&config, &SimOptions::default(), 8, 7).unwrap();
        let record = records.iter().find(|r| r.trial == 3).unwrap();
        assert_eq!(record.n_postselected, expected.len());
        close(
            record.phi_hat,
            mle_estimate(&expected).unwrap(),
            f64::EPSILON,
        );
    }

    #[test]
    fn zero_postselection_trials_are_counted() {
        let mut config = fig3_config();
        config.delta = 0.03;
        config.m_photons = 1200; // P·M ≈ 1.08, frequent empty runs
        let (records, summary) =
            run_trials_with(&config, &SimOptions::default(), 200, 5).unwrap();
        assert!(summary.failed_trials > 0);
        assert_eq!(records.len() + summary.failed_trials, 200);
    }

    #[test]
    fn all_trials_failed_error() {
        // P·M ≈ 1.05 passes the degeneracy guard but each trial still fails
        // with probability ≈ 0.35; some seed in range has both trials empty.
        let mut config = fig3_config();
        config.delta = 0.0324;
        config.m_photons = 1000;
        let hit = (0..100).any(|seed| {
            matches!(
                run_trials_with(&config, &SimOptions::default(), 2, seed),
                Err(Error::AllTrialsFailed)
            )
        });
        assert!(hit, "no seed produced an all-failed pair of trials");
    }

    #[test]
    fn sweep_postselection_reference_points() {
        let result = sweep_postselection(
            &fig3_config(),
            &[0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5],
        )
        .unwrap();
        assert_eq!(result.curves.len(), 2);
        let weak = &result.curves[0];
        let no_ps = &result.curves[1];

        // P = 0.01 entry sits at index 1.
        close(result.axis[1], 0.01, 1e-15);
        close(weak.fisher_analytic[1], 25000.0 / 51.0, 1e-9);
        close(weak.fisher_analytic[3], 25000.0 / 201.0, 1e-9);
        for value in &no_ps.fisher_analytic {
            close(*value, 100000.0 / 5001.0, 1e-9);
        }
        // Strictly decreasing in P.
        for pair in weak.fisher_analytic.windows(2) {
            assert!(pair[0] > pair[1]);
        }
    }

    #[test]
    fn sweep_photons_saturates() {
        let base = fig3_config();
        let m_values: Vec<u64> = vec![200, 1000, 5000, 20_000, 100_000, 400_000];
        let result = sweep_photons(&base, &m_values, &[0.01, 0.03]).unwrap();
        let p1 = &result.curves[0].fisher_analytic;
        let p3 = &result.curves[1].fisher_analytic;
        let no_ps = &result.curves[2].fisher_analytic;

        // Plateaus: 1/(4·P·η̃²) and 1/η̃².
        assert!((p1.last().unwrap() / 500.0 - 1.0).abs() < 0.01);
        assert!((p3.last().unwrap() / (1.0 / 0.006) - 1.0).abs() < 0.01);
        assert!((no_ps.last().unwrap() / 20.0 - 1.0).abs() < 0.01);

        // Nondecreasing in M.
        for curve in &result.curves {
            for pair in curve.fisher_analytic.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-9);
            }
        }
    }

    #[test]
    fn sweep_photons_half_saturation() {
        // x = |α|²Mη̃²δ² = 1 at M = 100 for α² = 100, η̃² = 0.01, δ = 0.1,
        // where P·M = 1 exactly; the curve sits at half its plateau.
        let mut base = fig3_config();
        base.eta_sq = 0.01;
        let result = sweep_photons(&base, &[100], &[0.01]).unwrap();
        let plateau = 1.0 / (4.0 * 0.01 * 0.01);
        close(result.curves[0].fisher_analytic[0], plateau / 2.0, 1e-9);
    }

    #[test]
    fn sweep_rejects_empty_ranges() {
        let base = fig3_config();
        assert!(matches!(
            sweep_postselection(&base, &[]),
            Err(Error::EmptyRange { .. })
        ));
        assert!(matches!(
            sweep_photons(&base, &[], &[0.01]),
            Err(Error::EmptyRange { .. })
        ));
        assert!(matches!(
            sweep_photons(&base, &[1000], &[]),
            Err(Error::EmptyRange { .. })
        ));
    }

    #[test]
    fn table1_reference_entries() {
        let report = table1(100.0f64, 1000, 0.05, 0.1, 0.02).unwrap();
        let white_base = 100.0 * 1000.0 / 6.0;
        close(report.entries[0][0], white_base, 1e-9);
        close(report.entries[0][1], white_base / 4.0, 1e-9);
        close(report.entries[0][2], white_base / 8.0, 1e-9);
        close(report.entries[1][0], 1e5, 1e-9);
        close(report.entries[1][1], 2.5e4, 1e-9);
        close(report.entries[1][2], 1.25e4, 1e-9);
        close(report.entries[2][0], 20.0, 1e-12);
        close(report.entries[2][1], 500.0, 1e-9);
        close(report.entries[2][2], 1.0 / (4.0 * 0.0004 * 0.05), 1e-9);
    }

    #[test]
    fn table1_validates_inputs() {
        assert!(table1(100.0f64, 1000, 0.0, 0.1, 0.02).is_err());
        assert!(table1(100.0f64, 1000, 0.05, 0.0, 0.02).is_err());
        assert!(table1(100.0f64, 1000, 0.05, 0.1, 0.0).is_err());
    }

    #[test]
    fn neumaier_handles_cancellation() {
        let values = [1e16, 1.0, -1e16];
        assert_eq!(neumaier_sum(values.iter().copied()), 1.0);
    }

    #[test]
    fn physical_time_noise_skips_with_slots() {
        let mut config = fig3_config();
        config.noise_regime = NoiseKind::Exponential;
        config.gamma_rate = 1.0;
        config.tau_corr = 2.0;
        let options = SimOptions {
            exact_sine: false,
            time_semantics: TimeSemantics::PhysicalTime,
        };
        let mut rng = trial_rng(21, 0);
        let data = run_experiment_with(&config, &options, &mut rng).unwrap();
        assert!(!data.is_empty());
    }

    #[test]
    fn slot_skip_sampling_reproduces_slot_distance_covariance() {
        // Gap-skipped AR(1) draws at slots {0, 3, 5, 12} must correlate as
        // η̃²ρ^{slot distance}, not as ρ^{index distance}.
        let eta_sq = 0.2f64;
        let rho = 0.8f64;
        let model = NoiseModel::exponential(eta_sq, 100.0, rho).unwrap();
        let slots = [0u64, 3, 5, 12];
        let mut rng = trial_rng(22, 0);
        let paths = 200_000usize;
        let mut cross = [[0.0f64; 4]; 4];
        for _ in 0..paths {
            let path = sample_noise_at_slots(&mut rng, &slots, &model);
            for i in 0..4 {
                for j in 0..4 {
                    cross[i][j] += path[i] * path[j];
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let empirical = cross[i][j] / paths as f64;
                let gap = slots[i].abs_diff(slots[j]) as i32;
                let expected = eta_sq * rho.powi(gap);
                assert!(
                    (empirical - expected).abs() < 5e-3,
                    "slots ({},{}): {empirical} vs {expected}",
                    slots[i],
                    slots[j]
                );
            }
        }
    }
}
