//! `wva` — weak-value-amplified estimation of an optomechanical coupling.
//!
//! Subcommands expose the photocount law (`pmf`), the information formulas
//! (`fisher`, `table1`, `sweep-p`, `sweep-m`) and the Monte-Carlo estimator
//! validation (`simulate`). Exit codes: 0 success, 2 configuration or
//! validation error, 3 statistically degenerate run. Diagnostics
//! (`WVA_LOG=error|warn|info|debug`) go to stderr only.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::FisherMode;
use config::{Overrides, RunConfigFile};
use output::{Format, Sink};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(wva_core::Error),
}

impl CliError {
    fn config(message: String) -> Self {
        CliError::Config(message)
    }

    fn io(message: String) -> Self {
        CliError::Io(message)
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(err) => {
                if err.is_degenerate() {
                    3
                } else {
                    2
                }
            }
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<wva_core::Error> for CliError {
    fn from(err: wva_core::Error) -> Self {
        CliError::Core(err)
    }
}

/// Estimation toolkit for weak-value-amplified optomechanical interferometry.
///
/// Parameters resolve as defaults ← --config file ← flags. Defaults:
/// phi=0.001, delta=0.1, alpha-sq=100, m-photons=1000, gamma-rate=1,
/// tau-corr=0, eta-sq=0.05, noise=colored, measurement=weak, seed=0,
/// trials=1000.
#[derive(Parser, Debug)]
#[command(name = "wva", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file: a flat JSON object with the keys phi, delta,
    /// alpha_sq, m_photons, gamma_rate, tau_corr, eta_sq, noise,
    /// measurement, seed, trials. Unknown keys are rejected.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format for the data stream.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Master seed for every random stream.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads for Monte-Carlo ensembles (0 = auto).
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    threads: usize,

    /// Write the data stream to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Coupling ratio φ = g₀/ω_m to estimate.
    #[arg(long, global = true)]
    phi: Option<f64>,

    /// Beamsplitter imbalance δ (|δ| ≤ 1/√2).
    #[arg(long, global = true)]
    delta: Option<f64>,

    /// Mean photon number |α|² of the classical beam.
    #[arg(long = "alpha-sq", global = true)]
    alpha_sq: Option<f64>,

    /// Number of injected single photons M.
    #[arg(long = "m-photons", global = true)]
    m_photons: Option<u64>,

    /// Photon injection rate Γ (1/s); sets the exponential-noise clock.
    #[arg(long = "gamma-rate", global = true)]
    gamma_rate: Option<f64>,

    /// Technical-noise correlation time τ (s).
    #[arg(long = "tau-corr", global = true)]
    tau_corr: Option<f64>,

    /// Technical-noise strength η̃².
    #[arg(long = "eta-sq", global = true)]
    eta_sq: Option<f64>,

    /// Noise model: white | colored | quantum | exponential.
    #[arg(long, global = true)]
    noise: Option<String>,

    /// Measurement mode: none | weak | strong.
    #[arg(long, global = true)]
    measurement: Option<String>,

    /// Number of Monte-Carlo trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact probability mass of the normalized difference count.
    ///
    /// CSV columns: k (count), pmf (probability, 17 significant digits).
    Pmf {
        /// Signal phase Δθ (rad), |Δθ| < π/2.
        #[arg(long = "delta-theta", default_value_t = 0.0, allow_hyphen_values = true)]
        delta_theta: f64,
        /// Smallest count in the emitted range.
        #[arg(long, allow_hyphen_values = true)]
        kmin: i64,
        /// Largest count in the emitted range.
        #[arg(long, allow_hyphen_values = true)]
        kmax: i64,
    },
    /// Fisher information of the configured (noise × measurement) cell.
    ///
    /// JSON fields: analytic, numeric, numeric_se, crlb, regime, noise.
    Fisher {
        /// Closed form only, Monte-Carlo only, or both.
        #[arg(long, value_enum, default_value_t = FisherMode::Analytic)]
        mode: FisherMode,
        /// Synthetic datasets for the Monte-Carlo estimate.
        #[arg(long, default_value_t = 10_000)]
        datasets: usize,
    },
    /// Monte-Carlo trials of the full experiment plus estimator summary.
    ///
    /// Per-trial CSV columns: trial, n_postselected, phi_hat. A JSON summary
    /// {mean, var, efficiency, snr, failed} always follows on stdout.
    Simulate {
        /// Centre the Gaussian phase samples on sin(f·φ) instead of f·φ.
        #[arg(long = "exact-sine")]
        exact_sine: bool,
        /// Decay exponential noise with injection-slot distance rather than
        /// data-index distance.
        #[arg(long = "physical-time")]
        physical_time: bool,
    },
    /// Weak-measurement information against postselection probability P = δ².
    ///
    /// CSV columns: x (probability P), fisher_weak, fisher_nops, and with
    /// --numeric additionally fisher_numeric, se.
    SweepP {
        /// Smallest imbalance δ.
        #[arg(long = "delta-min", default_value_t = 0.05)]
        delta_min: f64,
        /// Largest imbalance δ.
        #[arg(long = "delta-max", default_value_t = 0.5)]
        delta_max: f64,
        /// Number of sweep points (linear in δ).
        #[arg(long, default_value_t = 46)]
        steps: usize,
        /// Overlay a Monte-Carlo information estimate with this many
        /// datasets per point (slow).
        #[arg(long, value_name = "DATASETS")]
        numeric: Option<usize>,
    },
    /// Information against the number of injected photons M.
    ///
    /// CSV columns: m, fisher_p1, fisher_p2, …, fisher_nops — one column per
    /// entry of --post-probs (weak measurement at P = δ²), then the
    /// no-postselection reference.
    SweepM {
        /// Smallest photon number M (must keep P·M ≥ 1).
        #[arg(long = "m-min", default_value_t = 100)]
        m_min: u64,
        /// Largest photon number M.
        #[arg(long = "m-max", default_value_t = 1_000_000)]
        m_max: u64,
        /// Number of sweep points (log-spaced in M).
        #[arg(long, default_value_t = 50)]
        steps: usize,
        /// Comma-separated postselection probabilities.
        #[arg(long = "post-probs", value_delimiter = ',', default_values_t = vec![0.01, 0.03])]
        post_probs: Vec<f64>,
    },
    /// The nine closed-form information entries (noise model × measurement).
    ///
    /// Rows: white, quantum, colored; columns: no_postselection, weak,
    /// strong. The colored row is the large-|α|²M limit and the strong
    /// column sits at δ = φ/2.
    Table1,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => RunConfigFile::load(path)?,
        None => RunConfigFile::default(),
    };
    let overrides = Overrides {
        phi: cli.phi,
        delta: cli.delta,
        alpha_sq: cli.alpha_sq,
        m_photons: cli.m_photons,
        gamma_rate: cli.gamma_rate,
        tau_corr: cli.tau_corr,
        eta_sq: cli.eta_sq,
        noise: cli.noise.clone(),
        measurement: cli.measurement.clone(),
        seed: cli.seed,
        trials: cli.trials,
    };

    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }

    let sink = Sink::open(cli.out.as_deref())?;
    match cli.command {
        Command::Pmf {
            delta_theta,
            kmin,
            kmax,
        } => {
            let alpha_sq = cli.alpha_sq.unwrap_or(config::DEFAULT_ALPHA_SQ);
            commands::cmd_pmf(alpha_sq, delta_theta, kmin, kmax, cli.format, sink)
        }
        Command::Fisher { mode, datasets } => {
            let resolved = config::resolve(&file, &overrides)?;
            commands::cmd_fisher(&resolved, mode, datasets, cli.format, sink)
        }
        Command::Simulate {
            exact_sine,
            physical_time,
        } => {
            let resolved = config::resolve(&file, &overrides)?;
            commands::cmd_simulate(&resolved, exact_sine, physical_time, cli.format, sink)
        }
        Command::SweepP {
            delta_min,
            delta_max,
            steps,
            numeric,
        } => {
            let resolved = config::resolve(&file, &overrides)?;
            commands::cmd_sweep_p(
                &resolved, delta_min, delta_max, steps, numeric, cli.format, sink,
            )
        }
        Command::SweepM {
            m_min,
            m_max,
            steps,
            post_probs,
        } => {
            let resolved = config::resolve(&file, &overrides)?;
            commands::cmd_sweep_m(
                &resolved,
                m_min,
                m_max,
                steps,
                &post_probs,
                cli.format,
                sink,
            )
        }
        Command::Table1 => commands::cmd_table1(
            cli.alpha_sq.unwrap_or(config::DEFAULT_ALPHA_SQ),
            cli.m_photons.unwrap_or(config::DEFAULT_M_PHOTONS),
            cli.eta_sq.unwrap_or(config::DEFAULT_ETA_SQ),
            cli.delta.unwrap_or(config::DEFAULT_DELTA),
            cli.phi.unwrap_or(0.02),
            cli.format,
            sink,
        ),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WVA_LOG", "error")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
