//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities. Criteria 1–3 exercise the CLI surface; 4–8 run
//! the library directly.
//!
//! Reference working point: |α|² = 100, M = 1000, η̃² = 0.05, δ = 0.1,
//! φ = 0.02 (information tables) or φ = 0.001 (weak-measurement ensembles).

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wva_core::inference::{fisher_analytic, fisher_numeric, estimator_stats};
use wva_core::model::{ExperimentConfig, MeasurementMode};
use wva_core::noise::{covariance, inverse_covariance, sample_noise, NoiseKind, NoiseModel};
use wva_core::photostats::{
    interferometer_output, moment_d, skellam_pmf, truncated_support, PhaseDecomposition,
    SkellamParams,
};
use wva_core::simulator::run_trials;

fn wva(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wva"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn parse_csv(body: &str) -> Vec<Vec<f64>> {
    body.lines()
        .skip(1)
        .map(|line| {
            line.split(',')
                .filter_map(|cell| cell.parse::<f64>().ok())
                .collect()
        })
        .collect()
}

fn rel_err(got: f64, expected: f64) -> f64 {
    ((got - expected) / expected).abs()
}

fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn config(
    noise: NoiseKind,
    mode: MeasurementMode,
    phi: f64,
    delta: f64,
    alpha_sq: f64,
    m: u64,
    eta_sq: f64,
) -> ExperimentConfig<f64> {
    ExperimentConfig {
        phi,
        delta,
        alpha_sq,
        m_photons: m,
        gamma_rate: 1.0,
        tau_corr: 0.0,
        eta_sq,
        noise_regime: noise,
        measurement_mode: mode,
    }
}

#[test]
fn criterion_1_table1_reproduction() {
    let started = Instant::now();
    let output = wva(&[
        "table1", "--alpha-sq", "100", "--m-photons", "1000", "--eta-sq", "0.05", "--delta",
        "0.1", "--phi", "0.02",
    ]);
    assert!(output.status.success());
    let rows = parse_csv(&stdout_str(&output));
    assert_eq!(rows.len(), 3);

    // Independent hand evaluation of the nine entries.
    let white_base = 100.0 * 1000.0 / (1.0 + 100.0 * 0.05);
    let expected = [
        [white_base, white_base / 4.0, white_base / 8.0],
        [1e5, 1e5 / 4.0, 1e5 / 8.0],
        [
            1.0 / 0.05,
            1.0 / (4.0 * 0.1 * 0.1 * 0.05),
            1.0 / (4.0 * 0.02 * 0.02 * 0.05),
        ],
    ];
    for (row, expected_row) in rows.iter().zip(expected.iter()) {
        for (got, want) in row.iter().zip(expected_row.iter()) {
            assert!(rel_err(*got, *want) < 1e-12, "{got} vs {want}");
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 (table1 reproduction): PASS — nine entries at 1e-12, colored row {{20, 500, 12500}}, {elapsed:?}"
    );
}

#[test]
fn criterion_2_fig3_sweep_behavior() {
    let started = Instant::now();
    // Caption parameters: η̃² = 0.05, M = 1000, |α| = 10; δ grid covering
    // P = 0.01 exactly at δ = 0.1.
    let output = wva(&[
        "sweep-p",
        "--eta-sq",
        "0.05",
        "--m-photons",
        "1000",
        "--alpha-sq",
        "100",
        "--delta-min",
        "0.05",
        "--delta-max",
        "0.5",
        "--steps",
        "46",
    ]);
    assert!(output.status.success());
    let rows = parse_csv(&stdout_str(&output));
    assert_eq!(rows.len(), 46);

    let mut previous_weak = f64::INFINITY;
    let mut p01_value = None;
    for row in &rows {
        let (p, weak, no_ps) = (row[0], row[1], row[2]);
        assert!(weak < previous_weak, "weak curve not strictly decreasing");
        previous_weak = weak;
        assert!(rel_err(no_ps, 100000.0 / 5001.0) < 1e-9);
        if (p - 0.01).abs() < 1e-12 {
            p01_value = Some(weak);
        }
    }
    let p01 = p01_value.expect("P = 0.01 point on the grid");
    assert!(rel_err(p01, 25000.0 / 51.0) < 1e-9, "I(P=0.01) = {p01}");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 2 (postselection sweep): PASS — strictly decreasing, no-ps line 19.996, I(P=0.01) = {p01:.4}, {elapsed:?}"
    );
}

#[test]
fn criterion_3_fig4_saturation() {
    let started = Instant::now();
    let output = wva(&[
        "sweep-m",
        "--eta-sq",
        "0.05",
        "--alpha-sq",
        "100",
        "--delta",
        "0.1",
        "--m-min",
        "200",
        "--m-max",
        "1000000",
        "--steps",
        "40",
        "--post-probs",
        "0.01,0.03",
    ]);
    assert!(output.status.success());
    let rows = parse_csv(&stdout_str(&output));

    // Saturation: every curve nondecreasing in M.
    for cols in 1..=3 {
        let mut previous = 0.0;
        for row in &rows {
            assert!(row[cols] >= previous - 1e-9, "column {cols} decreasing");
            previous = row[cols];
        }
    }
    // Plateau ratios where |α|²Mη̃²δ² ≥ 100, i.e. M ≥ 2000 for P = 1%.
    for row in rows.iter().filter(|row| {
        100.0 * row[0] * 0.05 * 0.01 >= 100.0 && 100.0 * row[0] * 0.05 * 0.03 >= 100.0
    }) {
        let ratio_p1 = row[1] / row[3];
        let ratio_p3 = row[2] / row[3];
        assert!(rel_err(ratio_p1, 25.0) <= 0.01, "M={}: {ratio_p1}", row[0]);
        assert!(
            rel_err(ratio_p3, 25.0 / 3.0) <= 0.01,
            "M={}: {ratio_p3}",
            row[0]
        );
    }
    let last = rows.last().unwrap();
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "ACCEPTANCE 3 (photon-number sweep): PASS — plateau ratios {:.3} / {:.3} at M = {}, {elapsed:?}",
        last[1] / last[3],
        last[2] / last[3],
        last[0]
    );
}

#[test]
fn criterion_4_fisher_self_consistency() {
    let started = Instant::now();
    // Six (noise × measurement) cells; strong sits at δ = φ/2.
    let cells: Vec<(&str, ExperimentConfig<f64>)> = [NoiseKind::White, NoiseKind::Colored]
        .into_iter()
        .flat_map(|noise| {
            [
                (
                    "no-postselection",
                    config(noise, MeasurementMode::NoPostselection, 0.02, 0.1, 100.0, 1000, 0.05),
                ),
                (
                    "weak",
                    config(noise, MeasurementMode::WeakPostselection, 0.001, 0.1, 100.0, 1000, 0.05),
                ),
                (
                    "strong",
                    config(noise, MeasurementMode::StrongPostselection, 0.1, 0.05, 100.0, 10_000, 0.05),
                ),
            ]
        })
        .collect();

    for (index, (label, cfg)) in cells.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + index as u64);
        let report = fisher_numeric(cfg, 10_000, &mut rng).unwrap();
        let ratio = report.numeric.unwrap() / report.analytic;
        assert!(
            (0.95..=1.05).contains(&ratio),
            "{:?}/{label}: ratio {ratio}",
            cfg.noise_regime
        );
        println!(
            "  cell {:?}/{label}: numeric/analytic = {ratio:.4}",
            cfg.noise_regime
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("ACCEPTANCE 4 (Fisher self-consistency): PASS — six cells within [0.95, 1.05], {elapsed:?}");
}

#[test]
fn criterion_5_estimator_efficiency_and_bias() {
    let started = Instant::now();
    let ensembles = [
        (
            "white",
            config(
                NoiseKind::White,
                MeasurementMode::WeakPostselection,
                0.001,
                0.1,
                100.0,
                10_000,
                0.05,
            ),
        ),
        (
            "colored",
            config(
                NoiseKind::Colored,
                MeasurementMode::WeakPostselection,
                0.001,
                0.1,
                100.0,
                1000,
                0.05,
            ),
        ),
    ];
    for (label, cfg) in &ensembles {
        let summary = run_trials(cfg, 10_000, 500).unwrap();
        assert!(
            (0.9..=1.1).contains(&summary.efficiency),
            "{label}: efficiency {}",
            summary.efficiency
        );
        let se = (summary.var_estimate / 10_000.0).sqrt();
        assert!(
            (summary.mean_estimate - cfg.phi).abs() <= 3.0 * se,
            "{label}: mean {} vs {} (se {se})",
            summary.mean_estimate,
            cfg.phi
        );
        println!(
            "  {label}: efficiency {:.4}, bias {:.2e} (3se = {:.2e})",
            summary.efficiency,
            summary.mean_estimate - cfg.phi,
            3.0 * se
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("ACCEPTANCE 5 (estimator efficiency/unbiasedness): PASS — Var·I in [0.9, 1.1], bias within 3 SE, {elapsed:?}");
}

#[test]
fn criterion_6_snr_claim() {
    let started = Instant::now();
    // φ = 1e-3, η̃ = 1e-4, δ = 0.05 (|N_w| ≈ 10) in the saturated
    // colored-weak regime: |α|²Mη̃²δ² = 250.
    let cfg = config(
        NoiseKind::Colored,
        MeasurementMode::WeakPostselection,
        1e-3,
        0.05,
        1e8,
        100_000,
        1e-8,
    );
    let stats = estimator_stats(&cfg).unwrap();
    assert!(rel_err(stats.snr, 100.0) <= 0.01, "analytic SNR {}", stats.snr);

    let summary = run_trials(&cfg, 10_000, 600).unwrap();
    let empirical = summary.mean_estimate / summary.var_estimate.sqrt();
    assert!(
        rel_err(empirical, stats.snr) <= 0.10,
        "empirical {empirical} vs analytic {}",
        stats.snr
    );
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 6 (SNR = 100 claim): PASS — analytic {:.2}, empirical {empirical:.2}, {elapsed:?}",
        stats.snr
    );
}

#[test]
fn criterion_7_photocount_oracles() {
    let started = Instant::now();
    let (alpha_sq, dtheta) = (100.0f64, 0.01f64);

    // Normalization to 1e-10 on the truncated support.
    let (lo, hi) = truncated_support(alpha_sq, dtheta);
    let total = neumaier((lo..=hi).map(|k| skellam_pmf(k, alpha_sq, dtheta).unwrap()));
    assert!((total - 1.0).abs() < 1e-10, "sum {total}");

    // Mean |α|²·sinΔθ and variance |α|² to 1e-8.
    let mean = neumaier((lo..=hi).map(|k| k as f64 * skellam_pmf(k, alpha_sq, dtheta).unwrap()));
    let second = neumaier(
        (lo..=hi).map(|k| (k as f64).powi(2) * skellam_pmf(k, alpha_sq, dtheta).unwrap()),
    );
    assert!((mean - alpha_sq * dtheta.sin()).abs() < 1e-8);
    assert!((second - mean * mean - alpha_sq).abs() < 1e-8);

    // Touchard-formula moments n ≤ 4 against brute-force PMF sums for
    // μ_a + μ_b ≤ 4.
    for &(mu_a, mu_b) in &[(1.5f64, 0.5f64), (0.5, 0.5), (2.0, 2.0), (3.5, 0.25)] {
        let params = SkellamParams::new(mu_a, mu_b).unwrap();
        for n in 0..=4u32 {
            let brute = neumaier((-80i64..=80).map(|k| (k as f64).powi(n as i32) * params.pmf(k)));
            assert!(
                (moment_d(n, &params).unwrap() - brute).abs() < 1e-8,
                "moment {n} at ({mu_a},{mu_b})"
            );
        }
    }

    // Amplitude-form vs phase-form agreement to 1e-12 relative on the bulk.
    let alpha = wva_core::num_complex::Complex::new(alpha_sq.sqrt(), 0.0);
    let ports = interferometer_output(alpha, PhaseDecomposition::new(dtheta).total());
    let params = SkellamParams::new(ports.beta.norm_sqr(), ports.gamma.norm_sqr()).unwrap();
    for k in -99i64..=101 {
        let rel = rel_err(params.pmf(k), skellam_pmf(k, alpha_sq, dtheta).unwrap());
        assert!(rel < 1e-12, "k={k}: rel {rel:.2e}");
    }

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("ACCEPTANCE 7 (photocount oracle suite): PASS — normalization 1e-10, moments 1e-8, route agreement 1e-12, {elapsed:?}");
}

#[test]
fn criterion_8_noise_covariance_suite() {
    let started = Instant::now();

    // C·C⁻¹ = I entrywise to 1e-10 for N ≤ 200, all kinds.
    let models = [
        NoiseModel::white(0.05f64, 100.0).unwrap(),
        NoiseModel::colored(0.05f64, 100.0).unwrap(),
        NoiseModel::purely_quantum(100.0f64).unwrap(),
        NoiseModel::exponential(0.05f64, 100.0, 0.6).unwrap(),
    ];
    for model in &models {
        for n in [1usize, 7, 50, 200] {
            let c = covariance(n, model);
            let inv = inverse_covariance(n, model).unwrap();
            let product = c.matmul(&inv);
            for i in 0..n {
                for j in 0..n {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (product.get(i, j) - expected).abs() < 1e-10,
                        "{:?} n={n}",
                        model.kind
                    );
                }
            }
        }
    }

    // AR(1) empirical covariance within 5e-3 over 10⁵ paths.
    let eta_sq = 0.05f64;
    let rho = (-0.5f64).exp();
    let exp_model = NoiseModel::exponential(eta_sq, 100.0, rho).unwrap();
    let paths = 100_000usize;
    let len = 11usize;
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    let mut cross = vec![vec![0.0f64; len]; len];
    for _ in 0..paths {
        let path = sample_noise(&mut rng, len, &exp_model);
        for i in 0..len {
            for j in 0..len {
                cross[i][j] += path[i] * path[j];
            }
        }
    }
    for i in 0..len {
        for j in 0..len {
            let empirical = cross[i][j] / paths as f64;
            let expected = eta_sq * rho.powi((i as i32 - j as i32).abs());
            assert!((empirical - expected).abs() < 5e-3, "cov({i},{j})");
        }
    }

    // f²·ΣC⁻¹ reproduces the closed information forms to 1e-10.
    for (noise, mode, phi, delta, m) in [
        (NoiseKind::White, MeasurementMode::WeakPostselection, 0.001, 0.1, 1000u64),
        (NoiseKind::White, MeasurementMode::NoPostselection, 0.001, 0.1, 500),
        (NoiseKind::Colored, MeasurementMode::WeakPostselection, 0.001, 0.1, 1000),
        (NoiseKind::Colored, MeasurementMode::NoPostselection, 0.001, 0.1, 500),
    ] {
        let cfg = config(noise, mode, phi, delta, 100.0, m, 0.05);
        let f = cfg.calibration().unwrap().amp_factor;
        let n = cfg.expected_data_count().unwrap() as usize;
        let total = inverse_covariance(n, &NoiseModel::from_config(&cfg).unwrap())
            .unwrap()
            .total();
        let identity = f * f * total;
        let closed = fisher_analytic(&cfg).unwrap().analytic;
        assert!(
            rel_err(identity, closed) < 1e-10,
            "{noise:?}/{mode:?}: {identity} vs {closed}"
        );
    }

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("ACCEPTANCE 8 (noise/covariance suite): PASS — inverse identity 1e-10 (N ≤ 200), AR(1) covariance 5e-3, information identity 1e-10, {elapsed:?}");
}
