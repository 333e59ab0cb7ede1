//! Subcommand implementations.

use std::io::Write;

use serde_json::json;
use wva_core::inference::{fisher_analytic, fisher_numeric, FisherReport};
use wva_core::photostats::skellam_pmf;
use wva_core::simulator::{
    run_trials_with, sweep_photons, sweep_postselection_with, table1, trial_rng, SimOptions,
    SweepOptions, SweepResult, TimeSemantics, TABLE1_COLS, TABLE1_ROWS,
};

use crate::config::Resolved;
use crate::output::{g17, write_json, Format, Sink};
use crate::CliError;

fn unsupported_text(format: Format) -> Result<(), CliError> {
    if format == Format::Text {
        return Err(CliError::config(
            "--format text is only available for `table1`".to_string(),
        ));
    }
    Ok(())
}

pub fn cmd_pmf(
    alpha_sq: f64,
    delta_theta: f64,
    kmin: i64,
    kmax: i64,
    format: Format,
    mut sink: Sink,
) -> Result<(), CliError> {
    unsupported_text(format)?;
    if kmin > kmax {
        return Err(CliError::config(format!(
            "empty k range: kmin {kmin} > kmax {kmax}"
        )));
    }
    let rows: Result<Vec<(i64, f64)>, _> = (kmin..=kmax)
        .map(|k| skellam_pmf(k, alpha_sq, delta_theta).map(|p| (k, p)))
        .collect();
    let rows = rows?;

    match format {
        Format::Csv => {
            writeln!(sink, "k,pmf").map_err(|e| CliError::io(e.to_string()))?;
            for (k, p) in &rows {
                writeln!(sink, "{k},{}", g17(*p)).map_err(|e| CliError::io(e.to_string()))?;
            }
        }
        Format::Json => {
            let array: Vec<_> = rows
                .iter()
                .map(|(k, p)| json!({ "k": k, "pmf": p }))
                .collect();
            write_json(&mut sink, &json!(array))?;
        }
        Format::Text => unreachable!(),
    }
    sink.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FisherMode {
    Analytic,
    Numeric,
    Both,
}

pub fn cmd_fisher(
    resolved: &Resolved,
    mode: FisherMode,
    datasets: usize,
    format: Format,
    mut sink: Sink,
) -> Result<(), CliError> {
    unsupported_text(format)?;
    let report: FisherReport<f64> = match mode {
        FisherMode::Analytic => fisher_analytic(&resolved.experiment)?,
        FisherMode::Numeric | FisherMode::Both => {
            let mut rng = trial_rng(resolved.seed, 0);
            fisher_numeric(&resolved.experiment, datasets, &mut rng)?
        }
    };

    match format {
        Format::Csv => {
            writeln!(sink, "analytic,numeric,numeric_se,crlb,regime,noise")
                .map_err(|e| CliError::io(e.to_string()))?;
            writeln!(
                sink,
                "{},{},{},{},{},{}",
                g17(report.analytic),
                report.numeric.map(g17).unwrap_or_default(),
                report.numeric_se.map(g17).unwrap_or_default(),
                g17(report.crlb),
                report.regime.label(),
                report.noise_kind.label()
            )
            .map_err(|e| CliError::io(e.to_string()))?;
        }
        Format::Json => {
            let mut fields = serde_json::Map::new();
            fields.insert("analytic".into(), json!(report.analytic));
            if let Some(numeric) = report.numeric {
                fields.insert("numeric".into(), json!(numeric));
            }
            if let Some(se) = report.numeric_se {
                fields.insert("numeric_se".into(), json!(se));
            }
            fields.insert("crlb".into(), json!(report.crlb));
            fields.insert("regime".into(), json!(report.regime.label()));
            fields.insert("noise".into(), json!(report.noise_kind.label()));
            write_json(&mut sink, &serde_json::Value::Object(fields))?;
        }
        Format::Text => unreachable!(),
    }
    sink.finish()
}

pub fn cmd_simulate(
    resolved: &Resolved,
    exact_sine: bool,
    physical_time: bool,
    format: Format,
    mut sink: Sink,
) -> Result<(), CliError> {
    unsupported_text(format)?;
    let options = SimOptions {
        exact_sine,
        time_semantics: if physical_time {
            TimeSemantics::PhysicalTime
        } else {
            TimeSemantics::IndexBased
        },
    };
    let (records, summary) = run_trials_with(
        &resolved.experiment,
        &options,
        resolved.trials,
        resolved.seed,
    )?;

    match format {
        Format::Csv => {
            writeln!(sink, "trial,n_postselected,phi_hat")
                .map_err(|e| CliError::io(e.to_string()))?;
            for r in &records {
                writeln!(sink, "{},{},{}", r.trial, r.n_postselected, g17(r.phi_hat))
                    .map_err(|e| CliError::io(e.to_string()))?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = records
                .iter()
                .map(|r| {
                    json!({
                        "trial": r.trial,
                        "n_postselected": r.n_postselected,
                        "phi_hat": r.phi_hat,
                    })
                })
                .collect();
            write_json(&mut sink, &json!(rows))?;
        }
        Format::Text => unreachable!(),
    }
    sink.finish()?;

    // Machine-readable summary on stdout, after the data stream when both
    // share it.
    let summary_json = json!({
        "mean": summary.mean_estimate,
        "var": summary.var_estimate,
        "efficiency": summary.efficiency,
        "snr": summary.snr_empirical,
        "failed": summary.failed_trials,
    });
    let mut stdout = std::io::stdout();
    write_json(&mut stdout, &summary_json)
}

fn write_sweep_result(
    result: &SweepResult<f64>,
    axis_name: &str,
    headers: &[String],
    with_numeric: bool,
    format: Format,
    mut sink: Sink,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut header = vec![axis_name.to_string()];
            header.extend(headers.iter().cloned());
            if with_numeric {
                header.push("fisher_numeric".to_string());
                header.push("se".to_string());
            }
            writeln!(sink, "{}", header.join(",")).map_err(|e| CliError::io(e.to_string()))?;
            for (i, &x) in result.axis.iter().enumerate() {
                let mut row = vec![g17(x)];
                for curve in &result.curves {
                    row.push(g17(curve.fisher_analytic[i]));
                }
                if with_numeric {
                    let numeric = result.curves[0]
                        .fisher_numeric
                        .as_ref()
                        .expect("numeric overlay requested");
                    row.push(g17(numeric[i].value));
                    row.push(g17(numeric[i].std_error));
                }
                writeln!(sink, "{}", row.join(",")).map_err(|e| CliError::io(e.to_string()))?;
            }
        }
        Format::Json => {
            let curves: Vec<_> = result
                .curves
                .iter()
                .map(|curve| {
                    json!({
                        "label": curve.label,
                        "fisher_analytic": curve.fisher_analytic,
                        "fisher_numeric": curve.fisher_numeric.as_ref().map(|v| {
                            v.iter()
                                .map(|e| json!({"value": e.value, "se": e.std_error}))
                                .collect::<Vec<_>>()
                        }),
                    })
                })
                .collect();
            write_json(&mut sink, &json!({"axis": result.axis, "curves": curves}))?;
        }
        Format::Text => unreachable!(),
    }
    sink.finish()
}

pub fn cmd_sweep_p(
    resolved: &Resolved,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    numeric_datasets: Option<usize>,
    format: Format,
    sink: Sink,
) -> Result<(), CliError> {
    unsupported_text(format)?;
    if steps == 0 || delta_min > delta_max {
        return Err(CliError::config(format!(
            "empty sweep range: delta {delta_min}..{delta_max} in {steps} steps"
        )));
    }
    let deltas: Vec<f64> = if steps == 1 {
        vec![delta_min]
    } else {
        (0..steps)
            .map(|i| delta_min + (delta_max - delta_min) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let options = SweepOptions {
        numeric_datasets,
        seed: resolved.seed,
    };
    let result = sweep_postselection_with(&resolved.experiment, &deltas, &options)?;
    write_sweep_result(
        &result,
        "x",
        &["fisher_weak".to_string(), "fisher_nops".to_string()],
        numeric_datasets.is_some(),
        format,
        sink,
    )
}

pub fn cmd_sweep_m(
    resolved: &Resolved,
    m_min: u64,
    m_max: u64,
    steps: usize,
    post_probs: &[f64],
    format: Format,
    sink: Sink,
) -> Result<(), CliError> {
    unsupported_text(format)?;
    if steps == 0 || m_min > m_max || m_min == 0 {
        return Err(CliError::config(format!(
            "empty sweep range: m {m_min}..{m_max} in {steps} steps"
        )));
    }
    if post_probs.is_empty() {
        return Err(CliError::config("no postselection probabilities".into()));
    }
    // Log-spaced photon counts, deduplicated after rounding.
    let mut m_values: Vec<u64> = if steps == 1 {
        vec![m_min]
    } else {
        let (lo, hi) = ((m_min as f64).ln(), (m_max as f64).ln());
        (0..steps)
            .map(|i| (lo + (hi - lo) * i as f64 / (steps - 1) as f64).exp().round() as u64)
            .collect()
    };
    m_values.dedup();

    let result = sweep_photons(&resolved.experiment, &m_values, post_probs)?;
    let mut headers: Vec<String> = (1..=post_probs.len())
        .map(|i| format!("fisher_p{i}"))
        .collect();
    headers.push("fisher_nops".to_string());
    write_sweep_result(&result, "m", &headers, false, format, sink)
}

pub fn cmd_table1(
    alpha_sq: f64,
    m_photons: u64,
    eta_sq: f64,
    delta: f64,
    phi: f64,
    format: Format,
    mut sink: Sink,
) -> Result<(), CliError> {
    let report = table1(alpha_sq, m_photons, eta_sq, delta, phi)?;
    match format {
        Format::Csv => {
            writeln!(sink, "noise,{}", TABLE1_COLS.join(","))
                .map_err(|e| CliError::io(e.to_string()))?;
            for (row_label, row) in TABLE1_ROWS.iter().zip(report.entries.iter()) {
                writeln!(
                    sink,
                    "{row_label},{},{},{}",
                    g17(row[0]),
                    g17(row[1]),
                    g17(row[2])
                )
                .map_err(|e| CliError::io(e.to_string()))?;
            }
        }
        Format::Json => {
            let mut rows = serde_json::Map::new();
            for (row_label, row) in TABLE1_ROWS.iter().zip(report.entries.iter()) {
                let mut cells = serde_json::Map::new();
                for (col_label, value) in TABLE1_COLS.iter().zip(row.iter()) {
                    cells.insert(col_label.to_string(), json!(value));
                }
                rows.insert(row_label.to_string(), serde_json::Value::Object(cells));
            }
            write_json(&mut sink, &serde_json::Value::Object(rows))?;
        }
        Format::Text => {
            writeln!(
                sink,
                "{:<10} {:>22} {:>22} {:>22}",
                "noise", TABLE1_COLS[0], TABLE1_COLS[1], TABLE1_COLS[2]
            )
            .map_err(|e| CliError::io(e.to_string()))?;
            for (row_label, row) in TABLE1_ROWS.iter().zip(report.entries.iter()) {
                writeln!(
                    sink,
                    "{row_label:<10} {:>22.6} {:>22.6} {:>22.6}",
                    row[0], row[1], row[2]
                )
                .map_err(|e| CliError::io(e.to_string()))?;
            }
        }
    }
    sink.finish()
}
