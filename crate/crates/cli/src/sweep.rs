use anyhow::{Context, Result};
use bcrsp::noise::compare_paper_vs_exact;
use serde::Serialize;

use crate::{csv_string, json_string, Config, Format, Report};

#[derive(Debug, Serialize)]
struct SweepRow {
    gamma: f64,
    #[serde(rename = "exact_fidelity_A1")]
    exact_fidelity_a1: f64,
    #[serde(rename = "exact_fidelity_B2")]
    exact_fidelity_b2: f64,
    paper_fidelity: Option<f64>,
    deviation: Option<f64>,
}

/// Rows in grid order. A deviation from the closed form is data, not a
/// failure, so the report is always `ok`.
pub(crate) fn cmd_sweep(cfg: &Config, format: Format) -> Result<Report> {
    let (kind, _) = cfg.noise.context("sweep needs a noise kind in the config")?;
    let report = compare_paper_vs_exact(kind, &cfg.alice, &cfg.bob, &cfg.grid(), cfg.policy())?;
    let body = match format {
        Format::Csv => {
            let rows: Vec<SweepRow> = report
                .rows
                .iter()
                .map(|r| SweepRow {
                    gamma: r.gamma,
                    exact_fidelity_a1: r.exact_fidelity_a1,
                    exact_fidelity_b2: r.exact_fidelity_b2,
                    paper_fidelity: r.paper_fidelity,
                    deviation: r.deviation,
                })
                .collect();
            csv_string(&rows)?
        }
        Format::Json => json_string(&report)?,
    };
    Ok(Report { body, ok: true })
}
