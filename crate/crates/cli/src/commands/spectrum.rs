use landau_core::config::MagneticSystem;
use landau_core::spectral::{build_hamiltonian, low_spectrum, SpectrumReport, SOLVER_SEED};
use serde::Serialize;

use super::{outputs, Outcome};
use crate::settings::{CliError, Settings};

#[derive(Serialize)]
struct SpectrumOutput {
    grid: usize,
    levels: usize,
    /// `ω(n + 1/2)` for `n < levels`
    analytic_levels: Vec<f64>,
    degenerate_clusters: bool,
    report: SpectrumReport,
}

pub fn spectrum(settings: &Settings) -> Result<Outcome, CliError> {
    let cfg = settings.torus()?;
    let grid = settings.grid.unwrap_or(96);
    let levels = settings.levels.unwrap_or(3);
    if levels == 0 {
        return Err(CliError::Usage("--levels must be at least 1".into()));
    }
    let nphi = cfg.nphi() as usize;
    let h = build_hamiltonian(&cfg, grid, grid)?;
    let report = low_spectrum(&h, levels * nphi)?;
    let output = SpectrumOutput {
        grid,
        levels,
        analytic_levels: (0..levels)
            .map(|n| cfg.omega() * (n as f64 + 0.5))
            .collect(),
        degenerate_clusters: report.clusters.len() == levels
            && report.clusters.iter().all(|c| c.multiplicity == nphi),
        report,
    };
    let mut out = outputs(settings)?;
    let summary = out.write_json("spectrum.json", &output)?;
    out.finish(
        "spectrum",
        settings,
        &serde_json::json!({}),
        vec![SOLVER_SEED],
    )?;
    Ok(Outcome {
        summary,
        success: true,
    })
}
