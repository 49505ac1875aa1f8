//! Sweeps, plots and verification suites for hybrid van Hove spin dynamics.

pub mod config;
pub mod error;
pub mod svg;
pub mod sweep;
pub mod table;
pub mod verify;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{parse_config, ConfigOverrides, Mode, RunConfig};
pub use error::{CliError, Result};
pub use table::parse_sweep_csv;

/// Files written by [`run_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub csv: Vec<PathBuf>,
    pub svg: Option<PathBuf>,
    /// Largest oracle deviation of purity and concurrence over all κ.
    pub oracle_deviation: Option<(f64, f64)>,
}

/// `out.csv` for a single κ, `out_kappa<κ>.csv` for each of several.
pub fn csv_path_for(out: &Path, kappa: f64, several: bool) -> PathBuf {
    if !several {
        return out.to_path_buf();
    }
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_kappa{kappa}.{}", ext.to_string_lossy()),
        None => format!("{stem}_kappa{kappa}"),
    };
    out.with_file_name(name)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn run_sweep(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let several = cfg.kappa.len() > 1;
    let mut report = RunReport { csv: Vec::new(), svg: None, oracle_deviation: None };
    let mut tables = Vec::new();
    for &kappa in &cfg.kappa {
        let rows = sweep::sweep(cfg, kappa)?;
        if let Some((dp, dc)) = sweep::oracle_deviation(&rows) {
            let (p, c) = report.oracle_deviation.unwrap_or((0.0, 0.0));
            report.oracle_deviation = Some((p.max(dp), c.max(dc)));
        }
        let text = table::write_csv(&rows)?;
        let path = csv_path_for(&cfg.out_csv, kappa, several);
        write(&path, &text)?;
        report.csv.push(path);
        tables.push((kappa, text));
    }
    if let Some(path) = &cfg.out_svg {
        // the plot is drawn from the CSV text, not from the computed rows
        let parsed = tables.iter().map(|(k, text)| Ok((*k, parse_sweep_csv(text)?))).collect::<Result<Vec<_>>>()?;
        let series: Vec<svg::Series<'_>> =
            parsed.iter().map(|(kappa, rows)| svg::Series { kappa: *kappa, rows }).collect();
        write(path, &svg::render_svg(&series))?;
        report.svg = Some(path.clone());
    }
    Ok(report)
}
