//! Time sweeps of purity and concurrence, with optional quadrature oracle.

use std::thread;

use hvh_core::entanglement::{concurrence, purity};
use hvh_core::numerics::{Grid1D, Grid2D};
use hvh_core::oracle::{hybrid_marginal_quadrature, hybrid_window, quantum_marginal_quadrature, quantum_window};
use hvh_core::spin_oscillator::{assemble_density, rsu_hybrid, rsu_quantum, Rsu, ScenarioParams, SpinDensityMatrix};

use crate::config::{Mode, RunConfig};
use crate::error::Result;

/// Mode of a single row: never [`Mode::Both`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowMode {
    Quantum,
    Hybrid,
}

impl RowMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RowMode::Quantum => "quantum",
            RowMode::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub omega_t: f64,
    pub mode: RowMode,
    pub rsu: Rsu,
    pub purity: f64,
    pub concurrence: f64,
    /// Purity and concurrence of the quadrature-oracle state.
    pub oracle: Option<(f64, f64)>,
}

/// Sample times `ωt_k = t_max k / (samples − 1)`.
pub fn sample_times(t_max: f64, samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(|k| if k + 1 == samples { t_max } else { t_max * k as f64 / last }).collect()
}

pub fn scenario(cfg: &RunConfig, kappa: f64) -> Result<ScenarioParams> {
    Ok(ScenarioParams::dimensionless(kappa, cfg.epsilon, cfg.q0, cfg.p0, cfg.sigma)?)
}

fn oracle_state(mode: RowMode, t: f64, sp: &ScenarioParams, n: usize) -> Result<SpinDensityMatrix> {
    Ok(match mode {
        RowMode::Quantum => {
            let (lo, hi) = quantum_window(sp, &[t]);
            quantum_marginal_quadrature(t, sp, &Grid1D::new(lo, hi, n)?)?
        }
        RowMode::Hybrid => {
            let ((a, b), (c, d)) = hybrid_window(sp, &[t]);
            hybrid_marginal_quadrature(t, sp, &Grid2D::new(Grid1D::new(a, b, n)?, Grid1D::new(c, d, n)?))?
        }
    })
}

fn row(mode: RowMode, omega_t: f64, sp: &ScenarioParams, oracle_grid: Option<usize>) -> Result<SweepRow> {
    // natural units: t = ωt
    let rsu = match mode {
        RowMode::Quantum => rsu_quantum(omega_t, sp),
        RowMode::Hybrid => rsu_hybrid(omega_t, sp),
    };
    let rho = assemble_density(rsu)?;
    let oracle = match oracle_grid {
        Some(n) => {
            let o = oracle_state(mode, omega_t, sp, n)?;
            Some((purity(&o), concurrence(&o)?))
        }
        None => None,
    };
    Ok(SweepRow { omega_t, mode, rsu, purity: purity(&rho), concurrence: concurrence(&rho)?, oracle })
}

/// All rows for one κ, ordered by ωt and then quantum before hybrid.
pub fn sweep(cfg: &RunConfig, kappa: f64) -> Result<Vec<SweepRow>> {
    let sp = scenario(cfg, kappa)?;
    let modes: Vec<RowMode> = [(Mode::Quantum, RowMode::Quantum), (Mode::Hybrid, RowMode::Hybrid)]
        .into_iter()
        .filter(|(m, _)| cfg.mode.includes(*m))
        .map(|(_, r)| r)
        .collect();
    let jobs: Vec<(RowMode, f64)> =
        sample_times(cfg.t_max, cfg.samples).into_iter().flat_map(|t| modes.iter().map(move |&m| (m, t))).collect();
    let grid = cfg.oracle.then_some(cfg.oracle_grid);

    // rows are independent; compute in contiguous chunks and gather in order
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len()).max(1);
    let chunk = jobs.len().div_ceil(workers);
    let sp = &sp;
    let parts: Vec<Result<Vec<SweepRow>>> = thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&(m, t)| row(m, t, sp, grid)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut rows = Vec::with_capacity(jobs.len());
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

/// Largest `|oracle − closed form|` over the rows, for purity and concurrence.
pub fn oracle_deviation(rows: &[SweepRow]) -> Option<(f64, f64)> {
    rows.iter().try_fold((0.0f64, 0.0f64), |(dp, dc), r| {
        let (p, c) = r.oracle?;
        Some((dp.max((p - r.purity).abs()), dc.max((c - r.concurrence).abs())))
    })
}
