//! Figures of merit per (t_f, protocol kind), evaluated in parallel and
//! returned in t_f order.

use rayon::prelude::*;
use ste_core::gaussian::thermal_state;
use ste_core::synthesis::{adiabatic_protocol, synthesize_ste_with};
use ste_core::{
    adiabatic_trajectory, efficiency, entropy_balance, evolve_beta_gamma, free_energy_difference, quench_trajectory,
    Error, ProtocolKind, SynthesisOptions, Trajectory,
};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    SynthesisFailed,
    IntegrationFailed,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::SynthesisFailed => "synthesis_failed",
            RowStatus::IntegrationFailed => "integration_failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t_f: f64,
    pub kind: ProtocolKind,
    pub status: RowStatus,
    pub fidelity: f64,
    /// −log₁₀(1 − F).
    pub accuracy: f64,
    pub work: f64,
    pub work_adi: f64,
    pub eta: f64,
    pub ds_sys: f64,
    pub ds_bath: f64,
    pub ds_total: f64,
    pub upsilon_max: f64,
}

pub fn synthesis_options(cfg: &RunConfig) -> SynthesisOptions {
    SynthesisOptions { n_grid: cfg.n_grid, f_inertial: cfg.f_inertial, ..Default::default() }
}

/// Runs one built-in protocol kind for duration `t_f`. Returns the
/// trajectory and, for synthesized kinds, max|Υ| of the drive.
pub fn run_kind(cfg: &RunConfig, kind: ProtocolKind, t_f: f64) -> Result<(Trajectory, f64), CliError> {
    let (params, bath) = (&cfg.system, &cfg.bath);
    let opts = synthesis_options(cfg);
    match kind {
        ProtocolKind::Ste => {
            let p = synthesize_ste_with(params, bath, t_f, &opts)?;
            let traj = evolve_beta_gamma(&p, &thermal_state(params.omega_i, bath), params, bath)?;
            Ok((traj, p.inertial.upsilon_max))
        }
        ProtocolKind::Quench => Ok((quench_trajectory(params, bath, t_f, cfg.n_grid)?, f64::NAN)),
        ProtocolKind::Adiabatic => {
            let p = adiabatic_protocol(params, bath, t_f, &opts)?;
            Ok((adiabatic_trajectory(&p, params, bath)?, p.inertial.upsilon_max))
        }
        ProtocolKind::Custom => Err(CliError::Usage("kind `custom` needs a protocol file (--protocol)".into())),
    }
}

fn failed_row(t_f: f64, kind: ProtocolKind, status: RowStatus, work_adi: f64) -> SweepRow {
    let nan = f64::NAN;
    SweepRow {
        t_f,
        kind,
        status,
        fidelity: nan,
        accuracy: nan,
        work: nan,
        work_adi,
        eta: nan,
        ds_sys: nan,
        ds_bath: nan,
        ds_total: nan,
        upsilon_max: nan,
    }
}

pub fn evaluate(cfg: &RunConfig, kind: ProtocolKind, t_f: f64) -> Result<SweepRow, CliError> {
    let work_adi = free_energy_difference(&cfg.system, &cfg.bath);
    let (traj, upsilon_max) = match run_kind(cfg, kind, t_f) {
        Ok(r) => r,
        Err(CliError::Synthesis(e)) => {
            log::warn!("{kind} at t_f = {t_f}: {e}");
            return Ok(failed_row(t_f, kind, RowStatus::SynthesisFailed, work_adi));
        }
        Err(CliError::Integration(e)) => {
            log::warn!("{kind} at t_f = {t_f}: {e}");
            return Ok(failed_row(t_f, kind, RowStatus::IntegrationFailed, work_adi));
        }
        Err(other) => return Err(other),
    };
    let fidelity = traj.final_fidelity();
    let work = traj.final_work();
    let eta = efficiency(work, work_adi, cfg.system.direction()).unwrap_or(f64::NAN);
    let (ds_sys, ds_bath, ds_total) = match entropy_balance(&traj, &cfg.bath) {
        Ok(b) => (b.ds_sys, b.ds_bath, b.ds_total),
        Err(e @ Error::Integration { .. }) => {
            log::warn!("{kind} at t_f = {t_f}: {e}");
            return Ok(failed_row(t_f, kind, RowStatus::IntegrationFailed, work_adi));
        }
        Err(e) => return Err(e.into()),
    };
    Ok(SweepRow {
        t_f,
        kind,
        status: RowStatus::Ok,
        fidelity,
        accuracy: -(1.0 - fidelity).log10(),
        work,
        work_adi,
        eta,
        ds_sys,
        ds_bath,
        ds_total,
        upsilon_max,
    })
}

/// Evaluates every (t_f, kind) pair on `cfg.workers` threads (0 = one per
/// core). Rows come back sorted by t_f, then in the order of `kinds`.
pub fn run_sweep(cfg: &RunConfig, kinds: &[ProtocolKind]) -> Result<Vec<SweepRow>, CliError> {
    let jobs: Vec<(f64, ProtocolKind)> = cfg.t_f.iter().flat_map(|&t| kinds.iter().map(move |&k| (t, k))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} sweep workers: {e}", cfg.workers)))?;
    let rows: Vec<SweepRow> =
        pool.install(|| jobs.par_iter().map(|&(t, k)| evaluate(cfg, k, t)).collect::<Result<Vec<_>, _>>())?;
    Ok(rows)
}
