use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ste_core::gaussian::thermal_state;
use ste_core::synthesis::{adiabatic_protocol, quench_protocol, synthesize_ste_with};
use ste_core::{evolve_beta_gamma, Protocol, ProtocolKind};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::io::{read_protocol, tf_label, write_protocol, write_sweep, write_text, write_trajectory};
use crate::plot::gnuplot_script;
use crate::sweep::{run_kind, run_sweep, synthesis_options, SweepRow};

pub fn synth_protocol(cfg: &RunConfig, kind: ProtocolKind, t_f: f64) -> Result<Protocol, CliError> {
    let opts = synthesis_options(cfg);
    let p = match kind {
        ProtocolKind::Ste => synthesize_ste_with(&cfg.system, &cfg.bath, t_f, &opts)?,
        ProtocolKind::Quench => quench_protocol(&cfg.system, &cfg.bath, t_f, &opts)?,
        ProtocolKind::Adiabatic => adiabatic_protocol(&cfg.system, &cfg.bath, t_f, &opts)?,
        ProtocolKind::Custom => return Err(CliError::Usage("kind `custom` cannot be synthesized".into())),
    };
    Ok(p)
}

/// Writes `protocol_<kind>_tf<t_f>.csv` for every configured duration.
pub fn cmd_synth(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for &t_f in &cfg.t_f {
        let p = synth_protocol(cfg, cfg.kind, t_f)?;
        let path = cfg.output_dir.join(format!("protocol_{}_tf{}.csv", cfg.kind, tf_label(t_f)));
        write_protocol(&path, &p)?;
        written.push(path);
    }
    Ok(written)
}

/// With a protocol file, replays it from the thermal state at its first
/// α sample. Otherwise generates the configured kind at every duration.
pub fn cmd_simulate(cfg: &RunConfig, protocol_file: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    if let Some(file) = protocol_file {
        let p = read_protocol(file, &cfg.bath, cfg.f_inertial)?;
        let init = thermal_state(p.alpha[0], &cfg.bath);
        let traj = evolve_beta_gamma(&p, &init, &cfg.system, &cfg.bath)?;
        let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "protocol".into());
        let path = cfg.output_dir.join(format!("trajectory_custom_{stem}.csv"));
        write_trajectory(&path, &traj)?;
        return Ok(vec![path]);
    }
    let mut written = Vec::new();
    for &t_f in &cfg.t_f {
        let (traj, _) = run_kind(cfg, cfg.kind, t_f)?;
        let path = cfg.output_dir.join(format!("trajectory_{}_tf{}.csv", cfg.kind, tf_label(t_f)));
        write_trajectory(&path, &traj)?;
        written.push(path);
    }
    Ok(written)
}

/// STE and quench at every duration: `sweep.csv` plus `sweep.gp`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<(Vec<SweepRow>, Vec<PathBuf>), CliError> {
    let rows = run_sweep(cfg, &[ProtocolKind::Ste, ProtocolKind::Quench])?;
    let csv = cfg.output_dir.join("sweep.csv");
    let gp = cfg.output_dir.join("sweep.gp");
    write_sweep(&csv, &rows)?;
    write_text(&gp, &gnuplot_script("sweep.csv", &rows))?;
    Ok((rows, vec![csv, gp]))
}

/// STE, quench and adiabatic side by side. Writes `compare.csv` and returns
/// a plain-text table.
pub fn cmd_compare(cfg: &RunConfig) -> Result<(String, Vec<PathBuf>), CliError> {
    let rows = run_sweep(cfg, &[ProtocolKind::Ste, ProtocolKind::Quench, ProtocolKind::Adiabatic])?;
    let csv = cfg.output_dir.join("compare.csv");
    write_sweep(&csv, &rows)?;
    Ok((report(&rows), vec![csv]))
}

pub fn report(rows: &[SweepRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>8}  {:<9}  {:<18}  {:>10}  {:>7}  {:>10}  {:>10}  {:>7}  {:>10}",
        "t_f", "kind", "status", "1-F", "A", "W", "W_adi", "eta", "dS_total"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>8}  {:<9}  {:<18}  {:>10.3e}  {:>7.3}  {:>10.5}  {:>10.5}  {:>7.4}  {:>10.3e}",
            tf_label(r.t_f),
            r.kind.as_str(),
            r.status.as_str(),
            1.0 - r.fidelity,
            r.accuracy,
            r.work,
            r.work_adi,
            r.eta,
            r.ds_total
        );
    }
    s
}
