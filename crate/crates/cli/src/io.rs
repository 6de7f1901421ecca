//! CSV files: comma separated, `.` decimal point, 17 significant digits,
//! header on the first line.

use std::fs;
use std::path::Path;

use ste_core::{BathParams, Protocol, ProtocolKind, Trajectory};

use crate::error::CliError;
use crate::sweep::SweepRow;

pub const PROTOCOL_COLUMNS: [&str; 6] = ["t", "omega", "mu", "alpha", "k_down", "k_up"];
pub const TRAJECTORY_COLUMNS: [&str; 8] = ["t", "omega", "beta", "energy", "work", "heat", "entropy", "fidelity"];
pub const SWEEP_COLUMNS: [&str; 12] = [
    "t_f", "kind", "status", "fidelity", "accuracy", "work", "work_adi", "eta", "ds_sys", "ds_bath", "ds_total",
    "upsilon_max",
];

/// Scientific notation with 17 significant digits; round-trips every f64.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact duration label for file names: 8 → "8", 7.5 → "7.5".
pub fn tf_label(t_f: f64) -> String {
    format!("{t_f}")
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    }
    let ctx = || format!("writing {}", path.display());
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::csv(ctx(), e))?;
    w.write_record(header).map_err(|e| CliError::csv(ctx(), e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::csv(ctx(), e))?;
    }
    w.flush().map_err(|e| CliError::io(ctx(), e))
}

pub fn write_protocol(path: &Path, p: &Protocol) -> Result<(), CliError> {
    let rows = (0..p.len()).map(|i| {
        [p.t[i], p.omega[i], p.mu[i], p.alpha[i], p.k_down[i], p.k_up[i]].into_iter().map(fmt_num).collect()
    });
    write_rows(path, &PROTOCOL_COLUMNS, rows)
}

/// Reads a protocol file back as a `Custom` protocol. ω, μ and α are taken
/// as written; the rate columns are recomputed from α and `bath`.
pub fn read_protocol(path: &Path, bath: &BathParams, f_inertial: f64) -> Result<Protocol, CliError> {
    let ctx = || format!("reading {}", path.display());
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::csv(ctx(), e))?;
    let headers = r.headers().map_err(|e| CliError::csv(ctx(), e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Usage(format!("{}: missing column `{name}`", path.display())))
    };
    let (ct, cw, cm, ca) = (col("t")?, col("omega")?, col("mu")?, col("alpha")?);
    let (mut t, mut omega, mut mu, mut alpha) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::csv(ctx(), e))?;
        let get = |c: usize| -> Result<f64, CliError> {
            let field = rec.get(c).unwrap_or("").trim();
            field
                .parse()
                .map_err(|_| CliError::Usage(format!("{}: row {}: cannot parse `{field}`", path.display(), i + 2)))
        };
        t.push(get(ct)?);
        omega.push(get(cw)?);
        mu.push(get(cm)?);
        alpha.push(get(ca)?);
    }
    Ok(Protocol::from_samples(ProtocolKind::Custom, t, omega, mu, Some(alpha), bath, f_inertial)?)
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<(), CliError> {
    let beta = traj.beta();
    let rows = (0..traj.len()).map(|i| {
        [
            traj.t[i],
            traj.omega[i],
            beta[i],
            traj.energy[i],
            traj.work[i],
            traj.heat[i],
            traj.entropy_sys[i],
            traj.fidelity_to_target[i],
        ]
        .into_iter()
        .map(fmt_num)
        .collect()
    });
    write_rows(path, &TRAJECTORY_COLUMNS, rows)
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<(), CliError> {
    let out = rows.iter().map(|r| {
        let mut v = vec![fmt_num(r.t_f), r.kind.to_string(), r.status.as_str().to_string()];
        v.extend(
            [r.fidelity, r.accuracy, r.work, r.work_adi, r.eta, r.ds_sys, r.ds_bath, r.ds_total, r.upsilon_max]
                .into_iter()
                .map(fmt_num),
        );
        v
    });
    write_rows(path, &SWEEP_COLUMNS, out)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}
