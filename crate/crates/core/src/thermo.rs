//! Thermodynamic bookkeeping on trajectories: work, heat, entropy balance,
//! efficiencies and decay-rate fits.

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::gaussian::CovarianceState;
use crate::numerics::{cumulative_trapezoid, linear_fit};
use crate::params::{BathParams, Direction, SystemParams};

/// Second-law slack on the total entropy change.
pub const SECOND_LAW_TOL: f64 = 1e-6;

/// W(t) = ∫ m ω ω̇ σ_QQ dt, cumulative trapezoid.
pub fn work_integral(t: &[f64], omega: &[f64], omega_dot: &[f64], cov: &[CovarianceState], m: f64) -> Vec<f64> {
    let power: Vec<f64> = (0..t.len()).map(|i| m * omega[i] * omega_dot[i] * cov[i].sigma_qq).collect();
    cumulative_trapezoid(t, &power)
}

/// Q(t) = ⟨H⟩(t) − ⟨H⟩(0) − W(t).
pub fn heat(energy: &[f64], work: &[f64]) -> Vec<f64> {
    energy.iter().zip(work).map(|(e, w)| e - energy[0] - w).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBalance {
    pub ds_sys: f64,
    pub ds_bath: f64,
    pub ds_total: f64,
}

pub fn entropy_balance(traj: &Trajectory, bath: &BathParams) -> Result<EntropyBalance> {
    let last = traj.len() - 1;
    let ds_sys = traj.entropy_sys[last] - traj.entropy_sys[0];
    let ds_bath = -traj.heat[last] / bath.t;
    let ds_total = ds_sys + ds_bath;
    if ds_total < -SECOND_LAW_TOL {
        return Err(Error::Integration {
            t: traj.t[last],
            reason: format!("total entropy change {ds_total:e} is negative beyond tolerance"),
        });
    }
    Ok(EntropyBalance { ds_sys, ds_bath, ds_total })
}

/// Isothermal quasi-static work ΔF = T ln[sinh(ω_f/2T) / sinh(ω_i/2T)].
pub fn free_energy_difference(params: &SystemParams, bath: &BathParams) -> f64 {
    let half = |w: f64| (w / (2.0 * bath.t)).sinh();
    bath.t * (half(params.omega_f) / half(params.omega_i)).ln()
}

/// η = W_adi/W for compression and W/W_adi for expansion.
pub fn efficiency(w: f64, w_adi: f64, direction: Direction) -> Result<f64> {
    match direction {
        Direction::Compression => {
            if !(w > 0.0 && w_adi > 0.0) {
                return Err(Error::domain(format!("compression needs W > 0 and W_adi > 0, got {w}, {w_adi}")));
            }
            Ok(w_adi / w)
        }
        Direction::Expansion => {
            if !(w < 0.0 && w_adi < 0.0) {
                return Err(Error::domain(format!("expansion needs W < 0 and W_adi < 0, got {w}, {w_adi}")));
            }
            Ok(w / w_adi)
        }
    }
}

/// Least-squares decay rate k of y ∝ e^{−kt}.
pub fn fit_decay_rate(t: &[f64], y: &[f64]) -> Result<f64> {
    if t.len() != y.len() || t.len() < 2 {
        return Err(Error::domain("decay fit needs at least two matching samples"));
    }
    if let Some(i) = y.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::domain(format!("non-positive value {} at t = {} in fit window", y[i], t[i])));
    }
    let ln: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (slope, _) = linear_fit(t, &ln);
    let k = -slope;
    if !(k > 0.0) {
        return Err(Error::domain(format!("series is not decaying (fitted rate {k})")));
    }
    Ok(k)
}
