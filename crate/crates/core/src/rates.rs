//! Driving-dependent quantities of the non-adiabatic master equation:
//! adiabatic parameter, modified frequency, up/down rates and the
//! inertial-validity diagnostics.

use crate::error::{Error, Result};
use crate::params::BathParams;

/// μ = ω̇/ω².
pub fn adiabatic_parameter(omega: f64, omega_dot: f64) -> f64 {
    omega_dot / (omega * omega)
}

/// α = ω √(1 − μ²/4).
pub fn modified_frequency(omega: f64, mu: f64) -> Result<f64> {
    if mu.abs() >= 2.0 {
        return Err(Error::domain(format!("modified frequency undefined for |mu| = {} >= 2", mu.abs())));
    }
    Ok(omega * (1.0 - 0.25 * mu * mu).sqrt())
}

/// Bose–Einstein occupation N(α) = 1/(e^{α/T} − 1).
pub fn bose_occupation(alpha: f64, t: f64) -> f64 {
    1.0 / (alpha / t).exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub k_down: f64,
    pub k_up: f64,
}

impl RatePair {
    /// Net relaxation rate k↓ − k↑.
    pub fn relaxation(&self) -> f64 {
        self.k_down - self.k_up
    }
}

/// Ohmic rates k↓ = gα(1 + N(α)), k↑ = gαN(α).
pub fn decay_rates(alpha: f64, bath: &BathParams) -> Result<RatePair> {
    if !(alpha > 0.0) {
        return Err(Error::domain(format!("decay rates need alpha > 0, got {alpha}")));
    }
    let n = bose_occupation(alpha, bath.t);
    let scale = bath.g * alpha;
    Ok(RatePair { k_down: scale * (1.0 + n), k_up: scale * n })
}

/// Inertial parameter Υ = (ω̈/ω³ − 2μ²)/(2κ)², κ² = 4 − μ².
pub fn inertial_parameter(omega: f64, omega_dot: f64, omega_ddot: f64) -> Result<f64> {
    let mu = adiabatic_parameter(omega, omega_dot);
    let kappa_sq = 4.0 - mu * mu;
    if kappa_sq <= 0.0 {
        return Err(Error::domain(format!("inertial parameter undefined for |mu| = {} >= 2", mu.abs())));
    }
    Ok((omega_ddot / omega.powi(3) - 2.0 * mu * mu) / (4.0 * kappa_sq))
}

/// Inertial-validity summary attached to every protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertialReport {
    pub upsilon_max: f64,
    pub t_f_min: f64,
    pub f: f64,
}

/// Lower bound on the protocol duration from Υ < f:
/// t_f_min = (1/f) max_s (1/ω) √(ω''(s)/(2ω) · 1/(8 − μ²)),
/// with `omega_s` sampled uniformly on s ∈ [0, 1] and `mu` on the same grid.
///
/// Points with a negative radicand are skipped; if every point is skipped the
/// bound is 0.
pub fn min_protocol_duration(omega_s: &[f64], mu: &[f64], f: f64) -> f64 {
    assert_eq!(omega_s.len(), mu.len(), "profile and mu must share the grid");
    assert!(f > 0.0 && f < 1.0, "precision scalar f must lie in (0, 1)");
    let ds = 1.0 / (omega_s.len() - 1) as f64;
    let curvature = crate::numerics::second_derivative(omega_s, ds);
    omega_s
        .iter()
        .zip(&curvature)
        .zip(mu)
        .filter_map(|((&w, &wpp), &mu)| {
            let radicand = wpp / (2.0 * w) / (8.0 - mu * mu);
            (radicand > 0.0).then(|| radicand.sqrt() / w)
        })
        .fold(0.0, f64::max)
        / f
}
