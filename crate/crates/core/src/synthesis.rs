//! Reverse engineering of the STE drive: fix y(s) = e^{β(s)}, solve the
//! implicit rate equation for the modified frequency α at every sample, then
//! invert α = ω√(1 − μ²/4) for ω.

use crate::error::{Error, Result};
use crate::numerics::{bisect_secant, derivative, uniform_grid};
use crate::params::{BathParams, SystemParams};
use crate::protocol::{Protocol, ProtocolKind};
use crate::rates::decay_rates;

pub const DEFAULT_N_GRID: usize = 4000;
pub const DEFAULT_F_INERTIAL: f64 = 0.05;

/// A target path for y = e^β on s = t/t_f ∈ [0, 1].
pub trait Ansatz {
    /// (y, dy/ds) at `s`.
    fn eval(&self, s: f64) -> (f64, f64);
}

/// Cubic y(s) = y0 + 3Δs² − 2Δs³ joining two thermal endpoints with zero slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteAnsatz {
    pub y0: f64,
    pub yf: f64,
    pub delta: f64,
    pub t_f: f64,
    pub n_grid: usize,
}

impl SteAnsatz {
    pub fn new(y0: f64, yf: f64, t_f: f64, n_grid: usize) -> Result<Self> {
        for (name, y) in [("y0", y0), ("yf", yf)] {
            if !(y > 0.0 && y < 1.0) {
                return Err(Error::InvalidParameter { name, value: y, requirement: "must lie in (0, 1)" });
            }
        }
        if !(t_f > 0.0) || !t_f.is_finite() {
            return Err(Error::InvalidParameter { name: "t_f", value: t_f, requirement: "must be > 0" });
        }
        if n_grid < 16 {
            return Err(Error::InvalidParameter { name: "n_grid", value: n_grid as f64, requirement: "must be >= 16" });
        }
        Ok(Self { y0, yf, delta: yf - y0, t_f, n_grid })
    }

    /// Thermal endpoints y = e^{−ω/T} at the initial and final frequencies.
    pub fn thermal(params: &SystemParams, bath: &BathParams, t_f: f64, n_grid: usize) -> Result<Self> {
        Self::new((-params.omega_i / bath.t).exp(), (-params.omega_f / bath.t).exp(), t_f, n_grid)
    }
}

impl Ansatz for SteAnsatz {
    fn eval(&self, s: f64) -> (f64, f64) {
        y_ansatz(s, self)
    }
}

pub fn y_ansatz(s: f64, ansatz: &SteAnsatz) -> (f64, f64) {
    let d = ansatz.delta;
    (ansatz.y0 + 3.0 * d * s * s - 2.0 * d * s * s * s, 6.0 * d * s * (1.0 - s))
}

/// Solves k↓(α)y² − y(k↓(α) + k↑(α)) + k↑(α) = dy/dt for α, with
/// dy/dt = (dy/ds)/t_f.
///
/// The left side minus dy/dt is strictly decreasing in α, so a bracketed root
/// is the only one. At dy/ds = 0 the detailed-balance root −T ln y is returned
/// exactly. On failure the error carries `s = NaN`; callers that know the
/// sample fill it in.
pub fn solve_alpha(y: f64, dy_ds: f64, t_f: f64, bath: &BathParams) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::domain(format!("y = {y} must lie in (0, 1)")));
    }
    let alpha_db = -bath.t * y.ln();
    if dy_ds == 0.0 {
        return Ok(alpha_db);
    }
    let y_dot = dy_ds / t_f;
    let no_root = || Error::NoRoot { s: f64::NAN, y, dy_ds };
    let residual = |alpha: f64| match decay_rates(alpha, bath) {
        Ok(r) => r.k_down * y * y - y * (r.k_down + r.k_up) + r.k_up - y_dot,
        Err(_) => f64::NAN,
    };

    let (mut lo, mut hi) = (alpha_db / 4.0, 4.0 * alpha_db);
    let mut widen = 0;
    while !(residual(lo) > 0.0) {
        lo /= 4.0;
        widen += 1;
        if widen > 60 || lo < f64::MIN_POSITIVE.sqrt() {
            return Err(no_root());
        }
    }
    widen = 0;
    while !(residual(hi) < 0.0) {
        hi *= 4.0;
        widen += 1;
        if widen > 60 {
            return Err(no_root());
        }
    }
    let ftol = 1e-14 * y_dot.abs().max(1.0);
    bisect_secant(residual, lo, hi, ftol).ok_or_else(no_root)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryOptions {
    pub damping: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Hold ω(0) = α(0) and ω(t_f) = α(t_f) instead of solving the endpoint
    /// equations. This leaves a derivative kink at both ends.
    pub pin_endpoints: bool,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self { damping: 0.5, max_iterations: 500, tolerance: 1e-10, pin_endpoints: false }
    }
}

pub fn recover_omega(alpha: &[f64], t: &[f64]) -> Result<Vec<f64>> {
    recover_omega_with(alpha, t, &RecoveryOptions::default())
}

/// Damped fixed point ω ← α/√(1 − μ²/4), μ = ω̇/ω² by finite differences,
/// started from ω = α.
pub fn recover_omega_with(alpha: &[f64], t: &[f64], opts: &RecoveryOptions) -> Result<Vec<f64>> {
    let n = alpha.len();
    if t.len() != n || n < 4 {
        return Err(Error::domain("alpha and t grids must match and hold at least 4 samples"));
    }
    if let Some(a) = alpha.iter().find(|a| !(**a > 0.0)) {
        return Err(Error::domain(format!("alpha must be positive, got {a}")));
    }
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    let mut omega = alpha.to_vec();
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        let d = derivative(&omega, h);
        change = 0.0;
        let mut next = omega.clone();
        let range = if opts.pin_endpoints { 1..n - 1 } else { 0..n };
        for i in range {
            let mu = d[i] / (omega[i] * omega[i]);
            if !(mu.abs() < 2.0) {
                return Err(Error::AdiabaticBreakdown { t: t[i], mu });
            }
            let target = alpha[i] / (1.0 - 0.25 * mu * mu).sqrt();
            next[i] = (1.0 - opts.damping) * omega[i] + opts.damping * target;
            change = f64::max(change, ((next[i] - omega[i]) / omega[i]).abs());
        }
        omega = next;
        if !change.is_finite() {
            break;
        }
        if change < opts.tolerance {
            return Ok(omega);
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iterations, last_change: change })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisOptions {
    pub n_grid: usize,
    pub f_inertial: f64,
    pub recovery: RecoveryOptions,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self { n_grid: DEFAULT_N_GRID, f_inertial: DEFAULT_F_INERTIAL, recovery: RecoveryOptions::default() }
    }
}

pub fn synthesize_ste(params: &SystemParams, bath: &BathParams, t_f: f64, n_grid: usize) -> Result<Protocol> {
    synthesize_ste_with(params, bath, t_f, &SynthesisOptions { n_grid, ..Default::default() })
}

pub fn synthesize_ste_with(params: &SystemParams, bath: &BathParams, t_f: f64, opts: &SynthesisOptions) -> Result<Protocol> {
    let ansatz = SteAnsatz::thermal(params, bath, t_f, opts.n_grid)?;
    if ansatz.delta == 0.0 {
        let t = uniform_grid(t_f, opts.n_grid);
        let n = t.len();
        return Protocol::from_samples(ProtocolKind::Ste, t, vec![params.omega_i; n], vec![0.0; n], None, bath, opts.f_inertial);
    }
    let p = synthesize_from_ansatz(&ansatz, params, bath, t_f, opts)?;
    if t_f < 1.2 * p.inertial.t_f_min {
        let rel = if t_f < p.inertial.t_f_min { "below" } else { "within 20% of" };
        log::warn!("t_f = {t_f} is {rel} the inertial bound t_f_min = {:.6} (f = {})", p.inertial.t_f_min, opts.f_inertial);
    }
    Ok(p)
}

/// Synthesis for any y(s) path whose endpoints are the thermal states of
/// `params`. α is set to exactly ω_i and ω_f at the ends.
pub fn synthesize_from_ansatz(
    ansatz: &dyn Ansatz,
    params: &SystemParams,
    bath: &BathParams,
    t_f: f64,
    opts: &SynthesisOptions,
) -> Result<Protocol> {
    let t = uniform_grid(t_f, opts.n_grid);
    let n = t.len();
    let mut alpha = Vec::with_capacity(n);
    for (i, &ti) in t.iter().enumerate() {
        let s = if i == n - 1 { 1.0 } else { ti / t_f };
        let (y, dy_ds) = ansatz.eval(s);
        let a = solve_alpha(y, dy_ds, t_f, bath).map_err(|e| match e {
            Error::NoRoot { y, dy_ds, .. } => Error::NoRoot { s, y, dy_ds },
            other => other,
        })?;
        alpha.push(a);
    }
    alpha[0] = params.omega_i;
    alpha[n - 1] = params.omega_f;
    let omega = recover_omega_with(&alpha, &t, &opts.recovery)?;
    let h = t_f / (n - 1) as f64;
    let d = derivative(&omega, h);
    let mu: Vec<f64> = omega.iter().zip(&d).map(|(w, wd)| wd / (w * w)).collect();
    Protocol::from_samples(ProtocolKind::Ste, t, omega, mu, Some(alpha), bath, opts.f_inertial)
}

/// Quasi-static reference path: ω(t) = −T ln y(t/t_f) along the cubic, so the
/// instantaneous thermal state follows the same population schedule.
pub fn adiabatic_protocol(params: &SystemParams, bath: &BathParams, t_f: f64, opts: &SynthesisOptions) -> Result<Protocol> {
    let ansatz = SteAnsatz::thermal(params, bath, t_f, opts.n_grid)?;
    let t = uniform_grid(t_f, opts.n_grid);
    let n = t.len();
    let mut omega: Vec<f64> = t.iter().map(|ti| -bath.t * y_ansatz(ti / t_f, &ansatz).0.ln()).collect();
    omega[0] = params.omega_i;
    omega[n - 1] = params.omega_f;
    if ansatz.delta == 0.0 {
        omega.fill(params.omega_i);
    }
    Protocol::from_omega(ProtocolKind::Adiabatic, t, omega, bath, opts.f_inertial)
}

/// Sudden jump ω_i → ω_f right after t = 0, then constant.
pub fn quench_protocol(params: &SystemParams, bath: &BathParams, t_f: f64, opts: &SynthesisOptions) -> Result<Protocol> {
    let t = uniform_grid(t_f, opts.n_grid);
    let n = t.len();
    let mut omega = vec![params.omega_f; n];
    omega[0] = params.omega_i;
    Protocol::from_samples(ProtocolKind::Quench, t, omega.clone(), vec![0.0; n], Some(omega), bath, opts.f_inertial)
}

/// Smallest t_f whose own synthesized protocol satisfies t_f ≥ t_f_min.
/// Durations where synthesis fails count as violating the bound.
pub fn self_consistent_duration_bound(params: &SystemParams, bath: &BathParams, opts: &SynthesisOptions) -> Result<f64> {
    let ok = |t_f: f64| match synthesize_ste_with(params, bath, t_f, opts) {
        Ok(p) => t_f >= p.inertial.t_f_min,
        Err(_) => false,
    };
    let step = 0.25;
    let mut prev = step;
    let mut t_f = step;
    while !ok(t_f) {
        prev = t_f;
        t_f += step;
        if t_f > 1e3 {
            return Err(Error::domain("no duration below 1000 satisfies the inertial bound"));
        }
    }
    if t_f == step {
        return Ok(t_f);
    }
    let (mut lo, mut hi) = (prev, t_f);
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
