//! Open-system evolution under a protocol. Smooth protocols integrate the
//! (β, γ) equations with RK4 on the protocol grid; the quench uses the
//! sudden map followed by the closed-form relaxation propagator.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{
    fidelity, from_moments, thermal_energy, thermal_state, to_covariance, to_moments, von_neumann_entropy,
    CovarianceState, GeneralizedGibbsState, MomentVector,
};
use crate::numerics::{midpoints, uniform_grid};
use crate::params::{BathParams, SystemParams};
use crate::protocol::{Protocol, ProtocolKind};
use crate::rates::{decay_rates, RatePair};
use crate::thermo::{heat, work_integral};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSamples {
    Gibbs(Vec<GeneralizedGibbsState>),
    Moments(Vec<MomentVector>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub kind: ProtocolKind,
    pub t: Vec<f64>,
    pub omega: Vec<f64>,
    pub states: StateSamples,
    pub covariance: Vec<CovarianceState>,
    pub energy: Vec<f64>,
    pub work: Vec<f64>,
    pub heat: Vec<f64>,
    pub entropy_sys: Vec<f64>,
    pub fidelity_to_target: Vec<f64>,
    /// Thermal covariance at the final detailed-balance frequency (α at the
    /// last sample, which is ω_f for every built-in protocol).
    pub target: CovarianceState,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// β at every sample. Moment-propagated states report the exponent of
    /// the thermal state with the same symplectic eigenvalue.
    pub fn beta(&self) -> Vec<f64> {
        match &self.states {
            StateSamples::Gibbs(s) => s.iter().map(|g| g.beta).collect(),
            StateSamples::Moments(_) => self
                .covariance
                .iter()
                .map(|c| {
                    let excess = c.symplectic_eigenvalue() - 0.5;
                    if excess > 0.0 {
                        -(1.0 / excess).ln_1p()
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect(),
        }
    }

    pub fn final_fidelity(&self) -> f64 {
        *self.fidelity_to_target.last().expect("trajectory is never empty")
    }

    pub fn final_work(&self) -> f64 {
        *self.work.last().expect("trajectory is never empty")
    }
}

fn beta_gamma_rhs(beta: f64, gamma: Complex64, r: &RatePair) -> (f64, Complex64) {
    let eb = beta.exp();
    let beta_dot = r.k_down * beta.exp_m1() + r.k_up * ((-beta).exp_m1() + 4.0 * eb * gamma.norm_sqr());
    let gamma_dot = (r.k_down + r.k_up - 2.0 * r.k_down / eb) * gamma;
    (beta_dot, gamma_dot)
}

fn check_state(t: f64, beta: f64, gamma: Complex64) -> Result<()> {
    let fail = |reason: String| Err(Error::Integration { t, reason });
    if !beta.is_finite() || !gamma.re.is_finite() || !gamma.im.is_finite() {
        return fail(format!("non-finite state beta = {beta}, gamma = {gamma}"));
    }
    if !(beta < 0.0) {
        return fail(format!("beta = {beta} left the normalizable region"));
    }
    let e = (-beta).exp_m1();
    if 4.0 * gamma.norm_sqr() >= e * e {
        return fail(format!("4|gamma|^2 = {} reached (e^-beta - 1)^2 = {}", 4.0 * gamma.norm_sqr(), e * e));
    }
    Ok(())
}

/// RK4 integration of
/// β̇ = k↓(e^β − 1) + k↑(e^{−β} − 1 + 4e^β|γ|²), γ̇ = (k↓ + k↑ − 2k↓e^{−β})γ
/// with rates taken from the protocol's α samples (midpoints interpolated).
/// The (β, γ) coefficients refer to the instantaneous frame (ω(t), μ(t)).
pub fn evolve_beta_gamma(
    protocol: &Protocol,
    initial: &GeneralizedGibbsState,
    params: &SystemParams,
    bath: &BathParams,
) -> Result<Trajectory> {
    check_state(0.0, initial.beta, initial.gamma)?;
    let n = protocol.len();
    let h = protocol.dt();
    let rates_at = |alpha: f64, t: f64| {
        decay_rates(alpha, bath).map_err(|e| Error::Integration { t, reason: e.to_string() })
    };
    let alpha_mid = midpoints(&protocol.alpha);

    let mut states = Vec::with_capacity(n);
    let (mut beta, mut gamma) = (initial.beta, initial.gamma);
    states.push(GeneralizedGibbsState { beta, gamma, omega: protocol.omega[0], mu: protocol.mu[0] });
    let mut r0 = RatePair { k_down: protocol.k_down[0], k_up: protocol.k_up[0] };
    for i in 0..n - 1 {
        let t = protocol.t[i];
        let rm = rates_at(alpha_mid[i], t + 0.5 * h)?;
        let r1 = RatePair { k_down: protocol.k_down[i + 1], k_up: protocol.k_up[i + 1] };
        let (b1, g1) = beta_gamma_rhs(beta, gamma, &r0);
        let (b2, g2) = beta_gamma_rhs(beta + 0.5 * h * b1, gamma + 0.5 * h * g1, &rm);
        let (b3, g3) = beta_gamma_rhs(beta + 0.5 * h * b2, gamma + 0.5 * h * g2, &rm);
        let (b4, g4) = beta_gamma_rhs(beta + h * b3, gamma + h * g3, &r1);
        beta += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        gamma += h / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
        check_state(protocol.t[i + 1], beta, gamma)?;
        states.push(GeneralizedGibbsState { beta, gamma, omega: protocol.omega[i + 1], mu: protocol.mu[i + 1] });
        r0 = r1;
    }

    let covariance = states
        .iter()
        .zip(&protocol.t)
        .map(|(s, &t)| to_covariance(s, params).map_err(|e| Error::Integration { t, reason: e.to_string() }))
        .collect::<Result<Vec<_>>>()?;
    let work = work_integral(&protocol.t, &protocol.omega, &protocol.omega_dot(), &covariance, params.m);
    let target = *protocol.alpha.last().expect("protocol grid is never empty");
    assemble(protocol.kind, protocol.t.clone(), protocol.omega.clone(), StateSamples::Gibbs(states), covariance, work, target, params, bath)
}

/// Instantaneous thermal states along the protocol (the quasi-static limit).
pub fn adiabatic_trajectory(protocol: &Protocol, params: &SystemParams, bath: &BathParams) -> Result<Trajectory> {
    let states: Vec<GeneralizedGibbsState> = protocol.omega.iter().map(|&w| thermal_state(w, bath)).collect();
    let covariance: Vec<CovarianceState> =
        protocol.omega.iter().map(|&w| CovarianceState::thermal(w, bath, params.m)).collect();
    let work = work_integral(&protocol.t, &protocol.omega, &protocol.omega_dot(), &covariance, params.m);
    let target = *protocol.omega.last().expect("protocol grid is never empty");
    assemble(ProtocolKind::Adiabatic, protocol.t.clone(), protocol.omega.clone(), StateSamples::Gibbs(states), covariance, work, target, params, bath)
}

/// Moments right after an instantaneous frequency change. The state is
/// unchanged, so H, L and C are re-expressed with r = ω_to²/ω_from².
pub fn quench_sudden(initial: &MomentVector, omega_from: f64, omega_to: f64) -> MomentVector {
    let r = (omega_to * omega_to) / (omega_from * omega_from);
    MomentVector {
        h: 0.5 * (initial.h * (1.0 + r) + initial.l * (1.0 - r)),
        l: 0.5 * (initial.h * (1.0 - r) + initial.l * (1.0 + r)),
        c: r.sqrt() * initial.c,
    }
}

/// Knobs on the relaxation propagator: the (L, C) rotation angle is
/// `rotation_factor`·ω_f·t and their decay exponent is `coherence_decay_factor`·Γt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuenchPropagator {
    pub rotation_factor: f64,
    pub coherence_decay_factor: f64,
}

impl Default for QuenchPropagator {
    fn default() -> Self {
        Self { rotation_factor: 1.0, coherence_decay_factor: 1.0 }
    }
}

pub fn quench_relax(moments: &MomentVector, omega_f: f64, bath: &BathParams, t: f64) -> Result<MomentVector> {
    quench_relax_with(moments, omega_f, bath, t, &QuenchPropagator::default())
}

/// ⟨H⟩ → R⟨H⟩ + ⟨H⟩_eq(1 − R), (L, C) → R·rot(ω_f t)(L, C), R = e^{−Γt},
/// Γ = k↓ − k↑ at α = ω_f.
pub fn quench_relax_with(
    moments: &MomentVector,
    omega_f: f64,
    bath: &BathParams,
    t: f64,
    prop: &QuenchPropagator,
) -> Result<MomentVector> {
    let gamma = decay_rates(omega_f, bath)?.relaxation();
    let r = (-gamma * t).exp();
    let rc = (-prop.coherence_decay_factor * gamma * t).exp();
    let (s, c) = (prop.rotation_factor * omega_f * t).sin_cos();
    let h_eq = thermal_energy(omega_f, bath);
    Ok(MomentVector {
        h: r * moments.h + h_eq * (1.0 - r),
        l: rc * (c * moments.l - s * moments.c),
        c: rc * (s * moments.l + c * moments.c),
    })
}

/// Quench ω_i → ω_f at t = 0⁺ from the thermal state at ω_i, then relaxation.
/// Sample 0 is the pre-quench state.
pub fn quench_trajectory(params: &SystemParams, bath: &BathParams, t_f: f64, n_grid: usize) -> Result<Trajectory> {
    quench_trajectory_with(params, bath, t_f, n_grid, &QuenchPropagator::default())
}

pub fn quench_trajectory_with(
    params: &SystemParams,
    bath: &BathParams,
    t_f: f64,
    n_grid: usize,
    prop: &QuenchPropagator,
) -> Result<Trajectory> {
    let t = uniform_grid(t_f, n_grid);
    let (wi, wf) = (params.omega_i, params.omega_f);
    let before = to_moments(&CovarianceState::thermal(wi, bath, params.m), wi, params);
    let after = quench_sudden(&before, wi, wf);
    let mut moments = vec![before];
    for &tj in &t[1..] {
        moments.push(quench_relax_with(&after, wf, bath, tj, prop)?);
    }
    let mut omega = vec![wf; t.len()];
    omega[0] = wi;
    let covariance: Vec<CovarianceState> = moments.iter().zip(&omega).map(|(m, &w)| from_moments(m, w, params)).collect();
    let mut work = vec![after.h - before.h; t.len()];
    work[0] = 0.0;
    assemble(ProtocolKind::Quench, t, omega, StateSamples::Moments(moments), covariance, work, wf, params, bath)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    kind: ProtocolKind,
    t: Vec<f64>,
    omega: Vec<f64>,
    states: StateSamples,
    covariance: Vec<CovarianceState>,
    work: Vec<f64>,
    target_omega: f64,
    params: &SystemParams,
    bath: &BathParams,
) -> Result<Trajectory> {
    let target = CovarianceState::thermal(target_omega, bath, params.m);
    let energy: Vec<f64> = covariance.iter().zip(&omega).map(|(c, &w)| to_moments(c, w, params).h).collect();
    let heat = heat(&energy, &work);
    let mut entropy_sys = Vec::with_capacity(t.len());
    let mut fid = Vec::with_capacity(t.len());
    for (c, &tj) in covariance.iter().zip(&t) {
        let wrap = |e: Error| Error::Integration { t: tj, reason: e.to_string() };
        entropy_sys.push(von_neumann_entropy(c).map_err(wrap)?);
        fid.push(fidelity(c, &target).map_err(wrap)?);
    }
    Ok(Trajectory {
        kind,
        t,
        omega,
        states,
        covariance,
        energy,
        work,
        heat,
        entropy_sys,
        fidelity_to_target: fid,
        target,
    })
}
