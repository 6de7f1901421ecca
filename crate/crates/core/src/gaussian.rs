//! Gaussian states of the oscillator and the maps between their
//! representations: generalized Gibbs coefficients (β, γ) in the instantaneous
//! (ω, μ) frame, second-moment covariances, and the (⟨H⟩, ⟨L⟩, ⟨C⟩) moment
//! vector. Fidelity and von Neumann entropy are evaluated on covariances.
//!
//! ħ = k_B = 1 throughout.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{BathParams, SystemParams};

/// Relative slack on the Heisenberg bound det σ ≥ 1/4, absorbing rounding in
/// pure states.
pub const HEISENBERG_TOL: f64 = 1e-12;

/// Generalized canonical state Z⁻¹ e^{γ b²} e^{β b†b} e^{γ* b†²}, where b is
/// the jump operator of the frame (ω, μ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedGibbsState {
    pub beta: f64,
    pub gamma: Complex64,
    pub omega: f64,
    pub mu: f64,
}

impl GeneralizedGibbsState {
    pub fn new(beta: f64, gamma: Complex64, omega: f64, mu: f64) -> Result<Self> {
        check_normalizable(beta, gamma)?;
        if !(omega > 0.0) {
            return Err(Error::domain(format!("frame frequency must be > 0, got {omega}")));
        }
        kappa(mu)?;
        Ok(Self { beta, gamma, omega, mu })
    }

    /// Same (β, γ) viewed in another instantaneous frame.
    pub fn in_frame(self, omega: f64, mu: f64) -> Result<Self> {
        Self::new(self.beta, self.gamma, omega, mu)
    }
}

/// κ = √(4 − μ²); errors when |μ| ≥ 2.
pub fn kappa(mu: f64) -> Result<f64> {
    if mu.abs() < 2.0 {
        Ok((4.0 - mu * mu).sqrt())
    } else {
        Err(Error::domain(format!("|mu| = {} must be < 2", mu.abs())))
    }
}

fn check_normalizable(beta: f64, gamma: Complex64) -> Result<()> {
    if !(beta < 0.0) {
        return Err(Error::domain(format!("state not normalizable: beta = {beta} must be < 0")));
    }
    let e = (-beta).exp_m1();
    if 4.0 * gamma.norm_sqr() >= e * e {
        return Err(Error::domain(format!(
            "state not normalizable: 4|gamma|^2 = {} >= (e^-beta - 1)^2 = {}",
            4.0 * gamma.norm_sqr(),
            e * e
        )));
    }
    Ok(())
}

/// Z(β, γ) = e^{−β} / [(e^{−β}−1) √(1 − 4|γ|²/(e^{−β}−1)²)].
pub fn partition_function(beta: f64, gamma: Complex64) -> Result<f64> {
    check_normalizable(beta, gamma)?;
    let e = (-beta).exp_m1();
    Ok((-beta).exp() / (e * (1.0 - 4.0 * gamma.norm_sqr() / (e * e)).sqrt()))
}

/// Thermal state of an oscillator at frequency `omega`: β = −ω/T, γ = μ = 0.
pub fn thermal_state(omega: f64, bath: &BathParams) -> GeneralizedGibbsState {
    GeneralizedGibbsState { beta: -omega / bath.t, gamma: Complex64::new(0.0, 0.0), omega, mu: 0.0 }
}

/// Second moments (⟨b†b⟩, ⟨b²⟩) of the generalized Gibbs state.
///
/// ⟨b²⟩ = ∂ln Z/∂γ, and ∂ln Z/∂β = ⟨b†b⟩ + 2γ⟨b²⟩ because e^{γb²} does not
/// commute with b†b. With D = (e^{−β}−1)² − 4|γ|² this gives
/// ⟨b†b⟩ = (e^{−β}−1)/D and ⟨b²⟩ = 2γ*/D.
pub fn occupation(state: &GeneralizedGibbsState) -> Result<(f64, Complex64)> {
    check_normalizable(state.beta, state.gamma)?;
    let e = (-state.beta).exp_m1();
    // divided through by e so that β → −∞ gives 0 instead of ∞/∞
    let tail = e - 4.0 * state.gamma.norm_sqr() / e;
    Ok((1.0 / tail, 2.0 * state.gamma.conj() / (e * tail)))
}

/// Centered Gaussian state as symmetrized second moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceState {
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_pq: f64,
}

impl CovarianceState {
    pub fn new(sigma_qq: f64, sigma_pp: f64, sigma_pq: f64) -> Result<Self> {
        let cov = Self { sigma_qq, sigma_pp, sigma_pq };
        cov.check_physical()?;
        Ok(cov)
    }

    pub fn det(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_pq * self.sigma_pq
    }

    /// ν = √det σ.
    pub fn symplectic_eigenvalue(&self) -> f64 {
        self.det().max(0.0).sqrt()
    }

    pub fn check_physical(&self) -> Result<()> {
        if !(self.sigma_qq > 0.0 && self.sigma_pp > 0.0) {
            return Err(Error::domain(format!(
                "variances must be positive, got sigma_qq = {}, sigma_pp = {}",
                self.sigma_qq, self.sigma_pp
            )));
        }
        if self.det() < 0.25 * (1.0 - HEISENBERG_TOL) {
            return Err(Error::domain(format!(
                "Heisenberg bound violated: det sigma = {} < 1/4",
                self.det()
            )));
        }
        Ok(())
    }

    /// Thermal oscillator at frequency `omega`: σ_QQ = coth(ω/2T)/(2mω),
    /// σ_PP = (mω/2) coth(ω/2T).
    pub fn thermal(omega: f64, bath: &BathParams, m: f64) -> Self {
        let coth = 1.0 / (omega / (2.0 * bath.t)).tanh();
        Self { sigma_qq: coth / (2.0 * m * omega), sigma_pp: 0.5 * m * omega * coth, sigma_pq: 0.0 }
    }
}

/// Position and momentum in terms of the frame's jump operator:
/// Q = u (b + b†) and P = v b + v* b†.
///
/// The jump operator is b = √(mω/κ) ((κ+iμ)/2) (Q + (μ+iκ)/(2mω) P), which
/// has [b, b†] = 1 and reduces to the usual annihilation operator at μ = 0.
fn quadrature_coefficients(omega: f64, mu: f64, m: f64) -> Result<(f64, Complex64)> {
    let kappa = kappa(mu)?;
    let u = 1.0 / (m * omega * kappa).sqrt();
    let v = -(m * omega / kappa).sqrt() * Complex64::new(mu, kappa) / 2.0;
    Ok((u, v))
}

/// Covariance of a generalized Gibbs state in its own (ω, μ) frame.
pub fn to_covariance(state: &GeneralizedGibbsState, params: &SystemParams) -> Result<CovarianceState> {
    let (n, xi) = occupation(state)?;
    let (u, v) = quadrature_coefficients(state.omega, state.mu, params.m)?;
    let sym = 2.0 * n + 1.0;
    let sigma_qq = u * u * (2.0 * xi.re + sym);
    let sigma_pp = 2.0 * (v * v * xi).re + v.norm_sqr() * sym;
    let sigma_pq = u * (2.0 * (v * xi).re + v.re * sym);
    Ok(CovarianceState { sigma_qq, sigma_pp, sigma_pq })
}

/// Expectation values of Ĥ, L̂ = P²/2m − ½mω²Q² and Ĉ = (ω/2)(QP+PQ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentVector {
    pub h: f64,
    pub l: f64,
    pub c: f64,
}

pub fn to_moments(cov: &CovarianceState, omega: f64, params: &SystemParams) -> MomentVector {
    let kinetic = cov.sigma_pp / (2.0 * params.m);
    let potential = 0.5 * params.m * omega * omega * cov.sigma_qq;
    MomentVector { h: kinetic + potential, l: kinetic - potential, c: omega * cov.sigma_pq }
}

pub fn from_moments(mv: &MomentVector, omega: f64, params: &SystemParams) -> CovarianceState {
    CovarianceState {
        sigma_qq: (mv.h - mv.l) / (params.m * omega * omega),
        sigma_pp: params.m * (mv.h + mv.l),
        sigma_pq: mv.c / omega,
    }
}

/// Determinants entering the centered Scutaru form, with A_i = 2σ_i.
fn scutaru_terms(a: &CovarianceState, b: &CovarianceState) -> (f64, f64) {
    let qq = 2.0 * (a.sigma_qq + b.sigma_qq);
    let pp = 2.0 * (a.sigma_pp + b.sigma_pp);
    let pq = 2.0 * (a.sigma_pq + b.sigma_pq);
    let big = qq * pp - pq * pq;
    let small = ((4.0 * a.det() - 1.0) * (4.0 * b.det() - 1.0)).max(0.0);
    (big, small)
}

/// Uhlmann fidelity of two centered Gaussian states,
/// F = 2/(√(Δ+δ) − √δ) with Δ = det(A₁+A₂), δ = (det A₁ − 1)(det A₂ − 1).
///
/// Evaluated as 2(√(Δ+δ) + √δ)/Δ, which avoids the cancellation for
/// strongly mixed states.
pub fn fidelity(a: &CovarianceState, b: &CovarianceState) -> Result<f64> {
    a.check_physical()?;
    b.check_physical()?;
    let (big, small) = scutaru_terms(a, b);
    Ok((2.0 * ((big + small).sqrt() + small.sqrt()) / big).min(1.0))
}

/// Fidelity of displaced states whose means differ by `u = (ΔQ, ΔP)`.
pub fn fidelity_displaced(a: &CovarianceState, b: &CovarianceState, u: [f64; 2]) -> Result<f64> {
    let centered = fidelity(a, b)?;
    let qq = 2.0 * (a.sigma_qq + b.sigma_qq);
    let pp = 2.0 * (a.sigma_pp + b.sigma_pp);
    let pq = 2.0 * (a.sigma_pq + b.sigma_pq);
    let det = qq * pp - pq * pq;
    // uᵀ (A₁+A₂)⁻¹ u
    let quad = (pp * u[0] * u[0] - 2.0 * pq * u[0] * u[1] + qq * u[1] * u[1]) / det;
    Ok(centered * (-quad).exp())
}

/// Single-mode Gaussian entropy
/// S = (ν+½)ln(ν+½) − (ν−½)ln(ν−½), ν = √det σ.
pub fn von_neumann_entropy(cov: &CovarianceState) -> Result<f64> {
    cov.check_physical()?;
    let nu = cov.symplectic_eigenvalue().max(0.5);
    Ok(xlnx(nu + 0.5) - xlnx(nu - 0.5))
}

fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Thermal energy (ω/2) coth(ω/2T).
pub fn thermal_energy(omega: f64, bath: &BathParams) -> f64 {
    0.5 * omega / (omega / (2.0 * bath.t)).tanh()
}
