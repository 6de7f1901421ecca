use ste_core::gaussian::thermal_state;
use ste_core::numerics::derivative;
use ste_core::rates::modified_frequency;
use ste_core::synthesis::{
    adiabatic_protocol, recover_omega_with, solve_alpha, synthesize_from_ansatz, synthesize_ste_with, y_ansatz,
    Ansatz, RecoveryOptions,
};
use ste_core::{evolve_beta_gamma, BathParams, Error, SteAnsatz, SynthesisOptions, SystemParams};

fn both() -> [SystemParams; 2] {
    [SystemParams::compression(), SystemParams::expansion()]
}

fn opts(n_grid: usize) -> SynthesisOptions {
    SynthesisOptions { n_grid, ..Default::default() }
}

#[test]
fn closing_the_loop_reproduces_the_ansatz() {
    let bath = BathParams::default();
    for params in both() {
        for t_f in [8.0, 16.0, 32.0] {
            let p = synthesize_ste_with(&params, &bath, t_f, &opts(4000)).unwrap();
            let ansatz = SteAnsatz::thermal(&params, &bath, t_f, 4000).unwrap();
            let traj = evolve_beta_gamma(&p, &thermal_state(params.omega_i, &bath), &params, &bath).unwrap();
            let worst = traj
                .t
                .iter()
                .zip(traj.beta())
                .map(|(t, b)| {
                    let y = y_ansatz(t / t_f, &ansatz).0;
                    (b.exp() - y).abs() / y
                })
                .fold(0.0, f64::max);
            assert!(worst < 1e-4, "{:?} t_f = {t_f}: max relative y error {worst:e}", params.direction());
        }
    }
}

#[test]
fn recovered_frequency_satisfies_the_modified_frequency_relation() {
    let bath = BathParams::default();
    for params in both() {
        let p = synthesize_ste_with(&params, &bath, 8.0, &opts(4000)).unwrap();
        let d = derivative(&p.omega, p.dt());
        for (i, di) in d.iter().enumerate() {
            let mu = di / (p.omega[i] * p.omega[i]);
            let alpha = modified_frequency(p.omega[i], mu).unwrap();
            assert!((alpha - p.alpha[i]).abs() / p.alpha[i] < 1e-6, "sample {i}: {alpha} vs {}", p.alpha[i]);
        }
    }
}

#[test]
fn endpoint_alpha_is_thermal_and_omega_follows_relation() {
    let bath = BathParams::default();
    for params in both() {
        let p = synthesize_ste_with(&params, &bath, 8.0, &opts(4000)).unwrap();
        let last = p.len() - 1;
        assert_eq!(p.alpha[0], params.omega_i);
        assert_eq!(p.alpha[last], params.omega_f);
        for i in [0, last] {
            let expected = p.alpha[i] / (1.0 - 0.25 * p.mu[i] * p.mu[i]).sqrt();
            assert!((p.omega[i] - expected).abs() / expected < 1e-9);
        }
        assert!(p.omega.iter().all(|&w| w > 0.0));
        assert!(p.mu.iter().all(|m| m.abs() < 2.0));
    }
}

#[test]
fn mu_sign_follows_driving_direction() {
    let bath = BathParams::default();
    let comp = synthesize_ste_with(&SystemParams::compression(), &bath, 16.0, &opts(2000)).unwrap();
    let mid = comp.len() / 2;
    assert!(comp.mu[mid] > 0.0);
    let exp = synthesize_ste_with(&SystemParams::expansion(), &bath, 16.0, &opts(2000)).unwrap();
    assert!(exp.mu[mid] < 0.0);
}

#[test]
fn converges_to_the_adiabatic_path() {
    let bath = BathParams::default();
    for params in both() {
        let mut last_mu = f64::INFINITY;
        let mut last_gap = f64::INFINITY;
        for t_f in [8.0, 16.0, 32.0, 64.0, 128.0] {
            let p = synthesize_ste_with(&params, &bath, t_f, &opts(4000)).unwrap();
            let adi = adiabatic_protocol(&params, &bath, t_f, &opts(4000)).unwrap();
            let max_mu = p.mu.iter().fold(0.0f64, |a, m| a.max(m.abs()));
            let gap = p.omega.iter().zip(&adi.omega).fold(0.0f64, |a, (w, v)| a.max((w - v).abs()));
            assert!(max_mu < last_mu && gap < last_gap, "t_f = {t_f}: max|mu| = {max_mu}, gap = {gap}");
            last_mu = max_mu;
            last_gap = gap;
        }
    }
}

#[test]
fn fast_protocols_fail_as_synthesis_errors() {
    let bath = BathParams::default();
    let comp = synthesize_ste_with(&SystemParams::compression(), &bath, 4.0, &opts(2000)).unwrap_err();
    assert!(comp.is_synthesis(), "{comp}");
    let exp = synthesize_ste_with(&SystemParams::expansion(), &bath, 4.0, &opts(2000)).unwrap_err();
    assert!(exp.is_synthesis(), "{exp}");
    let too_fast = synthesize_ste_with(&SystemParams::expansion(), &bath, 1.0, &opts(2000)).unwrap_err();
    assert!(matches!(too_fast, Error::NoRoot { .. }), "{too_fast}");
}

#[test]
fn recovery_iteration_cap_is_reported() {
    let bath = BathParams::default();
    let p = synthesize_ste_with(&SystemParams::compression(), &bath, 8.0, &opts(2000)).unwrap();
    let tight = RecoveryOptions { max_iterations: 3, ..Default::default() };
    assert!(matches!(recover_omega_with(&p.alpha, &p.t, &tight), Err(Error::NoConvergence { iterations: 3, .. })));
}

#[test]
fn residual_of_the_rate_equation_is_tiny_everywhere() {
    let bath = BathParams::default();
    let params = SystemParams::compression();
    let ansatz = SteAnsatz::thermal(&params, &bath, 8.0, 400).unwrap();
    for i in 0..=400 {
        let s = i as f64 / 400.0;
        let (y, dy) = y_ansatz(s, &ansatz);
        let alpha = solve_alpha(y, dy, 8.0, &bath).unwrap();
        let r = ste_core::rates::decay_rates(alpha, &bath).unwrap();
        let res = r.k_down * y * y - y * (r.k_down + r.k_up) + r.k_up - dy / 8.0;
        assert!(res.abs() < 1e-12 * (dy / 8.0).abs().max(1.0), "s = {s}: {res:e}");
    }
}

/// y(s) = y0 + Δ(10s³ − 15s⁴ + 6s⁵): zero first and second derivatives at both
/// ends.
struct Quintic {
    y0: f64,
    delta: f64,
}

impl Ansatz for Quintic {
    fn eval(&self, s: f64) -> (f64, f64) {
        let y = self.y0 + self.delta * s.powi(3) * (10.0 - 15.0 * s + 6.0 * s * s);
        let dy = self.delta * 30.0 * s * s * (1.0 - s).powi(2);
        (y, dy)
    }
}

#[test]
fn custom_ansatz_through_the_trait() {
    let bath = BathParams::default();
    let params = SystemParams::compression();
    let t_f = 12.0;
    let q = Quintic { y0: (-2.5f64).exp(), delta: (-5.0f64).exp() - (-2.5f64).exp() };
    let p = synthesize_from_ansatz(&q, &params, &bath, t_f, &opts(4000)).unwrap();
    // flat ends in y make α̇ vanish there, so μ at the ends is far below the cubic's
    let cubic = synthesize_ste_with(&params, &bath, t_f, &opts(4000)).unwrap();
    assert!(p.mu[0].abs() < 1e-3 * cubic.mu[0].abs());
    let traj = evolve_beta_gamma(&p, &thermal_state(5.0, &bath), &params, &bath).unwrap();
    assert!(1.0 - traj.final_fidelity() < 1e-5, "1-F = {:e}", 1.0 - traj.final_fidelity());
}
