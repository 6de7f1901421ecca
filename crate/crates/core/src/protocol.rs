use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{derivative, second_derivative};
use crate::params::BathParams;
use crate::rates::{
    decay_rates, inertial_parameter, min_protocol_duration, modified_frequency, InertialReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    Ste,
    Quench,
    Adiabatic,
    Custom,
}

impl ProtocolKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolKind::Ste => "ste",
            ProtocolKind::Quench => "quench",
            ProtocolKind::Adiabatic => "adiabatic",
            ProtocolKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ste" => Ok(ProtocolKind::Ste),
            "quench" => Ok(ProtocolKind::Quench),
            "adiabatic" => Ok(ProtocolKind::Adiabatic),
            "custom" => Ok(ProtocolKind::Custom),
            other => Err(format!("unknown protocol kind `{other}` (expected ste, quench, adiabatic or custom)")),
        }
    }
}

/// A driving protocol sampled on a uniform time grid, with the derived
/// adiabatic parameter, modified frequency and rates at every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub kind: ProtocolKind,
    pub t: Vec<f64>,
    pub omega: Vec<f64>,
    pub mu: Vec<f64>,
    pub alpha: Vec<f64>,
    pub k_down: Vec<f64>,
    pub k_up: Vec<f64>,
    pub inertial: InertialReport,
}

impl Protocol {
    /// Builds a protocol from frequency samples alone; μ comes from finite
    /// differences and α from ω√(1 − μ²/4).
    pub fn from_omega(kind: ProtocolKind, t: Vec<f64>, omega: Vec<f64>, bath: &BathParams, f: f64) -> Result<Self> {
        let h = grid_step(&t)?;
        let d = derivative(&omega, h);
        let mu: Vec<f64> = omega.iter().zip(&d).map(|(w, wd)| wd / (w * w)).collect();
        Self::from_samples(kind, t, omega, mu, None, bath, f)
    }

    /// Builds a protocol from explicit ω and μ samples. When `alpha` is
    /// `None` it is derived from ω and μ; rates always follow from α and the
    /// bath.
    pub fn from_samples(
        kind: ProtocolKind,
        t: Vec<f64>,
        omega: Vec<f64>,
        mu: Vec<f64>,
        alpha: Option<Vec<f64>>,
        bath: &BathParams,
        f: f64,
    ) -> Result<Self> {
        let n = t.len();
        if omega.len() != n || mu.len() != n || alpha.as_ref().is_some_and(|a| a.len() != n) {
            return Err(Error::domain("protocol columns have different lengths"));
        }
        let h = grid_step(&t)?;
        for i in 0..n {
            if !(omega[i] > 0.0) || !omega[i].is_finite() {
                return Err(Error::domain(format!("omega must be positive, got {} at t = {}", omega[i], t[i])));
            }
            if !(mu[i].abs() < 2.0) {
                return Err(Error::AdiabaticBreakdown { t: t[i], mu: mu[i] });
            }
        }
        let alpha = match alpha {
            Some(a) => a,
            None => omega.iter().zip(&mu).map(|(&w, &m)| modified_frequency(w, m)).collect::<Result<_>>()?,
        };
        let mut k_down = Vec::with_capacity(n);
        let mut k_up = Vec::with_capacity(n);
        for &a in &alpha {
            let r = decay_rates(a, bath)?;
            k_down.push(r.k_down);
            k_up.push(r.k_up);
        }
        let inertial = if kind == ProtocolKind::Quench {
            // a sudden jump lies outside the inertial regime altogether
            InertialReport { upsilon_max: f64::NAN, t_f_min: f64::NAN, f }
        } else {
            inertial_report(&omega, &mu, h, f)?
        };
        Ok(Self { kind, t, omega, mu, alpha, k_down, k_up, inertial })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_f(&self) -> f64 {
        *self.t.last().expect("protocol grid is never empty")
    }

    pub fn dt(&self) -> f64 {
        self.t[1] - self.t[0]
    }

    /// ω̇ = μω² at every sample.
    pub fn omega_dot(&self) -> Vec<f64> {
        self.omega.iter().zip(&self.mu).map(|(w, m)| m * w * w).collect()
    }
}

fn grid_step(t: &[f64]) -> Result<f64> {
    if t.len() < 4 {
        return Err(Error::domain(format!("protocol grid needs at least 4 samples, got {}", t.len())));
    }
    if t[0] != 0.0 {
        return Err(Error::domain(format!("protocol grid must start at t = 0, got {}", t[0])));
    }
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::domain("protocol grid must be increasing"));
    }
    for (i, w) in t.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h {
            return Err(Error::domain(format!("protocol grid is not uniform near t = {}", t[i])));
        }
    }
    Ok(h)
}

fn inertial_report(omega: &[f64], mu: &[f64], h: f64, f: f64) -> Result<InertialReport> {
    let wd = derivative(omega, h);
    let wdd = second_derivative(omega, h);
    let mut upsilon_max: f64 = 0.0;
    for i in 0..omega.len() {
        upsilon_max = upsilon_max.max(inertial_parameter(omega[i], wd[i], wdd[i])?.abs());
    }
    Ok(InertialReport { upsilon_max, t_f_min: min_protocol_duration(omega, mu, f), f })
}
