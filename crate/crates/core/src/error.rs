use thiserror::Error;

/// Errors raised by state construction, protocol synthesis and integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation (non-normalizable
    /// state, |μ| ≥ 2, Heisenberg violation, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A model parameter violates its invariant.
    #[error("invalid parameter `{name}` = {value}: {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// The implicit rate equation has no bracketed root at this point of the
    /// ansatz.
    #[error("no modified-frequency root at s = {s} (y = {y}, dy/ds = {dy_ds})")]
    NoRoot { s: f64, y: f64, dy_ds: f64 },

    /// The fixed-point inversion of the modified frequency did not converge.
    #[error(
        "frequency recovery did not converge after {iterations} iterations \
         (last change {last_change:e}); t_f is probably below the inertial bound"
    )]
    NoConvergence { iterations: usize, last_change: f64 },

    /// The adiabatic parameter reached |μ| ≥ 2 where κ = √(4−μ²) is no longer real.
    #[error("adiabatic parameter |mu| = {} >= 2 at t = {t}", mu.abs())]
    AdiabaticBreakdown { t: f64, mu: f64 },

    /// A state left its admissible domain during time integration.
    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures that originate in protocol synthesis.
    pub fn is_synthesis(&self) -> bool {
        matches!(
            self,
            Error::NoRoot { .. } | Error::NoConvergence { .. } | Error::AdiabaticBreakdown { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
