//! Shortcut-to-equilibration protocols for a harmonic oscillator in a thermal
//! bath: state algebra, non-adiabatic rates, protocol synthesis, open-system
//! dynamics and thermodynamic bookkeeping.
//!
//! Units are natural (ħ = k_B = 1).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod numerics;
pub mod params;
pub mod protocol;
pub mod rates;
pub mod synthesis;
pub mod thermo;

pub use dynamics::{
    adiabatic_trajectory, evolve_beta_gamma, quench_relax, quench_sudden, quench_trajectory, StateSamples, Trajectory,
};
pub use error::{Error, Result};
pub use gaussian::{CovarianceState, GeneralizedGibbsState, MomentVector};
pub use params::{BathParams, Direction, SystemParams};
pub use protocol::{Protocol, ProtocolKind};
pub use rates::{InertialReport, RatePair};
pub use synthesis::{synthesize_ste, SteAnsatz, SynthesisOptions};
pub use thermo::{efficiency, entropy_balance, fit_decay_rate, free_energy_difference, EntropyBalance};
