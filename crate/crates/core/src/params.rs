//! Model parameters. Units: ħ = k_B = 1; frequencies, temperatures and
//! times are plain dimensionless numbers ("atomic units").

use crate::error::{Error, Result};

/// Mass and end-point frequencies of the trapped particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub m: f64,
    pub omega_i: f64,
    pub omega_f: f64,
}

impl SystemParams {
    pub fn new(m: f64, omega_i: f64, omega_f: f64) -> Result<Self> {
        positive("system.m", m)?;
        positive("system.omega_i", omega_i)?;
        positive("system.omega_f", omega_f)?;
        Ok(Self { m, omega_i, omega_f })
    }

    /// Compression 5 → 10 with unit mass.
    pub fn compression() -> Self {
        Self { m: 1.0, omega_i: 5.0, omega_f: 10.0 }
    }

    /// Expansion 10 → 5 with unit mass.
    pub fn expansion() -> Self {
        Self { m: 1.0, omega_i: 10.0, omega_f: 5.0 }
    }

    pub fn direction(&self) -> Direction {
        if self.omega_f >= self.omega_i {
            Direction::Compression
        } else {
            Direction::Expansion
        }
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_i.min(self.omega_f)
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::compression()
    }
}

/// Bath temperature `t` and coupling prefactor `g`, which fix the decay rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Temperature (energy units).
    pub t: f64,
    /// Coupling prefactor |d|²/(8π ε₀ ħ c).
    pub g: f64,
}

impl BathParams {
    pub fn new(t: f64, g: f64) -> Result<Self> {
        positive("bath.T", t)?;
        positive("bath.g", g)?;
        Ok(Self { t, g })
    }
}

impl Default for BathParams {
    fn default() -> Self {
        Self { t: 2.0, g: 0.02 }
    }
}

/// Direction of the stroke; selects the efficiency convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Compression,
    Expansion,
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, requirement: "must be finite and > 0" })
    }
}
