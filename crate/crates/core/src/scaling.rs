//! Unit boundary between SI quantities and the dimensionless variables used
//! everywhere else in the crate.
//!
//! With a length scale `ξ`, a time scale `τ` and a particle mass `m`, the
//! scaled Schrödinger equation carries an effective Planck constant
//! `ħ̃ = ħτ/(mξ²)`. The scaled mass is 1.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Result};

/// Reduced Planck constant in J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Atomic mass constant in kg (CODATA 2018).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Rubidium-87 mass in kg.
pub const RB87_MASS: f64 = 86.909_180_527 * ATOMIC_MASS_UNIT;
/// Electron rest mass in kg (CODATA 2018).
pub const ELECTRON_MASS: f64 = 9.109_383_7015e-31;
/// Joules per electronvolt.
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;
/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledUnits {
    /// `ξ` in meters.
    length: f64,
    /// `τ` in seconds.
    time: f64,
    /// `m` in kilograms.
    mass: f64,
}

/// A point in phase space plus time. Used in both SI and scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpacePoint {
    pub x: f64,
    pub z: f64,
    pub t: f64,
    pub p: f64,
}

impl ScaledUnits {
    pub fn new(length: f64, time: f64, mass: f64) -> Result<Self> {
        check_positive("length_scale", length)?;
        check_positive("time_scale", time)?;
        check_positive("mass", mass)?;
        Ok(Self { length, time, mass })
    }

    /// Picks `τ` so that the given `ħ̃` is realized for this length and mass.
    pub fn with_hbar_eff(length: f64, mass: f64, hbar_eff: f64) -> Result<Self> {
        check_positive("hbar_eff", hbar_eff)?;
        Self::new(length, hbar_eff * mass * length * length / HBAR, mass)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Effective dimensionless Planck constant `ħτ/(mξ²)`.
    pub fn hbar_eff(&self) -> f64 {
        HBAR * self.time / (self.mass * self.length * self.length)
    }

    /// Momentum scale `mξ/τ`.
    pub fn momentum_unit(&self) -> f64 {
        self.mass * self.length / self.time
    }

    /// Velocity scale `ξ/τ`.
    pub fn velocity_unit(&self) -> f64 {
        self.length / self.time
    }

    /// Energy scale `mξ²/τ²`.
    pub fn energy_unit(&self) -> f64 {
        self.mass * self.length * self.length / (self.time * self.time)
    }

    pub fn scale(&self, physical: PhaseSpacePoint) -> PhaseSpacePoint {
        PhaseSpacePoint {
            x: physical.x / self.length,
            z: physical.z / self.length,
            t: physical.t / self.time,
            p: physical.p / self.momentum_unit(),
        }
    }

    pub fn unscale(&self, scaled: PhaseSpacePoint) -> PhaseSpacePoint {
        PhaseSpacePoint {
            x: scaled.x * self.length,
            z: scaled.z * self.length,
            t: scaled.t * self.time,
            p: scaled.p * self.momentum_unit(),
        }
    }

    /// Rows of `(quantity, scaled value, SI value, SI unit)` for a handful of
    /// representative scaled quantities at the given oscillator frequency and
    /// longitudinal momentum.
    pub fn conversion_table(&self, omega: f64, p_z: f64) -> Vec<(String, f64, f64, &'static str)> {
        let mut rows = vec![
            ("length_scale".to_string(), 1.0, self.length, "m"),
            ("time_scale".to_string(), 1.0, self.time, "s"),
            ("mass".to_string(), 1.0, self.mass, "kg"),
            ("hbar_eff".to_string(), self.hbar_eff(), HBAR, "J s"),
            ("momentum_unit".to_string(), 1.0, self.momentum_unit(), "kg m/s"),
            ("energy_unit".to_string(), 1.0, self.energy_unit(), "J"),
        ];
        rows.push(("omega".to_string(), omega, omega / self.time, "rad/s"));
        rows.push(("p_z".to_string(), p_z, p_z * self.momentum_unit(), "kg m/s"));
        rows.push(("v_z".to_string(), p_z, p_z * self.velocity_unit(), "m/s"));
        let kinetic = 0.5 * p_z * p_z * self.energy_unit();
        rows.push(("kinetic_z".to_string(), 0.5 * p_z * p_z, kinetic / ELECTRON_VOLT, "eV"));
        rows.push(("kinetic_z_temperature".to_string(), 0.5 * p_z * p_z, kinetic / BOLTZMANN, "K"));
        rows
    }
}
