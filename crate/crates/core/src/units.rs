//! Physical constants and the handful of conversions between natural units
//! (ħ = c = 1, energies in eV, Heaviside–Lorentz charges) and SI.
//!
//! Constants are CODATA 2018.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elementary charge (C); also J per eV.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Reduced Planck constant (J·s)
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light (m/s)
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum permeability (N/A²)
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Fine-structure constant
pub const ALPHA: f64 = 7.297_352_569_3e-3;

/// Bohr radius (m)
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// ħc in eV·nm
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// One atomic unit of dipole moment, e·a₀, in C·m.
pub const EA0_SI: f64 = ELEMENTARY_CHARGE * BOHR_RADIUS;

/// Which unit system a number is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    /// ħ = c = 1, energies in eV.
    NaturalEv,
    Si,
}

/// Physical dimension of a quantity, used by [`convert`].
///
/// SI targets: energy → s⁻¹ (angular frequency), length → m, time → s,
/// velocity → m/s, rate → s⁻¹, dipole → C·m. The natural dipole unit is
/// eV⁻¹ with the Heaviside–Lorentz charge e = √(4πα).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Energy,
    Length,
    Time,
    Velocity,
    Rate,
    Dipole,
}

fn si_per_natural(dim: Dimension) -> f64 {
    match dim {
        Dimension::Energy | Dimension::Rate => ELEMENTARY_CHARGE / HBAR,
        Dimension::Length => HBAR_C_EV_NM * 1e-9,
        Dimension::Time => HBAR / ELEMENTARY_CHARGE,
        Dimension::Velocity => SPEED_OF_LIGHT,
        Dimension::Dipole => EA0_SI / dipole_ea0_to_natural(1.0),
    }
}

/// Converts `value` of dimension `dim` between unit systems.
pub fn convert(value: f64, dim: Dimension, from: UnitSystem, to: UnitSystem) -> f64 {
    match (from, to) {
        (UnitSystem::NaturalEv, UnitSystem::Si) => value * si_per_natural(dim),
        (UnitSystem::Si, UnitSystem::NaturalEv) => value / si_per_natural(dim),
        _ => value,
    }
}

/// Energy in eV to angular frequency in s⁻¹.
pub fn energy_to_angular_frequency(energy_ev: f64) -> f64 {
    energy_ev * (ELEMENTARY_CHARGE / HBAR)
}

/// Angular frequency in s⁻¹ to energy in eV.
pub fn angular_frequency_to_energy(omega: f64) -> f64 {
    omega * (HBAR / ELEMENTARY_CHARGE)
}

/// ħc/E in nm.
pub fn inverse_energy_to_length(energy_ev: f64) -> Result<f64> {
    if !(energy_ev > 0.0) || !energy_ev.is_finite() {
        return Err(Error::Domain(format!(
            "inverse_energy_to_length needs a positive finite energy, got {energy_ev}"
        )));
    }
    Ok(HBAR_C_EV_NM / energy_ev)
}

/// Length in nm to the corresponding energy ħc/L in eV.
pub fn length_to_energy(length_nm: f64) -> Result<f64> {
    if !(length_nm > 0.0) || !length_nm.is_finite() {
        return Err(Error::Domain(format!(
            "length_to_energy needs a positive finite length, got {length_nm}"
        )));
    }
    Ok(HBAR_C_EV_NM / length_nm)
}

/// μ₀/(ħc²) in SI base units (s³ C⁻² m⁻³).
///
/// Multiplying a 3D rate expression evaluated with angular frequencies,
/// velocities in m/s and dipoles in C·m by this factor gives s⁻¹.
pub fn si_rate_factor() -> f64 {
    MU_0 / (HBAR * SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

/// Dipole moment in e·a₀ to C·m.
pub fn dipole_ea0_to_si(d_ea0: f64) -> f64 {
    d_ea0 * EA0_SI
}

/// Dipole moment in e·a₀ to natural units (eV⁻¹), e = √(4πα).
pub fn dipole_ea0_to_natural(d_ea0: f64) -> f64 {
    let charge = (4.0 * std::f64::consts::PI * ALPHA).sqrt();
    let a0_per_ev = BOHR_RADIUS * 1e9 / HBAR_C_EV_NM;
    d_ea0 * charge * a0_per_ev
}

/// Velocity as a fraction of c to m/s.
pub fn velocity_to_si(v: f64) -> f64 {
    v * SPEED_OF_LIGHT
}

/// Velocity as a fraction of c to cm/s.
pub fn velocity_to_cm_per_s(v: f64) -> f64 {
    v * SPEED_OF_LIGHT * 100.0
}
