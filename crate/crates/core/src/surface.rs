//! Evanescent fields outside the medium.
//!
//! Near the resonance the vacuum-side modes have ω ≈ Ω and wave-vector k_z
//! along the surface, so they decay as exp(−√(k_z² − Ω²)·d). A detector moving
//! parallel to the surface is excited once the Doppler shift k_z·v exceeds
//! ω/γ + Ω.

use roots::{find_root_brent, SimpleConvergency};
use serde::{Deserialize, Serialize};

use crate::detector1d::lorentz_gamma;
use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::units;

/// Where the detector runs relative to the medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceGeometry {
    /// Flat plate at a fixed distance (nm).
    PlateDistance(f64),
    /// Beam through a cylindrical hole of radius R (mm), filling it uniformly.
    HoleRadius(f64),
}

impl SurfaceGeometry {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SurfaceGeometry::PlateDistance(d) if d >= 0.0 && d.is_finite() => Ok(()),
            SurfaceGeometry::HoleRadius(r) if r > 0.0 && r.is_finite() => Ok(()),
            g => Err(Error::Domain(format!("invalid geometry {g:?}"))),
        }
    }

    /// Rate suppression for modes with e-folding length `ell_nm`.
    pub fn suppression(&self, ell_nm: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            SurfaceGeometry::PlateDistance(d) => suppression_at_distance(d, ell_nm),
            SurfaceGeometry::HoleRadius(r) => beam_average_suppression(r, ell_nm),
        }
    }
}

/// k_z·v ≥ ω/γ + Ω.
pub fn excitation_condition(omega: f64, m: &MediumParams, v: f64, k_z: f64) -> bool {
    if !(v.abs() < 1.0) {
        return false;
    }
    k_z * v.abs() >= omega / lorentz_gamma(v) + m.omega_res()
}

/// Solves v·k_max = ω/γ(v) + Ω for v ∈ (0, 1).
pub fn min_velocity(omega: f64, m: &MediumParams, k_max: f64) -> Result<f64> {
    let o = m.omega_res();
    if !(k_max > o) || !k_max.is_finite() {
        return Err(Error::Infeasible(format!(
            "k_max = {k_max} eV does not exceed Omega = {o} eV: no subluminal threshold"
        )));
    }
    if !(omega >= 0.0) {
        return Err(Error::Domain(format!("gap must be >= 0, got {omega}")));
    }
    let h = |v: f64| v * k_max - omega * (1.0 - v * v).sqrt() - o;
    let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
    find_root_brent(0.0, 1.0, &h, &mut conv)
        .map_err(|e| Error::NotConverged(format!("min_velocity root find: {e:?}")))
}

/// The γ = 1 threshold (ω + Ω)/k_max.
pub fn min_velocity_nonrelativistic(omega: f64, m: &MediumParams, k_max: f64) -> Result<f64> {
    let v = (omega + m.omega_res()) / k_max;
    if !(k_max > 0.0) || !(v < 1.0) {
        return Err(Error::Infeasible(format!(
            "k_max = {k_max} eV gives no subluminal threshold (needs k_max > omega + Omega)"
        )));
    }
    Ok(v)
}

/// ℓ = 1/√(k_z² − Ω²) in nm.
pub fn efolding_length(k_z: f64, m: &MediumParams) -> Result<f64> {
    let o = m.omega_res();
    if !(k_z > o) {
        return Err(Error::Domain(format!("k_z = {k_z} eV <= Omega = {o} eV: mode propagates")));
    }
    units::inverse_energy_to_length(((k_z - o) * (k_z + o)).sqrt())
}

/// exp(−2d/ℓ): the rate involves the field twice.
pub fn suppression_at_distance(d_nm: f64, ell_nm: f64) -> Result<f64> {
    if !(d_nm >= 0.0) || !(ell_nm > 0.0) {
        return Err(Error::Domain(format!("need d >= 0 and ell > 0, got d = {d_nm}, ell = {ell_nm}")));
    }
    Ok((-2.0 * d_nm / ell_nm).exp())
}

/// Disk average (2/R²)∫₀^R r·exp(−2(R − r)/ℓ) dr = 2(x − 1 + e^{−x})/x² with
/// x = 2R/ℓ. Tends to ℓ/R for ℓ ≪ R and to 1 for ℓ → ∞.
pub fn beam_average_suppression(r_mm: f64, ell_nm: f64) -> Result<f64> {
    if !(r_mm > 0.0) || !(ell_nm > 0.0) {
        return Err(Error::Domain(format!("need R > 0 and ell > 0, got R = {r_mm}, ell = {ell_nm}")));
    }
    if ell_nm.is_infinite() {
        return Ok(1.0);
    }
    let x = 2.0 * r_mm * 1e6 / ell_nm;
    if x < 1e-3 {
        return Ok(1.0 - x / 3.0 + x * x / 12.0 - x.powi(3) / 60.0);
    }
    Ok(2.0 * (x + (-x).exp_m1()) / (x * x))
}
