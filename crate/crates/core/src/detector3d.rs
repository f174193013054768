//! Detector rates in the 3D medium.
//!
//! The detector moves along +z with dipole matrix elements (d_x, d_y, d_z) in
//! its rest frame. After the angular integrals and the energy delta,
//!
//! dP/dt = g²G²ω²/(4π²γ²) ∫₀^∞dκ ∫₀¹dη κ³k*² W(η) / (η|v| |ζ(k*, κ)|²),
//!
//! with k* = (ω/γ + κ)/(η|v|) and W(η) = (1 + η²)/2·(d_x² + d_y²) + (1 − η²)d_z².
//! A wave-number cutoff k* < k_max restricts κ < η|v|k_max − ω/γ.
//!
//! Dipoles are taken in e·a₀ and converted to natural units (eV⁻¹,
//! Heaviside–Lorentz charge), so natural-unit rates come out in eV.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::detector1d::lorentz_gamma;
use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::quadrature::{integrate, integrate_semi_infinite, PeakHint, QuadratureConfig};
use crate::rate::{RateMethod, RateResult};
use crate::units::{self, UnitSystem};

/// Gap ω (eV), dipole magnitudes (|d_x|, |d_y|, |d_z|) in e·a₀ and velocity
/// along z as a fraction of c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec3D {
    pub gap: f64,
    pub dipoles: [f64; 3],
    pub velocity: f64,
}

impl DetectorSpec3D {
    pub fn new(gap: f64, dipoles: [f64; 3], velocity: f64) -> Result<Self> {
        let d = DetectorSpec3D { gap, dipoles, velocity };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0) || !self.gap.is_finite() {
            return Err(Error::Domain(format!("detector gap must be positive, got {}", self.gap)));
        }
        if self.dipoles.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
            return Err(Error::Domain(format!("dipole magnitudes must be >= 0, got {:?}", self.dipoles)));
        }
        if !(self.velocity.abs() < 1.0) {
            return Err(Error::Domain(format!("velocity must satisfy |v| < 1, got {}", self.velocity)));
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        lorentz_gamma(self.velocity)
    }

    pub fn with_velocity(&self, velocity: f64) -> Result<Self> {
        Self::new(self.gap, self.dipoles, velocity)
    }

    /// (d_x² + d_y², d_z²) in natural units (eV⁻²).
    fn natural_weights(&self) -> (f64, f64) {
        let n = self.dipoles.map(units::dipole_ea0_to_natural);
        (n[0] * n[0] + n[1] * n[1], n[2] * n[2])
    }
}

/// Optional wave-number cutoff k_max (eV).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub k_max: Option<f64>,
}

impl CutoffSpec {
    pub fn none() -> Self {
        CutoffSpec { k_max: None }
    }

    pub fn at(k_max: f64) -> Result<Self> {
        if !(k_max > 0.0) || !k_max.is_finite() {
            return Err(Error::Domain(format!("k_max must be positive, got {k_max}")));
        }
        Ok(CutoffSpec { k_max: Some(k_max) })
    }
}

/// Crossing of k = (a + κ)/u with the lossless dispersion curve below Ω.
fn crossing(a: f64, u: f64, m: &MediumParams) -> Option<f64> {
    if u <= 0.0 || m.coupling() == 0.0 {
        return None;
    }
    let (o2, g2) = (m.omega_res().powi(2), m.coupling().powi(2));
    let h = |kappa: f64| kappa * kappa * (1.0 + g2 / (o2 - kappa * kappa)) - ((a + kappa) / u).powi(2);
    let (mut lo, mut hi) = (0.0, m.omega_res());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Exact (κ, η) integral with γ kept exact and the optional cutoff applied as
/// a Heaviside on k*.
pub fn excitation_rate_3d_exact(
    d: &DetectorSpec3D,
    m: &MediumParams,
    cut: &CutoffSpec,
    cfg: &QuadratureConfig,
) -> Result<RateResult> {
    d.validate()?;
    cfg.validate()?;
    let (wxy, wz) = d.natural_weights();
    let g2 = m.coupling() * m.coupling();
    let v = d.velocity.abs();
    if v == 0.0 || g2 == 0.0 || wxy + wz == 0.0 {
        return Ok(RateResult::zero(RateMethod::Exact));
    }
    if m.dissipation_sq() == 0.0 {
        return Err(Error::ResonanceSingularity { omega: m.omega_res() });
    }
    let gamma = d.gamma();
    let a = d.gap / gamma;
    let width = (0.25 * m.dissipation_sq()).max(1e-9 * m.omega_res());

    // lowest η with any phase space below the cutoff
    let eta_lo = match cut.k_max {
        Some(k) => a / (v * k),
        None => 0.0,
    };
    if eta_lo >= 1.0 {
        return Ok(RateResult::zero(RateMethod::Exact));
    }

    let mut inner_ok = true;
    let mut inner_err = 0.0;
    let mut eta_integrand = |eta: f64| -> f64 {
        if eta <= 0.0 {
            return 0.0;
        }
        let u = eta * v;
        let f = |kappa: f64| {
            let k = (a + kappa) / u;
            kappa.powi(3) * k * k / m.spectral_function(k, kappa).norm_sqr()
        };
        let mut inner = cfg.clone();
        inner.peak_hints.push(PeakHint::new(m.omega_res(), width));
        if let Some(kc) = crossing(a, u, m) {
            inner.peak_hints.push(PeakHint::new(kc, width.min(m.omega_res() - kc).max(1e-12)));
        }
        let r = match cut.k_max {
            Some(k) => {
                let upper = u * k - a;
                if upper <= 0.0 {
                    return 0.0;
                }
                integrate(f, 0.0, upper, &inner)
            }
            None => integrate_semi_infinite(f, &inner),
        };
        inner_ok &= r.converged;
        inner_err += r.error;
        let weight = 0.5 * (1.0 + eta * eta) * wxy + (1.0 - eta * eta) * wz;
        weight * r.value / eta
    };

    let mut outer = cfg.clone();
    outer.peak_hints.clear();
    if let Some(k) = cut.k_max {
        // the resonance enters the allowed window at η = (ω/γ + Ω)/(|v|k_max)
        let onset = (a + m.omega_res()) / (v * k);
        outer.peak_hints.push(PeakHint::new(onset, width / (v * k)));
    }
    let r = integrate(&mut eta_integrand, eta_lo, 1.0, &outer);
    let pref = g2 * m.dissipation_sq() * d.gap * d.gap / (4.0 * PI * PI * gamma * gamma * v);
    Ok(RateResult {
        value: pref * r.value,
        method: RateMethod::Exact,
        error_estimate: pref * (r.error + inner_err / 21.0),
        units: UnitSystem::NaturalEv,
        converged: r.converged && inner_ok,
        warnings: Vec::new(),
    })
}

/// Common factor (g²ω²/4π)·Ω/(Ω + ω)²·|v| of the closed forms.
fn closed_prefactor(d: &DetectorSpec3D, m: &MediumParams) -> f64 {
    let (w, o) = (d.gap, m.omega_res());
    (m.coupling() * w).powi(2) / (4.0 * PI) * o / (o + w).powi(2) * d.velocity.abs()
}

/// Small-v, weak-G closed form
/// (g²ω²/4π)·Ω/(Ω + ω)²·|v|·[(3/8)(d_x² + d_y²) + (1/4)d_z²].
pub fn excitation_rate_3d_closed(d: &DetectorSpec3D, m: &MediumParams) -> Result<RateResult> {
    d.validate()?;
    let (wxy, wz) = d.natural_weights();
    let value = closed_prefactor(d, m) * (0.375 * wxy + 0.25 * wz);
    let mut r = RateResult::closed(value, RateMethod::WeakDissipation);
    if d.velocity.abs() > 0.25 {
        r.warnings.push(format!("closed form used at |v| = {} > 0.25", d.velocity.abs()));
    }
    Ok(r)
}

/// η_min = (ω + Ω)/(|v|k_max).
pub fn eta_min(omega: f64, m: &MediumParams, v: f64, k_max: f64) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::Domain("eta_min needs a nonzero velocity".into()));
    }
    if !(k_max > 0.0) {
        return Err(Error::Domain(format!("k_max must be positive, got {k_max}")));
    }
    Ok((omega + m.omega_res()) / (v.abs() * k_max))
}

/// ∫_{η_min}^1 η(1 + η²)/2 dη = max(3/8 − η_min²/4 − η_min⁴/8, 0).
pub fn cutoff_prefactor(eta_min: f64) -> f64 {
    let e = eta_min.max(0.0);
    if e >= 1.0 {
        return 0.0;
    }
    (0.375 - 0.25 * e * e - 0.125 * e.powi(4)).max(0.0)
}

/// Closed form with 3/8 → [`cutoff_prefactor`] and 1/4 → 0 when a cutoff is
/// present; equal to [`excitation_rate_3d_closed`] without one.
pub fn excitation_rate_3d_cutoff(d: &DetectorSpec3D, m: &MediumParams, cut: &CutoffSpec) -> Result<RateResult> {
    d.validate()?;
    let Some(k_max) = cut.k_max else {
        return excitation_rate_3d_closed(d, m);
    };
    if d.velocity == 0.0 {
        return Ok(RateResult::zero(RateMethod::Cutoff));
    }
    let (wxy, _) = d.natural_weights();
    let pre = cutoff_prefactor(eta_min(d.gap, m, d.velocity, k_max)?);
    let mut r = RateResult::closed(closed_prefactor(d, m) * pre * wxy, RateMethod::Cutoff);
    if d.velocity.abs() > 0.25 {
        r.warnings.push(format!("closed form used at |v| = {} > 0.25", d.velocity.abs()));
    }
    Ok(r)
}

/// Zero-velocity decay rate (ω³/3π)·√(1 + g²/(Ω² − ω²))·Σ|d_i|², valid for ω < Ω.
pub fn decay_rate_3d(d: &DetectorSpec3D, m: &MediumParams) -> Result<RateResult> {
    d.validate()?;
    let (w, o) = (d.gap, m.omega_res());
    if w >= o {
        return Err(Error::Domain(format!("decay rate formula needs omega < Omega, got {w} >= {o}")));
    }
    let (wxy, wz) = d.natural_weights();
    let enhancement = (1.0 + m.coupling().powi(2) / (o * o - w * w)).sqrt();
    Ok(RateResult::closed(w.powi(3) / (3.0 * PI) * enhancement * (wxy + wz), RateMethod::ZeroVelocityDecay))
}

/// Excitation-to-decay ratio for 2s → 3p (m = ±1, d_z = 0):
/// (9/32)·√(1 − g²/(Ω² − ω² + g²))·g²/(Ω + ω)²·(Ω/ω)·|v|.
pub fn rate_ratio_2s3p(m: &MediumParams, omega: f64, v: f64) -> Result<f64> {
    let o = m.omega_res();
    if !(omega > 0.0) || omega >= o {
        return Err(Error::Domain(format!("ratio formula needs 0 < omega < Omega, got {omega}")));
    }
    let g2 = m.coupling().powi(2);
    Ok(9.0 / 32.0 * (1.0 - g2 / (o * o - omega * omega + g2)).sqrt() * g2 / (o + omega).powi(2) * (o / omega) * v.abs())
}

/// A rate in SI together with the excitation probability per cm of path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiRate {
    pub per_second: f64,
    /// None when the detector is at rest.
    pub per_cm: Option<f64>,
}

/// Converts a natural-unit rate (eV) to s⁻¹ and to probability per cm of
/// path at velocity `v`.
pub fn rate_to_si(rate: &RateResult, v: f64) -> Result<SiRate> {
    if rate.units != UnitSystem::NaturalEv {
        return Err(Error::Units(format!("expected a natural-unit rate, got {:?}", rate.units)));
    }
    let per_second = units::energy_to_angular_frequency(rate.value);
    let speed = units::velocity_to_cm_per_s(v.abs());
    Ok(SiRate {
        per_second,
        per_cm: (speed > 0.0).then(|| per_second / speed),
    })
}

/// The closed form evaluated directly in SI: Ω, g, ω as angular frequencies,
/// v in m/s, dipoles in C·m, times μ₀/(ħc²). Returns s⁻¹.
pub fn excitation_rate_3d_closed_si(d: &DetectorSpec3D, m: &MediumParams) -> Result<f64> {
    d.validate()?;
    let w = units::energy_to_angular_frequency(d.gap);
    let o = units::energy_to_angular_frequency(m.omega_res());
    let g = units::energy_to_angular_frequency(m.coupling());
    let v = units::velocity_to_si(d.velocity.abs());
    let si = d.dipoles.map(units::dipole_ea0_to_si);
    let bracket = 0.375 * (si[0] * si[0] + si[1] * si[1]) + 0.25 * si[2] * si[2];
    Ok(units::si_rate_factor() * (g * w).powi(2) / (4.0 * PI) * o / (o + w).powi(2) * v * bracket)
}
