//! Excitation rate of an inertial two-level detector moving through the 1D
//! medium, to lowest order in its coupling λ:
//!
//! dP/dt = λ²g²G²ω²/(4πγ²) ∫dκ dk |κ|³/|ζ(k, κ)|² δ(ω/γ + |κ| − kv).
//!
//! The delta fixes k* = (ω/γ + |κ|)/|v|; the detector picks up only modes it
//! overtakes (|κ| < k*v, the anomalous Doppler region).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::quadrature::{integrate_semi_infinite, PeakHint, QuadratureConfig};
use crate::rate::{RateMethod, RateResult};

/// Gap ω (eV), model coupling λ and velocity v (fraction of c).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec1D {
    pub gap: f64,
    pub coupling_lambda: f64,
    pub velocity: f64,
}

impl DetectorSpec1D {
    pub fn new(gap: f64, coupling_lambda: f64, velocity: f64) -> Result<Self> {
        let d = DetectorSpec1D { gap, coupling_lambda, velocity };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gap > 0.0) || !self.gap.is_finite() {
            return Err(Error::Domain(format!("detector gap must be positive, got {}", self.gap)));
        }
        if !self.coupling_lambda.is_finite() {
            return Err(Error::Domain("detector coupling must be finite".into()));
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
        Self::new(self.gap, self.coupling_lambda, velocity)
    }
}

pub(crate) fn lorentz_gamma(v: f64) -> f64 {
    1.0 / ((1.0 - v) * (1.0 + v)).sqrt()
}

/// k*(κ) = (ω/γ + |κ|)/|v|, the wave number selected by energy conservation
/// in the detector frame.
pub fn resonant_wavenumber(d: &DetectorSpec1D, kappa: f64) -> f64 {
    (d.gap / d.gamma() + kappa.abs()) / d.velocity.abs()
}

/// κ³/|ζ(k*(κ), κ)|², the integrand of the exact rate.
pub fn exact_rate_integrand(d: &DetectorSpec1D, m: &MediumParams, kappa: f64) -> f64 {
    let k = resonant_wavenumber(d, kappa);
    kappa.abs().powi(3) / m.spectral_function(k, kappa).norm_sqr()
}

/// Frequency below Ω where the line k = k*(κ) crosses the lossless
/// dispersion curve k² = κ²(1 + g²/(Ω² − κ²)), found by bisection.
pub fn dispersion_crossing(d: &DetectorSpec1D, m: &MediumParams) -> Option<f64> {
    if d.velocity == 0.0 || m.coupling() == 0.0 {
        return None;
    }
    let (o2, g2) = (m.omega_res().powi(2), m.coupling().powi(2));
    let h = |kappa: f64| kappa * kappa * (1.0 + g2 / (o2 - kappa * kappa)) - resonant_wavenumber(d, kappa).powi(2);
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

fn peak_hints(d: &DetectorSpec1D, m: &MediumParams) -> Vec<PeakHint> {
    let floor = 1e-9 * m.omega_res();
    let mut hints = vec![PeakHint::new(m.omega_res(), (0.25 * m.dissipation_sq()).max(floor))];
    if let Some(kc) = dispersion_crossing(d, m) {
        // width ≈ Im q / |d(Re q − k*)/dκ|
        let q = |kappa: f64| m.complex_wavenumber(kappa).ok();
        let h = 1e-6 * kc.max(floor);
        if let (Some(q0), Some(q1), Some(q2)) = (q(kc), q(kc - h), q(kc + h)) {
            let slope = (q2.re - q1.re) / (2.0 * h) - 1.0 / d.velocity.abs();
            let width = (q0.im / slope.abs()).abs().max(floor);
            hints.push(PeakHint::new(kc, width));
        }
    }
    hints
}

/// Exact delta-reduced rate,
/// λ²g²G²ω²/(2πγ²|v|) ∫₀^∞ κ³/|ζ(k*(κ), κ)|² dκ, with γ kept exact.
pub fn excitation_rate_exact(d: &DetectorSpec1D, m: &MediumParams, cfg: &QuadratureConfig) -> Result<RateResult> {
    d.validate()?;
    cfg.validate()?;
    let lam2 = d.coupling_lambda * d.coupling_lambda;
    let g2 = m.coupling() * m.coupling();
    if d.velocity == 0.0 || g2 == 0.0 || lam2 == 0.0 {
        return Ok(RateResult::zero(RateMethod::Exact));
    }
    if m.dissipation_sq() == 0.0 {
        return Err(Error::ResonanceSingularity { omega: m.omega_res() });
    }
    let gamma = d.gamma();
    let v = d.velocity.abs();
    let pref = lam2 * g2 * m.dissipation_sq() * d.gap * d.gap / (2.0 * PI * gamma * gamma * v);
    let mut cfg = cfg.clone();
    cfg.peak_hints.extend(peak_hints(d, m));
    let r = integrate_semi_infinite(|kappa| exact_rate_integrand(d, m, kappa), &cfg);
    Ok(RateResult {
        value: pref * r.value,
        method: RateMethod::Exact,
        error_estimate: pref * r.error,
        units: crate::units::UnitSystem::NaturalEv,
        converged: r.converged,
        warnings: Vec::new(),
    })
}

/// Lowest order in v:
/// ∫₀^∞ λ²g²G²ω²κ³|v|³ / (2π(κ + ω)⁴[(κ² − Ω²)² + κ²G⁴/4]) dκ.
pub fn excitation_rate_smallv(d: &DetectorSpec1D, m: &MediumParams, cfg: &QuadratureConfig) -> Result<RateResult> {
    d.validate()?;
    cfg.validate()?;
    let lam2 = d.coupling_lambda * d.coupling_lambda;
    let g2 = m.coupling() * m.coupling();
    let v = d.velocity.abs();
    if v == 0.0 || g2 == 0.0 || lam2 == 0.0 {
        return Ok(RateResult::zero(RateMethod::SmallVelocity));
    }
    if m.dissipation_sq() == 0.0 {
        return Err(Error::ResonanceSingularity { omega: m.omega_res() });
    }
    let (o2, gg2, w) = (m.omega_res().powi(2), m.dissipation_sq(), d.gap);
    let f = |kappa: f64| {
        let lor = (kappa * kappa - o2).powi(2) + kappa * kappa * gg2 * gg2 / 4.0;
        kappa.powi(3) / ((kappa + w).powi(4) * lor)
    };
    let mut cfg = cfg.clone();
    cfg.peak_hints.push(PeakHint::new(m.omega_res(), 0.25 * gg2));
    let r = integrate_semi_infinite(f, &cfg);
    let pref = lam2 * g2 * gg2 * w * w * v.powi(3) / (2.0 * PI);
    let mut warnings = Vec::new();
    if v > 0.1 {
        warnings.push(format!("small-velocity form used at |v| = {v} > 0.1"));
    }
    Ok(RateResult {
        value: pref * r.value,
        method: RateMethod::SmallVelocity,
        error_estimate: pref * r.error,
        units: crate::units::UnitSystem::NaturalEv,
        converged: r.converged,
        warnings,
    })
}

/// Weak-dissipation closed form (λ²g²ω²/2)·Ω/(Ω + ω)⁴·|v|³. Does not read G².
pub fn excitation_rate_weak_g(d: &DetectorSpec1D, m: &MediumParams) -> Result<RateResult> {
    d.validate()?;
    let (w, o) = (d.gap, m.omega_res());
    let value = 0.5 * (d.coupling_lambda * m.coupling() * w).powi(2) * o / (o + w).powi(4) * d.velocity.abs().powi(3);
    let mut r = RateResult::closed(value, RateMethod::WeakDissipation);
    if m.damping_rate() > 0.1 * o {
        r.warnings.push(format!("weak-dissipation form used at Γ/Ω = {}", m.damping_rate() / o));
    }
    Ok(r)
}

/// Mode energy seen by a detector moving with velocity v: γ(|κ| − kv).
pub fn boosted_mode_energy(k: f64, kappa: f64, v: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::Domain(format!("velocity must satisfy |v| < 1, got {v}")));
    }
    Ok(lorentz_gamma(v) * (kappa.abs() - k * v))
}

/// True iff |κ| < kv: the detector overtakes the mode and sees it with
/// negative energy.
pub fn is_anomalous(k: f64, kappa: f64, v: f64) -> bool {
    kappa.abs() < k * v
}
