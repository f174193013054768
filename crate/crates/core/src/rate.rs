//! Rate values shared by the 1D and 3D detector modules.

use serde::{Deserialize, Serialize};

use crate::units::UnitSystem;

/// Which formula produced a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMethod {
    /// Delta-reduced integral with exact γ.
    Exact,
    /// Lowest order in v.
    SmallVelocity,
    /// Lowest order in v with the resonance Lorentzian collapsed (G → 0).
    WeakDissipation,
    /// Weak-dissipation closed form with the wave-number cutoff prefactor.
    Cutoff,
    /// Spontaneous decay of the excited state at rest.
    ZeroVelocityDecay,
}

/// A transition rate with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub value: f64,
    pub method: RateMethod,
    /// Absolute error estimate; zero for closed forms.
    pub error_estimate: f64,
    /// Natural units: eV (ħ = 1). SI: s⁻¹.
    pub units: UnitSystem,
    pub converged: bool,
    /// Validity caveats, e.g. a small-velocity form used at large v.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RateResult {
    /// A closed-form natural-unit rate.
    pub fn closed(value: f64, method: RateMethod) -> Self {
        RateResult {
            value,
            method,
            error_estimate: 0.0,
            units: UnitSystem::NaturalEv,
            converged: true,
            warnings: Vec::new(),
        }
    }

    pub fn zero(method: RateMethod) -> Self {
        Self::closed(0.0, method)
    }
}
