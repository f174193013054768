//! The dissipative Hopfield medium: one Lorentzian resonance Ω, light–matter
//! coupling g and a dissipation coupling G (only G² ever enters).
//!
//! All quantities are in natural units with energies in eV.

use num_complex::Complex64;
use roots::{find_root_brent, SimpleConvergency};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the medium. Construct through [`MediumParams::new`] so the
/// underdamped condition Γ = G²/4 < Ω is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMedium", into = "RawMedium")]
pub struct MediumParams {
    omega_res: f64,
    coupling: f64,
    dissipation_sq: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedium {
    #[serde(rename = "omega_res_eV")]
    omega_res: f64,
    #[serde(rename = "coupling_g_eV")]
    coupling: f64,
    #[serde(rename = "coupling_G_sq_eV")]
    dissipation_sq: f64,
}

impl TryFrom<RawMedium> for MediumParams {
    type Error = Error;
    fn try_from(raw: RawMedium) -> Result<Self> {
        MediumParams::new(raw.omega_res, raw.coupling, raw.dissipation_sq)
    }
}

impl From<MediumParams> for RawMedium {
    fn from(m: MediumParams) -> Self {
        RawMedium {
            omega_res: m.omega_res,
            coupling: m.coupling,
            dissipation_sq: m.dissipation_sq,
        }
    }
}

impl MediumParams {
    /// `omega_res` = Ω, `coupling` = g, `dissipation_sq` = G², all in eV.
    pub fn new(omega_res: f64, coupling: f64, dissipation_sq: f64) -> Result<Self> {
        if !(omega_res > 0.0) || !omega_res.is_finite() {
            return Err(Error::InvalidMedium(format!("resonance must be positive, got {omega_res}")));
        }
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::InvalidMedium(format!("coupling g must be >= 0, got {coupling}")));
        }
        if !(dissipation_sq >= 0.0) || !dissipation_sq.is_finite() {
            return Err(Error::InvalidMedium(format!("G^2 must be >= 0, got {dissipation_sq}")));
        }
        if dissipation_sq / 4.0 >= omega_res {
            return Err(Error::InvalidMedium(format!(
                "overdamped: Gamma = G^2/4 = {} >= Omega = {omega_res}",
                dissipation_sq / 4.0
            )));
        }
        Ok(MediumParams { omega_res, coupling, dissipation_sq })
    }

    pub fn omega_res(&self) -> f64 {
        self.omega_res
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dissipation_sq(&self) -> f64 {
        self.dissipation_sq
    }

    /// Γ = G²/4.
    pub fn damping_rate(&self) -> f64 {
        self.dissipation_sq / 4.0
    }

    pub fn with_dissipation_sq(&self, dissipation_sq: f64) -> Result<Self> {
        MediumParams::new(self.omega_res, self.coupling, dissipation_sq)
    }

    /// Low-frequency refractive index n = √(1 + g²/Ω²).
    pub fn static_index(&self) -> f64 {
        (1.0 + (self.coupling / self.omega_res).powi(2)).sqrt()
    }

    /// Oscillator factor Ω² − κ² − iG²|κ|/2.
    pub fn oscillator_factor(&self, kappa: f64) -> Complex64 {
        Complex64::new(
            self.omega_res * self.omega_res - kappa * kappa,
            -0.5 * self.dissipation_sq * kappa.abs(),
        )
    }

    /// ζ(k, κ) = [Ω² − κ² − iG²|κ|/2](k² − κ²) − g²κ².
    pub fn spectral_function(&self, k: f64, kappa: f64) -> Complex64 {
        let k2_minus = (k - kappa) * (k + kappa);
        self.oscillator_factor(kappa) * k2_minus - self.coupling * self.coupling * kappa * kappa
    }

    /// ε(ω) = 1 + g²/(Ω² − ω² − iG²|ω|/2).
    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        let denom = self.oscillator_factor(omega);
        if denom.re == 0.0 && denom.im == 0.0 {
            if self.coupling == 0.0 {
                return Ok(Complex64::new(1.0, 0.0));
            }
            return Err(Error::ResonanceSingularity { omega: omega.abs() });
        }
        let mut eps = 1.0 + self.coupling * self.coupling / denom;
        // keep the branch cut of the square root on the passive side
        if eps.im == 0.0 {
            eps.im = 0.0;
        }
        Ok(eps)
    }

    /// Complex refractive index √ε(ω), principal branch (Im ≥ 0).
    pub fn refractive_index(&self, omega: f64) -> Result<Complex64> {
        Ok(self.permittivity(omega)?.sqrt())
    }

    /// Complex wave number k(κ) = |κ|√ε(κ) on the decaying branch.
    pub fn complex_wavenumber(&self, kappa: f64) -> Result<Complex64> {
        Ok(kappa.abs() * self.refractive_index(kappa)?)
    }

    /// |κ| / Re k(κ), as a fraction of c.
    pub fn phase_velocity(&self, kappa: f64) -> Result<f64> {
        if kappa == 0.0 || !kappa.is_finite() {
            return Err(Error::Domain("phase velocity needs a finite nonzero frequency".into()));
        }
        let k = self.complex_wavenumber(kappa)?;
        if k.re <= 0.0 {
            return Err(Error::Domain(format!("no propagating mode at kappa = {kappa} eV")));
        }
        Ok(kappa.abs() / k.re)
    }
}

/// g = Ω√(n₀² − 1) from the low-energy refractive index.
pub fn calibrate_g_from_n0(n0: f64, omega_res: f64) -> Result<f64> {
    if !(n0 >= 1.0) || !n0.is_finite() {
        return Err(Error::Domain(format!("low-energy index must be >= 1, got {n0}")));
    }
    if !(omega_res > 0.0) {
        return Err(Error::Domain(format!("resonance must be positive, got {omega_res}")));
    }
    Ok(omega_res * (n0 * n0 - 1.0).sqrt())
}

/// Finds G² such that Re n(Ω) equals `n_res_real`, for given Ω and g.
///
/// At ω = Ω the permittivity is 1 + i·a with a = 2g²/(G²Ω), and Re√(1 + i a)
/// grows monotonically from 1, so the root in `a` is bracketed by
/// (0, 2 n_res_real²].
pub fn calibrate_dissipation(n_res_real: f64, omega_res: f64, coupling: f64) -> Result<f64> {
    if !(n_res_real > 1.0) || !n_res_real.is_finite() {
        return Err(Error::Calibration(format!(
            "resonance index must exceed 1, got {n_res_real}"
        )));
    }
    if !(coupling > 0.0) || !(omega_res > 0.0) {
        return Err(Error::Calibration("needs g > 0 and Omega > 0".into()));
    }
    let target = n_res_real;
    let residual = |a: f64| Complex64::new(1.0, a).sqrt().re - target;
    let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
    let hi = 2.0 * target * target;
    let a = find_root_brent(0.0, hi, &residual, &mut conv)
        .map_err(|e| Error::Calibration(format!("no root in bracket: {e:?}")))?;
    if !(a > 0.0) {
        return Err(Error::Calibration("degenerate root".into()));
    }
    let dissipation_sq = 2.0 * coupling * coupling / (a * omega_res);
    let m = MediumParams::new(omega_res, coupling, dissipation_sq)?;
    let achieved = m.refractive_index(omega_res)?.re;
    if (achieved - target).abs() >= 1e-6 {
        return Err(Error::Calibration(format!(
            "residual {} above tolerance",
            (achieved - target).abs()
        )));
    }
    Ok(dissipation_sq)
}

/// Silicon-like medium: Ω from the resonance, g from the low-energy index and
/// G² from the real index at resonance.
pub fn calibrated_medium(omega_res: f64, n0: f64, n_res_real: f64) -> Result<MediumParams> {
    let g = calibrate_g_from_n0(n0, omega_res)?;
    let g_sq = calibrate_dissipation(n_res_real, omega_res, g)?;
    MediumParams::new(omega_res, g, g_sq)
}
