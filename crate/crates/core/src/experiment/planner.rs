//! Count-rate estimate for a metastable atomic beam passing a dielectric.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_lorentz_params, FitOptions, FitReport};
use super::hydrogen::hydrogen_dipole_2s3p;
use super::optics::load_optical_data;
use crate::detector3d::{
    cutoff_prefactor, eta_min, excitation_rate_3d_cutoff, rate_to_si, CutoffSpec, DetectorSpec3D,
};
use crate::error::{Error, Result};
use crate::medium::{calibrated_medium, MediumParams};
use crate::surface::{efolding_length, excitation_condition, min_velocity, min_velocity_nonrelativistic, SurfaceGeometry};

/// Medium given directly or calibrated from n₀ and Re n(Ω).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MediumInput {
    Params(MediumParams),
    Calibrated {
        #[serde(rename = "omega_res_eV")]
        omega_res: f64,
        n0: f64,
        n_res_real: f64,
    },
}

impl MediumInput {
    pub fn resolve(&self) -> Result<MediumParams> {
        match *self {
            MediumInput::Params(m) => Ok(m),
            MediumInput::Calibrated { omega_res, n0, n_res_real } => calibrated_medium(omega_res, n0, n_res_real),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitFromData {
    pub path: PathBuf,
    pub init: MediumInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorInput {
    #[serde(rename = "gap_eV")]
    pub gap: f64,
    /// Defaults to the hydrogen 2s → 3p (m = ±1) elements.
    #[serde(rename = "dipoles_ea0", default, skip_serializing_if = "Option::is_none")]
    pub dipoles: Option<[f64; 3]>,
    #[serde(rename = "velocity_c")]
    pub velocity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hole_radius_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plate_distance_nm: Option<f64>,
}

impl GeometryInput {
    pub fn resolve(&self) -> Result<SurfaceGeometry> {
        let g = match (self.hole_radius_mm, self.plate_distance_nm) {
            (Some(r), None) => SurfaceGeometry::HoleRadius(r),
            (None, Some(d)) => SurfaceGeometry::PlateDistance(d),
            _ => return Err(Error::Config("geometry needs exactly one of hole_radius_mm, plate_distance_nm".into())),
        };
        g.validate()?;
        Ok(g)
    }
}

/// The JSON scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub medium: Option<MediumInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_from_data: Option<FitFromData>,
    /// Defaults to Re k(Ω) = Ω·Re n(Ω).
    #[serde(rename = "cutoff_eV", default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    pub detector: DetectorInput,
    pub geometry: GeometryInput,
    pub beam_flux_per_s: f64,
    pub path_cm: f64,
}

impl ScenarioConfig {
    /// Silicon (Ω = 3.3 eV, n₀ = 3.4, Re n(Ω) = 6.8), k_max = 22.4 eV, hydrogen
    /// at c/4 through a 1 mm hole, 10⁶ atoms/s.
    pub fn paper_default() -> Self {
        ScenarioConfig {
            medium: Some(MediumInput::Calibrated { omega_res: 3.3, n0: 3.4, n_res_real: 6.8 }),
            fit_from_data: None,
            cutoff: Some(22.4),
            detector: DetectorInput { gap: 1.9, dipoles: None, velocity: 0.25 },
            geometry: GeometryInput { hole_radius_mm: Some(0.5), plate_distance_nm: None },
            beam_flux_per_s: 1e6,
            path_cm: 1.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scenario: {e}")))
    }

    /// Resolves calibration, fitting and defaults. Relative data paths are
    /// taken relative to `base_dir`.
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<(ExperimentScenario, Option<FitReport>)> {
        let (medium, fit) = match (&self.medium, &self.fit_from_data) {
            (Some(m), None) => (m.resolve()?, None),
            (None, Some(f)) => {
                let path = match base_dir {
                    Some(b) if f.path.is_relative() => b.join(&f.path),
                    _ => f.path.clone(),
                };
                let data = load_optical_data(&path)?;
                let report = fit_lorentz_params(&data, &f.init.resolve()?, &FitOptions::default())?;
                (report.params, Some(report))
            }
            _ => return Err(Error::Config("scenario needs exactly one of medium, fit_from_data".into())),
        };
        let k_max = match self.cutoff {
            Some(k) => k,
            None => medium.complex_wavenumber(medium.omega_res())?.re,
        };
        let dipoles = self.detector.dipoles.unwrap_or_else(|| hydrogen_dipole_2s3p().dipoles);
        let s = ExperimentScenario {
            medium,
            k_max,
            detector: DetectorSpec3D::new(self.detector.gap, dipoles, self.detector.velocity)?,
            geometry: self.geometry.resolve()?,
            beam_flux: self.beam_flux_per_s,
            path_length: self.path_cm,
        };
        s.validate()?;
        Ok((s, fit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentScenario {
    pub medium: MediumParams,
    /// Wave-number cutoff (eV).
    pub k_max: f64,
    pub detector: DetectorSpec3D,
    pub geometry: SurfaceGeometry,
    /// Metastable atoms per second.
    pub beam_flux: f64,
    /// Length of medium along the beam (cm).
    pub path_length: f64,
}

impl ExperimentScenario {
    pub fn paper_default() -> Result<Self> {
        Ok(ScenarioConfig::paper_default().resolve(None)?.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.detector.validate()?;
        self.geometry.validate()?;
        if !(self.k_max > 0.0) || !self.k_max.is_finite() {
            return Err(Error::Domain(format!("cutoff must be positive, got {}", self.k_max)));
        }
        if !(self.beam_flux >= 0.0) || !self.beam_flux.is_finite() {
            return Err(Error::Domain(format!("beam flux must be >= 0, got {}", self.beam_flux)));
        }
        if !(self.path_length >= 0.0) || !self.path_length.is_finite() {
            return Err(Error::Domain(format!("path length must be >= 0, got {}", self.path_length)));
        }
        Ok(())
    }
}

/// Numbers quoted for the proposed setup; carried through, not modeled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedConstants {
    pub proton_energy_mev: f64,
    pub capture_cross_section_cm2: f64,
    pub capture_fraction: f64,
    pub beam_current_ma: f64,
    pub atoms_per_s_formed: f64,
    pub metastable_2s_lifetime_s: f64,
    pub lyman_beta_wavelength_nm: f64,
    pub lyman_beta_lifetime_ns: f64,
    pub lyman_beta_propagation_length_m: f64,
}

pub const FIXED_CONSTANTS: FixedConstants = FixedConstants {
    proton_energy_mev: 30.0,
    capture_cross_section_cm2: 1e-29,
    capture_fraction: 1e-8,
    beam_current_ma: 1.0,
    atoms_per_s_formed: 1e8,
    metastable_2s_lifetime_s: 0.1,
    lyman_beta_wavelength_nm: 103.0,
    lyman_beta_lifetime_ns: 18.0,
    lyman_beta_propagation_length_m: 1.3,
};

/// The two published orders of magnitude for the bulk rate and where the
/// computed value falls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BulkRateDiscrepancy {
    pub main_text_per_cm: f64,
    pub appendix_per_cm: f64,
    pub computed_per_cm: f64,
    pub closer_to: String,
    pub note: String,
}

impl BulkRateDiscrepancy {
    fn new(computed: f64) -> Self {
        let (main, app) = (1e-3, 1e-4);
        let closer = if computed > 0.0 && (computed / main).ln().abs() < (computed / app).ln().abs() {
            "main_text"
        } else {
            "appendix"
        };
        BulkRateDiscrepancy {
            main_text_per_cm: main,
            appendix_per_cm: app,
            computed_per_cm: computed,
            closer_to: closer.into(),
            note: "published bulk estimates differ by a factor of 10 (1e-3/cm vs 1e-4/cm)".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub scenario: ExperimentScenario,
    pub v_min: f64,
    pub v_min_nonrelativistic: f64,
    pub feasible: bool,
    pub eta_min: f64,
    pub cutoff_prefactor: f64,
    /// Bulk rate in natural units (eV).
    pub rate_natural_ev: f64,
    pub rate_per_s: f64,
    pub bulk_rate_per_cm: f64,
    pub efolding_length_nm: f64,
    pub suppression: f64,
    pub excited_per_s_per_cm: f64,
    /// Over the full path length.
    pub excited_per_s: f64,
    pub discrepancy: BulkRateDiscrepancy,
    pub constants: FixedConstants,
    pub diagnostics: Vec<String>,
}

impl PlanReport {
    pub const CSV_HEADER: &'static str = "velocity_c,k_max_eV,v_min,eta_min,cutoff_prefactor,rate_per_s,bulk_rate_per_cm,efolding_length_nm,suppression,beam_flux_per_s,excited_per_s_per_cm,excited_per_s,feasible";

    pub fn csv_row(&self) -> String {
        format!(
            "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{}",
            self.scenario.detector.velocity,
            self.scenario.k_max,
            self.v_min,
            self.eta_min,
            self.cutoff_prefactor,
            self.rate_per_s,
            self.bulk_rate_per_cm,
            self.efolding_length_nm,
            self.suppression,
            self.scenario.beam_flux,
            self.excited_per_s_per_cm,
            self.excited_per_s,
            self.feasible
        )
    }
}

/// cutoff rate → SI → per cm → × surface suppression → × flux.
pub fn plan_experiment(s: &ExperimentScenario) -> Result<PlanReport> {
    s.validate()?;
    let (m, d) = (&s.medium, &s.detector);
    let v = d.velocity.abs();
    let mut diagnostics = Vec::new();

    let v_min = min_velocity(d.gap, m, s.k_max)?;
    let v_min_nr = min_velocity_nonrelativistic(d.gap, m, s.k_max).unwrap_or(f64::NAN);
    let feasible = excitation_condition(d.gap, m, v, s.k_max);
    let eta = if v > 0.0 { eta_min(d.gap, m, v, s.k_max)? } else { f64::INFINITY };
    let prefactor = cutoff_prefactor(eta);
    let cut = CutoffSpec::at(s.k_max)?;

    let rate = if feasible {
        excitation_rate_3d_cutoff(d, m, &cut)?
    } else {
        diagnostics.push(format!("velocity {v} is below the threshold v_min = {v_min:.6}: no excitation"));
        crate::rate::RateResult::zero(crate::rate::RateMethod::Cutoff)
    };
    diagnostics.extend(rate.warnings.iter().cloned());
    let si = rate_to_si(&rate, v)?;
    let bulk = si.per_cm.unwrap_or(0.0);

    let ell = efolding_length(s.k_max, m)?;
    let suppression = s.geometry.suppression(ell)?;
    let per_cm = bulk * suppression * s.beam_flux;

    Ok(PlanReport {
        scenario: *s,
        v_min,
        v_min_nonrelativistic: v_min_nr,
        feasible,
        eta_min: eta,
        cutoff_prefactor: prefactor,
        rate_natural_ev: rate.value,
        rate_per_s: si.per_second,
        bulk_rate_per_cm: bulk,
        efolding_length_nm: ell,
        suppression,
        excited_per_s_per_cm: per_cm,
        excited_per_s: per_cm * s.path_length,
        discrepancy: BulkRateDiscrepancy::new(bulk),
        constants: FIXED_CONSTANTS,
        diagnostics,
    })
}

/// Plans many scenarios in parallel; output order follows input order.
pub fn plan_batch(scenarios: &[ExperimentScenario]) -> Vec<Result<PlanReport>> {
    scenarios.par_iter().map(plan_experiment).collect()
}
