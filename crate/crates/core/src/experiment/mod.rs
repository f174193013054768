//! Planner for the silicon/hydrogen proposal: optical data, model fit,
//! hydrogen dipoles and the count-rate pipeline.

pub mod fit;
pub mod hydrogen;
pub mod optics;
pub mod planner;

pub use fit::{fit_lorentz_params, FitOptions, FitReport};
pub use hydrogen::{hydrogen_dipole_2s3p, HydrogenDipole};
pub use optics::{load_optical_data, parse_optical_data, OpticalDataSet, OpticalRow};
pub use planner::{plan_batch, plan_experiment, ExperimentScenario, PlanReport, ScenarioConfig};
