//! Levenberg–Marquardt fit of (Ω, g, G²) to tabulated n(ω).
//!
//! Residuals are the real and imaginary parts of n_model − n_data with
//! uniform weights. The Jacobian is taken by finite differences; steps that
//! leave the admissible parameter region are rejected like uphill steps.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::optics::OpticalDataSet;
use crate::error::{Error, Result};
use crate::medium::MediumParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Relative parameter change below which the fit stops.
    pub step_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { max_iterations: 500, step_tol: 1e-13 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub params: MediumParams,
    /// √Σ|n_model − n_data|².
    pub residual_norm: f64,
    /// √diag((JᵀJ)⁻¹) for (Ω, g, G²): parameter shift per unit residual.
    pub sensitivities: [f64; 3],
    pub iterations: usize,
    pub converged: bool,
}

fn residuals(data: &OpticalDataSet, p: &Vector3<f64>) -> Option<DVector<f64>> {
    let m = MediumParams::new(p[0], p[1], p[2]).ok()?;
    let mut r = DVector::zeros(2 * data.len());
    for (i, row) in data.rows.iter().enumerate() {
        let n = m.refractive_index(row.energy).ok()?;
        if !n.re.is_finite() || !n.im.is_finite() {
            return None;
        }
        r[2 * i] = n.re - row.n_real;
        r[2 * i + 1] = n.im - row.n_imag;
    }
    Some(r)
}

fn jacobian(data: &OpticalDataSet, p: &Vector3<f64>, r0: &DVector<f64>) -> Option<DMatrix<f64>> {
    let mut j = DMatrix::zeros(r0.len(), 3);
    for c in 0..3 {
        let h = 1e-7 * p[c].abs().max(1e-4);
        let (mut up, mut down) = (*p, *p);
        up[c] += h;
        down[c] -= h;
        let col = match (residuals(data, &up), residuals(data, &down)) {
            (Some(a), Some(b)) => (a - b) / (2.0 * h),
            (Some(a), None) => (a - r0) / h,
            (None, Some(b)) => (r0 - b) / h,
            (None, None) => return None,
        };
        j.set_column(c, &col);
    }
    Some(j)
}

/// Fits the medium to `data` starting from `init`.
///
/// Non-convergence within the iteration cap is an error carrying the
/// best-so-far parameters in its message.
pub fn fit_lorentz_params(data: &OpticalDataSet, init: &MediumParams, opts: &FitOptions) -> Result<FitReport> {
    if data.len() < 5 {
        return Err(Error::Domain(format!("fit needs at least 5 rows, got {}", data.len())));
    }
    let (lo, hi) = (data.rows[0].energy, data.rows[data.len() - 1].energy);
    if !(lo < init.omega_res() && init.omega_res() < hi) {
        return Err(Error::Domain(format!(
            "data [{lo}, {hi}] eV does not span the initial resonance {}",
            init.omega_res()
        )));
    }
    let mut p = Vector3::new(init.omega_res(), init.coupling(), init.dissipation_sq());
    let mut r = residuals(data, &p).ok_or_else(|| Error::Domain("model undefined at the initial parameters".into()))?;
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;
    let mut jtj = Matrix3::zeros();

    while iterations < opts.max_iterations {
        iterations += 1;
        let j = jacobian(data, &p, &r).ok_or_else(|| Error::NotConverged("Jacobian undefined".into()))?;
        jtj = (j.transpose() * &j).fixed_view::<3, 3>(0, 0).into_owned();
        let g: Vector3<f64> = (j.transpose() * &r).fixed_view::<3, 1>(0, 0).into_owned();
        if cost == 0.0 || g.norm() == 0.0 {
            converged = true;
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let mut a = jtj;
            for d in 0..3 {
                a[(d, d)] += lambda * jtj[(d, d)].max(1e-300);
            }
            let Some(step) = a.lu().solve(&(-g)) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = p + step;
            // G² may reach the lossless boundary but not cross it
            trial[2] = trial[2].max(0.0);
            if let Some(rt) = residuals(data, &trial) {
                let ct = rt.norm_squared();
                if ct <= cost {
                    let rel = (trial - p).component_div(&p.map(|x| x.abs().max(1e-12))).amax();
                    let small_gain = cost - ct <= 1e-15 * cost;
                    p = trial;
                    r = rt;
                    cost = ct;
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = true;
                    if rel < opts.step_tol || small_gain {
                        converged = true;
                    }
                    break;
                }
            }
            lambda *= 4.0;
            if lambda > 1e16 {
                break;
            }
        }
        if converged || !accepted {
            // no downhill step exists: a (local) minimum to working precision
            converged = true;
            break;
        }
    }

    let params = MediumParams::new(p[0], p[1], p[2])?;
    if !converged {
        return Err(Error::NotConverged(format!(
            "fit hit {} iterations; best so far Omega = {}, g = {}, G^2 = {}, residual = {}",
            opts.max_iterations,
            p[0],
            p[1],
            p[2],
            cost.sqrt()
        )));
    }
    let cov = jtj.try_inverse().unwrap_or_else(|| Matrix3::from_element(f64::INFINITY));
    Ok(FitReport {
        params,
        residual_norm: cost.sqrt(),
        sensitivities: [cov[(0, 0)].abs().sqrt(), cov[(1, 1)].abs().sqrt(), cov[(2, 2)].abs().sqrt()],
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::optics::{synthesize, OpticalRow};
    use approx::assert_relative_eq;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    fn truth() -> MediumParams {
        MediumParams::new(3.3, 10.72, 0.75).unwrap()
    }

    #[test]
    fn recovers_noiseless_parameters() {
        let data = synthesize(&truth(), &grid(0.5, 8.0, 60), "synthetic").unwrap();
        let init = MediumParams::new(3.0, 9.5, 0.6).unwrap();
        let fit = fit_lorentz_params(&data, &init, &FitOptions::default()).unwrap();
        assert_relative_eq!(fit.params.omega_res(), 3.3, max_relative = 1e-3);
        assert_relative_eq!(fit.params.coupling(), 10.72, max_relative = 1e-3);
        assert_relative_eq!(fit.params.dissipation_sq(), 0.75, max_relative = 1e-3);
        assert!(fit.residual_norm < 1e-8);
        assert!(fit.sensitivities.iter().all(|s| s.is_finite() && *s > 0.0));
    }

    #[test]
    fn regenerated_curve_matches_pointwise() {
        let energies = grid(0.5, 8.0, 40);
        let data = synthesize(&truth(), &energies, "synthetic").unwrap();
        let init = MediumParams::new(3.5, 11.5, 0.9).unwrap();
        let fit = fit_lorentz_params(&data, &init, &FitOptions::default()).unwrap();
        for (row, e) in data.rows.iter().zip(&energies) {
            let n = fit.params.refractive_index(*e).unwrap();
            assert!((n.re - row.n_real).abs() <= 2e-3 * row.n_real);
        }
    }

    #[test]
    fn lossless_data_drives_dissipation_to_zero() {
        let lossless = MediumParams::new(2.0, 1.5, 0.0).unwrap();
        // stay outside the stop band [Ω, √(Ω² + g²)] where n is real
        let mut energies = grid(0.3, 1.9, 12);
        energies.extend(grid(2.6, 5.0, 12));
        let data = synthesize(&lossless, &energies, "lossless").unwrap();
        assert!(data.rows.iter().all(|r| r.n_imag == 0.0));
        let init = MediumParams::new(2.1, 1.4, 0.05).unwrap();
        let fit = fit_lorentz_params(&data, &init, &FitOptions::default()).unwrap();
        assert!(fit.params.dissipation_sq() < 1e-6, "G^2 = {}", fit.params.dissipation_sq());
        assert_relative_eq!(fit.params.omega_res(), 2.0, max_relative = 1e-4);
    }

    #[test]
    fn perturbed_initializations_share_the_optimum() {
        let data = synthesize(&truth(), &grid(0.5, 8.0, 50), "synthetic").unwrap();
        for (a, b, c) in [(1.3, 0.7, 1.3), (0.7, 1.3, 0.7), (1.2, 1.2, 0.75), (0.8, 0.8, 1.25)] {
            let init = MediumParams::new(3.3 * a, 10.72 * b, 0.75 * c).unwrap();
            let fit = fit_lorentz_params(&data, &init, &FitOptions::default()).unwrap();
            assert_relative_eq!(fit.params.omega_res(), 3.3, max_relative = 5e-3);
            assert_relative_eq!(fit.params.coupling(), 10.72, max_relative = 5e-3);
            assert_relative_eq!(fit.params.dissipation_sq(), 0.75, max_relative = 5e-3);
        }
    }

    #[test]
    fn deterministic() {
        let data = synthesize(&truth(), &grid(0.5, 8.0, 30), "synthetic").unwrap();
        let init = MediumParams::new(3.0, 10.0, 0.5).unwrap();
        let a = fit_lorentz_params(&data, &init, &FitOptions::default()).unwrap();
        let b = fit_lorentz_params(&data, &init, &FitOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_thin_or_off_resonance_data() {
        let rows: Vec<OpticalRow> =
            (1..=4).map(|i| OpticalRow { energy: i as f64, n_real: 3.0, n_imag: 0.0 }).collect();
        let data = OpticalDataSet::new(rows, "thin").unwrap();
        assert!(fit_lorentz_params(&data, &truth(), &FitOptions::default()).is_err());
        let data = synthesize(&truth(), &grid(0.5, 2.0, 10), "low").unwrap();
        assert!(fit_lorentz_params(&data, &truth(), &FitOptions::default()).is_err());
    }

    #[test]
    fn iteration_cap_reports_best_so_far() {
        let data = synthesize(&truth(), &grid(0.5, 8.0, 30), "synthetic").unwrap();
        let init = MediumParams::new(3.0, 9.0, 0.5).unwrap();
        let opts = FitOptions { max_iterations: 1, step_tol: 0.0 };
        let err = fit_lorentz_params(&data, &init, &opts).unwrap_err();
        assert!(err.to_string().contains("best so far"));
    }
}
