//! Electric-field Wightman function of the 1D medium,
//!
//! W(Δt, Δx) = ∫dκ ∫dk ρ(k, κ) e^{ikΔx − i|κ|Δt},  ρ = g²G²|κ|⁵ / (8π²|ζ|²),
//!
//! its large-distance asymptotics and numerical checks of locality, cluster
//! decay and the missing spectrum condition.
//!
//! Three evaluation routes share one structure. After using evenness in k and
//! κ, W = ∫₀^∞ K(κ) e^{−iκτ} dκ with τ = Δt − iε. The kernel K grows like
//! κ cos κx at large κ, so the first two terms of its expansion,
//! S(κ) = [κ cos κx + (g²x/2) sin κx]/2π, are subtracted and integrated in
//! closed form; the O(1/κ) remainder is integrated numerically on one panel
//! tree for the whole regulator ladder and Richardson-extrapolated to ε → 0.
//!
//! * [`wightman_ee`] obtains K(κ) from a quadrature over k (the direct 2D
//!   evaluation).
//! * [`wightman_ee_residue`] obtains K(κ) by closing the k contour:
//!   K = κ² Re(e^{iq|x|}/q)/2π with q = κ√ε(κ). The dissipation G² cancels,
//!   so the expression stays regular however close the poles ±q, ±q̄ come.
//! * [`wightman_ee_euclidean`] rotates κ → −is for |Δt| < |Δx|, giving a
//!   real, exponentially convergent integral with no regulator at all.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::MediumParams;
use crate::quadrature::{
    epsilon_sequence, extrapolation_bound, integrate_from, integrate_panels, richardson, ComplexVec, PeakHint,
    QuadratureConfig, RegulatedValue,
};

/// Separation (Δt, Δx) = (t − t′, x − x′) in eV⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeInterval {
    pub dt: f64,
    pub dx: f64,
}

impl SpacetimeInterval {
    pub fn new(dt: f64, dx: f64) -> Result<Self> {
        if !dt.is_finite() || !dx.is_finite() {
            return Err(Error::Domain(format!("non-finite interval ({dt}, {dx})")));
        }
        Ok(SpacetimeInterval { dt, dx })
    }

    pub fn is_coincident(&self) -> bool {
        self.dt == 0.0 && self.dx == 0.0
    }

    /// Spacelike with respect to the vacuum light cone, |Δt| < |Δx|.
    pub fn is_spacelike(&self) -> bool {
        self.dt.abs() < self.dx.abs()
    }

    /// (−Δt, −Δx)
    pub fn reflected(&self) -> Self {
        SpacetimeInterval { dt: -self.dt, dx: -self.dx }
    }

    /// Image of the interval under a boost with velocity `v` along x.
    pub fn boosted(&self, v: f64) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(Error::Domain(format!("boost velocity {v} must satisfy |v| < 1")));
        }
        let gamma = 1.0 / (1.0 - v * v).sqrt();
        Ok(SpacetimeInterval {
            dt: gamma * (self.dt - v * self.dx),
            dx: gamma * (self.dx - v * self.dt),
        })
    }
}

/// A correlator sample: the extrapolated value, the smallest regulator used,
/// an error estimate and the convergence flag.
pub type CorrelatorValue = RegulatedValue;

/// ρ(k, κ) = g²G²|κ|⁵ / (8π²|ζ(k, κ)|²).
pub fn spectral_density(k: f64, kappa: f64, m: &MediumParams) -> f64 {
    let g2 = m.coupling() * m.coupling();
    let num = g2 * m.dissipation_sq() * kappa.abs().powi(5);
    if num == 0.0 {
        return 0.0;
    }
    num / (8.0 * PI * PI * m.spectral_function(k, kappa).norm_sqr())
}

/// −(1/2π)(Δt² + Δx²)/(Δt² − Δx²)², the vacuum correlator.
pub fn free_field_ee(iv: &SpacetimeInterval) -> Result<f64> {
    if iv.is_coincident() {
        return Err(Error::Coincidence);
    }
    let (t2, x2) = (iv.dt * iv.dt, iv.dx * iv.dx);
    if t2 == x2 {
        return Err(Error::Domain("free correlator is singular on the light cone".into()));
    }
    Ok(-(t2 + x2) / (2.0 * PI * (t2 - x2).powi(2)))
}

/// Leading plus sub-leading large-|Δx| form of the correlator:
/// −(1/2πn)[n²Δx² + Δt²]/[n²Δx² − Δt²]² − (g²G²/πΩ⁴)|Δx|³[n²Δx² + 5Δt²]/[n²Δx² − Δt²]⁴.
pub fn asymptotic_ee(iv: &SpacetimeInterval, m: &MediumParams) -> Result<f64> {
    if iv.is_coincident() {
        return Err(Error::Coincidence);
    }
    let n = m.static_index();
    let nx2 = n * n * iv.dx * iv.dx;
    let t2 = iv.dt * iv.dt;
    let d = nx2 - t2;
    if d.abs() <= 1e-12 * (nx2 + t2) {
        return Err(Error::MediumCone);
    }
    let lead = -(nx2 + t2) / (2.0 * PI * n * d * d);
    let g2 = m.coupling() * m.coupling();
    let sub = g2 * m.dissipation_sq() / (PI * m.omega_res().powi(4)) * iv.dx.abs().powi(3) * (nx2 + 5.0 * t2)
        / d.powi(4);
    Ok(lead - sub)
}

/// Default regulator ε₀ = 10⁻³·min(1/Ω, L), L = |Δx| (or |Δt| when Δx = 0).
pub fn default_epsilon(iv: &SpacetimeInterval, m: &MediumParams) -> f64 {
    let length = if iv.dx != 0.0 { iv.dx.abs() } else { iv.dt.abs() };
    1e-3 * length.min(1.0 / m.omega_res())
}

fn epsilon_ladder(iv: &SpacetimeInterval, m: &MediumParams, cfg: &QuadratureConfig) -> [f64; 3] {
    let eps0 = if cfg.epsilon_regulator > 0.0 { cfg.epsilon_regulator } else { default_epsilon(iv, m) };
    if cfg.richardson {
        epsilon_sequence(eps0)
    } else {
        [eps0; 3]
    }
}

/// S(κ), the part of K(κ) that does not decay, as its complex envelope:
/// S = Re[e^{iκx}(κ − i g²x/2)]/2π.
fn subtracted_envelope(kappa: f64, x: f64, g2: f64) -> Complex64 {
    Complex64::new(kappa, -0.5 * g2 * x)
}

/// ∫₀^∞ S(κ) e^{−iκτ} dκ for Im τ < 0.
fn subtracted_integral(tau: Complex64, x: f64, g2: f64) -> Complex64 {
    let vac = -((tau - x).powi(-2) + (tau + x).powi(-2)) / (4.0 * PI);
    let sine = g2 * x / (4.0 * PI) * x / (x * x - tau * tau);
    vac + sine
}

/// e^z − 1 without cancellation for small |z|.
fn expm1(z: Complex64) -> Complex64 {
    let half = (0.5 * z.im).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half * half,
        z.re.exp() * z.im.sin(),
    )
}

/// K(κ) − S(κ) from the residue closed form, for κ > 0 and x = |Δx|.
///
/// With q = κ√ε, r = 1/√ε − 1 and δ = q − κ, both small at large κ,
/// K − S = Re{e^{iκx}·(κ[(1 + r)(e^{iδx} − 1) + r] + i g²x/2)}/2π,
/// which avoids the catastrophic cancellation of K against S.
fn residue_remainder(m: &MediumParams, kappa: f64, x: f64) -> f64 {
    if kappa == 0.0 {
        return 0.0;
    }
    let g2 = m.coupling() * m.coupling();
    let osc = m.oscillator_factor(kappa);
    let phase = Complex64::from_polar(1.0, kappa * x);
    if osc.norm_sqr() == 0.0 {
        // lossless resonance: q → ∞ and K → 0
        return -(phase * subtracted_envelope(kappa, x, g2)).re / (2.0 * PI);
    }
    let chi = g2 / osc;
    let root = (1.0 + chi).sqrt();
    let delta = kappa * chi / (root + 1.0);
    let r = -chi / (root * (1.0 + root));
    let bracket = kappa * ((1.0 + r) * expm1(Complex64::i() * delta * x) + r) + Complex64::new(0.0, 0.5 * g2 * x);
    (phase * bracket).re / (2.0 * PI)
}

/// Relative accuracy of the k quadrature in the direct route: four digits
/// beyond the caller's tolerance, within what double precision sustains.
fn inner_rel_tol(cfg: &QuadratureConfig) -> f64 {
    (cfg.rel_tol * 1e-4).clamp(1e-11, 1e-7)
}

/// J(κ) = 2∫₀^∞ cos(kx)/|ζ(k, κ)|² dk by adaptive quadrature.
///
/// The modulus is factored as |A|²|k − q|²|k + q|² and the integral is taken
/// in u = k − Re q, so the peak of width Im q sits at u = 0 with full
/// floating-point resolution even when Im q/Re q is far below machine ε.
pub fn direct_inner(m: &MediumParams, kappa: f64, x: f64, cfg: &QuadratureConfig) -> (f64, bool) {
    let osc = m.oscillator_factor(kappa);
    let g2 = m.coupling() * m.coupling();
    let q = kappa * (1.0 + g2 / osc).sqrt();
    let (p, b2) = (q.re, q.im * q.im);
    let scale = 2.0 / osc.norm_sqr();
    let (s0, c0) = (p * x).sin_cos();
    let integrand = |u: f64| {
        let (su, cu) = (u * x).sin_cos();
        let far = (u + 2.0 * p) * (u + 2.0 * p) + b2;
        scale * (c0 * cu - s0 * su) / ((u * u + b2) * far)
    };
    let mut inner = cfg.clone();
    inner.peak_hints = vec![PeakHint::new(0.0, q.im.abs().max(f64::MIN_POSITIVE))];
    inner.rel_tol = inner_rel_tol(cfg);
    inner.abs_tol = f64::MIN_POSITIVE;
    inner.tail_cutoff_factor = None;
    let r = integrate_from(integrand, -p, &inner);
    (r.value, r.converged)
}

/// K(κ) − S(κ) with K from the k quadrature.
fn direct_remainder(m: &MediumParams, kappa: f64, x: f64, cfg: &QuadratureConfig) -> (f64, bool) {
    if kappa == 0.0 {
        return (0.0, true);
    }
    let g2 = m.coupling() * m.coupling();
    let (j, ok) = direct_inner(m, kappa, x, cfg);
    let k_val = g2 * m.dissipation_sq() * kappa.powi(5) / (4.0 * PI * PI) * j;
    let s = (Complex64::from_polar(1.0, kappa * x) * subtracted_envelope(kappa, x, g2)).re / (2.0 * PI);
    (k_val - s, ok)
}

/// Integrates a remainder kernel against e^{−iκτ} for the regulator ladder
/// and adds back the subtracted part in closed form.
///
/// `noise` is the relative accuracy of K(κ) for κ below `noise_extent`;
/// since |K| ≈ κ/2π and the regulator confines the integral to κ ≲ 1/ε, it
/// sets an absolute floor ≈ noise·min(extent, 1/ε)²/4π on what the outer
/// quadrature can resolve.
fn regulated_outer<F>(
    mut remainder: F,
    noise: f64,
    noise_extent: f64,
    iv: &SpacetimeInterval,
    m: &MediumParams,
    cfg: &QuadratureConfig,
) -> Result<CorrelatorValue>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if iv.is_coincident() {
        return Err(Error::Coincidence);
    }
    let x = iv.dx.abs();
    let g2 = m.coupling() * m.coupling();
    let eps = epsilon_ladder(iv, m, cfg);
    let cutoff = 36.0 / eps[2];

    // One panel per period of the fastest of e^{−iκ(Δt ± Δx)}, refined near the
    // resonance and at caller hints.
    let step = 2.0 * PI / (iv.dt.abs() + x).max(1e-300);
    let n_uniform = (cutoff / step).ceil().min(5e6) as usize;
    let mut points: Vec<f64> = (0..=n_uniform).map(|i| i as f64 * cutoff / n_uniform as f64).collect();
    let width = (0.25 * m.dissipation_sq()).max(1e-6 * m.omega_res());
    let mut hints = cfg.peak_hints.clone();
    hints.push(PeakHint::new(m.omega_res(), width));
    for h in &hints {
        points.extend(h.breakpoints().into_iter().filter(|&p| p > 0.0 && p < cutoff));
    }
    let mut outer = cfg.clone();
    outer.max_subdivisions = cfg.max_subdivisions.max(4 * points.len());
    let reach = noise_extent.min(1.0 / eps[2]);
    outer.abs_tol = cfg.abs_tol.max(10.0 * noise * reach * reach / (4.0 * PI));

    let taus = eps.map(|e| Complex64::new(iv.dt, -e));
    let r = integrate_panels(
        |kappa: f64| {
            let rem = remainder(kappa);
            ComplexVec(taus.map(|tau| rem * (-Complex64::i() * kappa * tau).exp()))
        },
        &points,
        &outer,
    );
    let mut values = r.value.0;
    for (v, tau) in values.iter_mut().zip(taus) {
        *v += subtracted_integral(tau, x, g2);
    }
    let (value, residual) = if cfg.richardson { richardson(values) } else { (values[0], 0.0) };
    Ok(CorrelatorValue {
        value,
        epsilon_used: eps[2],
        error: r.error + residual,
        converged: r.converged && residual <= extrapolation_bound(cfg, value.norm()),
    })
}

/// Frequency above which the k quadrature can no longer resolve K − S.
///
/// At large κ the remainder is O(g²/κ²) relative to K, so with inner relative
/// accuracy η it is resolved to 10⁻⁴ while κ ≤ g/√(10⁴η). The resonance
/// region below a few Ω is always kept.
pub fn direct_switch(m: &MediumParams, cfg: &QuadratureConfig) -> f64 {
    (m.coupling() / (1e4 * inner_rel_tol(cfg)).sqrt()).max(4.0 * m.omega_res())
}

fn direct_route(iv: &SpacetimeInterval, m: &MediumParams, cfg: &QuadratureConfig, switch: f64) -> Result<CorrelatorValue> {
    if m.coupling() == 0.0 || m.dissipation_sq() == 0.0 {
        return wightman_ee_residue(iv, m, cfg);
    }
    let x = iv.dx.abs();
    let mut inner_ok = true;
    let mut cfg_outer = cfg.clone();
    if switch.is_finite() {
        cfg_outer.peak_hints.push(PeakHint::new(switch, 0.0));
    }
    let mut value = regulated_outer(
        |kappa| {
            if kappa > switch {
                return residue_remainder(m, kappa, x);
            }
            let (v, ok) = direct_remainder(m, kappa, x, cfg);
            inner_ok &= ok;
            v
        },
        inner_rel_tol(cfg),
        switch,
        iv,
        m,
        &cfg_outer,
    )?;
    value.converged &= inner_ok;
    Ok(value)
}

/// W(Δt, Δx) from the (k, κ) representation: κ outer, k inner.
///
/// The k integral is done by quadrature up to [`direct_switch`] and by
/// residues above it, where the spectral peak is too narrow relative to the
/// subtracted envelope for quadrature to resolve. With g = 0 or G² = 0 the
/// density collapses onto the dispersion curve and the residue kernel (its
/// G² → 0 limit) is used throughout.
pub fn wightman_ee(iv: &SpacetimeInterval, m: &MediumParams, cfg: &QuadratureConfig) -> Result<CorrelatorValue> {
    direct_route(iv, m, cfg, direct_switch(m, cfg))
}

/// W(Δt, Δx) with the k integral done by quadrature at every κ.
///
/// Independent of the residue closed form, so it serves as its oracle. Its
/// accuracy degrades when the regulator reaches κ well beyond
/// [`direct_switch`], i.e. for |Δx| ≪ 1/Ω or weak g·G.
pub fn wightman_ee_2d(iv: &SpacetimeInterval, m: &MediumParams, cfg: &QuadratureConfig) -> Result<CorrelatorValue> {
    direct_route(iv, m, cfg, f64::INFINITY)
}

/// W(Δt, Δx) with the k integral done by residues.
pub fn wightman_ee_residue(iv: &SpacetimeInterval, m: &MediumParams, cfg: &QuadratureConfig) -> Result<CorrelatorValue> {
    let x = iv.dx.abs();
    regulated_outer(|kappa| residue_remainder(m, kappa, x), 0.0, 0.0, iv, m, cfg)
}

/// W(Δt, Δx) for |Δt| < |Δx| from the Wick-rotated representation
///
/// W = −(1/4π) ∫₀^∞ (s/N) [e^{−s(Nx − Δt)} + e^{−s(Nx + Δt)}] ds,
/// N(s) = √(1 + g²/(Ω² + s² + G²s/2)).
///
/// The result is real, which is the locality statement in closed form.
pub fn wightman_ee_euclidean(iv: &SpacetimeInterval, m: &MediumParams, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if iv.is_coincident() {
        return Err(Error::Coincidence);
    }
    if !iv.is_spacelike() {
        return Err(Error::Domain(format!(
            "the Euclidean route needs |dt| < |dx|, got ({}, {})",
            iv.dt, iv.dx
        )));
    }
    let x = iv.dx.abs();
    let t = iv.dt.abs();
    let (o2, g2, gg2) = (m.omega_res().powi(2), m.coupling().powi(2), m.dissipation_sq());
    let f = |s: f64| {
        let n = (1.0 + g2 / (o2 + s * s + 0.5 * gg2 * s)).sqrt();
        s / n * ((-s * (n * x - t)).exp() + (-s * (n * x + t)).exp())
    };
    let mut cfg = cfg.clone();
    let n0 = m.static_index();
    for scale in [1.0 / (x - t), 1.0 / (n0 * x - t)] {
        cfg.peak_hints.push(PeakHint::new(scale, scale));
    }
    let r = integrate_from(f, 0.0, &cfg);
    if !r.converged {
        return Err(Error::NotConverged(format!("Euclidean correlator at ({}, {})", iv.dt, iv.dx)));
    }
    Ok(-r.value / (4.0 * PI))
}

/// [W, W†] = W − W̄ = 2i Im W, evaluated on the real-time (residue) route.
pub fn commutator_ee(iv: &SpacetimeInterval, m: &MediumParams, cfg: &QuadratureConfig) -> Result<CorrelatorValue> {
    let w = wightman_ee_residue(iv, m, cfg)?;
    Ok(CorrelatorValue { value: Complex64::new(0.0, 2.0 * w.value.im), ..w })
}

/// Direction of a spacelike ray Δt = ratio·Δx.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub dt_over_dx: f64,
}

/// Power-law decay of |W| along a ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    /// (|Δx|, |W|) pairs, geometrically spaced.
    pub samples: Vec<(f64, f64)>,
    /// Slope of log|W| against log|Δx|.
    pub fitted_exponent: f64,
    /// |W|·|Δx|² at the largest sample.
    pub fitted_prefactor: f64,
    /// Leading-order prediction (1/2πn)(n² + r²)/(n² − r²)², r = Δt/Δx.
    pub expected_prefactor: f64,
    pub monotone: bool,
}

/// Samples |W| along a spacelike ray from 10/Ω to 10³/Ω and fits a power law.
pub fn cluster_check(m: &MediumParams, cfg: &QuadratureConfig, ray: Ray) -> Result<ClusterReport> {
    let r = ray.dt_over_dx;
    if !(r.abs() < 1.0) {
        return Err(Error::Domain(format!("cluster check needs a spacelike ray, got dt/dx = {r}")));
    }
    let count = 9;
    let xs: Vec<f64> = (0..count)
        .map(|i| 10.0 / m.omega_res() * 100f64.powf(i as f64 / (count - 1) as f64))
        .collect();
    let samples: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let iv = SpacetimeInterval::new(r * x, x)?;
            Ok((x, wightman_ee_euclidean(&iv, m, cfg)?.abs()))
        })
        .collect::<Result<_>>()?;
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(x, w)| (x.ln(), w.ln())).collect();
    let fitted_exponent = log_log_slope(&logs);
    let monotone = samples.windows(2).all(|w| w[1].1 < w[0].1);
    let (x_last, w_last) = *samples.last().expect("nonempty");
    let n = m.static_index();
    Ok(ClusterReport {
        fitted_exponent,
        fitted_prefactor: w_last * x_last * x_last,
        expected_prefactor: (n * n + r * r) / (2.0 * PI * n * (n * n - r * r).powi(2)),
        monotone,
        samples,
    })
}

/// Least-squares slope of y against x; pass logarithms for a power law.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Fraction of the spectral weight with |k| > κ, outside the forward light
/// cone, for frequencies in `[kappa_lo, kappa_hi]`. Zero in vacuum; a
/// Lorentz-covariant spectrum would keep it zero.
pub fn spectral_weight_outside_cone(m: &MediumParams, kappa_lo: f64, kappa_hi: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(kappa_lo >= 0.0 && kappa_hi > kappa_lo) || !kappa_hi.is_finite() {
        return Err(Error::Domain(format!("invalid frequency band [{kappa_lo}, {kappa_hi}]")));
    }
    if m.coupling() == 0.0 || m.dissipation_sq() == 0.0 {
        return Ok(0.0);
    }
    let g2 = m.coupling() * m.coupling();
    let weights = |kappa: f64| -> [f64; 2] {
        if kappa == 0.0 {
            return [0.0, 0.0];
        }
        let osc = m.oscillator_factor(kappa);
        let q = kappa * (1.0 + g2 / osc).sqrt();
        let a2 = osc.norm_sqr();
        let f = |k: f64| {
            let d1 = Complex64::new(k - q.re, -q.im).norm_sqr();
            let d2 = Complex64::new(k + q.re, q.im).norm_sqr();
            1.0 / (a2 * d1 * d2)
        };
        let mut inner = cfg.clone();
        inner.peak_hints = vec![PeakHint::new(q.re, q.im.abs().max(1e-300))];
        let outside = integrate_from(f, kappa, &inner).value;
        // ∫₀^∞ dk/|ζ|² = π Re(1/q)/(κ³g²G²) by residues
        let half = PI * (1.0 / q).re / (g2 * m.dissipation_sq() * kappa.powi(3));
        let w = kappa.powi(5);
        [w * outside, w * half]
    };
    let mut outer = cfg.clone();
    outer.peak_hints.push(PeakHint::new(m.omega_res(), (0.25 * m.dissipation_sq()).max(1e-6)));
    let mut pts = vec![kappa_lo, kappa_hi];
    for h in &outer.peak_hints {
        pts.extend(h.breakpoints().into_iter().filter(|&p| p > kappa_lo && p < kappa_hi));
    }
    let out = integrate_panels(|k| weights(k)[0], &pts, &outer);
    let tot = integrate_panels(|k| weights(k)[1], &pts, &outer);
    if tot.value <= 0.0 {
        return Ok(0.0);
    }
    Ok((out.value / tot.value).clamp(0.0, 1.0))
}

/// W at an interval and at its boosted image, both spacelike.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostComparison {
    pub original: f64,
    pub boosted: f64,
    pub relative_difference: f64,
}

/// Compares W(Δt, Δx) with W at the boosted interval. A Lorentz-invariant
/// correlator would give equal values.
pub fn boost_comparison(iv: &SpacetimeInterval, v: f64, m: &MediumParams, cfg: &QuadratureConfig) -> Result<BoostComparison> {
    let image = iv.boosted(v)?;
    let original = wightman_ee_euclidean(iv, m, cfg)?;
    let boosted = wightman_ee_euclidean(&image, m, cfg)?;
    Ok(BoostComparison {
        original,
        boosted,
        relative_difference: (boosted - original).abs() / original.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn medium() -> MediumParams {
        MediumParams::new(1.0, 0.5, 0.2).unwrap()
    }

    #[test]
    fn density_vanishes_without_coupling() {
        let m = MediumParams::new(1.0, 0.0, 0.3).unwrap();
        assert_eq!(spectral_density(0.7, 1.3, &m), 0.0);
    }

    #[test]
    fn density_is_even_and_positive() {
        let m = medium();
        let d = spectral_density(0.7, 1.3, &m);
        assert!(d > 0.0);
        assert_eq!(d, spectral_density(-0.7, 1.3, &m));
        assert_eq!(d, spectral_density(0.7, -1.3, &m));
    }

    #[test]
    fn expm1_matches_naive_for_large_arguments() {
        let z = Complex64::new(0.3, -1.2);
        assert_relative_eq!((expm1(z) - (z.exp() - 1.0)).norm(), 0.0, epsilon = 1e-15);
        let tiny = Complex64::new(1e-12, 2e-12);
        assert_relative_eq!(expm1(tiny).re, 1e-12, max_relative = 1e-6);
        assert_relative_eq!(expm1(tiny).im, 2e-12, max_relative = 1e-6);
    }

    #[test]
    fn stable_remainder_matches_direct_formula_at_moderate_kappa() {
        let m = medium();
        let x = 0.8;
        for kappa in [0.1, 0.9, 1.0, 2.5, 7.0] {
            let osc = m.oscillator_factor(kappa);
            let q = kappa * (1.0 + 0.25 / osc).sqrt();
            let k = kappa * kappa * ((Complex64::i() * q * x).exp() / q).re / (2.0 * PI);
            let s = (kappa * (kappa * x).cos() + 0.125 * x * (kappa * x).sin()) / (2.0 * PI);
            assert_relative_eq!(residue_remainder(&m, kappa, x), k - s, epsilon = 1e-12);
        }
    }

    #[test]
    fn direct_inner_integral_matches_residue_closed_form() {
        // J(κ) = 2π Re(e^{iqx}/q)/(κ³g²G²) from the residues.
        let m = medium();
        let cfg = QuadratureConfig::default();
        for (kappa, x) in [(0.3, 1.0), (0.97, 0.5), (2.0, 2.0)] {
            let osc = m.oscillator_factor(kappa);
            let q = kappa * (1.0 + 0.25 / osc).sqrt();
            let exact = 2.0 * PI * ((Complex64::i() * q * x).exp() / q).re / (kappa.powi(3) * 0.25 * 0.2);
            let (j, ok) = direct_inner(&m, kappa, x, &cfg);
            assert!(ok);
            assert_relative_eq!(j, exact, max_relative = 1e-9);
        }
    }

    #[test]
    fn vacuum_residue_route_is_the_free_field() {
        let m = MediumParams::new(1.0, 0.0, 0.0).unwrap();
        let cfg = QuadratureConfig::default();
        for (t, x) in [(0.3, 1.0), (2.0, 1.0), (0.0, 0.4)] {
            let iv = SpacetimeInterval::new(t, x).unwrap();
            let w = wightman_ee_residue(&iv, &m, &cfg).unwrap();
            assert_relative_eq!(w.value.re, free_field_ee(&iv).unwrap(), max_relative = 1e-8);
            assert!(w.value.im.abs() < 1e-8 * w.value.re.abs());
        }
    }

    #[test]
    fn euclidean_vacuum_is_the_free_field() {
        let m = MediumParams::new(1.0, 0.0, 0.0).unwrap();
        let iv = SpacetimeInterval::new(0.4, 1.1).unwrap();
        let w = wightman_ee_euclidean(&iv, &m, &QuadratureConfig::default()).unwrap();
        assert_relative_eq!(w, free_field_ee(&iv).unwrap(), max_relative = 1e-10);
    }

    #[test]
    fn residue_and_euclidean_agree_at_spacelike_points() {
        let m = medium();
        let cfg = QuadratureConfig::default();
        for (t, x) in [(0.0, 1.0), (0.5, 2.0), (-0.2, 0.6)] {
            let iv = SpacetimeInterval::new(t, x).unwrap();
            let w = wightman_ee_residue(&iv, &m, &cfg).unwrap();
            let e = wightman_ee_euclidean(&iv, &m, &cfg).unwrap();
            assert!(w.converged, "{t} {x} {w:?}");
            assert_relative_eq!(w.value.re, e, max_relative = 1e-6);
            assert!(w.value.im.abs() < 1e-6 * e.abs(), "{w:?}");
        }
    }

    #[test]
    fn hermiticity() {
        let m = medium();
        let cfg = QuadratureConfig::default();
        let iv = SpacetimeInterval::new(1.7, 0.9).unwrap();
        let a = wightman_ee_residue(&iv, &m, &cfg).unwrap().value;
        let b = wightman_ee_residue(&iv.reflected(), &m, &cfg).unwrap().value;
        assert_relative_eq!(a.re, b.re, max_relative = 1e-8);
        assert_relative_eq!(a.im, -b.im, max_relative = 1e-6);
        assert!(a.im.abs() > 1e-4 * a.re.abs());
    }

    #[test]
    fn direct_and_residue_agree() {
        let m = MediumParams::new(1.0, 0.5, 0.4).unwrap();
        let cfg = QuadratureConfig::default().with_tolerances(1e-8, 1e-14).with_epsilon(0.05);
        let iv = SpacetimeInterval::new(0.6, 1.2).unwrap();
        let a = wightman_ee_2d(&iv, &m, &cfg).unwrap();
        let b = wightman_ee_residue(&iv, &m, &cfg).unwrap();
        assert_relative_eq!(a.value.re, b.value.re, max_relative = 1e-6);
        assert_relative_eq!(a.value.im, b.value.im, epsilon = 1e-6 * b.value.norm());
    }

    #[test]
    fn weak_coupling_short_distance_is_free() {
        let m = MediumParams::new(1.0, 0.05, 0.04).unwrap();
        let cfg = QuadratureConfig::default().with_tolerances(1e-6, 1e-12);
        let iv = SpacetimeInterval::new(0.0, 0.05).unwrap();
        let w = wightman_ee(&iv, &m, &cfg).unwrap();
        let free = free_field_ee(&iv).unwrap();
        assert!(((w.value.re - free) / free).abs() < 0.05, "{} vs {free}", w.value.re);
    }

    #[test]
    fn asymptotic_form_limits() {
        let m = MediumParams::new(2.0, 1.5, 0.0).unwrap();
        let n = m.static_index();
        let iv = SpacetimeInterval::new(0.0, 7.0).unwrap();
        assert_relative_eq!(asymptotic_ee(&iv, &m).unwrap(), -1.0 / (2.0 * PI * n.powi(3) * 49.0), max_relative = 1e-14);
        let cone = SpacetimeInterval::new(n * 7.0, 7.0).unwrap();
        assert!(matches!(asymptotic_ee(&cone, &m), Err(Error::MediumCone)));
        let lossy = MediumParams::new(2.0, 1.5, 0.3).unwrap();
        let expect = -1.0 / (2.0 * PI * n.powi(3) * 49.0) - 2.25 * 0.3 / (PI * 16.0 * n.powi(6) * 343.0);
        assert_relative_eq!(asymptotic_ee(&iv, &lossy).unwrap(), expect, max_relative = 1e-13);
    }

    #[test]
    fn coincidence_is_rejected() {
        let iv = SpacetimeInterval::new(0.0, 0.0).unwrap();
        let cfg = QuadratureConfig::default();
        assert!(matches!(wightman_ee_residue(&iv, &medium(), &cfg), Err(Error::Coincidence)));
        assert!(matches!(wightman_ee(&iv, &medium(), &cfg), Err(Error::Coincidence)));
        assert!(matches!(asymptotic_ee(&iv, &medium()), Err(Error::Coincidence)));
    }

    #[test]
    fn boost_image_preserves_interval() {
        let iv = SpacetimeInterval::new(0.3, 1.0).unwrap();
        let b = iv.boosted(0.5).unwrap();
        assert_relative_eq!(b.dx * b.dx - b.dt * b.dt, 0.91, max_relative = 1e-12);
    }
}
