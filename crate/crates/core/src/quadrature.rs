//! Adaptive Gauss–Kronrod quadrature for peaked integrands on finite and
//! semi-infinite domains, plus a regulated oscillatory double integral.
//!
//! Integrands may be real, complex or fixed-size arrays of complex numbers
//! (the latter lets one panel tree serve several regulator values at once).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values the integrator can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Fixed-size vector of complex values, one entry per regulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec<const N: usize>(pub [Complex64; N]);

impl<const N: usize> Add for ComplexVec<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for ComplexVec<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for ComplexVec<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl<const N: usize> QuadValue for ComplexVec<N> {
    fn zero() -> Self {
        ComplexVec([Complex64::new(0.0, 0.0); N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// A known sharp feature of the integrand: center and half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakHint {
    pub location: f64,
    pub width: f64,
}

impl PeakHint {
    pub fn new(location: f64, width: f64) -> Self {
        PeakHint { location, width }
    }

    /// Forced panel boundaries: the center and center ± {1, 3, 10}·width.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![self.location];
        if self.width > 0.0 && self.width.is_finite() {
            for m in [1.0, 3.0, 10.0] {
                pts.push(self.location - m * self.width);
                pts.push(self.location + m * self.width);
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub peak_hints: Vec<PeakHint>,
    /// iε damping for oscillatory integrals; 0 selects the operation's default.
    pub epsilon_regulator: f64,
    /// Truncate semi-infinite domains at this multiple of the feature scale
    /// instead of mapping to [0, 1).
    pub tail_cutoff_factor: Option<f64>,
    /// Extrapolate over ε, ε/2, ε/4 for regulated integrals.
    pub richardson: bool,
    /// Relative bound on the extrapolation residual for a regulated result
    /// to count as converged.
    pub extrapolation_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 20_000,
            peak_hints: Vec::new(),
            epsilon_regulator: 0.0,
            tail_cutoff_factor: None,
            richardson: true,
            extrapolation_tol: 1e-3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Config("rel_tol and abs_tol must be positive".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Config("max_subdivisions must be >= 1".into()));
        }
        if !(self.epsilon_regulator >= 0.0) {
            return Err(Error::Config("epsilon_regulator must be >= 0".into()));
        }
        if let Some(c) = self.tail_cutoff_factor {
            if !(c > 0.0) {
                return Err(Error::Config("tail_cutoff_factor must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_peak(mut self, hint: PeakHint) -> Self {
        self.peak_hints.push(hint);
        self
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon_regulator = eps;
        self
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

// 21-point Kronrod rule with embedded 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn gauss_kronrod<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    let mut fv = [T::zero(); 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).magnitude() + (fv[20 - j] - mean).magnitude());
    }
    let resabs: f64 = {
        let mut s = WGK[10] * fc.magnitude();
        for j in 0..10 {
            s += WGK[j] * (fv[j].magnitude() + fv[20 - j].magnitude());
        }
        s * half.abs()
    };
    resasc *= half.abs();
    let value = kronrod * half;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * f64::min(1.0, (200.0 * err / resasc).powf(1.5));
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn sorted_breakpoints(points: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = points.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Adaptive integration over consecutive panels `points[i]..points[i+1]`.
pub fn integrate_panels<T, F>(mut f: F, points: &[f64], cfg: &QuadratureConfig) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let pts = sorted_breakpoints(points);
    if pts.len() < 2 {
        return QuadResult { value: T::zero(), error: 0.0, converged: true, evaluations: 0 };
    }
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel<T>> = Vec::new();
    let mut evaluations = 0;
    for w in pts.windows(2) {
        let (value, error) = gauss_kronrod(&mut f, w[0], w[1]);
        evaluations += 21;
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    let exact_sums = |heap: &BinaryHeap<Panel<T>>, frozen: &[Panel<T>]| {
        heap.iter()
            .chain(frozen.iter())
            .fold((T::zero(), 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    // Running sums keep each step O(log n); they are refreshed periodically
    // and before any decision to stop so drift never decides convergence.
    let (mut total, mut err) = exact_sums(&heap, &frozen);
    let mut subdivisions = 0;
    let converged = loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if err <= tol || subdivisions % 256 == 0 {
            (total, err) = exact_sums(&heap, &frozen);
            let tol = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
            if err <= tol {
                break true;
            }
        }
        if subdivisions >= cfg.max_subdivisions {
            break false;
        }
        let Some(worst) = heap.pop() else {
            // every panel is at the resolution limit
            break false;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 8.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()) {
            frozen.push(worst);
            continue;
        }
        let (v1, e1) = gauss_kronrod(&mut f, worst.a, mid);
        let (v2, e2) = gauss_kronrod(&mut f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        total = total - worst.value + v1 + v2;
        err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    };
    let mut panels: Vec<Panel<T>> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let (value, error) = panels
        .iter()
        .fold((T::zero(), 0.0), |(v, e), p| (v + p.value, e + p.error));
    QuadResult { value, error, converged, evaluations }
}

fn hint_points(cfg: &QuadratureConfig, a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    for h in &cfg.peak_hints {
        pts.extend(h.breakpoints().into_iter().filter(|&x| x > a && x < b));
    }
    pts
}

/// ∫ₐᵇ f(x) dx with panels pre-split at the configured peak hints.
pub fn integrate<T, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return QuadResult { value: T::zero(), error: 0.0, converged: true, evaluations: 0 };
    }
    if a > b {
        let mut r = integrate(f, b, a, cfg);
        r.value = r.value * -1.0;
        return r;
    }
    integrate_panels(f, &hint_points(cfg, a, b), cfg)
}

/// ∫ₐ^∞ f(x) dx. The finite part up to the last hint breakpoint is integrated
/// directly; the remainder is mapped through x = b + s·t/(1 − t) or, when a
/// tail cutoff is configured, truncated.
pub fn integrate_from<T, F>(mut f: F, a: f64, cfg: &QuadratureConfig) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let mut pts = hint_points(cfg, a, f64::INFINITY);
    pts.retain(|x| x.is_finite());
    let pts = sorted_breakpoints(&pts);
    let last = *pts.last().unwrap_or(&a);
    let scale = (last - a).max(last.abs()).max(1.0);

    if let Some(c) = cfg.tail_cutoff_factor {
        let mut all = pts.clone();
        all.push(last + c * scale);
        return integrate_panels(f, &all, cfg);
    }

    // One panel tree for head and tail so that a single global tolerance
    // applies: y ≤ last is the identity, y = last + t maps t ∈ [0, 1) onto
    // [last, ∞).
    let mapped = |y: f64| {
        if y <= last {
            return f(y);
        }
        let t = y - last;
        let one_minus = 1.0 - t;
        let x = last + scale * t / one_minus;
        let jac = scale / (one_minus * one_minus);
        if !jac.is_finite() || !x.is_finite() {
            return T::zero();
        }
        f(x) * jac
    };
    let mut all = pts;
    if all.is_empty() {
        all.push(a);
    }
    all.extend([0.5, 0.9, 0.99, 1.0].map(|t| last + t));
    integrate_panels(mapped, &all, cfg)
}

/// ∫₀^∞ f(x) dx.
pub fn integrate_semi_infinite<T, F>(f: F, cfg: &QuadratureConfig) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_from(f, 0.0, cfg)
}

/// ∫_{−∞}^{∞} f(x) dx, split at zero.
pub fn integrate_line<T, F>(mut f: F, cfg: &QuadratureConfig) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let pos = integrate_from(&mut f, 0.0, cfg);
    let mut mirrored = cfg.clone();
    mirrored.peak_hints = cfg
        .peak_hints
        .iter()
        .map(|h| PeakHint::new(-h.location, h.width))
        .collect();
    let neg = integrate_from(|x| f(-x), 0.0, &mirrored);
    QuadResult {
        value: pos.value + neg.value,
        error: pos.error + neg.error,
        converged: pos.converged && neg.converged,
        evaluations: pos.evaluations + neg.evaluations,
    }
}

/// The regulator ladder ε, ε/2, ε/4.
pub fn epsilon_sequence(eps0: f64) -> [f64; 3] {
    [eps0, 0.5 * eps0, 0.25 * eps0]
}

/// Richardson extrapolation to ε → 0 from values at ε, ε/2, ε/4 assuming an
/// error expansion a·ε + b·ε² + …. Returns the extrapolated value and the
/// difference to the previous level, used as a residual estimate.
pub fn richardson<T: QuadValue>(values: [T; 3]) -> (T, f64) {
    let [f1, f2, f3] = values;
    let g1 = f2 * 2.0 - f1;
    let g2 = f3 * 2.0 - f2;
    let h = (g2 * 4.0 - g1) * (1.0 / 3.0);
    (h, (h - g2).magnitude())
}

/// Largest extrapolation residual accepted as converged.
pub fn extrapolation_bound(cfg: &QuadratureConfig, magnitude: f64) -> f64 {
    cfg.abs_tol.max(cfg.extrapolation_tol * magnitude)
}

/// A regulated (iε) integral, extrapolated to ε → 0 when requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegulatedValue {
    pub value: Complex64,
    /// Smallest regulator that was evaluated.
    pub epsilon_used: f64,
    /// Quadrature error plus extrapolation residual.
    pub error: f64,
    pub converged: bool,
}

/// ∫dκ ∫dk A(k, κ) e^{ikΔx − i|κ|(Δt − iε)} over the whole plane, evaluated
/// κ-outer / k-inner with the regulator damping large |κ|.
///
/// `cfg.peak_hints` refer to the outer variable |κ|; `cfg.epsilon_regulator`
/// must be positive unless the amplitude itself decays in |κ|.
pub fn integrate_oscillatory_2d<A>(amplitude: A, dx: f64, dt: f64, cfg: &QuadratureConfig) -> Result<RegulatedValue>
where
    A: Fn(f64, f64) -> f64,
{
    cfg.validate()?;
    let eps = cfg.epsilon_regulator;
    let epsilons = if cfg.richardson && eps > 0.0 {
        epsilon_sequence(eps)
    } else {
        [eps; 3]
    };
    let mut inner_cfg = cfg.clone();
    inner_cfg.peak_hints.clear();
    inner_cfg.rel_tol = cfg.rel_tol * 1e-2;
    let mut inner_ok = true;
    let mut inner_err = 0.0;
    let mut inner = |kappa: f64| -> Complex64 {
        let r = integrate_from(
            |k: f64| {
                let (s, c) = (k * dx).sin_cos();
                Complex64::new(
                    (amplitude(k, kappa) + amplitude(-k, kappa)) * c,
                    (amplitude(k, kappa) - amplitude(-k, kappa)) * s,
                )
            },
            0.0,
            &inner_cfg,
        );
        inner_ok &= r.converged;
        inner_err += r.error;
        r.value
    };
    let outer = integrate_from(
        |kappa: f64| {
            let s = if kappa == 0.0 { inner(0.0) * 2.0 } else { inner(kappa) + inner(-kappa) };
            let mut out = [Complex64::new(0.0, 0.0); 3];
            for (o, e) in out.iter_mut().zip(epsilons) {
                *o = s * Complex64::new(-e * kappa, -kappa * dt).exp();
            }
            ComplexVec(out)
        },
        0.0,
        cfg,
    );
    let (value, residual) = if cfg.richardson && eps > 0.0 {
        richardson(outer.value.0)
    } else {
        (outer.value.0[0], 0.0)
    };
    Ok(RegulatedValue {
        value,
        epsilon_used: epsilons[2],
        error: outer.error + inner_err + residual,
        converged: outer.converged && inner_ok && residual <= extrapolation_bound(cfg, value.norm()),
    })
}
