//! Property battery for the adaptive quadrature.

use ginzburg::quadrature::{integrate, integrate_semi_infinite, QuadratureConfig};
use proptest::prelude::*;

fn cfg(rel: f64) -> QuadratureConfig {
    QuadratureConfig::default().with_tolerances(rel, 1e-300)
}

// ∫₀¹ of a smooth family with known antiderivatives
fn family(a: f64, b: f64) -> (impl Fn(f64) -> f64, f64) {
    let exact = (a.exp() - 1.0) / a + b * (1.0 - (2.0f64).cos()) / 2.0;
    (move |x: f64| (a * x).exp() + b * (2.0 * x).sin(), exact)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linearity(a in 0.1f64..5.0, b in -3.0f64..3.0, c in -4.0f64..4.0) {
        let c0 = cfg(1e-12);
        let f = |x: f64| (a * x).exp();
        let g = |x: f64| (b * x).sin() / (1.0 + x * x);
        let lhs = integrate(|x| f(x) + c * g(x), 0.0, 2.0, &c0).value;
        let rhs = integrate(f, 0.0, 2.0, &c0).value + c * integrate(g, 0.0, 2.0, &c0).value;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (lhs.abs() + 1.0));
    }

    #[test]
    fn tolerance_refinement_is_monotone(a in 0.5f64..8.0, b in -2.0f64..2.0) {
        let (f, exact) = family(a, b);
        let coarse = integrate(&f, 0.0, 1.0, &cfg(1e-4));
        let fine = integrate(&f, 0.0, 1.0, &cfg(1e-10));
        prop_assert!(coarse.converged && fine.converged);
        prop_assert!((fine.value - exact).abs() <= (coarse.value - exact).abs() + 1e-15 * exact.abs());
        prop_assert!(fine.evaluations >= coarse.evaluations);
    }
}

#[test]
fn error_estimate_is_conservative() {
    let mut trials = 0;
    let mut honest = 0;
    for i in 0..200 {
        let a = 0.3 + 0.05 * i as f64;
        let b = (i as f64 * 0.37).sin() * 2.0;
        let (f, exact) = family(a, b);
        for rel in [1e-3, 1e-6] {
            let r = integrate(&f, 0.0, 1.0, &cfg(rel));
            trials += 1;
            if (r.value - exact).abs() <= r.error.max(4.0 * f64::EPSILON * exact.abs()) {
                honest += 1;
            }
        }
    }
    assert!(honest as f64 >= 0.95 * trials as f64, "{honest}/{trials}");
}

#[test]
fn semi_infinite_and_peaked_integrands() {
    let r = integrate_semi_infinite(|x: f64| (-x).exp() * x.cos(), &cfg(1e-11));
    assert!(r.converged);
    assert!((r.value - 0.5).abs() < 1e-10);
    // narrow Lorentzian: ∫ w/((x-1)²+w²) over [0, 2] = 2 atan(1/w)
    let w = 1e-4;
    let c = cfg(1e-10).with_peak(ginzburg::quadrature::PeakHint::new(1.0, w));
    let r = integrate(|x: f64| w / ((x - 1.0).powi(2) + w * w), 0.0, 2.0, &c);
    assert!((r.value - 2.0 * (1.0 / w).atan()).abs() < 1e-9);
}
