// The adaptive Gauss–Kronrod integrator on a narrow Lorentzian, with and
// without a peak hint, and on a semi-infinite range.

use ginzburg::quadrature::{integrate, integrate_semi_infinite, PeakHint, QuadratureConfig};

pub fn run_example() -> ginzburg::Result<()> {
    let w = 1e-6;
    let f = |x: f64| w / std::f64::consts::PI / ((x - 0.3).powi(2) + w * w);
    let exact = ((0.7f64 / w).atan() + (0.3f64 / w).atan()) / std::f64::consts::PI;
    let plain = QuadratureConfig::default();
    let hinted = plain.clone().with_peak(PeakHint::new(0.3, w));
    let a = integrate(f, 0.0, 1.0, &plain);
    let b = integrate(f, 0.0, 1.0, &hinted);
    println!("no hint:   {:.15} ({} evaluations)", a.value, a.evaluations);
    println!("with hint: {:.15} ({} evaluations)", b.value, b.evaluations);
    println!("exact:     {exact:.15}");
    let g = integrate_semi_infinite(|x: f64| (-x).exp() * x.cos(), &plain);
    println!("int_0^inf e^-x cos x = {:.15} (exact 0.5)", g.value);
    assert!((b.value - exact).abs() < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
