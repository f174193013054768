// 1D detector moving through the medium: the exact rate, its small-velocity
// form and the weak-dissipation closed form, plus the |v|^3 scaling.

use ginzburg::correlator::log_log_slope;
use ginzburg::detector1d::{excitation_rate_exact, excitation_rate_smallv, excitation_rate_weak_g, DetectorSpec1D};
use ginzburg::medium::MediumParams;
use ginzburg::quadrature::QuadratureConfig;

pub fn run_example() -> ginzburg::Result<()> {
    // Γ/Ω = G²/(4Ω) = 1e-3
    let m = MediumParams::new(1.0, 0.3, 0.004)?;
    let cfg = QuadratureConfig::default().with_tolerances(1e-8, 1e-300);
    let mut pts = Vec::new();
    println!("{:>8} {:>14} {:>14} {:>14}", "v", "exact", "small v", "weak G");
    for v in [1e-3, 2e-3, 5e-3, 1e-2] {
        let d = DetectorSpec1D::new(0.5, 1.0, v)?;
        let e = excitation_rate_exact(&d, &m, &cfg)?;
        let s = excitation_rate_smallv(&d, &m, &cfg)?;
        let w = excitation_rate_weak_g(&d, &m)?;
        println!("{v:>8} {:>14.6e} {:>14.6e} {:>14.6e}", e.value, s.value, w.value);
        pts.push((v.ln(), e.value.ln()));
    }
    let slope = log_log_slope(&pts);
    println!("fitted exponent: {slope:.4}");
    assert!((slope - 3.0).abs() < 0.05);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
