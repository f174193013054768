// Refractive index, wave number and phase velocity of a silicon-like medium
// calibrated from its static index and the index at resonance.

use ginzburg::medium::calibrated_medium;

pub fn run_example() -> ginzburg::Result<()> {
    let m = calibrated_medium(3.3, 3.4, 6.8)?;
    println!("Omega = {} eV, g = {:.4} eV, G^2 = {:.4} eV", m.omega_res(), m.coupling(), m.dissipation_sq());
    println!("{:>8} {:>10} {:>10} {:>12}", "kappa", "Re n", "Im n", "v_phase/c");
    for kappa in [0.5, 1.0, 2.0, 3.0, 3.3, 3.6, 5.0, 8.0] {
        let n = m.refractive_index(kappa)?;
        println!("{kappa:>8.2} {:>10.4} {:>10.4} {:>12.4}", n.re, n.im, m.phase_velocity(kappa)?);
    }
    let vp = m.phase_velocity(m.omega_res())?;
    println!("phase velocity at resonance: {vp:.4} c");
    assert!((vp - 0.147).abs() < 0.01);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
