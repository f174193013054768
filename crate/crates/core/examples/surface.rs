// Evanescent modes outside silicon: threshold velocity, e-folding length and
// the suppression for a beam through a 1 mm hole.

use ginzburg::medium::calibrated_medium;
use ginzburg::surface::{
    beam_average_suppression, efolding_length, excitation_condition, min_velocity, min_velocity_nonrelativistic,
    suppression_at_distance,
};

pub fn run_example() -> ginzburg::Result<()> {
    let m = calibrated_medium(3.3, 3.4, 6.8)?;
    let v_nr = min_velocity_nonrelativistic(1.9, &m, 22.4)?;
    let v = min_velocity(1.9, &m, 22.4)?;
    println!("v_min = {v_nr:.4} c (gamma = 1), {v:.4} c (exact gamma)");
    println!("excited at c/4: {}", excitation_condition(1.9, &m, 0.25, 22.4));
    let ell = efolding_length(22.4, &m)?;
    println!("e-folding length {ell:.3} nm");
    for d in [0.0, 5.0, 9.0, 20.0] {
        println!("  plate at {d:>4} nm: {:.4e}", suppression_at_distance(d, ell)?);
    }
    let s = beam_average_suppression(0.5, ell)?;
    println!("hole R = 0.5 mm: {s:.4e}");
    assert!((s - 1.8e-5).abs() < 0.1e-5);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
