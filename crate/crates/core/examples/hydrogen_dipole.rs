// Hydrogen 2s -> 3p radial integral and the m = ±1 dipole components.

use ginzburg::experiment::hydrogen::{hydrogen_dipole_2s3p, r20, r31};

pub fn run_example() -> ginzburg::Result<()> {
    let d = hydrogen_dipole_2s3p();
    println!("<R31|r|R20> = {:.6} a0", d.radial);
    println!("(|dx|, |dy|, |dz|) = {:?} e a0", d.dipoles);
    println!("R20(1) = {:.6}, R31(1) = {:.6}", r20(1.0), r31(1.0));
    assert!((d.radial - 3.0648).abs() < 1e-3);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
