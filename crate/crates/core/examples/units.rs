// Natural-unit ↔ SI conversions used throughout.

use ginzburg::units::{self, Dimension, UnitSystem};

pub fn run_example() -> ginzburg::Result<()> {
    println!("1 eV         = {:.6e} rad/s", units::energy_to_angular_frequency(1.0));
    println!("1/(22.156 eV) = {:.4} nm", units::inverse_energy_to_length(22.156)?);
    println!("mu0/(hbar c^2) = {:.6e}", units::si_rate_factor());
    println!("1 e a0       = {:.6e} C m = {:.6e} eV^-1", units::dipole_ea0_to_si(1.0), units::dipole_ea0_to_natural(1.0));
    let t = units::convert(1.0, Dimension::Time, UnitSystem::NaturalEv, UnitSystem::Si);
    println!("1 eV^-1      = {t:.6e} s");
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
