// Hydrogen 2s -> 3p excitation while moving through silicon: closed form,
// cutoff form, exact (κ, η) integral and the SI conversion.

use ginzburg::detector3d::{
    decay_rate_3d, excitation_rate_3d_closed, excitation_rate_3d_cutoff, excitation_rate_3d_exact, rate_to_si,
    CutoffSpec, DetectorSpec3D,
};
use ginzburg::experiment::hydrogen_dipole_2s3p;
use ginzburg::medium::{calibrated_medium, MediumParams};
use ginzburg::quadrature::QuadratureConfig;

pub fn run_example() -> ginzburg::Result<()> {
    let si = calibrated_medium(3.3, 3.4, 6.8)?;
    let d = DetectorSpec3D::new(1.9, hydrogen_dipole_2s3p().dipoles, 0.25)?;
    let cut = CutoffSpec::at(22.4)?;
    let bulk = excitation_rate_3d_closed(&d, &si)?;
    let with_cut = excitation_rate_3d_cutoff(&d, &si, &cut)?;
    let per = rate_to_si(&with_cut, d.velocity)?;
    println!("no cutoff:   {:.4e} eV", bulk.value);
    println!("k_max = 22.4: {:.4e} eV = {:.4e} /s = {:.4e} /cm", with_cut.value, per.per_second, per.per_cm.unwrap());
    let at_rest = DetectorSpec3D::new(1.9, d.dipoles, 0.0)?;
    println!("decay at rest: {:.4e} eV", decay_rate_3d(&at_rest, &si)?.value);

    // exact integral against the closed form at small v and weak damping
    let weak = MediumParams::new(1.0, 0.3, 0.004)?;
    let slow = DetectorSpec3D::new(0.5, [1.0, 1.0, 0.5], 0.01)?;
    let cfg = QuadratureConfig::default().with_tolerances(1e-8, 1e-300);
    let exact = excitation_rate_3d_exact(&slow, &weak, &CutoffSpec::none(), &cfg)?;
    let closed = excitation_rate_3d_closed(&slow, &weak)?;
    println!("exact {:.6e} vs closed {:.6e}", exact.value, closed.value);
    assert!((exact.value / closed.value - 1.0).abs() < 0.03);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
