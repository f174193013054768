// E-field Wightman function in the dissipative medium: residue and
// Euclidean routes against each other, the vacuum form, and the commutator
// outside the light cone.

use ginzburg::correlator::{
    commutator_ee, free_field_ee, wightman_ee_euclidean, wightman_ee_residue, SpacetimeInterval,
};
use ginzburg::medium::MediumParams;
use ginzburg::quadrature::QuadratureConfig;

pub fn run_example() -> ginzburg::Result<()> {
    let m = MediumParams::new(1.0, 0.5, 0.4)?;
    let cfg = QuadratureConfig::default().with_tolerances(1e-8, 1e-12);
    println!("{:>5} {:>5} {:>14} {:>14} {:>14} {:>12}", "dt", "dx", "residue", "euclidean", "vacuum", "|[E,E]|");
    for (t, x) in [(0.0, 1.0), (0.3, 1.0), (0.0, 3.0), (1.0, 4.0)] {
        let iv = SpacetimeInterval::new(t, x)?;
        let w = wightman_ee_residue(&iv, &m, &cfg)?;
        let e = wightman_ee_euclidean(&iv, &m, &cfg)?;
        let c = commutator_ee(&iv, &m, &cfg)?;
        println!(
            "{t:>5} {x:>5} {:>14.6e} {e:>14.6e} {:>14.6e} {:>12.2e}",
            w.value.re,
            free_field_ee(&iv)?,
            c.value.norm()
        );
        assert!((w.value.re - e).abs() <= 1e-6 * e.abs());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
