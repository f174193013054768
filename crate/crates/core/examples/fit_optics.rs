// Writes a synthetic optical-constants table, reads it back and fits the
// oscillator parameters to it.

use ginzburg::experiment::optics::synthesize;
use ginzburg::experiment::{fit_lorentz_params, load_optical_data, FitOptions};
use ginzburg::medium::MediumParams;

pub fn run_example() -> ginzburg::Result<()> {
    let truth = MediumParams::new(3.3, 10.72, 0.75)?;
    let energies: Vec<f64> = (1..=50).map(|i| 0.16 * i as f64).collect();
    let dir = std::env::temp_dir().join(format!("ginzburg-fit-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("optical.csv");
    synthesize(&truth, &energies, "synthetic silicon")?.save(&path)?;

    let data = load_optical_data(&path)?;
    let init = MediumParams::new(3.0, 9.0, 0.5)?;
    let fit = fit_lorentz_params(&data, &init, &FitOptions::default())?;
    let p = fit.params;
    println!("rows {}, iterations {}, residual {:.2e}", data.len(), fit.iterations, fit.residual_norm);
    println!("Omega {:.6}  g {:.6}  G^2 {:.6}", p.omega_res(), p.coupling(), p.dissipation_sq());
    println!("sensitivities {:?}", fit.sensitivities);
    std::fs::remove_dir_all(&dir)?;
    assert!((p.coupling() / 10.72 - 1.0).abs() < 1e-3);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
