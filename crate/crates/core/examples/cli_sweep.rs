// Drives the command-line layer in-process: a velocity sweep of the planner
// written as CSV together with plot data.

use ginzburg::cli::{run, Command, RunConfig};

pub fn run_example() -> ginzburg::Result<()> {
    let dir = std::env::temp_dir().join(format!("ginzburg-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let out = dir.join("sweep.csv");
    let mut cfg = RunConfig::new(Command::Sweep).with_out(&out).with_set("velocity.step=0.02");
    cfg.args.plot = Some(dir.join("plot.csv"));
    let status = run(&cfg);
    print!("{}", std::fs::read_to_string(&out)?);
    println!("plot data:\n{}", std::fs::read_to_string(dir.join("plot.csv"))?);
    std::fs::remove_dir_all(&dir)?;
    assert_eq!(status, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ginzburg::Result<()> {
    run_example()
}
