//! Drive an experiment from config text, as the command-line tool does.
//!
//! `cargo run --release --example run_config -- [out_dir]`

use radwave::io::{run, SimConfig};

const CONFIG: &str = "
experiment = evolve
n_modes = 16
dt = 1e-3
horizon = 0.5
record_every = 50
modes = 1, 2
master_seed = 42
";

fn main() -> radwave::Result<()> {
    let config = SimConfig::parse(CONFIG)?;
    let out = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("radwave-run-config"));
    let outcome = run(&config, &out)?;
    println!("wrote {:?} to {}", outcome.files, out.display());
    for c in &outcome.checks {
        println!("{:<24} {:.3e} <= {:.3e}: {}", c.name, c.value, c.threshold, c.pass);
    }
    println!("{}", std::fs::read_to_string(out.join("trajectory.csv"))?);
    println!("normalized config:\n{}", config.to_text());
    Ok(())
}
