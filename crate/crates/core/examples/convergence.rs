// Average throughput per iteration of the alternating optimization.
//
// ```bash
// cargo run -p idle-space --example convergence
// ```

use std::error::Error;

use idle_space::config::{Experiment, SweepConfig};
use idle_space::harness::{run_sweep, trace_summary_csv};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut cfg = SweepConfig::for_experiment(Experiment::Convergence);
    cfg.trials = 10;
    let result = run_sweep(&cfg, 2)?;

    let converged = result.rows.iter().filter(|r| r.converged).count();
    println!("{converged}/{} runs converged", result.rows.len());
    for line in trace_summary_csv(&cfg, &result).lines().filter(|l| !l.starts_with('#')) {
        println!("{line}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
