// How channel estimation error erodes the benefit of null-space alignment.
//
// ```bash
// cargo run -p idle-space --example csi_robustness
// ```

use std::error::Error;

use idle_space::config::{Experiment, SweepConfig};
use idle_space::harness::{run_sweep, summarize};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut cfg = SweepConfig::for_experiment(Experiment::CsiSweep);
    cfg.trials = 10;
    cfg.swept_values = vec![0.0, 0.1, 0.2];

    let summary = summarize(&run_sweep(&cfg, 2)?.rows)?;
    println!("{:<18} {:>6} {:>12} {:>12}", "method", "csi", "throughput", "I_PR/p_max");
    for s in &summary {
        let thr = s.stat("throughput_su_total").ok_or("missing metric")?;
        let intf = s.stat("interference_pr_normalized").ok_or("missing metric")?;
        println!("{:<18} {:>6} {:>12.3} {:>12.2e}", s.method, s.swept_value, thr.mean, intf.mean);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
