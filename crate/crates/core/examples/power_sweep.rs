// Small transmit-power sweep through the harness, written as CSV to a
// temporary directory.
//
// ```bash
// cargo run -p idle-space --example power_sweep
// ```

use std::error::Error;

use idle_space::config::{Experiment, SweepConfig};
use idle_space::harness::{run_sweep, summarize, summary_csv, trials_csv};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut cfg = SweepConfig::for_experiment(Experiment::PowerSweep);
    cfg.trials = 10;
    cfg.swept_values = vec![10.0, 20.0, 30.0];

    let result = run_sweep(&cfg, 2)?;
    let summary = summarize(&result.rows)?;
    for s in &summary {
        let thr = s.stat("throughput_su_total").ok_or("missing metric")?;
        println!("{:<18} {:>5} dBm  {:8.3} ± {:.3} b/s/Hz", s.method, s.swept_value, thr.mean, thr.std);
    }

    let dir = std::env::temp_dir().join("idle-space-power-sweep");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("power_sweep.csv"), trials_csv(&cfg, &result.rows))?;
    std::fs::write(dir.join("power_sweep_summary.csv"), summary_csv(&cfg, &summary))?;
    println!("wrote CSVs to {}", dir.display());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
