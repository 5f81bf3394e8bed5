// Runs every method on one realization and prints the iteration trace.
//
// ```bash
// cargo run -p idle-space --example single_trial
// ```

use std::error::Error;

use idle_space::allocation::{QosMode, QosPolicy};
use idle_space::channel::{db_to_linear, draw_realization, ChannelParams, PowerLevels};
use idle_space::optimizer::{run_algorithm, AlgorithmSettings, Method};
use idle_space::rng::rng_from_seed;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = rng_from_seed(11);
    let real = draw_realization(&ChannelParams::new(32, 16, 0.0), &mut rng)?;
    let powers = PowerLevels::from_dbm(20.0, 20.0, -100.0)?;
    let qos = QosPolicy::new(db_to_linear(10.0), QosMode::Guarded).ok_or("bad threshold")?;
    let settings = AlgorithmSettings::default();

    for method in Method::ALL {
        // same generator state for every method
        let t = run_algorithm(&real, &powers, &qos, method, &settings, &mut rng.clone())?;
        let trace: Vec<String> = t.throughput_per_iteration.iter().map(|x| format!("{x:.3}")).collect();
        println!("{method}");
        println!("  initial   {:.3} b/s/Hz", t.initial_throughput);
        println!("  trace     [{}]", trace.join(", "));
        println!("  converged {:?}", t.converged_at);
        println!("  I_PR/p_max {:.2e}", t.final_quality.interference_pr_normalized);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
