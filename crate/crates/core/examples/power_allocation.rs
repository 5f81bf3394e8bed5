// Backs off secondary power until the primary receiver meets its SINR
// requirement, in both allocation modes.
//
// ```bash
// cargo run -p idle-space --example power_allocation
// ```

use std::error::Error;

use idle_space::alignment::{design_beamformer, primary_precoder, sinr_pu, BeamformerSet};
use idle_space::allocation::{allocate_power, QosMode, QosPolicy};
use idle_space::channel::{db_to_linear, draw_realization, linear_to_db, ChannelParams, PowerLevels};
use idle_space::rng::rng_from_seed;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let real = draw_realization(&ChannelParams::new(16, 8, 0.0), &mut rng_from_seed(5))?;
    let ch = &real.truth;
    let powers = PowerLevels::from_dbm(20.0, 20.0, -100.0)?;
    let bf = BeamformerSet {
        w_su: [design_beamformer(&ch.h_su[0], None)?.w, design_beamformer(&ch.h_su[1], None)?.w],
        p_su: [powers.p_max_mw; 2],
        f_pu: primary_precoder(&ch.h_pu)?,
    };
    println!("full power: SINR_PU = {:.2} dB", linear_to_db(sinr_pu(ch, &bf, &powers)));

    for mode in [QosMode::Guarded, QosMode::Literal] {
        let qos = QosPolicy::new(db_to_linear(10.0), mode).ok_or("bad threshold")?;
        let a = allocate_power(ch, &bf, &powers, &qos);
        println!(
            "{:<8} p_su = [{:.3e}, {:.3e}] mW, SINR_PU = {:.2} dB, infeasible = {}",
            mode.name(),
            a.beamformers.p_su[0],
            a.beamformers.p_su[1],
            linear_to_db(sinr_pu(ch, &a.beamformers, &powers)),
            a.qos_infeasible
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
