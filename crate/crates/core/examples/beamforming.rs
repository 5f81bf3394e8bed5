// Designs secondary beams with and without null-space alignment and
// compares the link quality they produce.
//
// ```bash
// cargo run -p idle-space --example beamforming
// ```

use std::error::Error;

use idle_space::alignment::{design_beamformer, evaluate_link, primary_precoder, BeamformerSet, SinrFormula};
use idle_space::channel::{draw_realization, ChannelParams, PowerLevels};
use idle_space::numerics::{null_space_projector, DEFAULT_RANK_TOL};
use idle_space::rng::rng_from_seed;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let real = draw_realization(&ChannelParams::new(32, 16, 0.0), &mut rng_from_seed(3))?;
    let ch = &real.truth;
    let powers = PowerLevels::from_dbm(20.0, 20.0, -100.0)?;
    let p = null_space_projector(&ch.h_pu, DEFAULT_RANK_TOL)?;
    let f_pu = primary_precoder(&ch.h_pu)?;

    for (label, projector) in [("unconstrained", None), ("null-space aligned", Some(&p))] {
        let w1 = design_beamformer(&ch.h_su[0], projector)?;
        let w2 = design_beamformer(&ch.h_su[1], projector)?;
        let bf = BeamformerSet {
            w_su: [w1.w, w2.w],
            p_su: [powers.p_max_mw; 2],
            f_pu: f_pu.clone(),
        };
        let q = evaluate_link(ch, &bf, &powers, SinrFormula::Cross);
        println!("{label}:");
        println!("  SINR_SU  = {:.1} dB, {:.1} dB", 10.0 * q.sinr_su[0].log10(), 10.0 * q.sinr_su[1].log10());
        println!("  SINR_PU  = {:.1} dB", 10.0 * q.sinr_pu.log10());
        println!("  I_PR / p_max = {:.2e}", q.interference_pr_normalized);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
