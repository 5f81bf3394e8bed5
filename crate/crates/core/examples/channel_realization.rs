// Draws one network realization and inspects its structure.
//
// ```bash
// cargo run -p idle-space --example channel_realization
// ```

use std::error::Error;

use idle_space::channel::{draw_realization, ChannelParams, InterferenceModel};
use idle_space::numerics::{null_space_projector, numerical_rank, svd, DEFAULT_RANK_TOL};
use idle_space::rng::rng_from_seed;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (k, d_pu) = (16, 8);
    for model in [InterferenceModel::SharedCluster, InterferenceModel::Iid] {
        let params = ChannelParams::new(k, d_pu, 0.1).with_model(model);
        let real = draw_realization(&params, &mut rng_from_seed(7))?;
        let rank = numerical_rank(&svd(&real.truth.h_pu)?, DEFAULT_RANK_TOL);
        let p = null_space_projector(&real.truth.h_pu, DEFAULT_RANK_TOL)?;

        println!("{model}: K = {k}, rank(h_pu) = {rank}");
        for (name, h) in [("h_sp1", &real.truth.h_sp[0]), ("h_ss12", &real.truth.h_ss[0]), ("h_su1", &real.truth.h_su[0])] {
            let leak = (h * &p).frobenius_norm() / h.frobenius_norm();
            println!("  {name:<7} energy left in null(h_pu): {leak:.2e}");
        }
        let err = (&real.estimate.h_pu - &real.truth.h_pu).frobenius_norm() / k as f64;
        println!("  CSI error rms per entry: {err:.3}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
