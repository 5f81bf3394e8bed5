// Null-space projector of a rank-deficient complex matrix.
//
// ```bash
// cargo run -p idle-space --example null_space_projection
// ```

use std::error::Error;

use idle_space::numerics::{
    null_space_projector, numerical_rank, project, pseudo_inverse, svd, ComplexMatrix, DEFAULT_RANK_TOL,
};
use idle_space::rng::{complex_gaussian, rng_from_seed};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = rng_from_seed(1);
    // 6x8 matrix of rank 3
    let left = ComplexMatrix::from_fn(6, 3, |_, _| complex_gaussian(&mut rng, 1.0));
    let right = ComplexMatrix::from_fn(3, 8, |_, _| complex_gaussian(&mut rng, 1.0));
    let m = &left * &right;

    let s = svd(&m)?;
    let rank = numerical_rank(&s, DEFAULT_RANK_TOL);
    let sv: Vec<String> = s.singular_values.iter().map(|x| format!("{x:.3e}")).collect();
    println!("singular values: [{}]", sv.join(", "));
    println!("numerical rank:  {rank}");

    let p = null_space_projector(&m, DEFAULT_RANK_TOL)?;
    println!("trace(P)   = {:.6} (cols - rank = {})", p.trace().re, m.cols() - rank);
    println!("|P^2 - P|  = {:.2e}", (&(&p * &p) - &p).frobenius_norm());
    println!("|m P|      = {:.2e}", (&m * &p).frobenius_norm());

    let pinv = pseudo_inverse(&m, DEFAULT_RANK_TOL)?;
    let alt = &ComplexMatrix::identity(8) - &(&pinv * &m);
    println!("|P - (I - m+ m)| = {:.2e}", (&p - &alt).frobenius_norm());

    let v = (0..8).map(|_| complex_gaussian(&mut rng, 1.0)).collect::<Vec<_>>();
    let pv = project(&p, &v)?;
    println!("|m (P v)|  = {:.2e}", m.gain(&pv).sqrt());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
