use idle_space::channel::{draw_realization, ChannelParams, InterferenceModel};
use idle_space::numerics::{null_space_projector, numerical_rank, svd, ComplexMatrix, DEFAULT_RANK_TOL};
use idle_space::rng::rng_from_seed;

fn mean_power(ms: &[&ComplexMatrix]) -> f64 {
    let n: usize = ms.iter().map(|m| m.as_slice().len()).sum();
    ms.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>() / n as f64
}

#[test]
fn entry_variance_is_unit_for_large_arrays() {
    for (k, d) in [(64, 32), (128, 64), (64, 1)] {
        let mut rng = rng_from_seed(k as u64 + d as u64);
        let reals: Vec<_> = (0..8)
            .map(|_| draw_realization(&ChannelParams::new(k, d, 0.0), &mut rng).unwrap())
            .collect();
        let su: Vec<&ComplexMatrix> = reals.iter().flat_map(|r| r.truth.h_su.iter()).collect();
        assert!((mean_power(&su) - 1.0).abs() < 0.05, "h_su K={k}");
        if d > 1 {
            let pu: Vec<&ComplexMatrix> = reals.iter().map(|r| &r.truth.h_pu).collect();
            assert!((mean_power(&pu) - 1.0).abs() < 0.05, "h_pu K={k} d={d}");
        }
    }
}

#[test]
fn estimation_error_has_requested_variance() {
    let mut rng = rng_from_seed(5);
    for e in [0.05, 0.2, 0.5] {
        let real = draw_realization(&ChannelParams::new(64, 32, e), &mut rng).unwrap();
        let diffs: Vec<ComplexMatrix> = [
            (&real.estimate.h_pu, &real.truth.h_pu),
            (&real.estimate.h_su[0], &real.truth.h_su[0]),
            (&real.estimate.h_sp[1], &real.truth.h_sp[1]),
        ]
        .iter()
        .map(|(a, b)| *a - *b)
        .collect();
        let v = mean_power(&diffs.iter().collect::<Vec<_>>());
        assert!((v / (e * e) - 1.0).abs() < 0.10, "e={e}: variance {v}");
    }
}

#[test]
fn primary_link_has_requested_rank() {
    let mut rng = rng_from_seed(9);
    for (k, d) in [(8, 1), (8, 4), (16, 8), (32, 31)] {
        let real = draw_realization(&ChannelParams::new(k, d, 0.0), &mut rng).unwrap();
        assert_eq!(numerical_rank(&svd(&real.truth.h_pu).unwrap(), DEFAULT_RANK_TOL), d);
    }
}

#[test]
fn shared_cluster_links_vanish_on_primary_null_space() {
    let mut rng = rng_from_seed(13);
    let real = draw_realization(&ChannelParams::new(16, 8, 0.0), &mut rng).unwrap();
    let p = null_space_projector(&real.truth.h_pu, DEFAULT_RANK_TOL).unwrap();
    for h in real.truth.h_sp.iter().chain(&real.truth.h_ss) {
        assert!((h * &p).frobenius_norm() < 1e-10 * h.frobenius_norm());
    }
    for h in &real.truth.h_su {
        assert!((h * &p).frobenius_norm() > 0.1 * h.frobenius_norm());
    }
}

#[test]
fn iid_links_are_full_rank() {
    let mut rng = rng_from_seed(17);
    let params = ChannelParams::new(12, 6, 0.0).with_model(InterferenceModel::Iid);
    let real = draw_realization(&params, &mut rng).unwrap();
    for h in real.truth.h_sp.iter().chain(&real.truth.h_ss) {
        assert_eq!(numerical_rank(&svd(h).unwrap(), DEFAULT_RANK_TOL), 12);
    }
}

#[test]
fn same_seed_same_realization() {
    let p = ChannelParams::new(8, 4, 0.1);
    let a = draw_realization(&p, &mut rng_from_seed(3)).unwrap();
    let b = draw_realization(&p, &mut rng_from_seed(3)).unwrap();
    assert_eq!(a, b);
    let c = draw_realization(&p, &mut rng_from_seed(4)).unwrap();
    assert_ne!(a, c);
}

#[test]
fn error_level_does_not_change_truth() {
    let a = draw_realization(&ChannelParams::new(8, 4, 0.0), &mut rng_from_seed(21)).unwrap();
    let b = draw_realization(&ChannelParams::new(8, 4, 0.3), &mut rng_from_seed(21)).unwrap();
    assert_eq!(a.truth, b.truth);
    assert_eq!(a.truth, a.estimate);
}
