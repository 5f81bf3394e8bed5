//! Secondary power allocation under the primary QoS requirement, and the
//! secondary throughput objective.

use crate::alignment::{residual_interference_at_pr, sinr_pu, BeamformerSet};
use crate::channel::{ChannelSet, PowerLevels};

/// Smallest common scaling factor guarded allocation will apply.
pub const GAMMA_FLOOR: f64 = 1e-6;

/// `‖h_pu w‖²` under this value counts as perfect nulling.
pub const NULLING_GAIN_FLOOR: f64 = 1e-15;

// Relative back-off on γ so the post-allocation SINR lands on the feasible
// side of the threshold after rounding.
const GAMMA_BACKOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QosMode {
    /// Scale both secondary powers by the largest common factor that keeps
    /// the primary SINR at or above the threshold.
    #[default]
    Guarded,
    /// `p_i = min(p_max, th·(σ² + I_PR) / ‖h_pu w_i‖²)` applied as written.
    Literal,
}

impl QosMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Guarded => "guarded",
            Self::Literal => "literal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "guarded" => Some(Self::Guarded),
            "literal" => Some(Self::Literal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosPolicy {
    pub sinr_threshold_linear: f64,
    pub mode: QosMode,
}

impl QosPolicy {
    pub fn new(sinr_threshold_linear: f64, mode: QosMode) -> Option<Self> {
        (sinr_threshold_linear.is_finite() && sinr_threshold_linear > 0.0).then_some(Self {
            sinr_threshold_linear,
            mode,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub beamformers: BeamformerSet,
    /// The primary requirement is not met on the channels the allocation
    /// was computed from. In guarded mode this only happens when even the
    /// floored powers are too strong.
    pub qos_infeasible: bool,
    /// Common factor applied in guarded mode (1 in literal mode).
    pub gamma: f64,
}

/// Allocates secondary powers for fixed beam directions.
pub fn allocate_power(
    channels: &ChannelSet,
    bf: &BeamformerSet,
    powers: &PowerLevels,
    qos: &QosPolicy,
) -> Allocation {
    match qos.mode {
        QosMode::Literal => allocate_literal(channels, bf, powers, qos),
        QosMode::Guarded => allocate_guarded(channels, bf, powers, qos),
    }
}

fn allocate_literal(
    channels: &ChannelSet,
    bf: &BeamformerSet,
    powers: &PowerLevels,
    qos: &QosPolicy,
) -> Allocation {
    let interference = residual_interference_at_pr(&channels.h_sp, bf);
    let budget = qos.sinr_threshold_linear * (powers.noise_mw + interference);
    let mut out = bf.clone();
    for (p, w) in out.p_su.iter_mut().zip(&bf.w_su) {
        let gain = channels.h_pu.gain(w);
        *p = if gain < NULLING_GAIN_FLOOR {
            powers.p_max_mw
        } else {
            powers.p_max_mw.min(budget / gain)
        };
    }
    let qos_infeasible = sinr_pu(channels, &out, powers) < qos.sinr_threshold_linear;
    Allocation {
        beamformers: out,
        qos_infeasible,
        gamma: 1.0,
    }
}

fn allocate_guarded(
    channels: &ChannelSet,
    bf: &BeamformerSet,
    powers: &PowerLevels,
    qos: &QosPolicy,
) -> Allocation {
    let mut full = bf.clone();
    full.p_su = [powers.p_max_mw; 2];
    let signal = powers.p_pu_mw * channels.h_pu.gain(&bf.f_pu);
    let interference_full = residual_interference_at_pr(&channels.h_sp, &full);
    let th = qos.sinr_threshold_linear;

    // SINR_PU(γ) = S / (σ² + γ·I_full) ≥ th  ⇔  γ ≤ (S/th − σ²) / I_full
    if signal >= th * (powers.noise_mw + interference_full) {
        return Allocation {
            beamformers: full,
            qos_infeasible: false,
            gamma: 1.0,
        };
    }
    if interference_full <= 0.0 {
        // secondaries are invisible to the primary; the shortfall is not theirs
        return Allocation {
            beamformers: full,
            qos_infeasible: true,
            gamma: 1.0,
        };
    }
    let raw = (signal / th - powers.noise_mw) / interference_full * (1.0 - GAMMA_BACKOFF);
    let (gamma, qos_infeasible) = if raw >= GAMMA_FLOOR {
        (raw.min(1.0), false)
    } else {
        (GAMMA_FLOOR, true)
    };
    let mut out = full;
    out.p_su = [gamma * powers.p_max_mw; 2];
    Allocation {
        beamformers: out,
        qos_infeasible,
        gamma,
    }
}

/// `Σᵢ log₂(1 + SINRᵢ)` in bits/s/Hz.
pub fn total_throughput(sinrs: [f64; 2]) -> f64 {
    sinrs.iter().map(|s| (1.0 + s).log2()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ComplexMatrix, Complex64};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn e(k: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![c(0.0); k];
        v[i] = c(1.0);
        v
    }

    /// Primary link diag(1, 0): direction e₁ is in its null space.
    fn setup(sp_gain: f64) -> (ChannelSet, BeamformerSet) {
        let h_pu = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let sp = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, sp_gain.sqrt()]]);
        let zero = ComplexMatrix::zeros(2, 2);
        let ch = ChannelSet {
            h_pu,
            h_su: [ComplexMatrix::identity(2), ComplexMatrix::identity(2)],
            h_sp: [sp, zero.clone()],
            h_ss: [zero.clone(), zero],
        };
        let bf = BeamformerSet {
            w_su: [e(2, 1), e(2, 1)],
            p_su: [0.5, 0.5],
            f_pu: e(2, 0),
        };
        (ch, bf)
    }

    #[test]
    fn perfect_nulling_gets_full_power() {
        let (mut ch, bf) = setup(0.0);
        ch.h_sp = [ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2)];
        let powers = PowerLevels::new(10.0, 1.0, 0.1).unwrap();
        for mode in [QosMode::Guarded, QosMode::Literal] {
            let qos = QosPolicy::new(5.0, mode).unwrap();
            let a = allocate_power(&ch, &bf, &powers, &qos);
            assert_eq!(a.beamformers.p_su, [10.0, 10.0]);
            assert!(!a.qos_infeasible);
        }
    }

    #[test]
    fn literal_boundary_of_min() {
        // ‖h_pu w‖² = 1 for w = e₀; choose th so th·(σ² + I)/1 = p_max exactly
        let (ch, mut bf) = setup(0.0);
        bf.w_su = [e(2, 0), e(2, 0)];
        let powers = PowerLevels::new(4.0, 1.0, 0.5).unwrap();
        let qos = QosPolicy::new(8.0, QosMode::Literal).unwrap();
        let a = allocate_power(&ch, &bf, &powers, &qos);
        assert_eq!(a.beamformers.p_su, [4.0, 4.0]);

        let qos = QosPolicy::new(2.0, QosMode::Literal).unwrap();
        let a = allocate_power(&ch, &bf, &powers, &qos);
        assert_eq!(a.beamformers.p_su, [1.0, 1.0]);
    }

    #[test]
    fn guarded_halves_power_when_interference_is_twice_the_slack() {
        // S = 1·1 = 1, σ² = 0.1, th = 2 → slack = S/th − σ² = 0.4.
        // One interfering user with ‖h_sp w‖² · p_max = 0.8 = 2 × slack.
        let (ch, bf) = setup(0.08);
        let powers = PowerLevels::new(10.0, 1.0, 0.1).unwrap();
        let qos = QosPolicy::new(2.0, QosMode::Guarded).unwrap();
        let a = allocate_power(&ch, &bf, &powers, &qos);
        assert!((a.gamma - 0.5).abs() < 1e-11);
        assert!(!a.qos_infeasible);
        for p in a.beamformers.p_su {
            assert!((p - 5.0).abs() < 1e-10);
        }
        assert!(sinr_pu(&ch, &a.beamformers, &powers) >= 2.0);
    }

    #[test]
    fn guarded_keeps_full_power_when_slack_suffices() {
        let (ch, bf) = setup(0.01);
        let powers = PowerLevels::new(10.0, 1.0, 0.1).unwrap();
        let qos = QosPolicy::new(2.0, QosMode::Guarded).unwrap();
        let a = allocate_power(&ch, &bf, &powers, &qos);
        assert_eq!(a.gamma, 1.0);
        assert_eq!(a.beamformers.p_su, [10.0, 10.0]);
    }

    #[test]
    fn guarded_flags_infeasible_at_floor() {
        // noise alone already violates the threshold
        let (ch, bf) = setup(1.0);
        let powers = PowerLevels::new(10.0, 1.0, 1.0).unwrap();
        let qos = QosPolicy::new(2.0, QosMode::Guarded).unwrap();
        let a = allocate_power(&ch, &bf, &powers, &qos);
        assert!(a.qos_infeasible);
        assert_eq!(a.gamma, GAMMA_FLOOR);
        assert!(a.beamformers.p_su.iter().all(|&p| p > 0.0 && p <= 10.0));
    }

    #[test]
    fn throughput_examples() {
        assert_eq!(total_throughput([0.0, 0.0]), 0.0);
        assert_eq!(total_throughput([1.0, 1.0]), 2.0);
        assert_eq!(total_throughput([3.0, 15.0]), 6.0);
    }

    #[test]
    fn qos_policy_rejects_bad_threshold() {
        assert!(QosPolicy::new(0.0, QosMode::Guarded).is_none());
        assert!(QosPolicy::new(f64::INFINITY, QosMode::Guarded).is_none());
    }
}
