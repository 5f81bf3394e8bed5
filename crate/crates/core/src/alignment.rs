//! Null-space aligned beamforming and link quality.
//!
//! Beamformers are stored as unit-norm directions with the transmit power
//! factored out, so `‖√p · w‖² = p ≤ p_max`. A matrix channel applied to a
//! beam is scored by the squared Euclidean norm of the received vector,
//! `‖H w‖²`.

use crate::channel::{ChannelSet, PowerLevels};
use crate::numerics::{
    canonical_phase, dominant_right_singular_vector, normalize, ComplexMatrix, Complex64,
    NumericsError,
};

/// A projected channel with Frobenius norm below this fraction of the
/// unprojected one is treated as carrying no signal.
pub const DEGENERATE_REL_TOL: f64 = 1e-12;

/// Which channel carries the other secondary user's signal into a
/// secondary receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SinrFormula {
    /// Interference through the cross link `h_ss[j]`.
    #[default]
    Cross,
    /// Interference through the other user's own direct link `h_su[j]`.
    Literal,
}

impl SinrFormula {
    pub fn name(self) -> &'static str {
        match self {
            Self::Cross => "cross",
            Self::Literal => "literal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cross" => Some(Self::Cross),
            "literal" => Some(Self::Literal),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet {
    pub w_su: [Vec<Complex64>; 2],
    /// Allocated secondary powers in mW.
    pub p_su: [f64; 2],
    /// Primary precoder direction; the primary always transmits `p_pu_mw`.
    pub f_pu: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkQuality {
    pub sinr_su: [f64; 2],
    pub sinr_pu: f64,
    pub interference_pr_mw: f64,
    /// `interference_pr_mw / p_max_mw`
    pub interference_pr_normalized: f64,
}

/// Output of [`design_beamformer`].
#[derive(Debug, Clone, PartialEq)]
pub struct BeamDirection {
    pub w: Vec<Complex64>,
    /// Set when the feasible subspace offers no signal to the intended
    /// receiver (projected channel numerically zero or empty projector).
    pub degenerate: bool,
}

/// Signal-maximizing unit direction for `h_su_i`, restricted to the range of
/// `projector` when given.
///
/// The direction is the dominant right singular vector of `h_su_i · P`,
/// pushed through `P` once more and renormalized. When the projected channel
/// is numerically zero the first nonzero column of `P` (or `e₁`) is returned
/// and the result is flagged degenerate.
pub fn design_beamformer(
    h_su_i: &ComplexMatrix,
    projector: Option<&ComplexMatrix>,
) -> Result<BeamDirection, NumericsError> {
    if let Some(p) = projector {
        if !p.is_square() || p.rows() != h_su_i.cols() {
            return Err(NumericsError::DimensionMismatch {
                expected: format!("{0}x{0} projector", h_su_i.cols()),
                actual: format!("{}x{}", p.rows(), p.cols()),
            });
        }
    }
    let effective = match projector {
        Some(p) => h_su_i.try_mul(p)?,
        None => h_su_i.clone(),
    };
    let scale = h_su_i.frobenius_norm().max(f64::MIN_POSITIVE);
    if effective.frobenius_norm() <= DEGENERATE_REL_TOL * scale {
        return Ok(fallback_direction(projector, h_su_i.cols()));
    }

    let (v, _) = dominant_right_singular_vector(&effective)?;
    let v = match projector {
        Some(p) => p.mul_vec(&v),
        None => v,
    };
    match normalize(&v) {
        Some(mut w) => {
            canonical_phase(&mut w);
            Ok(BeamDirection {
                w,
                degenerate: false,
            })
        }
        None => Ok(fallback_direction(projector, h_su_i.cols())),
    }
}

fn fallback_direction(projector: Option<&ComplexMatrix>, k: usize) -> BeamDirection {
    let column = projector.and_then(|p| {
        (0..p.cols()).find_map(|j| {
            let col = p.column(j);
            normalize(&col)
        })
    });
    let mut w = column.unwrap_or_else(|| {
        let mut e = vec![Complex64::new(0.0, 0.0); k];
        e[0] = Complex64::new(1.0, 0.0);
        e
    });
    canonical_phase(&mut w);
    BeamDirection {
        w,
        degenerate: true,
    }
}

/// Primary precoder: dominant right singular vector of the primary link.
pub fn primary_precoder(h_pu: &ComplexMatrix) -> Result<Vec<Complex64>, NumericsError> {
    dominant_right_singular_vector(h_pu).map(|(v, _)| v)
}

/// Total secondary power arriving at the primary receiver, in mW.
pub fn residual_interference_at_pr(h_sp: &[ComplexMatrix; 2], bf: &BeamformerSet) -> f64 {
    h_sp.iter()
        .zip(&bf.w_su)
        .zip(&bf.p_su)
        .map(|((h, w), p)| p * h.gain(w))
        .sum()
}

/// SINR at secondary receiver `i` (0 or 1).
pub fn sinr_su(
    i: usize,
    channels: &ChannelSet,
    bf: &BeamformerSet,
    noise_mw: f64,
    formula: SinrFormula,
) -> f64 {
    assert!(i < 2, "secondary user index must be 0 or 1");
    let j = 1 - i;
    let signal = bf.p_su[i] * channels.h_su[i].gain(&bf.w_su[i]);
    let cross = match formula {
        SinrFormula::Cross => &channels.h_ss[j],
        SinrFormula::Literal => &channels.h_su[j],
    };
    let interference = bf.p_su[j] * cross.gain(&bf.w_su[j]);
    signal / (noise_mw + interference)
}

pub fn sinr_pu(channels: &ChannelSet, bf: &BeamformerSet, powers: &PowerLevels) -> f64 {
    let signal = powers.p_pu_mw * channels.h_pu.gain(&bf.f_pu);
    signal / (powers.noise_mw + residual_interference_at_pr(&channels.h_sp, bf))
}

pub fn evaluate_link(
    channels: &ChannelSet,
    bf: &BeamformerSet,
    powers: &PowerLevels,
    formula: SinrFormula,
) -> LinkQuality {
    let interference = residual_interference_at_pr(&channels.h_sp, bf);
    LinkQuality {
        sinr_su: [
            sinr_su(0, channels, bf, powers.noise_mw, formula),
            sinr_su(1, channels, bf, powers.noise_mw, formula),
        ],
        sinr_pu: sinr_pu(channels, bf, powers),
        interference_pr_mw: interference,
        interference_pr_normalized: interference / powers.p_max_mw,
    }
}
