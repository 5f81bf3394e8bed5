//! Channel realizations and power unit conversions.
//!
//! A realization holds every K×K channel of the network: the primary link,
//! the two secondary links, the secondary-to-primary interference links and
//! the secondary cross links, plus a CSI-corrupted copy of each.
//!
//! The primary link is rank `d_pu`: `h_pu = A·B†` with `A`, `B` of shape
//! `K × d_pu` and entries CN(0, 1/√d_pu), so each entry of `h_pu` has unit
//! variance. Its null space `null(B†)` has dimension `K − d_pu`.
//!
//! Interference links come in two flavours ([`InterferenceModel`]):
//!
//! * `SharedCluster` (default): `h_sp,i = C_i·B†` and `h_ss,ij = D_ij·B†`.
//!   Every path that leaves a secondary transmitter and reaches an
//!   unintended receiver goes through the same scattering cluster as the
//!   primary link, so it leaves the array through the primary's occupied
//!   transmit subspace. Directions in `null(h_pu)` reach neither the primary
//!   receiver nor the other secondary receiver.
//! * `Iid`: all interference links have i.i.d. CN(0,1) entries and are full
//!   rank, so nulling through `h_pu` does not reach them.
//!
//! Direct secondary links `h_su,i` are always i.i.d. CN(0,1).
//!
//! Draw order (fixed, defines what a seed means):
//! `A`, `B`, `h_su1`, `h_su2`, `h_sp1`, `h_sp2`, `h_ss12`, `h_ss21`
//! (factor-form links draw their `K × d_pu` left factor), then one K×K
//! CN(0,1) error matrix per channel in the order `h_pu`, `h_su1`, `h_su2`,
//! `h_sp1`, `h_sp2`, `h_ss12`, `h_ss21`. Entries are drawn row-major, real
//! part before imaginary. Error matrices are drawn even when
//! `csi_error = 0` so that later draws from the same stream do not depend on
//! the error level.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::numerics::ComplexMatrix;
use crate::rng::complex_gaussian;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("antenna count must be at least 2, got {0}")]
    TooFewAntennas(usize),
    #[error("primary rank must satisfy 1 <= d_pu <= k, got d_pu={d_pu}, k={k}")]
    InvalidPrimaryRank { k: usize, d_pu: usize },
    #[error("csi_error must lie in [0, 1], got {0}")]
    InvalidCsiError(f64),
    #[error("{name} must be finite and positive, got {value}")]
    InvalidPower { name: &'static str, value: f64 },
    #[error("unknown interference model '{0}' (expected shared_cluster or iid)")]
    UnknownModel(String),
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Transmit and noise powers in milliwatts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLevels {
    pub p_max_mw: f64,
    pub p_pu_mw: f64,
    pub noise_mw: f64,
}

impl PowerLevels {
    pub fn new(p_max_mw: f64, p_pu_mw: f64, noise_mw: f64) -> Result<Self, ChannelError> {
        for (name, value) in [("p_max_mw", p_max_mw), ("p_pu_mw", p_pu_mw), ("noise_mw", noise_mw)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ChannelError::InvalidPower { name, value });
            }
        }
        Ok(Self {
            p_max_mw,
            p_pu_mw,
            noise_mw,
        })
    }

    pub fn from_dbm(su_dbm: f64, pu_dbm: f64, noise_dbm: f64) -> Result<Self, ChannelError> {
        Self::new(dbm_to_mw(su_dbm), dbm_to_mw(pu_dbm), dbm_to_mw(noise_dbm))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterferenceModel {
    #[default]
    SharedCluster,
    Iid,
}

impl InterferenceModel {
    pub fn name(self) -> &'static str {
        match self {
            Self::SharedCluster => "shared_cluster",
            Self::Iid => "iid",
        }
    }
}

impl fmt::Display for InterferenceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for InterferenceModel {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shared_cluster" => Ok(Self::SharedCluster),
            "iid" => Ok(Self::Iid),
            other => Err(ChannelError::UnknownModel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub k: usize,
    pub d_pu: usize,
    pub csi_error: f64,
    pub model: InterferenceModel,
}

impl ChannelParams {
    pub fn new(k: usize, d_pu: usize, csi_error: f64) -> Self {
        Self {
            k,
            d_pu,
            csi_error,
            model: InterferenceModel::default(),
        }
    }

    pub fn with_model(mut self, model: InterferenceModel) -> Self {
        self.model = model;
        self
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.k < 2 {
            return Err(ChannelError::TooFewAntennas(self.k));
        }
        if self.d_pu == 0 || self.d_pu > self.k {
            return Err(ChannelError::InvalidPrimaryRank {
                k: self.k,
                d_pu: self.d_pu,
            });
        }
        if !(0.0..=1.0).contains(&self.csi_error) {
            return Err(ChannelError::InvalidCsiError(self.csi_error));
        }
        Ok(())
    }
}

/// All channels of the network as seen from one vantage point (truth or
/// estimate). Index 0 is user 1, index 1 is user 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// PT → PR
    pub h_pu: ComplexMatrix,
    /// ST_i → SR_i
    pub h_su: [ComplexMatrix; 2],
    /// ST_i → PR
    pub h_sp: [ComplexMatrix; 2],
    /// ST_i → SR_j, j ≠ i: `h_ss[0]` is ST1 → SR2, `h_ss[1]` is ST2 → SR1.
    pub h_ss: [ComplexMatrix; 2],
}

impl ChannelSet {
    pub fn k(&self) -> usize {
        self.h_pu.cols()
    }

    /// Channel carrying user `j`'s signal to user `i`'s receiver.
    pub fn cross_link(&self, from: usize) -> &ComplexMatrix {
        &self.h_ss[from]
    }

    fn channels(&self) -> [&ComplexMatrix; 7] {
        [
            &self.h_pu,
            &self.h_su[0],
            &self.h_su[1],
            &self.h_sp[0],
            &self.h_sp[1],
            &self.h_ss[0],
            &self.h_ss[1],
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub truth: ChannelSet,
    pub estimate: ChannelSet,
    pub k: usize,
    pub d_pu: usize,
    pub csi_error: f64,
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, variance: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, variance))
}

/// Draws one realization. See the module docs for the draw order.
pub fn draw_realization<R: Rng + ?Sized>(
    params: &ChannelParams,
    rng: &mut R,
) -> Result<NetworkRealization, ChannelError> {
    params.validate()?;
    let (k, d) = (params.k, params.d_pu);
    let factor_var = 1.0 / (d as f64).sqrt();

    let a = gaussian_matrix(rng, k, d, factor_var);
    let b_adj = gaussian_matrix(rng, k, d, factor_var).adjoint();
    let h_pu = &a * &b_adj;
    let h_su = [gaussian_matrix(rng, k, k, 1.0), gaussian_matrix(rng, k, k, 1.0)];

    let interference_link = |rng: &mut R| match params.model {
        InterferenceModel::SharedCluster => &gaussian_matrix(rng, k, d, factor_var) * &b_adj,
        InterferenceModel::Iid => gaussian_matrix(rng, k, k, 1.0),
    };
    let h_sp = [interference_link(rng), interference_link(rng)];
    let h_ss = [interference_link(rng), interference_link(rng)];
    let truth = ChannelSet {
        h_pu,
        h_su,
        h_sp,
        h_ss,
    };

    let errors: Vec<ComplexMatrix> = (0..7).map(|_| gaussian_matrix(rng, k, k, 1.0)).collect();
    let estimate = if params.csi_error == 0.0 {
        truth.clone()
    } else {
        let e = params.csi_error;
        let [pu, su1, su2, sp1, sp2, ss12, ss21]: [ComplexMatrix; 7] = truth
            .channels()
            .iter()
            .zip(&errors)
            .map(|(h, err)| *h + &err.scale(e))
            .collect::<Vec<_>>()
            .try_into()
            .expect("seven channels");
        ChannelSet {
            h_pu: pu,
            h_su: [su1, su2],
            h_sp: [sp1, sp2],
            h_ss: [ss12, ss21],
        }
    };

    Ok(NetworkRealization {
        truth,
        estimate,
        k,
        d_pu: d,
        csi_error: params.csi_error,
    })
}
