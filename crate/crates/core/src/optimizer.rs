//! Alternating beamforming / power allocation loop and the two baselines.
//!
//! Each outer iteration designs both secondary beams on the estimated
//! channels, allocates power on the estimated channels, then scores the
//! result on the true channels. The loop stops once the throughput changes
//! by less than `eps` between consecutive iterations.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::alignment::{
    design_beamformer, evaluate_link, primary_precoder, sinr_pu, BeamformerSet, LinkQuality,
    SinrFormula,
};
use crate::allocation::{allocate_power, total_throughput, QosPolicy};
use crate::channel::{NetworkRealization, PowerLevels};
use crate::numerics::{
    canonical_phase, normalize, subspace_complement_projector, ComplexMatrix, Complex64,
    NumericsError,
};
use crate::rng::complex_gaussian_vec;

pub const DEFAULT_EPS: f64 = 1e-4;
pub const DEFAULT_MAX_ITERS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Proposed,
    NoNullSpace,
    RandomBeamforming,
}

impl Method {
    pub const ALL: [Method; 3] = [Self::Proposed, Self::NoNullSpace, Self::RandomBeamforming];

    pub fn name(self) -> &'static str {
        match self {
            Self::Proposed => "proposed",
            Self::NoNullSpace => "no_null_space",
            Self::RandomBeamforming => "random_beamforming",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmSettings {
    pub eps: f64,
    pub max_iters: usize,
    pub sinr_formula: SinrFormula,
}

impl Default for AlgorithmSettings {
    fn default() -> Self {
        Self {
            eps: DEFAULT_EPS,
            max_iters: DEFAULT_MAX_ITERS,
            sinr_formula: SinrFormula::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// Throughput evaluated after the random initialization, before the
    /// first iteration.
    pub initial_throughput: f64,
    /// One entry per completed iteration, bits/s/Hz on the true channels.
    pub throughput_per_iteration: Vec<f64>,
    /// 1-based iteration at which `|ΔL| < eps` first held.
    pub converged_at: Option<usize>,
    pub final_quality: LinkQuality,
    pub final_beamformers: BeamformerSet,
    pub qos_infeasible: bool,
    /// Some beam design found no usable signal in its feasible subspace.
    pub degenerate: bool,
}

impl IterationTrace {
    pub fn final_throughput(&self) -> f64 {
        *self
            .throughput_per_iteration
            .last()
            .expect("trace is never empty")
    }

    pub fn iterations(&self) -> usize {
        self.throughput_per_iteration.len()
    }
}

/// Projector the proposed method aligns into: the complement of the
/// `d_pu` strongest right singular directions of the estimated primary link.
/// With exact CSI this is the null-space projector of `h_pu`.
pub fn alignment_projector(real: &NetworkRealization) -> Result<ComplexMatrix, NumericsError> {
    subspace_complement_projector(&real.estimate.h_pu, real.d_pu)
}

fn random_direction<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<Complex64> {
    let v = complex_gaussian_vec(rng, k, 1.0);
    normalize(&v).expect("Gaussian vector is nonzero with probability one")
}

fn project_or_fallback(p: &ComplexMatrix, v: &[Complex64]) -> (Vec<Complex64>, bool) {
    match normalize(&p.mul_vec(v)) {
        Some(mut w) => {
            canonical_phase(&mut w);
            (w, false)
        }
        None => {
            let mut e = vec![Complex64::new(0.0, 0.0); v.len()];
            e[0] = Complex64::new(1.0, 0.0);
            (e, true)
        }
    }
}

/// Runs one method on one realization.
///
/// Two unit CN(0,1) directions are drawn from `rng` (user 1 then user 2) for
/// every method, so methods driven by identically seeded generators see the
/// same random initialization.
pub fn run_algorithm<R: Rng + ?Sized>(
    real: &NetworkRealization,
    powers: &PowerLevels,
    qos: &QosPolicy,
    method: Method,
    settings: &AlgorithmSettings,
    rng: &mut R,
) -> Result<IterationTrace, NumericsError> {
    assert!(settings.eps > 0.0, "eps must be positive");
    assert!(settings.max_iters >= 1, "max_iters must be at least 1");
    let k = real.k;
    let seeds = [random_direction(rng, k), random_direction(rng, k)];
    let f_pu = primary_precoder(&real.truth.h_pu)?;
    let score = |bf: &BeamformerSet| {
        let q = evaluate_link(&real.truth, bf, powers, settings.sinr_formula);
        (total_throughput(q.sinr_su), q)
    };

    if method == Method::RandomBeamforming {
        let bf = BeamformerSet {
            w_su: seeds,
            p_su: [powers.p_max_mw; 2],
            f_pu,
        };
        let (l, quality) = score(&bf);
        let qos_infeasible = sinr_pu(&real.estimate, &bf, powers) < qos.sinr_threshold_linear;
        return Ok(IterationTrace {
            initial_throughput: l,
            throughput_per_iteration: vec![l],
            converged_at: Some(1),
            final_quality: quality,
            final_beamformers: bf,
            qos_infeasible,
            degenerate: false,
        });
    }

    let projector = match method {
        Method::Proposed => Some(alignment_projector(real)?),
        _ => None,
    };

    let mut degenerate = false;
    let w_init = seeds.map(|s| match &projector {
        Some(p) => {
            let (w, d) = project_or_fallback(p, &s);
            degenerate |= d;
            w
        }
        None => s,
    });
    let mut bf = BeamformerSet {
        w_su: w_init,
        p_su: [powers.p_max_mw; 2],
        f_pu,
    };
    let (initial_throughput, mut quality) = score(&bf);

    let mut trace = Vec::with_capacity(settings.max_iters);
    let mut converged_at = None;
    let mut qos_infeasible = false;
    for iter in 1..=settings.max_iters {
        for i in 0..2 {
            let beam = design_beamformer(&real.estimate.h_su[i], projector.as_ref())?;
            degenerate |= beam.degenerate;
            bf.w_su[i] = beam.w;
        }
        let alloc = allocate_power(&real.estimate, &bf, powers, qos);
        bf = alloc.beamformers;
        qos_infeasible = alloc.qos_infeasible;

        let (l, q) = score(&bf);
        quality = q;
        let previous = trace.last().copied();
        trace.push(l);
        if let Some(prev) = previous {
            if (l - prev).abs() < settings.eps {
                converged_at = Some(iter);
                break;
            }
        }
    }

    Ok(IterationTrace {
        initial_throughput,
        throughput_per_iteration: trace,
        converged_at,
        final_quality: quality,
        final_beamformers: bf,
        qos_infeasible,
        degenerate,
    })
}
