//! Scalar reference implementations shared by the integration tests.
//!
//! Everything here works on `(re, im)` pairs with explicit loops and does
//! not call into the crate's matrix code.

#![allow(dead_code)]

use idle_space::alignment::BeamformerSet;
use idle_space::channel::{ChannelSet, PowerLevels};
use idle_space::numerics::ComplexMatrix;

pub type Pair = (f64, f64);

fn to_pairs(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
        .collect()
}

fn vec_pairs(v: &[idle_space::numerics::Complex64]) -> Vec<Pair> {
    v.iter().map(|z| (z.re, z.im)).collect()
}

/// `Σ_i |Σ_j h_ij w_j|²` expanded into real arithmetic.
pub fn oracle_gain(h: &ComplexMatrix, w: &[idle_space::numerics::Complex64]) -> f64 {
    let h = to_pairs(h);
    let w = vec_pairs(w);
    let mut total = 0.0;
    for row in &h {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, &(a, b)) in row.iter().enumerate() {
            let (c, d) = w[j];
            re += a * c - b * d;
            im += a * d + b * c;
        }
        total += re * re + im * im;
    }
    total
}

pub fn oracle_interference(h_sp: &[ComplexMatrix; 2], bf: &BeamformerSet) -> f64 {
    let mut total = 0.0;
    for ((h, w), p) in h_sp.iter().zip(&bf.w_su).zip(&bf.p_su) {
        total += p * oracle_gain(h, w);
    }
    total
}

pub fn oracle_sinr_su(i: usize, ch: &ChannelSet, bf: &BeamformerSet, noise: f64, literal: bool) -> f64 {
    let j = 1 - i;
    let signal = bf.p_su[i] * oracle_gain(&ch.h_su[i], &bf.w_su[i]);
    let cross = if literal { &ch.h_su[j] } else { &ch.h_ss[j] };
    let interference = bf.p_su[j] * oracle_gain(cross, &bf.w_su[j]);
    signal / (noise + interference)
}

pub fn oracle_sinr_pu(ch: &ChannelSet, bf: &BeamformerSet, powers: &PowerLevels) -> f64 {
    powers.p_pu_mw * oracle_gain(&ch.h_pu, &bf.f_pu)
        / (powers.noise_mw + oracle_interference(&ch.h_sp, bf))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
