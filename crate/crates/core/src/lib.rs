//! Link-level simulation of two secondary transmitter/receiver pairs that
//! share a primary user's band by beamforming into the null space ("idle
//! space") of the primary channel.
//!
//! Layers, bottom up:
//!
//! * [`numerics`]: complex SVD, rank, pseudo-inverse, null-space projectors
//! * [`channel`]: seeded Rayleigh realizations with optional CSI error
//! * [`alignment`]: projected beam design, SINR and interference metrics
//! * [`allocation`]: QoS-constrained secondary power allocation
//! * [`optimizer`]: the alternating design/allocation loop and baselines
//! * [`config`], [`harness`]: parameter sweeps, summaries, CSV output
//! * [`cli`]: the `idle-space` command

pub mod alignment;
pub mod allocation;
pub mod channel;
pub mod cli;
pub mod config;
pub mod harness;
pub mod numerics;
pub mod optimizer;
pub mod rng;
