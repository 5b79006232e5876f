#![no_std]
#![warn(missing_docs)]

//! Hierarchical-modulation time sharing for satellite broadcast.
//!
//! This crate holds the allocation-only core of the simulator:
//!
//! * [`constellation`]: hierarchical QPSK / 8-PSK / 32-APSK geometry and the
//!   share of symbol energy carried by the high-energy (HE) stream.
//! * [`modcod`]: decoding-threshold tables and modcod selection.
//! * [`rate`]: achievable rate pairs, the equal-rate point of their convex
//!   hull, receiver grouping and harmonic aggregation.
//! * [`bessel`] and [`beam`]: the parabolic spot-beam pattern, receiver
//!   placement and weather attenuation sampling.
//! * [`campaign`]: Monte Carlo sweeps over the boresight SNR.
//!
//! File formats, the scenario loader, parallel execution and the command-line
//! front end live in the `hmts` crate.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod beam;
pub mod bessel;
pub mod campaign;
pub mod constellation;
pub mod error;
pub mod modcod;
pub mod rate;
pub mod seed;

pub use error::{CampaignError, ParamError, TableError};
