//! Simulation of entanglement concentration for hybrid entangled states:
//! a polarized photon (or several) entangled with coherent-state modes.
//!
//! The crate is organized in layers:
//!
//! - [`state`]: sparse hybrid states, overlaps, tensor products, fidelity.
//! - [`optics`]: wave plates, polarizing and balanced beam splitters,
//!   variable beam splitters, cross-Kerr media.
//! - [`measurement`]: polarization, photon number, homodyne phase class,
//!   post-selection and seeded sampling.
//! - [`protocols`]: the concentration protocols as exact outcome trees and
//!   as Monte Carlo trajectories.
//! - [`analysis`]: analytic yield curves and tree-versus-formula checks.
//!
//! Each capability has a runnable program under `examples/`, e.g.
//! `cargo run --example bs_protocol`.

pub mod analysis;
pub mod error;
pub mod json;
pub mod measurement;
pub mod optics;
pub mod protocols;
pub mod state;

pub use error::{Error, Result};
pub use protocols::{run_monte_carlo, run_protocol, ProtocolId, ProtocolParams, ProtocolResult, Verdict};
pub use state::{HybridState, Ket, ModeId, OverlapMode, Polarization, SimConfig, C64};
