use thiserror::Error;

use crate::state::{ModeId, Polarization, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("incompatible states: {0}")]
    Incompatible(String),

    #[error("mode `{0}` is already present in the state")]
    ModeCollision(ModeId),

    #[error("coherent mode `{0}` is not in the state's domain")]
    MissingMode(ModeId),

    #[error("occupancy exceeded: mode `{mode}` already holds a {pol:?} photon")]
    Occupancy { mode: ModeId, pol: Polarization },

    #[error("state vanished (squared norm {0:e})")]
    VanishedBranch(f64),

    #[error("invalid measurement context: {0}")]
    InvalidMeasurement(String),

    #[error("probe amplitude {0} is outside the modeled phase classes")]
    UnmodeledProbe(C64),

    #[error("malformed distribution: {0}")]
    MalformedDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
}

pub type Result<T> = std::result::Result<T, Error>;
