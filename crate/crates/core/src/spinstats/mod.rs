//! Nuclear-spin characters, twisted multiplicities and statistical
//! weights, and the explicit `S±` states of the full permutation-inversion
//! group.

mod spin;
mod symmetrize;
mod weights;


pub use spin::{spin_character, SpinSystem};
pub use symmetrize::{
    build_symmetrized_state, build_symmetrized_states, verify_s_pm, ModelSpace, SymmetrizedPair, SymmetrizedState, VerificationReport,
    MAX_MODEL_DIM,
};
pub use weights::{
    sign_character, statistical_weights, twist_permutation, twisted_multiplicities, twisted_multiplicity,
    SpinMultiplicity, SpinSign, WeightEntry, WeightTable,
};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::pigroup::PiGroupError;
use crate::reptheory::RepError;
use crate::tunneling::TunnelingError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("spin multiplicity of {label} is not an integer: {value} + {imag}i")]
    NonIntegralMultiplicity { label: String, value: f64, imag: f64 },
    #[error("the group is neither pure-permutation nor half starred")]
    UnsupportedCase,
    #[error("no spin partner for {label} in the {} branch ({available} copies available)", sign.symbol())]
    ZeroVector { label: String, sign: SpinSign, available: usize },
    #[error("vector is not symmetrized (residual {residual:e})")]
    NotSymmetrized { residual: f64 },
    #[error("model space of dimension {dim} exceeds {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("invalid level: {0}")]
    InvalidLevel(String),
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    PiGroup(#[from] PiGroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Tunneling(#[from] TunnelingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
