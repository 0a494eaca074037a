//! Permutation-inversion elements and explicit finite groups built from them.

mod chain;
mod coset;
mod frame;
mod group;
mod perm;

pub use chain::GroupChain;
pub use coset::{coset_decomposition, factorize, CosetDecomposition};
pub use frame::{NucleusClass, NucleusFrame, Statistics};
pub use group::{classify_case, full_pi_group, generate_group, FiniteGroup, GroupCase, DEFAULT_CAP};
pub use perm::{compose, inversion_sign, parity_sign, PermInv};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PiGroupError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("image {0:?} is not a bijection")]
    NotABijection(Vec<usize>),
    #[error("slot {slot} out of range for {slots} slots")]
    SlotOutOfRange { slot: usize, slots: usize },
    #[error("slot {0} appears in more than one cycle")]
    OverlappingCycles(usize),
    #[error("frame mismatch: expected {expected} slots, found {found}")]
    FrameMismatch { expected: usize, found: usize },
    #[error("slot {} is sent to slot {}, which holds a different kind of nucleus", from + 1, to + 1)]
    CrossClass { from: usize, to: usize },
    #[error("inversion used on a frame that does not allow it")]
    InversionNotAllowed,
    #[error("closure exceeds the cap of {cap} elements")]
    ClosureExceedsCap { cap: usize },
    #[error("element list does not start with the identity")]
    MissingIdentity,
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("element list is not closed: product {0} is missing")]
    NotClosed(String),
    #[error("index set is not a subgroup")]
    NotASubgroup,
    #[error("element {0} is not contained in the enclosing group")]
    NotContained(String),
    #[error("bad coset representatives: {0}")]
    BadRepresentatives(String),
}
