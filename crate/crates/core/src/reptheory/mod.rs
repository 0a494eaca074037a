//! Numeric character tables, irreducible representation matrices, and the
//! multiplicities with which irreps of a group occur in an induced
//! representation.

mod induced;
mod irrep;
mod table;

pub use induced::{induced_character, induced_character_by_element, splitting_multiplicities, SplittingMultiplicities};
pub use irrep::{irrep_matrices, irrep_matrices_with_seed, IrrepMatrices, MAX_IRREP_GROUP_ORDER};
pub use table::{character_table, character_table_with_seed, CharacterTable};

use thiserror::Error;

use crate::linalg::LinalgError;

/// Seed used for the random combinations inside the numeric methods when
/// the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_CAFE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("random class-algebra combination stayed degenerate after {attempts} attempts (gap {gap:e})")]
    DegenerateRandomCombination { attempts: usize, gap: f64 },
    #[error("recovered irrep dimension {value} is not an integer")]
    NonIntegralDimension { value: f64 },
    #[error("unknown irrep label '{0}'")]
    UnknownLabel(String),
    #[error("relabeling produces duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("no irrep matches the given character row")]
    CharacterRowNotFound,
    #[error("group of order {order} exceeds the limit of {max} for explicit irrep matrices")]
    TooLarge { order: usize, max: usize },
    #[error("irreducible block extraction failed (residual {residual:e})")]
    BlockExtractionFailed { residual: f64 },
    #[error("multiplicity of {label} is not an integer: {value} + {imag}i")]
    NonIntegralMultiplicity { label: String, value: f64, imag: f64 },
    #[error("reciprocity check failed for {label}: point-group sum {direct}, induced inner product {induced}")]
    ReciprocityMismatch { label: String, direct: usize, induced: usize },
    #[error("induced dimension {found} does not match d_Γ·f/p = {expected}")]
    DimensionCount { found: usize, expected: usize },
    #[error("induced character is not constant on classes (residual {residual:e})")]
    NotAClassFunction { residual: f64 },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
