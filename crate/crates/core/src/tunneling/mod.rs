//! Rigid and non-rigid Hamiltonians over the coset-generated basis
//! `G_r|Γi⟩`, their spectra, and the reconciliation of observed level
//! clusters with the predicted splitting pattern.

mod induced;
mod model;
mod spectrum;


pub use induced::{induced_rep_matrix, InducedRepresentation};
pub use model::{
    build_h_nrm, build_h_nrm_with_threshold, build_h_r, NrmHamiltonian, TunnelingModel,
    DEFAULT_HERMITICITY_THRESHOLD,
};
pub use spectrum::{
    character_projector, cluster_levels, default_cluster_tolerance, sector_energies, splitting_report,
    LevelCluster, Residuals, Sector, SectorAnalysis, SplittingReport,
};

pub use crate::linalg::{hermitian_eigen, HermitianEigen};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::reptheory::RepError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TunnelingError {
    #[error("the irrep is not defined on the coset decomposition's subgroup")]
    IrrepGroupMismatch,
    #[error("invalid seed block: {0}")]
    InvalidSeed(String),
    #[error("seed blocks are inconsistent with the symmetry relations (relative residual {residual:e} > {threshold:e})")]
    SeedInconsistency { residual: f64, threshold: f64 },
    #[error("projected Hamiltonian does not commute with the group (residual {residual:e})")]
    CommutantResidual { residual: f64 },
    #[error("sector {label}: {size} states cannot be grouped into levels of dimension {irrep_dim}")]
    SectorDegeneracyMismatch { label: String, size: usize, irrep_dim: usize },
    #[error("Hamiltonian couples different symmetry species (residual {residual:e})")]
    BlockOffDiagonal { residual: f64 },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
