//! Group theory of non-rigid molecules.
//!
//! Builds permutation-inversion groups, predicts how rigid-molecule levels
//! split under feasible tunneling, constructs and diagonalizes the
//! symmetry-propagated tunneling Hamiltonian, and computes nuclear-spin
//! statistical weights together with the explicitly symmetrized `S±` states
//! of the full permutation-inversion group.

pub mod cli;
pub mod linalg;
pub mod molecules;
pub mod pigroup;
pub mod reptheory;
pub mod spinstats;
pub mod tunneling;
