//! Supercharacter theories attached to normal lattices.
//!
//! Each lattice node `N` contributes the superclass `N∘` (elements of `N` in
//! no smaller node) and the supercharacter `χ^{N•}`, obtained from the
//! permutation characters `χ^N = Σ_{O ⊇ N} χ^{O•}` by Möbius inversion.

mod character;
mod degree;
pub mod identities;
mod partition;
mod verify;

use thiserror::Error;

use crate::lattice::{LatticeError, NodeId};

pub use character::{
    chi_bullet_moebius, chi_bullet_multiplicative, chi_subgroup, inner_product, CharacterKind,
    ClassFunction, Supercharacter,
};
pub use degree::{degree_sum, moebius_degree, super_degree, DegreeSum, DegreeSumCase};
pub use partition::{build_superclasses, Superclass, SuperclassPartition};
pub use verify::{verify_sct, SCTheory, VerificationFailure};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SctError {
    #[error("formula does not apply at node {node}: {reason}")]
    FormulaInapplicable { node: NodeId, reason: String },
    #[error("no unique minimal cover set for element {element} at node {node}")]
    Ambiguous { node: NodeId, element: usize },
    #[error("class functions live on different partitions ({left} vs {right} blocks)")]
    PartitionMismatch { left: usize, right: usize },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
