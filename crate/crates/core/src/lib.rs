//! Exact normal lattice supercharacter theories of finite groups.
//!
//! Character values are generic over [`scalar::Scalar`]; the crate-level
//! aliases fix the exact rational scalar used by the checks, with float
//! variants for quick evaluation.

pub mod families;
pub mod group;
pub mod lattice;
pub mod oracle;
pub mod product;
pub mod report;
pub mod restriction;
pub mod scalar;
pub mod sct;
pub mod suite;

pub use num_rational::BigRational as Rational;

pub use group::{make_group, GroupSpec, GroupTable, Subgroup};
pub use lattice::{normal_lattice, NodeId, NormalLattice};
pub use sct::{verify_sct, SCTheory};

pub type ExactClassFunction = sct::ClassFunction<Rational>;
pub type ExactSupercharacter = sct::Supercharacter<Rational>;
pub type FloatClassFunction = sct::ClassFunction<f64>;
pub type FloatSupercharacter = sct::Supercharacter<f64>;
pub type F32Supercharacter = sct::Supercharacter<f32>;
