//! Generalized Grigorchuk groups acting on the binary tree, product
//! replacement graphs over pluggable group backends, and checkable growth
//! certificates built from short rigid-stabilizer witnesses.

pub mod bits;
pub mod dsl;
pub mod error;
pub mod group;
pub mod prp;
pub mod schreier;
pub mod tree;
pub mod witness;

pub use bits::Bits;
pub use error::{Error, Result};
pub use group::{FiniteBackend, FreeAbelian, FreeAbelianElement, GroupBackend, ModVector, ModVectorElement};
pub use tree::{GrigorchukGroup, Letter, OmegaSequence, TreeBackend, TreeWord};

/// `Z^d` with machine-word coordinates.
pub type Zd = FreeAbelian<i64>;
pub type ZdElement = FreeAbelianElement<i64>;
