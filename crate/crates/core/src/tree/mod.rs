//! Generalized Grigorchuk groups acting on the rooted binary tree, plus a
//! depth-limited engine for arbitrary wreath-recursion definitions.

mod backend;
mod group;
mod mealy;
mod omega;
mod word;

pub use backend::{TreeBackend, TreeElem, DEFAULT_FINGERPRINT_LEVEL};
pub use group::{GrigorchukGroup, Order, SectionPair};
pub use mealy::{MealyDef, MealyRule, MealyVerdict, RuleSpec, MAX_MEALY_DEPTH};
pub use omega::OmegaSequence;
pub use word::{GenSet, Letter, LetterPerm, TreeWord};
