//! Finite permutation groups and orthogonal representations over Q.

mod group;
mod rep;

pub use group::{FiniteGroup, GeneratorSpec, GroupSpec, Perm, Subgroup, EXHAUSTIVE_ORDER_LIMIT};
pub use rep::{same_group, sign_characters, CyclicCharacter, OrthRep, RepSpec};
