//! Holonomy decomposition of transformation semigroups.
//!
//! [`Skeleton`] holds the image sets of the state set ordered by subduction,
//! with classes, heights and tiles. [`HolonomyDecomposition`] turns it into a
//! cascade: one level per depth, each level the disjoint union of the tiles of
//! that depth's class representatives, acted on by holonomy groups and
//! constant maps.

mod decomposition;
mod skeleton;

pub use decomposition::{HolonomyDecomposition, Level, LevelEntry};
pub use skeleton::{Class, ClassId, MemberId, Skeleton};
