//! Decision procedures for the ordered and unordered k-universal transversal
//! properties of permutation groups, strong factorizability of
//! transformation monoids generated with a group, and the transfer of
//! semigroup properties between a monoid `S` and `SG`, where `G` is the
//! normalizer of `S` in the symmetric group.

pub mod constructions;
pub mod error;
pub mod factorization;
pub mod field;
pub mod format;
pub mod group;
pub mod monoid;
pub mod normalizer;
pub mod perm;
pub mod report;
pub mod transversal;

pub use error::{Error, Result};
pub use group::{BlockSystem, Orbital, PermGroup, Primitivity};
pub use monoid::{GreenStructure, TransMonoid, Verdict, Witness};
pub use perm::{KTuple, Permutation, Point, Transformation};
pub use transversal::{OrderedPartition, Strategy, UtVerdict, UtWitness};
