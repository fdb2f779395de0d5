//! Perfect codes and perfect bitrades in the Star graph `S_n`.
//!
//! The Star graph is the Cayley graph of `Sym_n` generated by the
//! transpositions `(1 i)`. This crate builds the known perfect codes of
//! `S_n` (the point stabilizer, PGL(2,5) and its cosets, and the recursive
//! lift to higher degrees), verifies them, classifies perfect codes and
//! bitrades for small `n` by exhaustive search, and ships a CLI (`starcode`)
//! over a plain-text permutation file format.
//!
//! Composition applies the right factor first: `(p∘q)(x) = p(q(x))`.

pub mod cli;
pub mod code;
pub mod error;
pub mod group;
pub mod perm;
pub mod search;
pub mod star;

pub use code::{Bitrade, Code, MinDistance, Stab1Certificate};
pub use error::{Error, Result};
pub use group::{PermutationSet, Side};
pub use perm::{CycleType, Permutation};
pub use star::StarGraph;
