//! Exact-arithmetic computations with finitely generated subgroups of the
//! group of orientation-preserving piecewise-linear homeomorphisms of [0,1]:
//! orbitals and towers, the end-slope homomorphism and controllers, split
//! groups, and constructive classification of solvable subgroups as
//! iterated wreath products and bounded direct sums.

pub mod classify;
pub mod construct;
pub mod error;
pub mod orbitals;
pub mod plmap;
pub mod rational;
pub mod slopes;
pub mod split;
pub mod towers;
pub mod words;

pub use error::{Error, Result};
pub use orbitals::{GroupSpec, SignedOrbital};
pub use plmap::{End, Interval, PLMap};
pub use rational::Rat;
