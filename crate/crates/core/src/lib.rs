//! Computational model of the extended additive K-theory group of the complex
//! numbers and its entropy regulator.
//!
//! The crate is organised bottom-up:
//!
//! - [`cover`]: the doubly-punctured plane, the cut plane and its universal
//!   abelian cover, polygonal paths and branch data by cut-crossing counts.
//! - [`entropy`]: the entropy function on the cut plane and on the cover, the
//!   real regulator, and step-wise analytic continuation along paths.
//! - [`fourterm`]: 4-term tuples, their branch lattice, monodromy transport
//!   and the extended 4-term relation.
//! - [`modules`]: formal sums of generators, relation instances, the maps
//!   `pi` and `chi`, the regulator on formal sums, and exact certificates.
//! - [`asymptotics`]: log-factorials, binomial asymptotics and the integer
//!   identities behind the 4-term relation.

pub mod asymptotics;
pub mod cover;
pub mod entropy;
pub mod fourterm;
pub mod modules;

pub use cover::{CoverPoint, CutPoint, DeckVector, PolyPath, PuncturedPoint, Side};
pub use entropy::{continue_entropy, entropy_cover, entropy_principal, real_regulator};
pub use modules::{FormalSum, GaussRat, Generator, Group};

pub use num_complex::Complex64;
