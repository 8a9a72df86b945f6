//! The three presented modules: `beta_2`, `TB_2` and the extended group.
//!
//! Elements are [`FormalSum`]s of [`Generator`]s over a [`Coefficient`] field,
//! either exact ([`GaussRat`]) or approximate (`Complex64`). Relation instances
//! are produced by [`relations`], the maps `pi`, `chi` and the regulator live
//! in [`maps`], and [`certificate`] expresses a target as an exact combination
//! of relation instances.

pub mod certificate;
mod formal;
pub mod maps;
pub mod relations;
mod scalar;
pub mod targets;

use thiserror::Error;

use crate::entropy::EntropyError;
use crate::fourterm::FourTermError;

pub use certificate::{find_certificate, verify_certificate, Certificate};
pub use formal::{FormalSum, Generator, Group};
pub use maps::{bracket, chi_map, kernel_c, lemma2_expand, pi_map, regulator, CHI_BASE};
pub use relations::{RelationInstance, RelationParams, Schema};
pub use scalar::{Coefficient, GaussRat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuleError {
    #[error("generator argument {0} is degenerate")]
    DegenerateArgument(String),
    #[error("branch integers must be even, got ({p}, {q})")]
    OddBranch { p: i64, q: i64 },
    #[error("cannot combine elements of {expected:?} and {found:?}")]
    GroupMismatch { expected: Group, found: Group },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    FourTerm(Box<FourTermError>),
}

impl From<FourTermError> for ModuleError {
    fn from(e: FourTermError) -> Self {
        match e {
            FourTermError::Module(m) => m,
            other => ModuleError::FourTerm(Box::new(other)),
        }
    }
}
