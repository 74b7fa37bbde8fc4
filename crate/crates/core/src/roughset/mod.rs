//! Finite rough-set algebra.
//!
//! A [`StateSpace`] enumerates payoff states. Subsets are [`CrispSet`]s,
//! stored as bit masks, so a space holds at most [`MAX_STATES`] states. A
//! [`RoughSet`] is a pair of nested crisp sets (lower and upper
//! approximation). The operations here implement the Pawlak approximations,
//! the fourfold definability taxonomy, tone classification against the zero
//! payoff line and the faithfulness predicates, and [`verify`] checks the
//! two claims by exhaustive enumeration.

mod json;
mod rough;
mod space;
pub mod verify;

use thiserror::Error;

pub use json::{RoughSetDocument, RoughSetJson, StateJson};
pub use rough::{
    approximate, boundary, classify_definability, faithful_crisp, faithful_rough, is_informative,
    tone_classify, DefinabilityClass, RoughSet, ToneClass,
};
pub use space::{CrispSet, Partition, StateSpace, MAX_STATES};
pub use verify::{
    enumerate_rough_sets, verify_existence, verify_expression, Claim, WitnessReport,
    CRISP_FAITHFUL, DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoughSetError {
    #[error("state space must contain at least one state")]
    EmptySpace,
    #[error("state space holds at most {max} states, got {got}")]
    TooManyStates { got: usize, max: usize },
    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),
    #[error("payoff for state `{0}` is not finite")]
    NonFinitePayoff(String),
    #[error("unknown state label `{0}`")]
    UnknownLabel(String),
    #[error("state index {index} out of range for a space of {len} states")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("sets belong to different state spaces")]
    SpaceMismatch,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("lower approximation is not contained in the upper approximation")]
    NotNested,
    #[error("lower and upper approximations are equal; use RoughSet::crisp for crisp embeddings")]
    NotProper,
    #[error(
        "enumeration over {size} states exceeds the cap of {cap}; raise the cap explicitly \
         (work grows like 3^n)"
    )]
    CapExceeded { size: usize, cap: usize },
    #[error("invalid rough-set document: {0}")]
    Document(String),
}
