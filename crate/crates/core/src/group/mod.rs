//! Discrete test groups: `Z^d`, free groups and lamplighters, with their
//! word metrics.

mod cayley;
mod element;

use thiserror::Error;

pub use cayley::GeneratingSet;
pub use element::{Group, GroupElement, LampConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element {element} does not belong to {group}")]
    Mismatch { group: Group, element: String },
    #[error("unknown group descriptor `{0}` (expected z:d, free:k or lamplighter:q)")]
    UnknownGroup(String),
    #[error("cannot parse `{input}` as an element of {group}")]
    ElementSyntax { group: Group, input: String },
    #[error("generating set is not closed under inversion")]
    NotSymmetric,
    #[error("{element} not reached within word radius {cap}")]
    BeyondRadius { element: String, cap: usize },
}
