//! Map-germs between scheme-germs at jet level and the equivalence groups
//! acting on them.

mod aut;
mod group;
mod map;
mod matrix;
mod space;

pub use aut::Aut;
pub(crate) use aut::params_to_zero;
pub(crate) use matrix::invert_scalar;
pub use group::{group_level, ContactMap, Group, GroupElement};
pub use map::MapGerm;
pub use matrix::JetMatrix;
pub use space::{family_space, germ_space, rename, with_ideal, MapSpace};

use thiserror::Error;

use crate::jets::JetError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("ideal generator {0} does not vanish at the origin")]
    IdealNotAtOrigin(usize),
    #[error("component {0} has nonzero constant term")]
    NonZeroConstant(usize),
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("ideal not preserved: generator {generator} maps to {residual}, outside the ideal")]
    IdealNotPreserved { generator: String, residual: String },
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("contact component {0} does not vanish on y = 0")]
    ContactNotZeroOnSection(usize),
    #[error("the linearized contact group needs a smooth target")]
    SingularTarget,
    #[error("component {0} has a term free of the main variables")]
    ParameterOnlyTerm(usize),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}
