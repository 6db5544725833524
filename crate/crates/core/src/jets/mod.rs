//! Truncated power series, ideals and filtrations as finite-dimensional
//! linear algebra.

mod filtration;
mod jet;
pub mod linalg;
pub mod monomial;
mod ring;

pub use filtration::{Filtration, FiltrationError, FiltrationSpec};
pub use jet::Jet;
pub use linalg::{kernel, null_space, solve, LinearSolver, SubspaceBasis};
pub use ring::{ideal_span, JetRing};

use std::fmt;
use thiserror::Error;

use crate::exactfield::FieldError;
use crate::expr::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("jets belong to different rings")]
    RingMismatch,
    #[error("argument {index} of a substitution has nonzero constant term")]
    NonZeroConstant { index: usize },
    #[error("substitution expects {expected} arguments, got {got}")]
    ArgCount { expected: usize, got: usize },
    #[error("jet is not invertible (zero constant term)")]
    NotInvertible,
    #[error("{0} is not a monomial")]
    NotMonomial(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Filtration order of an element: `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(d) => Some(d),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(d) => write!(f, "{d}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}
