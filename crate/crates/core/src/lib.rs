//! Exact computations with jets of map-germs and their equivalence groups.

pub mod exactfield;
pub mod jets;
pub mod expr;
pub mod germs;
pub mod tangent;
pub mod descent;
pub mod polysys;

pub use exactfield::{Extension, Field, FieldElem, FieldError};
pub use germs::{Group, GroupElement, MapGerm, MapSpace};
pub use jets::{Filtration, Jet, JetRing};
