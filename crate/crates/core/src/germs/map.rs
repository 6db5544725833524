use std::fmt;

use super::{GermError, MapSpace};
use crate::exactfield::{Extension, Value};
use crate::jets::{Filtration, Jet, Order};

/// A map-germ `f = (f_1, …, f_m)` with `f^♯(J_Y) ⊆ J_X`.
#[derive(Clone, PartialEq, Eq)]
pub struct MapGerm {
    space: MapSpace,
    comps: Vec<Jet>,
}

impl fmt::Debug for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl MapGerm {
    pub fn new(space: &MapSpace, comps: Vec<Jet>) -> Result<MapGerm, GermError> {
        if comps.len() != space.m() {
            return Err(GermError::ComponentCount {
                expected: space.m(),
                got: comps.len(),
            });
        }
        let src = space.source();
        for (i, c) in comps.iter().enumerate() {
            if c.ring() != src {
                return Err(GermError::SpaceMismatch(format!("component {i} is not a source jet")));
            }
            if !c.constant_term().is_zero() {
                return Err(GermError::NonZeroConstant(i));
            }
        }
        for q in space.target().ideal_gens() {
            let image = q.substitute(&comps)?;
            if !image.is_zero() {
                return Err(GermError::IdealNotPreserved {
                    generator: q.to_string(),
                    residual: image.to_string(),
                });
            }
        }
        Ok(MapGerm {
            space: space.clone(),
            comps,
        })
    }

    pub fn parse(space: &MapSpace, comps: &[&str]) -> Result<MapGerm, GermError> {
        let jets = comps
            .iter()
            .map(|s| space.source().parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        MapGerm::new(space, jets)
    }

    /// Skips validation; for results of group actions on valid maps.
    pub(crate) fn from_parts(space: &MapSpace, comps: Vec<Jet>) -> MapGerm {
        MapGerm {
            space: space.clone(),
            comps,
        }
    }

    pub fn space(&self) -> &MapSpace {
        &self.space
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    /// Concatenated coefficient vectors of the components.
    pub fn to_vector(&self) -> Vec<Value> {
        self.comps.iter().flat_map(|c| c.coeffs().iter().cloned()).collect()
    }

    pub fn order(&self, filt: &Filtration) -> Order {
        filt.order_of(&self.comps)
    }

    /// Componentwise difference (a module element, not a map).
    pub fn diff(&self, other: &MapGerm) -> Vec<Jet> {
        self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect()
    }

    pub fn base_change(&self, ext: &Extension, space: &MapSpace) -> MapGerm {
        let comps = self
            .comps
            .iter()
            .map(|c| c.base_change(ext, space.source()))
            .collect();
        MapGerm::from_parts(space, comps)
    }

    pub fn descend(&self, ext: &Extension, space: &MapSpace) -> Option<MapGerm> {
        let comps = self
            .comps
            .iter()
            .map(|c| c.descend(ext, space.source()))
            .collect::<Option<Vec<_>>>()?;
        Some(MapGerm::from_parts(space, comps))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.comps.iter().map(|c| c.to_json()).collect())
    }
}
