//! Germ equivalence as a polynomial system in the unknown Taylor
//! coefficients of the group element: compilation, Gröbner-basis
//! inconsistency, exhaustive solving over finite fields and orbit censuses.

mod compile;
mod groebner;
mod orbits;
pub mod poly;
mod polyjet;
mod solve;

pub use compile::compile_system;
pub use groebner::{groebner_inconsistent, spair_cap, GroebnerOutcome};
pub use orbits::{orbit_split, OrbitCensus, DEFAULT_GROUP_CAP};
pub use poly::{Mono, Poly};
pub use solve::{brute_solve, Solution, DEFAULT_SEARCH_CAP};

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::exactfield::{parse_field, Extension, Field, FieldElem, FieldError, FieldKind};
use crate::expr::{parse_expr, ParseError};
use crate::germs::{GermError, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search space of {size} points exceeds the cap of {cap}")]
    CapExceeded { size: String, cap: u64 },
    #[error("bad system: {0}")]
    Format(String),
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// Polynomial equations in named unknowns over a field. Systems compiled
/// from an equivalence problem remember how to read a solution back as a
/// group element.
#[derive(Debug, Clone)]
pub struct PolySystem {
    field: Field,
    unknowns: Vec<String>,
    equations: Vec<Poly>,
    provenance: Vec<String>,
    layout: Option<compile::Layout>,
}

impl PolySystem {
    /// A system from equation texts; every identifier that is not a field
    /// generator must be one of `unknowns`.
    pub fn new(field: &Field, unknowns: &[&str], equations: &[&str]) -> Result<PolySystem, PolyError> {
        let names: Vec<String> = unknowns.iter().map(|s| s.to_string()).collect();
        let mut polys = Vec::new();
        for e in equations {
            polys.push(Poly::parse(field, &names, &parse_expr(e)?)?);
        }
        let provenance = (1..=polys.len()).map(|i| format!("equation {i}")).collect();
        Ok(PolySystem {
            field: field.clone(),
            unknowns: names,
            equations: polys,
            provenance,
            layout: None,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn unknown_index(&self, name: &str) -> Option<usize> {
        self.unknowns.iter().position(|u| u == name)
    }

    /// Equation texts in the unknowns' names.
    pub fn equation_strings(&self) -> Vec<String> {
        self.equations.iter().map(|p| p.display(&self.unknowns)).collect()
    }

    /// The group element a solution point encodes, for compiled systems.
    /// `point` holds one entry per unknown over the top field of `ext`;
    /// unconstrained unknowns (`None`) are read as zero.
    pub fn assemble(&self, ext: &Extension, point: &[Option<FieldElem>]) -> Result<GroupElement, PolyError> {
        let layout = self
            .layout
            .as_ref()
            .ok_or_else(|| PolyError::Precondition("system was not compiled from an equivalence problem".into()))?;
        layout.assemble(ext, point)
    }

    /// Buchberger and the solvers need a perfect, explicitly computable
    /// coefficient field.
    pub(crate) fn check_coefficients(&self) -> Result<(), PolyError> {
        if matches!(self.field.kind(), FieldKind::RationalFunctions { .. }) {
            return Err(PolyError::Unsupported(format!("coefficient field {}", self.field)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let prov: BTreeMap<String, &String> =
            self.provenance.iter().enumerate().map(|(i, p)| (i.to_string(), p)).collect();
        json!({
            "field": self.field.to_string(),
            "unknowns": self.unknowns,
            "equations": self.equation_strings(),
            "provenance": prov,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PolySystem, PolyError> {
        let bad = |m: &str| PolyError::Format(m.into());
        let field = parse_field(v["field"].as_str().ok_or_else(|| bad("missing \"field\""))?)?;
        let strings = |key: &str| -> Result<Vec<String>, PolyError> {
            v[key]
                .as_array()
                .ok_or_else(|| bad(&format!("missing \"{key}\"")))?
                .iter()
                .map(|x| x.as_str().map(String::from).ok_or_else(|| bad(&format!("\"{key}\" must hold strings"))))
                .collect()
        };
        let unknowns = strings("unknowns")?;
        let eqs = strings("equations")?;
        let names: Vec<&str> = unknowns.iter().map(|s| s.as_str()).collect();
        let texts: Vec<&str> = eqs.iter().map(|s| s.as_str()).collect();
        let mut sys = PolySystem::new(&field, &names, &texts)?;
        if let Some(p) = v["provenance"].as_object() {
            for (k, tag) in p {
                if let (Ok(i), Some(t)) = (k.parse::<usize>(), tag.as_str()) {
                    if i < sys.provenance.len() {
                        sys.provenance[i] = t.to_string();
                    }
                }
            }
        }
        Ok(sys)
    }
}
