//! Tangent spaces of the equivalence groups, exp/log between filtered
//! tangent vectors and group elements, and jet-level Artin–Rees bounds.

mod exp;
mod image;
mod vectors;

pub use exp::{exp_vf, log_aut};
pub(crate) use image::module_level;
pub use image::{artin_rees_bound, tangent_data, tangent_space, ArtinRees, TangentData};
pub use vectors::der_log;

use std::fmt;

use thiserror::Error;

use crate::germs::{GermError, MapGerm};
use crate::jets::{Jet, JetError, JetRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangentError {
    #[error("exp/log need characteristic zero")]
    PositiveCharacteristic,
    #[error("vector field does not raise the filtration; its exponential does not terminate")]
    NotOrderRaising,
    #[error("group element has level 0; its logarithm is not defined")]
    LevelZero,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bad vector field: {0}")]
    Syntax(String),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// A tangent vector of one of the groups. Right parts are `Σ a_i ∂/∂x_i`
/// with `a_i` source jets, left parts `Σ b_k ∂/∂y_k` with `b_k` target
/// jets, contact parts `Σ ξ_k(x, y) ∂/∂y_k` with `ξ_k` in the contact ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TangentVector {
    Right(Vec<Jet>),
    Left(Vec<Jet>),
    LeftRight { left: Vec<Jet>, right: Vec<Jet> },
    Contact { contact: Vec<Jet>, right: Vec<Jet> },
    ContactLin { matrix: Vec<Vec<Jet>>, right: Vec<Jet> },
}

fn zip_with(a: &[Jet], b: &[Jet], op: impl Fn(&Jet, &Jet) -> Jet) -> Vec<Jet> {
    a.iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn field_string(coeffs: &[Jet], names: &[String]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, v)| {
            let s = c.to_string();
            if s == "1" {
                format!("d/d{v}")
            } else if c.support().count() > 1 {
                format!("({s}) d/d{v}")
            } else {
                format!("{s} d/d{v}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl fmt::Display for TangentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let right = |r: &[Jet]| match r.first() {
            Some(j) => field_string(r, j.ring().main_vars()),
            None => "0".into(),
        };
        let vert = |c: &[Jet], m: usize| match c.first() {
            Some(j) => {
                let ring = j.ring();
                let n = ring.main_vars().len() - m;
                field_string(c, &ring.main_vars()[n..])
            }
            None => "0".into(),
        };
        match self {
            TangentVector::Right(r) => f.write_str(&right(r)),
            TangentVector::Left(l) => f.write_str(&right(l)),
            TangentVector::LeftRight { left, right: r } => {
                write!(f, "left: {}; right: {}", right(left), right(r))
            }
            TangentVector::Contact { contact, right: r } => {
                write!(f, "contact: {}; right: {}", vert(contact, contact.len()), right(r))
            }
            TangentVector::ContactLin { matrix, right: r } => {
                let rows: Vec<String> = matrix
                    .iter()
                    .map(|row| {
                        let e: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                        format!("({})", e.join(", "))
                    })
                    .collect();
                write!(f, "matrix: [{}]; right: {}", rows.join("; "), right(r))
            }
        }
    }
}

impl TangentVector {
    /// Same variant and component counts.
    fn check_like(&self, other: &TangentVector) {
        assert_eq!(
            std::mem::discriminant(self),
            std::mem::discriminant(other),
            "tangent vectors of different groups"
        );
    }

    pub fn add(&self, other: &TangentVector) -> TangentVector {
        self.check_like(other);
        let add = |a: &[Jet], b: &[Jet]| zip_with(a, b, |x, y| x + y);
        use TangentVector as T;
        match (self, other) {
            (T::Right(a), T::Right(b)) => T::Right(add(a, b)),
            (T::Left(a), T::Left(b)) => T::Left(add(a, b)),
            (T::LeftRight { left: l1, right: r1 }, T::LeftRight { left: l2, right: r2 }) => {
                T::LeftRight {
                    left: add(l1, l2),
                    right: add(r1, r2),
                }
            }
            (T::Contact { contact: c1, right: r1 }, T::Contact { contact: c2, right: r2 }) => {
                T::Contact {
                    contact: add(c1, c2),
                    right: add(r1, r2),
                }
            }
            (T::ContactLin { matrix: m1, right: r1 }, T::ContactLin { matrix: m2, right: r2 }) => {
                T::ContactLin {
                    matrix: m1.iter().zip(m2).map(|(a, b)| add(a, b)).collect(),
                    right: add(r1, r2),
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn scale(&self, c: &crate::FieldElem) -> TangentVector {
        let sc = |a: &[Jet]| a.iter().map(|x| x.scale(c)).collect::<Vec<_>>();
        use TangentVector as T;
        match self {
            T::Right(a) => T::Right(sc(a)),
            T::Left(a) => T::Left(sc(a)),
            T::LeftRight { left, right } => T::LeftRight {
                left: sc(left),
                right: sc(right),
            },
            T::Contact { contact, right } => T::Contact {
                contact: sc(contact),
                right: sc(right),
            },
            T::ContactLin { matrix, right } => T::ContactLin {
                matrix: matrix.iter().map(|r| sc(r)).collect(),
                right: sc(right),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        let z = |a: &[Jet]| a.iter().all(|x| x.is_zero());
        match self {
            TangentVector::Right(a) | TangentVector::Left(a) => z(a),
            TangentVector::LeftRight { left, right } => z(left) && z(right),
            TangentVector::Contact { contact, right } => z(contact) && z(right),
            TangentVector::ContactLin { matrix, right } => matrix.iter().all(|r| z(r)) && z(right),
        }
    }

    /// The first-order motion `ξ·f`, matching the sign of the group action:
    /// `exp(ξ)·f = f + ξ·f + (higher order)`.
    pub fn apply(&self, f: &MapGerm) -> Vec<Jet> {
        let comps = f.comps();
        let right = |a: &[Jet]| -> Vec<Jet> {
            comps.iter().map(|c| -&derive(a, c)).collect()
        };
        let left = |b: &[Jet]| -> Vec<Jet> {
            b.iter()
                .map(|bk| bk.substitute(comps).expect("map components lie in the maximal ideal"))
                .collect()
        };
        let add = |a: Vec<Jet>, b: Vec<Jet>| zip_with(&a, &b, |x, y| x + y);
        match self {
            TangentVector::Right(a) => right(a),
            TangentVector::Left(b) => left(b),
            TangentVector::LeftRight { left: l, right: r } => add(left(l), right(r)),
            TangentVector::Contact { contact, right: r } => {
                let sp = f.space();
                let src = sp.source();
                let n = sp.n();
                let mut args: Vec<Jet> = (0..n).map(|i| src.var(i)).collect();
                args.extend(comps.iter().cloned());
                args.extend((0..src.param_vars().len()).map(|i| src.var(n + i)));
                let c: Vec<Jet> = contact
                    .iter()
                    .map(|x| x.substitute(&args).expect("contact arguments"))
                    .collect();
                add(c, right(r))
            }
            TangentVector::ContactLin { matrix, right: r } => {
                let ring = f.space().source();
                let lin: Vec<Jet> = matrix
                    .iter()
                    .map(|row| row.iter().zip(comps).fold(ring.zero(), |acc, (a, c)| &acc + &(a * c)))
                    .collect();
                add(lin, right(r))
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arr = |a: &[Jet]| serde_json::Value::Array(a.iter().map(|x| x.to_json()).collect());
        use serde_json::json;
        match self {
            TangentVector::Right(a) => json!({"right": arr(a)}),
            TangentVector::Left(b) => json!({"left": arr(b)}),
            TangentVector::LeftRight { left, right } => json!({"left": arr(left), "right": arr(right)}),
            TangentVector::Contact { contact, right } => {
                json!({"contact": arr(contact), "right": arr(right)})
            }
            TangentVector::ContactLin { matrix, right } => {
                let m: Vec<serde_json::Value> = matrix.iter().map(|r| arr(r)).collect();
                json!({"matrix": m, "right": arr(right)})
            }
        }
    }
}

/// `Σ a_i ∂h/∂v_i` over the first `a.len()` variables of `h`'s ring.
pub(crate) fn derive(a: &[Jet], h: &Jet) -> Jet {
    a.iter()
        .enumerate()
        .filter(|(_, ai)| !ai.is_zero())
        .fold(h.ring().zero(), |acc, (i, ai)| &acc + &(ai * &h.derivative(i)))
}

/// Parses `x^2 d/dx + x*y d/dy` into one coefficient per variable of `ring`.
pub fn parse_vector_field(ring: &JetRing, text: &str) -> Result<Vec<Jet>, TangentError> {
    let mut coeffs = vec![ring.zero(); ring.n_vars()];
    let text = text.trim();
    if text == "0" || text.is_empty() {
        return Ok(coeffs);
    }
    let mut rest = text;
    while !rest.trim().is_empty() {
        let Some(at) = rest.find("d/d") else {
            return Err(TangentError::Syntax(format!("missing d/d<var> after '{}'", rest.trim())));
        };
        let mut coeff = rest[..at].trim();
        if let Some(c) = coeff.strip_prefix('+') {
            coeff = c.trim();
        }
        let tail = &rest[at + 3..];
        let len = tail
            .find(|ch: char| !(ch.is_alphanumeric() || ch == '_'))
            .unwrap_or(tail.len());
        let name = &tail[..len];
        let i = ring
            .var_index(name)
            .ok_or_else(|| TangentError::Syntax(format!("unknown variable '{name}'")))?;
        let c = match coeff {
            "" => ring.one(),
            "-" => -&ring.one(),
            s => ring.parse(s)?,
        };
        coeffs[i] = &coeffs[i] + &c;
        rest = &tail[len..];
    }
    Ok(coeffs)
}
