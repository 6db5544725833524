use std::fmt;

use super::matrix::{invert_scalar, scalar_apply};
use super::GermError;
use crate::exactfield::{Extension, FieldElem};
use crate::jets::{Jet, JetRing};

/// A coordinate change `Φ` of a jet ring preserving its ideal, stored with
/// its inverse. With parameters present, `Φ` moves only the main variables.
#[derive(Clone, PartialEq, Eq)]
pub struct Aut {
    ring: JetRing,
    comps: Vec<Jet>,
    inv: Vec<Jet>,
}

impl fmt::Debug for Aut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Aut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn n_main(ring: &JetRing) -> usize {
    ring.main_vars().len()
}

impl Aut {
    pub fn new(ring: &JetRing, comps: Vec<Jet>) -> Result<Aut, GermError> {
        let n = n_main(ring);
        if comps.len() != n {
            return Err(GermError::ComponentCount {
                expected: n,
                got: comps.len(),
            });
        }
        let shape = ring.shape();
        for (i, c) in comps.iter().enumerate() {
            if c.ring() != ring {
                return Err(GermError::SpaceMismatch(format!("component {i} is in another ring")));
            }
            if !c.constant_term().is_zero() {
                return Err(GermError::NonZeroConstant(i));
            }
            if c.support().any(|k| shape.main_degree(k) == 0) {
                return Err(GermError::ParameterOnlyTerm(i));
            }
        }
        let inv = invert_series(ring, &comps)?;
        let aut = Aut {
            ring: ring.clone(),
            comps,
            inv,
        };
        aut.check_ideal(&aut.comps)?;
        aut.check_ideal(&aut.inv)?;
        Ok(aut)
    }

    pub fn parse(ring: &JetRing, comps: &[&str]) -> Result<Aut, GermError> {
        let jets = comps
            .iter()
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        Aut::new(ring, jets)
    }

    pub fn identity(ring: &JetRing) -> Aut {
        let comps: Vec<Jet> = (0..n_main(ring)).map(|i| ring.var(i)).collect();
        Aut {
            ring: ring.clone(),
            inv: comps.clone(),
            comps,
        }
    }

    fn check_ideal(&self, comps: &[Jet]) -> Result<(), GermError> {
        let args = self.args(comps);
        for q in self.ring.ideal_gens() {
            let image = q.substitute(&args)?;
            if !image.is_zero() {
                return Err(GermError::IdealNotPreserved {
                    generator: q.to_string(),
                    residual: image.to_string(),
                });
            }
        }
        Ok(())
    }

    fn args(&self, comps: &[Jet]) -> Vec<Jet> {
        let n = comps.len();
        let mut a = comps.to_vec();
        a.extend((0..self.ring.param_vars().len()).map(|i| self.ring.var(n + i)));
        a
    }

    pub fn ring(&self) -> &JetRing {
        &self.ring
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn inverse_comps(&self) -> &[Jet] {
        &self.inv
    }

    pub fn inverse(&self) -> Aut {
        Aut {
            ring: self.ring.clone(),
            comps: self.inv.clone(),
            inv: self.comps.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.comps
            .iter()
            .enumerate()
            .all(|(i, c)| *c == self.ring.var(i))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Aut) -> Aut {
        let comps = self.comps.iter().map(|c| other.apply(c)).collect();
        let inv = other.inv.iter().map(|c| self.apply_inverse(c)).collect();
        Aut {
            ring: self.ring.clone(),
            comps,
            inv,
        }
    }

    /// `j ∘ Φ`.
    pub fn apply(&self, j: &Jet) -> Jet {
        j.substitute(&self.args(&self.comps)).expect("automorphism arguments")
    }

    /// `j ∘ Φ^{-1}`.
    pub fn apply_inverse(&self, j: &Jet) -> Jet {
        j.substitute(&self.args(&self.inv)).expect("automorphism arguments")
    }

    /// The matrix of the parameter-free linear part.
    pub fn linear_part(&self) -> Vec<Vec<FieldElem>> {
        linear_part(&self.ring, &self.comps)
    }

    pub fn base_change(&self, ext: &Extension, ring: &JetRing) -> Aut {
        Aut {
            ring: ring.clone(),
            comps: self.comps.iter().map(|c| c.base_change(ext, ring)).collect(),
            inv: self.inv.iter().map(|c| c.base_change(ext, ring)).collect(),
        }
    }

    pub fn descend(&self, ext: &Extension, ring: &JetRing) -> Option<Aut> {
        let comps = self
            .comps
            .iter()
            .map(|c| c.descend(ext, ring))
            .collect::<Option<Vec<_>>>()?;
        let inv = self
            .inv
            .iter()
            .map(|c| c.descend(ext, ring))
            .collect::<Option<Vec<_>>>()?;
        Some(Aut {
            ring: ring.clone(),
            comps,
            inv,
        })
    }

    /// Same coordinate change with every parameter set to zero.
    pub fn at_params_zero(&self) -> Result<Aut, GermError> {
        let comps = self.comps.iter().map(params_to_zero).collect();
        Aut::new(&self.ring, comps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.comps.iter().map(|c| c.to_json()).collect())
    }
}

pub(crate) fn params_to_zero(j: &Jet) -> Jet {
    let ring = j.ring();
    let shape = ring.shape();
    let f = ring.field();
    let c = j
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            if shape.param_degree(i) > 0 {
                f.zero_v()
            } else {
                x.clone()
            }
        })
        .collect();
    Jet::from_coeffs(ring, c)
}

fn linear_part(ring: &JetRing, comps: &[Jet]) -> Vec<Vec<FieldElem>> {
    let nv = ring.n_vars();
    comps
        .iter()
        .map(|c| {
            (0..comps.len())
                .map(|j| {
                    let mut e = vec![0; nv];
                    e[j] = 1;
                    c.coeff(&e)
                })
                .collect()
        })
        .collect()
}

/// Solves `Φ(Ψ) = x` by the fixed point `Ψ ← A^{-1}(x - h(Ψ))` where `A` is
/// the linear part and `h = Φ - A x`; each pass fixes one more degree.
fn invert_series(ring: &JetRing, comps: &[Jet]) -> Result<Vec<Jet>, GermError> {
    let f = ring.field();
    let n = comps.len();
    let free = ring.free();
    let a = linear_part(ring, comps);
    let a_inv = invert_scalar(f, &a).ok_or(GermError::SingularLinearPart)?;
    let lifted: Vec<Jet> = comps
        .iter()
        .map(|c| c.reinterpret(&free).expect("same shape"))
        .collect();
    let xs: Vec<Jet> = (0..n).map(|i| free.var(i)).collect();
    let lin = scalar_apply(&free, &a, &xs);
    let h: Vec<Jet> = lifted.iter().zip(&lin).map(|(p, l)| p - l).collect();
    let params: Vec<Jet> = (0..free.param_vars().len()).map(|i| free.var(n + i)).collect();
    let mut psi = scalar_apply(&free, &a_inv, &xs);
    let rounds = ring.order() + ring.param_order() + 2;
    for _ in 0..rounds {
        let mut args = psi.clone();
        args.extend(params.iter().cloned());
        let hs: Vec<Jet> = h
            .iter()
            .map(|hi| hi.substitute(&args).expect("arguments in the maximal ideal"))
            .collect();
        let rhs: Vec<Jet> = xs.iter().zip(&hs).map(|(x, y)| x - y).collect();
        let next = scalar_apply(&free, &a_inv, &rhs);
        if next == psi {
            break;
        }
        psi = next;
    }
    psi.into_iter()
        .map(|p| p.reinterpret(ring).map_err(GermError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::germs::germ_space;

    #[test]
    fn inverse_examples() {
        let q = Field::rationals();
        let r = germ_space(&q, &["x"], 3, &[]).unwrap();
        let a = Aut::parse(&r, &["x+x^2"]).unwrap();
        assert_eq!(a.inverse_comps()[0].to_string(), "x-x^2+2*x^3");
        assert!(a.compose(&a.inverse()).is_identity());

        let rj = germ_space(&q, &["x", "y"], 3, &["x*y"]).unwrap();
        assert!(Aut::parse(&rj, &["y", "x"]).is_ok());
        let err = Aut::parse(&rj, &["x+y", "y"]).unwrap_err();
        assert!(matches!(err, GermError::IdealNotPreserved { ref residual, .. } if residual == "y^2"));
        assert!(matches!(Aut::parse(&r, &["x^2"]), Err(GermError::SingularLinearPart)));
    }

    #[test]
    fn family_inverse() {
        let q = Field::rationals();
        let r = crate::germs::family_space(&q, &["x".into()], &["t".into()], 3, 1, &[]).unwrap();
        let a = Aut::parse(&r, &["x-1/2*t*x^2"]).unwrap();
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(a.inverse().compose(&a).is_identity());
        assert!(matches!(Aut::parse(&r, &["x+t"]), Err(GermError::ParameterOnlyTerm(0))));
    }
}
