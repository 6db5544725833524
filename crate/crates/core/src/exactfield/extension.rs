//! A finite simple extension `k ⊂ K` with the power basis of the generator.

use super::{parse::upoly_from_expr, Field, FieldElem, FieldError, FieldKind, Value};
use crate::expr::parse_expr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    base: Field,
    top: Field,
}

impl Extension {
    /// `k[var]/(minpoly)` given as text, e.g. `make(&q, "a", "a^2-2")`.
    pub fn make(base: &Field, var: &str, minpoly: &str) -> Result<Extension, FieldError> {
        let e = parse_expr(minpoly)?;
        let coeffs = upoly_from_expr(base, var, &e)?;
        let top = Field::simple_extension(base, var, &coeffs)?;
        Ok(Extension {
            base: base.clone(),
            top,
        })
    }

    /// Extension data for an existing pair: `top` must be `base` itself or a
    /// simple extension directly over it.
    pub fn between(base: &Field, top: &Field) -> Result<Extension, FieldError> {
        if base == top || top.base() == Some(base) && matches!(top.kind(), FieldKind::Simple { .. })
        {
            Ok(Extension {
                base: base.clone(),
                top: top.clone(),
            })
        } else {
            Err(FieldError::Unsupported(format!(
                "{top} is not a simple extension of {base}"
            )))
        }
    }

    /// The trivial extension `k ⊂ k`.
    pub fn trivial(k: &Field) -> Extension {
        Extension {
            base: k.clone(),
            top: k.clone(),
        }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn degree(&self) -> usize {
        if self.base == self.top {
            1
        } else {
            self.top.degree()
        }
    }

    /// `1, α, …, α^{d-1}` in `K`.
    pub fn basis(&self) -> Vec<FieldElem> {
        let mut out = vec![self.top.one()];
        if self.degree() > 1 {
            let g = self.top.generator().expect("simple extension");
            for _ in 1..self.degree() {
                let next = out.last().expect("nonempty") * &g;
                out.push(next);
            }
        }
        out
    }

    pub fn embed(&self, c: &FieldElem) -> FieldElem {
        if self.base == self.top {
            c.clone()
        } else {
            self.top.embed_base(c)
        }
    }

    pub fn coordinates(&self, e: &FieldElem) -> Result<Vec<FieldElem>, FieldError> {
        if e.field() != &self.top {
            return Err(FieldError::NotInField);
        }
        if self.base == self.top {
            return Ok(vec![e.clone()]);
        }
        match e.value() {
            Value::Poly(c) => Ok(c.iter().map(|v| self.base.elem(v.clone())).collect()),
            _ => Err(FieldError::NotInField),
        }
    }

    /// `Some(c)` when `e` lies in the base field.
    pub fn descend_scalar(&self, e: &FieldElem) -> Result<Option<FieldElem>, FieldError> {
        let mut c = self.coordinates(e)?;
        if c[1..].iter().all(|x| x.is_zero()) {
            Ok(Some(c.swap_remove(0)))
        } else {
            Ok(None)
        }
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(&self, c: &[FieldElem]) -> FieldElem {
        self.basis()
            .iter()
            .zip(c)
            .fold(self.top.zero(), |acc, (b, x)| acc + b * &self.embed(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::parse_scalar;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let q = Field::rationals();
        let ext = Extension::make(&q, "a", "a^2-2").unwrap();
        assert_eq!(ext.degree(), 2);
        assert_eq!(ext.basis().iter().map(|b| b.to_string()).collect::<Vec<_>>(), ["1", "a"]);
        let e = parse_scalar(ext.top(), "3+2*a").unwrap();
        assert_eq!(ext.coordinates(&e).unwrap(), [q.from_i64(3), q.from_i64(2)]);
        let five = ext.top().from_i64(5);
        assert_eq!(ext.coordinates(&five).unwrap(), [q.from_i64(5), q.zero()]);
        assert_eq!(ext.descend_scalar(&ext.top().from_i64(7)).unwrap(), Some(q.from_i64(7)));
        assert_eq!(ext.descend_scalar(&ext.top().generator().unwrap()).unwrap(), None);
        assert_eq!(ext.descend_scalar(&ext.top().zero()).unwrap(), Some(q.zero()));
        assert!(matches!(Extension::make(&q, "a", "a^2-1"), Err(FieldError::Reducible(_))));

        let f3 = Field::prime(3).unwrap();
        let f9 = Extension::make(&f3, "b", "b^2+1").unwrap();
        assert_eq!(f9.degree(), 2);
        let e = parse_scalar(f9.top(), "b+1").unwrap();
        assert_eq!(f9.coordinates(&e).unwrap(), [f3.one(), f3.one()]);
    }

    fn arb_q() -> impl Strategy<Value = i64> {
        -20i64..20
    }

    proptest! {
        #[test]
        fn coordinates_are_linear(a in arb_q(), e0 in arb_q(), e1 in arb_q(), f0 in arb_q(), f1 in arb_q(), d in 1i64..5) {
            let q = Field::rationals();
            let ext = Extension::make(&q, "c", "c^3-c-1").unwrap();
            let a = q.from_ratio(a, d);
            let e = ext.from_coordinates(&[q.from_i64(e0), q.from_i64(e1), q.from_ratio(1, d)]);
            let f = ext.from_coordinates(&[q.from_i64(f0), q.zero(), q.from_i64(f1)]);
            let lhs = ext.coordinates(&(&ext.embed(&a) * &e + &f)).unwrap();
            let ce = ext.coordinates(&e).unwrap();
            let cf = ext.coordinates(&f).unwrap();
            for i in 0..3 {
                prop_assert_eq!(&lhs[i], &(&a * &ce[i] + &cf[i]));
            }
        }

        #[test]
        fn descend_embed_round_trip(n in arb_q(), d in 1i64..7, x in 0u64..9) {
            let q = Field::rationals();
            let ext = Extension::make(&q, "a", "a^2-2").unwrap();
            let c = q.from_ratio(n, d);
            prop_assert_eq!(ext.descend_scalar(&ext.embed(&c)).unwrap(), Some(c));
            let f3 = Field::prime(3).unwrap();
            let f9 = Extension::make(&f3, "b", "b^2+1").unwrap();
            let e = f9.top().elements().unwrap()[x as usize].clone();
            if let Some(c) = f9.descend_scalar(&e).unwrap() {
                prop_assert_eq!(f9.embed(&c), e);
            }
        }

        #[test]
        fn pth_root_of_pth_power(n in 0u64..3, e0 in 0u64..3, e1 in 0u64..3, k in 0u64..4) {
            let f = Field::rational_functions(3, "s").unwrap();
            let s = f.generator().unwrap();
            let r = (&s.pow(k) * &f.from_u64(e1) + f.from_u64(e0))
                .checked_div(&(&s + &f.from_u64(n + 1)))
                .unwrap();
            let p = r.pow(3);
            let root = crate::exactfield::is_pth_power(&p, 3).unwrap().unwrap();
            prop_assert_eq!(root.pow(3), p);
        }
    }
}
