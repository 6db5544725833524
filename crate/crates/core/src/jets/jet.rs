use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{JetError, JetRing};
use crate::exactfield::{format_term, join_terms, Extension, FieldElem, Value};

/// An element of a [`JetRing`]: dense coefficients over the ring's
/// monomials, reduced modulo the ring's ideal.
#[derive(Clone)]
pub struct Jet {
    ring: JetRing,
    c: Vec<Value>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ring == other.ring
    }
}
impl Eq for Jet {}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.ring.field();
        let shape = self.ring.shape();
        let terms: Vec<String> = self
            .support()
            .map(|i| {
                let mono = if i == 0 { String::new() } else { shape.format(i) };
                format_term(&field.format_value(&self.c[i]), &mono)
            })
            .collect();
        f.write_str(&join_terms(&terms))
    }
}

impl Jet {
    /// Takes ownership of a coefficient vector and reduces it modulo the ideal.
    pub fn from_coeffs(ring: &JetRing, c: Vec<Value>) -> Jet {
        assert_eq!(c.len(), ring.dim(), "coefficient vector length");
        Jet {
            c: ring.reduce_vec(c),
            ring: ring.clone(),
        }
    }

    /// No reduction; `c` must already be in normal form.
    pub(crate) fn from_raw(ring: &JetRing, c: Vec<Value>) -> Jet {
        Jet {
            ring: ring.clone(),
            c,
        }
    }

    pub fn ring(&self) -> &JetRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Value] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Value> {
        self.c
    }

    /// Indices of nonzero coefficients in monomial order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let f = self.ring.field();
        self.c
            .iter()
            .enumerate()
            .filter(move |(_, v)| !f.is_zero_v(v))
            .map(|(i, _)| i)
    }

    pub fn coeff_at(&self, i: usize) -> FieldElem {
        self.ring.field().elem(self.c[i].clone())
    }

    /// Coefficient of `x^e` (zero when truncated away).
    pub fn coeff(&self, e: &[u32]) -> FieldElem {
        match self.ring.shape().index_of(e) {
            Some(i) => self.coeff_at(i),
            None => self.ring.field().zero(),
        }
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff_at(0)
    }

    pub fn is_zero(&self) -> bool {
        self.support().next().is_none()
    }

    /// Lowest total degree of a nonzero term (of the stored normal form).
    pub fn low_degree(&self) -> Option<u32> {
        self.support().map(|i| self.ring.shape().degree(i)).min()
    }

    pub fn check_ring(&self, other: &Jet) -> Result<(), JetError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(JetError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, s: &FieldElem) -> Jet {
        let f = self.ring.field();
        Jet::from_raw(
            &self.ring,
            self.c.iter().map(|x| f.mul_v(x, s.value())).collect(),
        )
    }

    /// Product without the final reduction modulo the ideal.
    fn mul_unreduced(&self, other: &Jet) -> Vec<Value> {
        let f = self.ring.field();
        let shape = self.ring.shape();
        let mut out = vec![f.zero_v(); self.c.len()];
        let b: Vec<usize> = other.support().collect();
        for i in self.support() {
            let x = &self.c[i];
            for &j in &b {
                if let Some(k) = shape.product(i, j) {
                    out[k] = f.add_v(&out[k], &f.mul_v(x, &other.c[j]));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Jet {
        let mut acc = self.ring.one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Inverse of a unit via the geometric series.
    pub fn inv(&self) -> Result<Jet, JetError> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(JetError::NotInvertible)?;
        // self = c0 (1 - h) with h in m
        let h = &self.ring.one() - &self.scale(&c0_inv);
        let mut acc = self.ring.one();
        let mut term = self.ring.one();
        let max = self.ring.order() + self.ring.param_order() + 1;
        for _ in 0..max {
            term = &term * &h;
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
        }
        Ok(acc.scale(&c0_inv))
    }

    /// `∂/∂v_i`, computed on the stored representative.
    pub fn derivative(&self, i: usize) -> Jet {
        let f = self.ring.field();
        let shape = self.ring.shape();
        let mut out = vec![f.zero_v(); self.c.len()];
        for k in self.support() {
            let e = shape.monomial(k);
            if e[i] == 0 {
                continue;
            }
            let mut d = e.to_vec();
            d[i] -= 1;
            let idx = shape.index_of(&d).expect("lower monomial exists");
            let factor = f.int_v(&e[i].into());
            out[idx] = f.add_v(&out[idx], &f.mul_v(&self.c[k], &factor));
        }
        Jet::from_coeffs(&self.ring, out)
    }

    /// `self(args)`: each variable of this jet's ring is replaced by the
    /// corresponding argument. Arguments must lie in the maximal ideal.
    pub fn substitute(&self, args: &[Jet]) -> Result<Jet, JetError> {
        if args.len() != self.ring.n_vars() {
            return Err(JetError::ArgCount {
                expected: self.ring.n_vars(),
                got: args.len(),
            });
        }
        let Some(target) = args.first().map(|a| a.ring.clone()) else {
            return Err(JetError::ArgCount {
                expected: 0,
                got: 0,
            });
        };
        for (index, a) in args.iter().enumerate() {
            a.check_ring(&args[0])?;
            if !a.constant_term().is_zero() {
                return Err(JetError::NonZeroConstant { index });
            }
        }
        Ok(self.substitute_unchecked(args, &target))
    }

    pub(crate) fn substitute_unchecked(&self, args: &[Jet], target: &JetRing) -> Jet {
        let f = target.field();
        let shape = self.ring.shape();
        let top = match self.support().last() {
            Some(i) => i,
            None => return target.zero(),
        };
        let max_deg = target.order() + target.param_order();
        // values of the source monomials, built from lower ones
        let mut vals: Vec<Option<Vec<Value>>> = vec![None; top + 1];
        let mut out = vec![f.zero_v(); target.dim()];
        for k in 0..=top {
            let e = shape.monomial(k);
            let deg: u32 = e.iter().sum();
            if deg > max_deg {
                break;
            }
            let v = if k == 0 {
                target.one().c
            } else {
                let var = e.iter().rposition(|&x| x > 0).expect("nonconstant");
                let mut lower = e.to_vec();
                lower[var] -= 1;
                let li = shape.index_of(&lower).expect("lower monomial");
                match &vals[li] {
                    None => continue,
                    Some(lv) => {
                        let lj = Jet::from_raw(target, lv.clone());
                        let p = lj.mul_unreduced(&args[var]);
                        target.reduce_vec(p)
                    }
                }
            };
            if v.iter().all(|x| f.is_zero_v(x)) {
                continue;
            }
            let c = &self.c[k];
            if !f.is_zero_v(c) {
                for (o, x) in out.iter_mut().zip(&v) {
                    if !f.is_zero_v(x) {
                        *o = f.add_v(o, &f.mul_v(c, x));
                    }
                }
            }
            vals[k] = Some(v);
        }
        Jet::from_raw(target, out)
    }

    /// Drops all terms of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Jet {
        let f = self.ring.field();
        let shape = self.ring.shape();
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, x)| if shape.degree(i) > d { f.zero_v() } else { x.clone() })
            .collect();
        Jet::from_coeffs(&self.ring, c)
    }

    /// The same coefficients read in another ring with an identical shape.
    pub fn reinterpret(&self, ring: &JetRing) -> Result<Jet, JetError> {
        if ring.shape() != self.ring.shape() || ring.field() != self.ring.field() {
            return Err(JetError::RingMismatch);
        }
        Ok(Jet::from_coeffs(ring, self.c.clone()))
    }

    /// Coefficients pushed along `k ⊂ K` into `ring` (same shape, over `K`).
    pub fn base_change(&self, ext: &Extension, ring: &JetRing) -> Jet {
        let base = self.ring.field();
        let c = self
            .c
            .iter()
            .map(|x| ext.embed(&base.elem(x.clone())).into_value())
            .collect();
        Jet::from_coeffs(ring, c)
    }

    /// The jet over `k` when every coefficient lies in `k`.
    pub fn descend(&self, ext: &Extension, ring: &JetRing) -> Option<Jet> {
        let top = self.ring.field();
        let mut c = Vec::with_capacity(self.c.len());
        for x in &self.c {
            let d = ext.descend_scalar(&top.elem(x.clone())).ok()??;
            c.push(d.into_value());
        }
        Some(Jet::from_coeffs(ring, c))
    }

    /// Monomial-string to scalar-string map.
    pub fn to_json(&self) -> serde_json::Value {
        let shape = self.ring.shape();
        let f = self.ring.field();
        let map: serde_json::Map<String, serde_json::Value> = self
            .support()
            .map(|i| (shape.format(i), f.format_value(&self.c[i]).into()))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        debug_assert!(self.ring == rhs.ring, "ring mismatch");
        let f = self.ring.field();
        Jet::from_raw(
            &self.ring,
            self.c.iter().zip(&rhs.c).map(|(a, b)| f.add_v(a, b)).collect(),
        )
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        debug_assert!(self.ring == rhs.ring, "ring mismatch");
        let f = self.ring.field();
        Jet::from_raw(
            &self.ring,
            self.c.iter().zip(&rhs.c).map(|(a, b)| f.sub_v(a, b)).collect(),
        )
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        debug_assert!(self.ring == rhs.ring, "ring mismatch");
        Jet::from_coeffs(&self.ring, self.mul_unreduced(rhs))
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let f = self.ring.field();
        Jet::from_raw(&self.ring, self.c.iter().map(|a| f.neg_v(a)).collect())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::jets::ideal_span;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn arithmetic_examples() {
        let r = JetRing::new(&q(), &["x"], 2);
        let a = r.parse("1+x").unwrap();
        assert_eq!((&a * &a).to_string(), "1+2*x+x^2");

        let r2 = JetRing::new(&q(), &["x", "y"], 3);
        let r2j = r2.with_ideal(&[r2.parse("x*y").unwrap()]).unwrap();
        assert!(r2j.parse("x*y").unwrap().is_zero());
        assert_eq!(r2.parse("(x+y)+(x-y)").unwrap().to_string(), "2*x");
    }

    #[test]
    fn substitution_examples() {
        let y = JetRing::new(&q(), &["y"], 3);
        let x = JetRing::new(&q(), &["x"], 3);
        let f = y.parse("y^2").unwrap();
        let arg = x.parse("x+x^2").unwrap();
        assert_eq!(f.substitute(&[arg.clone()]).unwrap().to_string(), "x^2+2*x^3");
        assert_eq!(y.parse("y").unwrap().substitute(&[x.var(0)]).unwrap(), x.var(0));
        let y2 = JetRing::new(&q(), &["y1", "y2"], 3);
        let g = y2.parse("y1*y2").unwrap();
        let r = g.substitute(&[x.var(0), x.parse("x^2").unwrap()]).unwrap();
        assert_eq!(r.to_string(), "x^3");
        assert!(matches!(
            f.substitute(&[x.parse("1+x").unwrap()]),
            Err(JetError::NonZeroConstant { index: 0 })
        ));
    }

    #[test]
    fn ideal_span_examples() {
        let r = JetRing::new(&q(), &["x"], 4);
        let s = ideal_span(&r, &[r.parse("x^2").unwrap()]);
        assert_eq!(s.rank(), 3);
        let r2 = JetRing::new(&q(), &["x", "y"], 3);
        let s = ideal_span(&r2, &[r2.parse("x*y").unwrap()]);
        assert_eq!(s.rank(), 3);
        assert_eq!(ideal_span(&r2, &[]).rank(), 0);
        let again = crate::jets::SubspaceBasis::from_vectors(&q(), r2.dim(), s.rows().to_vec());
        assert_eq!(again, s);
    }

    #[test]
    fn inverse_and_json() {
        let r = JetRing::new(&q(), &["x"], 4);
        let u = r.parse("2+x").unwrap();
        assert_eq!(&u * &u.inv().unwrap(), r.one());
        assert_eq!(
            r.parse("x^2+1/2*x^3").unwrap().to_json().to_string(),
            r#"{"x^2":"1","x^3":"1/2"}"#
        );
        assert_eq!(r.parse("1/(1-x)").unwrap().to_string(), "1+x+x^2+x^3+x^4");
    }

    fn arb_jet(r: &JetRing) -> impl Strategy<Value = Jet> {
        let r = r.clone();
        let dim = r.dim();
        proptest::collection::vec(-3i64..4, dim).prop_map(move |cs| {
            let f = r.field().clone();
            let mut v: Vec<Value> = cs.into_iter().map(|c| f.from_i64(c).into_value()).collect();
            v[0] = f.zero_v();
            Jet::from_coeffs(&r, v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn substitution_is_associative(
            (f, g, h) in {
                let r = JetRing::new(&Field::rationals(), &["x", "y"], 4);
                (arb_jet(&r), proptest::collection::vec(arb_jet(&r), 2), proptest::collection::vec(arb_jet(&r), 2))
            }
        ) {
            // f(g(h)) = (f(g))(h)
            let gh: Vec<Jet> = g.iter().map(|gi| gi.substitute(&h).unwrap()).collect();
            let lhs = f.substitute(&gh).unwrap();
            let rhs = f.substitute(&g).unwrap().substitute(&h).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
