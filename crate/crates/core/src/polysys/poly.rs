//! Sparse multivariate polynomials over a [`Field`], ordered by graded
//! reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::exactfield::{Field, FieldElem, Value};
use crate::expr::{Evaluator, Expr, ParseError};

/// Exponent vector compared by grevlex: total degree first, then the
/// smaller exponent in the last differing variable wins.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` unknowns. Terms are kept nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Mono, Value>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.display(&default_names(self.nvars)))
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

impl Poly {
    pub fn zero(field: &Field, nvars: usize) -> Poly {
        Poly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Value) -> Poly {
        Poly::term(field, Mono::one(nvars), c)
    }

    pub fn one(field: &Field, nvars: usize) -> Poly {
        Poly::constant(field, nvars, field.one_v())
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Poly {
        Poly::term(field, Mono::var(nvars, i), field.one_v())
    }

    pub fn term(field: &Field, mono: Mono, c: Value) -> Poly {
        let mut p = Poly::zero(field, mono.0.len());
        if !field.is_zero_v(&c) {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().is_some_and(|m| m.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Value)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Mono, &Value)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Indices of the unknowns that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    fn add_term(&mut self, m: Mono, c: &Value) {
        let f = &self.field;
        let sum = match self.terms.get(&m) {
            Some(old) => f.add_v(old, c),
            None => c.clone(),
        };
        if f.is_zero_v(&sum) {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        self.scale(&self.field.neg_v(&self.field.one_v()))
    }

    pub fn scale(&self, c: &Value) -> Poly {
        let f = &self.field;
        if f.is_zero_v(c) {
            return Poly::zero(f, self.nvars);
        }
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul_v(a, c))).collect(),
        }
    }

    /// `c·x^m·self`.
    pub fn mul_term(&self, m: &Mono, c: &Value) -> Poly {
        let f = &self.field;
        if f.is_zero_v(c) {
            return Poly::zero(f, self.nvars);
        }
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), f.mul_v(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.field, self.nvars);
        for (m, c) in &other.terms {
            for (n, a) in &self.terms {
                out.add_term(n.mul(m), &self.field.mul_v(a, c));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = self.field.inv_v(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Value at a point, all coordinates in the coefficient field.
    pub fn eval(&self, point: &[Value]) -> Value {
        let f = &self.field;
        let mut acc = f.zero_v();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.0.iter().zip(point) {
                if *e > 0 {
                    t = f.mul_v(&t, &f.pow_v(x, *e as u64));
                }
            }
            acc = f.add_v(&acc, &t);
        }
        acc
    }

    /// Coefficients mapped into another field (e.g. along an embedding).
    pub fn map_coeffs(&self, field: &Field, map: impl Fn(&Value) -> Value) -> Poly {
        let mut out = Poly::zero(field, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &map(c));
        }
        out
    }

    /// Text with the given unknown names, highest term first.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let f = &self.field;
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono = crate::jets::monomial::format_exponents(names, &m.0);
            let neg = f.neg_v(c);
            let (sign, c) = match (&c, &neg) {
                (Value::Rat(r), _) if r.is_negative_value() => ("-", neg.clone()),
                _ => ("+", c.clone()),
            };
            let cs = f.format_value(&c);
            let body = if m.is_one() {
                cs
            } else if f.is_one_v(&c) {
                mono
            } else if cs.contains(['+', '-', '/']) {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(sign);
            }
            out.push_str(&body);
        }
        out
    }

    /// Parses a polynomial in the given unknowns; field generators are
    /// recognised as scalars.
    pub fn parse(field: &Field, names: &[String], e: &Expr) -> Result<Poly, ParseError> {
        e.eval(&PolyEval { field, names })
    }
}

trait NegativeValue {
    fn is_negative_value(&self) -> bool;
}

impl NegativeValue for num_rational::BigRational {
    fn is_negative_value(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
}

struct PolyEval<'a> {
    field: &'a Field,
    names: &'a [String],
}

impl Evaluator for PolyEval<'_> {
    type Value = Poly;

    fn int(&self, n: &BigInt) -> Poly {
        Poly::constant(self.field, self.names.len(), self.field.int_v(n))
    }

    fn var(&self, name: &str) -> Option<Poly> {
        let n = self.names.len();
        match self.names.iter().position(|v| v == name) {
            Some(i) => Some(Poly::var(self.field, n, i)),
            None => self
                .field
                .lookup_generator(name)
                .map(|g: FieldElem| Poly::constant(self.field, n, g.into_value())),
        }
    }

    fn add(&self, a: Poly, b: Poly) -> Poly {
        a.add(&b)
    }

    fn sub(&self, a: Poly, b: Poly) -> Poly {
        a.sub(&b)
    }

    fn mul(&self, a: Poly, b: Poly) -> Poly {
        a.mul(&b)
    }

    fn neg(&self, a: Poly) -> Poly {
        a.neg()
    }

    fn div(&self, a: Poly, b: Poly) -> Result<Poly, String> {
        if !b.is_unit() {
            return Err("division only by nonzero constants".into());
        }
        let c = b.leading().expect("unit").1;
        Ok(a.scale(&self.field.inv_v(c).expect("nonzero")))
    }

    fn pow(&self, a: Poly, e: u32) -> Poly {
        a.pow(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grevlex_order() {
        // x > y > z; among degree 2: x^2 > xy > y^2 > xz > yz > z^2
        let mut ms = [
            Mono(vec![0, 0, 2]),
            Mono(vec![1, 1, 0]),
            Mono(vec![0, 1, 1]),
            Mono(vec![2, 0, 0]),
            Mono(vec![1, 0, 1]),
            Mono(vec![0, 2, 0]),
        ];
        ms.sort();
        let want = [[0, 0, 2], [0, 1, 1], [1, 0, 1], [0, 2, 0], [1, 1, 0], [2, 0, 0]];
        for (m, w) in ms.iter().zip(want) {
            assert_eq!(m.0, w);
        }
        assert!(Mono(vec![0, 0, 1]) > Mono(vec![0, 0, 0]));
    }

    #[test]
    fn arithmetic_and_display() {
        let q = Field::rationals();
        let n = names(&["a", "z"]);
        let p = Poly::parse(&q, &n, &parse_expr("(a-1)*(a+1) - 1/2*a*z").unwrap()).unwrap();
        assert_eq!(p.display(&n), "a^2-(1/2)*a*z-1");
        assert_eq!(p.leading().unwrap().0 .0, vec![2, 0]);
        let v = p.eval(&[q.from_i64(2).into_value(), q.from_i64(4).into_value()]);
        assert_eq!(q.format_value(&v), "-1");
        let f3 = Field::prime(3).unwrap();
        let p = Poly::parse(&f3, &n, &parse_expr("2*a^2-1").unwrap()).unwrap();
        assert_eq!(p.display(&n), "2*a^2+2");
        assert_eq!(p.variables(), vec![0]);
    }
}
