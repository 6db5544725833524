//! Exact scalars: rationals, prime fields, simple algebraic extensions of
//! those, and rational function fields `F_p(s)`.
//!
//! A [`Field`] is a cheap shared handle. Elements are stored as a canonical
//! [`Value`] so equality is representational equality; [`FieldElem`] pairs a
//! value with its field and carries the usual operator overloads.

mod extension;
mod irreducible;
mod parse;
pub mod upoly;

pub use extension::Extension;
pub use parse::{parse_field, parse_field_at, parse_scalar, ScalarEval};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

use crate::expr::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("minimal polynomial {0} is reducible")]
    Reducible(String),
    #[error("minimal polynomial {0} is not monic")]
    NotMonic(String),
    #[error("minimal polynomial {0} has degree above the supported bound of 8")]
    DegreeTooLarge(String),
    #[error("unsupported field construction: {0}")]
    Unsupported(String),
    #[error("characteristic-zero field has no Frobenius")]
    CharacteristicZero,
    #[error("element does not belong to the extension field")]
    NotInField,
    #[error(transparent)]
    Syntax(#[from] ParseError),
}

/// Canonical representation of a scalar. Only meaningful together with the
/// owning [`Field`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Rat(BigRational),
    Mod(u64),
    /// Coordinates over the base field in the power basis, length = degree.
    Poly(Vec<Value>),
    /// Numerator and monic denominator over the prime field, low degree first.
    Frac(Vec<Value>, Vec<Value>),
}

#[derive(Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime(u64),
    Simple {
        base: Field,
        var: String,
        /// Monic, low degree first, length = degree + 1.
        minpoly: Vec<Value>,
    },
    RationalFunctions {
        base: Field,
        var: String,
    },
}

#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub characteristic: u64,
}

#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
            FieldKind::Simple { base, var, minpoly } => {
                write!(f, "{base}[{var}]/({})", format_poly_desc(base, minpoly, var))
            }
            FieldKind::RationalFunctions { base, var } => write!(f, "{base}({var})"),
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldSpec {
            kind: FieldKind::Rationals,
            characteristic: 0,
        }))
    }

    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldSpec {
            kind: FieldKind::Prime(p),
            characteristic: p,
        })))
    }

    /// `F_p(var)`.
    pub fn rational_functions(p: u64, var: &str) -> Result<Field, FieldError> {
        let base = Field::prime(p)?;
        Ok(Field(Arc::new(FieldSpec {
            kind: FieldKind::RationalFunctions {
                base,
                var: var.to_string(),
            },
            characteristic: p,
        })))
    }

    /// `base[var]/(minpoly)`; the polynomial must be monic and irreducible.
    pub fn simple_extension(
        base: &Field,
        var: &str,
        minpoly: &[FieldElem],
    ) -> Result<Field, FieldError> {
        let coeffs: Vec<Value> = minpoly.iter().map(|c| c.value.clone()).collect();
        let coeffs = upoly::trim(base, coeffs);
        let desc = format_poly_desc(base, &coeffs, var);
        match coeffs.last() {
            Some(lc) if base.is_one_v(lc) => {}
            _ => return Err(FieldError::NotMonic(desc)),
        }
        if coeffs.len() < 2 {
            return Err(FieldError::NotMonic(desc));
        }
        if matches!(base.0.kind, FieldKind::RationalFunctions { .. }) {
            return Err(FieldError::Unsupported(
                "extensions of rational function fields".into(),
            ));
        }
        if coeffs.len() - 1 > 8 {
            return Err(FieldError::DegreeTooLarge(desc));
        }
        if !irreducible::is_irreducible(base, &coeffs)? {
            return Err(FieldError::Reducible(desc));
        }
        Ok(Field(Arc::new(FieldSpec {
            characteristic: base.characteristic(),
            kind: FieldKind::Simple {
                base: base.clone(),
                var: var.to_string(),
                minpoly: coeffs,
            },
        })))
    }

    /// The field with `q = p^k` elements, using the first monic irreducible
    /// polynomial of degree `k` in counting order, generator named `w`.
    pub fn finite(q: u64) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        let base = Field::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        let total = p.checked_pow(k).ok_or(FieldError::Unsupported("field too large".into()))?;
        for code in 0..total {
            let mut c = code;
            let mut coeffs: Vec<FieldElem> = (0..k)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    base.from_u64(d)
                })
                .collect();
            coeffs.push(base.one());
            if coeffs[0].is_zero() {
                continue;
            }
            match Field::simple_extension(&base, "w", &coeffs) {
                Ok(f) => return Ok(f),
                Err(FieldError::Reducible(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &self.0.kind {
            FieldKind::Prime(p) => Some(*p),
            FieldKind::Simple { base, minpoly, .. } => {
                let q = base.order()?;
                q.checked_pow((minpoly.len() - 1) as u32)
            }
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Degree over the immediate base (1 for prime fields and `Q`).
    pub fn degree(&self) -> usize {
        match &self.0.kind {
            FieldKind::Simple { minpoly, .. } => minpoly.len() - 1,
            _ => 1,
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match &self.0.kind {
            FieldKind::Simple { base, .. } | FieldKind::RationalFunctions { base, .. } => {
                Some(base)
            }
            _ => None,
        }
    }

    /// Name of the adjoined generator, if any.
    pub fn generator_name(&self) -> Option<&str> {
        match &self.0.kind {
            FieldKind::Simple { var, .. } | FieldKind::RationalFunctions { var, .. } => Some(var),
            _ => None,
        }
    }

    /// Generator names of the whole tower, innermost last.
    pub fn generator_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = Some(self);
        while let Some(f) = cur {
            if let Some(v) = f.generator_name() {
                out.push(v.to_string());
            }
            cur = f.base();
        }
        out
    }

    pub fn generator(&self) -> Option<FieldElem> {
        let v = match &self.0.kind {
            FieldKind::Simple { base, minpoly, .. } => {
                let d = minpoly.len() - 1;
                let mut c = vec![base.zero_v(); d];
                if d == 1 {
                    // degree-one extension: generator is -minpoly[0]
                    c[0] = base.neg_v(&minpoly[0]);
                } else {
                    c[1] = base.one_v();
                }
                Value::Poly(c)
            }
            FieldKind::RationalFunctions { base, .. } => {
                Value::Frac(vec![base.zero_v(), base.one_v()], vec![base.one_v()])
            }
            _ => return None,
        };
        Some(self.elem(v))
    }

    pub fn elem(&self, value: Value) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(self.zero_v())
    }

    pub fn one(&self) -> FieldElem {
        self.elem(self.one_v())
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        self.elem(self.int_v(&BigInt::from(n)))
    }

    pub fn from_u64(&self, n: u64) -> FieldElem {
        self.elem(self.int_v(&BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        self.elem(self.int_v(n))
    }

    /// `num/den` in a characteristic-zero field, or the image of the
    /// fraction in positive characteristic (panics when `den` vanishes).
    pub fn from_ratio(&self, num: i64, den: i64) -> FieldElem {
        let d = self.from_i64(den).inv().expect("nonzero denominator");
        &self.from_i64(num) * &d
    }

    /// Embeds an element of the immediate base field.
    pub fn embed_base(&self, c: &FieldElem) -> FieldElem {
        match &self.0.kind {
            FieldKind::Simple { base, minpoly, .. } => {
                let mut v = vec![base.zero_v(); minpoly.len() - 1];
                v[0] = c.value.clone();
                self.elem(Value::Poly(v))
            }
            FieldKind::RationalFunctions { base, .. } => {
                let n = upoly::trim(base, vec![c.value.clone()]);
                self.elem(Value::Frac(n, vec![base.one_v()]))
            }
            _ => c.clone(),
        }
    }

    // ---- value-level arithmetic ----

    pub fn zero_v(&self) -> Value {
        match &self.0.kind {
            FieldKind::Rationals => Value::Rat(BigRational::zero()),
            FieldKind::Prime(_) => Value::Mod(0),
            FieldKind::Simple { base, minpoly, .. } => {
                Value::Poly(vec![base.zero_v(); minpoly.len() - 1])
            }
            FieldKind::RationalFunctions { base, .. } => Value::Frac(vec![], vec![base.one_v()]),
        }
    }

    pub fn one_v(&self) -> Value {
        self.int_v(&BigInt::one())
    }

    pub fn int_v(&self, n: &BigInt) -> Value {
        match &self.0.kind {
            FieldKind::Rationals => Value::Rat(BigRational::from_integer(n.clone())),
            FieldKind::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Value::Mod(r.to_u64().expect("reduced residue"))
            }
            FieldKind::Simple { base, minpoly, .. } => {
                let mut v = vec![base.zero_v(); minpoly.len() - 1];
                v[0] = base.int_v(n);
                Value::Poly(v)
            }
            FieldKind::RationalFunctions { base, .. } => {
                Value::Frac(upoly::trim(base, vec![base.int_v(n)]), vec![base.one_v()])
            }
        }
    }

    pub fn is_zero_v(&self, a: &Value) -> bool {
        match a {
            Value::Rat(r) => r.is_zero(),
            Value::Mod(m) => *m == 0,
            Value::Poly(c) => {
                let base = self.base().expect("extension value");
                c.iter().all(|x| base.is_zero_v(x))
            }
            Value::Frac(n, _) => n.is_empty(),
        }
    }

    pub fn is_one_v(&self, a: &Value) -> bool {
        *a == self.one_v()
    }

    pub fn add_v(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (_, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (FieldKind::Prime(p), Value::Mod(x), Value::Mod(y)) => Value::Mod((x + y) % p),
            (FieldKind::Simple { base, .. }, Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(x.iter().zip(y).map(|(u, v)| base.add_v(u, v)).collect())
            }
            (FieldKind::RationalFunctions { base, .. }, Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
                let n = upoly::add(
                    base,
                    &upoly::mul(base, n1, d2),
                    &upoly::mul(base, n2, d1),
                );
                normalize_frac(base, n, upoly::mul(base, d1, d2))
            }
            _ => panic!("field mismatch in addition"),
        }
    }

    pub fn neg_v(&self, a: &Value) -> Value {
        match (&self.0.kind, a) {
            (_, Value::Rat(x)) => Value::Rat(-x),
            (FieldKind::Prime(p), Value::Mod(x)) => Value::Mod((p - x) % p),
            (FieldKind::Simple { base, .. }, Value::Poly(x)) => {
                Value::Poly(x.iter().map(|u| base.neg_v(u)).collect())
            }
            (FieldKind::RationalFunctions { base, .. }, Value::Frac(n, d)) => {
                Value::Frac(n.iter().map(|u| base.neg_v(u)).collect(), d.clone())
            }
            _ => panic!("field mismatch in negation"),
        }
    }

    pub fn sub_v(&self, a: &Value, b: &Value) -> Value {
        self.add_v(a, &self.neg_v(b))
    }

    pub fn mul_v(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (_, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (FieldKind::Prime(p), Value::Mod(x), Value::Mod(y)) => {
                Value::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (FieldKind::Simple { base, minpoly, .. }, Value::Poly(x), Value::Poly(y)) => {
                let prod = upoly::mul(base, &upoly::trim(base, x.clone()), &upoly::trim(base, y.clone()));
                let r = upoly::rem(base, &prod, minpoly);
                Value::Poly(pad(base, r, minpoly.len() - 1))
            }
            (FieldKind::RationalFunctions { base, .. }, Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
                normalize_frac(base, upoly::mul(base, n1, n2), upoly::mul(base, d1, d2))
            }
            _ => panic!("field mismatch in multiplication"),
        }
    }

    pub fn inv_v(&self, a: &Value) -> Option<Value> {
        if self.is_zero_v(a) {
            return None;
        }
        Some(match (&self.0.kind, a) {
            (_, Value::Rat(x)) => Value::Rat(x.recip()),
            (FieldKind::Prime(p), Value::Mod(x)) => Value::Mod(pow_mod(*x, p - 2, *p)),
            (FieldKind::Simple { base, minpoly, .. }, Value::Poly(x)) => {
                let (g, s, _) = upoly::xgcd(base, &upoly::trim(base, x.clone()), minpoly);
                debug_assert_eq!(g.len(), 1, "minimal polynomial must be irreducible");
                Value::Poly(pad(base, upoly::rem(base, &s, minpoly), minpoly.len() - 1))
            }
            (FieldKind::RationalFunctions { base, .. }, Value::Frac(n, d)) => {
                normalize_frac(base, d.clone(), n.clone())
            }
            _ => panic!("field mismatch in inversion"),
        })
    }

    pub fn pow_v(&self, a: &Value, mut e: u64) -> Value {
        let mut acc = self.one_v();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_v(&acc, &b);
            }
            b = self.mul_v(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// All elements of a finite field in canonical counting order.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        let vals = self.element_values()?;
        Some(vals.into_iter().map(|v| self.elem(v)).collect())
    }

    fn element_values(&self) -> Option<Vec<Value>> {
        match &self.0.kind {
            FieldKind::Prime(p) => Some((0..*p).map(Value::Mod).collect()),
            FieldKind::Simple { base, minpoly, .. } => {
                let bv = base.element_values()?;
                let d = minpoly.len() - 1;
                let mut out: Vec<Vec<Value>> = vec![vec![]];
                for _ in 0..d {
                    let mut next = Vec::with_capacity(out.len() * bv.len());
                    for hi in &bv {
                        for prefix in &out {
                            let mut v = prefix.clone();
                            v.push(hi.clone());
                            next.push(v);
                        }
                    }
                    out = next;
                }
                Some(out.into_iter().map(Value::Poly).collect())
            }
            _ => None,
        }
    }

    /// A small random element: integers in `[-bound, bound]` for `Q`,
    /// uniform for prime fields, coordinate-wise for extensions.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> FieldElem {
        self.elem(self.random_v(rng, bound))
    }

    fn random_v<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Value {
        match &self.0.kind {
            FieldKind::Rationals => {
                let n = rng.gen_range(-bound..=bound);
                if rng.gen_ratio(1, 5) {
                    let d = rng.gen_range(1..=bound.max(1) + 1);
                    Value::Rat(BigRational::new(n.into(), d.into()))
                } else {
                    Value::Rat(BigRational::from_integer(n.into()))
                }
            }
            FieldKind::Prime(p) => Value::Mod(rng.gen_range(0..*p)),
            FieldKind::Simple { base, minpoly, .. } => {
                Value::Poly((0..minpoly.len() - 1).map(|_| base.random_v(rng, bound)).collect())
            }
            FieldKind::RationalFunctions { base, .. } => {
                let n: Vec<Value> = (0..3).map(|_| base.random_v(rng, bound)).collect();
                let mut d: Vec<Value> = (0..rng.gen_range(0..2)).map(|_| base.random_v(rng, bound)).collect();
                d.push(base.one_v());
                normalize_frac(base, upoly::trim(base, n), d)
            }
        }
    }

    pub fn format_value(&self, v: &Value) -> String {
        match (&self.0.kind, v) {
            (_, Value::Rat(r)) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (_, Value::Mod(m)) => m.to_string(),
            (FieldKind::Simple { base, var, .. }, Value::Poly(c)) => {
                format_upoly(base, &upoly::trim(base, c.clone()), var)
            }
            (FieldKind::RationalFunctions { base, var }, Value::Frac(n, d)) => {
                let ns = format_upoly(base, n, var);
                if d.len() == 1 {
                    ns
                } else {
                    let ds = format_upoly(base, d, var);
                    format!("{}/{}", wrap_composite(&ns), wrap_composite(&ds))
                }
            }
            _ => panic!("field mismatch in formatting"),
        }
    }
}

fn wrap_composite(s: &str) -> String {
    if is_atomic(s) {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// True when the printed scalar can be juxtaposed with `*` without
/// parentheses.
pub(crate) fn is_atomic(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.contains(['+', '-', '/', '*', '^'])
}

fn pad(f: &Field, mut v: Vec<Value>, len: usize) -> Vec<Value> {
    v.resize(len, f.zero_v());
    v
}

fn normalize_frac(base: &Field, n: Vec<Value>, d: Vec<Value>) -> Value {
    let n = upoly::trim(base, n);
    let d = upoly::trim(base, d);
    assert!(!d.is_empty(), "zero denominator");
    if n.is_empty() {
        return Value::Frac(vec![], vec![base.one_v()]);
    }
    let g = upoly::gcd(base, &n, &d);
    let n = upoly::divrem(base, &n, &g).0;
    let d = upoly::divrem(base, &d, &g).0;
    let lc_inv = base.inv_v(d.last().expect("nonzero")).expect("nonzero");
    Value::Frac(upoly::scale(base, &n, &lc_inv), upoly::scale(base, &d, &lc_inv))
}

/// Polynomial in `var` with coefficients in `base`, low degree first.
pub(crate) fn format_upoly(base: &Field, c: &[Value], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, v) in c.iter().enumerate() {
        if base.is_zero_v(v) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(format_term(&base.format_value(v), &mono));
    }
    join_terms(&terms)
}

/// Minimal polynomial display, highest degree first (`b^2+1`).
fn format_poly_desc(base: &Field, c: &[Value], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, v) in c.iter().enumerate().rev() {
        if base.is_zero_v(v) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(format_term(&base.format_value(v), &mono));
    }
    join_terms(&terms)
}

pub(crate) fn format_term(coeff: &str, mono: &str) -> String {
    if mono.is_empty() {
        coeff.to_string()
    } else if coeff == "1" {
        mono.to_string()
    } else if coeff == "-1" {
        format!("-{mono}")
    } else if is_atomic(coeff) {
        format!("{coeff}*{mono}")
    } else {
        format!("({coeff})*{mono}")
    }
}

pub(crate) fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i > 0 && !t.starts_with('-') {
            s.push('+');
        }
        s.push_str(t);
    }
    s
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Element of a [`Field`].
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    value: Value,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_value(&self.value))
    }
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_v(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.field.is_one_v(&self.value)
    }

    pub fn inv(&self) -> Option<FieldElem> {
        self.field.inv_v(&self.value).map(|v| self.field.elem(v))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow_v(&self.value, e))
    }

    pub fn checked_div(&self, other: &FieldElem) -> Option<FieldElem> {
        other.inv().map(|i| self * &i)
    }

    /// The rational value when the field is `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// A `p`-th root in the same field, `None` when the element is not a
    /// `p`-th power. Errors in characteristic zero.
    pub fn pth_root(&self) -> Result<Option<FieldElem>, FieldError> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(FieldError::CharacteristicZero);
        }
        if let Some(q) = self.field.order() {
            // Frobenius is bijective; its inverse is x -> x^(q/p).
            return Ok(Some(self.pow(q / p)));
        }
        match (self.field.kind(), &self.value) {
            (FieldKind::RationalFunctions { base, .. }, Value::Frac(n, d)) => {
                let root = |c: &[Value]| -> Option<Vec<Value>> {
                    let mut out = Vec::new();
                    for (i, v) in c.iter().enumerate() {
                        if base.is_zero_v(v) {
                            continue;
                        }
                        if i as u64 % p != 0 {
                            return None;
                        }
                        let j = i / p as usize;
                        out.resize(j + 1, base.zero_v());
                        // coefficients in F_p are their own p-th roots
                        out[j] = v.clone();
                    }
                    Some(out)
                };
                match (root(n), root(d)) {
                    (Some(rn), Some(rd)) => Ok(Some(
                        self.field.elem(normalize_frac(base, rn, rd)),
                    )),
                    _ => Ok(None),
                }
            }
            _ => Err(FieldError::Unsupported(format!(
                "p-th roots in {}",
                self.field
            ))),
        }
    }
}

/// `Some(r)` with `r^p = e` when `e` is a `p`-th power in its field.
pub fn is_pth_power(e: &FieldElem, p: u64) -> Result<Option<FieldElem>, FieldError> {
    if e.field().characteristic() == 0 {
        return Err(FieldError::CharacteristicZero);
    }
    if e.field().characteristic() != p {
        return Err(FieldError::Unsupported(format!(
            "p = {p} differs from the characteristic {}",
            e.field().characteristic()
        )));
    }
    e.pth_root()
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.field.elem(self.field.$f(&self.value, &rhs.value))
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
    };
}
binop!(Add, add, add_v);
binop!(Sub, sub, sub_v);
binop!(Mul, mul, mul_v);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.field.elem(self.field.neg_v(&self.value))
    }
}
impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f9() -> Field {
        parse_field("F3[b]/(b^2+1)").unwrap()
    }

    #[test]
    fn make_field_examples() {
        let q = parse_field("Q").unwrap();
        assert_eq!(q.characteristic(), 0);
        let f = f9();
        assert_eq!(f.characteristic(), 3);
        assert_eq!(f.order(), Some(9));
        assert!(matches!(
            parse_field("F3[b]/(b^2-1)"),
            Err(FieldError::Reducible(_))
        ));
        assert!(matches!(parse_field("F4"), Ok(_)));
        assert!(matches!(parse_field("F6"), Err(FieldError::NotPrime(6))));
    }

    #[test]
    fn extension_arithmetic() {
        let f = f9();
        let b = f.generator().unwrap();
        assert_eq!(&b * &b, f.from_i64(-1));
        let x = &b + &f.one();
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        assert_eq!(x.to_string(), "1+b");
    }

    #[test]
    fn rational_function_canonical_form() {
        let k = Field::rational_functions(3, "s").unwrap();
        let s = k.generator().unwrap();
        let a = (&s * &s - k.one()).checked_div(&(&s - &k.one())).unwrap();
        assert_eq!(a, &s + &k.one());
        assert_eq!(a.to_string(), "1+s");
        let b = k.one().checked_div(&(&s + &s)).unwrap();
        assert_eq!(b.to_string(), "2/s");
    }

    #[test]
    fn pth_powers() {
        let k = Field::rational_functions(3, "s").unwrap();
        let s = k.generator().unwrap();
        let r = is_pth_power(&s.pow(3), 3).unwrap().unwrap();
        assert_eq!(r.pow(3), s.pow(3));
        assert_eq!(r, s);
        assert!(is_pth_power(&s, 3).unwrap().is_none());
        let f3 = Field::prime(3).unwrap();
        let two = f3.from_i64(2);
        assert_eq!(is_pth_power(&two, 3).unwrap(), Some(two.clone()));
        assert!(matches!(
            is_pth_power(&Field::rationals().one(), 3),
            Err(FieldError::CharacteristicZero)
        ));
        let f = f9();
        let b = f.generator().unwrap();
        let r = is_pth_power(&b, 3).unwrap().unwrap();
        assert_eq!(r.pow(3), b);
    }

    #[test]
    fn finite_field_enumeration() {
        let f = Field::finite(25).unwrap();
        let els = f.elements().unwrap();
        assert_eq!(els.len(), 25);
        let nonzero = els.iter().filter(|e| !e.is_zero()).count();
        assert_eq!(nonzero, 24);
        for e in els.iter().filter(|e| !e.is_zero()) {
            assert!(e.pow(24).is_one());
        }
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in [
            Field::rationals(),
            Field::prime(7).unwrap(),
            f9(),
            parse_field("Q[a]/(a^2-2)").unwrap(),
            parse_field("Q[c]/(c^3-c-1)").unwrap(),
            Field::rational_functions(3, "s").unwrap(),
        ] {
            for _ in 0..40 {
                let (a, b, c) = (f.random(&mut rng, 4), f.random(&mut rng, 4), f.random(&mut rng, 4));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&(&a + &b) - &b, a);
                if !a.is_zero() {
                    assert!((&a * &a.inv().unwrap()).is_one());
                }
            }
        }
    }
}
