use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::linalg::SubspaceBasis;
use super::monomial::Shape;
use super::{Jet, JetError};
use crate::exactfield::{Extension, Field, FieldElem, Value};
use crate::expr::{Evaluator, Expr, Parser, Span};

/// `k[[x]]/(J + m^{N+1})`, optionally with parameters `t` truncated at
/// `t^{s+1}`. Cheap to clone.
#[derive(Clone)]
pub struct JetRing(Arc<Inner>);

struct Inner {
    field: Field,
    shape: Arc<Shape>,
    /// Generators of `J` as coefficient vectors in the free ring.
    gens: Vec<Vec<Value>>,
    span: SubspaceBasis,
}

impl PartialEq for JetRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && (Arc::ptr_eq(&self.0.shape, &other.0.shape) || self.0.shape == other.0.shape)
                && self.0.span == other.0.span)
    }
}
impl Eq for JetRing {}

impl fmt::Debug for JetRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "JetRing({} over {}, N={}, ideal rank {})",
            self.vars().join(","),
            self.field(),
            self.order(),
            self.0.span.rank()
        )
    }
}

impl JetRing {
    pub fn new(field: &Field, vars: &[&str], order: u32) -> JetRing {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        JetRing::with_params(field, &vars, &[], order, 0)
    }

    pub fn with_params(
        field: &Field,
        vars: &[String],
        params: &[String],
        order: u32,
        param_order: u32,
    ) -> JetRing {
        let shape = Arc::new(Shape::new(vars, params, order, param_order));
        let dim = shape.dim();
        JetRing(Arc::new(Inner {
            field: field.clone(),
            shape,
            gens: Vec::new(),
            span: SubspaceBasis::zero(field, dim),
        }))
    }

    /// The quotient by the ideal generated by `gens` (jets of this ring or of
    /// its free companion).
    pub fn with_ideal(&self, gens: &[Jet]) -> Result<JetRing, JetError> {
        let free = self.free();
        let mut all = self.0.gens.clone();
        for g in gens {
            if g.ring().0.shape != free.0.shape || g.ring().field() != self.field() {
                return Err(JetError::RingMismatch);
            }
            all.push(g.coeffs().to_vec());
        }
        let span = span_of_generators(&free, &all);
        Ok(JetRing(Arc::new(Inner {
            field: self.0.field.clone(),
            shape: self.0.shape.clone(),
            gens: all,
            span,
        })))
    }

    /// Same variables and truncation, no ideal.
    pub fn free(&self) -> JetRing {
        if self.0.gens.is_empty() {
            return self.clone();
        }
        JetRing(Arc::new(Inner {
            field: self.0.field.clone(),
            shape: self.0.shape.clone(),
            gens: Vec::new(),
            span: SubspaceBasis::zero(&self.0.field, self.dim()),
        }))
    }

    /// Same shape and ideal over the extension field.
    pub fn base_change(&self, ext: &Extension) -> JetRing {
        let top = ext.top();
        let gens: Vec<Vec<Value>> = self
            .0
            .gens
            .iter()
            .map(|g| embed_vec(ext, &self.0.field, g))
            .collect();
        let free = JetRing(Arc::new(Inner {
            field: top.clone(),
            shape: self.0.shape.clone(),
            gens: Vec::new(),
            span: SubspaceBasis::zero(top, self.dim()),
        }));
        if gens.is_empty() {
            return free;
        }
        let span = span_of_generators(&free, &gens);
        JetRing(Arc::new(Inner {
            field: top.clone(),
            shape: self.0.shape.clone(),
            gens,
            span,
        }))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    pub fn vars(&self) -> &[String] {
        self.0.shape.vars()
    }

    /// Main (non-parameter) variables.
    pub fn main_vars(&self) -> &[String] {
        &self.0.shape.vars()[..self.0.shape.n_main()]
    }

    pub fn param_vars(&self) -> &[String] {
        &self.0.shape.vars()[self.0.shape.n_main()..]
    }

    pub fn n_vars(&self) -> usize {
        self.0.shape.n_vars()
    }

    pub fn order(&self) -> u32 {
        self.0.shape.order()
    }

    pub fn param_order(&self) -> u32 {
        self.0.shape.param_order()
    }

    pub fn dim(&self) -> usize {
        self.0.shape.dim()
    }

    pub fn has_ideal(&self) -> bool {
        !self.0.gens.is_empty()
    }

    /// Generators of the ideal, as jets of the free companion ring.
    pub fn ideal_gens(&self) -> Vec<Jet> {
        let free = self.free();
        self.0
            .gens
            .iter()
            .map(|g| Jet::from_raw(&free, g.clone()))
            .collect()
    }

    /// Span of `J · monomials` in the coefficient space.
    pub fn ideal_span(&self) -> &SubspaceBasis {
        &self.0.span
    }

    pub(crate) fn reduce_vec(&self, v: Vec<Value>) -> Vec<Value> {
        if self.0.span.is_zero() {
            v
        } else {
            self.0.span.reduce(&v)
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars().iter().position(|v| v == name)
    }

    pub fn zero(&self) -> Jet {
        Jet::from_raw(self, vec![self.0.field.zero_v(); self.dim()])
    }

    pub fn one(&self) -> Jet {
        self.constant(&self.0.field.one())
    }

    pub fn constant(&self, c: &FieldElem) -> Jet {
        let mut v = vec![self.0.field.zero_v(); self.dim()];
        v[0] = c.value().clone();
        Jet::from_coeffs(self, v)
    }

    /// The `i`-th variable.
    pub fn var(&self, i: usize) -> Jet {
        let mut e = vec![0; self.n_vars()];
        e[i] = 1;
        self.monomial(&e, &self.0.field.one())
    }

    pub fn monomial(&self, e: &[u32], c: &FieldElem) -> Jet {
        let mut v = vec![self.0.field.zero_v(); self.dim()];
        if let Some(i) = self.0.shape.index_of(e) {
            v[i] = c.value().clone();
        }
        Jet::from_coeffs(self, v)
    }

    /// The basis monomial with index `i` (unreduced by the ideal).
    pub fn basis_vector(&self, i: usize) -> Vec<Value> {
        let mut v = vec![self.0.field.zero_v(); self.dim()];
        v[i] = self.0.field.one_v();
        v
    }

    pub fn parse(&self, src: &str) -> Result<Jet, JetError> {
        self.parse_at(src, Span { line: 1, col: 1 })
    }

    pub fn parse_at(&self, src: &str, origin: Span) -> Result<Jet, JetError> {
        let mut p = Parser::new(src, origin)?;
        let e = p.expr()?;
        p.finish()?;
        self.eval(&e)
    }

    pub fn eval(&self, e: &Expr) -> Result<Jet, JetError> {
        Ok(e.eval(&JetEval { ring: self })?)
    }
}

fn embed_vec(ext: &Extension, base: &Field, v: &[Value]) -> Vec<Value> {
    v.iter()
        .map(|x| ext.embed(&base.elem(x.clone())).into_value())
        .collect()
}

fn span_of_generators(free: &JetRing, gens: &[Vec<Value>]) -> SubspaceBasis {
    let dim = free.dim();
    let shape = free.shape();
    let f = free.field();
    let mut span = SubspaceBasis::zero(f, dim);
    for g in gens {
        for m in 0..dim {
            let mut v = vec![f.zero_v(); dim];
            let mut any = false;
            for (i, c) in g.iter().enumerate() {
                if f.is_zero_v(c) {
                    continue;
                }
                if let Some(k) = shape.product(i, m) {
                    v[k] = f.add_v(&v[k], c);
                    any = true;
                }
            }
            if any {
                span.insert(v);
            }
        }
    }
    span
}

/// Row-reduced basis of `span{g · x^e}` over all generators and monomials.
pub fn ideal_span(ring: &JetRing, gens: &[Jet]) -> SubspaceBasis {
    let vecs: Vec<Vec<Value>> = gens.iter().map(|g| g.coeffs().to_vec()).collect();
    span_of_generators(&ring.free(), &vecs)
}

struct JetEval<'a> {
    ring: &'a JetRing,
}

impl Evaluator for JetEval<'_> {
    type Value = Jet;

    fn int(&self, n: &BigInt) -> Jet {
        self.ring.constant(&self.ring.field().from_bigint(n))
    }

    fn var(&self, name: &str) -> Option<Jet> {
        if let Some(i) = self.ring.var_index(name) {
            return Some(self.ring.var(i));
        }
        self.ring
            .field()
            .lookup_generator(name)
            .map(|g| self.ring.constant(&g))
    }

    fn add(&self, a: Jet, b: Jet) -> Jet {
        &a + &b
    }

    fn sub(&self, a: Jet, b: Jet) -> Jet {
        &a - &b
    }

    fn mul(&self, a: Jet, b: Jet) -> Jet {
        &a * &b
    }

    fn neg(&self, a: Jet) -> Jet {
        -&a
    }

    fn div(&self, a: Jet, b: Jet) -> Result<Jet, String> {
        let inv = b.inv().map_err(|_| "division by a non-unit".to_string())?;
        Ok(&a * &inv)
    }

    fn pow(&self, a: Jet, e: u32) -> Jet {
        a.pow(e)
    }
}
