use std::sync::{Arc, OnceLock};

use thiserror::Error;

use super::linalg::SubspaceBasis;
use super::{Jet, JetRing, Order};
use crate::exactfield::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationSpec {
    /// Powers of the maximal ideal (all variables, parameters included).
    MAdic,
    /// Powers of the ideal of the parameters.
    TAdic,
    /// Explicit levels `Λ^1 ⊇ Λ^2 ⊇ …`, each a list of monomial generators
    /// (exponent vectors).
    Chain(Vec<Vec<Vec<u32>>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("filtration is not multiplicative: product of levels {a} and {b} escapes level a+b")]
    NotMultiplicative { a: usize, b: usize },
    #[error("filtration is not descending at level {0}")]
    NotDescending(usize),
    #[error("first level is not contained in the maximal ideal")]
    NotLocal,
    #[error("(t)-adic filtration needs parameter variables")]
    NoParameters,
    #[error("monomial generator has {got} exponents, ring has {expected} variables")]
    BadMonomial { expected: usize, got: usize },
}

/// A descending multiplicative chain of monomial ideals of a jet ring,
/// extended past the explicit levels by `Λ^d = Σ_{a+b=d} Λ^a Λ^b`.
/// Maps with `m` components are filtered componentwise.
#[derive(Clone)]
pub struct Filtration(Arc<Inner>);

struct Inner {
    ring: JetRing,
    spec: FiltrationSpec,
    explicit: usize,
    /// `levels[d-1][i]`: monomial `i` lies in `Λ^d`; ends at the first empty level.
    levels: Vec<Vec<bool>>,
    /// Largest `d` with the monomial in `Λ^d`.
    mono_order: Vec<u32>,
    /// `span(Λ^d) + J` for rings with an ideal, index `d-1`.
    with_ideal: OnceLock<Vec<SubspaceBasis>>,
}

impl std::fmt::Debug for Filtration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Filtration({:?}, {} levels)", self.0.spec, self.0.levels.len())
    }
}

/// Filtrations built from the same spec on the same ring coincide.
impl PartialEq for Filtration {
    fn eq(&self, other: &Filtration) -> bool {
        self.0.ring == other.0.ring && self.0.spec == other.0.spec
    }
}

impl Eq for Filtration {}

impl Filtration {
    pub fn new(ring: &JetRing, spec: FiltrationSpec) -> Result<Filtration, FiltrationError> {
        let shape = ring.shape();
        let dim = shape.dim();
        let nv = shape.n_vars();
        let explicit: Vec<Vec<bool>> = match &spec {
            FiltrationSpec::MAdic => vec![(0..dim).map(|i| i != 0).collect()],
            FiltrationSpec::TAdic => {
                if ring.param_vars().is_empty() {
                    return Err(FiltrationError::NoParameters);
                }
                vec![(0..dim).map(|i| shape.param_degree(i) > 0).collect()]
            }
            FiltrationSpec::Chain(levels) => {
                let mut out = Vec::new();
                for gens in levels {
                    let mut mask = vec![false; dim];
                    for g in gens {
                        if g.len() != nv {
                            return Err(FiltrationError::BadMonomial {
                                expected: nv,
                                got: g.len(),
                            });
                        }
                        for (i, m) in shape.monomials().iter().enumerate() {
                            if m.iter().zip(g).all(|(a, b)| a >= b) {
                                mask[i] = true;
                            }
                        }
                    }
                    out.push(mask);
                }
                out
            }
        };
        if explicit.first().is_some_and(|l1| l1[0]) {
            return Err(FiltrationError::NotLocal);
        }
        for d in 1..explicit.len() {
            if explicit[d].iter().zip(&explicit[d - 1]).any(|(&a, &b)| a && !b) {
                return Err(FiltrationError::NotDescending(d + 1));
            }
        }
        for a in 1..=explicit.len() {
            for b in a..=explicit.len() - a {
                let prod = product(ring, &explicit[a - 1], &explicit[b - 1]);
                let target = &explicit[a + b - 1];
                if prod.iter().zip(target).any(|(&p, &t)| p && !t) {
                    return Err(FiltrationError::NotMultiplicative { a, b });
                }
            }
        }
        let n_explicit = explicit.len();
        let mut levels = explicit;
        while levels.last().is_some_and(|l| l.iter().any(|&x| x)) {
            let d = levels.len() + 1;
            let mut mask = vec![false; dim];
            for a in 1..=d / 2 {
                let p = product(ring, &levels[a - 1], &levels[d - a - 1]);
                for (m, x) in mask.iter_mut().zip(p) {
                    *m |= x;
                }
            }
            levels.push(mask);
        }
        while levels.last().is_some_and(|l| !l.iter().any(|&x| x)) {
            levels.pop();
        }
        let mono_order = (0..dim)
            .map(|i| levels.iter().take_while(|l| l[i]).count() as u32)
            .collect();
        Ok(Filtration(Arc::new(Inner {
            ring: ring.clone(),
            spec,
            explicit: n_explicit,
            levels,
            mono_order,
            with_ideal: OnceLock::new(),
        })))
    }

    pub fn madic(ring: &JetRing) -> Filtration {
        Filtration::new(ring, FiltrationSpec::MAdic).expect("m-adic filtration is valid")
    }

    pub fn ring(&self) -> &JetRing {
        &self.0.ring
    }

    pub fn spec(&self) -> &FiltrationSpec {
        &self.0.spec
    }

    /// The same chain on another ring with the same variables (used after
    /// base change).
    pub fn on_ring(&self, ring: &JetRing) -> Filtration {
        Filtration::new(ring, self.0.spec.clone()).expect("validated chain")
    }

    pub fn explicit_levels(&self) -> usize {
        self.0.explicit
    }

    /// Largest `d` with `Λ^d ≠ 0` in the truncated ring.
    pub fn max_order(&self) -> u32 {
        self.0.levels.len() as u32
    }

    /// Membership mask of `Λ^d`; `Λ^0` is the whole ring.
    pub fn level_mask(&self, d: u32) -> Vec<bool> {
        let dim = self.0.ring.dim();
        if d == 0 {
            return vec![true; dim];
        }
        match self.0.levels.get(d as usize - 1) {
            Some(l) => l.clone(),
            None => vec![false; dim],
        }
    }

    /// Monomial indices of `Λ^d`.
    pub fn level_monomials(&self, d: u32) -> Vec<usize> {
        self.level_mask(d)
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn monomial_order(&self, i: usize) -> u32 {
        self.0.mono_order[i]
    }

    fn ideal_levels(&self) -> &[SubspaceBasis] {
        self.0.with_ideal.get_or_init(|| {
            let ring = &self.0.ring;
            (1..=self.max_order())
                .map(|d| {
                    let mut b = ring.ideal_span().clone();
                    for i in self.level_monomials(d) {
                        b.insert(ring.basis_vector(i));
                    }
                    b
                })
                .collect()
        })
    }

    /// Order of a coefficient vector of this ring.
    pub fn order_of_vec(&self, v: &[Value]) -> Order {
        let ring = &self.0.ring;
        let f = ring.field();
        if ring.has_ideal() {
            if ring.ideal_span().contains(v) {
                return Order::Infinite;
            }
            let levels = self.ideal_levels();
            let d = levels.iter().take_while(|b| b.contains(v)).count();
            return Order::Finite(d as u32);
        }
        v.iter()
            .enumerate()
            .filter(|(_, x)| !f.is_zero_v(x))
            .map(|(i, _)| self.0.mono_order[i])
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    pub fn order_of_jet(&self, j: &Jet) -> Order {
        self.order_of_vec(j.coeffs())
    }

    /// Order of a tuple: the minimum over components.
    pub fn order_of(&self, v: &[Jet]) -> Order {
        v.iter()
            .map(|j| self.order_of_jet(j))
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// Canonical remainder of `v` modulo `Λ^d + J`; linear in `v`.
    pub fn reduce_mod_level(&self, v: &[Value], d: u32) -> Vec<Value> {
        let ring = &self.0.ring;
        let f = ring.field();
        if d == 0 {
            return vec![f.zero_v(); v.len()];
        }
        if ring.has_ideal() {
            return match self.ideal_levels().get(d as usize - 1) {
                Some(b) => b.reduce(v),
                None => ring.ideal_span().reduce(v),
            };
        }
        let mask = self.level_mask(d);
        v.iter()
            .zip(mask)
            .map(|(x, inside)| if inside { f.zero_v() } else { x.clone() })
            .collect()
    }

    /// Whether `v ∈ Λ^d (+ J)`.
    pub fn contains_vec(&self, v: &[Value], d: u32) -> bool {
        match self.order_of_vec(v) {
            Order::Infinite => true,
            Order::Finite(o) => o >= d,
        }
    }
}

fn product(ring: &JetRing, a: &[bool], b: &[bool]) -> Vec<bool> {
    let shape = ring.shape();
    let mut out = vec![false; a.len()];
    let ib: Vec<usize> = (0..b.len()).filter(|&j| b[j]).collect();
    for i in (0..a.len()).filter(|&i| a[i]) {
        for &j in &ib {
            if let Some(k) = shape.product(i, j) {
                out[k] = true;
            }
        }
    }
    out
}
