//! Truncated power series whose coefficients are polynomials in the
//! unknowns of a system.

use super::poly::Poly;
use crate::exactfield::{Field, Value};
use crate::jets::{Jet, JetRing};

#[derive(Clone, Debug)]
pub(crate) struct PolyJet {
    ring: JetRing,
    coeffs: Vec<Poly>,
}

impl PolyJet {
    pub fn zero(ring: &JetRing, nvars: usize) -> PolyJet {
        PolyJet {
            ring: ring.clone(),
            coeffs: vec![Poly::zero(ring.field(), nvars); ring.dim()],
        }
    }

    pub fn from_jet(j: &Jet, nvars: usize) -> PolyJet {
        let f = j.ring().field();
        PolyJet {
            ring: j.ring().clone(),
            coeffs: j.coeffs().iter().map(|c| Poly::constant(f, nvars, c.clone())).collect(),
        }
    }

    pub fn ring(&self) -> &JetRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn set(&mut self, i: usize, p: Poly) {
        self.coeffs[i] = p;
    }

    fn nvars(&self) -> usize {
        self.coeffs.first().map_or(0, |p| p.nvars())
    }

    pub fn add(&self, other: &PolyJet) -> PolyJet {
        PolyJet {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyJet) -> PolyJet {
        PolyJet {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn mul(&self, other: &PolyJet) -> PolyJet {
        let shape = self.ring.shape();
        let mut out = PolyJet::zero(&self.ring, self.nvars());
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                if let Some(k) = shape.product(i, j) {
                    out.coeffs[k] = out.coeffs[k].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// `h(args)` for a known jet `h`; `args` live in one ring and there is
    /// one per variable of `h`'s ring.
    pub fn compose_known(h: &Jet, args: &[PolyJet]) -> PolyJet {
        let ring = args[0].ring();
        let nvars = args[0].nvars();
        let field = ring.field();
        let shape = h.ring().shape();
        let mut powers: Vec<Vec<PolyJet>> = args
            .iter()
            .map(|a| vec![PolyJet::from_jet(&ring.one(), nvars), a.clone()])
            .collect();
        let mut out = PolyJet::zero(ring, nvars);
        for i in h.support() {
            let e = shape.monomial(i);
            let mut t = PolyJet::from_jet(&ring.constant(&field.elem(h.coeffs()[i].clone())), nvars);
            for (v, &k) in e.iter().enumerate() {
                while powers[v].len() <= k as usize {
                    let next = powers[v].last().expect("nonempty").mul(&args[v]);
                    powers[v].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[v][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// `self(args)` for known jets `args` in a common ring.
    pub fn compose_with(&self, args: &[Jet]) -> PolyJet {
        let ring = args[0].ring();
        let nvars = self.nvars();
        let shape = self.ring.shape();
        let mut out = PolyJet::zero(ring, nvars);
        for (i, p) in self.coeffs.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            let e = shape.monomial(i);
            let img = e
                .iter()
                .zip(args)
                .fold(ring.one(), |acc, (&k, a)| if k == 0 { acc } else { &acc * &a.pow(k) });
            for j in img.support() {
                out.coeffs[j] = out.coeffs[j].add(&p.scale(&img.coeffs()[j]));
            }
        }
        out
    }

    /// Coefficient polynomials after the linear map `reduce` on coefficient
    /// vectors (e.g. reduction modulo an ideal).
    pub fn map_linear(&self, reduce: impl Fn(Vec<Value>) -> Vec<Value>) -> PolyJet {
        let field: &Field = self.ring.field();
        let dim = self.ring.dim();
        let mut out = PolyJet::zero(&self.ring, self.nvars());
        for (i, p) in self.coeffs.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            let mut e = vec![field.zero_v(); dim];
            e[i] = field.one_v();
            let r = reduce(e);
            for (j, c) in r.iter().enumerate().filter(|(_, c)| !field.is_zero_v(c)) {
                out.coeffs[j] = out.coeffs[j].add(&p.scale(c));
            }
        }
        out
    }
}
