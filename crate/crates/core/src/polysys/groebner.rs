//! Buchberger's algorithm on grevlex, used only to decide whether `1` lies
//! in the ideal of a system.

use std::collections::BTreeSet;

use super::poly::{Mono, Poly};
use super::{PolyError, PolySystem};

const DEFAULT_SPAIR_CAP: usize = 20_000;

/// S-pair budget from `GERM_SPAIR_CAP`, falling back to 20000.
pub fn spair_cap() -> usize {
    std::env::var("GERM_SPAIR_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SPAIR_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroebnerOutcome {
    /// `1` is in the ideal: no solution over the algebraic closure. The
    /// trace lists how the unit was derived from the input equations.
    Inconsistent { trace: Vec<String> },
    /// The reduced Gröbner basis does not contain `1`: solvable over the
    /// algebraic closure.
    Consistent { basis: Vec<Poly> },
    /// The S-pair budget ran out first.
    Undecided { pairs: usize },
}

impl GroebnerOutcome {
    pub fn is_inconsistent(&self) -> Option<bool> {
        match self {
            GroebnerOutcome::Inconsistent { .. } => Some(true),
            GroebnerOutcome::Consistent { .. } => Some(false),
            GroebnerOutcome::Undecided { .. } => None,
        }
    }
}

#[derive(Clone)]
enum Origin {
    Input(usize),
    SPair(usize, usize),
}

/// Full reduction of `p` by `basis` (leading coefficients 1).
fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    let field = p.field().clone();
    let mut p = p.clone();
    let mut rest = Poly::zero(&field, p.nvars());
    while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|g| g.leading().is_some_and(|(lm, _)| lm.divides(&m))) {
            Some(g) => {
                let lm = g.leading().expect("nonzero").0;
                p = p.sub(&g.mul_term(&lm.quotient(&m), &c));
            }
            None => {
                let t = Poly::term(&field, m, c);
                rest = rest.add(&t);
                p = p.sub(&t);
            }
        }
    }
    rest
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let one = f.field().one_v();
    let (lf, lg) = (f.leading().expect("nonzero").0, g.leading().expect("nonzero").0);
    let l = lf.lcm(lg);
    f.mul_term(&lf.quotient(&l), &one).sub(&g.mul_term(&lg.quotient(&l), &one))
}

/// Decides `1 ∈ (S)` by Buchberger's algorithm with the coprime-leading-term
/// criterion and the normal selection strategy, within the S-pair budget
/// `cap`.
pub fn groebner_inconsistent(sys: &PolySystem, cap: usize) -> Result<GroebnerOutcome, PolyError> {
    sys.check_coefficients()?;
    let names = sys.unknowns();
    let mut basis: Vec<Poly> = Vec::new();
    let mut origin: Vec<Origin> = Vec::new();
    let found_unit = |basis: &[Poly], origin: &[Origin], k: usize| -> GroebnerOutcome {
        GroebnerOutcome::Inconsistent {
            trace: derivation(basis, origin, k, names, sys),
        }
    };
    for (i, e) in sys.equations().iter().enumerate() {
        let r = reduce(e, &basis);
        if r.is_zero() {
            continue;
        }
        basis.push(r.monic());
        origin.push(Origin::Input(i));
        if r.is_unit() {
            return Ok(found_unit(&basis, &origin, basis.len() - 1));
        }
    }
    // pairs ordered by (degree of lcm, lcm, i, j)
    let mut pairs: BTreeSet<(u32, Mono, usize, usize)> = BTreeSet::new();
    let push_pairs = |pairs: &mut BTreeSet<(u32, Mono, usize, usize)>, basis: &[Poly], k: usize| {
        let lk = basis[k].leading().expect("nonzero").0.clone();
        for (i, g) in basis.iter().enumerate().take(k) {
            let li = g.leading().expect("nonzero").0;
            if li.coprime(&lk) {
                continue;
            }
            let l = li.lcm(&lk);
            pairs.insert((l.degree(), l, i, k));
        }
    };
    for k in 0..basis.len() {
        push_pairs(&mut pairs, &basis, k);
    }
    let mut processed = 0;
    while let Some(pair) = pairs.pop_first() {
        if processed >= cap {
            return Ok(GroebnerOutcome::Undecided { pairs: processed });
        }
        processed += 1;
        let (_, _, i, j) = pair;
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        basis.push(r.monic());
        origin.push(Origin::SPair(i, j));
        let k = basis.len() - 1;
        if r.is_unit() {
            return Ok(found_unit(&basis, &origin, k));
        }
        push_pairs(&mut pairs, &basis, k);
    }
    Ok(GroebnerOutcome::Consistent {
        basis: reduced(basis),
    })
}

/// Minimal, then fully interreduced basis, sorted by leading monomial.
fn reduced(basis: Vec<Poly>) -> Vec<Poly> {
    let mut min: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = g.leading().expect("nonzero").0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let lh = h.leading().expect("nonzero").0;
            j != i && lh.divides(lg) && (lh != lg || j < i)
        });
        if !redundant {
            min.push(g.clone());
        }
    }
    let mut out: Vec<Poly> = (0..min.len())
        .map(|i| {
            let others: Vec<Poly> = min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
            let lead = Poly::term(min[i].field(), min[i].leading().expect("nonzero").0.clone(), min[i].field().one_v());
            lead.add(&reduce(&min[i].sub(&lead), &others))
        })
        .collect();
    out.sort_by(|a, b| a.leading().expect("nonzero").0.cmp(b.leading().expect("nonzero").0));
    out
}

/// The basis elements the unit descends from, inputs first.
fn derivation(basis: &[Poly], origin: &[Origin], k: usize, names: &[String], sys: &PolySystem) -> Vec<String> {
    let mut needed = BTreeSet::new();
    let mut stack = vec![k];
    while let Some(i) = stack.pop() {
        if needed.insert(i) {
            if let Origin::SPair(a, b) = origin[i] {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    needed
        .into_iter()
        .map(|i| {
            let p = basis[i].display(names);
            match origin[i] {
                Origin::Input(e) => format!("g{} = {p}  [input: {}]", i + 1, sys.provenance()[e]),
                Origin::SPair(a, b) => format!("g{} = {p}  [S(g{}, g{}) reduced]", i + 1, a + 1, b + 1),
            }
        })
        .collect()
}
