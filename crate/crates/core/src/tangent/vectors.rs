//! Vector sides of the tangent spaces: the (filtered, logarithmic)
//! derivations and their analogues, as kernels of exact linear conditions on
//! coefficient vectors.

use super::TangentVector;
use crate::exactfield::Value;
use crate::germs::{rename, Group, MapSpace};
use crate::jets::{Filtration, Jet, JetRing, SubspaceBasis};

/// One unknown coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Unit {
    /// `x^α ∂/∂x_i` as `(i, α)`.
    Right(usize, usize),
    /// `y^β ∂/∂y_k`.
    Left(usize, usize),
    /// `x^α y^β t^τ ∂/∂y_k` as `(k, index in the contact ring)`.
    Contact(usize, usize),
    /// `x^α E_kl` as `(k, l, α)`.
    Matrix(usize, usize, usize),
}

/// Collects linear conditions on a list of unknowns.
struct Conditions {
    rows: SubspaceBasis,
}

impl Conditions {
    fn new(ring: &JetRing, nunits: usize) -> Self {
        Conditions {
            rows: SubspaceBasis::zero(ring.field(), nunits),
        }
    }

    /// Adds the conditions "Σ c_u cols_u = 0" coordinatewise.
    fn block(&mut self, cols: &[Vec<Value>]) {
        let f = self.rows.field().clone();
        let Some(len) = cols.first().map(|c| c.len()) else {
            return;
        };
        for w in 0..len {
            if cols.iter().all(|c| f.is_zero_v(&c[w])) {
                continue;
            }
            let row: Vec<Value> = cols.iter().map(|c| c[w].clone()).collect();
            self.rows.insert(row);
        }
    }

    fn solutions(&self) -> Vec<Vec<Value>> {
        self.rows.annihilator()
    }
}

fn monomial_jet(ring: &JetRing, i: usize) -> Jet {
    ring.monomial(ring.shape().monomial(i), &ring.field().one())
}

/// `x^α · ∂h/∂v_i` in `h`'s ring.
fn unit_derive(i: usize, alpha: usize, h: &Jet) -> Jet {
    &monomial_jet(h.ring(), alpha) * &h.derivative(i)
}

/// Right units of `ring` (free coordinates). At positive level, terms
/// without main variables are excluded.
fn right_units(ring: &JetRing, level: u32) -> Vec<Unit> {
    let shape = ring.shape();
    let n = ring.main_vars().len();
    (0..n)
        .flat_map(|i| (0..ring.dim()).map(move |a| (i, a)))
        .filter(|&(_, a)| level == 0 || shape.main_degree(a) > 0)
        .map(|(i, a)| Unit::Right(i, a))
        .collect()
}

/// `ξ(g) ∈ span(J)` for every ideal generator `g`, for right units.
fn log_conditions(ring: &JetRing, units: &[Unit], cond: &mut Conditions) {
    let free = ring.free();
    for g in ring.ideal_gens() {
        let cols: Vec<Vec<Value>> = units
            .iter()
            .map(|u| match *u {
                Unit::Right(i, a) | Unit::Left(i, a) => {
                    ring.ideal_span().reduce(unit_derive(i, a, &g).coeffs())
                }
                _ => vec![free.field().zero_v(); free.dim()],
            })
            .collect();
        cond.block(&cols);
    }
}

/// The image of a unit on the module basis element `e_l · x^β`, as
/// `(component, free coefficient vector)` pairs.
fn unit_on_basis(ring: &JetRing, u: Unit, l: usize, beta: usize) -> Vec<(usize, Vec<Value>)> {
    let f = ring.field();
    let shape = ring.shape();
    let mut out = vec![f.zero_v(); ring.dim()];
    let e = shape.monomial(beta);
    match u {
        Unit::Right(i, a) => {
            if e[i] == 0 {
                return vec![];
            }
            let mut w = e.to_vec();
            w[i] -= 1;
            for (x, y) in w.iter_mut().zip(shape.monomial(a)) {
                *x += y;
            }
            let Some(idx) = shape.index_of(&w) else {
                return vec![];
            };
            // right vectors act with a minus sign
            out[idx] = f.neg_v(&f.int_v(&e[i].into()));
            vec![(l, out)]
        }
        Unit::Matrix(k, l2, a) => {
            if l2 != l {
                return vec![];
            }
            let Some(idx) = shape.product(a, beta) else {
                return vec![];
            };
            out[idx] = f.one_v();
            vec![(k, out)]
        }
        _ => unreachable!("level conditions only for source units"),
    }
}

/// `g(M^d) ⊆ M^{d+j}` for the module `R^{⊕ncomp}`, on every basis element.
fn level_conditions(filt: &Filtration, j: u32, units: &[Unit], ncomp: usize, cond: &mut Conditions) {
    let ring = filt.ring();
    let f = ring.field();
    let dim = ring.dim();
    // right-only units act diagonally, one component suffices
    let comps = if units.iter().any(|u| matches!(u, Unit::Matrix(..))) {
        ncomp
    } else {
        1
    };
    for l in 0..comps {
        for beta in 0..dim {
            let d = filt.monomial_order(beta) + j;
            let mut any = false;
            let cols: Vec<Vec<Value>> = units
                .iter()
                .map(|&u| {
                    let mut col = vec![f.zero_v(); comps * dim];
                    for (k, v) in unit_on_basis(ring, u, l, beta) {
                        let r = filt.reduce_mod_level(&v, d);
                        for (slot, x) in col[k * dim..(k + 1) * dim].iter_mut().zip(r) {
                            if !f.is_zero_v(&x) {
                                any = true;
                                *slot = x;
                            }
                        }
                    }
                    col
                })
                .collect();
            if any {
                cond.block(&cols);
            }
        }
    }
}

fn right_kernel(filt: &Filtration, j: u32) -> (Vec<Unit>, Vec<Vec<Value>>) {
    let ring = filt.ring();
    let units = right_units(ring, j);
    let mut cond = Conditions::new(ring, units.len());
    log_conditions(ring, &units, &mut cond);
    if j > 0 {
        level_conditions(filt, j, &units, 1, &mut cond);
    }
    let sols = cond.solutions();
    (units, sols)
}

fn left_kernel(target: &JetRing, j: u32) -> (Vec<Unit>, Vec<Vec<Value>>) {
    let shape = target.shape();
    let m = target.n_vars();
    let units: Vec<Unit> = (0..m)
        .flat_map(|k| (0..target.dim()).map(move |b| (k, b)))
        .filter(|&(_, b)| j == 0 || shape.degree(b) > j)
        .map(|(k, b)| Unit::Left(k, b))
        .collect();
    let mut cond = Conditions::new(target, units.len());
    log_conditions(target, &units, &mut cond);
    let sols = cond.solutions();
    (units, sols)
}

fn contact_kernel(space: &MapSpace, j: u32) -> (Vec<Unit>, Vec<Vec<Value>>) {
    let xy = space.contact_ring();
    let free = xy.free();
    let shape = xy.shape();
    let (n, m) = (space.n(), space.m());
    let units: Vec<Unit> = (0..m)
        .flat_map(|k| (0..xy.dim()).map(move |a| (k, a)))
        .filter(|&(_, a)| {
            let e = shape.monomial(a);
            e[n..n + m].iter().any(|&x| x > 0) && (j == 0 || shape.main_degree(a) > j)
        })
        .map(|(k, a)| Unit::Contact(k, a))
        .collect();
    let mut cond = Conditions::new(xy, units.len());
    let pos: Vec<usize> = (0..m).map(|k| n + k).collect();
    for q in space.target().ideal_gens() {
        let q = rename(&q, &free, &pos);
        let cols: Vec<Vec<Value>> = units
            .iter()
            .map(|u| match *u {
                Unit::Contact(k, a) => xy.ideal_span().reduce(unit_derive(n + k, a, &q).coeffs()),
                _ => unreachable!(),
            })
            .collect();
        cond.block(&cols);
    }
    (units, cond.solutions())
}

fn klin_kernel(space: &MapSpace, filt: &Filtration, j: u32) -> (Vec<Unit>, Vec<Vec<Value>>) {
    let ring = space.source();
    let m = space.m();
    let mut units: Vec<Unit> = (0..m)
        .flat_map(|k| (0..m).flat_map(move |l| (0..ring.dim()).map(move |a| Unit::Matrix(k, l, a))))
        .collect();
    units.extend(right_units(ring, j));
    let mut cond = Conditions::new(ring, units.len());
    log_conditions(ring, &units, &mut cond);
    if j > 0 {
        level_conditions(filt, j, &units, m, &mut cond);
    }
    let sols = cond.solutions();
    (units, sols)
}

/// Concatenates two kernels into a kernel of the direct sum.
fn direct_sum(
    (u1, s1): (Vec<Unit>, Vec<Vec<Value>>),
    (u2, s2): (Vec<Unit>, Vec<Vec<Value>>),
    zero: &Value,
) -> (Vec<Unit>, Vec<Vec<Value>>) {
    let (a, b) = (u1.len(), u2.len());
    let mut sols: Vec<Vec<Value>> = s1
        .into_iter()
        .map(|mut v| {
            v.extend(std::iter::repeat(zero.clone()).take(b));
            v
        })
        .collect();
    sols.extend(s2.into_iter().map(|v| {
        let mut w = vec![zero.clone(); a];
        w.extend(v);
        w
    }));
    let mut units = u1;
    units.extend(u2);
    (units, sols)
}

/// Basis of the vector side of `T_{G^(j)}` (`j = 0`: the whole `T_G`), as
/// coefficient vectors over a list of units.
pub(crate) fn vector_side(group: Group, space: &MapSpace, filt: &Filtration, j: u32) -> (Vec<Unit>, Vec<Vec<Value>>) {
    let zero = space.field().zero_v();
    match group {
        Group::R => right_kernel(filt, j),
        Group::L => left_kernel(space.target(), j),
        Group::LR => direct_sum(left_kernel(space.target(), j), right_kernel(filt, j), &zero),
        Group::C => contact_kernel(space, j),
        Group::K => direct_sum(contact_kernel(space, j), right_kernel(filt, j), &zero),
        Group::KLin => klin_kernel(space, filt, j),
    }
}

/// The tangent vector with the given coefficients on `units`.
pub(crate) fn assemble(group: Group, space: &MapSpace, units: &[Unit], coeffs: &[Value]) -> TangentVector {
    let f = space.field();
    let (src, tgt, xy) = (space.source(), space.target(), space.contact_ring());
    let (n, m) = (space.n(), space.m());
    let zeros = |count: usize, ring: &JetRing| vec![vec![f.zero_v(); ring.dim()]; count];
    let mut right = zeros(n, src);
    let mut left = zeros(m, tgt);
    let mut contact = zeros(m, xy);
    let mut matrix = vec![zeros(m, src); m];
    for (u, c) in units.iter().zip(coeffs) {
        if f.is_zero_v(c) {
            continue;
        }
        let slot = match *u {
            Unit::Right(i, a) => &mut right[i][a],
            Unit::Left(k, b) => &mut left[k][b],
            Unit::Contact(k, a) => &mut contact[k][a],
            Unit::Matrix(k, l, a) => &mut matrix[k][l][a],
        };
        *slot = f.add_v(slot, c);
    }
    let jets = |v: Vec<Vec<Value>>, ring: &JetRing| -> Vec<Jet> {
        v.into_iter().map(|c| Jet::from_coeffs(ring, c)).collect()
    };
    match group {
        Group::R => TangentVector::Right(jets(right, src)),
        Group::L => TangentVector::Left(jets(left, tgt)),
        Group::LR => TangentVector::LeftRight {
            left: jets(left, tgt),
            right: jets(right, src),
        },
        Group::C | Group::K => TangentVector::Contact {
            contact: jets(contact, xy),
            right: jets(right, src),
        },
        Group::KLin => TangentVector::ContactLin {
            matrix: matrix.into_iter().map(|r| jets(r, src)).collect(),
            right: jets(right, src),
        },
    }
}

/// Logarithmic derivations `{Σ a_i ∂_i : ξ(J) ⊆ J}` of the ambient smooth
/// germ, as a basis over the field at jet level (free-ring coefficients).
pub fn der_log(ring: &JetRing) -> Vec<TangentVector> {
    let (units, sols) = right_kernel(&Filtration::madic(ring), 0);
    let free = ring.free();
    let n = ring.main_vars().len();
    let f = ring.field();
    sols.into_iter()
        .map(|s| {
            let mut a = vec![vec![f.zero_v(); free.dim()]; n];
            for (u, c) in units.iter().zip(s) {
                if let Unit::Right(i, k) = *u {
                    a[i][k] = c;
                }
            }
            TangentVector::Right(a.into_iter().map(|c| Jet::from_coeffs(&free, c)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::germs::germ_space;
    use crate::tangent::derive;

    #[test]
    fn der_log_examples() {
        let q = Field::rationals();
        let r = germ_space(&q, &["x", "y"], 2, &["x*y"]).unwrap();
        let vs = der_log(&r);
        let free = r.free();
        let span = SubspaceBasis::from_vectors(
            &q,
            2 * free.dim(),
            vs.iter().map(|v| match v {
                TangentVector::Right(a) => a.iter().flat_map(|j| j.coeffs().to_vec()).collect(),
                _ => unreachable!(),
            }),
        );
        let vec_of = |a: &str, b: &str| -> Vec<Value> {
            let mut v = free.parse(a).unwrap().coeffs().to_vec();
            v.extend(free.parse(b).unwrap().coeffs().to_vec());
            v
        };
        assert!(span.contains(&vec_of("x", "0")));
        assert!(span.contains(&vec_of("0", "y")));
        assert!(!span.contains(&vec_of("1", "0")));
        assert!(!span.contains(&vec_of("0", "x")));
        // every output satisfies the logarithmic condition
        let g = free.parse("x*y").unwrap();
        for v in &vs {
            if let TangentVector::Right(a) = v {
                assert!(r.ideal_span().contains(derive(a, &g).coeffs()));
            }
        }

        let r1 = germ_space(&q, &["x"], 3, &["x^2"]).unwrap();
        let got: Vec<String> = der_log(&r1).iter().map(|v| v.to_string()).collect();
        assert_eq!(got.len(), 3);
        let free0 = germ_space(&q, &["x", "y"], 2, &[]).unwrap();
        assert_eq!(der_log(&free0).len(), 2 * free0.dim());
    }
}
