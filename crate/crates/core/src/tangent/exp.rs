use super::{derive, TangentError, TangentVector};
use crate::germs::{Aut, ContactMap, GermError, GroupElement, JetMatrix, MapSpace};
use crate::jets::{Jet, JetRing};

fn char_zero(ring: &JetRing) -> Result<(), TangentError> {
    if ring.field().characteristic() == 0 {
        Ok(())
    } else {
        Err(TangentError::PositiveCharacteristic)
    }
}

/// Steps after which an order-raising series has vanished.
fn bound(ring: &JetRing) -> u32 {
    ring.order() + ring.param_order() + 2
}

/// `Σ_k ξ^k(h)/k!` for the vector field with coefficients `a` on the first
/// variables of `h`'s ring.
fn exp_series(a: &[Jet], h: &Jet) -> Result<Jet, TangentError> {
    let ring = h.ring();
    let f = ring.field();
    let mut acc = h.clone();
    let mut term = h.clone();
    for k in 1..=bound(ring) as u64 {
        let inv = f.from_u64(k).inv().expect("characteristic zero");
        term = derive(a, &term).scale(&inv);
        if term.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &term;
    }
    Err(TangentError::NotOrderRaising)
}

/// The images of `ring.var(i)` for `i` in `moved` under `exp(ξ)`.
fn exp_moving(ring: &JetRing, a: &[Jet], moved: &[usize]) -> Result<Vec<Jet>, TangentError> {
    moved.iter().map(|&i| exp_series(a, &ring.var(i))).collect()
}

/// Coefficient list over the first variables with `vals` placed at `moved`.
fn spread(ring: &JetRing, moved: &[usize], vals: &[Jet]) -> Vec<Jet> {
    let top = moved.iter().max().map_or(0, |&i| i + 1);
    let mut a = vec![ring.zero(); top];
    for (&i, v) in moved.iter().zip(vals) {
        a[i] = v.clone();
    }
    a
}

/// Solves `exp(ξ)(v_i) = images_i` for `ξ` moving only the variables in
/// `moved`, correcting by the residual one order at a time.
fn log_moving(ring: &JetRing, moved: &[usize], images: &[Jet]) -> Result<Vec<Jet>, TangentError> {
    let mut xi: Vec<Jet> = moved.iter().zip(images).map(|(&i, p)| p - &ring.var(i)).collect();
    for _ in 0..=bound(ring) {
        let e = exp_moving(ring, &spread(ring, moved, &xi), moved).map_err(|_| TangentError::LevelZero)?;
        let r: Vec<Jet> = images.iter().zip(&e).map(|(p, q)| p - q).collect();
        if r.iter().all(|x| x.is_zero()) {
            return Ok(xi);
        }
        xi = xi.iter().zip(&r).map(|(a, b)| a + b).collect();
    }
    Err(TangentError::LevelZero)
}

fn exp_right(ring: &JetRing, a: &[Jet]) -> Result<Aut, TangentError> {
    if a.iter().all(|x| x.is_zero()) {
        return Ok(Aut::identity(ring));
    }
    let moved: Vec<usize> = (0..a.len()).collect();
    Ok(Aut::new(ring, exp_moving(ring, a, &moved)?)?)
}

fn log_right(a: &Aut) -> Result<Vec<Jet>, TangentError> {
    let moved: Vec<usize> = (0..a.comps().len()).collect();
    log_moving(a.ring(), &moved, a.comps())
}

/// `L(v) = A·v − Σ a_i ∂v/∂x_i` on a column of source jets.
fn klin_operator(m: &[Vec<Jet>], right: &[Jet], v: &[Jet]) -> Vec<Jet> {
    m.iter()
        .zip(v)
        .map(|(row, vk)| {
            let lin = row.iter().zip(v).fold(vk.ring().zero(), |acc, (a, x)| &acc + &(a * x));
            &lin - &derive(right, vk)
        })
        .collect()
}

/// The time-one flow of `ξ = (A, Σ a_i ∂/∂x_i)` on `K_lin`. `L = A − D`
/// satisfies `L(h·v) = h·L(v) − D(h)·v`, so `exp(L)(f) = M·(f∘Φ⁻¹)` where
/// `Φ = exp(D)` and the columns of `M` are `exp(L)(e_l)`.
fn klin_matrix(m: &[Vec<Jet>], right: &[Jet], ring: &JetRing) -> Result<JetMatrix, TangentError> {
    let f = ring.field();
    let size = m.len();
    let mut cols = Vec::with_capacity(size);
    for l in 0..size {
        let mut term: Vec<Jet> = (0..size).map(|k| if k == l { ring.one() } else { ring.zero() }).collect();
        let mut acc = term.clone();
        let mut done = false;
        for k in 1..=bound(ring) as u64 {
            let inv = f.from_u64(k).inv().expect("characteristic zero");
            term = klin_operator(m, right, &term).iter().map(|x| x.scale(&inv)).collect();
            if term.iter().all(|x| x.is_zero()) {
                done = true;
                break;
            }
            acc = acc.iter().zip(&term).map(|(x, y)| x + y).collect();
        }
        if !done {
            return Err(TangentError::NotOrderRaising);
        }
        cols.push(acc);
    }
    let rows = (0..size).map(|k| cols.iter().map(|c| c[k].clone()).collect()).collect();
    Ok(JetMatrix::new(ring, rows))
}

/// Solves `klin_matrix(A, right) = target` for `A`, correcting by the
/// residual one order at a time.
fn klin_log(target: &JetMatrix, right: &[Jet]) -> Result<Vec<Vec<Jet>>, TangentError> {
    let ring = target.ring();
    let id = JetMatrix::identity(ring, target.size());
    let mut a = add(target, &scale(&id, &-ring.field().one())).rows().to_vec();
    for _ in 0..=bound(ring) {
        let e = klin_matrix(&a, right, ring).map_err(|_| TangentError::LevelZero)?;
        let r = add(target, &scale(&e, &-ring.field().one()));
        if r.rows().iter().flatten().all(|x| x.is_zero()) {
            return Ok(a);
        }
        a = add(&JetMatrix::new(ring, a), &r).rows().to_vec();
    }
    Err(TangentError::LevelZero)
}

fn scale(m: &JetMatrix, c: &crate::FieldElem) -> JetMatrix {
    JetMatrix::new(
        m.ring(),
        m.rows().iter().map(|r| r.iter().map(|x| x.scale(c)).collect()).collect(),
    )
}

fn add(a: &JetMatrix, b: &JetMatrix) -> JetMatrix {
    JetMatrix::new(
        a.ring(),
        a.rows()
            .iter()
            .zip(b.rows())
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
            .collect(),
    )
}

/// `exp(ξ)` as a group element acting on `space`. The left and right
/// factors of `LR` commute and are exponentiated separately, as are the
/// factors of a contact vector; `K_lin` uses its true flow.
pub fn exp_vf(xi: &TangentVector, space: &MapSpace) -> Result<GroupElement, TangentError> {
    let (src, tgt) = (space.source(), space.target());
    char_zero(src)?;
    Ok(match xi {
        TangentVector::Right(a) => GroupElement::Right(exp_right(src, a)?),
        TangentVector::Left(b) => GroupElement::Left(exp_right(tgt, b)?),
        TangentVector::LeftRight { left, right } => GroupElement::LeftRight {
            left: exp_right(tgt, left)?,
            right: exp_right(src, right)?,
        },
        TangentVector::Contact { contact, right } => {
            let xy = space.contact_ring();
            let n = space.n();
            let moved: Vec<usize> = (n..n + space.m()).collect();
            let comps = exp_moving(xy, &spread(xy, &moved, contact), &moved)?;
            GroupElement::Contact {
                contact: ContactMap::new(space, comps)?,
                right: exp_right(src, right)?,
            }
        }
        TangentVector::ContactLin { matrix, right } => {
            let m = klin_matrix(matrix, right, src)?;
            GroupElement::contact_lin(space, m, exp_right(src, right)?)?
        }
    })
}

/// The tangent vector `ξ` with `exp_vf(ξ) = g`, found order by order.
pub fn log_aut(g: &GroupElement, space: &MapSpace) -> Result<TangentVector, TangentError> {
    char_zero(space.source())?;
    Ok(match g {
        GroupElement::Right(a) => TangentVector::Right(log_right(a)?),
        GroupElement::Left(a) => TangentVector::Left(log_right(a)?),
        GroupElement::LeftRight { left, right } => TangentVector::LeftRight {
            left: log_right(left)?,
            right: log_right(right)?,
        },
        GroupElement::Contact { contact, right } => {
            if contact.space() != space {
                return Err(GermError::SpaceMismatch("contact map of another space".into()).into());
            }
            let n = space.n();
            let moved: Vec<usize> = (n..n + space.m()).collect();
            TangentVector::Contact {
                contact: log_moving(space.contact_ring(), &moved, contact.comps())?,
                right: log_right(right)?,
            }
        }
        GroupElement::ContactLin { matrix, right } => {
            let right = log_right(right)?;
            TangentVector::ContactLin {
                matrix: klin_log(matrix, &right)?,
                right,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;
    use crate::germs::germ_space;

    fn line(n: u32) -> MapSpace {
        let q = Field::rationals();
        let x = germ_space(&q, &["x"], n, &[]).unwrap();
        let y = germ_space(&q, &["y"], n, &[]).unwrap();
        MapSpace::new(&x, &y).unwrap()
    }

    #[test]
    fn exp_examples() {
        let sp = line(4);
        let xi = TangentVector::Right(vec![sp.source().parse("x^2").unwrap()]);
        match exp_vf(&xi, &sp).unwrap() {
            GroupElement::Right(a) => assert_eq!(a.comps()[0].to_string(), "x+x^2+x^3+x^4"),
            g => panic!("{g}"),
        }
        let zero = TangentVector::Right(vec![sp.source().zero()]);
        assert!(exp_vf(&zero, &sp).unwrap().is_identity());

        let sp3 = line(3);
        let eta = TangentVector::Left(vec![sp3.target().parse("y^2").unwrap()]);
        match exp_vf(&eta, &sp3).unwrap() {
            GroupElement::Left(a) => assert_eq!(a.comps()[0].to_string(), "y+y^2+y^3"),
            g => panic!("{g}"),
        }
        let lin = TangentVector::Right(vec![sp3.source().parse("x").unwrap()]);
        assert_eq!(exp_vf(&lin, &sp3).unwrap_err(), TangentError::NotOrderRaising);
    }

    #[test]
    fn log_examples() {
        let sp = line(3);
        let src = sp.source();
        let g = GroupElement::Right(Aut::parse(src, &["x+x^2"]).unwrap());
        let xi = log_aut(&g, &sp).unwrap();
        assert_eq!(xi.to_string(), "(x^2-x^3) d/dx");
        assert_eq!(exp_vf(&xi, &sp).unwrap(), g);
        let g = GroupElement::Right(Aut::parse(src, &["x+x^3"]).unwrap());
        assert_eq!(log_aut(&g, &sp).unwrap().to_string(), "x^3 d/dx");
        let id = GroupElement::Right(Aut::identity(src));
        assert!(log_aut(&id, &sp).unwrap().is_zero());
        let g = GroupElement::Right(Aut::parse(src, &["2*x"]).unwrap());
        assert_eq!(log_aut(&g, &sp).unwrap_err(), TangentError::LevelZero);
        let f5 = Field::prime(5).unwrap();
        let fp = germ_space(&f5, &["x"], 3, &[]).unwrap();
        let spp = MapSpace::new(&fp, &germ_space(&f5, &["y"], 3, &[]).unwrap()).unwrap();
        let xi = TangentVector::Right(vec![fp.parse("x^2").unwrap()]);
        assert_eq!(exp_vf(&xi, &spp).unwrap_err(), TangentError::PositiveCharacteristic);
    }
}
