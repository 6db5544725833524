use std::fmt;
use std::str::FromStr;

use serde_json::json;

use super::aut::params_to_zero;
use super::matrix::{invert_scalar, scalar_apply};
use super::{Aut, GermError, JetMatrix, MapGerm, MapSpace};
use crate::exactfield::Extension;
use crate::jets::{Filtration, Jet, Order};

/// The equivalence groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    /// Source coordinate changes.
    R,
    /// Target coordinate changes.
    L,
    /// Both, `L × R`.
    LR,
    /// Fiberwise target changes `C(x, y)` over the source.
    C,
    /// `C ⋊ R`.
    K,
    /// `GL_m(R_X) ⋊ R`, for smooth targets.
    KLin,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::R => "R",
            Group::L => "L",
            Group::LR => "LR",
            Group::C => "C",
            Group::K => "K",
            Group::KLin => "Klin",
        })
    }
}

impl FromStr for Group {
    type Err = GermError;
    fn from_str(s: &str) -> Result<Group, GermError> {
        Ok(match s {
            "R" => Group::R,
            "L" => Group::L,
            "LR" => Group::LR,
            "C" => Group::C,
            "K" => Group::K,
            "Klin" | "KLin" | "K_lin" => Group::KLin,
            _ => return Err(GermError::GroupMismatch(format!("unknown group '{s}'"))),
        })
    }
}

/// Fiberwise target change `C(x, y)` with `C(x, 0) = 0`, stored in the
/// contact ring of a [`MapSpace`], with its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct ContactMap {
    space: MapSpace,
    comps: Vec<Jet>,
}

impl fmt::Display for ContactMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl ContactMap {
    pub fn new(space: &MapSpace, comps: Vec<Jet>) -> Result<ContactMap, GermError> {
        let m = space.m();
        let n = space.n();
        if comps.len() != m {
            return Err(GermError::ComponentCount {
                expected: m,
                got: comps.len(),
            });
        }
        let ring = space.contact_ring();
        let shape = ring.shape();
        for (i, c) in comps.iter().enumerate() {
            if c.ring() != ring {
                return Err(GermError::SpaceMismatch(format!(
                    "contact component {i} is not a jet in the source and target variables"
                )));
            }
            let y_free = c.support().any(|k| shape.monomial(k)[n..n + m].iter().all(|&e| e == 0));
            if y_free {
                return Err(GermError::ContactNotZeroOnSection(i));
            }
        }
        let a = y_linear_part(space, &comps);
        if invert_scalar(space.field(), &a).is_none() {
            return Err(GermError::SingularLinearPart);
        }
        for q in space.target().ideal_gens() {
            let image = q.substitute(&comps)?;
            if !image.is_zero() {
                return Err(GermError::IdealNotPreserved {
                    generator: q.to_string(),
                    residual: image.to_string(),
                });
            }
        }
        Ok(ContactMap {
            space: space.clone(),
            comps,
        })
    }

    pub fn parse(space: &MapSpace, comps: &[&str]) -> Result<ContactMap, GermError> {
        let ring = space.contact_ring();
        let jets = comps
            .iter()
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        ContactMap::new(space, jets)
    }

    pub fn identity(space: &MapSpace) -> ContactMap {
        ContactMap {
            space: space.clone(),
            comps: (0..space.m()).map(|i| space.xy_y(i)).collect(),
        }
    }

    /// `C(x, y) = M(x) · y`.
    pub fn from_matrix(space: &MapSpace, m: &JetMatrix) -> ContactMap {
        let ys: Vec<Jet> = (0..space.m()).map(|i| space.xy_y(i)).collect();
        let comps = m
            .rows()
            .iter()
            .map(|row| {
                row.iter().zip(&ys).fold(space.contact_ring().zero(), |acc, (a, y)| {
                    &acc + &(&space.embed_x(a) * y)
                })
            })
            .collect();
        ContactMap {
            space: space.clone(),
            comps,
        }
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn space(&self) -> &MapSpace {
        &self.space
    }

    pub fn is_identity(&self) -> bool {
        *self == ContactMap::identity(&self.space)
    }

    /// Arguments for substituting into a contact-ring jet:
    /// `x ↦ xs`, `y ↦ ys`, parameters fixed.
    fn xy_args(&self, xs: Vec<Jet>, ys: Vec<Jet>, params: Vec<Jet>) -> Vec<Jet> {
        let mut a = xs;
        a.extend(ys);
        a.extend(params);
        a
    }

    /// `C(x, g(x))` for source jets `g`.
    pub fn apply(&self, g: &[Jet]) -> Vec<Jet> {
        let src = self.space.source();
        let n = self.space.n();
        let xs = (0..n).map(|i| src.var(i)).collect();
        let ps = (0..src.param_vars().len()).map(|i| src.var(n + i)).collect();
        let args = self.xy_args(xs, g.to_vec(), ps);
        self.comps
            .iter()
            .map(|c| c.substitute(&args).expect("contact arguments"))
            .collect()
    }

    /// `C(ψ(x), y)` for a source coordinate change given by source jets `ψ`.
    fn compose_x(&self, psi: &[Jet]) -> Vec<Jet> {
        let xy = self.space.contact_ring();
        let n = self.space.n();
        let m = self.space.m();
        let xs = psi.iter().map(|p| self.space.embed_x(p)).collect();
        let ys = (0..m).map(|i| xy.var(n + i)).collect();
        let ps = (0..xy.param_vars().len()).map(|i| xy.var(n + m + i)).collect();
        let args = self.xy_args(xs, ys, ps);
        self.comps
            .iter()
            .map(|c| c.substitute(&args).expect("contact arguments"))
            .collect()
    }

    /// `C(x, D(x, y))`.
    fn compose_y(&self, d: &[Jet]) -> Vec<Jet> {
        let xy = self.space.contact_ring();
        let n = self.space.n();
        let m = self.space.m();
        let xs = (0..n).map(|i| xy.var(i)).collect();
        let ps = (0..xy.param_vars().len()).map(|i| xy.var(n + m + i)).collect();
        let args = self.xy_args(xs, d.to_vec(), ps);
        self.comps
            .iter()
            .map(|c| c.substitute(&args).expect("contact arguments"))
            .collect()
    }

    /// Inverse of `y ↦ C(x, y)` over each fiber.
    fn fiber_inverse(space: &MapSpace, comps: &[Jet]) -> Vec<Jet> {
        let xy = space.contact_ring();
        let free = xy.free();
        let f = space.field();
        let n = space.n();
        let m = space.m();
        let a = y_linear_part(space, comps);
        let a_inv = invert_scalar(f, &a).expect("validated linear part");
        let ys: Vec<Jet> = (0..m).map(|i| free.var(n + i)).collect();
        let lifted: Vec<Jet> = comps
            .iter()
            .map(|c| c.reinterpret(&free).expect("same shape"))
            .collect();
        let lin = scalar_apply(&free, &a, &ys);
        let r: Vec<Jet> = lifted.iter().zip(&lin).map(|(c, l)| c - l).collect();
        let xs: Vec<Jet> = (0..n).map(|i| free.var(i)).collect();
        let ps: Vec<Jet> = (0..free.param_vars().len()).map(|i| free.var(n + m + i)).collect();
        let mut e = scalar_apply(&free, &a_inv, &ys);
        for _ in 0..free.order() + free.param_order() + 2 {
            let mut args = xs.clone();
            args.extend(e.iter().cloned());
            args.extend(ps.iter().cloned());
            let rs: Vec<Jet> = r
                .iter()
                .map(|ri| ri.substitute(&args).expect("contact arguments"))
                .collect();
            let rhs: Vec<Jet> = ys.iter().zip(&rs).map(|(y, v)| y - v).collect();
            let next = scalar_apply(&free, &a_inv, &rhs);
            if next == e {
                break;
            }
            e = next;
        }
        e.into_iter()
            .map(|j| j.reinterpret(xy).expect("same shape"))
            .collect()
    }

    pub fn base_change(&self, ext: &Extension, space: &MapSpace) -> ContactMap {
        let ring = space.contact_ring();
        ContactMap {
            space: space.clone(),
            comps: self.comps.iter().map(|c| c.base_change(ext, ring)).collect(),
        }
    }

    pub fn descend(&self, ext: &Extension, space: &MapSpace) -> Option<ContactMap> {
        let ring = space.contact_ring();
        let comps = self
            .comps
            .iter()
            .map(|c| c.descend(ext, ring))
            .collect::<Option<Vec<_>>>()?;
        Some(ContactMap {
            space: space.clone(),
            comps,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.comps.iter().map(|c| c.to_json()).collect())
    }
}

fn y_linear_part(space: &MapSpace, comps: &[Jet]) -> Vec<Vec<crate::exactfield::FieldElem>> {
    let n = space.n();
    let nv = space.contact_ring().n_vars();
    comps
        .iter()
        .map(|c| {
            (0..space.m())
                .map(|j| {
                    let mut e = vec![0; nv];
                    e[n + j] = 1;
                    c.coeff(&e)
                })
                .collect()
        })
        .collect()
}

/// An element of one of the equivalence groups acting on a [`MapSpace`].
#[derive(Clone, PartialEq, Eq)]
pub enum GroupElement {
    /// `f ↦ f ∘ Φ^{-1}`.
    Right(Aut),
    /// `f ↦ Φ_Y ∘ f`.
    Left(Aut),
    /// `f ↦ Φ_Y ∘ f ∘ Φ_X^{-1}`.
    LeftRight { left: Aut, right: Aut },
    /// `f ↦ C(x, f ∘ Φ^{-1})`; a member of `C` when `right` is the identity.
    Contact { contact: ContactMap, right: Aut },
    /// `f ↦ M · (f ∘ Φ^{-1})`.
    ContactLin { matrix: JetMatrix, right: Aut },
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Right(a) => write!(f, "R{a}"),
            GroupElement::Left(a) => write!(f, "L{a}"),
            GroupElement::LeftRight { left, right } => write!(f, "LR[{left}; {right}]"),
            GroupElement::Contact { contact, right } => write!(f, "K[{contact}; {right}]"),
            GroupElement::ContactLin { matrix, right } => write!(f, "Klin[{matrix}; {right}]"),
        }
    }
}

impl GroupElement {
    pub fn identity(group: Group, space: &MapSpace) -> GroupElement {
        let right = Aut::identity(space.source());
        match group {
            Group::R => GroupElement::Right(right),
            Group::L => GroupElement::Left(Aut::identity(space.target())),
            Group::LR => GroupElement::LeftRight {
                left: Aut::identity(space.target()),
                right,
            },
            Group::C | Group::K => GroupElement::Contact {
                contact: ContactMap::identity(space),
                right,
            },
            Group::KLin => GroupElement::ContactLin {
                matrix: JetMatrix::identity(space.source(), space.m()),
                right,
            },
        }
    }

    pub fn contact_lin(space: &MapSpace, matrix: JetMatrix, right: Aut) -> Result<GroupElement, GermError> {
        if space.target().has_ideal() {
            return Err(GermError::SingularTarget);
        }
        if matrix.size() != space.m() {
            return Err(GermError::ComponentCount {
                expected: space.m(),
                got: matrix.size(),
            });
        }
        if matrix.ring() != space.source() || right.ring() != space.source() {
            return Err(GermError::SpaceMismatch("matrix entries must be source jets".into()));
        }
        if invert_scalar(space.field(), &matrix.constant_part()).is_none() {
            return Err(GermError::SingularLinearPart);
        }
        Ok(GroupElement::ContactLin { matrix, right })
    }

    /// The smallest group of the list containing this element's variant.
    pub fn group(&self) -> Group {
        match self {
            GroupElement::Right(_) => Group::R,
            GroupElement::Left(_) => Group::L,
            GroupElement::LeftRight { .. } => Group::LR,
            GroupElement::Contact { right, .. } if right.is_identity() => Group::C,
            GroupElement::Contact { .. } => Group::K,
            GroupElement::ContactLin { .. } => Group::KLin,
        }
    }

    /// Whether the element lies in `group` (as represented by its variant).
    pub fn belongs_to(&self, group: Group) -> bool {
        match (self, group) {
            (GroupElement::Right(_), Group::R) => true,
            (GroupElement::Left(_), Group::L) => true,
            (GroupElement::LeftRight { .. }, Group::LR) => true,
            (GroupElement::Contact { right, .. }, Group::C) => right.is_identity(),
            (GroupElement::Contact { .. }, Group::K) => true,
            (GroupElement::ContactLin { .. }, Group::KLin) => true,
            _ => false,
        }
    }

    /// The same transformation in the representation of a larger group.
    pub fn embed(&self, group: Group, space: &MapSpace) -> Result<GroupElement, GermError> {
        if self.belongs_to(group) {
            return Ok(self.clone());
        }
        let fail = || GermError::GroupMismatch(format!("{} element is not in {group}", self.group()));
        Ok(match (self, group) {
            (GroupElement::Right(a), Group::LR) => GroupElement::LeftRight {
                left: Aut::identity(space.target()),
                right: a.clone(),
            },
            (GroupElement::Left(a), Group::LR) => GroupElement::LeftRight {
                left: a.clone(),
                right: Aut::identity(space.source()),
            },
            (GroupElement::Right(a), Group::K) => GroupElement::Contact {
                contact: ContactMap::identity(space),
                right: a.clone(),
            },
            (GroupElement::Right(a), Group::KLin) => {
                GroupElement::contact_lin(space, JetMatrix::identity(space.source(), space.m()), a.clone())?
            }
            (GroupElement::ContactLin { matrix, right }, Group::K) => GroupElement::Contact {
                contact: ContactMap::from_matrix(space, matrix),
                right: right.clone(),
            },
            _ => return Err(fail()),
        })
    }

    pub fn act(&self, f: &MapGerm) -> Result<MapGerm, GermError> {
        let space = f.space();
        self.check_space(space)?;
        let comps: Vec<Jet> = match self {
            GroupElement::Right(a) => f.comps().iter().map(|c| a.apply_inverse(c)).collect(),
            GroupElement::Left(a) => left_apply(a, f.comps()),
            GroupElement::LeftRight { left, right } => {
                let g: Vec<Jet> = f.comps().iter().map(|c| right.apply_inverse(c)).collect();
                left_apply(left, &g)
            }
            GroupElement::Contact { contact, right } => {
                let g: Vec<Jet> = f.comps().iter().map(|c| right.apply_inverse(c)).collect();
                contact.apply(&g)
            }
            GroupElement::ContactLin { matrix, right } => {
                let g: Vec<Jet> = f.comps().iter().map(|c| right.apply_inverse(c)).collect();
                matrix.apply(&g)
            }
        };
        Ok(MapGerm::from_parts(space, comps))
    }

    fn check_space(&self, space: &MapSpace) -> Result<(), GermError> {
        let ok = match self {
            GroupElement::Right(a) => a.ring() == space.source(),
            GroupElement::Left(a) => a.ring() == space.target(),
            GroupElement::LeftRight { left, right } => {
                left.ring() == space.target() && right.ring() == space.source()
            }
            GroupElement::Contact { contact, right } => {
                contact.space() == space && right.ring() == space.source()
            }
            GroupElement::ContactLin { matrix, right } => {
                matrix.ring() == space.source() && right.ring() == space.source()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(GermError::SpaceMismatch("group element acts on different spaces".into()))
        }
    }

    /// `self ∘ other`: acting by the result equals acting by `other` first.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, GermError> {
        use GroupElement as G;
        Ok(match (self, other) {
            (G::Right(a), G::Right(b)) => G::Right(a.compose(b)),
            (G::Left(a), G::Left(b)) => G::Left(a.compose(b)),
            (G::LeftRight { left: l1, right: r1 }, G::LeftRight { left: l2, right: r2 }) => {
                G::LeftRight {
                    left: l1.compose(l2),
                    right: r1.compose(r2),
                }
            }
            (G::ContactLin { matrix: m1, right: r1 }, G::ContactLin { matrix: m2, right: r2 }) => {
                // M1 · (M2 ∘ Φ1^{-1})
                let space_args = param_args(r1, r1.inverse_comps());
                let m2s = m2.substitute(&space_args);
                G::ContactLin {
                    matrix: m1.mul(&m2s),
                    right: r1.compose(r2),
                }
            }
            (G::Contact { contact: c1, right: r1 }, G::Contact { contact: c2, right: r2 }) => {
                // C(x, y) = C1(x, C2(Φ1^{-1}(x), y))
                let inner = c2.compose_x(r1.inverse_comps());
                let comps = c1.compose_y(&inner);
                G::Contact {
                    contact: ContactMap {
                        space: c1.space.clone(),
                        comps,
                    },
                    right: r1.compose(r2),
                }
            }
            _ => {
                return Err(GermError::GroupMismatch(format!(
                    "cannot compose {} with {}",
                    self.group(),
                    other.group()
                )))
            }
        })
    }

    pub fn inverse(&self) -> GroupElement {
        use GroupElement as G;
        match self {
            G::Right(a) => G::Right(a.inverse()),
            G::Left(a) => G::Left(a.inverse()),
            G::LeftRight { left, right } => G::LeftRight {
                left: left.inverse(),
                right: right.inverse(),
            },
            G::ContactLin { matrix, right } => {
                // (M ∘ Φ)^{-1}
                let ms = matrix.substitute(&param_args(right, right.comps()));
                G::ContactLin {
                    matrix: ms.inverse().expect("validated unit matrix"),
                    right: right.inverse(),
                }
            }
            G::Contact { contact, right } => {
                let d = contact.compose_x(right.comps());
                let comps = ContactMap::fiber_inverse(&contact.space, &d);
                G::Contact {
                    contact: ContactMap {
                        space: contact.space.clone(),
                        comps,
                    },
                    right: right.inverse(),
                }
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Right(a) | GroupElement::Left(a) => a.is_identity(),
            GroupElement::LeftRight { left, right } => left.is_identity() && right.is_identity(),
            GroupElement::Contact { contact, right } => contact.is_identity() && right.is_identity(),
            GroupElement::ContactLin { matrix, right } => matrix.is_identity() && right.is_identity(),
        }
    }

    pub fn right(&self) -> Option<&Aut> {
        match self {
            GroupElement::Right(a) => Some(a),
            GroupElement::Left(_) => None,
            GroupElement::LeftRight { right, .. }
            | GroupElement::Contact { right, .. }
            | GroupElement::ContactLin { right, .. } => Some(right),
        }
    }

    pub fn base_change(&self, ext: &Extension, space: &MapSpace) -> GroupElement {
        use GroupElement as G;
        let (s, t) = (space.source(), space.target());
        match self {
            G::Right(a) => G::Right(a.base_change(ext, s)),
            G::Left(a) => G::Left(a.base_change(ext, t)),
            G::LeftRight { left, right } => G::LeftRight {
                left: left.base_change(ext, t),
                right: right.base_change(ext, s),
            },
            G::Contact { contact, right } => G::Contact {
                contact: contact.base_change(ext, space),
                right: right.base_change(ext, s),
            },
            G::ContactLin { matrix, right } => G::ContactLin {
                matrix: matrix.base_change(ext, s),
                right: right.base_change(ext, s),
            },
        }
    }

    /// The element over `k` when all its coefficients are `k`-rational.
    pub fn descend(&self, ext: &Extension, space: &MapSpace) -> Option<GroupElement> {
        use GroupElement as G;
        let (s, t) = (space.source(), space.target());
        Some(match self {
            G::Right(a) => G::Right(a.descend(ext, s)?),
            G::Left(a) => G::Left(a.descend(ext, t)?),
            G::LeftRight { left, right } => G::LeftRight {
                left: left.descend(ext, t)?,
                right: right.descend(ext, s)?,
            },
            G::Contact { contact, right } => G::Contact {
                contact: contact.descend(ext, space)?,
                right: right.descend(ext, s)?,
            },
            G::ContactLin { matrix, right } => G::ContactLin {
                matrix: matrix.descend(ext, s)?,
                right: right.descend(ext, s)?,
            },
        })
    }

    /// The element with every parameter set to zero.
    pub fn at_params_zero(&self) -> Result<GroupElement, GermError> {
        use GroupElement as G;
        let zero = |v: &[Jet]| v.iter().map(params_to_zero).collect::<Vec<_>>();
        Ok(match self {
            G::Right(a) => G::Right(a.at_params_zero()?),
            G::Left(a) => G::Left(a.clone()),
            G::LeftRight { left, right } => G::LeftRight {
                left: left.clone(),
                right: right.at_params_zero()?,
            },
            G::Contact { contact, right } => G::Contact {
                contact: ContactMap::new(&contact.space, zero(&contact.comps))?,
                right: right.at_params_zero()?,
            },
            G::ContactLin { matrix, right } => G::ContactLin {
                matrix: JetMatrix::new(matrix.ring(), matrix.rows().iter().map(|r| zero(r)).collect()),
                right: right.at_params_zero()?,
            },
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        use GroupElement as G;
        match self {
            G::Right(a) => json!({"group": "R", "right": a.to_json()}),
            G::Left(a) => json!({"group": "L", "left": a.to_json()}),
            G::LeftRight { left, right } => {
                json!({"group": "LR", "left": left.to_json(), "right": right.to_json()})
            }
            G::Contact { contact, right } => {
                json!({"group": "K", "contact": contact.to_json(), "right": right.to_json()})
            }
            G::ContactLin { matrix, right } => {
                json!({"group": "Klin", "matrix": matrix.to_json(), "right": right.to_json()})
            }
        }
    }
}

fn param_args(a: &Aut, comps: &[Jet]) -> Vec<Jet> {
    let ring = a.ring();
    let n = comps.len();
    let mut args = comps.to_vec();
    args.extend((0..ring.param_vars().len()).map(|i| ring.var(n + i)));
    args
}

fn left_apply(a: &Aut, f: &[Jet]) -> Vec<Jet> {
    a.comps()
        .iter()
        .map(|c| c.substitute(f).expect("map components lie in the maximal ideal"))
        .collect()
}

/// Largest `j ≤ cap` such that `g` acts trivially on every quotient
/// `M^d / M^{d+j}`; `cap` is the top nonzero level of `filt`.
pub fn group_level(g: &GroupElement, filt: &Filtration) -> u32 {
    let cap = filt.max_order();
    let level = match g {
        GroupElement::Right(a) => right_level(a, filt, cap),
        GroupElement::Left(a) => left_level(a, cap),
        GroupElement::LeftRight { left, right } => {
            left_level(left, cap).min(right_level(right, filt, cap))
        }
        GroupElement::Contact { contact, right } => {
            contact_level(contact, cap).min(right_level(right, filt, cap))
        }
        GroupElement::ContactLin { matrix, right } => klin_level(matrix, right, filt, cap),
    };
    level.min(cap)
}

fn shortfall(diff: Order, base: u32, cap: u32) -> u32 {
    match diff {
        Order::Infinite => cap,
        Order::Finite(d) => d.saturating_sub(base),
    }
}

fn right_level(a: &Aut, filt: &Filtration, cap: u32) -> u32 {
    if a.is_identity() {
        return cap;
    }
    let ring = a.ring();
    let one = ring.field().one();
    let mut level = cap;
    for i in 1..ring.dim() {
        let o = filt.monomial_order(i);
        let v = ring.monomial(ring.shape().monomial(i), &one);
        let d = &a.apply_inverse(&v) - &v;
        level = level.min(shortfall(filt.order_of_jet(&d), o, cap));
        if level == 0 {
            break;
        }
    }
    level
}

fn klin_level(m: &JetMatrix, right: &Aut, filt: &Filtration, cap: u32) -> u32 {
    let ring = m.ring();
    let one = ring.field().one();
    let size = m.size();
    let mut level = cap;
    for i in 0..ring.dim() {
        let o = filt.monomial_order(i);
        let v = ring.monomial(ring.shape().monomial(i), &one);
        let moved = right.apply_inverse(&v);
        for k in 0..size {
            // M · (e_k v ∘ Φ^{-1}) - e_k v
            let diff: Vec<Jet> = (0..size)
                .map(|r| {
                    let img = m.entry(r, k) * &moved;
                    if r == k {
                        &img - &v
                    } else {
                        img
                    }
                })
                .collect();
            level = level.min(shortfall(filt.order_of(&diff), o, cap));
            if level == 0 {
                return 0;
            }
        }
    }
    level
}

fn left_level(a: &Aut, cap: u32) -> u32 {
    let ring = a.ring();
    let low = a
        .comps()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| (c - &ring.var(i)).low_degree())
        .min();
    match low {
        None => cap,
        Some(d) => d.saturating_sub(1),
    }
}

fn contact_level(c: &ContactMap, cap: u32) -> u32 {
    let space = c.space();
    let low = c
        .comps()
        .iter()
        .enumerate()
        .filter_map(|(i, x)| (x - &space.xy_y(i)).low_degree())
        .min();
    match low {
        None => cap,
        Some(d) => d.saturating_sub(1),
    }
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
    fn act_examples() {
        let sp = line(3);
        let f = MapGerm::parse(&sp, &["x^2"]).unwrap();
        // Φ^{-1}(x) = x + x^2
        let phi = Aut::parse(sp.source(), &["x+x^2"]).unwrap().inverse();
        let g = GroupElement::Right(phi);
        assert_eq!(g.act(&f).unwrap().to_string(), "(x^2+2*x^3)");

        let m = JetMatrix::new(sp.source(), vec![vec![sp.source().parse("1+x").unwrap()]]);
        let k = GroupElement::contact_lin(&sp, m, Aut::identity(sp.source())).unwrap();
        assert_eq!(k.act(&f).unwrap().to_string(), "(x^2+x^3)");

        let sp4 = line(4);
        let f4 = MapGerm::parse(&sp4, &["x^2"]).unwrap();
        let l = GroupElement::Left(Aut::parse(sp4.target(), &["y+y^2"]).unwrap());
        assert_eq!(l.act(&f4).unwrap().to_string(), "(x^2+x^4)");
    }

    #[test]
    fn contact_examples() {
        let q = Field::rationals();
        let x = germ_space(&q, &["x"], 3, &[]).unwrap();
        let y = germ_space(&q, &["y1", "y2"], 3, &[]).unwrap();
        let sp = MapSpace::new(&x, &y).unwrap();
        assert!(ContactMap::parse(&sp, &["(1+x)*y1", "y2+x*y1^2"]).is_ok());
        assert!(matches!(
            ContactMap::parse(&sp, &["y1+x", "y2"]),
            Err(GermError::ContactNotZeroOnSection(0))
        ));
        let u = germ_space(&q, &["u"], 3, &["u^2"]).unwrap();
        let sp2 = MapSpace::new(&x, &u).unwrap();
        assert!(ContactMap::parse(&sp2, &["(1+x)*u"]).is_ok());
    }

    #[test]
    fn level_examples() {
        let sp = line(3);
        let filt = Filtration::madic(sp.source());
        let g = GroupElement::Right(Aut::parse(sp.source(), &["x+x^3"]).unwrap());
        assert_eq!(group_level(&g, &filt), 2);
        assert_eq!(group_level(&GroupElement::identity(Group::R, &sp), &filt), 3);
        let g = GroupElement::Right(Aut::parse(sp.source(), &["2*x"]).unwrap());
        assert_eq!(group_level(&g, &filt), 0);
    }

    #[test]
    fn contact_inverse_and_composition() {
        let q = Field::rationals();
        let x = germ_space(&q, &["x1", "x2"], 4, &[]).unwrap();
        let y = germ_space(&q, &["y"], 4, &[]).unwrap();
        let sp = MapSpace::new(&x, &y).unwrap();
        let c = ContactMap::parse(&sp, &["(2+x1)*y+x2*y^2"]).unwrap();
        let r = Aut::parse(sp.source(), &["x1+x2^2", "x2-x1*x2"]).unwrap();
        let g = GroupElement::Contact { contact: c, right: r };
        let f = MapGerm::parse(&sp, &["x1^2+x2^3"]).unwrap();
        let gi = g.inverse();
        assert_eq!(gi.act(&g.act(&f).unwrap()).unwrap(), f);
        assert!(g.compose(&gi).unwrap().is_identity());
        let h = g.compose(&g).unwrap();
        assert_eq!(h.act(&f).unwrap(), g.act(&g.act(&f).unwrap()).unwrap());
    }
}
