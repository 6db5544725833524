//! The equivalence condition `Φ_Y∘f = f̃∘Φ_X` (and its contact variants)
//! expanded coefficient by coefficient into polynomial equations.

use super::poly::Poly;
use super::polyjet::PolyJet;
use super::{PolyError, PolySystem};
use crate::exactfield::{Extension, FieldElem, Value};
use crate::germs::{Aut, ContactMap, Group, GroupElement, JetMatrix, MapGerm, MapSpace};
use crate::jets::{Jet, JetRing};

/// Which group coordinate an unknown is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Role {
    /// Coefficient of monomial `mono` in component `comp` of `Φ_X`.
    Source { comp: usize, mono: usize },
    Target { comp: usize, mono: usize },
    Matrix { row: usize, col: usize, mono: usize },
    Contact { comp: usize, mono: usize },
    Inverse,
}

/// How to read a solution back as a group element.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub group: Group,
    pub space: MapSpace,
    pub roles: Vec<Role>,
}

struct Builder {
    field: crate::Field,
    names: Vec<String>,
    roles: Vec<Role>,
}

impl Builder {
    fn add(&mut self, name: String, role: Role) -> usize {
        self.names.push(name);
        self.roles.push(role);
        self.names.len() - 1
    }

    /// Unknown components `Σ_β u_β x^β` over `ring`, monomials with degree
    /// in `degrees` and accepted by `keep`.
    fn series(
        &mut self,
        ring: &JetRing,
        prefix: &str,
        label: &str,
        degrees: std::ops::RangeInclusive<u32>,
        keep: impl Fn(&[u32]) -> bool,
        role: impl Fn(usize) -> Role,
    ) -> Vec<(usize, usize)> {
        let shape = ring.shape();
        let single = label.is_empty() && ring.n_vars() == 1;
        let mut out = Vec::new();
        for i in 0..ring.dim() {
            let e = shape.monomial(i);
            if !degrees.contains(&shape.degree(i)) || !keep(e) {
                continue;
            }
            let exps: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            let name = if single {
                format!("{prefix}{}", e[0])
            } else {
                format!("{prefix}{label}_{}", exps.join("_"))
            };
            out.push((i, self.add(name, role(i))));
        }
        out
    }

    fn count(&self) -> usize {
        self.names.len()
    }
}

fn var_jet(ring: &JetRing, terms: &[(usize, usize)], nvars: usize) -> PolyJet {
    let f = ring.field();
    let mut j = PolyJet::zero(ring, nvars);
    for &(mono, u) in terms {
        j.set(mono, Poly::var(f, nvars, u));
    }
    j
}

/// Determinant by cofactor expansion; matrices here are at most 4×4.
fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let f = m[0][0].field().clone();
    let nv = m[0][0].nvars();
    let mut acc = Poly::zero(&f, nv);
    for c in 0..n {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let t = m[0][c].mul(&det(&minor));
        acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

struct Equations {
    polys: Vec<Poly>,
    tags: Vec<String>,
}

impl Equations {
    fn push(&mut self, p: Poly, tag: String) {
        if p.is_zero() {
            return;
        }
        let monic = p.monic();
        if self.polys.iter().any(|q| q.monic() == monic) {
            return;
        }
        self.polys.push(p);
        self.tags.push(tag);
    }

    /// One equation per nonzero coefficient of `v`.
    fn push_coeffs(&mut self, ring: &JetRing, v: &PolyJet, what: &str) {
        let shape = ring.shape();
        for (i, p) in v.coeffs().iter().enumerate() {
            self.push(p.clone(), format!("{what}, coefficient of {}", shape.format(i)));
        }
    }
}

/// Compiles `g·f = f̃` for an unknown `g` in `group` into polynomial
/// equations. Orientation: each equation is a coefficient of
/// `f̃∘Φ_X − Φ_Y∘f` (resp. `M·f`, `C(x, f)`). With `level = Some(j)` the
/// m-adic level-`j` conditions are added as linear equations.
pub fn compile_system(f: &MapGerm, f_tilde: &MapGerm, group: Group, level: Option<u32>) -> Result<PolySystem, PolyError> {
    let space = f.space();
    if f_tilde.space() != space {
        return Err(PolyError::Precondition("f and f~ live on different spaces".into()));
    }
    if space.has_params() {
        return Err(PolyError::Unsupported("families (t-parameters) are not compiled".into()));
    }
    let (src, tgt) = (space.source(), space.target());
    let (n, m, big_n) = (space.n(), space.m(), space.order());
    let uses_contact = matches!(group, Group::C | Group::K | Group::KLin);
    if uses_contact && tgt.has_ideal() {
        return Err(PolyError::Unsupported("contact groups need a smooth target".into()));
    }
    let moves_source = matches!(group, Group::R | Group::LR | Group::K | Group::KLin);
    let mut b = Builder {
        field: space.field().clone(),
        names: Vec::new(),
        roles: Vec::new(),
    };
    let srcf = src.free();
    let tgtf = tgt.free();
    let xy = space.contact_ring().free();
    let comp_label = |k: usize, count: usize| if count == 1 { String::new() } else { (k + 1).to_string() };

    let mut phi_x = Vec::new();
    if moves_source {
        for i in 0..n {
            phi_x.push(b.series(&srcf, "a", &comp_label(i, n), 1..=big_n, |_| true, |mono| Role::Source { comp: i, mono }));
        }
    }
    let mut phi_y = Vec::new();
    if matches!(group, Group::L | Group::LR) {
        for k in 0..m {
            phi_y.push(b.series(&tgtf, "b", &comp_label(k, m), 1..=big_n, |_| true, |mono| Role::Target { comp: k, mono }));
        }
    }
    let mut matrix = Vec::new();
    if group == Group::KLin {
        for r in 0..m {
            let row = (0..m)
                .map(|c| {
                    let label = format!("{}{}", r + 1, c + 1);
                    b.series(&srcf, "m", &label, 0..=big_n.saturating_sub(1), |_| true, |mono| Role::Matrix { row: r, col: c, mono })
                })
                .collect::<Vec<_>>();
            matrix.push(row);
        }
    }
    let mut contact = Vec::new();
    if matches!(group, Group::C | Group::K) {
        for k in 0..m {
            contact.push(b.series(
                &xy,
                "c",
                &comp_label(k, m),
                1..=big_n,
                |e| e[n..n + m].iter().any(|&x| x > 0),
                |mono| Role::Contact { comp: k, mono },
            ));
        }
    }
    // Invertibility unknowns come last.
    let z_src = moves_source.then(|| b.add("z".into(), Role::Inverse));
    let z_tgt = matches!(group, Group::L | Group::LR | Group::C | Group::K | Group::KLin)
        .then(|| b.add("zy".into(), Role::Inverse));
    let nv = b.count();
    let field = b.field.clone();
    let mut eqs = Equations {
        polys: Vec::new(),
        tags: Vec::new(),
    };

    let lift = |j: &Jet, ring: &JetRing| j.reinterpret(ring).expect("same shape");
    let f_comps: Vec<Jet> = f.comps().iter().map(|c| lift(c, &srcf)).collect();

    // right-hand side f̃∘Φ_X
    let phi_x_jets: Vec<PolyJet> = phi_x.iter().map(|t| var_jet(&srcf, t, nv)).collect();
    let moved: Vec<PolyJet> = f_tilde
        .comps()
        .iter()
        .map(|c| {
            if moves_source {
                PolyJet::compose_known(&lift(c, &srcf), &phi_x_jets)
            } else {
                PolyJet::from_jet(&lift(c, &srcf), nv)
            }
        })
        .collect();
    // left-hand side
    let lhs: Vec<PolyJet> = match group {
        Group::L | Group::LR => phi_y
            .iter()
            .map(|t| var_jet(&tgtf, t, nv).compose_with(&f_comps))
            .collect(),
        Group::KLin => (0..m)
            .map(|r| {
                (0..m).fold(PolyJet::zero(&srcf, nv), |acc, c| {
                    let entry = var_jet(&srcf, &matrix[r][c], nv);
                    acc.add(&entry.mul(&PolyJet::from_jet(&f_comps[c], nv)))
                })
            })
            .collect(),
        Group::C | Group::K => {
            let mut args: Vec<Jet> = (0..n).map(|i| srcf.var(i)).collect();
            args.extend(f_comps.iter().cloned());
            contact.iter().map(|t| var_jet(&xy, t, nv).compose_with(&args)).collect()
        }
        Group::R => f_comps.iter().map(|c| PolyJet::from_jet(c, nv)).collect(),
    };
    for (k, (a, l)) in moved.iter().zip(&lhs).enumerate() {
        let diff = a.sub(l).map_linear(|v| src.reduce_vec(v));
        eqs.push_coeffs(&srcf, &diff, &format!("equivalence, component {}", k + 1));
    }

    // invertibility of the linear parts
    let linear = |ring: &JetRing, terms: &[Vec<(usize, usize)>], count: usize, offset: usize| -> Vec<Vec<Poly>> {
        let shape = ring.shape();
        terms
            .iter()
            .map(|t| {
                (0..count)
                    .map(|v| {
                        let mut e = vec![0; ring.n_vars()];
                        e[offset + v] = 1;
                        let idx = shape.index_of(&e).expect("degree one");
                        t.iter()
                            .find(|(mono, _)| *mono == idx)
                            .map_or(Poly::zero(&field, nv), |&(_, u)| Poly::var(&field, nv, u))
                    })
                    .collect()
            })
            .collect()
    };
    let one = Poly::one(&field, nv);
    if let Some(z) = z_src {
        let d = det(&linear(&srcf, &phi_x, n, 0));
        eqs.push(d.mul(&Poly::var(&field, nv, z)).sub(&one), "invertibility of the source linear part".into());
    }
    if let Some(z) = z_tgt {
        let mat = match group {
            Group::L | Group::LR => linear(&tgtf, &phi_y, m, 0),
            Group::KLin => {
                let zero_idx = srcf.shape().index_of(&vec![0; srcf.n_vars()]).expect("constant monomial");
                matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|t| {
                                t.iter()
                                    .find(|(mono, _)| *mono == zero_idx)
                                    .map_or(Poly::zero(&field, nv), |&(_, u)| Poly::var(&field, nv, u))
                            })
                            .collect()
                    })
                    .collect()
            }
            _ => linear(&xy, &contact, m, n),
        };
        eqs.push(det(&mat).mul(&Poly::var(&field, nv, z)).sub(&one), "invertibility of the target linear part".into());
    }

    // ideal preservation Φ(J) ⊆ J
    if moves_source && src.has_ideal() {
        for (gi, g) in src.ideal_gens().iter().enumerate() {
            let img = PolyJet::compose_known(&lift(g, &srcf), &phi_x_jets).map_linear(|v| src.reduce_vec(v));
            eqs.push_coeffs(&srcf, &img, &format!("source ideal preservation, generator {}", gi + 1));
        }
    }
    if !phi_y.is_empty() && tgt.has_ideal() {
        let phi_y_jets: Vec<PolyJet> = phi_y.iter().map(|t| var_jet(&tgtf, t, nv)).collect();
        for (gi, g) in tgt.ideal_gens().iter().enumerate() {
            let img = PolyJet::compose_known(&lift(g, &tgtf), &phi_y_jets).map_linear(|v| tgt.reduce_vec(v));
            eqs.push_coeffs(&tgtf, &img, &format!("target ideal preservation, generator {}", gi + 1));
        }
    }

    // m-adic level conditions
    if let Some(j) = level.filter(|&j| j > 0) {
        let unit = |ring: &JetRing, mono: usize, comp: usize, offset: usize| {
            let e = ring.shape().monomial(mono);
            e.iter().sum::<u32>() == 1 && e[offset + comp] == 1
        };
        let mut pin = |u: usize, target: bool, what: &str| {
            let p = Poly::var(&field, nv, u);
            let p = if target { p.sub(&one) } else { p };
            eqs.push(p, format!("level {j}, {what}"));
        };
        for (comp, t) in phi_x.iter().enumerate() {
            for &(mono, u) in t {
                if srcf.shape().degree(mono) <= j {
                    pin(u, unit(&srcf, mono, comp, 0), &b.names[u]);
                }
            }
        }
        for (comp, t) in phi_y.iter().enumerate() {
            for &(mono, u) in t {
                if tgtf.shape().degree(mono) <= j {
                    pin(u, unit(&tgtf, mono, comp, 0), &b.names[u]);
                }
            }
        }
        for (r, row) in matrix.iter().enumerate() {
            for (c, t) in row.iter().enumerate() {
                for &(mono, u) in t {
                    if srcf.shape().degree(mono) < j {
                        pin(u, r == c && srcf.shape().degree(mono) == 0, &b.names[u]);
                    }
                }
            }
        }
        for (comp, t) in contact.iter().enumerate() {
            for &(mono, u) in t {
                if xy.shape().degree(mono) <= j {
                    pin(u, unit(&xy, mono, comp, n), &b.names[u]);
                }
            }
        }
    }

    Ok(PolySystem {
        field,
        unknowns: b.names,
        equations: eqs.polys,
        provenance: eqs.tags,
        layout: Some(Layout {
            group,
            space: space.clone(),
            roles: b.roles,
        }),
    })
}

impl Layout {
    /// The group element encoded by `point` (one value per unknown, `None`
    /// read as zero), over the top field of `ext`.
    pub fn assemble(&self, ext: &Extension, point: &[Option<FieldElem>]) -> Result<GroupElement, PolyError> {
        let sp = self.space.base_change(ext);
        let (src, tgt) = (sp.source(), sp.target());
        let top = ext.top();
        let (n, m) = (sp.n(), sp.m());
        let xy = sp.contact_ring();
        let value = |u: usize| -> Value {
            point
                .get(u)
                .cloned()
                .flatten()
                .map_or(top.zero_v(), |c| c.into_value())
        };
        let mut sx = vec![vec![top.zero_v(); src.dim()]; n];
        let mut sy = vec![vec![top.zero_v(); tgt.dim()]; m];
        let mut mat = vec![vec![vec![top.zero_v(); src.dim()]; m]; m];
        let mut con = vec![vec![top.zero_v(); xy.dim()]; m];
        let (mut has_x, mut has_y) = (false, false);
        for (u, role) in self.roles.iter().enumerate() {
            match *role {
                Role::Source { comp, mono } => {
                    has_x = true;
                    sx[comp][mono] = value(u);
                }
                Role::Target { comp, mono } => {
                    has_y = true;
                    sy[comp][mono] = value(u);
                }
                Role::Matrix { row, col, mono } => {
                    mat[row][col][mono] = value(u);
                }
                Role::Contact { comp, mono } => {
                    con[comp][mono] = value(u);
                }
                Role::Inverse => {}
            }
        }
        let jets = |ring: &JetRing, v: Vec<Vec<Value>>| -> Vec<Jet> {
            v.into_iter().map(|c| Jet::from_coeffs(ring, c)).collect()
        };
        let right = if has_x { Aut::new(src, jets(src, sx))? } else { Aut::identity(src) };
        let left = if has_y { Aut::new(tgt, jets(tgt, sy))? } else { Aut::identity(tgt) };
        // Each system reads `C(x, f(x)) = f̃(Φ_X(x))`; as an action this is
        // `Φ_X` applied after the fibre part.
        let right_elem = |group: Group| GroupElement::Right(right.clone()).embed(group, &sp);
        Ok(match self.group {
            Group::R => GroupElement::Right(right),
            Group::L => GroupElement::Left(left),
            Group::LR => GroupElement::LeftRight { left, right },
            Group::KLin => {
                let rows = mat.into_iter().map(|r| jets(src, r)).collect();
                let fibre = GroupElement::contact_lin(&sp, JetMatrix::new(src, rows), Aut::identity(src))?;
                right_elem(Group::KLin)?.compose(&fibre)?
            }
            Group::C | Group::K => {
                let fibre = GroupElement::Contact {
                    contact: ContactMap::new(&sp, jets(xy, con))?,
                    right: Aut::identity(src),
                };
                if self.group == Group::C {
                    fibre
                } else {
                    right_elem(Group::K)?.compose(&fibre)?
                }
            }
        })
    }
}
