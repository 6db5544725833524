use serde_json::json;

use super::vectors::{assemble, vector_side, Unit};
use super::{TangentError, TangentVector};
use crate::exactfield::Value;
use crate::germs::{GermError, Group, MapGerm};
use crate::jets::{Filtration, Jet, SubspaceBasis};

/// The vector side of `T_{G^(j)}` together with its image `T_{G^(j)} f`.
#[derive(Debug, Clone)]
pub struct TangentData {
    pub group: Group,
    pub level: u32,
    /// Basis of the vector side.
    pub vectors: Vec<TangentVector>,
    /// `ξ·f` for each vector, as concatenated coefficient vectors.
    pub images: Vec<Vec<Value>>,
    /// Row-reduced span of the images.
    pub space: SubspaceBasis,
}

/// `f^β` for exponent vectors `β` over the components of `f`.
struct Powers {
    table: Vec<Vec<Jet>>,
}

impl Powers {
    fn new(f: &MapGerm) -> Powers {
        let ring = f.space().source();
        let top = ring.order() as usize;
        let table = f
            .comps()
            .iter()
            .map(|c| {
                let mut p = vec![ring.one()];
                for e in 1..=top {
                    let next = &p[e - 1] * c;
                    p.push(next);
                }
                p
            })
            .collect();
        Powers { table }
    }

    /// Exponents beyond the jet order give 0.
    fn get(&self, beta: &[u32], one: &Jet) -> Jet {
        let mut acc = one.clone();
        for (k, &b) in beta.iter().enumerate() {
            if b == 0 {
                continue;
            }
            match self.table[k].get(b as usize) {
                Some(p) => acc = &acc * p,
                None => return one.ring().zero(),
            }
        }
        acc
    }
}

fn unit_image(u: Unit, f: &MapGerm, pw: &Powers) -> Vec<Jet> {
    let sp = f.space();
    let src = sp.source();
    let one = src.one();
    let m = sp.m();
    let mono = |e: &[u32]| src.monomial(e, &src.field().one());
    let single = |k: usize, j: Jet| -> Vec<Jet> {
        (0..m).map(|c| if c == k { j.clone() } else { src.zero() }).collect()
    };
    match u {
        Unit::Right(i, a) => {
            let xa = mono(src.shape().monomial(a));
            f.comps().iter().map(|c| -&(&xa * &c.derivative(i))).collect()
        }
        Unit::Left(k, b) => single(k, pw.get(sp.target().shape().monomial(b), &one)),
        Unit::Contact(k, a) => {
            let n = sp.n();
            let e = sp.contact_ring().shape().monomial(a);
            let mut xe = e[..n].to_vec();
            xe.extend_from_slice(&e[n + m..]);
            single(k, &mono(&xe) * &pw.get(&e[n..n + m], &one))
        }
        Unit::Matrix(k, l, a) => single(k, &mono(src.shape().monomial(a)) * &f.comps()[l]),
    }
}

fn flatten(v: &[Jet]) -> Vec<Value> {
    v.iter().flat_map(|j| j.coeffs().iter().cloned()).collect()
}

/// `T_{G^(j)} f` with its vector side; `j = 0` gives the unfiltered `T_G f`.
pub fn tangent_data(group: Group, f: &MapGerm, j: u32, filt: &Filtration) -> Result<TangentData, TangentError> {
    let sp = f.space();
    if filt.ring() != sp.source() {
        return Err(TangentError::Precondition(
            "filtration is not on the source ring".into(),
        ));
    }
    if group == Group::KLin && sp.target().has_ideal() {
        return Err(GermError::SingularTarget.into());
    }
    let field = sp.field();
    let (units, sols) = vector_side(group, sp, filt, j);
    let pw = Powers::new(f);
    let unit_images: Vec<Vec<Value>> = units.iter().map(|&u| flatten(&unit_image(u, f, &pw))).collect();
    let len = sp.m() * sp.source().dim();
    let images: Vec<Vec<Value>> = sols
        .iter()
        .map(|s| {
            let mut acc = vec![field.zero_v(); len];
            for (c, img) in s.iter().zip(&unit_images) {
                if field.is_zero_v(c) {
                    continue;
                }
                for (a, x) in acc.iter_mut().zip(img) {
                    if !field.is_zero_v(x) {
                        *a = field.add_v(a, &field.mul_v(c, x));
                    }
                }
            }
            acc
        })
        .collect();
    let vectors = sols.iter().map(|s| assemble(group, sp, &units, s)).collect();
    let space = SubspaceBasis::from_vectors(field, len, images.iter().cloned());
    Ok(TangentData {
        group,
        level: j,
        vectors,
        images,
        space,
    })
}

/// Row-reduced basis of `T_{G^(j)} f` in the concatenated coefficient space.
pub fn tangent_space(group: Group, f: &MapGerm, j: u32, filt: &Filtration) -> Result<SubspaceBasis, TangentError> {
    Ok(tangent_data(group, f, j, filt)?.space)
}

/// `M^d = (Λ^d + J)^{⊕m}` in the concatenated coefficient space.
pub(crate) fn module_level(filt: &Filtration, m: usize, d: u32) -> SubspaceBasis {
    let ring = filt.ring();
    let f = ring.field();
    let dim = ring.dim();
    let mut gens: Vec<Vec<Value>> = ring.ideal_span().rows().to_vec();
    gens.extend(filt.level_monomials(d).into_iter().map(|i| ring.basis_vector(i)));
    let vecs = (0..m).flat_map(|k| {
        gens.iter().map(move |g| {
            let mut v = vec![f.zero_v(); m * dim];
            v[k * dim..(k + 1) * dim].clone_from_slice(g);
            v
        })
    });
    SubspaceBasis::from_vectors(f, m * dim, vecs.collect::<Vec<_>>())
}

/// Jet-level Artin–Rees bound: the least `d` with
/// `T_G f ∩ M^d ⊆ T_{G^(j)} f`, verified up to the jet order.
#[derive(Debug, Clone)]
pub struct ArtinRees {
    pub bound: Option<u32>,
    /// `T_G f ∩ M^d` at the bound (at the top level when none was found).
    pub intersection: SubspaceBasis,
    pub filtered: SubspaceBasis,
    pub verified_up_to: u32,
}

impl ArtinRees {
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.filtered.field().clone();
        let rows = |b: &SubspaceBasis| -> Vec<Vec<String>> {
            b.rows()
                .iter()
                .map(|r| r.iter().map(|x| f.format_value(x)).collect())
                .collect()
        };
        json!({
            "bound": self.bound,
            "verified_up_to_jet_order": self.verified_up_to,
            "intersection": rows(&self.intersection),
            "filtered": rows(&self.filtered),
        })
    }
}

pub fn artin_rees_bound(group: Group, f: &MapGerm, j: u32, filt: &Filtration) -> Result<ArtinRees, TangentError> {
    let m = f.space().m();
    if group == Group::LR && f.order(filt).finite() == Some(0) {
        return Err(TangentError::Precondition(
            "f must lie in the first filtration level".into(),
        ));
    }
    let full = tangent_space(group, f, 0, filt)?;
    let filtered = tangent_space(group, f, j, filt)?;
    let top = filt.max_order() + 1;
    let mut last = full.clone();
    for d in 1..=top {
        let inter = full.intersection(&module_level(filt, m, d));
        if inter.is_subspace_of(&filtered) {
            return Ok(ArtinRees {
                bound: Some(d),
                intersection: inter,
                filtered,
                verified_up_to: f.space().order(),
            });
        }
        last = inter;
    }
    Ok(ArtinRees {
        bound: None,
        intersection: last,
        filtered,
        verified_up_to: f.space().order(),
    })
}
