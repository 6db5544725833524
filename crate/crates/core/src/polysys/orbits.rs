//! Orbit censuses by enumerating jet groups over finite fields.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::json;

use super::PolyError;
use crate::exactfield::{Extension, Field, FieldElem, Value};
use crate::germs::{invert_scalar, Group, JetMatrix, MapGerm, MapSpace};
use crate::jets::{Jet, JetRing};

/// Default bound on the number of jet-group elements enumerated.
pub const DEFAULT_GROUP_CAP: u64 = 10_000_000;

/// The `k`-orbits inside `G_K f ∩ (k-maps)`.
#[derive(Debug, Clone)]
pub struct OrbitCensus {
    pub group: Group,
    pub order: u32,
    pub base: Field,
    pub top: Field,
    /// Smallest member of each `k`-orbit, in canonical order.
    pub representatives: Vec<MapGerm>,
    pub sizes: Vec<usize>,
    /// `|G_K f|` counted over `K`.
    pub top_orbit_size: usize,
    /// `|G_K f ∩ (k-maps)|`.
    pub rational_count: usize,
}

impl OrbitCensus {
    pub fn to_json(&self) -> serde_json::Value {
        let reps: Vec<serde_json::Value> = self
            .representatives
            .iter()
            .zip(&self.sizes)
            .map(|(r, s)| json!({"map": r.to_string(), "size": s}))
            .collect();
        json!({
            "group": self.group.to_string(),
            "jet": self.order,
            "base": self.base.to_string(),
            "top": self.top.to_string(),
            "orbits": reps,
            "top_orbit_size": self.top_orbit_size,
            "rational_count": self.rational_count,
        })
    }
}

/// Free coordinates of a jet-group element: which ring each coordinate
/// belongs to and the monomial it multiplies.
struct Coords {
    space: MapSpace,
    group: Group,
    /// (component, monomial) per coordinate of `Φ_X`, then `Φ_Y`, then `M`.
    src: Vec<(usize, usize)>,
    tgt: Vec<(usize, usize)>,
    mat: Vec<(usize, usize, usize)>,
}

impl Coords {
    fn new(space: &MapSpace, group: Group) -> Coords {
        let (src, tgt) = (space.source(), space.target());
        let monos = |ring: &JetRing, lo: u32, hi: u32| -> Vec<usize> {
            (0..ring.dim()).filter(|&i| (lo..=hi).contains(&ring.shape().degree(i))).collect()
        };
        let big_n = space.order();
        let mut c = Coords {
            space: space.clone(),
            group,
            src: Vec::new(),
            tgt: Vec::new(),
            mat: Vec::new(),
        };
        if matches!(group, Group::R | Group::LR | Group::KLin) {
            for i in 0..space.n() {
                c.src.extend(monos(src, 1, big_n).into_iter().map(|k| (i, k)));
            }
        }
        if matches!(group, Group::L | Group::LR) {
            for i in 0..space.m() {
                c.tgt.extend(monos(tgt, 1, big_n).into_iter().map(|k| (i, k)));
            }
        }
        if group == Group::KLin {
            for r in 0..space.m() {
                for col in 0..space.m() {
                    c.mat.extend(monos(src, 0, big_n.saturating_sub(1)).into_iter().map(|k| (r, col, k)));
                }
            }
        }
        c
    }

    fn len(&self) -> usize {
        self.src.len() + self.tgt.len() + self.mat.len()
    }

    /// `g·f` up to reparametrising the group by inversion: `f∘Φ_X`,
    /// `Φ_Y∘f`, `M·(f∘Φ_X)`. `None` when the linear parts are singular.
    fn act(&self, f: &MapGerm, point: &[FieldElem]) -> Option<Vec<Value>> {
        let (src, tgt) = (self.space.source(), self.space.target());
        let field = src.field();
        let (n, m) = (self.space.n(), self.space.m());
        let mut it = point.iter();
        let mut fill = |ring: &JetRing, slots: &[(usize, usize)], count: usize| -> Vec<Jet> {
            let mut c = vec![vec![field.zero_v(); ring.dim()]; count];
            for &(i, k) in slots {
                c[i][k] = it.next().expect("coordinate").value().clone();
            }
            c.into_iter().map(|v| Jet::from_coeffs(ring, v)).collect()
        };
        let phi_x = (!self.src.is_empty()).then(|| fill(src, &self.src, n));
        let phi_y = (!self.tgt.is_empty()).then(|| fill(tgt, &self.tgt, m));
        let linear_ok = |ring: &JetRing, comps: &[Jet]| {
            let a: Vec<Vec<FieldElem>> = comps
                .iter()
                .map(|c| (0..comps.len()).map(|v| c.coeff(&unit(ring, v))).collect())
                .collect();
            invert_scalar(field, &a).is_some()
        };
        let mut g: Vec<Jet> = f.comps().to_vec();
        if let Some(phi) = &phi_x {
            if !linear_ok(src, phi) {
                return None;
            }
            g = g.iter().map(|c| c.substitute(phi).expect("same ring")).collect();
        }
        if let Some(phi) = &phi_y {
            if !linear_ok(tgt, phi) {
                return None;
            }
            g = phi.iter().map(|c| c.substitute(&g).expect("components in the maximal ideal")).collect();
        }
        if self.group == Group::KLin {
            let mut entries = vec![vec![vec![field.zero_v(); src.dim()]; m]; m];
            for &(r, col, k) in &self.mat {
                entries[r][col][k] = it.next().expect("coordinate").value().clone();
            }
            let rows: Vec<Vec<Jet>> = entries
                .into_iter()
                .map(|r| r.into_iter().map(|v| Jet::from_coeffs(src, v)).collect())
                .collect();
            let mat = JetMatrix::new(src, rows);
            invert_scalar(field, &mat.constant_part())?;
            g = mat.apply(&g);
        }
        Some(g.iter().flat_map(|c| c.coeffs().iter().cloned()).collect())
    }
}

fn unit(ring: &JetRing, v: usize) -> Vec<u32> {
    let mut e = vec![0; ring.n_vars()];
    e[v] = 1;
    e
}

/// `G f` as a set of coefficient vectors, by enumerating the jet group over
/// the field of `f`.
fn orbit(f: &MapGerm, group: Group, cap: u64) -> Result<BTreeSet<Vec<Value>>, PolyError> {
    let space = f.space();
    let field = space.field();
    let elems = field
        .elements()
        .ok_or_else(|| PolyError::Precondition(format!("{field} is not finite")))?;
    let coords = Coords::new(space, group);
    let q = elems.len() as u64;
    let total = (q as f64).powi(coords.len() as i32);
    if total > cap as f64 {
        return Err(PolyError::CapExceeded {
            size: format!("{q}^{}", coords.len()),
            cap,
        });
    }
    let total = q.pow(coords.len() as u32);
    let chunks: Vec<BTreeSet<Vec<Value>>> = (0..total)
        .into_par_iter()
        .fold(BTreeSet::new, |mut acc, idx| {
            let mut rest = idx;
            let point: Vec<FieldElem> = (0..coords.len())
                .map(|_| {
                    let d = (rest % q) as usize;
                    rest /= q;
                    elems[d].clone()
                })
                .collect();
            if let Some(v) = coords.act(f, &point) {
                acc.insert(v);
            }
            acc
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn germ_from(space: &MapSpace, v: &[Value]) -> MapGerm {
    let d = space.source().dim();
    let comps = v.chunks(d).map(|c| Jet::from_coeffs(space.source(), c.to_vec())).collect();
    MapGerm::new(space, comps).expect("orbit members are maps")
}

/// Splits `G_K f ∩ (k-maps)` into `k`-orbits. `f` lives over the finite
/// field `k = ext.base()`; the group is enumerated over `K = ext.top()`
/// and then over `k`. Only R, L, LR and K_lin on spaces without ideals are
/// enumerated.
pub fn orbit_split(f: &MapGerm, group: Group, ext: &Extension, cap: u64) -> Result<OrbitCensus, PolyError> {
    if !matches!(group, Group::R | Group::L | Group::LR | Group::KLin) {
        return Err(PolyError::Unsupported(format!("orbit census for {group}")));
    }
    let space = f.space();
    if space.source().has_ideal() || space.target().has_ideal() || space.has_params() {
        return Err(PolyError::Unsupported("orbit census on spaces with ideals or parameters".into()));
    }
    if space.field() != ext.base() || !ext.top().is_finite() {
        return Err(PolyError::Precondition("f must live over the finite base of the extension".into()));
    }
    let space_k = space.base_change(ext);
    let f_k = f.base_change(ext, &space_k);
    let big = orbit(&f_k, group, cap)?;
    let mut rational: BTreeSet<Vec<Value>> = big
        .iter()
        .filter_map(|v| germ_from(&space_k, v).descend(ext, space))
        .map(|g| g.to_vector())
        .collect();
    let rational_count = rational.len();
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    while let Some(first) = rational.pop_first() {
        let rep = germ_from(space, &first);
        let small = orbit(&rep, group, cap)?;
        for v in &small {
            if v != &first && !rational.remove(v) {
                return Err(PolyError::Precondition(
                    "k-orbit leaves the rational part of the K-orbit; enumeration is inconsistent".into(),
                ));
            }
        }
        representatives.push(rep);
        sizes.push(small.len());
    }
    Ok(OrbitCensus {
        group,
        order: space.order(),
        base: ext.base().clone(),
        top: ext.top().clone(),
        representatives,
        sizes,
        top_orbit_size: big.len(),
        rational_count,
    })
}
