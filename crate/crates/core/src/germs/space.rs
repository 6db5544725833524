use std::sync::{Arc, OnceLock};

use super::GermError;
use crate::exactfield::{Extension, Field};
use crate::jets::{Jet, JetRing};

/// The jet ring of a scheme-germ `V(J) ⊂ (k^n, 0)`; the ideal generators
/// must vanish at the origin.
pub fn germ_space(
    field: &Field,
    vars: &[&str],
    order: u32,
    ideal: &[&str],
) -> Result<JetRing, GermError> {
    let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    family_space(field, &vars, &[], order, 0, ideal)
}

/// Like [`germ_space`] with parameters truncated at `t^{s+1}`.
pub fn family_space(
    field: &Field,
    vars: &[String],
    params: &[String],
    order: u32,
    param_order: u32,
    ideal: &[&str],
) -> Result<JetRing, GermError> {
    let free = JetRing::with_params(field, vars, params, order, param_order);
    let gens = ideal
        .iter()
        .map(|s| free.parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    with_ideal(&free, &gens)
}

pub fn with_ideal(free: &JetRing, gens: &[Jet]) -> Result<JetRing, GermError> {
    for (i, g) in gens.iter().enumerate() {
        if !g.constant_term().is_zero() {
            return Err(GermError::IdealNotAtOrigin(i));
        }
    }
    if gens.is_empty() {
        return Ok(free.clone());
    }
    Ok(free.with_ideal(gens)?)
}

/// Source and target of map-germs `(X, 0) → (Y, 0)` at a common jet order,
/// with the ring in `(x, y)` used by the contact group built lazily.
#[derive(Clone)]
pub struct MapSpace(Arc<Inner>);

struct Inner {
    source: JetRing,
    target: JetRing,
    xy: OnceLock<JetRing>,
}

impl PartialEq for MapSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.source == other.0.source && self.0.target == other.0.target)
    }
}
impl Eq for MapSpace {}

impl std::fmt::Debug for MapSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MapSpace({:?} -> {:?})", self.0.source, self.0.target)
    }
}

impl MapSpace {
    pub fn new(source: &JetRing, target: &JetRing) -> Result<MapSpace, GermError> {
        if source.field() != target.field() {
            return Err(GermError::SpaceMismatch("source and target fields differ".into()));
        }
        if !target.param_vars().is_empty() {
            return Err(GermError::SpaceMismatch("target cannot carry parameters".into()));
        }
        if source.order() != target.order() {
            return Err(GermError::SpaceMismatch(format!(
                "jet orders differ: source {}, target {}",
                source.order(),
                target.order()
            )));
        }
        let clash = target.vars().iter().any(|v| source.var_index(v).is_some());
        if clash {
            return Err(GermError::SpaceMismatch(
                "source and target variable names must differ".into(),
            ));
        }
        Ok(MapSpace(Arc::new(Inner {
            source: source.clone(),
            target: target.clone(),
            xy: OnceLock::new(),
        })))
    }

    pub fn source(&self) -> &JetRing {
        &self.0.source
    }

    pub fn target(&self) -> &JetRing {
        &self.0.target
    }

    pub fn field(&self) -> &Field {
        self.0.source.field()
    }

    pub fn order(&self) -> u32 {
        self.0.source.order()
    }

    /// Number of source variables (parameters excluded).
    pub fn n(&self) -> usize {
        self.0.source.main_vars().len()
    }

    /// Number of target variables.
    pub fn m(&self) -> usize {
        self.0.target.n_vars()
    }

    pub fn has_params(&self) -> bool {
        !self.0.source.param_vars().is_empty()
    }

    /// `k[[x, y]]/(J_X + J_Y)` truncated at total `(x, y)`-degree `N`,
    /// with the source parameters. Variable order: x, y, t.
    pub fn contact_ring(&self) -> &JetRing {
        self.0.xy.get_or_init(|| {
            let s = &self.0.source;
            let t = &self.0.target;
            let vars: Vec<String> = s.main_vars().iter().chain(t.vars()).cloned().collect();
            let free = JetRing::with_params(
                s.field(),
                &vars,
                s.param_vars(),
                s.order(),
                s.param_order(),
            );
            let mut gens = Vec::new();
            for g in s.ideal_gens() {
                gens.push(rename(&g, &free, &self.x_positions()));
            }
            for g in t.ideal_gens() {
                gens.push(rename(&g, &free, &self.y_positions()));
            }
            if gens.is_empty() {
                free
            } else {
                free.with_ideal(&gens).expect("same shape")
            }
        })
    }

    /// Positions of the source variables (x then t) inside the contact ring.
    fn x_positions(&self) -> Vec<usize> {
        let n = self.n();
        let m = self.m();
        let np = self.0.source.param_vars().len();
        (0..n).chain((0..np).map(|i| n + m + i)).collect()
    }

    fn y_positions(&self) -> Vec<usize> {
        let n = self.n();
        (n..n + self.m()).collect()
    }

    /// A source jet viewed in the contact ring.
    pub fn embed_x(&self, j: &Jet) -> Jet {
        rename(j, self.contact_ring(), &self.x_positions())
    }

    /// A target jet viewed in the contact ring.
    pub fn embed_y(&self, j: &Jet) -> Jet {
        rename(j, self.contact_ring(), &self.y_positions())
    }

    /// Contact-ring variables `x_i` (source main variables).
    pub fn xy_x(&self, i: usize) -> Jet {
        self.contact_ring().var(i)
    }

    pub fn xy_y(&self, i: usize) -> Jet {
        self.contact_ring().var(self.n() + i)
    }

    /// Same spaces over the extension field.
    pub fn base_change(&self, ext: &Extension) -> MapSpace {
        MapSpace::new(&self.0.source.base_change(ext), &self.0.target.base_change(ext))
            .expect("base change preserves validity")
    }

    /// Arguments that substitute `x ↦ args` and keep parameters fixed.
    pub fn source_args(&self, x_args: &[Jet]) -> Vec<Jet> {
        let s = &self.0.source;
        let n = self.n();
        let mut out = x_args.to_vec();
        out.extend((0..s.param_vars().len()).map(|i| s.var(n + i)));
        out
    }

    pub fn identity_x(&self) -> Vec<Jet> {
        (0..self.n()).map(|i| self.0.source.var(i)).collect()
    }

    pub fn identity_y(&self) -> Vec<Jet> {
        (0..self.m()).map(|i| self.0.target.var(i)).collect()
    }
}

/// Copies coefficients of `j` into `ring`, sending variable `i` of `j`'s
/// ring to variable `pos[i]`. Terms that do not fit are dropped.
pub fn rename(j: &Jet, ring: &JetRing, pos: &[usize]) -> Jet {
    let f = ring.field();
    let src = j.ring().shape();
    let mut out = vec![f.zero_v(); ring.dim()];
    for i in j.support() {
        let mut e = vec![0u32; ring.n_vars()];
        for (k, &x) in src.monomial(i).iter().enumerate() {
            e[pos[k]] += x;
        }
        if let Some(idx) = ring.shape().index_of(&e) {
            out[idx] = j.coeffs()[i].clone();
        }
    }
    Jet::from_coeffs(ring, out)
}
