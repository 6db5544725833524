//! Descent of filtered equivalences from a field extension `K ⊃ k` to `k`
//! in characteristic zero, by peeling tangent vectors off the residual one
//! order at a time.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::exactfield::{Extension, Value};
use crate::germs::{group_level, params_to_zero, GermError, Group, GroupElement, MapGerm};
use crate::jets::{kernel, Filtration, FiltrationSpec, LinearSolver, Order};
use crate::tangent::{exp_vf, module_level, tangent_data, TangentData, TangentError, TangentVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("descent needs characteristic zero")]
    PositiveCharacteristic,
    #[error("witness invalid: {0}")]
    WitnessInvalid(String),
    /// The witness does not carry `f` to `f̃`; `at` names the first differing coefficient.
    #[error("witness action mismatch at coefficient {at}")]
    ActionMismatch { at: String },
    #[error("witness has level {got}, need at least {need}")]
    WitnessLevel { got: u32, need: u32 },
    #[error("jet-level obstruction at iteration {iteration}: residual {residual} is not reached by the filtered tangent space")]
    Obstruction { iteration: usize, residual: String },
    #[error("peeling did not terminate")]
    NoConvergence,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Tangent(#[from] TangentError),
    #[error(transparent)]
    Germ(#[from] GermError),
}

/// Given `f`, `f̃` over `k` and a witness over `K` in `G^(j)_K` moving `f`
/// to `f̃`, find such an element over `k`.
#[derive(Debug, Clone)]
pub struct DescentProblem {
    pub f: MapGerm,
    pub f_tilde: MapGerm,
    pub ext: Extension,
    pub witness: GroupElement,
    pub group: Group,
    pub level: u32,
    pub filt: Filtration,
}

/// One peeling step: `ξ` was removed from the residual of order
/// `ord(f) + d`, leaving `residual_order`.
#[derive(Debug, Clone)]
pub struct PeelStep {
    pub iteration: usize,
    pub d: u32,
    pub xi: TangentVector,
    pub residual_order: Order,
}

#[derive(Debug, Clone)]
pub struct DescentCertificate {
    pub element: GroupElement,
    pub log: Vec<PeelStep>,
}

impl DescentCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let log: Vec<serde_json::Value> = self
            .log
            .iter()
            .map(|s| {
                json!({
                    "iteration": s.iteration,
                    "d": s.d,
                    "xi": s.xi.to_json(),
                    "residual_order": s.residual_order.to_string(),
                })
            })
            .collect();
        json!({"witness": self.element.to_json(), "peeling_log": log, "verified": true})
    }
}

/// Outcome of [`verify_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub level: u32,
    /// First coefficient where `g·f` and `f̃` differ.
    pub mismatch: Option<String>,
}

/// Whether `g·f = f̃` at jet level and `g` has level at least `j`.
pub fn verify_witness(g: &GroupElement, f: &MapGerm, f_tilde: &MapGerm, j: u32, filt: &Filtration) -> Verification {
    let level = group_level(g, filt);
    let mismatch = match g.act(f) {
        Err(e) => Some(e.to_string()),
        Ok(moved) => first_difference(&moved, f_tilde),
    };
    Verification {
        ok: mismatch.is_none() && level >= j,
        level,
        mismatch,
    }
}

fn first_difference(a: &MapGerm, b: &MapGerm) -> Option<String> {
    let ring = a.space().source();
    for (k, (x, y)) in a.comps().iter().zip(b.comps()).enumerate() {
        let d = x - y;
        let first = d.support().next();
        if let Some(i) = first {
            return Some(format!(
                "{} of component {k}: got {}, expected {}",
                ring.shape().format(i),
                x.coeff_at(i),
                y.coeff_at(i)
            ));
        }
    }
    None
}

fn format_tuple(v: &[crate::jets::Jet]) -> String {
    let parts: Vec<String> = v.iter().map(|j| j.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn flatten(v: &[crate::jets::Jet]) -> Vec<Value> {
    v.iter().flat_map(|j| j.coeffs().iter().cloned()).collect()
}

/// Filtered tangent data of `f`, computed once per level.
struct Levels<'a> {
    group: Group,
    f: &'a MapGerm,
    filt: &'a Filtration,
    cache: BTreeMap<u32, TangentData>,
}

impl<'a> Levels<'a> {
    fn new(group: Group, f: &'a MapGerm, filt: &'a Filtration) -> Self {
        Levels {
            group,
            f,
            filt,
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, level: u32) -> Result<&TangentData, TangentError> {
        if !self.cache.contains_key(&level) {
            let data = tangent_data(self.group, self.f, level, self.filt)?;
            self.cache.insert(level, data);
        }
        Ok(&self.cache[&level])
    }
}

/// `ξ` in the span of `data.vectors` with `ξ·f ≡ v` modulo `M^e`.
fn solve_step(data: &TangentData, filt: &Filtration, m: usize, e: u32, v: &[Value]) -> Option<TangentVector> {
    let field = filt.ring().field();
    let mut columns = data.images.clone();
    columns.extend(module_level(filt, m, e).rows().iter().cloned());
    let sol = LinearSolver::new(field, v.len(), &columns).solve(v)?;
    data.vectors
        .iter()
        .zip(&sol)
        .filter(|(_, c)| !field.is_zero_v(c))
        .map(|(vec, c)| vec.scale(&field.elem(c.clone())))
        .reduce(|a, b| a.add(&b))
}

/// Finds `g ∈ G^(j)` over the field of `f` with `g·f = target` by peeling.
/// A residual of order `ord(f) + d` is matched first within `T_{G^(d)} f`,
/// so the peeled vectors gain level as `d` grows, and only then within
/// `T_{G^(j)} f`. Either way the next residual has order `≥ ord(f) + d + j`.
fn peel(
    levels: &mut Levels,
    j: u32,
    target: &MapGerm,
) -> Result<(GroupElement, Vec<PeelStep>), DescentError> {
    let (f, filt, group) = (levels.f, levels.filt, levels.group);
    let sp = f.space();
    let field = sp.field();
    let m = sp.m();
    let ord_f = f.order(filt).finite().unwrap_or(filt.max_order() + 1);
    let mut cur = target.clone();
    let mut acc = GroupElement::identity(group, sp);
    let mut log = Vec::new();
    for iteration in 0..(filt.max_order() as usize + 3) {
        if cur == *f {
            return Ok((acc.inverse(), log));
        }
        let diff = cur.diff(f);
        let v = flatten(&diff);
        let ov = filt.order_of(&diff).finite().expect("nonzero residual");
        let d = ov.saturating_sub(ord_f);
        let e = ord_f + d + j;
        let mut xi = None;
        for level in [d.max(j), j] {
            xi = solve_step(levels.get(level)?, filt, m, e, &v);
            if xi.is_some() {
                break;
            }
        }
        let Some(xi) = xi else {
            return Err(DescentError::Obstruction {
                iteration,
                residual: format_tuple(&diff),
            });
        };
        let step = exp_vf(&xi.scale(&-field.one()), sp)?;
        cur = step.act(&cur)?;
        acc = step.compose(&acc)?;
        log.push(PeelStep {
            iteration,
            d,
            xi,
            residual_order: filt.order_of(&cur.diff(f)),
        });
    }
    Err(DescentError::NoConvergence)
}

fn check_char(f: &MapGerm) -> Result<(), DescentError> {
    if f.space().field().characteristic() == 0 {
        Ok(())
    } else {
        Err(DescentError::PositiveCharacteristic)
    }
}

/// Descends a `K`-equivalence to a `k`-equivalence.
pub fn descend(p: &DescentProblem) -> Result<DescentCertificate, DescentError> {
    check_char(&p.f)?;
    if p.level == 0 {
        return Err(DescentError::Precondition("level must be at least 1".into()));
    }
    if p.f.space() != p.f_tilde.space() || p.filt.ring() != p.f.space().source() {
        return Err(DescentError::Precondition("f, f̃ and the filtration must share the source".into()));
    }
    let sp_k = p.f.space().base_change(&p.ext);
    let f_k = p.f.base_change(&p.ext, &sp_k);
    let ft_k = p.f_tilde.base_change(&p.ext, &sp_k);
    let filt_k = p.filt.on_ring(sp_k.source());
    let w = p
        .witness
        .embed(p.group, &sp_k)
        .map_err(|e| DescentError::WitnessInvalid(e.to_string()))?;
    match w.act(&f_k) {
        Ok(moved) if moved == ft_k => {}
        Ok(moved) => {
            let at = first_difference(&moved, &ft_k).unwrap_or_default();
            return Err(DescentError::ActionMismatch { at });
        }
        Err(e) => return Err(DescentError::WitnessInvalid(e.to_string())),
    }
    let got = group_level(&w, &filt_k);
    if got < p.level {
        return Err(DescentError::WitnessLevel { got, need: p.level });
    }
    let mut levels = Levels::new(p.group, &p.f, &p.filt);
    let (element, log) = peel(&mut levels, p.level, &p.f_tilde)?;
    let v = verify_witness(&element, &p.f, &p.f_tilde, p.level, &p.filt);
    if !v.ok {
        return Err(DescentError::WitnessInvalid(format!(
            "internal: descended element failed verification ({v:?})"
        )));
    }
    Ok(DescentCertificate { element, log })
}

/// A random element `s` of `G^(j)` with `s·f = f`: the exponential of a
/// random first-order stabilizer direction, corrected by peeling. Falls back
/// to the identity when no correction is found.
pub fn stabilizer_sample(
    f: &MapGerm,
    group: Group,
    j: u32,
    filt: &Filtration,
    seed: u64,
) -> Result<GroupElement, DescentError> {
    check_char(f)?;
    let sp = f.space();
    let field = sp.field();
    let j = j.max(1);
    let mut levels = Levels::new(group, f, filt);
    let data = levels.get(j)?.clone();
    let len = sp.m() * sp.source().dim();
    let ker = kernel(field, len, &data.images);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let xi = ker
            .rows()
            .iter()
            .map(|row| {
                let c = field.random(&mut rng, 3);
                row.iter()
                    .zip(&data.vectors)
                    .filter(|(x, _)| !field.is_zero_v(x))
                    .map(|(x, v)| v.scale(&(&field.elem(x.clone()) * &c)))
                    .fold(None::<TangentVector>, |a, t| Some(a.map_or(t.clone(), |a| a.add(&t))))
            })
            .fold(None::<TangentVector>, |a, t| match (a, t) {
                (None, t) => t,
                (a, None) => a,
                (Some(a), Some(t)) => Some(a.add(&t)),
            });
        let Some(xi) = xi else { break };
        let g0 = exp_vf(&xi, sp)?;
        let f1 = g0.act(f)?;
        let s = if f1 == *f {
            g0
        } else {
            match peel(&mut levels, j, &f1) {
                Ok((h, _)) => h.inverse().compose(&g0)?,
                Err(DescentError::Obstruction { .. }) | Err(DescentError::NoConvergence) => continue,
                Err(e) => return Err(e),
            }
        };
        if verify_witness(&s, f, f, j, filt).ok {
            return Ok(s);
        }
    }
    Ok(GroupElement::identity(group, sp))
}

/// Trivializes a family `f_t` over `k` given a `K`-trivialization
/// `g_K·f_t = f_0`, using the `(t)`-adic filtration at level 1.
pub fn family_trivialize(f_t: &MapGerm, ext: &Extension, witness: &GroupElement) -> Result<DescentCertificate, DescentError> {
    check_char(f_t)?;
    let sp = f_t.space();
    if !sp.has_params() {
        return Err(DescentError::Precondition("the source carries no parameters".into()));
    }
    let f0 = MapGerm::new(sp, f_t.comps().iter().map(params_to_zero).collect())?;
    let sp_k = sp.base_change(ext);
    let ft_k = f_t.base_change(ext, &sp_k);
    let f0_k = f0.base_change(ext, &sp_k);
    match witness.act(&ft_k) {
        Ok(moved) if moved == f0_k => {}
        Ok(_) => return Err(DescentError::WitnessInvalid("g·f_t ≠ f_0".into())),
        Err(e) => return Err(DescentError::WitnessInvalid(e.to_string())),
    }
    // (g|_{t=0})^{-1} ∘ g fixes f_0 at t = 0 and is the identity there
    let normalized = witness.at_params_zero()?.inverse().compose(witness)?;
    let filt = Filtration::new(sp.source(), FiltrationSpec::TAdic)
        .map_err(|e| DescentError::Precondition(e.to_string()))?;
    descend(&DescentProblem {
        f: f_t.clone(),
        f_tilde: f0,
        ext: ext.clone(),
        witness: normalized,
        group: witness.group(),
        level: 1,
        filt,
    })
}

#[cfg(test)]
mod tests;
