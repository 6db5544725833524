//! Exhaustive solving over small finite fields by backtracking on
//! addition/multiplication tables.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::json;

use super::{PolyError, PolySystem};
use crate::exactfield::{Extension, Field, FieldElem, Value};

/// Default bound on `|field|^(constrained unknowns)`.
pub const DEFAULT_SEARCH_CAP: u64 = 100_000_000;

/// Fields above this size are not tabulated.
const TABLE_LIMIT: u64 = 1024;

/// One solution; unknowns that occur in no equation are `None` (free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub values: Vec<Option<FieldElem>>,
}

impl Solution {
    pub fn to_json(&self, names: &[String]) -> serde_json::Value {
        let m: serde_json::Map<String, serde_json::Value> = names
            .iter()
            .zip(&self.values)
            .filter_map(|(n, v)| v.as_ref().map(|v| (n.clone(), json!(v.to_string()))))
            .collect();
        serde_json::Value::Object(m)
    }
}

struct Tables {
    elems: Vec<FieldElem>,
    add: Vec<u32>,
    mul: Vec<u32>,
    q: usize,
}

impl Tables {
    fn new(field: &Field) -> Tables {
        let elems = field.elements().expect("finite field");
        let q = elems.len();
        let index: HashMap<&Value, u32> = elems.iter().enumerate().map(|(i, e)| (e.value(), i as u32)).collect();
        let rows: Vec<(Vec<u32>, Vec<u32>)> = (0..q)
            .into_par_iter()
            .map(|a| {
                let x = elems[a].value();
                let adds = elems.iter().map(|y| index[&field.add_v(x, y.value())]).collect();
                let muls = elems.iter().map(|y| index[&field.mul_v(x, y.value())]).collect();
                (adds, muls)
            })
            .collect();
        let (mut add, mut mul) = (Vec::with_capacity(q * q), Vec::with_capacity(q * q));
        for (a, m) in rows {
            add.extend(a);
            mul.extend(m);
        }
        Tables { elems, add, mul, q }
    }

    fn index_of(&self, v: &Value) -> u32 {
        self.elems.iter().position(|e| e.value() == v).expect("element of the field") as u32
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }
}

/// An equation over table indices: terms `(coefficient, [(slot, exponent)])`.
struct Compiled {
    terms: Vec<(u32, Vec<(usize, u32)>)>,
    /// Depth after which all its unknowns are assigned.
    ready: usize,
}

impl Compiled {
    fn eval(&self, t: &Tables, point: &[u32]) -> u32 {
        let zero = 0;
        let mut acc = zero;
        for (c, vars) in &self.terms {
            let mut v = *c;
            for &(slot, e) in vars {
                for _ in 0..e {
                    v = t.mul(v, point[slot]);
                }
            }
            acc = t.add(acc, v);
        }
        acc
    }
}

struct Search<'a> {
    t: &'a Tables,
    eqs: Vec<Compiled>,
    slots: usize,
}

impl Search<'_> {
    fn dfs(&self, point: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let depth = point.len();
        if depth == self.slots {
            out.push(point.clone());
            return;
        }
        for v in 0..self.t.q as u32 {
            point.push(v);
            if self.consistent(point) {
                self.dfs(point, out);
            }
            point.pop();
        }
    }

    /// Equations that became fully assigned at the current depth vanish.
    fn consistent(&self, point: &[u32]) -> bool {
        let depth = point.len();
        self.eqs.iter().filter(|e| e.ready == depth).all(|e| e.eval(self.t, point) == 0)
    }
}

/// All solutions of `sys` over the finite field `field`, which must be the
/// coefficient field of `sys` or a simple extension of it. Unknowns that
/// occur in no equation are reported free. Solutions come in canonical
/// element order.
pub fn brute_solve(sys: &PolySystem, field: &Field, cap: u64) -> Result<Vec<Solution>, PolyError> {
    sys.check_coefficients()?;
    let q = field
        .order()
        .ok_or_else(|| PolyError::Precondition(format!("{field} is not finite")))?;
    if q > TABLE_LIMIT {
        return Err(PolyError::Unsupported(format!("exhaustive search over {field} (more than {TABLE_LIMIT} elements)")));
    }
    let ext = Extension::between(sys.field(), field)?;
    // unknowns in order of first use, equations with few unknowns first
    let mut order: Vec<usize> = sys.equations().iter().enumerate().map(|(i, _)| i).collect();
    order.sort_by_key(|&i| (sys.equations()[i].variables().len(), i));
    let mut slot_of: Vec<Option<usize>> = vec![None; sys.unknowns().len()];
    let mut slots = Vec::new();
    for &i in &order {
        for v in sys.equations()[i].variables() {
            if slot_of[v].is_none() {
                slot_of[v] = Some(slots.len());
                slots.push(v);
            }
        }
    }
    let size = (q as f64).powi(slots.len() as i32);
    if size > cap as f64 {
        return Err(PolyError::CapExceeded {
            size: format!("{q}^{}", slots.len()),
            cap,
        });
    }
    let t = Tables::new(field);
    let eqs: Vec<Compiled> = sys
        .equations()
        .iter()
        .map(|p| {
            let terms: Vec<(u32, Vec<(usize, u32)>)> = p
                .terms()
                .map(|(m, c)| {
                    let c = t.index_of(ext.embed(&sys.field().elem(c.clone())).value());
                    let vars = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(v, &e)| (slot_of[v].expect("variable of an equation"), e))
                        .collect();
                    (c, vars)
                })
                .collect();
            let ready = terms
                .iter()
                .flat_map(|(_, vs)| vs.iter().map(|&(s, _)| s + 1))
                .max()
                .unwrap_or(0);
            Compiled { terms, ready }
        })
        .collect();
    // constant equations
    if eqs.iter().any(|e| e.ready == 0 && e.eval(&t, &[]) != 0) {
        return Ok(Vec::new());
    }
    let search = Search { t: &t, eqs, slots: slots.len() };
    let found: Vec<Vec<u32>> = if slots.is_empty() {
        vec![Vec::new()]
    } else {
        let per_first: Vec<Vec<Vec<u32>>> = (0..q as u32)
            .into_par_iter()
            .map(|v| {
                let mut out = Vec::new();
                let mut point = vec![v];
                if search.consistent(&point) {
                    search.dfs(&mut point, &mut out);
                }
                out
            })
            .collect();
        per_first.into_iter().flatten().collect()
    };
    Ok(found
        .into_iter()
        .map(|pt| {
            let mut values = vec![None; sys.unknowns().len()];
            for (s, &u) in slots.iter().enumerate() {
                values[u] = Some(t.elems[pt[s] as usize].clone());
            }
            Solution { values }
        })
        .collect())
}
