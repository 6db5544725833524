use std::fmt;

use crate::exactfield::{Extension, Field, FieldElem};
use crate::jets::{Jet, JetRing};

/// Inverse of a square scalar matrix, `None` when singular.
pub fn invert_scalar(field: &Field, a: &[Vec<FieldElem>]) -> Option<Vec<Vec<FieldElem>>> {
    let n = a.len();
    let mut m: Vec<Vec<FieldElem>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].inv()?;
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let c = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&c * p);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `Σ_j a_ij v_j`.
pub fn scalar_apply(ring: &JetRing, a: &[Vec<FieldElem>], v: &[Jet]) -> Vec<Jet> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(ring.zero(), |acc, (c, x)| &acc + &x.scale(c))
        })
        .collect()
}

/// A square matrix of jets.
#[derive(Clone, PartialEq, Eq)]
pub struct JetMatrix {
    ring: JetRing,
    rows: Vec<Vec<Jet>>,
}

impl fmt::Debug for JetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for JetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let e: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("({})", e.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl JetMatrix {
    pub fn new(ring: &JetRing, rows: Vec<Vec<Jet>>) -> JetMatrix {
        let m = rows.len();
        assert!(rows.iter().all(|r| r.len() == m), "square matrix");
        JetMatrix {
            ring: ring.clone(),
            rows,
        }
    }

    pub fn identity(ring: &JetRing, m: usize) -> JetMatrix {
        let rows = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { ring.one() } else { ring.zero() })
                    .collect()
            })
            .collect();
        JetMatrix::new(ring, rows)
    }

    pub fn ring(&self) -> &JetRing {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Jet>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &Jet {
        &self.rows[i][j]
    }

    pub fn constant_part(&self) -> Vec<Vec<FieldElem>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.constant_term()).collect())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == JetMatrix::identity(&self.ring, self.size())
    }

    pub fn mul(&self, other: &JetMatrix) -> JetMatrix {
        let m = self.size();
        let rows = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..m).fold(self.ring.zero(), |acc, k| {
                            &acc + &(&self.rows[i][k] * &other.rows[k][j])
                        })
                    })
                    .collect()
            })
            .collect();
        JetMatrix::new(&self.ring, rows)
    }

    pub fn apply(&self, v: &[Jet]) -> Vec<Jet> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(self.ring.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Every entry composed with `args`.
    pub fn substitute(&self, args: &[Jet]) -> JetMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.substitute(args).expect("valid substitution"))
                    .collect()
            })
            .collect();
        JetMatrix::new(&self.ring, rows)
    }

    /// Inverse through the constant part and a terminating Neumann series.
    pub fn inverse(&self) -> Option<JetMatrix> {
        let f = self.ring.field();
        let c_inv = invert_scalar(f, &self.constant_part())?;
        let m = self.size();
        let c_inv_m = JetMatrix::new(
            &self.ring,
            c_inv
                .iter()
                .map(|r| r.iter().map(|x| self.ring.constant(x)).collect())
                .collect(),
        );
        // C^{-1} M = I - H with H nilpotent
        let prod = c_inv_m.mul(self);
        let id = JetMatrix::identity(&self.ring, m);
        let h = JetMatrix::new(
            &self.ring,
            (0..m)
                .map(|i| (0..m).map(|j| &id.rows[i][j] - &prod.rows[i][j]).collect())
                .collect(),
        );
        let mut acc = id.clone();
        let mut term = id;
        for _ in 0..=(self.ring.order() + self.ring.param_order()) {
            term = term.mul(&h);
            if term.rows.iter().flatten().all(|x| x.is_zero()) {
                break;
            }
            acc = JetMatrix::new(
                &self.ring,
                (0..m)
                    .map(|i| (0..m).map(|j| &acc.rows[i][j] + &term.rows[i][j]).collect())
                    .collect(),
            );
        }
        Some(acc.mul(&c_inv_m))
    }

    pub fn base_change(&self, ext: &Extension, ring: &JetRing) -> JetMatrix {
        JetMatrix::new(
            ring,
            self.rows
                .iter()
                .map(|r| r.iter().map(|x| x.base_change(ext, ring)).collect())
                .collect(),
        )
    }

    pub fn descend(&self, ext: &Extension, ring: &JetRing) -> Option<JetMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.descend(ext, ring)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(JetMatrix::new(ring, rows))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|x| x.to_json()).collect()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_inverse() {
        let q = Field::rationals();
        let r = JetRing::new(&q, &["x", "y"], 4);
        let m = JetMatrix::new(
            &r,
            vec![
                vec![r.parse("2+x").unwrap(), r.parse("y").unwrap()],
                vec![r.parse("x*y").unwrap(), r.parse("1-y").unwrap()],
            ],
        );
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let s = JetMatrix::new(&r, vec![vec![r.parse("x").unwrap()]]);
        assert!(s.inverse().is_none());
    }
}
