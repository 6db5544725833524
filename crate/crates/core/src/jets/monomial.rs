//! Monomial indexing for truncated jet spaces.

use std::collections::HashMap;

/// Above this many monomials the product table is not precomputed.
const TABLE_LIMIT: usize = 1200;

/// The monomials of a jet space: main variables truncated at total degree
/// `order`, parameter variables truncated at total degree `param_order`.
/// Monomials are sorted by total degree, then lexicographically descending
/// (`x^2, x*y, y^2` for variables `x, y`).
#[derive(Debug)]
pub struct Shape {
    vars: Vec<String>,
    n_main: usize,
    order: u32,
    param_order: u32,
    monos: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    table: Option<Vec<u32>>,
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.n_main == other.n_main
            && self.order == other.order
            && self.param_order == other.param_order
    }
}
impl Eq for Shape {}

const NONE: u32 = u32::MAX;

impl Shape {
    pub fn new(main: &[String], params: &[String], order: u32, param_order: u32) -> Shape {
        let n_main = main.len();
        let nv = n_main + params.len();
        let mut monos = Vec::new();
        let mut cur = vec![0u32; nv];
        enumerate(&mut cur, 0, n_main, order, param_order, &mut monos);
        monos.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let index: HashMap<Vec<u32>, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut shape = Shape {
            vars: main.iter().chain(params).cloned().collect(),
            n_main,
            order,
            param_order,
            monos,
            index,
            table: None,
        };
        let dim = shape.monos.len();
        if dim <= TABLE_LIMIT {
            let mut table = vec![NONE; dim * dim];
            for i in 0..dim {
                for j in i..dim {
                    let k = shape.product_slow(i, j).map_or(NONE, |k| k as u32);
                    table[i * dim + j] = k;
                    table[j * dim + i] = k;
                }
            }
            shape.table = Some(table);
        }
        shape
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn n_main(&self) -> usize {
        self.n_main
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn param_order(&self) -> u32 {
        self.param_order
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monos[i]
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monos
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.monos[i].iter().sum()
    }

    pub fn main_degree(&self, i: usize) -> u32 {
        self.monos[i][..self.n_main].iter().sum()
    }

    pub fn param_degree(&self, i: usize) -> u32 {
        self.monos[i][self.n_main..].iter().sum()
    }

    /// Index of the product monomial, `None` when it is truncated away.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        match &self.table {
            Some(t) => {
                let k = t[i * self.monos.len() + j];
                (k != NONE).then_some(k as usize)
            }
            None => self.product_slow(i, j),
        }
    }

    fn product_slow(&self, i: usize, j: usize) -> Option<usize> {
        let e: Vec<u32> = self.monos[i]
            .iter()
            .zip(&self.monos[j])
            .map(|(a, b)| a + b)
            .collect();
        self.index_of(&e)
    }

    /// `x^2*y`, `1` for the constant monomial.
    pub fn format(&self, i: usize) -> String {
        format_exponents(&self.vars, &self.monos[i])
    }
}

pub fn format_exponents(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn enumerate(
    cur: &mut Vec<u32>,
    pos: usize,
    n_main: usize,
    main_left: u32,
    param_left: u32,
    out: &mut Vec<Vec<u32>>,
) {
    if pos == cur.len() {
        out.push(cur.clone());
        return;
    }
    let budget = if pos < n_main { main_left } else { param_left };
    for k in 0..=budget {
        cur[pos] = k;
        if pos < n_main {
            enumerate(cur, pos + 1, n_main, main_left - k, param_left, out);
        } else {
            enumerate(cur, pos + 1, n_main, main_left, param_left - k, out);
        }
    }
    cur[pos] = 0;
}
