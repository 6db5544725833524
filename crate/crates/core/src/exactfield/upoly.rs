//! Dense univariate polynomials over a [`Field`], coefficients low degree first.
//!
//! All results are trimmed: no trailing zero coefficient.

use super::{Field, Value};

pub fn trim(f: &Field, mut p: Vec<Value>) -> Vec<Value> {
    while p.last().is_some_and(|c| f.is_zero_v(c)) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Value]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn add(f: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let n = a.len().max(b.len());
    let zero = f.zero_v();
    let out = (0..n)
        .map(|i| f.add_v(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn sub(f: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let n = a.len().max(b.len());
    let zero = f.zero_v();
    let out = (0..n)
        .map(|i| f.sub_v(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, out)
}

pub fn scale(f: &Field, a: &[Value], c: &Value) -> Vec<Value> {
    trim(f, a.iter().map(|x| f.mul_v(x, c)).collect())
}

pub fn mul(f: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero_v(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero_v(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add_v(&out[i + j], &f.mul_v(x, y));
        }
    }
    trim(f, out)
}

/// Euclidean division; `b` must be nonzero.
pub fn divrem(f: &Field, a: &[Value], b: &[Value]) -> (Vec<Value>, Vec<Value>) {
    let b = trim(f, b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let lead_inv = f.inv_v(&b[db]).expect("nonzero leading coefficient");
    let mut r = trim(f, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![f.zero_v(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = f.mul_v(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = f.sub_v(&r[i + shift], &f.mul_v(&c, bc));
        }
        q[shift] = c;
        r = trim(f, r);
    }
    (trim(f, q), r)
}

pub fn rem(f: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    divrem(f, a, b).1
}

pub fn monic(f: &Field, a: &[Value]) -> Vec<Value> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv_v(lc).expect("nonzero leading coefficient");
            scale(f, a, &inv)
        }
    }
}

pub fn gcd(f: &Field, a: &[Value], b: &[Value]) -> Vec<Value> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn xgcd(f: &Field, a: &[Value], b: &[Value]) -> (Vec<Value>, Vec<Value>, Vec<Value>) {
    let one = vec![f.one_v()];
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1) = (one.clone(), Vec::new());
    let (mut t0, mut t1) = (Vec::new(), one);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = f.inv_v(lc).expect("nonzero");
            (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
        }
    }
}

/// `base^e mod m`.
pub fn powmod(f: &Field, base: &[Value], mut e: u64, m: &[Value]) -> Vec<Value> {
    let mut acc = rem(f, &[f.one_v()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

pub fn eval(f: &Field, p: &[Value], x: &Value) -> Value {
    p.iter()
        .rev()
        .fold(f.zero_v(), |acc, c| f.add_v(&f.mul_v(&acc, x), c))
}
