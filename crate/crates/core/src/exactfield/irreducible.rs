//! Irreducibility of small-degree polynomials over finite fields and `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;

use super::{upoly, Field, FieldError, FieldKind, Value};

/// Upper bound on the number of interpolation candidates tried over `Q`.
const KRONECKER_CAP: u64 = 2_000_000;

/// `f` is monic of degree ≥ 1, coefficients low degree first.
pub(crate) fn is_irreducible(base: &Field, f: &[Value]) -> Result<bool, FieldError> {
    let d = f.len() - 1;
    if d == 1 {
        return Ok(true);
    }
    if let Some(q) = base.order() {
        return Ok(rabin(base, q, f));
    }
    match base.kind() {
        FieldKind::Rationals => {
            let ints = integer_form(f);
            rational_irreducible(&ints)
        }
        _ => Err(FieldError::Unsupported(format!(
            "irreducibility test over {base}"
        ))),
    }
}

/// Rabin's test over the field with `q` elements: `f` has no factor of
/// degree `i ≤ d/2`, checked through `gcd(x^{q^i} - x, f)`.
fn rabin(base: &Field, q: u64, f: &[Value]) -> bool {
    let d = f.len() - 1;
    let x = vec![base.zero_v(), base.one_v()];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = upoly::powmod(base, &h, q, f);
        let g = upoly::gcd(base, &upoly::sub(base, &h, &x), f);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Primitive integer polynomial with the same roots as the monic rational `f`.
fn integer_form(f: &[Value]) -> Vec<BigInt> {
    let rats: Vec<BigRational> = f
        .iter()
        .map(|v| match v {
            Value::Rat(r) => r.clone(),
            _ => unreachable!("rational coefficients"),
        })
        .collect();
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn rational_irreducible(f: &[BigInt]) -> Result<bool, FieldError> {
    let d = f.len() - 1;
    // Degrees a factor over Q could have, intersected across primes.
    let mut possible: BTreeSet<usize> = (1..d).collect();
    for p in small_primes(200) {
        let lc = &f[d];
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = Field::prime(p).expect("prime");
        let red: Vec<Value> = f
            .iter()
            .map(|c| fp.int_v(c))
            .collect();
        let red = upoly::monic(&fp, &upoly::trim(&fp, red));
        let deriv = derivative(&fp, &red);
        if upoly::gcd(&fp, &red, &deriv).len() > 1 {
            continue;
        }
        let degs = factor_degrees(&fp, p, &red);
        let sums = subset_sums(&degs);
        possible.retain(|e| sums.contains(e));
        if possible.is_empty() {
            return Ok(true);
        }
    }
    kronecker(f, &possible)
}

fn small_primes(bound: u64) -> Vec<u64> {
    (2..bound).filter(|&n| super::is_prime(n)).collect()
}

fn derivative(f: &Field, a: &[Value]) -> Vec<Value> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul_v(c, &f.int_v(&BigInt::from(i))))
        .collect();
    upoly::trim(f, out)
}

/// Degrees of the irreducible factors of a squarefree monic polynomial over
/// `F_p` (distinct-degree factorization).
fn factor_degrees(fp: &Field, p: u64, f: &[Value]) -> Vec<usize> {
    let x = vec![fp.zero_v(), fp.one_v()];
    let mut rest = f.to_vec();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 0;
    while rest.len() > 1 {
        i += 1;
        if 2 * i > rest.len() - 1 {
            out.push(rest.len() - 1);
            break;
        }
        h = upoly::powmod(fp, &h, p, &rest);
        let g = upoly::gcd(fp, &upoly::sub(fp, &h, &x), &rest);
        let gd = g.len() - 1;
        if gd > 0 {
            out.extend(std::iter::repeat(i).take(gd / i));
            rest = upoly::divrem(fp, &rest, &g).0;
            h = upoly::rem(fp, &h, &rest);
        }
    }
    out
}

fn subset_sums(degs: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &d in degs {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums
}

/// Exhaustive search for an integer factor of each degree in `possible` up
/// to half the degree, by interpolation through divisors of values.
fn kronecker(f: &[BigInt], possible: &BTreeSet<usize>) -> Result<bool, FieldError> {
    let d = f.len() - 1;
    let points: Vec<BigInt> = (0..=d as i64)
        .flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] })
        .map(BigInt::from)
        .collect();
    for &e in possible.iter().filter(|&&e| e <= d / 2) {
        let mut chosen = Vec::new();
        for x in &points {
            if chosen.len() == e + 1 {
                break;
            }
            let v = eval_int(f, x);
            if v.is_zero() {
                // integer root: linear factor
                return Ok(false);
            }
            chosen.push((x.clone(), v));
        }
        let divisor_lists: Vec<Vec<BigInt>> = chosen
            .iter()
            .map(|(_, v)| signed_divisors(v))
            .collect::<Result<_, _>>()?;
        let total = divisor_lists
            .iter()
            .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))
            .filter(|&t| t <= KRONECKER_CAP)
            .ok_or_else(|| {
                FieldError::Unsupported("irreducibility search exceeds the candidate cap".into())
            })?;
        let xs: Vec<BigRational> = chosen
            .iter()
            .map(|(x, _)| BigRational::from_integer(x.clone()))
            .collect();
        let mut idx = vec![0usize; e + 1];
        for _ in 0..total {
            let ys: Vec<BigRational> = idx
                .iter()
                .zip(&divisor_lists)
                .map(|(&i, l)| BigRational::from_integer(l[i].clone()))
                .collect();
            if let Some(g) = interpolate(&xs, &ys) {
                if g.len() == e + 1 && divides(&g, f) {
                    return Ok(false);
                }
            }
            for (k, i) in idx.iter_mut().enumerate() {
                *i += 1;
                if *i < divisor_lists[k].len() {
                    break;
                }
                *i = 0;
            }
        }
    }
    Ok(true)
}

fn eval_int(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn signed_divisors(v: &BigInt) -> Result<Vec<BigInt>, FieldError> {
    let n = v
        .abs()
        .to_u64()
        .filter(|&n| n <= 1_000_000_000_000)
        .ok_or_else(|| FieldError::Unsupported("coefficients too large for factor search".into()))?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            if k * k != n {
                out.push(n / k);
            }
        }
        k += 1;
    }
    Ok(out
        .into_iter()
        .flat_map(|k| [BigInt::from(k), -BigInt::from(k)])
        .collect())
}

/// Lagrange interpolation; `None` unless the result has integer coefficients.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Option<Vec<BigInt>> {
    let n = xs.len();
    let mut coeffs = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            coeffs[k] += c * &scale;
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
        .into_iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

fn divides(g: &[BigInt], f: &[BigInt]) -> bool {
    let dg = g.len() - 1;
    let lc = &g[dg];
    let mut r: Vec<BigInt> = f.to_vec();
    while r.len() > dg {
        let top = r.last().expect("nonempty").clone();
        let (q, rem) = top.div_rem(lc);
        if !rem.is_zero() {
            return false;
        }
        let shift = r.len() - 1 - dg;
        for (i, c) in g.iter().enumerate() {
            r[i + shift] -= &q * c;
        }
        r.pop();
    }
    r.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_poly(c: &[i64]) -> Vec<Value> {
        let q = Field::rationals();
        c.iter().map(|&n| q.int_v(&BigInt::from(n))).collect()
    }

    #[test]
    fn rationals() {
        let q = Field::rationals();
        // x^2 - 2, x^2 - 1, x^4 + 1, (x^2+1)(x^2+2), x^3 - x - 1
        assert!(is_irreducible(&q, &q_poly(&[-2, 0, 1])).unwrap());
        assert!(!is_irreducible(&q, &q_poly(&[-1, 0, 1])).unwrap());
        assert!(is_irreducible(&q, &q_poly(&[1, 0, 0, 0, 1])).unwrap());
        assert!(!is_irreducible(&q, &q_poly(&[2, 0, 3, 0, 1])).unwrap());
        assert!(is_irreducible(&q, &q_poly(&[-1, -1, 0, 1])).unwrap());
        // x^4 - 10x^2 + 1 is reducible modulo every prime but irreducible over Q
        assert!(is_irreducible(&q, &q_poly(&[1, 0, -10, 0, 1])).unwrap());
    }

    #[test]
    fn finite() {
        let f3 = Field::prime(3).unwrap();
        let p = |c: &[u64]| -> Vec<Value> { c.iter().map(|&n| Value::Mod(n)).collect() };
        assert!(is_irreducible(&f3, &p(&[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&f3, &p(&[2, 0, 1])).unwrap());
        assert!(is_irreducible(&f3, &p(&[2, 2, 0, 1])).unwrap());
        // (x^2+1)^2 has no roots but is reducible
        assert!(!is_irreducible(&f3, &p(&[1, 0, 2, 0, 1])).unwrap());
    }
}
