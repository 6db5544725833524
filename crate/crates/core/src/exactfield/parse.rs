//! Textual field specs and scalars.
//!
//! ```text
//! field := base ('[' IDENT ']' '/' '(' poly ')')*
//! base  := 'Q' | 'F' INT | 'F' INT '(' IDENT ')'
//! ```
//!
//! `F<q>` with `q` a prime power builds the field with `q` elements.

use num_bigint::BigInt;

use super::{Field, FieldElem, FieldError, FieldKind};
use crate::expr::{Evaluator, Expr, ParseError, Parser, Span, Tok};

/// Evaluates expressions to scalars of a field; identifiers resolve to the
/// generators of the field tower.
pub struct ScalarEval<'a> {
    pub field: &'a Field,
}

impl Evaluator for ScalarEval<'_> {
    type Value = FieldElem;

    fn int(&self, n: &BigInt) -> FieldElem {
        self.field.from_bigint(n)
    }

    fn var(&self, name: &str) -> Option<FieldElem> {
        self.field.lookup_generator(name)
    }

    fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a + b
    }

    fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a - b
    }

    fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a * b
    }

    fn neg(&self, a: FieldElem) -> FieldElem {
        -a
    }

    fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, String> {
        a.checked_div(&b).ok_or_else(|| "division by zero".to_string())
    }

    fn pow(&self, a: FieldElem, e: u32) -> FieldElem {
        a.pow(e as u64)
    }
}

pub fn parse_scalar(field: &Field, src: &str) -> Result<FieldElem, FieldError> {
    let mut p = Parser::new(src, Span { line: 1, col: 1 })?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e.eval(&ScalarEval { field })?)
}

pub fn parse_field(src: &str) -> Result<Field, FieldError> {
    parse_field_at(src, Span { line: 1, col: 1 })
}

/// Like [`parse_field`], reporting positions relative to `origin`.
pub fn parse_field_at(src: &str, origin: Span) -> Result<Field, FieldError> {
    let mut p = Parser::new(src, origin)?;
    let span = p.span();
    let (name, _) = p.ident()?;
    let mut field = if name == "Q" {
        Field::rationals()
    } else if name == "F" {
        match p.bump().map(|t| t.tok) {
            Some(Tok::Int(n)) => finite_or_function_field(&mut p, &n, span)?,
            _ => return Err(ParseError::at(span, "expected characteristic after 'F'").into()),
        }
    } else if let Some(digits) = name.strip_prefix('F').filter(|d| !d.is_empty()) {
        // the tokenizer glues "F3" into one identifier
        let n: BigInt = digits
            .parse()
            .map_err(|_| ParseError::at(span, format!("unknown field '{name}'")))?;
        finite_or_function_field(&mut p, &n, span)?
    } else {
        return Err(ParseError::at(span, format!("unknown field '{name}'")).into());
    };
    while p.eat('[') {
        let (var, _) = p.ident()?;
        p.expect(']')?;
        p.expect('/')?;
        p.expect('(')?;
        let poly = p.expr()?;
        p.expect(')')?;
        let coeffs = upoly_from_expr(&field, &var, &poly)?;
        field = Field::simple_extension(&field, &var, &coeffs)?;
    }
    p.finish()?;
    Ok(field)
}

fn finite_or_function_field(p: &mut Parser, n: &BigInt, span: Span) -> Result<Field, FieldError> {
    let q: u64 = n
        .try_into()
        .map_err(|_| ParseError::at(span, "field size too large"))?;
    if p.peek() == Some(&Tok::Sym('(')) {
        p.bump();
        let (var, _) = p.ident()?;
        p.expect(')')?;
        return Field::rational_functions(q, &var);
    }
    if super::is_prime(q) {
        Field::prime(q)
    } else {
        Field::finite(q)
    }
}

/// Coefficients (low degree first) of a univariate polynomial in `var` over
/// `base`; other identifiers resolve to generators of `base`.
pub fn upoly_from_expr(base: &Field, var: &str, e: &Expr) -> Result<Vec<FieldElem>, FieldError> {
    struct UEval<'a> {
        base: &'a Field,
        var: &'a str,
    }
    impl UEval<'_> {
        fn norm(&self, mut v: Vec<FieldElem>) -> Vec<FieldElem> {
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
            v
        }
    }
    impl Evaluator for UEval<'_> {
        type Value = Vec<FieldElem>;
        fn int(&self, n: &BigInt) -> Self::Value {
            self.norm(vec![self.base.from_bigint(n)])
        }
        fn var(&self, name: &str) -> Option<Self::Value> {
            if name == self.var {
                Some(vec![self.base.zero(), self.base.one()])
            } else {
                self.base.lookup_generator(name).map(|g| self.norm(vec![g]))
            }
        }
        fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value {
            let n = a.len().max(b.len());
            let z = self.base.zero();
            self.norm(
                (0..n)
                    .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
                    .collect(),
            )
        }
        fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value {
            let nb = self.neg(b);
            self.add(a, nb)
        }
        fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value {
            if a.is_empty() || b.is_empty() {
                return vec![];
            }
            let mut out = vec![self.base.zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
            self.norm(out)
        }
        fn neg(&self, a: Self::Value) -> Self::Value {
            a.into_iter().map(|c| -c).collect()
        }
        fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value, String> {
            if b.len() != 1 {
                return Err("division by a non-constant polynomial".into());
            }
            let inv = b[0].inv().ok_or("division by zero")?;
            Ok(self.norm(a.iter().map(|c| c * &inv).collect()))
        }
    }
    Ok(e.eval(&UEval { base, var })?)
}

impl Field {
    /// Generator of this field or of a field below it in the tower, embedded
    /// into this field.
    pub fn lookup_generator(&self, name: &str) -> Option<FieldElem> {
        if self.generator_name() == Some(name) {
            return self.generator();
        }
        match self.kind() {
            FieldKind::Simple { base, .. } => {
                base.lookup_generator(name).map(|g| self.embed_base(&g))
            }
            _ => None,
        }
    }
}
