//! Exact sparse polynomial arithmetic over prime fields and the rationals.

pub mod field;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod point;
pub mod poly;
pub mod univariate;

pub use field::{Field, FieldError, PrimeField, Rationals, DEFAULT_MODULUS};
pub use monomial::{monomials_of_degree, Monomial, MAX_VARS};
pub use parse::{parse_poly, parse_poly_mod};
pub use point::{is_proportional, PointError, ProjPoint};
pub use poly::{PolyError, Polynomial};
pub use univariate::UniPoly;

/// `F(p + t v)` as a dense list `[c_0, ..., c_d]` of coefficients in `t`,
/// padded to length `deg F + 1`.
pub fn restrict_to_line<F: Field>(
    poly: &Polynomial<F>,
    p: &[F::Elem],
    v: &[F::Elem],
) -> Result<Vec<F::Elem>, PolyError> {
    let f = poly.field();
    let n = poly.nvars();
    if p.len() != n {
        return Err(PolyError::LengthMismatch { expected: n, got: p.len() });
    }
    if v.len() != n {
        return Err(PolyError::LengthMismatch { expected: n, got: v.len() });
    }
    let d = poly.total_degree().unwrap_or(0) as usize;
    // (p_i + t v_i)^e expanded once per variable and exponent
    let mut cache: Vec<Vec<Vec<F::Elem>>> = vec![vec![vec![f.one()]]; n];
    let mut out = vec![f.zero(); d + 1];
    for (m, c) in poly.terms() {
        let mut acc = vec![c.clone()];
        for i in 0..n {
            let e = m.exp(i) as usize;
            if e == 0 {
                continue;
            }
            while cache[i].len() <= e {
                let last = cache[i].last().unwrap();
                let mut next = vec![f.zero(); last.len() + 1];
                for (k, a) in last.iter().enumerate() {
                    next[k] = f.add(&next[k], &f.mul(a, &p[i]));
                    next[k + 1] = f.add(&next[k + 1], &f.mul(a, &v[i]));
                }
                cache[i].push(next);
            }
            let factor = &cache[i][e];
            let mut prod = vec![f.zero(); acc.len() + factor.len() - 1];
            for (a, x) in acc.iter().enumerate() {
                for (b, y) in factor.iter().enumerate() {
                    prod[a + b] = f.add(&prod[a + b], &f.mul(x, y));
                }
            }
            acc = prod;
        }
        for (k, a) in acc.into_iter().enumerate() {
            out[k] = f.add(&out[k], &a);
        }
    }
    Ok(out)
}
