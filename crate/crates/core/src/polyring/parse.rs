use std::fmt;

use super::field::{Field, PrimeField};
use super::monomial::{Monomial, MAX_VARS};
use super::poly::{PolyError, Polynomial};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    /// Digits, possibly separated by whitespace-free `/` for rational literals.
    fn number(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn digits(&mut self) -> Option<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }
}

/// Parses the text form `3*x0^2*x1 - x2^3` into a polynomial in `nvars`
/// variables over `field`.
pub fn parse_poly<F: Field>(text: &str, nvars: usize, field: F) -> Result<Polynomial<F>, PolyError> {
    if nvars > MAX_VARS {
        return Err(PolyError::TooManyVars(nvars));
    }
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let negative = match lx.peek() {
            None if first => return lx.err("empty polynomial"),
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                false
            }
            Some(b'-') => {
                lx.pos += 1;
                true
            }
            Some(_) if first => false,
            Some(c) => return lx.err(format!("expected '+' or '-', found '{}'", c as char)),
        };
        first = false;
        let (m, mut c) = parse_term(&mut lx, nvars, &field)?;
        if negative {
            c = field.neg(&c);
        }
        terms.push((m, c));
    }
    Ok(Polynomial::from_terms(field, nvars, terms))
}

/// Convenience wrapper building the prime field from a modulus.
pub fn parse_poly_mod(text: &str, nvars: usize, modulus: u64) -> Result<Polynomial<PrimeField>, PolyError> {
    parse_poly(text, nvars, PrimeField::new(modulus)?)
}

fn parse_term<F: Field>(lx: &mut Lexer<'_>, nvars: usize, field: &F) -> Result<(Monomial, F::Elem), PolyError> {
    let mut coef = field.one();
    let mut m = Monomial::ONE;
    loop {
        match lx.peek() {
            Some(b'x') => {
                lx.pos += 1;
                let at = lx.pos;
                let idx = match lx.digits() {
                    Some(i) => i as usize,
                    None => {
                        lx.pos = at;
                        return lx.err("expected variable index after 'x'");
                    }
                };
                if idx >= nvars {
                    return Err(PolyError::VarOutOfRange { index: idx, nvars });
                }
                let mut e = 1u64;
                if lx.peek() == Some(b'^') {
                    lx.pos += 1;
                    let at = lx.pos;
                    e = match lx.digits() {
                        Some(e) => e,
                        None => {
                            lx.pos = at;
                            return lx.err("expected exponent after '^'");
                        }
                    };
                }
                let total = m.exp(idx) as u64 + e;
                if total > u16::MAX as u64 {
                    return Err(PolyError::ExponentOverflow);
                }
                m.set_exp(idx, total as u16);
            }
            Some(c) if c.is_ascii_digit() => {
                let at = lx.pos;
                let lit = lx.number();
                let v = match field.parse_literal(lit) {
                    Some(v) => v,
                    None => {
                        lx.pos = at;
                        return lx.err(format!("malformed number '{lit}'"));
                    }
                };
                let mut e = 1u64;
                if lx.peek() == Some(b'^') {
                    lx.pos += 1;
                    e = lx.digits().ok_or(PolyError::Syntax {
                        pos: lx.pos,
                        msg: "expected exponent after '^'".into(),
                    })?;
                }
                coef = field.mul(&coef, &field.pow(&v, e));
            }
            Some(c) => return lx.err(format!("unexpected character '{}'", c as char)),
            None => return lx.err("unexpected end of input"),
        }
        if lx.peek() == Some(b'*') {
            lx.pos += 1;
        } else {
            return Ok((m, coef));
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, nvars: usize) -> fmt::Result {
    let mut first = true;
    for i in 0..nvars {
        let e = m.exp(i);
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "x{i}")?;
        } else {
            write!(f, "x{i}^{e}")?;
        }
    }
    Ok(())
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().iter().enumerate() {
            let (neg, mag) = self.field().display_parts(c);
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.degree() == 0 {
                f.write_str(&mag)?;
            } else {
                if mag != "1" {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m, self.nvars())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::field::Rationals;

    #[test]
    fn parses_grammar_examples() {
        let p = parse_poly_mod("x0*x3 - x1*x2", 4, 10007).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert!(parse_poly_mod("0", 4, 10007).unwrap().is_zero());
        assert_eq!(
            parse_poly_mod("x5 + 1", 4, 10007),
            Err(PolyError::VarOutOfRange { index: 5, nvars: 4 })
        );
        assert!(matches!(parse_poly_mod("x0", 4, 0), Err(PolyError::Field(_))));
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_poly_mod("x0 + * x1", 2, 7) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_poly_mod("x0 x1", 2, 7) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly_mod("", 2, 7), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly_mod("x^2", 2, 7), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn whitespace_and_reduction() {
        let a = parse_poly_mod(" 3 * x0 ^ 2 *x1-x2^3 ", 3, 10007).unwrap();
        let b = parse_poly_mod("3*x0^2*x1 - x2^3", 3, 10007).unwrap();
        assert_eq!(a, b);
        let c = parse_poly_mod("10008*x0", 1, 10007).unwrap();
        assert_eq!(c, parse_poly_mod("x0", 1, 10007).unwrap());
        assert!(parse_poly_mod("7*x0 + 14", 1, 7).unwrap().is_zero());
    }

    #[test]
    fn render_examples() {
        let p = parse_poly_mod("3*x0^2*x1 - x2^3", 3, 10007).unwrap();
        assert_eq!(p.to_string(), "3*x0^2*x1 - x2^3");
        let q = parse_poly_mod("-x1 + 2 - x0", 2, 10007).unwrap();
        assert_eq!(q.to_string(), "-x0 - x1 + 2");
        let r = parse_poly("1/2*x0 - 3/4", 1, Rationals).unwrap();
        assert_eq!(r.to_string(), "1/2*x0 - 3/4");
    }
}
