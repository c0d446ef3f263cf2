use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use super::field::{Field, FieldError};
use super::monomial::{Monomial, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVars(usize),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A sparse multivariate polynomial over `F`. Terms are kept sorted by
/// decreasing grevlex order with no zero coefficients, so structural
/// equality is polynomial equality.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

fn sort_desc<E>(terms: &mut [(Monomial, E)]) {
    terms.sort_unstable_by(|a, b| b.0.cmp_grevlex(&a.0));
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        Polynomial {
            field,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, nvars, Monomial::ONE, c)
    }

    pub fn var(field: F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let one = field.one();
        Self::monomial(field, nvars, Monomial::var(i, 1), one)
    }

    pub fn monomial(field: F, nvars: usize, m: Monomial, c: F::Elem) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        assert!(m.support_len() <= nvars, "monomial uses variables beyond the ring");
        let terms = if field.is_zero(&c) { vec![] } else { vec![(m, c)] };
        Polynomial { field, nvars, terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(field: F, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F::Elem)>,
    {
        assert!(nvars <= MAX_VARS, "too many variables");
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::new();
        for (m, c) in terms {
            assert!(m.support_len() <= nvars, "monomial uses variables beyond the ring");
            if field.is_zero(&c) {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        sort_desc(&mut terms);
        Polynomial { field, nvars, terms }
    }

    /// Terms already sorted descending with distinct monomials and nonzero
    /// coefficients.
    pub(crate) fn from_sorted_terms(field: F, nvars: usize, terms: Vec<(Monomial, F::Elem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0.cmp_grevlex(&w[1].0) == Ordering::Greater));
        Polynomial { field, nvars, terms }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, F::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == 0)
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// The common degree of all terms, if the polynomial is a nonzero form.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    /// The zero polynomial counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, F::Elem)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .binary_search_by(|(t, _)| m.cmp_grevlex(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    /// Largest exponent of `x_i` occurring in any term.
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0)
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials live in different rings");
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        self.check_same_ring(other);
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp_grevlex(mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, if negate_other { f.neg(cb) } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { f.sub(ca, cb) } else { f.add(ca, cb) };
                    if !f.is_zero(&c) {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (*m, if negate_other { f.neg(c) } else { c.clone() })),
        );
        Polynomial::from_sorted_terms(self.field.clone(), self.nvars, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, self.field.neg(c))).collect();
        Polynomial::from_sorted_terms(self.field.clone(), self.nvars, terms)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Polynomial::zero(self.field.clone(), self.nvars);
        }
        let terms = self.terms.iter().map(|(m, a)| (*m, self.field.mul(a, c))).collect();
        Polynomial::from_sorted_terms(self.field.clone(), self.nvars, terms)
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Polynomial::zero(self.field.clone(), self.nvars);
        }
        // multiplication by a monomial preserves the grevlex order
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.mul(m), self.field.mul(a, c)))
            .collect();
        Polynomial::from_sorted_terms(self.field.clone(), self.nvars, terms)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_ring(other);
        let f = &self.field;
        let mut acc: HashMap<Monomial, F::Elem> =
            HashMap::with_capacity(self.terms.len() * other.terms.len().min(64));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = f.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = f.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        sort_desc(&mut terms);
        Polynomial::from_sorted_terms(self.field.clone(), self.nvars, terms)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::constant(self.field.clone(), self.nvars, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VarOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let f = &self.field;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(i);
            if e == 0 {
                return None;
            }
            let mut m2 = *m;
            m2.set_exp(i, e - 1);
            Some((m2, f.mul(c, &f.from_u64(e as u64))))
        });
        Ok(Polynomial::from_terms(self.field.clone(), self.nvars, terms))
    }

    /// `sum_i dir_i * d/dx_i` applied once.
    pub fn directional_derivative(&self, dir: &[F::Elem]) -> Result<Self, PolyError> {
        self.check_len(dir.len())?;
        let mut acc = Polynomial::zero(self.field.clone(), self.nvars);
        for (i, a) in dir.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            acc = acc.add(&self.partial_derivative(i)?.scale(a));
        }
        Ok(acc)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    fn check_len(&self, got: usize) -> Result<(), PolyError> {
        if got != self.nvars {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars,
                got,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> Result<F::Elem, PolyError> {
        self.check_len(point.len())?;
        let f = &self.field;
        // power table per variable, up to the largest exponent used
        let powers: Vec<Vec<F::Elem>> = (0..self.nvars)
            .map(|i| {
                let top = self.degree_in(i) as usize;
                let mut row = Vec::with_capacity(top + 1);
                row.push(f.one());
                for k in 1..=top {
                    let next = f.mul(&row[k - 1], &point[i]);
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, row) in powers.iter().enumerate() {
                let e = m.exp(i) as usize;
                if e > 0 {
                    t = f.mul(&t, &row[e]);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Replaces `x_i` by the constant `value`; the ring is unchanged.
    pub fn substitute_value(&self, i: usize, value: &F::Elem) -> Result<Self, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VarOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let f = &self.field;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            m2.set_exp(i, 0);
            (m2, f.mul(c, &f.pow(value, m.exp(i) as u64)))
        });
        Ok(Polynomial::from_terms(self.field.clone(), self.nvars, terms))
    }

    /// Replaces `x_j` by the linear form `sum_i coeffs[i] x_i`. The form may
    /// itself involve `x_j`.
    pub fn substitute_linear(&self, j: usize, coeffs: &[F::Elem]) -> Result<Self, PolyError> {
        if j >= self.nvars {
            return Err(PolyError::VarOutOfRange {
                index: j,
                nvars: self.nvars,
            });
        }
        self.check_len(coeffs.len())?;
        let f = &self.field;
        let top = self.degree_in(j) as usize;
        let mut by_power: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); top + 1];
        for (m, c) in &self.terms {
            let mut m2 = *m;
            m2.set_exp(j, 0);
            by_power[m.exp(j) as usize].push((m2, c.clone()));
        }
        let lin = Polynomial::from_terms(
            f.clone(),
            self.nvars,
            coeffs.iter().enumerate().map(|(i, a)| (Monomial::var(i, 1), a.clone())),
        );
        let mut lin_pow = Polynomial::constant(f.clone(), self.nvars, f.one());
        let mut acc = Polynomial::zero(f.clone(), self.nvars);
        for (e, rest) in by_power.into_iter().enumerate() {
            if e > 0 {
                lin_pow = lin_pow.mul(&lin);
            }
            if rest.is_empty() {
                continue;
            }
            let rest = Polynomial::from_terms(f.clone(), self.nvars, rest);
            acc = acc.add(&rest.mul(&lin_pow));
        }
        Ok(acc)
    }

    /// `x_i <- x_i + c x_j` for `i != j`.
    pub fn shear(&self, i: usize, j: usize, c: &F::Elem) -> Self {
        assert!(i != j && i < self.nvars && j < self.nvars);
        let f = &self.field;
        if f.is_zero(c) {
            return self.clone();
        }
        let top = self.degree_in(i) as usize;
        let binom = pascal_rows(f, top);
        let cpow: Vec<F::Elem> = {
            let mut v = vec![f.one()];
            for k in 1..=top {
                let next = f.mul(&v[k - 1], c);
                v.push(next);
            }
            v
        };
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(self.terms.len() * 2);
        for (m, a) in &self.terms {
            let e = m.exp(i) as usize;
            for b in 0..=e {
                let coef = f.mul(a, &f.mul(&binom[e][b], &cpow[b]));
                if f.is_zero(&coef) {
                    continue;
                }
                let mut m2 = *m;
                m2.set_exp(i, (e - b) as u16);
                m2.set_exp(j, m.exp(j) + b as u16);
                match acc.get_mut(&m2) {
                    Some(v) => *v = f.add(v, &coef),
                    None => {
                        acc.insert(m2, coef);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        sort_desc(&mut terms);
        Polynomial::from_sorted_terms(f.clone(), self.nvars, terms)
    }

    /// `x_i <- c x_i`.
    pub fn scale_var(&self, i: usize, c: &F::Elem) -> Self {
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, f.mul(a, &f.pow(c, m.exp(i) as u64))));
        Polynomial::from_terms(f.clone(), self.nvars, terms)
    }

    /// Exchanges `x_i` and `x_j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            let (a, b) = (m.exp(i), m.exp(j));
            m2.set_exp(i, b);
            m2.set_exp(j, a);
            (m2, c.clone())
        });
        Polynomial::from_terms(self.field.clone(), self.nvars, terms)
    }

    /// Renames variables: `x_i` becomes `x_{map[i]}` in a ring with `nvars`
    /// variables. Variables mapped to `None` must not occur.
    pub fn rename_vars(&self, map: &[Option<usize>], nvars: usize) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = Monomial::ONE;
            for (i, target) in map.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let t = target.expect("renamed polynomial uses a dropped variable");
                m2.set_exp(t, m2.exp(t) + e);
            }
            (m2, c.clone())
        });
        Polynomial::from_terms(self.field.clone(), nvars, terms)
    }

    /// Same polynomial viewed in a ring with more variables.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        Polynomial {
            field: self.field.clone(),
            nvars,
            terms: self.terms.clone(),
        }
    }

    /// Coefficients of `x_i^k`, as polynomials in the other variables,
    /// indexed by `k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Self> {
        let top = self.degree_in(i) as usize;
        let mut parts: Vec<Vec<(Monomial, F::Elem)>> = vec![Vec::new(); top + 1];
        for (m, c) in &self.terms {
            let mut m2 = *m;
            m2.set_exp(i, 0);
            parts[m.exp(i) as usize].push((m2, c.clone()));
        }
        parts
            .into_iter()
            .map(|t| Polynomial::from_terms(self.field.clone(), self.nvars, t))
            .collect()
    }
}

/// `rows[a][b] = binom(a, b)` computed additively so it is valid in any
/// characteristic.
pub(crate) fn pascal_rows<F: Field>(f: &F, top: usize) -> Vec<Vec<F::Elem>> {
    let mut rows: Vec<Vec<F::Elem>> = Vec::with_capacity(top + 1);
    for a in 0..=top {
        let mut row = vec![f.one(); a + 1];
        for b in 1..a {
            row[b] = f.add(&rows[a - 1][b - 1], &rows[a - 1][b]);
        }
        rows.push(row);
    }
    rows
}

impl<'a, F: Field> Add for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        Polynomial::add(self, rhs)
    }
}

impl<'a, F: Field> Sub for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        Polynomial::sub(self, rhs)
    }
}

impl<'a, F: Field> Mul for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        Polynomial::mul(self, rhs)
    }
}

impl<'a, F: Field> Neg for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::field::PrimeField;
    use crate::polyring::parse::parse_poly;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn power_rule() {
        let k = PrimeField::new(10007).unwrap();
        let p = parse_poly("x0^2*x1", 2, k).unwrap();
        assert_eq!(p.partial_derivative(0).unwrap(), parse_poly("2*x0*x1", 2, k).unwrap());
    }

    #[test]
    fn derivative_in_absent_variable_is_zero() {
        let k = PrimeField::new(10007).unwrap();
        let p = parse_poly("x0*x3", 4, k).unwrap();
        assert!(p.partial_derivative(2).unwrap().is_zero());
        assert_eq!(
            p.partial_derivative(4),
            Err(PolyError::VarOutOfRange { index: 4, nvars: 4 })
        );
    }

    #[test]
    fn derivative_killed_by_characteristic() {
        let k = PrimeField::new(3).unwrap();
        let p = parse_poly("x0^3", 1, k).unwrap();
        assert!(p.partial_derivative(0).unwrap().is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let k = PrimeField::new(10007).unwrap();
        let q = parse_poly("x0*x3 - x1*x2", 4, k).unwrap();
        assert_eq!(q.evaluate(&[1, 0, 0, 0]).unwrap(), 0);
        assert_eq!(q.evaluate(&[1, 1, 1, 1]).unwrap(), 0);
        let p = parse_poly("x0^2 + x1", 2, f7()).unwrap();
        assert_eq!(p.evaluate(&[2, 3]).unwrap(), 0);
        assert_eq!(
            p.evaluate(&[1]),
            Err(PolyError::LengthMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn shear_matches_linear_substitution() {
        let k = PrimeField::new(101).unwrap();
        let p = parse_poly("x0^3*x1 + 5*x1^2*x2^2 - x2^4 + 3*x0*x1*x2^2", 3, k).unwrap();
        let sheared = p.shear(1, 2, &7);
        let subst = p.substitute_linear(1, &[0, 1, 7]).unwrap();
        assert_eq!(sheared, subst);
    }

    #[test]
    fn substitute_value_then_evaluate() {
        let k = PrimeField::new(101).unwrap();
        let p = parse_poly("x0^3*x1 + 5*x1^2*x2^2 - x2^4", 3, k).unwrap();
        let s = p.substitute_value(1, &9).unwrap();
        assert_eq!(s.evaluate(&[4, 0, 6]).unwrap(), p.evaluate(&[4, 9, 6]).unwrap());
        assert_eq!(s.degree_in(1), 0);
    }

    #[test]
    fn coefficients_in_variable() {
        let k = PrimeField::new(101).unwrap();
        let p = parse_poly("x0^2*x1 + 3*x0*x2^2 + x1^3", 3, k).unwrap();
        let parts = p.coefficients_in(0);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], parse_poly("x1^3", 3, k).unwrap());
        assert_eq!(parts[1], parse_poly("3*x2^2", 3, k).unwrap());
        assert_eq!(parts[2], parse_poly("x1", 3, k).unwrap());
    }
}
