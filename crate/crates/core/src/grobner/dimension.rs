use crate::polyring::{monomials_of_degree, Field, Monomial};

use super::buchberger::GroebnerBasis;

/// Krull dimension of `k[x]/I` from the leading monomials of a Gröbner basis
/// of `I`: the largest set of variables containing the support of no leading
/// monomial. Returns -1 for the unit ideal.
pub fn krull_from_leads(leads: &[Monomial], nvars: usize) -> i64 {
    if leads.iter().any(|m| m.degree() == 0) {
        return -1;
    }
    let mut masks: Vec<u32> = leads.iter().map(|m| m.support_mask()).collect();
    masks.sort_unstable_by_key(|m| m.count_ones());
    // keep minimal supports only
    let mut minimal: Vec<u32> = Vec::new();
    for m in masks {
        if !minimal.iter().any(|&s| s & m == s) {
            minimal.push(m);
        }
    }
    let mut best = 0i64;
    search(0, nvars, 0, &minimal, &mut best);
    best
}

fn search(i: usize, nvars: usize, chosen: u32, masks: &[u32], best: &mut i64) {
    let size = chosen.count_ones() as i64;
    if size + (nvars - i) as i64 <= *best {
        return;
    }
    if i == nvars {
        *best = size;
        return;
    }
    let with = chosen | (1 << i);
    if !masks.iter().any(|&m| m & with == m) {
        search(i + 1, nvars, with, masks, best);
    }
    search(i + 1, nvars, chosen, masks, best);
}

pub fn krull_dimension_of<F: Field>(gb: &GroebnerBasis<F>) -> i64 {
    krull_from_leads(&gb.leading_monomials(), gb.nvars())
}

/// Number of standard monomials, i.e. `dim_k k[x]/I`, when finite.
pub fn quotient_dimension<F: Field>(gb: &GroebnerBasis<F>) -> Option<u64> {
    standard_monomials(gb).map(|v| v.len() as u64)
}

/// Monomials outside the leading-term ideal, when there are finitely many,
/// in increasing degree.
pub fn standard_monomials<F: Field>(gb: &GroebnerBasis<F>) -> Option<Vec<Monomial>> {
    if krull_dimension_of(gb) > 0 {
        return None;
    }
    let leads = gb.leading_monomials();
    let mut out = Vec::new();
    let mut deg = 0;
    loop {
        let before = out.len();
        for m in monomials_of_degree(gb.nvars(), deg) {
            if !leads.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
        }
        if out.len() == before {
            return Some(out);
        }
        deg += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_sets() {
        // (x0*x1, x2) in 4 vars: {x0,x3} or {x1,x3}
        let leads = [Monomial::new(&[1, 1, 0, 0]), Monomial::new(&[0, 0, 1, 0])];
        assert_eq!(krull_from_leads(&leads, 4), 2);
        assert_eq!(krull_from_leads(&[], 3), 3);
        assert_eq!(krull_from_leads(&[Monomial::ONE], 3), -1);
        let all: Vec<Monomial> = (0..3).map(|i| Monomial::var(i, 2)).collect();
        assert_eq!(krull_from_leads(&all, 3), 0);
    }
}
