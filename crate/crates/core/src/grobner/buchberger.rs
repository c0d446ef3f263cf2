use std::cmp::Ordering;

use crate::polyring::{Field, Monomial, Polynomial};

use super::order::MonomialOrder;
use super::{GbConfig, GrobnerError, Ideal};

type Term<E> = (Monomial, E);

/// Sorts terms into decreasing `order`; input terms must have distinct
/// monomials.
pub(crate) fn sort_terms<E>(terms: &mut [Term<E>], order: MonomialOrder) {
    terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
}

struct Work<'a, F: Field> {
    field: &'a F,
    order: MonomialOrder,
    steps: u64,
    cap: u64,
}

impl<'a, F: Field> Work<'a, F> {
    fn tick(&mut self) -> Result<(), GrobnerError> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(GrobnerError::StepCap { cap: self.cap });
        }
        Ok(())
    }

    /// `a - c * q * g` where every term of the result is a merge of `a` and
    /// the shifted `g`.
    fn sub_scaled(&self, a: &[Term<F::Elem>], c: &F::Elem, q: &Monomial, g: &[Term<F::Elem>]) -> Vec<Term<F::Elem>> {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < g.len() {
            let gm = g[j].0.mul(q);
            match self.order.cmp(&a[i].0, &gm) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm, f.neg(&f.mul(c, &g[j].1))));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(&a[i].1, &f.mul(c, &g[j].1));
                    if !f.is_zero(&v) {
                        out.push((gm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &g[j..] {
            out.push((t.0.mul(q), f.neg(&f.mul(c, &t.1))));
        }
        out
    }

    /// Full reduction of `h` modulo monic `reducers`.
    fn reduce(&mut self, mut h: Vec<Term<F::Elem>>, reducers: &[&Basis<F::Elem>]) -> Result<Vec<Term<F::Elem>>, GrobnerError> {
        let mut rem = Vec::new();
        let mut start = 0;
        while start < h.len() {
            let (m, c) = h[start].clone();
            let mask = m.support_mask();
            let hit = reducers
                .iter()
                .find(|g| g.mask & !mask == 0 && g.lead().divides(&m));
            match hit {
                Some(g) => {
                    self.tick()?;
                    let q = g.lead().quotient_of(&m).expect("divides");
                    h = self.sub_scaled(&h[start + 1..], &c, &q, &g.terms[1..]);
                    start = 0;
                }
                None => {
                    rem.push((m, c));
                    start += 1;
                }
            }
        }
        Ok(rem)
    }

    fn make_monic(&self, terms: &mut [Term<F::Elem>]) {
        if let Some((_, lc)) = terms.first() {
            if !self.field.is_one(lc) {
                let inv = self.field.inv(lc).expect("nonzero");
                for t in terms.iter_mut() {
                    t.1 = self.field.mul(&t.1, &inv);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Basis<E> {
    pub(crate) terms: Vec<Term<E>>,
    pub(crate) mask: u32,
    sugar: u32,
}

impl<E> Basis<E> {
    fn new(terms: Vec<Term<E>>, sugar: u32) -> Self {
        let mask = terms[0].0.support_mask();
        Basis { terms, mask, sugar }
    }

    #[inline]
    pub(crate) fn lead(&self) -> &Monomial {
        &self.terms[0].0
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// A reduced Gröbner basis: monic, no leading monomial divides another,
/// tails fully reduced. Elements are sorted by increasing leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    nvars: usize,
    order: MonomialOrder,
    polys: Vec<Vec<Term<F::Elem>>>,
    steps: u64,
}

pub fn groebner_basis<F: Field>(
    ideal: &Ideal<F>,
    order: MonomialOrder,
    cfg: &GbConfig,
) -> Result<GroebnerBasis<F>, GrobnerError> {
    let field = ideal.field().clone();
    let nvars = ideal.nvars();
    let mut w = Work {
        field: &field,
        order,
        steps: 0,
        cap: cfg.step_cap,
    };
    let mut store: Vec<Basis<F::Elem>> = Vec::new();
    let mut active: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut inputs: Vec<(Vec<Term<F::Elem>>, u32)> = ideal
        .gens()
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut t = g.terms().to_vec();
            sort_terms(&mut t, order);
            (t, g.total_degree().unwrap_or(0))
        })
        .collect();
    inputs.sort_by_key(|(_, s)| *s);

    for (t, sugar) in inputs {
        let reducers: Vec<&Basis<F::Elem>> = active_refs(&store, &active);
        let mut h = w.reduce(t, &reducers)?;
        if h.is_empty() {
            continue;
        }
        w.make_monic(&mut h);
        insert(&mut store, &mut active, &mut pairs, Basis::new(h, sugar));
    }

    while let Some(pos) = select(&pairs, order) {
        let p = pairs.swap_remove(pos);
        let (gi, gj) = (&store[p.i], &store[p.j]);
        let qi = gi.lead().quotient_of(&p.lcm).unwrap();
        let qj = gj.lead().quotient_of(&p.lcm).unwrap();
        // S-polynomial of monic elements; leading terms cancel
        let a: Vec<Term<F::Elem>> = gi.terms[1..].iter().map(|(m, c)| (m.mul(&qi), c.clone())).collect();
        let s = w.sub_scaled(&a, &field.one(), &qj, &gj.terms[1..]);
        w.tick()?;
        let reducers = active_refs(&store, &active);
        let mut h = w.reduce(s, &reducers)?;
        if h.is_empty() {
            continue;
        }
        w.make_monic(&mut h);
        insert(&mut store, &mut active, &mut pairs, Basis::new(h, p.sugar));
    }

    // interreduce the minimal basis
    let idx: Vec<usize> = (0..store.len()).filter(|&i| active[i]).collect();
    let mut polys = Vec::with_capacity(idx.len());
    for &i in &idx {
        let others: Vec<&Basis<F::Elem>> = idx.iter().filter(|&&j| j != i).map(|&j| &store[j]).collect();
        let lead = store[i].terms[0].clone();
        let mut tail = w.reduce(store[i].terms[1..].to_vec(), &others)?;
        let mut t = vec![lead];
        t.append(&mut tail);
        polys.push(t);
    }
    polys.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let steps = w.steps;
    Ok(GroebnerBasis {
        field: field.clone(),
        nvars,
        order,
        polys,
        steps,
    })
}

fn active_refs<'a, E>(store: &'a [Basis<E>], active: &[bool]) -> Vec<&'a Basis<E>> {
    store.iter().zip(active).filter(|(_, a)| **a).map(|(b, _)| b).collect()
}

fn select(pairs: &[Pair], order: MonomialOrder) -> Option<usize> {
    (0..pairs.len()).min_by(|&a, &b| {
        pairs[a]
            .sugar
            .cmp(&pairs[b].sugar)
            .then_with(|| order.cmp(&pairs[a].lcm, &pairs[b].lcm))
    })
}

/// Gebauer–Möller update for a new element `h`.
fn insert<E>(store: &mut Vec<Basis<E>>, active: &mut Vec<bool>, pairs: &mut Vec<Pair>, h: Basis<E>) {
    let hi = store.len();
    let lt_h = *h.lead();
    let sugar_h = h.sugar;
    let cands: Vec<usize> = (0..store.len()).filter(|&i| active[i]).collect();
    let lcms: Vec<Monomial> = cands.iter().map(|&g| lt_h.lcm(store[g].lead())).collect();

    let mut kept: Vec<usize> = Vec::new();
    for (pos, &g1) in cands.iter().enumerate() {
        let l1 = &lcms[pos];
        if lt_h.is_coprime(store[g1].lead()) {
            kept.push(pos);
            continue;
        }
        let dominated = lcms[pos + 1..].iter().any(|l2| l2.divides(l1))
            || kept.iter().any(|&k| lcms[k].divides(l1));
        if !dominated {
            kept.push(pos);
        }
    }

    pairs.retain(|p| {
        !(lt_h.divides(&p.lcm)
            && lt_h.lcm(store[p.i].lead()) != p.lcm
            && lt_h.lcm(store[p.j].lead()) != p.lcm)
    });

    for pos in kept {
        let g = cands[pos];
        if lt_h.is_coprime(store[g].lead()) {
            continue;
        }
        let l = lcms[pos];
        let lg = store[g].lead();
        let sugar = (sugar_h + l.degree() - lt_h.degree()).max(store[g].sugar + l.degree() - lg.degree());
        pairs.push(Pair { i: g, j: hi, lcm: l, sugar });
    }

    for &g in &cands {
        if lt_h.divides(store[g].lead()) {
            active[g] = false;
        }
    }
    store.push(h);
    active.push(true);
}

impl<F: Field> GroebnerBasis<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Reduction steps spent computing the basis.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p[0].0).collect()
    }

    pub fn polynomials(&self) -> Vec<Polynomial<F>> {
        self.polys
            .iter()
            .map(|t| Polynomial::from_terms(self.field.clone(), self.nvars, t.iter().cloned()))
            .collect()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p[0].0.degree() == 0)
    }

    #[cfg(test)]
    fn raw(&self) -> &[Vec<Term<F::Elem>>] {
        &self.polys
    }

    fn as_basis(&self) -> Vec<Basis<F::Elem>> {
        self.polys.iter().map(|t| Basis::new(t.clone(), 0)).collect()
    }

    pub fn normal_form(&self, p: &Polynomial<F>, cfg: &GbConfig) -> Result<Polynomial<F>, GrobnerError> {
        if p.nvars() != self.nvars {
            return Err(GrobnerError::RingMismatch);
        }
        let mut w = Work {
            field: &self.field,
            order: self.order,
            steps: 0,
            cap: cfg.step_cap,
        };
        let basis = self.as_basis();
        let refs: Vec<&Basis<F::Elem>> = basis.iter().collect();
        let mut t = p.terms().to_vec();
        sort_terms(&mut t, self.order);
        let r = w.reduce(t, &refs)?;
        Ok(Polynomial::from_terms(self.field.clone(), self.nvars, r))
    }

    pub fn contains(&self, p: &Polynomial<F>, cfg: &GbConfig) -> Result<bool, GrobnerError> {
        Ok(self.normal_form(p, cfg)?.is_zero())
    }

    /// Normal form of a term list already sorted in this basis' order.
    pub(crate) fn reduce_sorted(&self, t: Vec<Term<F::Elem>>, cfg: &GbConfig) -> Result<Vec<Term<F::Elem>>, GrobnerError> {
        let mut w = Work {
            field: &self.field,
            order: self.order,
            steps: 0,
            cap: cfg.step_cap,
        };
        let basis = self.as_basis();
        let refs: Vec<&Basis<F::Elem>> = basis.iter().collect();
        w.reduce(t, &refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, PrimeField};

    fn k() -> PrimeField {
        PrimeField::new(10007).unwrap()
    }

    fn ideal(gens: &[&str], nvars: usize) -> Ideal<PrimeField> {
        Ideal::new(
            k(),
            nvars,
            gens.iter().map(|g| parse_poly(g, nvars, k()).unwrap()).collect(),
        )
        .unwrap()
    }

    fn basis_strings(gb: &GroebnerBasis<PrimeField>) -> Vec<String> {
        gb.polynomials().iter().map(|p| p.to_string()).collect()
    }

    /// Every S-polynomial of the output reduces to zero.
    fn assert_buchberger(gb: &GroebnerBasis<PrimeField>) {
        let f = k();
        let polys = gb.raw();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let l = polys[i][0].0.lcm(&polys[j][0].0);
                let qi = polys[i][0].0.quotient_of(&l).unwrap();
                let qj = polys[j][0].0.quotient_of(&l).unwrap();
                let a = Polynomial::from_terms(f, gb.nvars(), polys[i].iter().map(|(m, c)| (m.mul(&qi), *c)));
                let b = Polynomial::from_terms(f, gb.nvars(), polys[j].iter().map(|(m, c)| (m.mul(&qj), *c)));
                let s = a.sub(&b);
                assert!(gb.contains(&s, &GbConfig::default()).unwrap());
            }
        }
    }

    #[test]
    fn variables_are_a_basis() {
        let gb = groebner_basis(&ideal(&["x1", "x0"], 2), MonomialOrder::GrevLex, &GbConfig::default()).unwrap();
        assert_eq!(basis_strings(&gb), vec!["x1", "x0"]);
    }

    #[test]
    fn quadric_plus_hyperplane() {
        let gb = groebner_basis(&ideal(&["x0*x3 - x1*x2", "x0"], 4), MonomialOrder::GrevLex, &GbConfig::default()).unwrap();
        let mut s = basis_strings(&gb);
        s.sort();
        assert_eq!(s, vec!["x0", "x1*x2"]);
        assert_buchberger(&gb);
    }

    #[test]
    fn duplicate_generator() {
        let a = groebner_basis(&ideal(&["x0^2 - x1*x2", "x0^2 - x1*x2"], 3), MonomialOrder::GrevLex, &GbConfig::default()).unwrap();
        let b = groebner_basis(&ideal(&["x0^2 - x1*x2"], 3), MonomialOrder::GrevLex, &GbConfig::default()).unwrap();
        assert_eq!(a.polynomials(), b.polynomials());
    }

    #[test]
    fn twisted_cubic_all_orders() {
        let gens = ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"];
        for order in [MonomialOrder::GrevLex, MonomialOrder::Lex, MonomialOrder::Elimination(2)] {
            let gb = groebner_basis(&ideal(&gens, 4), order, &GbConfig::default()).unwrap();
            assert_buchberger(&gb);
            for g in gens {
                assert!(gb.contains(&parse_poly(g, 4, k()).unwrap(), &GbConfig::default()).unwrap());
            }
        }
    }

    #[test]
    fn step_cap_is_an_error() {
        let i = ideal(&["x0^3 + x1^3 + x2^3 + x3^3", "x0*x1*x2 + x3^3", "x0^2*x3 + x1*x2^2"], 4);
        let r = groebner_basis(&i, MonomialOrder::GrevLex, &GbConfig { step_cap: 3 });
        assert_eq!(r.unwrap_err(), GrobnerError::StepCap { cap: 3 });
    }

    #[test]
    fn unit_ideal() {
        let gb = groebner_basis(&ideal(&["x0 + 1", "x0"], 2), MonomialOrder::GrevLex, &GbConfig::default()).unwrap();
        assert!(gb.is_unit());
        assert_eq!(basis_strings(&gb), vec!["1"]);
    }
}
