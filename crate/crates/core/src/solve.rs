//! Rational points of small polynomial systems over a prime field.

use rand::Rng;
use thiserror::Error;

use crate::grobner::{groebner_basis, sort_terms, GbConfig, GrobnerError, Ideal, MonomialOrder};
use crate::polyring::linalg::{compose_linear, rref, LinalgError, Matrix};
use crate::polyring::{
    monomials_of_degree, Field, Monomial, PolyError, Polynomial, PrimeField, ProjPoint, UniPoly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("system is not zero-dimensional")]
    PositiveDimensional,
    #[error("subspace basis has rank below its size")]
    DegenerateSubspace,
    #[error(transparent)]
    Grobner(#[from] GrobnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `P(B y)` for an `N x m` matrix `B` of full column rank, as a polynomial in
/// `m` variables.
pub fn restrict_to_subspace(p: &Polynomial<PrimeField>, basis: &Matrix<u64>) -> Result<Polynomial<PrimeField>, SolveError> {
    let f = *p.field();
    let n = p.nvars();
    let m = basis.first().map_or(0, |r| r.len());
    // complete B to an invertible matrix with coordinate vectors
    let mut cols: Vec<Vec<u64>> = (0..m).map(|j| basis.iter().map(|r| r[j]).collect()).collect();
    let mut probe: Matrix<u64> = cols.clone();
    let base_rank = rref(&f, &mut probe).len();
    if base_rank < m {
        return Err(SolveError::DegenerateSubspace);
    }
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![0u64; n];
        e[i] = 1;
        let mut trial = cols.clone();
        trial.push(e.clone());
        let mut t = trial.clone();
        if rref(&f, &mut t).len() == trial.len() {
            cols = trial;
        }
    }
    let square: Matrix<u64> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let full = compose_linear(p, &square)?;
    let kept = full.terms().iter().filter(|(mono, _)| mono.support_len() <= m).cloned();
    Ok(Polynomial::from_terms(f, m, kept))
}

/// Dense nested evaluator for a list of polynomials in `k` variables of
/// total degree at most `deg`.
struct Nested {
    q: u64,
    /// `levels[l]`: for each monomial in variables `l..k` (degree <= deg),
    /// its exponent in variable `l` and the index of the cofactor in level
    /// `l + 1`.
    levels: Vec<Vec<(usize, usize)>>,
    sizes: Vec<usize>,
    top: std::collections::HashMap<Monomial, usize>,
    /// `pow[a][e] = a^e`.
    pow: Vec<Vec<u64>>,
}

impl Nested {
    fn new(q: u64, k: usize, deg: u32) -> Self {
        let mut index: Vec<std::collections::HashMap<Monomial, usize>> = Vec::new();
        let mut lists: Vec<Vec<Monomial>> = Vec::new();
        for l in 0..=k {
            let vars = k - l;
            let mut list = Vec::new();
            for t in 0..=deg {
                for mono in monomials_of_degree(vars, t) {
                    list.push(mono);
                }
            }
            if vars == 0 {
                list = vec![Monomial::ONE];
            }
            index.push(list.iter().enumerate().map(|(i, m)| (*m, i)).collect());
            lists.push(list);
        }
        // lists[l] uses local variables 0..(k-l); variable 0 is the one
        // substituted at level l
        let mut levels = Vec::new();
        for l in 0..k {
            let row = lists[l]
                .iter()
                .map(|mono| {
                    let e = mono.exp(0) as usize;
                    let rest: Vec<u16> = (1..k - l).map(|i| mono.exp(i)).collect();
                    (e, index[l + 1][&Monomial::new(&rest)])
                })
                .collect();
            levels.push(row);
        }
        let sizes = lists.iter().map(|l| l.len()).collect();
        let pow = (0..q)
            .map(|a| {
                let mut row = vec![1u64; deg as usize + 1];
                for e in 1..=deg as usize {
                    row[e] = row[e - 1] * a % q;
                }
                row
            })
            .collect();
        let top = index.swap_remove(0);
        Nested { q, levels, sizes, top, pow }
    }

    fn dense(&self, p: &Polynomial<PrimeField>, vars: &[usize]) -> Vec<u64> {
        let mut out = vec![0u64; self.sizes[0]];
        for (mono, c) in p.terms() {
            let local: Vec<u16> = vars.iter().map(|&v| mono.exp(v)).collect();
            let idx = self.top[&Monomial::new(&local)];
            out[idx] = (out[idx] + c) % self.q;
        }
        out
    }

    /// Collects every assignment on which all polynomials vanish.
    fn zeros(&self, polys: Vec<Vec<u64>>, level: usize, assign: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if level == self.levels.len() {
            if polys.iter().all(|p| p[0] == 0) {
                out.push(assign.clone());
            }
            return;
        }
        let q = self.q;
        let next_size = self.sizes[level + 1];
        for a in 0..q {
            let pw = &self.pow[a as usize];
            let mut next = Vec::with_capacity(polys.len());
            let mut dead = false;
            for p in &polys {
                let mut r = vec![0u64; next_size];
                for (c, &(e, j)) in p.iter().zip(&self.levels[level]) {
                    if *c != 0 {
                        r[j] = (r[j] + c * pw[e]) % q;
                    }
                }
                // a nonzero constant can never vanish
                if level + 1 == self.levels.len() && r[0] != 0 {
                    dead = true;
                    break;
                }
                if next_size > 1 && r[0] != 0 && r[1..].iter().all(|&x| x == 0) {
                    dead = true;
                    break;
                }
                next.push(r);
            }
            if dead {
                continue;
            }
            assign.push(a);
            self.zeros(next, level + 1, assign, out);
            assign.pop();
        }
    }
}

/// Number of points of `P^{m-1}(F_q)`.
pub fn projective_point_count(q: u64, m: usize) -> u128 {
    (0..m).map(|i| (q as u128).pow(i as u32)).sum()
}

/// All rational points of the projective scheme cut out by homogeneous
/// `polys` in `m` variables, by exhaustive evaluation.
pub fn enumerate_projective_zeros(polys: &[Polynomial<PrimeField>]) -> Vec<ProjPoint<PrimeField>> {
    let Some(first) = polys.first() else {
        return vec![];
    };
    let f = *first.field();
    let m = first.nvars();
    let deg = polys.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    let mut out = Vec::new();
    for pivot in 0..m {
        let free: Vec<usize> = (pivot + 1..m).collect();
        let nested = Nested::new(f.modulus(), free.len(), deg);
        let dense: Vec<Vec<u64>> = polys
            .iter()
            .map(|p| {
                let mut c = p.clone();
                for z in 0..pivot {
                    c = c.substitute_value(z, &0).expect("in range");
                }
                c = c.substitute_value(pivot, &1).expect("in range");
                nested.dense(&c, &free)
            })
            .collect();
        let mut found = Vec::new();
        nested.zeros(dense, 0, &mut Vec::new(), &mut found);
        for a in found {
            let mut coords = vec![0u64; m];
            coords[pivot] = 1;
            for (v, val) in free.iter().zip(a) {
                coords[*v] = val;
            }
            out.push(ProjPoint::new(&f, coords).expect("pivot is one"));
        }
    }
    out
}

/// Rational points of a zero-dimensional projective scheme, chart by chart,
/// through Gröbner bases, minimal polynomials and univariate roots.
pub fn projective_rational_points<R: Rng + ?Sized>(
    polys: &[Polynomial<PrimeField>],
    cfg: &GbConfig,
    rng: &mut R,
) -> Result<Vec<ProjPoint<PrimeField>>, SolveError> {
    let Some(first) = polys.first() else {
        return Err(SolveError::PositiveDimensional);
    };
    let f = *first.field();
    let m = first.nvars();
    let mut out = Vec::new();
    for pivot in 0..m {
        let chart: Vec<Polynomial<PrimeField>> = polys
            .iter()
            .map(|p| {
                let mut c = p.clone();
                for z in 0..pivot {
                    c = c.substitute_value(z, &0)?;
                }
                c.substitute_value(pivot, &1)
            })
            .collect::<Result<_, _>>()?;
        // chart variables are pivot+1..m; others no longer occur
        let mut fixed = vec![0u64; m];
        fixed[pivot] = 1;
        let free: Vec<usize> = (pivot + 1..m).collect();
        for sol in affine_points(&f, m, chart, &free, cfg, rng)? {
            let mut coords = fixed.clone();
            for (v, val) in &sol {
                coords[*v] = *val;
            }
            out.push(ProjPoint::new(&f, coords).expect("pivot is one"));
        }
    }
    Ok(out)
}

fn affine_points<R: Rng + ?Sized>(
    f: &PrimeField,
    nvars: usize,
    polys: Vec<Polynomial<PrimeField>>,
    free: &[usize],
    cfg: &GbConfig,
    rng: &mut R,
) -> Result<Vec<Vec<(usize, u64)>>, SolveError> {
    let ideal = Ideal::new(*f, nvars, polys)?;
    let gb = groebner_basis(&ideal, MonomialOrder::GrevLex, cfg)?;
    if gb.is_unit() {
        return Ok(vec![]);
    }
    let Some((&x, rest)) = free.split_last() else {
        // constants only; nonunit means the zero polynomial remains
        return Ok(vec![vec![]]);
    };
    // only free variables occur in the basis
    let leads = gb.leading_monomials();
    let local: Vec<Monomial> = leads
        .iter()
        .map(|l| Monomial::new(&free.iter().map(|&v| l.exp(v)).collect::<Vec<_>>()))
        .collect();
    if crate::grobner::krull_from_leads(&local, free.len()) > 0 {
        return Err(SolveError::PositiveDimensional);
    }
    let basis = free_standard_monomials(&leads, free, nvars);
    let minpoly = minimal_polynomial(&gb, x, &basis, cfg)?;
    let roots = minpoly.roots(rng);
    let mut out = Vec::new();
    for r in roots {
        let sub: Vec<Polynomial<PrimeField>> = gb
            .polynomials()
            .iter()
            .map(|g| g.substitute_value(x, &r))
            .collect::<Result<_, _>>()?;
        for mut sol in affine_points(f, nvars, sub, rest, cfg, rng)? {
            sol.push((x, r));
            out.push(sol);
        }
    }
    Ok(out)
}

fn free_standard_monomials(leads: &[Monomial], free: &[usize], nvars: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut deg = 0;
    loop {
        let before = out.len();
        for local in monomials_of_degree(free.len(), deg) {
            let mut mono = Monomial::ONE;
            for (i, &v) in free.iter().enumerate() {
                mono.set_exp(v, local.exp(i));
            }
            debug_assert!(mono.support_len() <= nvars);
            if !leads.iter().any(|l| l.divides(&mono)) {
                out.push(mono);
            }
        }
        if out.len() == before {
            return out;
        }
        deg += 1;
    }
}

/// Minimal polynomial of multiplication by `x_var` on `k[x]/I`, found as the
/// first linear dependency among the normal forms of `1, x, x^2, ...`.
fn minimal_polynomial(
    gb: &crate::grobner::GroebnerBasis<PrimeField>,
    var: usize,
    basis: &[Monomial],
    cfg: &GbConfig,
) -> Result<UniPoly, SolveError> {
    let f = *gb.field();
    let nb = basis.len();
    let index: std::collections::HashMap<Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    // echelon rows: (vector over the standard basis, combination of powers)
    let mut rows: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    let mut cur: Vec<(Monomial, u64)> = vec![(Monomial::ONE, 1)];
    for k in 0..=nb {
        let mut v = vec![0u64; nb];
        for (m, c) in &cur {
            v[index[m]] = *c;
        }
        let mut comb = vec![0u64; nb + 1];
        comb[k] = 1;
        for (rv, rc, piv) in &rows {
            let factor = v[*piv];
            if factor == 0 {
                continue;
            }
            for j in 0..nb {
                v[j] = f.sub(&v[j], &f.mul(&factor, &rv[j]));
            }
            for j in 0..=nb {
                comb[j] = f.sub(&comb[j], &f.mul(&factor, &rc[j]));
            }
        }
        match v.iter().position(|&c| c != 0) {
            None => return Ok(UniPoly::new(f, comb[..=k].to_vec())),
            Some(piv) => {
                let inv = f.inv(&v[piv]).unwrap();
                for c in v.iter_mut() {
                    *c = f.mul(c, &inv);
                }
                for c in comb.iter_mut() {
                    *c = f.mul(c, &inv);
                }
                rows.push((v, comb, piv));
            }
        }
        // next power: x * NF(x^k), reduced again
        let shift = Monomial::var(var, 1);
        let mut next: Vec<(Monomial, u64)> = cur.iter().map(|(m, c)| (m.mul(&shift), *c)).collect();
        sort_terms(&mut next, gb.order());
        cur = gb.reduce_sorted(next, cfg)?;
    }
    Err(SolveError::PositiveDimensional)
}
