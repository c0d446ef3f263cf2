use crate::polyring::{Monomial, MAX_VARS};

/// Hilbert-series numerator `N(s)` of `k[x_0..x_{n-1}]/M` for a monomial
/// ideal `M`, so that the series is `N(s) / (1 - s)^n`.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i128> {
    let mut gens = minimalize(gens.to_vec());
    numerator(&mut gens)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for m in gens {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i128>, b: &[i128], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (i, y) in b.iter().enumerate() {
        a[i + shift] += y;
    }
}

fn numerator(gens: &mut Vec<Monomial>) -> Vec<i128> {
    if gens.iter().any(|m| m.degree() == 0) {
        return vec![0];
    }
    // base case: pairwise coprime generators
    let mut seen = 0u32;
    let mut coprime = true;
    for m in gens.iter() {
        let mask = m.support_mask();
        if mask & seen != 0 {
            coprime = false;
            break;
        }
        seen |= mask;
    }
    if coprime {
        let mut acc = vec![1i128];
        for m in gens.iter() {
            let mut f = vec![0i128; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    // pivot on the variable occurring in the most generators
    let mut counts = [0usize; MAX_VARS];
    for m in gens.iter() {
        for (i, c) in counts.iter_mut().enumerate() {
            if m.exp(i) > 0 {
                *c += 1;
            }
        }
    }
    let x = (0..MAX_VARS).max_by_key(|&i| counts[i]).unwrap();
    // exponents from mixed generators only, so the pivot is never in M
    let mut exps: Vec<u16> = gens
        .iter()
        .filter(|m| m.exp(x) > 0 && m.degree() > m.exp(x) as u32)
        .map(|m| m.exp(x))
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];
    let p = Monomial::var(x, e);

    // N(M) = N(M + p) + s^e N(M : p)
    let mut plus = gens.clone();
    plus.push(p);
    let mut plus = minimalize(plus);
    let mut colon = minimalize(gens.iter().map(|g| g.gcd(&p).quotient_of(g).unwrap()).collect());
    let mut acc = numerator(&mut plus);
    let rest = numerator(&mut colon);
    poly_add_shifted(&mut acc, &rest, e as usize);
    while acc.len() > 1 && acc.last() == Some(&0) {
        acc.pop();
    }
    acc
}

pub fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Value at degree `t` of the Hilbert function with numerator `num` in a
/// ring with `nvars` variables.
pub fn hilbert_value(num: &[i128], nvars: usize, t: u64) -> i128 {
    let t = t as i64;
    if nvars == 0 {
        return num.get(t as usize).copied().unwrap_or(0);
    }
    let n = nvars as i64;
    num.iter()
        .enumerate()
        .map(|(k, c)| c * binomial(t - k as i64 + n - 1, n - 1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::monomials_of_degree;

    fn brute(gens: &[Monomial], nvars: usize, t: u32) -> i128 {
        monomials_of_degree(nvars, t)
            .into_iter()
            .filter(|m| !gens.iter().any(|g| g.divides(m)))
            .count() as i128
    }

    #[test]
    fn matches_monomial_counting() {
        let gens = vec![
            Monomial::new(&[2, 1, 0, 0]),
            Monomial::new(&[0, 3, 1, 0]),
            Monomial::new(&[1, 0, 2, 1]),
            Monomial::new(&[0, 0, 0, 4]),
            Monomial::new(&[1, 1, 1, 0]),
        ];
        let num = hilbert_numerator(&gens);
        for t in 0..12 {
            assert_eq!(hilbert_value(&num, 4, t), brute(&gens, 4, t as u32), "t={t}");
        }
    }

    #[test]
    fn two_variables_killed() {
        let gens = [Monomial::var(0, 1), Monomial::var(1, 1)];
        let num = hilbert_numerator(&gens);
        assert_eq!(hilbert_value(&num, 4, 2), 3);
        assert_eq!(hilbert_value(&hilbert_numerator(&[]), 4, 3), binomial(6, 3));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
    }
}
