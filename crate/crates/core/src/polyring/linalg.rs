use thiserror::Error;

use super::field::Field;
use super::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("expected a {expected}x{expected} matrix")]
    Shape { expected: usize },
}

/// Dense matrix stored row by row.
pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

pub fn mat_vec<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
        })
        .collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(f.zero(), |acc, (x, brow)| f.add(&acc, &f.mul(x, &brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Matrix whose columns are the given vectors.
pub fn from_columns<E: Clone>(cols: &[Vec<E>]) -> Matrix<E> {
    let n = cols.first().map_or(0, |c| c.len());
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Row-reduces in place, returning the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut m = m.clone();
    rref(f, &mut m).len()
}

/// Basis of the right kernel `{v : m v = 0}`.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = m.clone();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][fc]);
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>, LinalgError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Shape { expected: n });
    }
    let id = identity(f, n);
    let mut aug: Matrix<F::Elem> = m
        .iter()
        .zip(&id)
        .map(|(r, e)| r.iter().chain(e).cloned().collect())
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(LinalgError::Singular);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Elementary column operation used to rebuild a substitution from a
/// matrix factorization.
#[derive(Debug, Clone)]
enum Elementary<E> {
    Swap(usize, usize),
    /// `x_i <- c x_i`
    Scale(usize, E),
    /// `x_i <- x_i + c x_j`
    Shear(usize, usize, E),
}

/// `P(M u)`: substitutes `x_i <- sum_j M[i][j] u_j`. The matrix is factored
/// into elementary operations so each step is a cheap substitution.
pub fn compose_linear<F: Field>(
    p: &Polynomial<F>,
    m: &Matrix<F::Elem>,
) -> Result<Polynomial<F>, LinalgError> {
    let f = p.field();
    let n = p.nvars();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Shape { expected: n });
    }
    // Row-reduce M to I recording operations R_k ... R_1 M = I, so
    // M = R_1^{-1} ... R_k^{-1} and P∘M = (((P∘R_1^{-1})∘R_2^{-1})...).
    let mut a = m.clone();
    let mut ops = Vec::new();
    for c in 0..n {
        let pr = (c..n).find(|&i| !f.is_zero(&a[i][c])).ok_or(LinalgError::Singular)?;
        if pr != c {
            a.swap(pr, c);
            ops.push(Elementary::Swap(pr, c));
        }
        let piv = a[c][c].clone();
        if !f.is_one(&piv) {
            let inv = f.inv(&piv).unwrap();
            for x in a[c].iter_mut() {
                *x = f.mul(x, &inv);
            }
            // R = scale row c by 1/piv, R^{-1} scales coordinate c by piv
            ops.push(Elementary::Scale(c, piv));
        }
        for i in 0..n {
            if i == c || f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = a[i][c].clone();
            for j in 0..n {
                let t = f.mul(&factor, &a[c][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
            // R = row_i -= factor * row_c, R^{-1}: u_i <- u_i + factor u_c
            ops.push(Elementary::Shear(i, c, factor));
        }
    }
    let mut g = p.clone();
    for op in ops {
        g = match op {
            Elementary::Swap(i, j) => g.swap_vars(i, j),
            Elementary::Scale(i, c) => g.scale_var(i, &c),
            Elementary::Shear(i, j, c) => g.shear(i, j, &c),
        };
    }
    Ok(g)
}

/// Reference implementation of [`compose_linear`] by expanding each
/// variable's image term by term.
pub fn compose_linear_naive<F: Field>(p: &Polynomial<F>, m: &Matrix<F::Elem>) -> Polynomial<F> {
    let f = p.field();
    let n = p.nvars();
    let images: Vec<Polynomial<F>> = (0..n)
        .map(|i| {
            Polynomial::from_terms(
                f.clone(),
                n,
                (0..n).map(|j| (super::monomial::Monomial::var(j, 1), m[i][j].clone())),
            )
        })
        .collect();
    let mut acc = Polynomial::zero(f.clone(), n);
    for (mono, c) in p.terms() {
        let mut t = Polynomial::constant(f.clone(), n, c.clone());
        for (i, img) in images.iter().enumerate() {
            for _ in 0..mono.exp(i) {
                t = t.mul(img);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::field::PrimeField;
    use crate::polyring::parse::parse_poly;

    #[test]
    fn inverse_roundtrip() {
        let k = PrimeField::new(101).unwrap();
        let m = vec![vec![0, 2, 1], vec![3, 0, 5], vec![1, 1, 1]];
        let inv = inverse(&k, &m).unwrap();
        assert_eq!(mat_mul(&k, &m, &inv), identity(&k, 3));
        let sing = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(inverse(&k, &sing), Err(LinalgError::Singular));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let k = PrimeField::new(101).unwrap();
        let m = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 9]];
        let ker = kernel(&k, &m, 4);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(mat_vec(&k, &m, &v).iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn compose_matches_naive() {
        let k = PrimeField::new(10007).unwrap();
        let p = parse_poly("x0^3 + 4*x0*x1*x2 - x2^2*x1 + 7*x1^3", 3, k).unwrap();
        let m = vec![vec![0, 3, 1], vec![2, 0, 5], vec![1, 1, 0]];
        assert_eq!(compose_linear(&p, &m).unwrap(), compose_linear_naive(&p, &m));
    }
}
