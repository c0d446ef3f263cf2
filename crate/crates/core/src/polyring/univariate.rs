use rand::Rng;

use super::field::{Field, PrimeField};

/// Dense univariate polynomial over a prime field, coefficients from the
/// constant term upward with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c = field.reduce(*c);
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, coeffs: vec![] }
    }

    pub fn x(field: PrimeField) -> Self {
        UniPoly::new(field, vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Multiplicity of 0 as a root; `None` for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn eval(&self, t: u64) -> u64 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &t), c))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.leading()).unwrap();
        UniPoly::new(self.field, self.coeffs.iter().map(|c| self.field.mul(c, &inv)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = o.coeffs.get(i).copied().unwrap_or(0);
                self.field.add(&a, &b)
            })
            .collect();
        UniPoly::new(self.field, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = o.coeffs.get(i).copied().unwrap_or(0);
                self.field.sub(&a, &b)
            })
            .collect();
        UniPoly::new(self.field, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.field);
        }
        let f = &self.field;
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        UniPoly::new(self.field, c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(&d.leading()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(self.field), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(&r[i], &inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, b) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = f.sub(&r[k], &f.mul(&c, b));
            }
        }
        (UniPoly::new(self.field, q), UniPoly::new(self.field, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(a, &f.from_u64(i as u64)))
            .collect();
        UniPoly::new(self.field, c)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = UniPoly::new(self.field, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in the base field, sorted. Uses equal-degree splitting
    /// for large fields and exhaustive evaluation for tiny ones.
    pub fn roots<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let q = self.field.modulus();
        if self.is_zero() {
            return self.field.elements().collect();
        }
        if self.degree() == Some(0) {
            return vec![];
        }
        if q <= 64 {
            return self.field.elements().filter(|&t| self.eval(t) == 0).collect();
        }
        let f = self.monic();
        let x = UniPoly::x(self.field);
        let xq = x.powmod(q, &f);
        let mut g = f.gcd(&xq.sub(&x));
        let mut out = Vec::new();
        if g.eval(0) == 0 {
            out.push(0);
            g = g.divrem(&x).0;
        }
        split_linear(&g, rng, &mut out);
        out.sort_unstable();
        out
    }
}

fn split_linear<R: Rng + ?Sized>(g: &UniPoly, rng: &mut R, out: &mut Vec<u64>) {
    let f = &g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(f.neg(&g.coeffs[0]));
        }
        Some(deg) => {
            let q = f.modulus();
            loop {
                let a = rng.random_range(0..q);
                let shifted = UniPoly::new(*f, vec![a, 1]);
                let h = shifted
                    .powmod((q - 1) / 2, g)
                    .sub(&UniPoly::new(*f, vec![1]))
                    .gcd(g);
                let dh = h.degree().unwrap_or(0);
                if dh > 0 && dh < deg {
                    split_linear(&h, rng, out);
                    split_linear(&g.divrem(&h).0, rng, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roots_of_split_polynomial() {
        let k = PrimeField::new(10007).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let roots = [0u64, 5, 77, 9000, 10006];
        let mut p = UniPoly::new(k, vec![1]);
        for r in roots {
            p = p.mul(&UniPoly::new(k, vec![k.neg(&r), 1]));
        }
        p = p.mul(&UniPoly::new(k, vec![k.neg(&5), 0, 1]));
        let found = p.roots(&mut rng);
        let mut expect = roots.to_vec();
        let extra: Vec<u64> = (0..10007u64).filter(|t| (t * t) % 10007 == 5).collect();
        expect.extend(extra);
        expect.sort();
        expect.dedup();
        assert_eq!(found, expect);
    }

    #[test]
    fn fermat_quartic_line() {
        let k = PrimeField::new(10009).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // t^4 + 1
        let p = UniPoly::new(k, vec![1, 0, 0, 0, 1]);
        let roots = p.roots(&mut rng);
        for r in &roots {
            assert_eq!(p.eval(*r), 0);
        }
        let brute: Vec<u64> = (0..10009u64).filter(|&t| p.eval(t) == 0).collect();
        assert_eq!(roots, brute);
    }

    #[test]
    fn divrem_identity() {
        let k = PrimeField::new(101).unwrap();
        let a = UniPoly::new(k, vec![3, 1, 4, 1, 5, 9, 2, 6]);
        let b = UniPoly::new(k, vec![2, 7, 1, 8]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 3);
        assert_eq!(UniPoly::new(k, vec![0, 0, 3]).order_at_zero(), Some(2));
    }
}
