//! Degree of the projection from `p` of the residual intersection
//! `X ∩ V^h_p` onto `Λ^h_p`.
//!
//! Write `x = u_0 p + u_1 b_1 + ... + u_{n+1} b_{n+1}` for random `b_i`, so
//! `F = sum_k c_k(u') u_0^{d-k}`. Then `Λ = V(c_1, ..., c_{h-1}) ⊂ P^n` and
//! the residual points on the line over `u' ∈ Λ` are the roots in `s` of
//! `R = sum_{k >= h} c_k(u') s^{d-k}`. The degree is
//! `dim k[s, u'']/(c, R) / dim k[u'']/(c)` in the affine chart `u'_0 = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SamplerError;
use crate::contact::{line_contact_order, ContactOrder, Hypersurface};
use crate::grobner::{quotient_dimension, GbConfig, Ideal, MonomialOrder};
use crate::polyring::linalg::{compose_linear, from_columns, mat_vec, rank};
use crate::polyring::{restrict_to_line, Field, Polynomial, PrimeField, ProjPoint, UniPoly};
use crate::solve::projective_rational_points;

/// One line of the cone through a rational point of `Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberCheck {
    pub direction: Vec<u64>,
    pub contact: u32,
    /// Degree in `s` of the residual polynomial.
    pub residual: u32,
    pub rational_residual_points: u32,
}

impl FiberCheck {
    pub fn conserves(&self, d: u32) -> bool {
        self.contact + self.residual == d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionRecord {
    pub degree: i64,
    pub expected: i64,
    pub lambda_degree: u64,
    pub fibers: Vec<FiberCheck>,
}

impl ProjectionRecord {
    pub fn passes(&self, d: u32) -> bool {
        self.degree == self.expected
            && self
                .fibers
                .iter()
                .all(|f| f.conserves(d) && f.residual as i64 == self.expected)
    }
}

const ATTEMPTS: u32 = 16;

pub fn verify_projection_degree(
    x: &Hypersurface<PrimeField>,
    p: &ProjPoint<PrimeField>,
    h: u32,
    seed: u64,
    gb: &GbConfig,
) -> Result<ProjectionRecord, SamplerError> {
    let f = *x.field();
    let nv = x.nvars();
    let n = x.n();
    let d = x.d();
    if h < 2 || h > d {
        return Err(crate::contact::ContactError::HOutOfRange { h, d }.into());
    }
    if !x.is_smooth_at(p)? {
        return Err(crate::contact::ContactError::SingularPoint.into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut cols = vec![p.coords().to_vec()];
        for _ in 1..nv {
            cols.push((0..nv).map(|_| rng.random_range(0..f.modulus())).collect());
        }
        let m = from_columns(&cols);
        if rank(&f, &m) < nv {
            continue;
        }
        let fm = compose_linear(x.poly(), &m).map_err(|_| SamplerError::Degenerate)?;
        let by_power = fm.coefficients_in(0);
        let zero = Polynomial::zero(f, nv);
        // c_k in the n + 1 variables u'
        let drop0: Vec<Option<usize>> = (0..nv).map(|i| i.checked_sub(1)).collect();
        let c: Vec<Polynomial<PrimeField>> = (0..=d as usize)
            .map(|k| by_power.get(d as usize - k).unwrap_or(&zero).rename_vars(&drop0, nv - 1))
            .collect();
        let lambda: Vec<_> = c[1..h as usize].to_vec();
        let lam_dim = Ideal::new(f, nv - 1, lambda.clone())?.projective_dimension(gb)?;
        if lam_dim != 0 {
            return Err(SamplerError::NotACurve { dim: lam_dim + 1 });
        }
        let lambda_degree: u64 = (1..h as u64).product();

        // chart u'_0 = 1, leaving u'' in n variables
        let dehom = |q: &Polynomial<PrimeField>| -> Result<Polynomial<PrimeField>, SamplerError> {
            Ok(q.substitute_value(0, &1)?.rename_vars(&drop0[..n + 1], n))
        };
        let a_gens = lambda.iter().map(dehom).collect::<Result<Vec<_>, _>>()?;
        let a_gb = Ideal::new(f, n, a_gens.clone())?.groebner(MonomialOrder::GrevLex, gb)?;
        let dim_a = match quotient_dimension(&a_gb) {
            Some(v) if v == lambda_degree => v,
            _ => continue,
        };
        let ch = dehom(&c[h as usize])?;
        let unit = Ideal::new(f, n, [a_gens.clone(), vec![ch]].concat())?
            .groebner(MonomialOrder::GrevLex, gb)?
            .is_unit();
        if !unit {
            return Err(SamplerError::Degenerate);
        }
        let shift: Vec<Option<usize>> = (0..n).map(|i| Some(i + 1)).collect();
        let s = Polynomial::var(f, n + 1, 0);
        let mut r = Polynomial::zero(f, n + 1);
        for k in h..=d {
            let ck = dehom(&c[k as usize])?.rename_vars(&shift, n + 1);
            r = &r + &(&ck * &s.pow(d - k));
        }
        let mut b_gens: Vec<_> = a_gens.iter().map(|g| g.rename_vars(&shift, n + 1)).collect();
        b_gens.push(r);
        let b_gb = Ideal::new(f, n + 1, b_gens)?.groebner(MonomialOrder::GrevLex, gb)?;
        let dim_b = quotient_dimension(&b_gb).ok_or(SamplerError::Degenerate)?;
        if dim_b % dim_a != 0 {
            return Err(SamplerError::Degenerate);
        }

        let mut fibers = Vec::new();
        for u in projective_rational_points(&lambda, gb, &mut rng)? {
            let mut full = vec![0u64];
            full.extend_from_slice(u.coords());
            let v = mat_vec(&f, &m, &full);
            let contact = match line_contact_order(x, p, &v)? {
                ContactOrder::Finite(k) => k,
                ContactOrder::Infinite => continue,
            };
            // residual polynomial in s, low to high: coefficient of s^{d-k} is c_k(u)
            let mut coeffs = vec![0u64; (d - h + 1) as usize];
            for k in h..=d {
                coeffs[(d - k) as usize] = c[k as usize].evaluate(u.coords())?;
            }
            let res = UniPoly::new(f, coeffs);
            let line = restrict_to_line(x.poly(), p.coords(), &v)?;
            debug_assert_eq!(line.iter().position(|a| !f.is_zero(a)), Some(contact as usize));
            fibers.push(FiberCheck {
                direction: v,
                contact,
                residual: res.degree().unwrap_or(0) as u32,
                rational_residual_points: res.roots(&mut rng).len() as u32,
            });
        }
        return Ok(ProjectionRecord {
            degree: (dim_b / dim_a) as i64,
            expected: d as i64 - h as i64,
            lambda_degree,
            fibers,
        });
    }
    Err(SamplerError::Degenerate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly_mod;
    use crate::sampler::{random_hypersurface, sample_point_on_x};

    #[test]
    fn quintic_surface_degree_two() {
        let x = random_hypersurface(2, 5, 10007, 4).unwrap();
        let p = sample_point_on_x(&x, 1, 64).unwrap().proj(x.field());
        let rec = verify_projection_degree(&x, &p, 3, 7, &GbConfig::default()).unwrap();
        assert_eq!(rec.lambda_degree, 2);
        assert_eq!(rec.degree, 2);
        assert!(rec.passes(5));
    }

    #[test]
    fn flat_tangency_is_not_a_curve() {
        let x = Hypersurface::new(
            parse_poly_mod("x3*x0^4 + x1^3*x0^2 + x2^3*x0^2 + x1^5 + x2^5 + x3^5", 4, 10007).unwrap(),
        )
        .unwrap();
        let p = ProjPoint::new(x.field(), vec![1, 0, 0, 0]).unwrap();
        let err = verify_projection_degree(&x, &p, 3, 0, &GbConfig::default()).unwrap_err();
        assert_eq!(err, SamplerError::NotACurve { dim: 2 });
    }
}
