//! Taylor forms of a hypersurface at a point, the cones `V^h_p` of lines
//! with contact order at least `h`, and the normalized chart at `p`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grobner::{GbConfig, GrobnerError, Ideal};
use crate::polyring::linalg::{compose_linear, from_columns, LinalgError, Matrix};
use crate::polyring::poly::pascal_rows;
use crate::polyring::{
    is_proportional, restrict_to_line, Field, Monomial, PolyError, Polynomial, PrimeField, ProjPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("polynomial is not a nonzero form")]
    NotHomogeneous,
    #[error("degree {0} is below 2")]
    DegreeTooSmall(u32),
    #[error("at least 3 variables are required, got {0}")]
    TooFewVariables(usize),
    #[error("characteristic {characteristic} must exceed the degree {d}")]
    CharacteristicTooSmall { characteristic: u64, d: u32 },
    #[error("point does not lie on the hypersurface")]
    NotOnHypersurface,
    #[error("singular point: the gradient vanishes")]
    SingularPoint,
    #[error("contact order h = {h} outside 2..={d}")]
    HOutOfRange { h: u32, d: u32 },
    #[error("Taylor order k = {k} outside 1..={d}")]
    KOutOfRange { k: u32, d: u32 },
    #[error("direction is proportional to the base point")]
    DegenerateDirection,
    #[error("no admissible hyperplane after {0} attempts")]
    RetriesExhausted(u32),
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Grobner(#[from] GrobnerError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `X = V(F)` in `P^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface<F: Field> {
    poly: Polynomial<F>,
    n: usize,
    d: u32,
}

impl<F: Field> Hypersurface<F> {
    pub fn new(poly: Polynomial<F>) -> Result<Self, ContactError> {
        let d = poly.homogeneous_degree().ok_or(ContactError::NotHomogeneous)?;
        if d < 2 {
            return Err(ContactError::DegreeTooSmall(d));
        }
        if poly.nvars() < 3 {
            return Err(ContactError::TooFewVariables(poly.nvars()));
        }
        let characteristic = poly.field().characteristic();
        if characteristic != 0 && characteristic <= d as u64 {
            return Err(ContactError::CharacteristicTooSmall { characteristic, d });
        }
        Ok(Hypersurface {
            n: poly.nvars() - 2,
            poly,
            d,
        })
    }

    pub fn poly(&self) -> &Polynomial<F> {
        &self.poly
    }

    pub fn field(&self) -> &F {
        self.poly.field()
    }

    /// Dimension of `X`; the ambient space is `P^{n+1}`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.n + 2
    }

    fn check_point(&self, p: &ProjPoint<F>) -> Result<(), ContactError> {
        if p.len() != self.nvars() {
            return Err(ContactError::PointLength {
                expected: self.nvars(),
                got: p.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, p: &ProjPoint<F>) -> Result<bool, ContactError> {
        self.check_point(p)?;
        Ok(self.field().is_zero(&self.poly.evaluate(p.coords())?))
    }

    pub fn gradient_at(&self, p: &ProjPoint<F>) -> Result<Vec<F::Elem>, ContactError> {
        self.check_point(p)?;
        self.poly
            .gradient()
            .iter()
            .map(|g| g.evaluate(p.coords()).map_err(ContactError::from))
            .collect()
    }

    pub fn is_smooth_at(&self, p: &ProjPoint<F>) -> Result<bool, ContactError> {
        let g = self.gradient_at(p)?;
        Ok(g.iter().any(|c| !self.field().is_zero(c)))
    }

    fn require_on(&self, p: &ProjPoint<F>) -> Result<(), ContactError> {
        if !self.contains(p)? {
            return Err(ContactError::NotOnHypersurface);
        }
        Ok(())
    }

    fn require_smooth(&self, p: &ProjPoint<F>) -> Result<Vec<F::Elem>, ContactError> {
        self.require_on(p)?;
        let g = self.gradient_at(p)?;
        if g.iter().all(|c| self.field().is_zero(c)) {
            return Err(ContactError::SingularPoint);
        }
        Ok(g)
    }
}

/// All Taylor forms `G_0, ..., G_d` at `p`, where
/// `G_k(x) = k! [t^k] F(p + t x)`.
pub fn taylor_forms<F: Field>(x: &Hypersurface<F>, p: &ProjPoint<F>) -> Result<Vec<Polynomial<F>>, ContactError> {
    x.check_point(p)?;
    let f = x.field();
    let nv = x.nvars();
    let d = x.d as usize;
    let binom = pascal_rows(f, d);
    // powers of each coordinate of p
    let ppow: Vec<Vec<F::Elem>> = p
        .coords()
        .iter()
        .map(|c| {
            let mut row = vec![f.one()];
            for k in 1..=d {
                let next = f.mul(&row[k - 1], c);
                row.push(next);
            }
            row
        })
        .collect();
    let mut bins: Vec<HashMap<Monomial, F::Elem>> = vec![HashMap::new(); d + 1];

    // expand prod_i (p_i + t x_i)^{a_i}: choose b_i <= a_i copies of t x_i
    fn rec<F: Field>(
        f: &F,
        i: usize,
        a: &Monomial,
        nv: usize,
        binom: &[Vec<F::Elem>],
        ppow: &[Vec<F::Elem>],
        coef: F::Elem,
        cur: &mut Monomial,
        bins: &mut [HashMap<Monomial, F::Elem>],
    ) {
        if f.is_zero(&coef) {
            return;
        }
        if i == nv {
            let k = cur.degree() as usize;
            let slot = bins[k].entry(*cur).or_insert_with(|| f.zero());
            *slot = f.add(slot, &coef);
            return;
        }
        let ai = a.exp(i) as usize;
        for b in 0..=ai {
            let c = f.mul(&coef, &f.mul(&binom[ai][b], &ppow[i][ai - b]));
            cur.set_exp(i, b as u16);
            rec(f, i + 1, a, nv, binom, ppow, c, cur, bins);
        }
        cur.set_exp(i, 0);
    }

    for (m, c) in x.poly.terms() {
        let mut cur = Monomial::ONE;
        rec(f, 0, m, nv, &binom, &ppow, c.clone(), &mut cur, &mut bins);
    }
    Ok(bins
        .into_iter()
        .enumerate()
        .map(|(k, bin)| {
            let fact = f.factorial(k as u64);
            Polynomial::from_terms(f.clone(), nv, bin.into_iter().map(|(m, c)| (m, f.mul(&c, &fact))))
        })
        .collect())
}

/// The single Taylor form `G_k`, `1 <= k <= d`.
pub fn taylor_form<F: Field>(x: &Hypersurface<F>, p: &ProjPoint<F>, k: u32) -> Result<Polynomial<F>, ContactError> {
    if k == 0 || k > x.d {
        return Err(ContactError::KOutOfRange { k, d: x.d });
    }
    Ok(taylor_forms(x, p)?.swap_remove(k as usize))
}

/// `G_1`, the equation of the tangent hyperplane at a smooth point.
pub fn tangent_hyperplane<F: Field>(x: &Hypersurface<F>, p: &ProjPoint<F>) -> Result<Polynomial<F>, ContactError> {
    let g = x.require_smooth(p)?;
    Ok(Polynomial::from_terms(
        x.field().clone(),
        x.nvars(),
        g.into_iter().enumerate().map(|(i, c)| (Monomial::var(i, 1), c)),
    ))
}

/// Generators `G_1, ..., G_{h-1}` of the cone `V^h_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeIdeal<F: Field> {
    pub vertex: ProjPoint<F>,
    pub h: u32,
    pub generators: Vec<Polynomial<F>>,
}

impl<F: Field> ConeIdeal<F> {
    pub fn to_ideal(&self) -> Ideal<F> {
        let g0 = &self.generators[0];
        Ideal::new(g0.field().clone(), g0.nvars(), self.generators.clone()).expect("same ring")
    }

    pub fn projective_dimension(&self, cfg: &GbConfig) -> Result<i64, ContactError> {
        Ok(self.to_ideal().projective_dimension(cfg)?)
    }
}

pub fn cone_ideal<F: Field>(x: &Hypersurface<F>, p: &ProjPoint<F>, h: u32) -> Result<ConeIdeal<F>, ContactError> {
    if h < 2 || h > x.d {
        return Err(ContactError::HOutOfRange { h, d: x.d });
    }
    x.require_on(p)?;
    let mut forms = taylor_forms(x, p)?;
    forms.truncate(h as usize);
    forms.remove(0);
    Ok(ConeIdeal {
        vertex: p.clone(),
        h,
        generators: forms,
    })
}

/// Order of contact of a line with `X` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContactOrder {
    Finite(u32),
    /// The line lies in `X`.
    Infinite,
}

impl ContactOrder {
    pub fn at_least(&self, h: u32) -> bool {
        match self {
            ContactOrder::Finite(k) => *k >= h,
            ContactOrder::Infinite => true,
        }
    }
}

pub fn line_contact_order<F: Field>(
    x: &Hypersurface<F>,
    p: &ProjPoint<F>,
    v: &[F::Elem],
) -> Result<ContactOrder, ContactError> {
    x.require_on(p)?;
    if v.len() != x.nvars() {
        return Err(ContactError::PointLength {
            expected: x.nvars(),
            got: v.len(),
        });
    }
    if is_proportional(x.field(), p.coords(), v) {
        return Err(ContactError::DegenerateDirection);
    }
    let c = restrict_to_line(x.poly(), p.coords(), v)?;
    Ok(match c.iter().position(|a| !x.field().is_zero(a)) {
        Some(k) => ContactOrder::Finite(k as u32),
        None => ContactOrder::Infinite,
    })
}

/// `F` rewritten as `c x_{n+1} x_0^{d-1} + sum_i F_i x_0^{d-i}` after a
/// linear change of coordinates sending `[1:0:...:0]` to `p` and
/// `V(x_{n+1})` to the tangent hyperplane.
#[derive(Clone, Debug)]
pub struct NormalizedChart<F: Field> {
    /// `F_norm = F ∘ M`.
    pub f_norm: Polynomial<F>,
    /// Columns: `p`, a basis of the tangent hyperplane complement to `p`,
    /// then the pivot coordinate vector.
    pub transform: Matrix<F::Elem>,
    pub c: F::Elem,
    /// `parts[i]` is the coefficient of `x_0^{d-i}`, a form of degree `i` in
    /// `x_1, ..., x_{n+1}`. `parts[0] = 0` and `parts[1] = c x_{n+1}`.
    pub parts: Vec<Polynomial<F>>,
}

impl<F: Field> NormalizedChart<F> {
    /// `F_i` for `2 <= i <= d`.
    pub fn f_part(&self, i: usize) -> &Polynomial<F> {
        &self.parts[i]
    }
}

pub fn normalize_chart<F: Field>(x: &Hypersurface<F>, p: &ProjPoint<F>) -> Result<NormalizedChart<F>, ContactError> {
    let g = x.require_smooth(p)?;
    let f = x.field();
    let nv = x.nvars();
    let j = g.iter().position(|c| !f.is_zero(c)).expect("smooth");
    let gj_inv = f.inv(&g[j]).unwrap();
    let drop = (0..nv)
        .find(|&i| i != j && !f.is_zero(&p.coords()[i]))
        .expect("p has a nonzero coordinate besides the pivot");
    let mut cols: Vec<Vec<F::Elem>> = vec![p.coords().to_vec()];
    for i in (0..nv).filter(|&i| i != j && i != drop) {
        let mut v = vec![f.zero(); nv];
        v[i] = f.one();
        v[j] = f.neg(&f.mul(&g[i], &gj_inv));
        cols.push(v);
    }
    let mut ej = vec![f.zero(); nv];
    ej[j] = f.one();
    cols.push(ej);
    let m = from_columns(&cols);
    let f_norm = compose_linear(x.poly(), &m)?;
    let d = x.d as usize;
    let by_power = f_norm.coefficients_in(0);
    let parts: Vec<Polynomial<F>> = (0..=d)
        .map(|i| by_power.get(d - i).cloned().unwrap_or_else(|| Polynomial::zero(f.clone(), nv)))
        .collect();
    Ok(NormalizedChart {
        f_norm,
        transform: m,
        c: g[j].clone(),
        parts,
    })
}

/// Multiplicity at `p` of `X ∩ T_pX`: the least `k >= 2` with
/// `G_k ∉ (G_1)`. `None` when the tangent hyperplane lies in `X`.
pub fn tangent_section_multiplicity<F: Field>(x: &Hypersurface<F>, p: &ProjPoint<F>) -> Result<Option<u32>, ContactError> {
    let g = x.require_smooth(p)?;
    let f = x.field();
    let nv = x.nvars();
    let j = g.iter().position(|c| !f.is_zero(c)).unwrap();
    let gj_inv = f.inv(&g[j]).unwrap();
    // x_j <- -(sum_{i != j} g_i x_i) / g_j kills G_1
    let lin: Vec<F::Elem> = (0..nv)
        .map(|i| if i == j { f.zero() } else { f.neg(&f.mul(&g[i], &gj_inv)) })
        .collect();
    let forms = taylor_forms(x, p)?;
    for (k, gk) in forms.iter().enumerate().skip(2) {
        if !gk.substitute_linear(j, &lin)?.is_zero() {
            return Ok(Some(k as u32));
        }
    }
    Ok(None)
}

/// The same multiplicity read off the normalized chart: the least `i >= 2`
/// with `F_i` not divisible by `x_{n+1}`.
pub fn chart_multiplicity<F: Field>(chart: &NormalizedChart<F>) -> Option<u32> {
    let last = chart.f_norm.nvars() - 1;
    let zero = chart.f_norm.field().zero();
    (2..chart.parts.len())
        .find(|&i| !chart.parts[i].substitute_value(last, &zero).expect("in range").is_zero())
        .map(|i| i as u32)
}

/// Ideal of `Λ^h_p = V^h_p ∩ H` for a random hyperplane `H` missing `p`:
/// the cone generators followed by the equation of `H`.
pub fn lambda_section(
    x: &Hypersurface<PrimeField>,
    p: &ProjPoint<PrimeField>,
    h: u32,
    seed: u64,
) -> Result<Ideal<PrimeField>, ContactError> {
    const ATTEMPTS: u32 = 16;
    if h < 3 || h > x.d {
        return Err(ContactError::HOutOfRange { h, d: x.d });
    }
    x.require_smooth(p)?;
    let cone = cone_ideal(x, p, h)?;
    let f = x.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let coeffs: Vec<u64> = (0..x.nvars()).map(|_| rng.random_range(0..f.modulus())).collect();
        let at_p = coeffs
            .iter()
            .zip(p.coords())
            .fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
        if at_p == 0 {
            continue;
        }
        let l = Polynomial::from_terms(
            *f,
            x.nvars(),
            coeffs.into_iter().enumerate().map(|(i, c)| (Monomial::var(i, 1), c)),
        );
        return Ok(cone.to_ideal().with([l])?);
    }
    Err(ContactError::RetriesExhausted(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly_mod;

    fn hs(text: &str, nvars: usize) -> Hypersurface<PrimeField> {
        Hypersurface::new(parse_poly_mod(text, nvars, 10007).unwrap()).unwrap()
    }

    fn pt(x: &Hypersurface<PrimeField>, c: &[i64]) -> ProjPoint<PrimeField> {
        let f = *x.field();
        ProjPoint::new(&f, c.iter().map(|&v| f.from_i64(v)).collect()).unwrap()
    }

    #[test]
    fn quadric_gradient() {
        let x = hs("x0*x3 - x1*x2", 4);
        let p = pt(&x, &[1, 0, 0, 0]);
        assert_eq!(taylor_form(&x, &p, 1).unwrap().to_string(), "x3");
        assert_eq!(tangent_hyperplane(&x, &p).unwrap().to_string(), "x3");
    }

    #[test]
    fn top_form_is_scaled_f() {
        let x = hs("x0^3 + 2*x1^3 - x2*x3^2 + x0*x1*x2", 4);
        let p = pt(&x, &[0, 0, 1, 0]);
        let g3 = taylor_form(&x, &p, 3).unwrap();
        assert_eq!(g3, x.poly().scale(&6));
        assert!(matches!(taylor_form(&x, &p, 4), Err(ContactError::KOutOfRange { .. })));
    }

    #[test]
    fn fermat_cubic_gradient() {
        let x = hs("x0^3 + x1^3 + x2^3 + x3^3", 4);
        let p = pt(&x, &[1, 0, 0, -1]);
        assert_eq!(taylor_form(&x, &p, 1).unwrap(), parse_poly_mod("3*x0 + 3*x3", 4, 10007).unwrap());
    }

    #[test]
    fn singular_point_rejected() {
        let x = hs("x0^2*x3 + x3^3 + x1^3 + x2^3", 4);
        // gradient at [1:0:0:0] is (0,0,0,1); at [0:1:-1:0] it is (0,3,3,0)
        assert!(tangent_hyperplane(&x, &pt(&x, &[1, 0, 0, 0])).is_ok());
        let y = hs("x0*x1^2 + x2^3 + x3^3", 4);
        assert_eq!(tangent_hyperplane(&y, &pt(&y, &[1, 0, 0, 0])), Err(ContactError::SingularPoint));
        assert_eq!(tangent_hyperplane(&y, &pt(&y, &[0, 1, 0, 0])).unwrap().to_string(), "x0");
        assert_eq!(
            tangent_hyperplane(&y, &pt(&y, &[0, 0, 1, 0])),
            Err(ContactError::NotOnHypersurface)
        );
    }

    #[test]
    fn cone_of_quadric() {
        let x = hs("x0*x3 - x1*x2", 4);
        let p = pt(&x, &[1, 0, 0, 0]);
        let cone = cone_ideal(&x, &p, 2).unwrap();
        assert_eq!(cone.generators.len(), 1);
        assert_eq!(cone.projective_dimension(&GbConfig::default()).unwrap(), 2);
        assert!(matches!(cone_ideal(&x, &p, 3), Err(ContactError::HOutOfRange { .. })));
    }

    #[test]
    fn contact_orders_on_quadric() {
        let x = hs("x0*x3 - x1*x2", 4);
        let p = pt(&x, &[1, 0, 0, 0]);
        assert_eq!(line_contact_order(&x, &p, &[0, 1, 0, 0]).unwrap(), ContactOrder::Infinite);
        assert_eq!(line_contact_order(&x, &p, &[0, 0, 0, 1]).unwrap(), ContactOrder::Finite(1));
        assert_eq!(line_contact_order(&x, &p, &[2, 0, 0, 0]), Err(ContactError::DegenerateDirection));
    }

    #[test]
    fn normalized_input_is_fixed() {
        let x = hs("x3*x0 + x1^2", 4);
        let p = pt(&x, &[1, 0, 0, 0]);
        let chart = normalize_chart(&x, &p).unwrap();
        let id = crate::polyring::linalg::identity(x.field(), 4);
        assert_eq!(chart.transform, id);
        assert_eq!(chart.c, 1);
        assert_eq!(chart.f_part(2).to_string(), "x1^2");
        assert_eq!(chart.f_norm, *x.poly());
    }

    #[test]
    fn deep_tangency_multiplicity() {
        let x = hs("x3*x0^4 + x1^3*x0^2 + x2^3*x0^2 + x1^5 + x2^5 + x3^5", 4);
        let p = pt(&x, &[1, 0, 0, 0]);
        assert_eq!(tangent_section_multiplicity(&x, &p).unwrap(), Some(3));
        assert_eq!(chart_multiplicity(&normalize_chart(&x, &p).unwrap()), Some(3));
        let y = hs("x3*x0 + x1^2 - x2^2", 4);
        assert_eq!(tangent_section_multiplicity(&y, &pt(&y, &[1, 0, 0, 0])).unwrap(), Some(2));
    }

    #[test]
    fn lambda_section_dimensions() {
        let cfg = GbConfig::default();
        // a smooth cubic threefold through [1:0:0:0:0]
        let x = hs("x4*x0^2 + x1^2*x0 + x2^2*x0 - x3^2*x0 + x1^3 + x2*x3*x4 + x4^3", 5);
        let p = pt(&x, &[1, 0, 0, 0, 0]);
        let ideal = lambda_section(&x, &p, 3, 7).unwrap();
        assert_eq!(ideal.gens().len(), 3);
        assert_eq!(ideal.projective_dimension(&cfg).unwrap(), 1);
        assert!(matches!(lambda_section(&x, &p, 2, 7), Err(ContactError::HOutOfRange { .. })));
    }
}
