//! Polar hypersurfaces, the loci `Δ_{q,h}(X)`, and the search for a common
//! vertex `p` whose cone `V^h_p` contains two given points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contact::{line_contact_order, ContactError, Hypersurface};
use crate::grobner::{GbConfig, GrobnerError, Ideal};
use crate::polyring::linalg::{identity, mat_vec, rank, Matrix};
use crate::polyring::{Field, PolyError, Polynomial, PrimeField, ProjPoint};
use crate::solve::{
    enumerate_projective_zeros, projective_point_count, projective_rational_points, restrict_to_subspace, SolveError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarError {
    #[error("polar order s = {s} outside 0..={d}")]
    SOutOfRange { s: u32, d: u32 },
    #[error("h = {h} outside 2..={d}")]
    HOutOfRange { h: u32, d: u32 },
    #[error("h = {h} violates 2 <= h <= floor(n/2) + 1 = {max}")]
    Hypothesis { h: u32, max: u32 },
    #[error("the two points must be distinct")]
    SamePoint,
    #[error("point does not lie on the hypersurface")]
    NotOnHypersurface,
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error(transparent)]
    Grobner(#[from] GrobnerError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `Pol^s_q(F) = (q_0 ∂_0 + ... + q_{n+1} ∂_{n+1})^s F`.
pub fn polar_poly<F: Field>(x: &Hypersurface<F>, q: &ProjPoint<F>, s: u32) -> Result<Polynomial<F>, PolarError> {
    if s > x.d() {
        return Err(PolarError::SOutOfRange { s, d: x.d() });
    }
    let mut p = x.poly().clone();
    for _ in 0..s {
        p = p.directional_derivative(q.coords())?;
    }
    Ok(p)
}

/// `Pol^0_q, ..., Pol^{h-1}_q`.
#[derive(Clone, Debug)]
pub struct PolarSystem<F: Field> {
    pub q: ProjPoint<F>,
    pub h: u32,
    pub polars: Vec<Polynomial<F>>,
}

pub fn polar_system<F: Field>(x: &Hypersurface<F>, q: &ProjPoint<F>, h: u32) -> Result<PolarSystem<F>, PolarError> {
    if h < 2 || h > x.d() {
        return Err(PolarError::HOutOfRange { h, d: x.d() });
    }
    let mut polars = vec![x.poly().clone()];
    for _ in 1..h {
        let next = polars.last().unwrap().directional_derivative(q.coords())?;
        polars.push(next);
    }
    Ok(PolarSystem {
        q: q.clone(),
        h,
        polars,
    })
}

/// Ideal of `Δ_{q,h}(X)`.
pub fn polar_intersection_ideal<F: Field>(x: &Hypersurface<F>, q: &ProjPoint<F>, h: u32) -> Result<Ideal<F>, PolarError> {
    let sys = polar_system(x, q, h)?;
    Ok(Ideal::new(x.field().clone(), x.nvars(), sys.polars)?)
}

/// Whether `p ∈ Δ_{q,h}(X)`; equivalently, whether the line `pq` meets `X`
/// at `p` with multiplicity at least `h`.
pub fn check_reciprocity<F: Field>(x: &Hypersurface<F>, p: &ProjPoint<F>, q: &ProjPoint<F>, h: u32) -> Result<bool, PolarError> {
    if p == q {
        return Err(PolarError::SamePoint);
    }
    if !x.contains(p)? {
        return Err(PolarError::NotOnHypersurface);
    }
    let sys = polar_system(x, q, h)?;
    for g in &sys.polars {
        if !x.field().is_zero(&g.evaluate(p.coords())?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `h` allowed by the connecting-vertex lemmas.
pub fn max_connecting_h(n: usize) -> u32 {
    (n / 2 + 1) as u32
}

fn check_connecting(x: &Hypersurface<impl Field>, h: u32) -> Result<(), PolarError> {
    let max = max_connecting_h(x.n());
    if h < 2 || h > max {
        return Err(PolarError::Hypothesis { h, max });
    }
    if h > x.d() {
        return Err(PolarError::HOutOfRange { h, d: x.d() });
    }
    Ok(())
}

/// Ideal of `Δ_{q,h}(X) ∩ Δ_{q',h}(X)`: `F` followed by the proper polars
/// at `q` and then at `q'`, `2h - 1` forms in all.
pub fn connecting_vertex_ideal<F: Field>(
    x: &Hypersurface<F>,
    q: &ProjPoint<F>,
    q2: &ProjPoint<F>,
    h: u32,
) -> Result<Ideal<F>, PolarError> {
    check_connecting(x, h)?;
    if q == q2 {
        return Err(PolarError::SamePoint);
    }
    if !x.contains(q)? || !x.contains(q2)? {
        return Err(PolarError::NotOnHypersurface);
    }
    let a = polar_system(x, q, h)?;
    let b = polar_system(x, q2, h)?;
    let gens = a.polars.into_iter().chain(b.polars.into_iter().skip(1)).collect();
    Ok(Ideal::new(x.field().clone(), x.nvars(), gens)?)
}

/// Budgets for dimension certificates and witness searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest number of projective points enumerated per slice.
    pub enumeration_budget: u128,
    /// Largest Bézout number handed to Gröbner-based solving.
    pub bezout_budget: u128,
    /// Random linear slices tried before giving up.
    pub slices: u32,
    pub step_cap: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            enumeration_budget: 2_000_000,
            bezout_budget: 1_000,
            slices: 16,
            step_cap: crate::grobner::DEFAULT_STEP_CAP,
        }
    }
}

impl SearchConfig {
    fn gb(&self) -> GbConfig {
        GbConfig { step_cap: self.step_cap }
    }
}

/// Evidence about the projective dimension of the connecting-vertex locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionCertificate {
    /// `n + 2 - 2h`.
    pub expected: i64,
    /// Every component has at least this dimension, and the locus is
    /// nonempty because `2h - 1 <= n + 1` forms always have a common zero.
    pub lower: i64,
    /// Set when a random linear space of codimension `expected + 1` misses
    /// the locus, checked by Gröbner basis.
    pub upper: Option<i64>,
    /// Local dimension at a witness with full-rank Jacobian.
    pub witness_local: Option<i64>,
}

impl DimensionCertificate {
    pub fn exact(&self) -> Option<i64> {
        match (self.upper, self.witness_local) {
            (Some(u), _) if u == self.lower => Some(u),
            _ => None,
        }
    }

    /// No piece of evidence contradicts `dim >= expected`.
    pub fn consistent(&self) -> bool {
        self.lower >= self.expected
            && self.upper.is_none_or(|u| u >= self.lower)
            && self.witness_local.is_none_or(|w| w >= self.lower)
    }
}

fn random_subspace<R: Rng + ?Sized>(f: &PrimeField, n: usize, m: usize, rng: &mut R) -> Matrix<u64> {
    loop {
        let b: Matrix<u64> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(0..f.modulus())).collect())
            .collect();
        if rank(f, &b) == m {
            return b;
        }
    }
}

fn bezout(ideal: &Ideal<PrimeField>) -> u128 {
    ideal
        .gens()
        .iter()
        .map(|g| g.total_degree().unwrap_or(0) as u128)
        .product()
}

pub fn dimension_certificate(
    x: &Hypersurface<PrimeField>,
    ideal: &Ideal<PrimeField>,
    h: u32,
    witness: Option<&ProjPoint<PrimeField>>,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<DimensionCertificate, PolarError> {
    let f = *x.field();
    let nv = x.nvars();
    let r = ideal.gens().len() as i64;
    let expected = x.n() as i64 + 2 - 2 * h as i64;
    let lower = nv as i64 - 1 - r;
    let mut upper = None;
    let m = nv as i64 - (expected + 1);
    if m >= 1 && bezout(ideal) <= cfg.bezout_budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            let b = random_subspace(&f, nv, m as usize, &mut rng);
            let sliced = ideal
                .gens()
                .iter()
                .map(|g| restrict_to_subspace(g, &b))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = Ideal::new(f, m as usize, sliced)?.projective_dimension(&cfg.gb())?;
            if dim < 0 {
                upper = Some(expected);
                break;
            }
        }
    }
    let witness_local = match witness {
        Some(w) => {
            let jac: Matrix<u64> = ideal
                .gens()
                .iter()
                .map(|g| {
                    g.gradient()
                        .iter()
                        .map(|d| d.evaluate(w.coords()))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
            let rk = rank(&f, &jac) as i64;
            (rk == r).then_some(nv as i64 - 1 - rk)
        }
        None => None,
    };
    Ok(DimensionCertificate {
        expected,
        lower,
        upper,
        witness_local,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    Enumeration,
    Groebner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found {
        point: ProjPoint<PrimeField>,
        attempt: u32,
        method: SearchMethod,
    },
    /// No rational point passed verification. `exhaustive` means the whole
    /// locus was searched, so none exists over this field.
    NotFound { exhaustive: bool, attempts: u32 },
    /// Neither enumeration nor solving fits the configured budgets.
    OverBudget,
}

/// Checks every condition a connecting vertex must satisfy.
pub fn is_valid_witness(
    x: &Hypersurface<PrimeField>,
    p: &ProjPoint<PrimeField>,
    q: &ProjPoint<PrimeField>,
    q2: &ProjPoint<PrimeField>,
    h: u32,
) -> Result<bool, PolarError> {
    if p == q || p == q2 || !x.contains(p)? || !x.is_smooth_at(p)? {
        return Ok(false);
    }
    for target in [q, q2] {
        if !check_reciprocity(x, p, target, h)? {
            return Ok(false);
        }
        if !line_contact_order(x, p, target.coords())?.at_least(h) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Looks for a rational `p ∈ X` with `q, q' ∈ V^h_p`, slicing the locus
/// down to finitely many points with random linear spaces.
pub fn find_connecting_vertex(
    x: &Hypersurface<PrimeField>,
    q: &ProjPoint<PrimeField>,
    q2: &ProjPoint<PrimeField>,
    h: u32,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<WitnessOutcome, PolarError> {
    let ideal = connecting_vertex_ideal(x, q, q2, h)?;
    let f = *x.field();
    let nv = x.nvars();
    let e = (x.n() + 2 - 2 * h as usize).max(0);
    let m = nv - e;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let enumerate = projective_point_count(f.modulus(), m) <= cfg.enumeration_budget;
    if !enumerate && bezout(&ideal) > cfg.bezout_budget {
        return Ok(WitnessOutcome::OverBudget);
    }
    let method = if enumerate {
        SearchMethod::Enumeration
    } else {
        SearchMethod::Groebner
    };
    let attempts = if e == 0 { 1 } else { cfg.slices };
    for attempt in 0..attempts {
        let b = if e == 0 {
            identity(&f, nv)
        } else {
            random_subspace(&f, nv, m, &mut rng)
        };
        let sliced = ideal
            .gens()
            .iter()
            .map(|g| restrict_to_subspace(g, &b))
            .collect::<Result<Vec<_>, _>>()?;
        let points = match method {
            SearchMethod::Enumeration => enumerate_projective_zeros(&sliced),
            SearchMethod::Groebner => match projective_rational_points(&sliced, &cfg.gb(), &mut rng) {
                Ok(p) => p,
                Err(SolveError::PositiveDimensional) => continue,
                Err(err) => return Err(err.into()),
            },
        };
        for y in points {
            let p = ProjPoint::new(&f, mat_vec(&f, &b, y.coords())).expect("full rank");
            if is_valid_witness(x, &p, q, q2, h)? {
                return Ok(WitnessOutcome::Found {
                    point: p,
                    attempt,
                    method,
                });
            }
        }
    }
    Ok(WitnessOutcome::NotFound {
        exhaustive: e == 0,
        attempts,
    })
}
