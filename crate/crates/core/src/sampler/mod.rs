//! Random hypersurfaces over `F_q`, rational points on them, and seeded
//! verification campaigns.
//!
//! A "general" hypersurface is emulated by one with uniformly random
//! coefficients. Every campaign only claims smoothness at the points it
//! actually uses.

mod campaign;
mod projection;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::contact::{ContactError, Hypersurface};
use crate::grobner::GrobnerError;
use crate::polar::PolarError;
use crate::polyring::{
    is_proportional, monomials_of_degree, restrict_to_line, Field, PolyError, Polynomial, PrimeField, ProjPoint,
    UniPoly,
};
use crate::solve::SolveError;

pub use campaign::{
    check_multiplicity, replay_trial, run_campaign, verify_connecting_lemma, verify_dimension_theorem,
    verify_multiplicity_lemma, verify_projection_degrees, Campaign, CampaignReport, Check, MultiplicityCheck, Summary,
    Timing, TrialRecord, TrialStatus, GENERICITY_NOTE,
};
pub use projection::{verify_projection_degree, FiberCheck, ProjectionRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no rational point found on {budget} random lines")]
    RetriesExhausted { budget: u32 },
    #[error("X ∩ V^h_p is not a curve: the cone has dimension {dim}")]
    NotACurve { dim: i64 },
    #[error("degenerate projection target")]
    Degenerate,
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Grobner(#[from] GrobnerError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl SamplerError {
    /// Whether the error is a Gröbner step-cap exhaustion.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            SamplerError::Grobner(GrobnerError::StepCap { .. })
                | SamplerError::Contact(ContactError::Grobner(GrobnerError::StepCap { .. }))
                | SamplerError::Polar(PolarError::Grobner(GrobnerError::StepCap { .. }))
                | SamplerError::Solve(SolveError::Grobner(GrobnerError::StepCap { .. }))
        )
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent stream seed for `(master, index, tag)`.
pub fn derive_seed(master: u64, index: u64, tag: u64) -> u64 {
    splitmix64(master ^ splitmix64(index ^ splitmix64(tag)))
}

pub(crate) mod tag {
    pub const HYPERSURFACE: u64 = 1;
    pub const POINT: u64 = 2;
    pub const SECOND_POINT: u64 = 3;
    pub const SEARCH: u64 = 4;
    pub const ATTEMPT: u64 = 5;
}

/// Uniformly random coefficients on every monomial of degree `d` in `n + 2`
/// variables.
pub fn random_hypersurface(n: usize, d: u32, modulus: u64, seed: u64) -> Result<Hypersurface<PrimeField>, SamplerError> {
    let f = PrimeField::new(modulus).map_err(|e| SamplerError::InvalidConfig(e.to_string()))?;
    let nvars = n + 2;
    let monos = monomials_of_degree(nvars, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let terms: Vec<_> = monos.iter().map(|m| (*m, rng.random_range(0..modulus))).collect();
        let poly = Polynomial::from_terms(f, nvars, terms);
        if !poly.is_zero() {
            return Ok(Hypersurface::new(poly)?);
        }
    }
}

/// SHA-256 of the modulus, ring size and terms, as lowercase hex.
pub fn poly_digest(p: &Polynomial<PrimeField>) -> String {
    let mut h = Sha256::new();
    h.update(p.field().modulus().to_le_bytes());
    h.update((p.nvars() as u64).to_le_bytes());
    for (m, c) in p.terms() {
        for e in &m.exps()[..p.nvars()] {
            h.update(e.to_le_bytes());
        }
        h.update(c.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSample {
    pub point: Vec<u64>,
    pub on_x: bool,
    pub smooth_at: bool,
    /// Index of the random line that produced the point.
    pub line: u32,
    pub root_index: usize,
}

impl PointSample {
    pub fn proj(&self, f: &PrimeField) -> ProjPoint<PrimeField> {
        ProjPoint::new(f, self.point.clone()).expect("sampled points are nonzero")
    }
}

/// Rational points of `X` on the line through `a` and `b`, except `b`.
pub fn points_on_line<R: Rng + ?Sized>(
    x: &Hypersurface<PrimeField>,
    a: &[u64],
    b: &[u64],
    rng: &mut R,
) -> Result<Vec<ProjPoint<PrimeField>>, SamplerError> {
    let f = *x.field();
    let c = restrict_to_line(x.poly(), a, b)?;
    let u = UniPoly::new(f, c);
    if u.is_zero() {
        return Ok(Vec::new());
    }
    Ok(u.roots(rng)
        .into_iter()
        .map(|t| {
            let coords = a.iter().zip(b).map(|(ai, bi)| f.add(ai, &f.mul(&t, bi))).collect();
            ProjPoint::new(&f, coords).expect("a and b are independent")
        })
        .collect())
}

/// A rational point of `X` found by intersecting `X` with seeded random lines.
pub fn sample_point_on_x(x: &Hypersurface<PrimeField>, seed: u64, retry_budget: u32) -> Result<PointSample, SamplerError> {
    let f = *x.field();
    let nv = x.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for line in 0..retry_budget {
        let a: Vec<u64> = (0..nv).map(|_| rng.random_range(0..f.modulus())).collect();
        let b: Vec<u64> = (0..nv).map(|_| rng.random_range(0..f.modulus())).collect();
        if a.iter().all(|&c| c == 0) || b.iter().all(|&c| c == 0) || is_proportional(&f, &a, &b) {
            continue;
        }
        let pts = points_on_line(x, &a, &b, &mut rng)?;
        if pts.is_empty() {
            continue;
        }
        let root_index = rng.random_range(0..pts.len());
        let p = &pts[root_index];
        return Ok(PointSample {
            point: p.coords().to_vec(),
            on_x: x.contains(p)?,
            smooth_at: x.is_smooth_at(p)?,
            line,
            root_index,
        });
    }
    Err(SamplerError::RetriesExhausted { budget: retry_budget })
}

/// Parameters shared by all campaigns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub n: usize,
    pub d: u32,
    pub modulus: u64,
    pub h_lo: u32,
    pub h_hi: u32,
    pub trials: u32,
    pub master_seed: u64,
    pub gb_step_cap: u64,
    /// Random lines per point sample, and hypersurface draws per trial.
    pub retry_budget: u32,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            n: 2,
            d: 4,
            modulus: crate::polyring::DEFAULT_MODULUS,
            h_lo: 2,
            h_hi: 3,
            trials: 10,
            master_seed: 0,
            gb_step_cap: crate::grobner::DEFAULT_STEP_CAP,
            retry_budget: 64,
        }
    }
}

impl CampaignConfig {
    pub fn new(n: usize, d: u32, h_lo: u32, h_hi: u32, trials: u32, master_seed: u64) -> Self {
        CampaignConfig {
            n,
            d,
            h_lo,
            h_hi,
            trials,
            master_seed,
            ..Default::default()
        }
    }

    pub fn with_modulus(mut self, modulus: u64) -> Self {
        self.modulus = modulus;
        self
    }

    pub fn field(&self) -> Result<PrimeField, SamplerError> {
        PrimeField::new(self.modulus).map_err(|e| SamplerError::InvalidConfig(e.to_string()))
    }

    pub fn validate(&self, campaign: Campaign) -> Result<(), SamplerError> {
        let bad = |s: String| Err(SamplerError::InvalidConfig(s));
        self.field()?;
        if self.modulus <= self.d as u64 {
            return bad(format!("modulus {} must exceed d = {}", self.modulus, self.d));
        }
        if self.d < 2 || self.n < 1 {
            return bad(format!("need n >= 1 and d >= 2, got n = {}, d = {}", self.n, self.d));
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.retry_budget == 0 {
            return bad("retry budget must be positive".into());
        }
        if campaign == Campaign::Multiplicity {
            return Ok(());
        }
        let top = (self.n as u32 + 1).min(self.d);
        if self.h_lo < 2 || self.h_lo > self.h_hi || self.h_hi > top {
            return bad(format!("need 2 <= h_lo <= h_hi <= {top}, got {}..{}", self.h_lo, self.h_hi));
        }
        if campaign == Campaign::Connecting {
            let max = crate::polar::max_connecting_h(self.n);
            if self.h_hi > max {
                return Err(SamplerError::Hypothesis(format!(
                    "h = {} exceeds floor(n/2) + 1 = {max}",
                    self.h_hi
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn gb(&self) -> crate::grobner::GbConfig {
        crate::grobner::GbConfig {
            step_cap: self.gb_step_cap,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly_mod;

    #[test]
    fn hypersurface_is_reproducible() {
        let a = random_hypersurface(2, 4, 10007, 9).unwrap();
        let b = random_hypersurface(2, 4, 10007, 9).unwrap();
        let c = random_hypersurface(2, 4, 10007, 10).unwrap();
        assert_eq!(poly_digest(a.poly()), poly_digest(b.poly()));
        assert_ne!(poly_digest(a.poly()), poly_digest(c.poly()));
        assert!(a.poly().len() <= 35);
        assert_eq!(monomials_of_degree(4, 4).len(), 35);
    }

    #[test]
    fn sampled_points_lie_on_x() {
        let x = random_hypersurface(3, 6, 10007, 1).unwrap();
        for s in 0..20 {
            let p = sample_point_on_x(&x, s, 64).unwrap();
            assert!(p.on_x);
            assert_eq!(x.poly().evaluate(&p.point).unwrap(), 0);
        }
    }

    #[test]
    fn fermat_quartic_line_through_two_vertices() {
        // 17 = 1 mod 8, so t^4 = -1 has four roots
        let x = Hypersurface::new(parse_poly_mod("x0^4 + x1^4 + x2^4 + x3^4", 4, 17).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pts = points_on_line(&x, &[1, 0, 0, 0], &[0, 0, 0, 1], &mut rng).unwrap();
        assert_eq!(pts.len(), 4);
        for p in &pts {
            let t = p.coords()[3];
            assert_eq!(x.field().pow(&t, 4), 16);
        }
    }

    #[test]
    fn power_of_a_variable_is_singular_everywhere() {
        let x = Hypersurface::new(parse_poly_mod("x0^3", 4, 10007).unwrap()).unwrap();
        for s in 0..5 {
            let p = sample_point_on_x(&x, s, 64).unwrap();
            assert_eq!(p.point[0], 0);
            assert!(!p.smooth_at);
        }
    }

    #[test]
    fn config_validation() {
        let ok = CampaignConfig::new(3, 8, 2, 4, 5, 0);
        assert!(ok.validate(Campaign::Dimension).is_ok());
        assert!(CampaignConfig::new(3, 8, 2, 5, 5, 0).validate(Campaign::Dimension).is_err());
        assert!(CampaignConfig::new(3, 8, 2, 4, 0, 0).validate(Campaign::Dimension).is_err());
        assert!(CampaignConfig::new(3, 8, 2, 4, 5, 0)
            .with_modulus(7)
            .validate(Campaign::Dimension)
            .is_err());
        assert!(matches!(
            CampaignConfig::new(4, 10, 4, 4, 5, 0).validate(Campaign::Connecting),
            Err(SamplerError::Hypothesis(_))
        ));
    }
}
