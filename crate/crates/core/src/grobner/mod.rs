//! Gröbner bases and the dimension, Hilbert-function and elimination
//! queries built on them.

mod buchberger;
pub mod dimension;
pub mod hilbert;
pub mod order;

use thiserror::Error;

use crate::polyring::{Field, Polynomial, MAX_VARS};

pub use buchberger::{groebner_basis, GroebnerBasis};
pub use dimension::{krull_from_leads, quotient_dimension, standard_monomials};
pub use hilbert::{binomial, hilbert_numerator, hilbert_value};
pub use order::MonomialOrder;

pub(crate) use buchberger::sort_terms;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrobnerError {
    #[error("reduction step cap of {cap} exhausted")]
    StepCap { cap: u64 },
    #[error("generator {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("generator {index} is zero")]
    ZeroGenerator { index: usize },
    #[error("generator {index} is constant")]
    ConstantGenerator { index: usize },
    #[error("cannot eliminate {k} of {nvars} variables")]
    BlockOutOfRange { k: usize, nvars: usize },
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("too many variables: {0}")]
    TooManyVars(usize),
}

/// Resource budget for Buchberger runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbConfig {
    pub step_cap: u64,
}

pub const DEFAULT_STEP_CAP: u64 = 20_000_000;

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            step_cap: DEFAULT_STEP_CAP,
        }
    }
}

/// An ordered list of generators in a fixed polynomial ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal<F: Field> {
    field: F,
    nvars: usize,
    gens: Vec<Polynomial<F>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(field: F, nvars: usize, gens: Vec<Polynomial<F>>) -> Result<Self, GrobnerError> {
        if nvars > MAX_VARS {
            return Err(GrobnerError::TooManyVars(nvars));
        }
        if gens.iter().any(|g| g.nvars() != nvars) {
            return Err(GrobnerError::RingMismatch);
        }
        Ok(Ideal { field, nvars, gens })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    fn check_homogeneous(&self) -> Result<(), GrobnerError> {
        match self.gens.iter().position(|g| !g.is_homogeneous()) {
            Some(index) => Err(GrobnerError::NotHomogeneous { index }),
            None => Ok(()),
        }
    }

    /// A new ideal with `extra` appended to the generators.
    pub fn with(&self, extra: impl IntoIterator<Item = Polynomial<F>>) -> Result<Self, GrobnerError> {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        Ideal::new(self.field.clone(), self.nvars, gens)
    }

    pub fn groebner(&self, order: MonomialOrder, cfg: &GbConfig) -> Result<GroebnerBasis<F>, GrobnerError> {
        groebner_basis(self, order, cfg)
    }

    /// Dimension of the affine vanishing locus; -1 for the unit ideal.
    pub fn krull_dimension(&self, cfg: &GbConfig) -> Result<i64, GrobnerError> {
        let gb = groebner_basis(self, MonomialOrder::GrevLex, cfg)?;
        Ok(dimension::krull_dimension_of(&gb))
    }

    /// Dimension of the projective scheme; -1 when it is empty.
    pub fn projective_dimension(&self, cfg: &GbConfig) -> Result<i64, GrobnerError> {
        self.check_homogeneous()?;
        Ok((self.krull_dimension(cfg)? - 1).max(-1))
    }

    /// Hilbert-series numerator of the quotient ring.
    pub fn hilbert_numerator(&self, cfg: &GbConfig) -> Result<Vec<i128>, GrobnerError> {
        self.check_homogeneous()?;
        let gb = groebner_basis(self, MonomialOrder::GrevLex, cfg)?;
        Ok(hilbert_numerator(&gb.leading_monomials()))
    }

    /// `dim_k (k[x]/I)_t`.
    pub fn hilbert_function(&self, t: u64, cfg: &GbConfig) -> Result<i128, GrobnerError> {
        Ok(hilbert_value(&self.hilbert_numerator(cfg)?, self.nvars, t))
    }

    /// Generators of `I ∩ k[x_k, ..., x_{n-1}]`, still written in the full
    /// ring.
    pub fn eliminate(&self, k: usize, cfg: &GbConfig) -> Result<Ideal<F>, GrobnerError> {
        if k > self.nvars {
            return Err(GrobnerError::BlockOutOfRange { k, nvars: self.nvars });
        }
        let gb = groebner_basis(self, MonomialOrder::Elimination(k), cfg)?;
        let kept = gb
            .polynomials()
            .into_iter()
            .zip(gb.leading_monomials())
            .filter(|(_, m)| m.block_degree(0, k) == 0)
            .map(|(p, _)| p)
            .collect();
        Ideal::new(self.field.clone(), self.nvars, kept)
    }
}

/// Length of the longest prefix of `gens` that is a regular sequence,
/// detected by the affine dimension dropping by exactly one per element.
pub fn is_regular_sequence<F: Field>(
    field: &F,
    nvars: usize,
    gens: &[Polynomial<F>],
    cfg: &GbConfig,
) -> Result<(bool, usize), GrobnerError> {
    for (index, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(GrobnerError::ZeroGenerator { index });
        }
        if !g.is_homogeneous() {
            return Err(GrobnerError::NotHomogeneous { index });
        }
        if g.is_constant() {
            return Err(GrobnerError::ConstantGenerator { index });
        }
    }
    let mut prev = nvars as i64;
    for k in 1..=gens.len() {
        let dim = Ideal::new(field.clone(), nvars, gens[..k].to_vec())?.krull_dimension(cfg)?;
        if dim != prev - 1 {
            return Ok((false, k - 1));
        }
        prev = dim;
    }
    Ok((true, gens.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, PrimeField};

    fn k() -> PrimeField {
        PrimeField::new(10007).unwrap()
    }

    fn ideal(gens: &[&str], nvars: usize) -> Ideal<PrimeField> {
        Ideal::new(k(), nvars, gens.iter().map(|g| parse_poly(g, nvars, k()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn krull_examples() {
        let cfg = GbConfig::default();
        assert_eq!(ideal(&["x0"], 3).krull_dimension(&cfg).unwrap(), 2);
        assert_eq!(ideal(&["x0*x3 - x1*x2"], 4).krull_dimension(&cfg).unwrap(), 3);
        assert_eq!(ideal(&["1"], 4).krull_dimension(&cfg).unwrap(), -1);
    }

    #[test]
    fn projective_examples() {
        let cfg = GbConfig::default();
        assert_eq!(ideal(&["x0"], 4).projective_dimension(&cfg).unwrap(), 2);
        assert_eq!(ideal(&["x0", "x1", "x2", "x3"], 4).projective_dimension(&cfg).unwrap(), -1);
        assert_eq!(
            ideal(&["x0 + 1"], 4).projective_dimension(&cfg),
            Err(GrobnerError::NotHomogeneous { index: 0 })
        );
    }

    #[test]
    fn hilbert_examples() {
        let cfg = GbConfig::default();
        assert_eq!(ideal(&["x0", "x1"], 4).hilbert_function(2, &cfg).unwrap(), 3);
        let empty = Ideal::new(k(), 4, vec![]).unwrap();
        for t in 0..6 {
            assert_eq!(empty.hilbert_function(t, &cfg).unwrap(), binomial(3 + t as i64, t as i64));
        }
    }

    #[test]
    fn regular_sequence_examples() {
        let cfg = GbConfig::default();
        let p = |s: &str| parse_poly(s, 3, k()).unwrap();
        assert_eq!(is_regular_sequence(&k(), 3, &[p("x0"), p("x1"), p("x2")], &cfg).unwrap(), (true, 3));
        assert_eq!(is_regular_sequence(&k(), 3, &[p("x0"), p("x0*x1")], &cfg).unwrap(), (false, 1));
        assert_eq!(
            is_regular_sequence(&k(), 3, &[p("x0"), p("0")], &cfg),
            Err(GrobnerError::ZeroGenerator { index: 1 })
        );
    }

    #[test]
    fn elimination_examples() {
        let cfg = GbConfig::default();
        assert!(ideal(&["x0 - x1"], 2).eliminate(1, &cfg).unwrap().gens().is_empty());
        let e = ideal(&["x0 - x1", "x0 - x2"], 3).eliminate(1, &cfg).unwrap();
        assert_eq!(e.gens().len(), 1);
        assert_eq!(e.gens()[0], parse_poly("x1 - x2", 3, k()).unwrap());
        assert!(ideal(&["x0^2 - x1*x2"], 3).eliminate(1, &cfg).unwrap().gens().is_empty());
        assert_eq!(
            ideal(&["x0"], 2).eliminate(3, &cfg).unwrap_err(),
            GrobnerError::BlockOutOfRange { k: 3, nvars: 2 }
        );
    }
}
