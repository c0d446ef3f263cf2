use std::fmt;

use thiserror::Error;

use super::field::{Field, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("malformed coordinate '{0}'")]
    BadCoordinate(String),
}

/// A point of projective space, stored with its first nonzero coordinate
/// equal to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint<F: Field> {
    coords: Vec<F::Elem>,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(field: &F, coords: Vec<F::Elem>) -> Result<Self, PointError> {
        let pivot = coords
            .iter()
            .position(|c| !field.is_zero(c))
            .ok_or(PointError::AllZero)?;
        let inv = field.inv(&coords[pivot]).expect("nonzero pivot");
        let coords = coords.iter().map(|c| field.mul(c, &inv)).collect();
        Ok(ProjPoint { coords })
    }

    /// The coordinate point `e_i` in `len` coordinates.
    pub fn basis(field: &F, len: usize, i: usize) -> Self {
        let mut coords = vec![field.zero(); len];
        coords[i] = field.one();
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn pivot(&self, field: &F) -> usize {
        self.coords
            .iter()
            .position(|c| !field.is_zero(c))
            .expect("projective point has a nonzero coordinate")
    }
}

impl ProjPoint<PrimeField> {
    /// Reads comma-separated (optionally negative) integers.
    pub fn parse(field: &PrimeField, text: &str) -> Result<Self, PointError> {
        let coords = text
            .split(',')
            .map(|s| {
                let s = s.trim();
                s.parse::<i64>()
                    .map(|v| field.from_i64(v))
                    .or_else(|_| field.parse_literal(s).ok_or(()))
                    .map_err(|_| PointError::BadCoordinate(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ProjPoint::new(field, coords)
    }
}

impl<F: Field> fmt::Debug for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, "]")
    }
}

/// True when `v` is a scalar multiple of `p` (including `v = 0`).
pub fn is_proportional<F: Field>(field: &F, p: &[F::Elem], v: &[F::Elem]) -> bool {
    let Some(i) = p.iter().position(|c| !field.is_zero(c)) else {
        return true;
    };
    let pi_inv = field.inv(&p[i]).expect("nonzero");
    let lambda = field.mul(&v[i], &pi_inv);
    p.iter()
        .zip(v)
        .all(|(a, b)| field.mul(a, &lambda) == *b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_idempotent() {
        let k = PrimeField::new(11).unwrap();
        let p = ProjPoint::new(&k, vec![0, 3, 6, 9]).unwrap();
        assert_eq!(p.coords(), &[0, 1, 2, 3]);
        let q = ProjPoint::new(&k, p.coords().to_vec()).unwrap();
        assert_eq!(p, q);
        assert_eq!(ProjPoint::new(&k, vec![0, 0]), Err(PointError::AllZero));
    }

    #[test]
    fn parse_negative_coordinates() {
        let k = PrimeField::new(10007).unwrap();
        let p = ProjPoint::parse(&k, "1, 0,0,-1").unwrap();
        assert_eq!(p.coords(), &[1, 0, 0, 10006]);
        assert!(ProjPoint::parse(&k, "1,a").is_err());
    }

    #[test]
    fn proportionality() {
        let k = PrimeField::new(11).unwrap();
        assert!(is_proportional(&k, &[1, 2, 3], &[2, 4, 6]));
        assert!(is_proportional(&k, &[1, 2, 3], &[0, 0, 0]));
        assert!(!is_proportional(&k, &[1, 2, 3], &[1, 2, 4]));
    }
}
