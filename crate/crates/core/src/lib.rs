//! Cones of lines with high contact order on projective hypersurfaces,
//! polar loci, and the closed-form invariant bounds built on them.

pub mod polyring;
pub mod grobner;
pub mod contact;
pub mod solve;
pub mod polar;
pub mod invariants;
pub mod sampler;
