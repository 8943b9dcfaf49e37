//! Sheaves of multiplicity six on the projective plane, through their
//! locally free resolutions: exact linear algebra over `Q` and `F_p`,
//! cohomological classification into six strata, Kronecker module
//! semistability and seeded samplers.

pub mod algebra;
pub mod kronecker;
pub mod presentation;
pub mod sampler;
pub mod strata;
pub mod verify;
