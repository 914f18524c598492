//! Exact expansion of homogeneous forms on sub-simplices of the standard
//! simplex, successive difference substitution (SDS) over barycentric
//! subdivisions, and real-zero detection for integer homogeneous systems.
//!
//! All arithmetic is exact (`BigRational`); nothing in this crate uses
//! floating point.

pub mod boundscalc;
pub mod error;
pub mod expansion;
pub mod golden;
pub mod polyring;
pub mod rational;
pub mod sdsengine;
pub mod simplexgeo;
pub mod zerodetect;

pub use error::{Error, Result};
pub use expansion::{cell_center_sign, expand, sign_classify, Sign, SignClass};
pub use polyring::{Form, Monomial, RationalPoint};
pub use rational::Rational;
pub use simplexgeo::{Permutation, PermutationWord, SimplexMatrix};
