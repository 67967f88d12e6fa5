//! Exact symbolic calculus for split reductive groups: root systems and
//! relative root data, Chevalley-group word arithmetic over Laurent
//! polynomial rings, and certified matrix factorizations.

pub mod error;
pub mod relgrp;
pub mod rings;
pub mod chevgrp;
pub mod decomp;
pub mod rootsys;
pub mod scalar;

pub use error::{GroupError, RingError};
pub use rings::poly::{LaurentPoly, VarSet};
pub use scalar::{Dual, Fp, Rational, Scalar, ScalarField};

/// Exact rationals.
pub type Q = scalar::Rational;
/// The five-element field.
pub type F5 = scalar::Fp<5>;
/// The seven-element field.
pub type F7 = scalar::Fp<7>;
/// Dual numbers over the rationals.
pub type DualQ = scalar::Dual<Q>;
/// Dual numbers over F7.
pub type DualF7 = scalar::Dual<F7>;
/// Univariate (or multivariate) rational functions over the rationals.
pub type QFrac = rings::frac::RatFrac<Q>;
