//! Hyper-Kloosterman sums, Dirichlet characters, twisted L-functions and the
//! GL(n) Voronoi summation identities with additive twists modulo a prime,
//! implemented so that every ingredient can be checked numerically or exactly.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the exact Laurent
//! polynomial algebra is generic over its coefficient ring. The aliases below
//! fix the instances used by the command-line driver and the test suites.

pub mod chars;
pub mod checks;
pub mod coeffs;
pub mod error;
pub mod kloosterman;
pub mod lfun;
pub mod mellin;
pub mod quad;
pub mod scalar;
pub mod special;
pub mod symalg;
pub mod voronoi;

pub use chars::{CharacterTable, DirichletCharacter, Parity, PrimeModulus};
pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision complex number.
pub type C64 = num_complex::Complex<f64>;

/// Laurent polynomial with exact rational coefficients.
pub type RationalPoly = symalg::LaurentPoly<num_rational::BigRational>;
