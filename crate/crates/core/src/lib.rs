//! Exact arithmetic for generalized Thue-Morse Laurent series: coefficient
//! domains, series expansion, continued fractions and Hankel determinants.

pub mod contfrac;
pub mod error;
pub mod fp;
pub mod hankel;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod series;
pub mod suites;
pub mod tlc;
pub mod twoadic;
pub mod zpoly;

pub use error::{Error, Result};
pub use fp::{Fp, PrimeField};
pub use poly::{Degree, Polynomial};
pub use ratfunc::RatFunc;
pub use ring::{Field, Ring};

/// Rationals.
pub type Q = num_rational::BigRational;
/// Integer polynomials in `u`.
pub type Zu = Polynomial<num_bigint::BigInt>;
/// Rational functions in `u`.
pub type Qu = RatFunc;
