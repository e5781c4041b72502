//! Local types of modular forms and elliptic curves at a prime, read off
//! from level valuations and root-number changes under quadratic twists.
//!
//! Module map:
//!
//! - [`arith`]: Kronecker symbols, valuations, `p*` and modular helpers.
//! - [`characters`]: Dirichlet characters on `(Z/p^a)^×` and the global
//!   quadratic characters used for twisting.
//! - [`oracle`]: explicit finite exponential sums that verify the twist
//!   sign rules independently of the classifier.
//! - [`classify`]: allowed types per valuation, the twist classifiers for
//!   odd `p` and for `p = 2`, and the exceptional curves at 2.
//! - [`hilbert`]: real quadratic units and the auxiliary-prime search.
//! - [`io`]: record parsing, batch classification and report output.
//!
//! Integer code is generic over [`ExactInt`] and the oracle sums over
//! [`RealScalar`]; the aliases below pin the common instantiations.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

pub mod arith;
pub mod characters;
pub mod classify;
pub mod hilbert;
pub mod io;
pub mod oracle;

pub use arith::Sign;

/// Exact signed integers: `i64`, `i128`, `BigInt`.
pub trait ExactInt:
    Integer + Signed + Clone + FromPrimitive + ToPrimitive + Display + Debug
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + FromPrimitive + ToPrimitive + Display + Debug
{
}

/// Floating scalars the oracle sums can run in.
pub trait RealScalar: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

impl<T> RealScalar for T where T: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

/// Arbitrary-precision integer used for unit coefficients.
pub type BigInt = num_bigint::BigInt;

/// Double-precision complex value, the default for oracle sums.
pub type ComplexValue = num_complex::Complex<f64>;

pub type EpsilonSum64 = oracle::EpsilonSum<f64>;
pub type EpsilonSum32 = oracle::EpsilonSum<f32>;
pub type TwistRatio64 = oracle::TwistRatio<f64>;

/// Units of real quadratic orders with big-integer coefficients.
pub type QuadUnit = hilbert::FieldUnit<BigInt>;
pub type QuadUnit64 = hilbert::FieldUnit<i64>;
