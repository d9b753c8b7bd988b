//! Exact computations on zero-cycles of bielliptic surfaces.

pub mod brauer;
pub mod catalog;
pub mod cycles;
pub mod elliptic;
pub mod error;
pub mod localdata;
pub mod numeric;
pub mod surfaces;

pub use error::{Error, Result};

use num_rational::BigRational;

pub type Rational = BigRational;
pub type Integer = num_bigint::BigInt;
pub type RationalCurve = elliptic::EllipticCurve<elliptic::RationalField>;
pub type FpCurve = elliptic::EllipticCurve<elliptic::PrimeField>;
pub type RationalPoint = elliptic::CurvePoint<BigRational>;
pub type FpPoint = elliptic::CurvePoint<elliptic::Fp>;
