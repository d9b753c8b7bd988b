//! Short Weierstrass curves over Q and prime fields.

mod curve;
mod field;
mod finite;
mod rational;

pub use curve::{CurveInvariants, CurvePoint, EllipticCurve};
pub use field::{ExactField, Field, Fp, PrimeField};
pub use finite::{enumeration_bound, Automorphism, GroupStructure, DEFAULT_ENUMERATION_BOUND, ENUMERATION_BOUND_VAR};
pub use rational::RationalField;
