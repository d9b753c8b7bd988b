use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};
use crate::numeric::factor;

/// A point in projective coordinates: the identity `O` or an affine `(x, y)`.
///
/// The derived ordering puts `O` first and then sorts by `x`, then `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurvePoint<E> {
    Identity,
    Affine { x: E, y: E },
}

impl<E> CurvePoint<E> {
    pub fn affine(x: E, y: E) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, CurvePoint::Identity)
    }

    pub fn x(&self) -> Option<&E> {
        match self {
            CurvePoint::Identity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }
}

impl<E: fmt::Display> fmt::Display for CurvePoint<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Identity => f.write_str("O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// `c4^3 - c6^2 = 1728 * discriminant` and `j = c4^3 / discriminant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveInvariants<E> {
    pub c4: E,
    pub c6: E,
    pub discriminant: E,
    pub j: E,
}

/// `y^2 = x^3 + a x + b` over a field of characteristic other than 2 and 3.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticCurve<F: Field> {
    field: F,
    a: F::Elem,
    b: F::Elem,
    label: Option<String>,
}

impl<F: Field> EllipticCurve<F> {
    pub fn new(field: F, a: F::Elem, b: F::Elem) -> Result<Self> {
        let ch = field.characteristic();
        if ch == 2 || ch == 3 {
            return Err(Error::UnsupportedPrime {
                p: ch,
                reason: "short Weierstrass models need characteristic other than 2 and 3".into(),
            });
        }
        let curve = EllipticCurve { field, a, b, label: None };
        if curve.field.is_zero(&curve.discriminant()) {
            return Err(Error::input(format!(
                "singular curve y^2 = x^3 + ({})x + ({}) over {}",
                curve.a,
                curve.b,
                curve.field.name()
            )));
        }
        Ok(curve)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn a(&self) -> &F::Elem {
        &self.a
    }

    pub fn b(&self) -> &F::Elem {
        &self.b
    }

    /// `-16 (4a^3 + 27b^2)`
    pub fn discriminant(&self) -> F::Elem {
        let f = &self.field;
        let four_a3 = f.mul(&f.from_i64(4), &f.cube(&self.a));
        let b2 = f.mul(&f.from_i64(27), &f.square(&self.b));
        f.mul(&f.from_i64(-16), &f.add(&four_a3, &b2))
    }

    pub fn invariants(&self) -> CurveInvariants<F::Elem> {
        let f = &self.field;
        let c4 = f.mul(&f.from_i64(-48), &self.a);
        let c6 = f.mul(&f.from_i64(-864), &self.b);
        let discriminant = self.discriminant();
        let j = f.div(&f.cube(&c4), &discriminant).expect("nonsingular");
        CurveInvariants { c4, c6, discriminant, j }
    }

    pub fn j_invariant(&self) -> F::Elem {
        self.invariants().j
    }

    /// Right-hand side `x^3 + a x + b`.
    pub fn rhs(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        f.add(&f.add(&f.cube(x), &f.mul(&self.a, x)), &self.b)
    }

    pub fn contains(&self, p: &CurvePoint<F::Elem>) -> bool {
        match p {
            CurvePoint::Identity => true,
            CurvePoint::Affine { x, y } => self.field.square(y) == self.rhs(x),
        }
    }

    fn check(&self, p: &CurvePoint<F::Elem>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::input(format!("point {p} is not on the curve")))
        }
    }

    pub fn neg(&self, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        match p {
            CurvePoint::Identity => CurvePoint::Identity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), self.field.neg(y)),
        }
    }

    /// Chord-and-tangent addition; both points must lie on the curve.
    pub fn add(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn add_unchecked(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Identity, _) => return q.clone(),
            (_, CurvePoint::Identity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return CurvePoint::Identity;
            }
            // tangent: (3x^2 + a) / 2y
            let num = f.add(&f.mul(&f.from_i64(3), &f.square(x1)), &self.a);
            f.div(&num, &f.mul(&f.from_i64(2), y1)).expect("y1 != 0")
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1)).expect("x1 != x2")
        };
        let x3 = f.sub(&f.sub(&f.square(&slope), x1), x2);
        let y3 = f.sub(&f.mul(&slope, &f.sub(x1, &x3)), y1);
        CurvePoint::affine(x3, y3)
    }

    pub fn sub(&self, p: &CurvePoint<F::Elem>, q: &CurvePoint<F::Elem>) -> Result<CurvePoint<F::Elem>> {
        self.add(p, &self.neg(q))
    }

    /// Scalar multiple `n * p` by double-and-add.
    pub fn mul(&self, n: &BigInt, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        let base = if n.is_negative() { self.neg(p) } else { p.clone() };
        let k = n.abs();
        let mut acc = CurvePoint::Identity;
        for i in (0..k.bits()).rev() {
            acc = self.add_unchecked(&acc, &acc);
            if k.bit(i) {
                acc = self.add_unchecked(&acc, &base);
            }
        }
        acc
    }

    pub fn mul_small(&self, n: i64, p: &CurvePoint<F::Elem>) -> CurvePoint<F::Elem> {
        self.mul(&BigInt::from(n), p)
    }

    /// Least `n <= bound` with `n p = O`, or `None` if the order exceeds the bound.
    pub fn torsion_point_order(&self, p: &CurvePoint<F::Elem>, bound: u64) -> Result<Option<u64>> {
        self.check(p)?;
        let mut acc = p.clone();
        for n in 1..=bound {
            if acc.is_identity() {
                return Ok(Some(n));
            }
            acc = self.add_unchecked(&acc, p);
        }
        Ok(None)
    }

    /// Exact order of a point known to be killed by `multiple` (e.g. the group order).
    pub fn order_dividing(&self, p: &CurvePoint<F::Elem>, multiple: u64) -> u64 {
        let mut order = multiple;
        for (q, _) in factor(&BigInt::from(multiple)) {
            let q = q.to_u64().expect("factor of u64");
            while order % q == 0 && self.mul(&BigInt::from(order / q), p).is_identity() {
                order /= q;
            }
        }
        debug_assert!(self.mul(&BigInt::from(order), p).is_identity());
        order
    }
}

impl<F: Field> fmt::Display for EllipticCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({}) over {}", self.a, self.b, self.field.name())?;
        if let Some(l) = &self.label {
            write!(f, " [{l}]")?;
        }
        Ok(())
    }
}
