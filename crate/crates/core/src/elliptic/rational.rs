use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::curve::{CurvePoint, EllipticCurve};
use super::field::{ExactField, PrimeField};
use crate::error::{Error, Result};
use crate::numeric::residue_mod;

pub type RationalField = ExactField<BigRational>;

impl EllipticCurve<RationalField> {
    pub fn from_short(a: BigRational, b: BigRational) -> Result<Self> {
        EllipticCurve::new(RationalField::new(), a, b)
    }

    pub fn from_integers(a: i64, b: i64) -> Result<Self> {
        Self::from_short(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    /// Converts `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` to the isomorphic
    /// short model `y^2 = x^3 - 27 c4 x - 54 c6`.
    pub fn from_long_form(ainvs: &[BigRational; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = ainvs;
        let two = BigRational::from_integer(2.into());
        let four = BigRational::from_integer(4.into());
        let b2 = a1 * a1 + &four * a2;
        let b4 = &two * a4 + a1 * a3;
        let b6 = a3 * a3 + &four * a6;
        let c4 = &b2 * &b2 - BigRational::from_integer(24.into()) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + BigRational::from_integer(36.into()) * &b2 * &b4
            - BigRational::from_integer(216.into()) * &b6;
        Self::from_short(
            -BigRational::from_integer(27.into()) * c4,
            -BigRational::from_integer(54.into()) * c6,
        )
    }

    /// Rational roots of `x^3 + a x + b`, ascending.
    pub fn rational_cubic_roots(&self) -> Vec<BigRational> {
        // Substituting x = X / m with m = lcm of the denominators gives a monic integer cubic.
        let m = self.a().denom().lcm(self.b().denom());
        let a = (self.a() * BigRational::from_integer(&m * &m)).to_integer();
        let b = (self.b() * BigRational::from_integer(&m * &m * &m)).to_integer();
        integer_cubic_roots(&a, &b)
            .into_iter()
            .map(|r| BigRational::new(r, m.clone()))
            .collect()
    }

    /// `O` followed by the rational points `(x0, 0)`, sorted by `x0`.
    pub fn two_torsion(&self) -> Vec<CurvePoint<BigRational>> {
        std::iter::once(CurvePoint::Identity)
            .chain(
                self.rational_cubic_roots()
                    .into_iter()
                    .map(|x| CurvePoint::affine(x, BigRational::zero())),
            )
            .collect()
    }

    /// Reduction modulo a prime of good reduction for this model.
    pub fn reduce_mod(&self, p: u64) -> Result<EllipticCurve<PrimeField>> {
        let field = PrimeField::new(p)?;
        let a = residue_mod(self.a(), p)
            .ok_or_else(|| Error::input(format!("a is not {p}-integral")))?;
        let b = residue_mod(self.b(), p)
            .ok_or_else(|| Error::input(format!("b is not {p}-integral")))?;
        let mut reduced = EllipticCurve::new(field, field.elem(a as i128), field.elem(b as i128))?;
        if let Some(l) = self.label() {
            reduced = reduced.with_label(l);
        }
        Ok(reduced)
    }
}

fn eval(a: &BigInt, b: &BigInt, x: &BigInt) -> BigInt {
    x * x * x + a * x + b
}

/// Integer zero of an integer cubic on `[lo, hi]` where it is monotone.
fn monotone_zero(a: &BigInt, b: &BigInt, lo: BigInt, hi: BigInt) -> Option<BigInt> {
    if lo > hi {
        return None;
    }
    let increasing = eval(a, b, &lo) <= eval(a, b, &hi);
    let (mut lo, mut hi) = (lo, hi);
    while lo <= hi {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let v = eval(a, b, &mid);
        if v.is_zero() {
            return Some(mid);
        }
        if (v < BigInt::zero()) == increasing {
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    None
}

/// Integer roots of `X^3 + aX + b` by bisection on the monotone pieces.
pub(crate) fn integer_cubic_roots(a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    let bound = BigInt::one() + a.abs() + b.abs();
    let mut roots = Vec::new();
    if !a.is_negative() {
        roots.extend(monotone_zero(a, b, -bound.clone(), bound));
    } else {
        // Critical points at +-sqrt(-a/3); s = floor of that.
        let s = ((-a) / BigInt::from(3)).sqrt();
        roots.extend(monotone_zero(a, b, -bound.clone(), -&s - 1));
        roots.extend(monotone_zero(a, b, -s.clone(), s.clone()));
        roots.extend(monotone_zero(a, b, s + 1, bound));
    }
    roots.sort();
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{integer, rational};

    fn roots(a: i64, b: i64) -> Vec<i64> {
        integer_cubic_roots(&a.into(), &b.into())
            .into_iter()
            .map(|r| i64::try_from(r).unwrap())
            .collect()
    }

    #[test]
    fn integer_roots_brute_force() {
        for a in -40i64..=40 {
            for b in -60i64..=60 {
                let expected: Vec<i64> = (-70..=70).filter(|x| x * x * x + a * x + b == 0).collect();
                assert_eq!(roots(a, b), expected, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn two_torsion_over_q() {
        let e = EllipticCurve::from_integers(-1, 0).unwrap();
        let xs: Vec<_> = e.two_torsion().iter().map(|p| p.x().cloned()).collect();
        assert_eq!(xs, vec![None, Some(integer(-1)), Some(integer(0)), Some(integer(1))]);
        // x^3 + 2 has no rational root
        assert_eq!(EllipticCurve::from_integers(0, 2).unwrap().two_torsion(), vec![CurvePoint::Identity]);
    }

    #[test]
    fn rational_roots_with_denominators() {
        // (x - 1/2)(x + 1/4)(x + 1/4) is singular; use (x - 1/2)(x + 1/3)(x + 1/6)
        // = x^3 - 7/36 x - 1/36
        let e = EllipticCurve::from_short(rational(-7, 36), rational(-1, 36)).unwrap();
        assert_eq!(e.rational_cubic_roots(), vec![rational(-1, 3), rational(-1, 6), rational(1, 2)]);
    }

    #[test]
    fn long_form_of_33a2_gives_short_equation() {
        let ainvs = [integer(1), integer(1), integer(0), integer(-11), integer(0)];
        let e = EllipticCurve::from_long_form(&ainvs).unwrap();
        assert_eq!(*e.a(), integer(-14931));
        assert_eq!(*e.b(), integer(220590));
    }

    #[test]
    fn singular_rejected() {
        assert!(EllipticCurve::from_integers(-3, 2).is_err());
        assert!(EllipticCurve::from_integers(0, 0).is_err());
    }

    #[test]
    fn reduction_mod_p() {
        let e = EllipticCurve::from_short(rational(1, 2), integer(1)).unwrap();
        let r = e.reduce_mod(7).unwrap();
        assert_eq!(r.a().0, 4);
        assert!(e.reduce_mod(2).is_err());
    }
}
