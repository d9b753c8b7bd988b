use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A p-adic valuation. `Infinite` is the valuation of zero and compares above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Valuation::Finite(v) if v < 0)
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn padic_valuation(x: &BigRational, p: &BigInt) -> Valuation {
    match int_valuation(x.numer(), p) {
        None => Valuation::Infinite,
        Some(vn) => {
            let vd = int_valuation(x.denom(), p).expect("denominator is nonzero");
            Valuation::Finite(vn as i64 - vd as i64)
        }
    }
}

/// Strips every factor of `p` from a nonzero rational: returns `x / p^v` and `v`.
pub fn unit_part(x: &BigRational, p: &BigInt) -> Option<(BigRational, i64)> {
    let v = padic_valuation(x, p).finite()?;
    let scale = BigRational::from_integer(num_traits::pow(p.clone(), v.unsigned_abs() as usize));
    let u = if v >= 0 { x / scale } else { x * scale };
    Some((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    fn p(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn examples() {
        assert_eq!(padic_valuation(&rational(8, 1), &p(2)), Valuation::Finite(3));
        assert_eq!(padic_valuation(&rational(1, 9), &p(3)), Valuation::Finite(-2));
        assert_eq!(padic_valuation(&rational(0, 1), &p(7)), Valuation::Infinite);
    }

    #[test]
    fn ordering_puts_infinity_last() {
        assert!(Valuation::Finite(1_000) < Valuation::Infinite);
        assert!(Valuation::Finite(-3) < Valuation::Finite(2));
    }

    #[test]
    fn unit_part_removes_prime() {
        let (u, v) = unit_part(&rational(-99, 4), &p(11)).unwrap();
        assert_eq!(v, 1);
        assert_eq!(u, rational(-9, 4));
    }
}
