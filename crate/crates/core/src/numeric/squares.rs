use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes::{is_prime, pow_mod};
use super::valuation::unit_part;
use crate::error::{Error, Result};

fn reduce(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

/// Reduction of a p-integral rational modulo p; `None` if p divides the denominator.
pub fn residue_mod(x: &BigRational, p: u64) -> Option<u64> {
    let d = reduce(x.denom(), p);
    if d == 0 {
        return None;
    }
    let n = reduce(x.numer(), p);
    let d_inv = pow_mod(d, p - 2, p);
    Some(((n as u128 * d_inv as u128) % p as u128) as u64)
}

/// Legendre symbol via Euler's criterion; `p` must be an odd prime.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let r = reduce(a, p);
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn is_square_mod(u: &BigInt, p: u64) -> Result<bool> {
    if p == 2 || !is_prime(p) {
        return Err(Error::input(format!("{p} is not an odd prime")));
    }
    match legendre(u, p) {
        0 => Err(Error::input(format!("{u} is divisible by {p}"))),
        s => Ok(s == 1),
    }
}

pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
        .expect("odd primes have non-residues")
}

/// Class of a nonzero element of Q_p modulo squares, p odd.
///
/// `U` is the class of a non-square unit and `P` the class of the uniformizer, so the
/// four classes form a Klein four-group under multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "p")]
    P,
    #[serde(rename = "up")]
    UP,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [SquareClass::One, SquareClass::U, SquareClass::P, SquareClass::UP];

    fn from_bits(unit_nonsquare: bool, odd_valuation: bool) -> Self {
        match (unit_nonsquare, odd_valuation) {
            (false, false) => SquareClass::One,
            (true, false) => SquareClass::U,
            (false, true) => SquareClass::P,
            (true, true) => SquareClass::UP,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            SquareClass::One => (false, false),
            SquareClass::U => (true, false),
            SquareClass::P => (false, true),
            SquareClass::UP => (true, true),
        }
    }

    pub fn is_square(self) -> bool {
        self == SquareClass::One
    }

    /// True when adjoining a square root gives a ramified extension.
    pub fn is_ramified(self) -> bool {
        self.bits().1
    }

    pub fn tag(self) -> &'static str {
        match self {
            SquareClass::One => "1",
            SquareClass::U => "u",
            SquareClass::P => "p",
            SquareClass::UP => "up",
        }
    }

    /// A concrete rational representative: 1, the least non-residue, p, or their product.
    pub fn representative(self, p: u64) -> u64 {
        let u = smallest_nonresidue(p);
        match self {
            SquareClass::One => 1,
            SquareClass::U => u,
            SquareClass::P => p,
            SquareClass::UP => u * p,
        }
    }
}

impl Mul for SquareClass {
    type Output = SquareClass;

    fn mul(self, rhs: SquareClass) -> SquareClass {
        let (a, b) = self.bits();
        let (c, d) = rhs.bits();
        SquareClass::from_bits(a ^ c, b ^ d)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub fn square_class(x: &BigRational, p: u64) -> Result<SquareClass> {
    if p == 2 || !is_prime(p) {
        return Err(Error::input(format!("square classes need an odd prime, got {p}")));
    }
    if x.is_zero() {
        return Err(Error::input("zero has no square class"));
    }
    let (u, v) = unit_part(x, &BigInt::from(p)).expect("nonzero");
    let r = residue_mod(&u, p).expect("unit part is a p-adic unit");
    let nonsquare = pow_mod(r, (p - 1) / 2, p) != 1;
    Ok(SquareClass::from_bits(nonsquare, v.rem_euclid(2) == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{integer, rational};

    #[test]
    fn square_mod_examples() {
        assert!(is_square_mod(&4.into(), 11).unwrap());
        // squares mod 5: {1, 4}
        assert!(!is_square_mod(&2.into(), 5).unwrap());
        // 11 = 3 mod 4, so -1 is not a square
        assert!(!is_square_mod(&(-1).into(), 11).unwrap());
    }

    #[test]
    fn square_mod_rejects_bad_input() {
        assert!(is_square_mod(&3.into(), 2).is_err());
        assert!(is_square_mod(&22.into(), 11).is_err());
        assert!(is_square_mod(&3.into(), 9).is_err());
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(square_class(&integer(11), 11).unwrap(), SquareClass::P);
        assert_eq!(square_class(&integer(99), 11).unwrap(), SquareClass::P);
        // squares mod 11 are {1, 3, 4, 5, 9}
        assert_eq!(square_class(&integer(2 * 121), 11).unwrap(), SquareClass::U);
        assert_eq!(square_class(&rational(3, 121), 11).unwrap(), SquareClass::One);
        assert!(square_class(&integer(0), 11).is_err());
        assert!(square_class(&integer(3), 2).is_err());
    }

    #[test]
    fn residues() {
        assert_eq!(residue_mod(&rational(1, 2), 11), Some(6));
        assert_eq!(residue_mod(&rational(-3, 1), 11), Some(8));
        assert_eq!(residue_mod(&rational(1, 11), 11), None);
        assert_eq!(smallest_nonresidue(11), 2);
        assert_eq!(smallest_nonresidue(7), 3);
    }

    #[test]
    fn class_group_law() {
        for a in SquareClass::ALL {
            assert_eq!(a * a, SquareClass::One);
            assert_eq!(a * SquareClass::One, a);
        }
        assert_eq!(SquareClass::U * SquareClass::P, SquareClass::UP);
    }
}
