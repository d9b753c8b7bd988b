//! Exact arithmetic: valuations, primality, square classes, integer matrices,
//! Smith normal form and finitely generated abelian groups.

mod group;
mod matrix;
mod primes;
mod smith;
mod squares;
mod valuation;

pub use group::{quotient_group, FinAbGroup, Quotient};
pub use matrix::Matrix;
pub use primes::{factor, is_prime, is_probable_prime, next_prime, smallest_prime_factor};
pub(crate) use primes::pow_mod as primes_pow_mod;
pub use smith::{smith_normal_form, SmithForm};
pub use squares::{
    is_square_mod, legendre, residue_mod, smallest_nonresidue, square_class, SquareClass,
};
pub use valuation::{int_valuation, padic_valuation, unit_part, Valuation};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Parses `"a"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
