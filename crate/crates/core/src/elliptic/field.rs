use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;

use num_traits::{FromPrimitive, Inv, Num};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::is_prime;

/// Field arithmetic used by the curve code. Fields are values so that a runtime
/// modulus can travel with the curve.
pub trait Field: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    fn name(&self) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn cube(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(a, a), a)
    }
}

/// Characteristic-zero field backed by any exact `num-traits` scalar, e.g. `BigRational`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactField<T>(PhantomData<T>);

impl<T> ExactField<T> {
    pub const fn new() -> Self {
        ExactField(PhantomData)
    }
}

impl<T> Field for ExactField<T>
where
    T: Num + Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Inv<Output = T> + FromPrimitive,
{
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }
    fn one(&self) -> T {
        T::one()
    }
    fn from_i64(&self, n: i64) -> T {
        T::from_i64(n).expect("exact scalars represent every i64")
    }
    fn add(&self, a: &T, b: &T) -> T {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }
    fn neg(&self, a: &T) -> T {
        T::zero() - a.clone()
    }
    fn inv(&self, a: &T) -> Option<T> {
        (!a.is_zero()).then(|| a.clone().inv())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
}

/// Element of a prime field, stored as its least nonnegative residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp(pub u64);

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i128) -> Fp {
        Fp(v.rem_euclid(self.p as i128) as u64)
    }

    pub fn pow(&self, a: Fp, e: u64) -> Fp {
        Fp(crate::numeric::primes_pow_mod(a.0, e, self.p))
    }

    pub fn is_square(&self, a: Fp) -> bool {
        a.0 == 0 || self.p == 2 || self.pow(a, (self.p - 1) / 2).0 == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Fp> {
        (0..self.p).map(Fp)
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        Fp(0)
    }
    fn one(&self) -> Fp {
        Fp(1 % self.p)
    }
    fn from_i64(&self, n: i64) -> Fp {
        self.elem(n as i128)
    }
    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        Fp(((a.0 as u128 + b.0 as u128) % self.p as u128) as u64)
    }
    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        Fp(((a.0 as u128 + self.p as u128 - b.0 as u128) % self.p as u128) as u64)
    }
    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        Fp(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64)
    }
    fn neg(&self, a: &Fp) -> Fp {
        Fp((self.p - a.0) % self.p)
    }
    fn inv(&self, a: &Fp) -> Option<Fp> {
        (a.0 != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn name(&self) -> String {
        format!("F_{}", self.p)
    }
}
