use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::smith::{smith_normal_form, SmithForm};
use crate::error::{Error, Result};

/// `Z^rank x Z/d_1 x ... x Z/d_k` with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub rank: usize,
    #[serde(with = "bigint_strings")]
    pub invariant_factors: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_diagonal(&[BigInt::from(n)])
    }

    /// Builds the group `Z/d_1 x ... x Z/d_k` for an arbitrary list of moduli, where a
    /// modulus of 0 contributes a free summand. The result is put in invariant-factor form.
    pub fn from_diagonal(moduli: &[BigInt]) -> Self {
        let n = moduli.len();
        let mut m = Matrix::zeros(n, n);
        for (i, d) in moduli.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        quotient_group(n, &m.to_rows()).expect("square relation matrix").group
    }

    /// Invariant factors must form a divisibility chain of integers >= 2.
    pub fn new(rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self> {
        if invariant_factors.iter().any(|d| *d < BigInt::from(2)) {
            return Err(Error::input("invariant factors must be at least 2"));
        }
        if invariant_factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::input("invariant factors must form a divisibility chain"));
        }
        Ok(FinAbGroup { rank, invariant_factors })
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.invariant_factors.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Exponent of the torsion-free case; 0 if the group has a free part.
    pub fn exponent(&self) -> BigInt {
        if self.rank > 0 {
            return BigInt::zero();
        }
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn torsion_exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn product(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut moduli: Vec<BigInt> = self.invariant_factors.clone();
        moduli.extend(other.invariant_factors.iter().cloned());
        let torsion = FinAbGroup::from_diagonal(&moduli);
        FinAbGroup { rank: self.rank + other.rank, invariant_factors: torsion.invariant_factors }
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// `Z^n` modulo the row span of a relation matrix, with coordinates for its elements.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub n_generators: usize,
    pub relations: Vec<Vec<BigInt>>,
    pub group: FinAbGroup,
    smith: SmithForm<BigInt>,
    /// Diagonal modulus for each coordinate of `x * right` (0 = free).
    moduli: Vec<BigInt>,
}

impl Quotient {
    /// Smith coordinates of `x`: entries of `x * right` reduced modulo the diagonal.
    /// Coordinates with modulus 1 are always zero and are dropped.
    pub fn coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.n_generators, "element has wrong length");
        let y = self.smith.right.left_apply(x);
        y.into_iter()
            .zip(&self.moduli)
            .filter(|(_, d)| !d.is_one())
            .map(|(v, d)| if d.is_zero() { v } else { v.mod_floor(d) })
            .collect()
    }

    /// Order of the image of `x`; `None` if it has infinite order.
    pub fn element_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let y = self.smith.right.left_apply(x);
        let mut order = BigInt::one();
        for (v, d) in y.iter().zip(&self.moduli) {
            if d.is_zero() {
                if !v.is_zero() {
                    return None;
                }
            } else {
                let k = d / v.gcd(d);
                order = order.lcm(&k);
            }
        }
        Some(order)
    }

    /// True when `x` lies in the relation subgroup.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.element_order(x).is_some_and(|o| o.is_one())
    }
}

pub fn quotient_group(n_generators: usize, relations: &[Vec<BigInt>]) -> Result<Quotient> {
    if let Some(bad) = relations.iter().position(|r| r.len() != n_generators) {
        return Err(Error::input(format!(
            "relation {bad} has {} entries, expected {n_generators}",
            relations[bad].len()
        )));
    }
    let m = Matrix::from_rows(relations.to_vec(), n_generators);
    let smith = smith_normal_form(&m);
    let mut moduli = smith.invariants();
    moduli.resize(n_generators, BigInt::zero());
    let rank = moduli.iter().filter(|d| d.is_zero()).count();
    let invariant_factors = moduli.iter().filter(|d| d.abs() > BigInt::one()).cloned().collect();
    Ok(Quotient {
        n_generators,
        relations: relations.to_vec(),
        group: FinAbGroup { rank, invariant_factors },
        smith,
        moduli,
    })
}

pub(crate) mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}
