use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::curve::{CurvePoint, EllipticCurve};
use super::field::{Field, Fp, PrimeField};
use crate::error::{Error, Result};
use crate::numeric::FinAbGroup;

/// Default ceiling on the primes for which we enumerate points.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 10_000;

/// Environment variable overriding [`DEFAULT_ENUMERATION_BOUND`].
pub const ENUMERATION_BOUND_VAR: &str = "BIELLIPTIC_ENUM_BOUND";

pub fn enumeration_bound() -> u64 {
    std::env::var(ENUMERATION_BOUND_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_BOUND)
}

/// Automorphisms of a curve fixing `O` that the bielliptic actions use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Automorphism {
    /// `-1`
    Neg,
    /// A primitive fourth root of unity acting on a `j = 1728` curve.
    I,
    /// A primitive cube root of unity acting on a `j = 0` curve.
    Omega,
}

impl Automorphism {
    pub fn order(self) -> u32 {
        match self {
            Automorphism::Neg => 2,
            Automorphism::I => 4,
            Automorphism::Omega => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Automorphism::Neg => "neg",
            Automorphism::I => "i",
            Automorphism::Omega => "omega",
        }
    }
}

/// `E(F_p)` as `Z/d1 x Z/d2` with one generator per invariant factor.
#[derive(Debug, Clone)]
pub struct GroupStructure {
    pub group: FinAbGroup,
    pub generators: Vec<CurvePoint<Fp>>,
    pub orders: Vec<u64>,
    pub order: u64,
    logs: HashMap<CurvePoint<Fp>, Vec<u64>>,
}

impl GroupStructure {
    /// Coordinates of `p` with respect to `generators`, each reduced modulo its generator's order.
    pub fn log(&self, p: &CurvePoint<Fp>) -> Option<Vec<BigInt>> {
        self.logs.get(p).map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().copied().max().unwrap_or(1)
    }
}

impl EllipticCurve<PrimeField> {
    pub fn from_residues(p: u64, a: i64, b: i64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        EllipticCurve::new(field, field.from_i64(a), field.from_i64(b))
    }

    pub fn p(&self) -> u64 {
        self.field().p()
    }

    fn check_bound(&self, bound: u64) -> Result<()> {
        if self.p() > bound {
            return Err(Error::Resource(format!(
                "p = {} exceeds the enumeration bound {bound}",
                self.p()
            )));
        }
        Ok(())
    }

    /// For each residue v, the square roots of v (ascending).
    fn root_table(&self) -> Vec<Vec<Fp>> {
        let f = self.field();
        let mut roots = vec![Vec::new(); self.p() as usize];
        for y in f.elements() {
            roots[f.square(&y).0 as usize].push(y);
        }
        roots
    }

    /// All points, `O` first, then sorted by `x` then `y`.
    pub fn points(&self, bound: u64) -> Result<Vec<CurvePoint<Fp>>> {
        self.check_bound(bound)?;
        let roots = self.root_table();
        let mut pts = vec![CurvePoint::Identity];
        for x in self.field().elements() {
            for y in &roots[self.rhs(&x).0 as usize] {
                pts.push(CurvePoint::affine(x, *y));
            }
        }
        Ok(pts)
    }

    /// `#E(F_p)` by enumerating x and counting square roots of the right-hand side.
    pub fn count_points(&self, bound: u64) -> Result<u64> {
        self.check_bound(bound)?;
        let mut counts = vec![0u64; self.p() as usize];
        let f = self.field();
        for y in f.elements() {
            counts[f.square(&y).0 as usize] += 1;
        }
        Ok(1 + f.elements().map(|x| counts[self.rhs(&x).0 as usize]).sum::<u64>())
    }

    /// `O` followed by the points `(x0, 0)`, sorted by `x0`.
    pub fn two_torsion(&self, bound: u64) -> Result<Vec<CurvePoint<Fp>>> {
        self.check_bound(bound)?;
        let f = self.field();
        Ok(std::iter::once(CurvePoint::Identity)
            .chain(
                f.elements()
                    .filter(|x| f.is_zero(&self.rhs(x)))
                    .map(|x| CurvePoint::affine(x, Fp(0))),
            )
            .collect())
    }

    /// Structure `Z/d1 x Z/d2`: a first point of maximal order generates `Z/d2`, and the
    /// first point of order `d1` meeting its span trivially generates the complement.
    pub fn group_structure(&self, bound: u64) -> Result<GroupStructure> {
        let pts = self.points(bound)?;
        let n = pts.len() as u64;
        let orders: Vec<u64> = pts.iter().map(|p| self.order_dividing(p, n)).collect();
        let exponent = *orders.iter().max().expect("O is always present");
        let (imax, _) = orders.iter().enumerate().find(|(_, &o)| o == exponent).expect("max exists");
        let g_big = pts[imax].clone();
        let d1 = n / exponent;

        let mut span = Vec::with_capacity(exponent as usize);
        let mut acc = CurvePoint::Identity;
        for _ in 0..exponent {
            span.push(acc.clone());
            acc = self.add_unchecked(&acc, &g_big);
        }

        let mut logs = HashMap::new();
        if d1 == 1 {
            for (k, p) in span.iter().enumerate() {
                logs.insert(p.clone(), vec![k as u64]);
            }
            return Ok(GroupStructure {
                group: FinAbGroup::cyclic(n),
                generators: vec![g_big],
                orders: vec![exponent],
                order: n,
                logs,
            });
        }

        let in_span: std::collections::HashSet<_> = span.iter().cloned().collect();
        let g_small = pts
            .iter()
            .zip(&orders)
            .filter(|(_, &o)| o == d1)
            .map(|(p, _)| p)
            .find(|p| {
                let mut m = (*p).clone();
                for _ in 1..d1 {
                    if in_span.contains(&m) {
                        return false;
                    }
                    m = self.add_unchecked(&m, p);
                }
                true
            })
            .cloned()
            .expect("a point of maximal order spans a direct summand");

        let mut row = CurvePoint::Identity;
        for i in 0..d1 {
            for (j, s) in span.iter().enumerate() {
                logs.insert(self.add_unchecked(&row, s), vec![i, j as u64]);
            }
            row = self.add_unchecked(&row, &g_small);
        }
        debug_assert_eq!(logs.len() as u64, n);
        Ok(GroupStructure {
            group: FinAbGroup::new(0, vec![BigInt::from(d1), BigInt::from(exponent)])?,
            generators: vec![g_small, g_big],
            orders: vec![d1, exponent],
            order: n,
            logs,
        })
    }

    /// Smallest element of order `n` in `F_p^*`, if `n | p - 1`.
    fn root_of_unity(&self, n: u64) -> Option<Fp> {
        let f = self.field();
        if (self.p() - 1) % n != 0 {
            return None;
        }
        f.elements().skip(1).find(|&z| {
            f.pow(z, n).0 == 1 && (1..n).all(|k| n % k != 0 || f.pow(z, k).0 != 1)
        })
    }

    /// Applies `-1`, `i: (x, y) -> (-x, i y)` on `y^2 = x^3 + ax`, or
    /// `omega: (x, y) -> (zeta x, y)` on `y^2 = x^3 + b`. The roots of unity are the least
    /// residues of the required order.
    pub fn apply_automorphism(&self, aut: Automorphism, p: &CurvePoint<Fp>) -> Result<CurvePoint<Fp>> {
        let f = self.field();
        let (x, y) = match p {
            CurvePoint::Identity => return Ok(CurvePoint::Identity),
            CurvePoint::Affine { x, y } => (*x, *y),
        };
        match aut {
            Automorphism::Neg => Ok(self.neg(p)),
            Automorphism::I => {
                if !f.is_zero(self.b()) {
                    return Err(Error::input("the automorphism i needs a curve y^2 = x^3 + ax"));
                }
                let i = self
                    .root_of_unity(4)
                    .ok_or_else(|| Error::input(format!("F_{} has no primitive fourth root of unity", self.p())))?;
                Ok(CurvePoint::affine(f.neg(&x), f.mul(&i, &y)))
            }
            Automorphism::Omega => {
                if !f.is_zero(self.a()) {
                    return Err(Error::input("the automorphism omega needs a curve y^2 = x^3 + b"));
                }
                let z = self
                    .root_of_unity(3)
                    .ok_or_else(|| Error::input(format!("F_{} has no primitive cube root of unity", self.p())))?;
                Ok(CurvePoint::affine(f.mul(&z, &x), y))
            }
        }
    }
}
