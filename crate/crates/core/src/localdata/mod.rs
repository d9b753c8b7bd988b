//! Local behaviour of a rational elliptic curve at a prime.

mod padic;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{factor, is_prime, padic_valuation, residue_mod, square_class, SquareClass, Valuation};
use crate::{RationalCurve, RationalPoint};

pub use padic::{padic_roots, PadicRoot};
pub(crate) use padic::{derivative_mod_p, eval_mod_p, roots_mod_p};

/// Hensel lifting precision used unless the caller asks otherwise.
pub const DEFAULT_PADIC_PRECISION: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionClass {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl ReductionClass {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionClass::SplitMultiplicative | ReductionClass::NonsplitMultiplicative)
    }

    pub fn tag(self) -> &'static str {
        match self {
            ReductionClass::Good => "good",
            ReductionClass::SplitMultiplicative => "split-multiplicative",
            ReductionClass::NonsplitMultiplicative => "nonsplit-multiplicative",
            ReductionClass::Additive => "additive",
        }
    }
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionData {
    pub p: u64,
    pub v_delta_min: Valuation,
    pub v_c4: Valuation,
    pub v_j: Valuation,
    pub class: ReductionClass,
}

/// A model minimal at `p`, obtained from the input by `(x, y) -> (x / p^(2k), y / p^(3k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalModel {
    pub curve: RationalCurve,
    pub scale_exponent: i64,
    pub reduction: ReductionData,
}

impl LocalModel {
    /// Carries an x-coordinate of the input model to this one.
    pub fn x_to_minimal(&self, x: &BigRational) -> BigRational {
        x * pow_rational(self.reduction.p, -2 * self.scale_exponent)
    }
}

fn pow_rational(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize));
    if e >= 0 {
        base
    } else {
        base.recip()
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::input(format!("{p} is not prime")))
    }
}

fn check_local_prime(p: u64) -> Result<()> {
    check_prime(p)?;
    if p < 5 {
        return Err(Error::UnsupportedPrime {
            p,
            reason: "local models need p >= 5; use the j-valuation test at 2 and 3".into(),
        });
    }
    Ok(())
}

fn floor_div(v: Valuation, d: i64) -> Option<i64> {
    v.finite().map(|v| v.div_euclid(d))
}

pub fn minimal_at_p(e: &RationalCurve, p: u64) -> Result<LocalModel> {
    check_local_prime(p)?;
    let pb = BigInt::from(p);
    let va = padic_valuation(e.a(), &pb);
    let vb = padic_valuation(e.b(), &pb);
    // For p >= 5 the short model is minimal iff v(A) < 4 or v(B) < 6.
    let k = match (floor_div(va, 4), floor_div(vb, 6)) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("nonsingular curves have A or B nonzero"),
    };
    let a = e.a() * pow_rational(p, -4 * k);
    let b = e.b() * pow_rational(p, -6 * k);
    let mut curve = RationalCurve::from_short(a, b)?;
    if let Some(l) = e.label() {
        curve = curve.with_label(l);
    }
    let inv = curve.invariants();
    let v_delta_min = padic_valuation(&inv.discriminant, &pb);
    let v_c4 = padic_valuation(&inv.c4, &pb);
    let v_j = padic_valuation(&inv.j, &pb);
    let class = if v_delta_min == Valuation::Finite(0) {
        ReductionClass::Good
    } else if v_c4 == Valuation::Finite(0) {
        let minus_c6 = residue_mod(&-inv.c6.clone(), p).expect("minimal model is integral");
        if minus_c6 != 0 && crate::numeric::primes_pow_mod(minus_c6, (p - 1) / 2, p) == 1 {
            ReductionClass::SplitMultiplicative
        } else {
            ReductionClass::NonsplitMultiplicative
        }
    } else {
        ReductionClass::Additive
    };
    Ok(LocalModel {
        curve,
        scale_exponent: k,
        reduction: ReductionData { p, v_delta_min, v_c4, v_j, class },
    })
}

pub fn reduction_type(e: &RationalCurve, p: u64) -> Result<ReductionData> {
    Ok(minimal_at_p(e, p)?.reduction)
}

/// `v_p(j) < 0`. Valid at every prime since it only looks at `j`.
pub fn potentially_multiplicative(e: &RationalCurve, p: u64) -> Result<bool> {
    check_prime(p)?;
    Ok(padic_valuation(&e.j_invariant(), &BigInt::from(p)).is_negative())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsogeny {
    /// Exactly one of the curves is potentially multiplicative at `p`.
    Certificate { p: u64, v_j: [Valuation; 2] },
    Inconclusive,
}

/// Looks for a prime where exactly one curve has potentially multiplicative reduction.
/// Such a prime forbids an isogeny even over an algebraic closure.
pub fn geometric_nonisogeny_certificate(e1: &RationalCurve, e2: &RationalCurve) -> NonIsogeny {
    let j1 = e1.j_invariant();
    let j2 = e2.j_invariant();
    let mut candidates: Vec<BigInt> = [j1.numer(), j1.denom(), j2.numer(), j2.denom()]
        .into_iter()
        .filter(|n| !n.is_zero())
        .flat_map(|n| factor(&n.abs()).into_iter().map(|(q, _)| q))
        .collect();
    candidates.sort();
    candidates.dedup();
    for q in candidates {
        let v1 = padic_valuation(&j1, &q);
        let v2 = padic_valuation(&j2, &q);
        if v1.is_negative() != v2.is_negative() {
            // Certificates past u64 would need enormous j-invariants; skip them.
            if let Ok(p) = u64::try_from(&q) {
                return NonIsogeny::Certificate { p, v_j: [v1, v2] };
            }
        }
    }
    NonIsogeny::Inconclusive
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TateData {
    pub v_q: u64,
    pub q_square_class: SquareClass,
}

/// Valuation and square class of the Tate parameter. Since `1/j = q (1 - 744 q + ...)`
/// and the bracket is a square, `q` and `1/j` share a square class.
pub fn tate_valuation(e: &RationalCurve, p: u64) -> Result<TateData> {
    let red = reduction_type(e, p)?;
    if !red.class.is_multiplicative() {
        return Err(Error::precondition(format!(
            "Tate parameter needs multiplicative reduction, found {} at {p}",
            red.class
        )));
    }
    let v_j = red.v_j.finite().expect("multiplicative reduction has j != 0");
    let q_square_class = square_class(&e.j_invariant().recip(), p)?;
    Ok(TateData { v_q: (-v_j) as u64, q_square_class })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoTorsionStatus {
    Rational,
    UnramifiedQuadratic,
    RamifiedQuadratic,
    /// No root over Q_p; the splitting field has degree 3 or 6.
    Cubic,
}

impl TwoTorsionStatus {
    pub fn tag(self) -> &'static str {
        match self {
            TwoTorsionStatus::Rational => "rational",
            TwoTorsionStatus::UnramifiedQuadratic => "unramified-quadratic",
            TwoTorsionStatus::RamifiedQuadratic => "ramified-quadratic",
            TwoTorsionStatus::Cubic => "cubic",
        }
    }
}

/// A 2-torsion point defined over Q_p, in coordinates of the minimal model.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTwoTorsionPoint {
    pub x: PadicRoot,
    /// The same point on the input model when its x-coordinate is rational.
    pub rational: Option<RationalPoint>,
    pub reduces_to_node: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoTorsionField {
    pub p: u64,
    pub status: TwoTorsionStatus,
    /// Square class of the discriminant of the cubic. For quadratic status this names
    /// the extension `Q_p(sqrt d)` over which the remaining points appear.
    pub discriminant_class: SquareClass,
    pub points: Vec<LocalTwoTorsionPoint>,
    /// Residue of the singular point of the special fibre, when there is one.
    pub node_residue: Option<u64>,
}

impl TwoTorsionField {
    pub fn degree(&self) -> u32 {
        match self.status {
            TwoTorsionStatus::Rational => 1,
            TwoTorsionStatus::UnramifiedQuadratic | TwoTorsionStatus::RamifiedQuadratic => 2,
            TwoTorsionStatus::Cubic if self.discriminant_class.is_square() => 3,
            TwoTorsionStatus::Cubic => 6,
        }
    }

    pub fn extension_class(&self) -> Option<SquareClass> {
        match self.status {
            TwoTorsionStatus::UnramifiedQuadratic | TwoTorsionStatus::RamifiedQuadratic => {
                Some(self.discriminant_class)
            }
            _ => None,
        }
    }

    pub fn description(&self) -> String {
        match self.status {
            TwoTorsionStatus::Rational => format!("E[2] is rational over Q_{}", self.p),
            TwoTorsionStatus::UnramifiedQuadratic | TwoTorsionStatus::RamifiedQuadratic => format!(
                "E[2] becomes rational over Q_{}(sqrt d), d in class {}",
                self.p, self.discriminant_class
            ),
            TwoTorsionStatus::Cubic => format!(
                "no 2-torsion over Q_{}; splitting field of degree {}",
                self.p,
                self.degree()
            ),
        }
    }
}

pub fn full_two_torsion_field(e: &RationalCurve, p: u64) -> Result<TwoTorsionField> {
    full_two_torsion_field_with_precision(e, p, DEFAULT_PADIC_PRECISION)
}

pub fn full_two_torsion_field_with_precision(e: &RationalCurve, p: u64, precision: u32) -> Result<TwoTorsionField> {
    let model = minimal_at_p(e, p)?;
    let (a, b) = (model.curve.a(), model.curve.b());
    let cubic = vec![b.clone(), a.clone(), BigRational::zero(), BigRational::one()];
    let roots = padic_roots(&cubic, p, precision);

    let reduced: Vec<u64> = cubic.iter().map(|c| residue_mod(c, p).expect("integral")).collect();
    let d_reduced = derivative_mod_p(&reduced, p);
    let node_residue = roots_mod_p(&reduced, p)
        .into_iter()
        .find(|&r| eval_mod_p(&d_reduced, r, p) == 0);

    let modulus = num_traits::pow(BigInt::from(p), precision as usize);
    let exact: Vec<(BigInt, RationalPoint)> = e
        .rational_cubic_roots()
        .into_iter()
        .map(|x| {
            let xm = model.x_to_minimal(&x);
            let inv_den = xm.denom().extended_gcd(&modulus).x;
            let res = (xm.numer() * inv_den).mod_floor(&modulus);
            (res, RationalPoint::affine(x, BigRational::zero()))
        })
        .collect();
    let points: Vec<LocalTwoTorsionPoint> = roots
        .into_iter()
        .map(|x| {
            let rational = exact.iter().find(|(r, _)| *r == x.approx).map(|(_, pt)| pt.clone());
            let reduces_to_node = node_residue == Some(x.residue(p));
            LocalTwoTorsionPoint { x, rational, reduces_to_node }
        })
        .collect();

    let disc = -(BigRational::from_integer(4.into()) * a * a * a) - BigRational::from_integer(27.into()) * b * b;
    let discriminant_class = square_class(&disc, p)?;
    let status = match points.len() {
        3 => TwoTorsionStatus::Rational,
        1 if discriminant_class.is_ramified() => TwoTorsionStatus::RamifiedQuadratic,
        1 => TwoTorsionStatus::UnramifiedQuadratic,
        0 => TwoTorsionStatus::Cubic,
        n => unreachable!("a separable cubic has 0, 1 or 3 roots in a field, got {n}"),
    };
    Ok(TwoTorsionField { p, status, discriminant_class, points, node_residue })
}

/// The 2-torsion point lying in the `mu_2` of the Tate uniformisation: the unique
/// Q_p-rational one that does not reduce to the node.
pub fn mu2_point(e: &RationalCurve, p: u64) -> Result<LocalTwoTorsionPoint> {
    let red = reduction_type(e, p)?;
    if red.class != ReductionClass::SplitMultiplicative {
        return Err(Error::precondition(format!(
            "the mu_2 point needs split multiplicative reduction, found {} at {p}",
            red.class
        )));
    }
    let field = full_two_torsion_field(e, p)?;
    if field.points.is_empty() {
        return Err(Error::precondition(format!("no 2-torsion point over Q_{p}")));
    }
    let mut smooth = field.points.into_iter().filter(|pt| !pt.reduces_to_node);
    match (smooth.next(), smooth.next()) {
        (Some(pt), None) => Ok(pt),
        _ => Err(Error::precondition(format!(
            "expected exactly one 2-torsion point with nonsingular reduction at {p}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{integer, rational};

    fn e33() -> RationalCurve {
        RationalCurve::from_integers(-14931, 220590).unwrap()
    }

    fn e198() -> RationalCurve {
        RationalCurve::from_integers(-3171, 68510).unwrap()
    }

    #[test]
    fn rescales_twelfth_power() {
        let p = 7u64;
        let e = RationalCurve::from_integers(0, 117_649).unwrap();
        let m = minimal_at_p(&e, p).unwrap();
        assert_eq!(m.scale_exponent, 1);
        assert_eq!(*m.curve.b(), integer(1));
        assert_eq!(m.reduction.class, ReductionClass::Good);
    }

    #[test]
    fn clears_denominators() {
        let e = RationalCurve::from_short(rational(1, 11 * 11 * 11 * 11), integer(1)).unwrap();
        let m = minimal_at_p(&e, 11).unwrap();
        assert_eq!(m.scale_exponent, -1);
        assert_eq!(*m.curve.a(), integer(1));
    }

    #[test]
    fn catalog_curves_split_at_11() {
        for e in [e33(), e198()] {
            let r = reduction_type(&e, 11).unwrap();
            assert_eq!(r.class, ReductionClass::SplitMultiplicative);
            assert_eq!(r.v_c4, Valuation::Finite(0));
            assert_eq!(r.v_delta_min, Valuation::Finite(2));
            assert_eq!(r.v_j, Valuation::Finite(-2));
        }
    }

    #[test]
    fn good_and_additive() {
        let e = RationalCurve::from_integers(0, 1).unwrap();
        assert_eq!(reduction_type(&e, 11).unwrap().v_delta_min, Valuation::Finite(0));
        let e = RationalCurve::from_integers(0, 11).unwrap();
        let r = reduction_type(&e, 11).unwrap();
        assert_eq!(r.class, ReductionClass::Additive);
        assert_eq!(r.v_c4, Valuation::Infinite);
    }

    #[test]
    fn small_primes_rejected() {
        for p in [2, 3] {
            assert!(matches!(reduction_type(&e33(), p), Err(Error::UnsupportedPrime { .. })));
        }
        assert!(matches!(reduction_type(&e33(), 9), Err(Error::Input(_))));
    }

    #[test]
    fn potential_reduction_at_two() {
        assert!(potentially_multiplicative(&e198(), 2).unwrap());
        assert!(!potentially_multiplicative(&e33(), 2).unwrap());
        let j0 = RationalCurve::from_integers(0, 5).unwrap();
        assert!(!potentially_multiplicative(&j0, 13).unwrap());
    }

    #[test]
    fn nonisogeny() {
        match geometric_nonisogeny_certificate(&e33(), &e198()) {
            NonIsogeny::Certificate { p, v_j } => {
                assert_eq!(p, 2);
                assert_eq!(v_j, [Valuation::Finite(0), Valuation::Finite(-2)]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(geometric_nonisogeny_certificate(&e33(), &e33()), NonIsogeny::Inconclusive);
        let a = RationalCurve::from_integers(0, 1).unwrap();
        let b = RationalCurve::from_integers(0, 2).unwrap();
        assert_eq!(geometric_nonisogeny_certificate(&a, &b), NonIsogeny::Inconclusive);
    }

    #[test]
    fn tate_parameter() {
        for e in [e33(), e198()] {
            let t = tate_valuation(&e, 11).unwrap();
            let r = reduction_type(&e, 11).unwrap();
            assert_eq!(Valuation::Finite(t.v_q as i64), r.v_delta_min);
            // Delta of the Tate curve is q times a square
            let m = minimal_at_p(&e, 11).unwrap();
            assert_eq!(t.q_square_class, square_class(&m.curve.discriminant(), 11).unwrap());
        }
        assert!(matches!(
            tate_valuation(&RationalCurve::from_integers(0, 1).unwrap(), 11),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn two_torsion_fields() {
        let e = RationalCurve::from_integers(-1, 0).unwrap();
        assert_eq!(full_two_torsion_field(&e, 7).unwrap().status, TwoTorsionStatus::Rational);
        for e in [e33(), e198()] {
            let f = full_two_torsion_field(&e, 11).unwrap();
            assert_eq!(f.status, TwoTorsionStatus::Rational);
            assert!(f.points.iter().all(|pt| pt.rational.is_some()));
            assert_eq!(f.node_residue.is_some(), true);
        }
        // x^3 - 11 x: roots 0 and +-sqrt(11), ramified
        let e = RationalCurve::from_integers(-11, 0).unwrap();
        let f = full_two_torsion_field(&e, 11).unwrap();
        assert_eq!(f.status, TwoTorsionStatus::RamifiedQuadratic);
        assert!(f.extension_class().unwrap().is_ramified());
        // x^3 - 2x over Q_5: 2 is a non-residue
        let e = RationalCurve::from_integers(-2, 0).unwrap();
        assert_eq!(full_two_torsion_field(&e, 5).unwrap().status, TwoTorsionStatus::UnramifiedQuadratic);
        // x^3 - 2 over Q_7: no roots, and Q_7 holds the cube roots of unity
        let e = RationalCurve::from_integers(0, -2).unwrap();
        let f = full_two_torsion_field(&e, 7).unwrap();
        assert_eq!(f.status, TwoTorsionStatus::Cubic);
        assert_eq!(f.degree(), 3);
        // x^3 - 5 over Q_5 is Eisenstein and -27 is not a square mod 5
        let e = RationalCurve::from_integers(0, -5).unwrap();
        assert_eq!(full_two_torsion_field(&e, 5).unwrap().degree(), 6);
    }

    #[test]
    fn mu2_points() {
        let pt = mu2_point(&e33(), 11).unwrap();
        assert_eq!(pt.rational, Some(RationalPoint::affine(integer(-129), integer(0))));
        let pt = mu2_point(&e198(), 11).unwrap();
        assert_eq!(pt.rational, Some(RationalPoint::affine(integer(31), integer(0))));
        let good = RationalCurve::from_integers(0, 1).unwrap();
        assert!(matches!(mu2_point(&good, 11), Err(Error::Precondition(_))));
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // (x - r1)(x - r2)(x - r3) with r1 = r2 mod p and r1 + r2 + r3 = 0
        #[test]
        fn constructed_multiplicative(r1 in -40i64..40, k in 1i64..6, p in prop::sample::select(vec![5u64, 7, 11, 13])) {
            prop_assume!(r1 % p as i64 != 0);
            let r2 = r1 + p as i64 * k;
            let r3 = -r1 - r2;
            let a = r1 * r2 + r1 * r3 + r2 * r3;
            let b = -r1 * r2 * r3;
            let e = RationalCurve::from_integers(a, b).unwrap();
            let red = reduction_type(&e, p).unwrap();
            prop_assert!(red.class.is_multiplicative());
            prop_assert_eq!(red.v_delta_min.finite().map(|v| -v), red.v_j.finite());
            let f = full_two_torsion_field(&e, p).unwrap();
            prop_assert_eq!(f.status, TwoTorsionStatus::Rational);
            prop_assert_eq!(f.points.iter().filter(|pt| !pt.reduces_to_node).count(), 1);
            let smooth = f.points.iter().find(|pt| !pt.reduces_to_node).unwrap();
            prop_assert_eq!(smooth.rational.clone(), Some(RationalPoint::affine(integer(r3), integer(0))));
            let t = tate_valuation(&e, p).unwrap();
            prop_assert!(t.q_square_class.is_square());
            if red.class == ReductionClass::SplitMultiplicative {
                prop_assert_eq!(mu2_point(&e, p).unwrap().rational, smooth.rational.clone());
            }
        }

        #[test]
        fn split_status_stable_under_prime_to_p_scaling(r1 in 1i64..30, k in 1i64..4, u in 1i64..8) {
            let p = 11u64;
            prop_assume!(r1 % 11 != 0 && u % 11 != 0);
            let r2 = r1 + 11 * k;
            let r3 = -r1 - r2;
            let a = r1 * r2 + r1 * r3 + r2 * r3;
            let b = -r1 * r2 * r3;
            let e = RationalCurve::from_integers(a, b).unwrap();
            let scaled = RationalCurve::from_integers(a * u.pow(4), b * u.pow(6)).unwrap();
            prop_assert_eq!(reduction_type(&e, p).unwrap().class, reduction_type(&scaled, p).unwrap().class);
        }

        // (x - 2m)(x^2 + 2m x + m^2 - D) has the pair -m +- sqrt(D), D = p^k c.
        #[test]
        fn quadratic_class_matches_tate(m in 1i64..20, k in 1u32..5, c in 1i64..10) {
            let p = 7i64;
            prop_assume!(m % p != 0 && c % p != 0);
            let d = p.pow(k) * c;
            let e = RationalCurve::from_integers(-3 * m * m - d, -2 * m * (m * m - d)).unwrap();
            let red = reduction_type(&e, p as u64).unwrap();
            prop_assert!(red.class.is_multiplicative());
            let f = full_two_torsion_field(&e, p as u64).unwrap();
            let t = tate_valuation(&e, p as u64).unwrap();
            let expected = square_class(&integer(d), p as u64).unwrap();
            prop_assert_eq!(t.q_square_class, expected);
            prop_assert_eq!(f.status == TwoTorsionStatus::Rational, expected.is_square());
            if let Some(class) = f.extension_class() {
                prop_assert_eq!(class, expected);
            }
        }
    }
}
