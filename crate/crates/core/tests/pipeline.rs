use bielliptic_core::brauer::{obstruction_witness, Conclusion, WitnessCounts};
use bielliptic_core::catalog::lookup;
use bielliptic_core::cycles::{finite_instance, parse_script, replay_derivation};
use bielliptic_core::elliptic::PrimeField;
use bielliptic_core::localdata::{minimal_at_p, reduction_type, tate_valuation, ReductionClass};
use bielliptic_core::numeric::square_class;
use bielliptic_core::{FpCurve, RationalCurve};
use proptest::prelude::*;

#[test]
fn catalog_to_witness() {
    let e1 = lookup("33.a2").unwrap();
    let e2 = lookup("198.a2").unwrap();
    for e in [&e1, &e2] {
        let m = minimal_at_p(e, 11).unwrap();
        assert_eq!(m.reduction.class, ReductionClass::SplitMultiplicative);
        // q and the minimal discriminant share a square class for Tate curves
        let t = tate_valuation(e, 11).unwrap();
        assert_eq!(t.q_square_class, square_class(&m.curve.discriminant(), 11).unwrap());
    }
    let r = obstruction_witness(&e1, &e2, 11).unwrap();
    assert_eq!(r.conclusion, Conclusion::Established);
    assert_eq!(r.counts, WitnessCounts { hom: 16, hom_gal: 16, h2: 4, witnesses: 2 });
}

#[test]
fn script_from_text_with_a_bad_step() {
    let text = "% type 1\n% conclusion 2*([P0,Q] - [O,Q]) => 0\n# wrong: P is not torsion\ntorsion-equivalence : 2*([P,Q] - [O,Q]) => 0\ntorsion-equivalence : 2*([P0,Q] - [O,Q]) => 0\n";
    let v = replay_derivation(&parse_script("local", text).unwrap()).unwrap();
    assert!(!v.passed());
    let fixed = text.replace("torsion-equivalence : 2*([P,Q] - [O,Q]) => 0\n", "");
    assert!(replay_derivation(&parse_script("local", &fixed).unwrap()).unwrap().passed());
}

/// `(x - r1)(x - r2)(x - r3)` with `r1 + r2 + r3 = 0`, two roots congruent mod `p`.
fn nodal_curve(s: i64, t: i64, p: i64) -> Option<RationalCurve> {
    let (r2, r3) = (s, s + p * t);
    let r1 = -(r2 + r3);
    let a = r1 * r2 + r1 * r3 + r2 * r3;
    let b = -r1 * r2 * r3;
    RationalCurve::from_integers(a, b).ok()
}

fn fp_curve(p: u64, a: u64, b: u64) -> Option<FpCurve> {
    let f = PrimeField::new(p).ok()?;
    FpCurve::new(f, f.elem(a as i128), f.elem(b as i128)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_pairs_always_give_the_same_counts(s1 in -30i64..30, t1 in 1i64..4, s2 in -30i64..30, t2 in 1i64..4) {
        let p = 7;
        let (Some(e1), Some(e2)) = (nodal_curve(s1, t1, p), nodal_curve(s2, t2, p)) else { return Ok(()) };
        let split = |e: &RationalCurve| reduction_type(e, p as u64).map(|r| r.class == ReductionClass::SplitMultiplicative);
        prop_assume!(split(&e1) == Ok(true) && split(&e2) == Ok(true));
        let r = obstruction_witness(&e1, &e2, p as u64).unwrap();
        prop_assert_eq!(r.counts, WitnessCounts { hom: 16, hom_gal: 16, h2: 4, witnesses: 2 });
        prop_assert_eq!(r.working_field.degree(), 1);
        prop_assert!(r.conclusion != Conclusion::NoWitness);
    }

    #[test]
    fn finite_type1_exponents_divide_four(p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23]), a in 0u64..23, b in 0u64..23, c in 0u64..23, d in 0u64..23) {
        let (Some(e1), Some(e2)) = (fp_curve(p, a % p, b % p), fp_curve(p, c % p, d % p)) else { return Ok(()) };
        let two = e1.two_torsion(p).unwrap();
        prop_assume!(two.len() > 1);
        let fi = finite_instance(1, &e1, &two[1], &e2, p).unwrap();
        prop_assert!(fi.within_bound(), "{} {}", e1, e2);
    }

    #[test]
    fn finite_type5_exponents_divide_nine(p in prop::sample::select(vec![7u64, 13, 19, 31]), a in 1u64..31, b in 0u64..31, d in 1u64..31) {
        let (Some(e1), Some(e2)) = (fp_curve(p, a % p, b % p), fp_curve(p, 0, d % p)) else { return Ok(()) };
        let pts = e1.points(p).unwrap();
        let p0 = pts.iter().find(|q| !q.is_identity() && e1.mul_small(3, q).is_identity());
        prop_assume!(p0.is_some());
        let fi = finite_instance(5, &e1, p0.unwrap(), &e2, p).unwrap();
        prop_assert!(fi.within_bound(), "{} {}", e1, e2);
    }
}

#[test]
fn nodal_construction_is_multiplicative() {
    let e = nodal_curve(1, 1, 7).unwrap();
    assert!(reduction_type(&e, 7).unwrap().class.is_multiplicative());
    // both split and non-split cases occur in the sampled range
    let classes: Vec<ReductionClass> = (-30..30)
        .filter_map(|s| nodal_curve(s, 1, 7))
        .filter_map(|e| reduction_type(&e, 7).ok().map(|r| r.class))
        .collect();
    assert!(classes.contains(&ReductionClass::SplitMultiplicative));
    assert!(classes.contains(&ReductionClass::NonsplitMultiplicative));
}
