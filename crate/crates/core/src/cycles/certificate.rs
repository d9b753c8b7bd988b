use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::replay::{builtin_script, composite_reduction, replay_derivation, Verdict};
use super::{pushforward_relations, quotient_exponent, tensor_model, MarkedGroup, QuotientReport, RelationSet, TensorModel};
use crate::elliptic::{Automorphism, PrimeField};
use crate::error::{Error, Result};
use crate::surfaces::{cover_chain, epsilon, exponent_bound, validate_action, ActionSpec, BaseField, CoverStep};
use crate::{FpCurve, FpPoint};

/// How the exponent bound for a type is assembled: covers down to Type 1 or 5, then the
/// cokernel of `pi_*` and the per-cycle bound from the replayed derivation.
#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub surface_type: u8,
    pub chain: Vec<CoverStep>,
    pub base_type: u8,
    pub cover_degree: u64,
    pub epsilon: u64,
    pub cokernel_factor: u64,
    pub replay_factor: u64,
    pub verdicts: Vec<(String, Verdict)>,
    pub total: u64,
    pub exponent_bound: u64,
}

impl BoundCertificate {
    pub fn verified(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| v.passed()) && self.total != 0 && self.exponent_bound % self.total == 0
    }
}

fn certified_multiple(v: &Verdict) -> u64 {
    match v {
        Verdict::Pass { multiple: Some(k), .. } => k.to_u64().unwrap_or(0),
        _ => 0,
    }
}

pub fn full_bound_certificate(t: u8) -> Result<BoundCertificate> {
    let chain = cover_chain(t)?;
    let base_type = chain.last().map_or(t, |s| s.target_type);
    let cover_degree: u64 = chain.iter().map(|s| s.degree).product();
    let eps = epsilon(base_type)?;
    let mut verdicts = Vec::new();

    if cover_degree > 1 {
        let v = replay_derivation(&composite_reduction(cover_degree)?)?;
        verdicts.push((format!("composite_reduction(m={cover_degree})"), v));
    }
    let cokernel = replay_derivation(&composite_reduction(eps)?)?;
    let cokernel_factor = certified_multiple(&cokernel);
    verdicts.push((format!("composite_reduction(m={eps})"), cokernel));

    let main = if base_type == 1 { "type1_main" } else { "type5_main" };
    let v = replay_derivation(&builtin_script(main).expect("built-in"))?;
    let replay_factor = certified_multiple(&v);
    verdicts.push((main.to_string(), v));

    let cover_factor = match verdicts.first() {
        Some((_, v)) if cover_degree > 1 => certified_multiple(v),
        _ => 1,
    };
    Ok(BoundCertificate {
        surface_type: t,
        chain,
        base_type,
        cover_degree,
        epsilon: eps,
        cokernel_factor,
        replay_factor,
        verdicts,
        total: cover_factor * cokernel_factor * replay_factor,
        exponent_bound: exponent_bound(t)?,
    })
}

/// The push-forward quotient for `X = E1 x E2` over a prime field.
#[derive(Debug, Clone)]
pub struct FiniteInstance {
    pub surface_type: u8,
    pub p: u64,
    pub model: TensorModel,
    pub relations: RelationSet,
    pub quotient: QuotientReport,
    /// Order of the image of `z_{g, h}` for each pair of generators.
    pub generator_orders: Vec<((usize, usize), Option<BigInt>)>,
    /// `epsilon^2`, the per-cycle bound.
    pub per_cycle_bound: u64,
}

impl FiniteInstance {
    /// Every special cycle maps into the quotient, so its exponent bounds every image order.
    pub fn within_bound(&self) -> bool {
        let e = &self.quotient.exponent;
        e.to_u64().is_some_and(|e| e != 0 && self.per_cycle_bound % e == 0)
    }
}

pub fn finite_instance(t: u8, e1: &FpCurve, p0: &FpPoint, e2: &FpCurve, bound: u64) -> Result<FiniteInstance> {
    let aut = match t {
        1 => Automorphism::Neg,
        5 => Automorphism::Omega,
        _ => return Err(Error::input(format!("finite instances exist for Types 1 and 5 only, got {t}"))),
    };
    let p = e1.field().p();
    if e2.field().p() != p {
        return Err(Error::input("both curves must live over the same prime field"));
    }
    let spec: ActionSpec<PrimeField> =
        ActionSpec { e1: e1.clone(), p0: p0.clone(), e2: e2.clone(), automorphism: aut, base: BaseField::Finite(p) };
    let check = validate_action(&spec, t)?;
    if !check.is_ok() {
        let msgs: Vec<String> = check.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::precondition(msgs.join("; ")));
    }
    let g1 = e1.group_structure(bound)?;
    let g2 = e2.group_structure(bound)?;
    let a1 = MarkedGroup::from_group_structure(&g1)?.mark_curve_point(&g1, p0)?;
    let a2 = MarkedGroup::from_group_structure(&g2)?.with_curve_automorphism(e2, &g2, aut)?;
    let model = tensor_model(&a1, &a2)?;
    let relations = pushforward_relations(t, &model)?;
    let mut generator_orders = Vec::new();
    for i in 0..a1.rank() {
        for j in 0..a2.rank() {
            let z = model.tensor(&a1.generator(i), &a2.generator(j));
            generator_orders.push(((i, j), quotient_exponent(&model, &relations, &z)?.z_order));
        }
    }
    let zero = vec![BigInt::from(0); model.n_generators()];
    let quotient = quotient_exponent(&model, &relations, &zero)?;
    let eps = epsilon(t)?;
    Ok(FiniteInstance { surface_type: t, p, model, relations, quotient, generator_orders, per_cycle_bound: eps * eps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::CurvePoint;

    #[test]
    fn certificates() {
        let c = full_bound_certificate(1).unwrap();
        assert_eq!((c.cokernel_factor, c.replay_factor, c.total), (2, 4, 8));
        let c = full_bound_certificate(7).unwrap();
        assert_eq!((c.cover_degree, c.total), (3, 24));
        let c = full_bound_certificate(6).unwrap();
        assert_eq!((c.cover_degree, c.base_type, c.total), (3, 5, 81));
        for t in 1..=7 {
            let c = full_bound_certificate(t).unwrap();
            assert!(c.verified(), "type {t}: {c:?}");
            assert_eq!(c.total, c.exponent_bound);
        }
    }

    #[test]
    fn f5_type1() {
        let e = FpCurve::from_residues(5, 1, 0).unwrap();
        let f = e.field();
        let p0 = CurvePoint::affine(f.elem(0), f.elem(0));
        let inst = finite_instance(1, &e, &p0, &e, 1000).unwrap();
        assert_eq!(inst.model.group().to_string(), "Z/2 x Z/2 x Z/2 x Z/2");
        assert!(inst.within_bound());
        assert!(inst.generator_orders.iter().all(|(_, o)| o.as_ref().is_some_and(|o| BigInt::from(4) % o == BigInt::from(0))));
    }

    #[test]
    fn f7_type5() {
        let e = FpCurve::from_residues(7, 0, 1).unwrap();
        let pts = e.points(1000).unwrap();
        let p0 = pts.iter().find(|p| e.torsion_point_order(p, 64).unwrap() == Some(3)).unwrap().clone();
        let inst = finite_instance(5, &e, &p0, &e, 1000).unwrap();
        assert!(inst.within_bound(), "{:?}", inst.quotient);
    }

    #[test]
    fn invalid_instances_rejected() {
        let e = FpCurve::from_residues(11, 0, 1).unwrap();
        let pts = e.points(1000).unwrap();
        let p0 = pts.iter().find(|p| e.torsion_point_order(p, 64).unwrap() == Some(3)).unwrap().clone();
        // 11 = 2 mod 3: no cube roots of unity
        assert!(matches!(finite_instance(5, &e, &p0, &e, 1000), Err(Error::Precondition(_))));
    }
}
