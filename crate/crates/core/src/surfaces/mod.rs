//! The seven types of bielliptic surface, their covers, and the exponent bound.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::elliptic::{Automorphism, CurvePoint, EllipticCurve, Field};
use crate::error::{Error, Result};
use crate::numeric::FinAbGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiellipticType {
    pub type_number: u8,
    /// The acting group, written as in the classification.
    pub group_label: &'static str,
    pub group: FinAbGroup,
    pub ord_k: u64,
    pub lambda: u64,
    pub h2_torsion: FinAbGroup,
}

impl BiellipticType {
    pub fn group_order(&self) -> u64 {
        self.lambda * self.ord_k
    }
}

struct Row {
    group: &'static [u64],
    label: &'static str,
    ord_k: u64,
    h2: &'static [u64],
}

const TABLE: [Row; 7] = [
    Row { group: &[2], label: "Z/2", ord_k: 2, h2: &[2, 2] },
    Row { group: &[2, 2], label: "Z/2 x Z/2", ord_k: 2, h2: &[2] },
    Row { group: &[4], label: "Z/4", ord_k: 4, h2: &[2] },
    Row { group: &[4, 2], label: "Z/4 x Z/2", ord_k: 4, h2: &[] },
    Row { group: &[3], label: "Z/3", ord_k: 3, h2: &[3] },
    Row { group: &[3, 3], label: "Z/3 x Z/3", ord_k: 3, h2: &[] },
    Row { group: &[6], label: "Z/6", ord_k: 6, h2: &[] },
];

fn group_of(moduli: &[u64]) -> FinAbGroup {
    let m: Vec<BigInt> = moduli.iter().map(|&d| BigInt::from(d)).collect();
    FinAbGroup::from_diagonal(&m)
}

fn check_type(t: u8) -> Result<()> {
    if (1..=7).contains(&t) {
        Ok(())
    } else {
        Err(Error::input(format!("bielliptic type must be 1..7, got {t}")))
    }
}

pub fn table_row(t: u8) -> Result<BiellipticType> {
    check_type(t)?;
    let row = &TABLE[t as usize - 1];
    let order: u64 = row.group.iter().product();
    Ok(BiellipticType {
        type_number: t,
        group_label: row.label,
        group: group_of(row.group),
        ord_k: row.ord_k,
        lambda: order / row.ord_k,
        h2_torsion: group_of(row.h2),
    })
}

pub fn all_types() -> Vec<BiellipticType> {
    (1..=7).map(|t| table_row(t).expect("in range")).collect()
}

fn group_order(t: u8) -> Result<u64> {
    Ok(table_row(t)?.group_order())
}

pub fn epsilon(t: u8) -> Result<u64> {
    Ok(if group_order(t)? % 2 == 0 { 2 } else { 3 })
}

pub fn exponent_bound(t: u8) -> Result<u64> {
    let e = epsilon(t)?;
    Ok(e * e * group_order(t)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStep {
    pub source_type: u8,
    pub target_type: u8,
    pub degree: u64,
}

/// The finite étale cover used to reduce type `t` to a type of smaller group, if any.
pub fn intermediate_cover(t: u8) -> Result<Option<CoverStep>> {
    check_type(t)?;
    let target = match t {
        2 | 3 | 7 => 1,
        4 => 3,
        6 => 5,
        _ => return Ok(None),
    };
    Ok(Some(CoverStep { source_type: t, target_type: target, degree: group_order(t)? / group_order(target)? }))
}

/// Covers from `t` down to Type 1 or Type 5.
pub fn cover_chain(t: u8) -> Result<Vec<CoverStep>> {
    let mut chain = Vec::new();
    let mut cur = t;
    while let Some(step) = intermediate_cover(cur)? {
        chain.push(step);
        cur = step.target_type;
    }
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "lowercase")]
pub enum BaseField {
    Rationals,
    Padic(u64),
    Finite(u64),
}

impl BaseField {
    pub fn has_fourth_root_of_unity(self) -> bool {
        match self {
            BaseField::Rationals => false,
            BaseField::Padic(p) | BaseField::Finite(p) => p % 4 == 1,
        }
    }

    pub fn has_cube_root_of_unity(self) -> bool {
        match self {
            BaseField::Rationals => false,
            BaseField::Padic(p) | BaseField::Finite(p) => p % 3 == 1,
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => f.write_str("Q"),
            BaseField::Padic(p) => write!(f, "Q_{p}"),
            BaseField::Finite(p) => write!(f, "F_{p}"),
        }
    }
}

/// Data for `(E1 x E2) / G` with `G` acting by translation by `p0` on `E1` and by
/// `automorphism` on `E2`.
#[derive(Debug, Clone)]
pub struct ActionSpec<F: Field> {
    pub e1: EllipticCurve<F>,
    pub p0: CurvePoint<F::Elem>,
    pub e2: EllipticCurve<F>,
    pub automorphism: Automorphism,
    pub base: BaseField,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    UnsupportedType { t: u8 },
    WrongAutomorphism { expected: Automorphism, found: Automorphism },
    PointNotOnCurve,
    TrivialTranslation,
    WrongTranslationOrder { expected: u64, found: Option<u64> },
    WrongJInvariant { expected: i64 },
    NoFourthRootOfUnity { field: String },
    NoCubeRootOfUnity { field: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnsupportedType { t } => {
                write!(f, "no explicit action is modelled for Type {t}; use its cover instead")
            }
            Violation::WrongAutomorphism { expected, found } => {
                write!(f, "automorphism {} given, {} required", found.label(), expected.label())
            }
            Violation::PointNotOnCurve => f.write_str("P0 does not lie on E1"),
            Violation::TrivialTranslation => f.write_str("P0 is the identity"),
            Violation::WrongTranslationOrder { expected, found: Some(n) } => {
                write!(f, "P0 has order {n}, expected {expected}")
            }
            Violation::WrongTranslationOrder { expected, found: None } => {
                write!(f, "P0 has infinite or very large order, expected {expected}")
            }
            Violation::WrongJInvariant { expected } => write!(f, "E2 must have j = {expected}"),
            Violation::NoFourthRootOfUnity { field } => {
                write!(f, "no primitive fourth root of unity in {field}")
            }
            Violation::NoCubeRootOfUnity { field } => {
                write!(f, "no primitive cube root of unity in {field}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionCheck {
    pub violations: Vec<Violation>,
    pub facts: Vec<String>,
}

impl ActionCheck {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Translation order and automorphism demanded by the explicit actions.
fn action_shape(t: u8) -> Option<(u64, Automorphism)> {
    match t {
        1 => Some((2, Automorphism::Neg)),
        3 => Some((4, Automorphism::I)),
        5 => Some((3, Automorphism::Omega)),
        _ => None,
    }
}

pub fn validate_action<F: Field>(spec: &ActionSpec<F>, t: u8) -> Result<ActionCheck> {
    check_type(t)?;
    let mut violations = Vec::new();
    let mut facts = Vec::new();
    let Some((order, aut)) = action_shape(t) else {
        violations.push(Violation::UnsupportedType { t });
        return Ok(ActionCheck { violations, facts });
    };
    if spec.automorphism != aut {
        violations.push(Violation::WrongAutomorphism { expected: aut, found: spec.automorphism });
    }
    if !spec.e1.contains(&spec.p0) {
        violations.push(Violation::PointNotOnCurve);
    } else if spec.p0.is_identity() {
        violations.push(Violation::TrivialTranslation);
    } else {
        let found = spec.e1.torsion_point_order(&spec.p0, 64)?;
        if found != Some(order) {
            violations.push(Violation::WrongTranslationOrder { expected: order, found });
        } else {
            facts.push(format!(
                "translation by a point of order {order} has no fixed points, so the action on E1 x E2 is free"
            ));
        }
    }
    let field = spec.e2.field();
    let j = spec.e2.j_invariant();
    match aut {
        Automorphism::Neg => {}
        Automorphism::I => {
            if j != field.from_i64(1728) {
                violations.push(Violation::WrongJInvariant { expected: 1728 });
            }
            if !spec.base.has_fourth_root_of_unity() {
                violations.push(Violation::NoFourthRootOfUnity { field: spec.base.to_string() });
            }
        }
        Automorphism::Omega => {
            if !field.is_zero(&j) {
                violations.push(Violation::WrongJInvariant { expected: 0 });
            }
            if !spec.base.has_cube_root_of_unity() {
                violations.push(Violation::NoCubeRootOfUnity { field: spec.base.to_string() });
            }
        }
    }
    Ok(ActionCheck { violations, facts })
}
