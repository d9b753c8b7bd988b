//! The 2-torsion obstruction: `Hom(E1[2], E2[2])` with its Galois-invariant part, the
//! subgroup killing the translation point, and the class map to `Hom(mu_2, Z/2)`.

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::localdata::{
    full_two_torsion_field, geometric_nonisogeny_certificate, mu2_point, reduction_type, tate_valuation,
    LocalTwoTorsionPoint, NonIsogeny, ReductionClass, ReductionData, TateData, TwoTorsionField,
};
use crate::numeric::SquareClass;
use crate::RationalCurve;

/// A 2x2 matrix over F_2. Column `c` is the image of the `c`-th basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomMatrix(pub [[u8; 2]; 2]);

impl HomMatrix {
    pub const ZERO: HomMatrix = HomMatrix([[0, 0], [0, 0]]);
    pub const IDENTITY: HomMatrix = HomMatrix([[1, 0], [0, 1]]);
    /// Fixes `P1` and sends `P2` to `P1 + P2`.
    pub const SHEAR: HomMatrix = HomMatrix([[1, 1], [0, 1]]);

    /// All sixteen matrices, ordered by their bit pattern.
    pub fn all() -> Vec<HomMatrix> {
        (0u8..16)
            .map(|b| HomMatrix([[b >> 3 & 1, b >> 2 & 1], [b >> 1 & 1, b & 1]]))
            .collect()
    }

    /// Image of the basis vector `c`.
    pub fn column(self, c: usize) -> [u8; 2] {
        [self.0[0][c], self.0[1][c]]
    }

    pub fn is_invertible(self) -> bool {
        (self.0[0][0] & self.0[1][1]) ^ (self.0[0][1] & self.0[1][0]) == 1
    }

    pub fn is_upper_triangular(self) -> bool {
        self.0[1][0] == 0
    }
}

impl Add for HomMatrix {
    type Output = HomMatrix;

    fn add(self, o: HomMatrix) -> HomMatrix {
        let mut m = self.0;
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x ^= o.0[r][c];
            }
        }
        HomMatrix(m)
    }
}

impl Mul for HomMatrix {
    type Output = HomMatrix;

    fn mul(self, o: HomMatrix) -> HomMatrix {
        let a = self.0;
        let b = o.0;
        let mut m = [[0u8; 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = (a[r][0] & b[0][c]) ^ (a[r][1] & b[1][c]);
            }
        }
        HomMatrix(m)
    }
}

impl fmt::Display for HomMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        write!(f, "[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Matrices of a set of generators of the local Galois group acting on `E[2]`.
/// An empty list is the trivial action.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaloisAction {
    pub generators: Vec<HomMatrix>,
}

impl GaloisAction {
    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| *g == HomMatrix::IDENTITY)
    }
}

/// `Q_p` with square roots of the listed classes adjoined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkingField {
    pub p: u64,
    /// An F_2-basis of the adjoined square classes.
    pub adjoined: Vec<SquareClass>,
}

impl WorkingField {
    pub fn base(p: u64) -> Self {
        WorkingField { p, adjoined: Vec::new() }
    }

    /// Smallest field over which every listed class becomes a square.
    pub fn compositum(p: u64, classes: &[SquareClass]) -> Self {
        let mut adjoined: Vec<SquareClass> = Vec::new();
        for &c in classes {
            if !span(&adjoined).contains(&c) {
                adjoined.push(c);
            }
        }
        WorkingField { p, adjoined }
    }

    pub fn degree(&self) -> u32 {
        1 << self.adjoined.len()
    }

    pub fn splits(&self, c: SquareClass) -> bool {
        span(&self.adjoined).contains(&c)
    }
}

fn span(basis: &[SquareClass]) -> Vec<SquareClass> {
    let mut out = vec![SquareClass::One];
    for &b in basis {
        let more: Vec<SquareClass> = out.iter().map(|&x| x * b).collect();
        out.extend(more);
    }
    out
}

impl fmt::Display for WorkingField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}", self.p)?;
        if !self.adjoined.is_empty() {
            let roots: Vec<String> =
                self.adjoined.iter().map(|c| format!("sqrt({})", c.representative(self.p))).collect();
            write!(f, "({})", roots.join(", "))?;
        }
        Ok(())
    }
}

/// The second basis point: rational over `Q_p`, or one of two conjugates over `Q_p(sqrt d)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SecondPoint {
    Local(LocalTwoTorsionPoint),
    Conjugate { class: SquareClass, node_residue: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoTorsionBasis {
    /// The point in `mu_2`.
    pub p1: LocalTwoTorsionPoint,
    pub p2: SecondPoint,
    /// Class adjoined to make `p2` rational, if any.
    pub base_change: Option<SquareClass>,
    /// Action of `Gal(Q_p-bar / Q_p)` in the basis `(p1, p2)`.
    pub action: GaloisAction,
}

fn require_split(e: &RationalCurve, p: u64, name: &str) -> Result<ReductionData> {
    let red = reduction_type(e, p)?;
    match red.class {
        ReductionClass::SplitMultiplicative => Ok(red),
        ReductionClass::Good => Err(Error::precondition(format!(
            "{name} has good reduction at {p}; with good reduction T(X) is 2-divisible, so no 2-torsion witness can exist"
        ))),
        other => Err(Error::precondition(format!("{name} has {other} reduction at {p}, split multiplicative is required"))),
    }
}

fn curve_name(e: &RationalCurve, fallback: &str) -> String {
    e.label().map_or_else(|| fallback.to_string(), str::to_string)
}

/// `P1` is the `mu_2` point; `P2` is the other 2-torsion point of least p-adic residue
/// when it is rational, and otherwise a conjugate over the working field.
pub fn two_torsion_basis(e: &RationalCurve, p: u64, working: &WorkingField) -> Result<TwoTorsionBasis> {
    require_split(e, p, &curve_name(e, "E"))?;
    let field = full_two_torsion_field(e, p)?;
    let p1 = mu2_point(e, p)?;
    let others: Vec<&LocalTwoTorsionPoint> = field.points.iter().filter(|pt| pt.reduces_to_node).collect();
    if let Some(c) = field.extension_class() {
        if !working.splits(c) {
            return Err(Error::precondition(format!("E[2] is not rational over {working}")));
        }
        return Ok(TwoTorsionBasis {
            p1,
            p2: SecondPoint::Conjugate { class: c, node_residue: field.node_residue.unwrap_or(0) },
            base_change: Some(c),
            action: GaloisAction { generators: vec![HomMatrix::SHEAR] },
        });
    }
    let p2 = others
        .into_iter()
        .min_by(|a, b| a.x.approx.cmp(&b.x.approx))
        .cloned()
        .ok_or_else(|| Error::precondition("no second 2-torsion point"))?;
    Ok(TwoTorsionBasis { p1, p2: SecondPoint::Local(p2), base_change: None, action: GaloisAction::default() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomModule {
    pub all: Vec<HomMatrix>,
    pub equivariant: Vec<HomMatrix>,
}

/// Galois-equivariant maps `E1[2] -> E2[2]`: `g A1 = A2 g` for paired generators.
pub fn hom_module(a1: &GaloisAction, a2: &GaloisAction) -> HomModule {
    let n = a1.generators.len().max(a2.generators.len());
    let get = |a: &GaloisAction, i: usize| a.generators.get(i).copied().unwrap_or(HomMatrix::IDENTITY);
    let all = HomMatrix::all();
    let equivariant = all
        .iter()
        .copied()
        .filter(|g| (0..n).all(|i| *g * get(a1, i) == get(a2, i) * *g))
        .collect();
    HomModule { all, equivariant }
}

/// Actions of a generating set of `Gal(K/Q_p)`, `K` the compositum of both splitting
/// fields: one generator per nonzero character of the span of the two classes.
pub fn base_field_actions(c1: Option<SquareClass>, c2: Option<SquareClass>, p: u64) -> (GaloisAction, GaloisAction) {
    let classes: Vec<SquareClass> = [c1, c2].into_iter().flatten().collect();
    let field = WorkingField::compositum(p, &classes);
    let k = field.adjoined.len();
    let mut g1 = Vec::new();
    let mut g2 = Vec::new();
    // a character is fixed by its values on the basis; it moves sqrt(c) iff it is -1 on c
    for mask in 1u32..(1 << k) {
        let moves = |c: Option<SquareClass>| -> bool {
            let Some(c) = c else { return false };
            // write c in the basis and pair with the mask
            (0u32..(1 << k))
                .find(|&sel| {
                    field
                        .adjoined
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| sel >> i & 1 == 1)
                        .fold(SquareClass::One, |acc, (_, &b)| acc * b)
                        == c
                })
                .is_some_and(|sel| (sel & mask).count_ones() % 2 == 1)
        };
        g1.push(if moves(c1) { HomMatrix::SHEAR } else { HomMatrix::IDENTITY });
        g2.push(if moves(c2) { HomMatrix::SHEAR } else { HomMatrix::IDENTITY });
    }
    (GaloisAction { generators: g1 }, GaloisAction { generators: g2 })
}

/// Maps killing the translation point `P2`.
pub fn h2_subgroup(homs: &[HomMatrix]) -> Vec<HomMatrix> {
    homs.iter().copied().filter(|g| g.column(1) == [0, 0]).collect()
}

/// `mu_2 -> E1[2] -> E2[2] -> E2[2] / mu_2`: the `P2'` coordinate of `g(P1)`.
pub fn class_in_q(g: HomMatrix) -> u8 {
    g.column(0)[1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessCounts {
    pub hom: usize,
    pub hom_gal: usize,
    pub h2: usize,
    pub witnesses: usize,
}

fn count_witnesses(module: &HomModule) -> (WitnessCounts, Vec<HomMatrix>) {
    let h2 = h2_subgroup(&module.equivariant);
    let witnesses: Vec<HomMatrix> = h2.iter().copied().filter(|g| class_in_q(*g) == 1).collect();
    (
        WitnessCounts { hom: module.all.len(), hom_gal: module.equivariant.len(), h2: h2.len(), witnesses: witnesses.len() },
        witnesses,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    /// A witness exists and the curves are certified non-isogenous.
    Established,
    /// A witness exists but non-isogeny could not be certified.
    Conditional,
    NoWitness,
}

#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub labels: [String; 2],
    pub p: u64,
    pub reduction: [ReductionData; 2],
    pub tate: [TateData; 2],
    pub nonisogeny: NonIsogeny,
    pub two_torsion: [TwoTorsionField; 2],
    pub working_field: WorkingField,
    pub bases: [TwoTorsionBasis; 2],
    pub witness: Option<HomMatrix>,
    /// Counts over the working field, where both actions are trivial.
    pub counts: WitnessCounts,
    /// Counts with the Galois action of `Q_p` itself.
    pub base_field_counts: WitnessCounts,
    pub conclusion: Conclusion,
}

impl ObstructionReport {
    pub fn conclusion_holds(&self) -> bool {
        self.conclusion == Conclusion::Established
    }
}

pub fn obstruction_witness(e1: &RationalCurve, e2: &RationalCurve, p: u64) -> Result<ObstructionReport> {
    let labels = [curve_name(e1, "E1"), curve_name(e2, "E2")];
    let reduction = [require_split(e1, p, &labels[0])?, require_split(e2, p, &labels[1])?];
    let tate = [tate_valuation(e1, p)?, tate_valuation(e2, p)?];
    let nonisogeny = geometric_nonisogeny_certificate(e1, e2);
    let two_torsion = [full_two_torsion_field(e1, p)?, full_two_torsion_field(e2, p)?];
    let classes = [two_torsion[0].extension_class(), two_torsion[1].extension_class()];
    let working_field = WorkingField::compositum(p, &classes.iter().flatten().copied().collect::<Vec<_>>());
    let bases = [two_torsion_basis(e1, p, &working_field)?, two_torsion_basis(e2, p, &working_field)?];

    // over the working field every point of E_i[2] is rational
    let (counts, witnesses) = count_witnesses(&hom_module(&GaloisAction::default(), &GaloisAction::default()));
    let (b1, b2) = base_field_actions(classes[0], classes[1], p);
    let (base_field_counts, _) = count_witnesses(&hom_module(&b1, &b2));

    let witness = witnesses.first().copied();
    let conclusion = match (&witness, &nonisogeny) {
        (None, _) => Conclusion::NoWitness,
        (Some(_), NonIsogeny::Certificate { .. }) => Conclusion::Established,
        (Some(_), NonIsogeny::Inconclusive) => Conclusion::Conditional,
    };
    Ok(ObstructionReport {
        labels,
        p,
        reduction,
        tate,
        nonisogeny,
        two_torsion,
        working_field,
        bases,
        witness,
        counts,
        base_field_counts,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integer;
    use crate::RationalPoint;

    fn e33() -> RationalCurve {
        RationalCurve::from_integers(-14931, 220590).unwrap().with_label("33.a2")
    }

    fn e198() -> RationalCurve {
        RationalCurve::from_integers(-3171, 68510).unwrap().with_label("198.a2")
    }

    #[test]
    fn catalog_pair() {
        let r = obstruction_witness(&e33(), &e198(), 11).unwrap();
        assert_eq!(r.counts, WitnessCounts { hom: 16, hom_gal: 16, h2: 4, witnesses: 2 });
        assert_eq!(r.base_field_counts, r.counts);
        assert!(r.conclusion_holds());
        assert_eq!(r.working_field.to_string(), "Q_11");
        let w = r.witness.unwrap();
        assert_eq!(class_in_q(w), 1);
        assert_eq!(w.column(1), [0, 0]);
    }

    #[test]
    fn bases_of_catalog_curves() {
        let wf = WorkingField::base(11);
        let b = two_torsion_basis(&e33(), 11, &wf).unwrap();
        assert_eq!(b.p1.rational, Some(RationalPoint::affine(integer(-129), integer(0))));
        match b.p2 {
            SecondPoint::Local(pt) => assert_eq!(pt.rational, Some(RationalPoint::affine(integer(15), integer(0)))),
            other => panic!("{other:?}"),
        }
        let b = two_torsion_basis(&e198(), 11, &wf).unwrap();
        assert_eq!(b.p1.rational, Some(RationalPoint::affine(integer(31), integer(0))));
        // 34 < 11^20 - 65 as 11-adic residues
        match b.p2 {
            SecondPoint::Local(pt) => assert_eq!(pt.rational, Some(RationalPoint::affine(integer(34), integer(0)))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn same_curve_is_conditional() {
        let r = obstruction_witness(&e33(), &e33(), 11).unwrap();
        assert_eq!(r.conclusion, Conclusion::Conditional);
        assert!(r.witness.is_some());
    }

    #[test]
    fn good_reduction_cites_divisibility() {
        let good = RationalCurve::from_integers(0, 1).unwrap();
        match obstruction_witness(&good, &e198(), 11) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("T(X) is 2-divisible"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(two_torsion_basis(&good, 11, &WorkingField::base(11)).is_err());
    }

    #[test]
    fn hom_enumeration() {
        let all = HomMatrix::all();
        assert_eq!(all.len(), 16);
        let h2 = h2_subgroup(&all);
        assert_eq!(h2.len(), 4);
        assert!(h2.contains(&HomMatrix::ZERO));
        for a in &h2 {
            for b in &h2 {
                assert!(h2.contains(&(*a + *b)));
            }
        }
        let images: std::collections::BTreeSet<u8> = h2.iter().map(|g| class_in_q(*g)).collect();
        assert_eq!(h2.len() * images.len(), 8);
        for a in &all {
            for b in &all {
                assert_eq!(class_in_q(*a + *b), class_in_q(*a) ^ class_in_q(*b));
            }
        }
        assert_eq!(class_in_q(HomMatrix::ZERO), 0);
        assert_eq!(class_in_q(HomMatrix([[0, 0], [1, 0]])), 1);
        assert_eq!(class_in_q(HomMatrix([[1, 0], [0, 0]])), 0);
    }

    #[test]
    fn nontrivial_actions_force_triangular_maps() {
        for (c1, c2) in [
            (Some(SquareClass::U), Some(SquareClass::U)),
            (Some(SquareClass::U), Some(SquareClass::P)),
            (Some(SquareClass::P), None),
            (None, Some(SquareClass::UP)),
        ] {
            let (a1, a2) = base_field_actions(c1, c2, 11);
            assert!(!a1.is_trivial() || !a2.is_trivial());
            let m = hom_module(&a1, &a2);
            assert!(m.equivariant.len().is_power_of_two());
            assert!(m.equivariant.iter().all(|g| g.is_upper_triangular()));
            for a in &m.equivariant {
                for b in &m.equivariant {
                    assert!(m.equivariant.contains(&(*a + *b)));
                }
            }
        }
        let (a, b) = base_field_actions(None, None, 11);
        assert_eq!(hom_module(&a, &b).equivariant.len(), 16);
    }

    #[test]
    fn working_field_names() {
        let w = WorkingField::compositum(11, &[SquareClass::U, SquareClass::U, SquareClass::P]);
        assert_eq!(w.degree(), 4);
        assert!(w.splits(SquareClass::UP));
        assert_eq!(w.to_string(), "Q_11(sqrt(2), sqrt(11))");
    }
}
