//! Zero-cycle calculus on `X = E1 x E2`: tensor models of `T(X)`, the relations
//! imposed by pushing forward to `S = X / G`, and a checker for derivation scripts.

mod certificate;
mod formal;
mod replay;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::elliptic::{Automorphism, GroupStructure};
use crate::error::{Error, Result};
use crate::numeric::{quotient_group, FinAbGroup, Matrix, Quotient};
use crate::FpCurve;

pub use certificate::{finite_instance, full_bound_certificate, BoundCertificate, FiniteInstance};
pub use formal::{BilinearForm, CycleSymbol, FormalCycleExpr};
pub use replay::{
    builtin_script, composite_reduction, parse_script, replay_derivation, Axiom, DerivationScript, Step, Verdict,
    BUILTIN_SCRIPTS,
};

/// `Z^r + torsion` on named generators, each with an order (0 for a free generator),
/// optionally with a marked point and an automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedGroup {
    pub names: Vec<String>,
    pub moduli: Vec<BigInt>,
    pub marked_point: Option<Vec<BigInt>>,
    pub marked_order: Option<u64>,
    /// Column `j` is the image of generator `j`.
    pub automorphism: Option<Matrix<BigInt>>,
    pub automorphism_order: Option<u32>,
}

impl MarkedGroup {
    pub fn new(names: Vec<String>, moduli: Vec<BigInt>) -> Result<Self> {
        if names.len() != moduli.len() {
            return Err(Error::input("one order per generator is required"));
        }
        if moduli.iter().any(|d| d.is_negative()) {
            return Err(Error::input("generator orders must be 0 (free) or positive"));
        }
        Ok(MarkedGroup { names, moduli, marked_point: None, marked_order: None, automorphism: None, automorphism_order: None })
    }

    pub fn from_orders(names: &[&str], orders: &[u64]) -> Result<Self> {
        Self::new(names.iter().map(|s| s.to_string()).collect(), orders.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn carrier(&self) -> FinAbGroup {
        FinAbGroup::from_diagonal(&self.moduli)
    }

    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter()
            .zip(&self.moduli)
            .map(|(v, d)| if d.is_zero() { v.clone() } else { v.mod_floor(d) })
            .collect()
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(Zero::is_zero)
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: &BigInt, x: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&x.iter().map(|a| a * k).collect::<Vec<_>>())
    }

    pub fn neg(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.scale(&-BigInt::one(), x)
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.rank()]
    }

    pub fn generator(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.zero();
        v[i] = BigInt::one();
        v
    }

    /// `None` for elements of infinite order.
    pub fn element_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let mut order = BigInt::one();
        for (v, d) in self.reduce(x).iter().zip(&self.moduli) {
            if d.is_zero() {
                if !v.is_zero() {
                    return None;
                }
            } else {
                order = order.lcm(&(d / v.gcd(d)));
            }
        }
        Some(order)
    }

    pub fn with_marked_point(mut self, point: Vec<BigInt>, order: u64) -> Result<Self> {
        if point.len() != self.rank() {
            return Err(Error::input("marked point has the wrong number of coordinates"));
        }
        let found = self.element_order(&point);
        if found != Some(BigInt::from(order)) {
            return Err(Error::input(format!(
                "marked point has order {}, declared {order}",
                found.map_or("infinity".to_string(), |o| o.to_string())
            )));
        }
        self.marked_point = Some(self.reduce(&point));
        self.marked_order = Some(order);
        Ok(self)
    }

    pub fn apply_automorphism(&self, x: &[BigInt]) -> Vec<BigInt> {
        match &self.automorphism {
            Some(m) => self.reduce(&m.apply(x)),
            None => self.reduce(x),
        }
    }

    pub fn with_automorphism(mut self, m: Matrix<BigInt>, order: u32) -> Result<Self> {
        let n = self.rank();
        if m.rows() != n || m.cols() != n {
            return Err(Error::input("automorphism matrix has the wrong shape"));
        }
        // well defined: the image of d_j e_j must vanish
        for j in 0..n {
            let img: Vec<BigInt> = (0..n).map(|i| &m[(i, j)] * &self.moduli[j]).collect();
            if !self.is_zero(&img) {
                return Err(Error::input(format!("automorphism does not respect the order of {}", self.names[j])));
            }
        }
        self.automorphism = Some(m);
        for j in 0..n {
            let mut x = self.generator(j);
            for _ in 0..order {
                x = self.apply_automorphism(&x);
            }
            if x != self.generator(j) {
                return Err(Error::input(format!("automorphism does not have order dividing {order}")));
            }
        }
        self.automorphism_order = Some(order);
        Ok(self)
    }

    /// `a^2 + a + 1 = 0` on every generator.
    pub fn satisfies_omega_relation(&self) -> bool {
        self.automorphism.is_some()
            && (0..self.rank()).all(|j| {
                let g = self.generator(j);
                let a = self.apply_automorphism(&g);
                let a2 = self.apply_automorphism(&a);
                self.is_zero(&self.add(&self.add(&g, &a), &a2))
            })
    }

    pub fn is_negation(&self) -> bool {
        self.automorphism.is_some()
            && (0..self.rank()).all(|j| {
                let g = self.generator(j);
                self.apply_automorphism(&g) == self.neg(&g)
            })
    }

    /// `Z<P> + Z/n<P0>` with `P0` marked.
    pub fn universal_translation(n: u64) -> Self {
        Self::from_orders(&["P", "P0"], &[0, n])
            .and_then(|g| g.with_marked_point(vec![BigInt::zero(), BigInt::one()], n))
            .expect("valid universal model")
    }

    /// `Z<Q>` with `-1`, or `Z<Q> + Z<w(Q)>` with `w` of order 3.
    pub fn universal_automorphism(t: u8) -> Result<Self> {
        match t {
            1 => {
                let g = Self::from_orders(&["Q"], &[0])?;
                g.with_automorphism(Matrix::from_rows(vec![vec![BigInt::from(-1)]], 1), 2)
            }
            5 => {
                let g = Self::from_orders(&["Q", "w(Q)"], &[0, 0])?;
                let w = Matrix::from_rows(
                    vec![vec![0.into(), (-1).into()], vec![1.into(), (-1).into()]],
                    2,
                );
                g.with_automorphism(w, 3)
            }
            _ => Err(Error::input(format!("explicit actions exist for Types 1 and 5 only, got {t}"))),
        }
    }

    /// The group `E(F_p)` on the generators of `gs`.
    pub fn from_group_structure(gs: &GroupStructure) -> Result<Self> {
        let names = (0..gs.generators.len()).map(|i| format!("g{}", i + 1)).collect();
        Self::new(names, gs.orders.iter().map(|&d| BigInt::from(d)).collect())
    }

    /// Marks `point`, given as a curve point, after taking its coordinates in `gs`.
    pub fn mark_curve_point(self, gs: &GroupStructure, point: &crate::FpPoint) -> Result<Self> {
        let coords = gs.log(point).ok_or_else(|| Error::input("point is not on the curve"))?;
        let order = self
            .element_order(&coords)
            .and_then(|o| u64::try_from(o).ok())
            .ok_or_else(|| Error::input("marked point of infinite order"))?;
        self.with_marked_point(coords, order)
    }

    /// Installs a curve automorphism, expressed on the generators of `gs`.
    pub fn with_curve_automorphism(self, curve: &FpCurve, gs: &GroupStructure, aut: Automorphism) -> Result<Self> {
        let n = gs.generators.len();
        let mut m = Matrix::zeros(n, n);
        for (j, g) in gs.generators.iter().enumerate() {
            let img = curve.apply_automorphism(aut, g)?;
            let coords = gs.log(&img).ok_or_else(|| Error::input("automorphism left the curve"))?;
            for (i, c) in coords.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        self.with_automorphism(m, aut.order())
    }
}

/// `A1 (x) A2` on the generators `e_i (x) f_j`, with relations `d_i (e_i (x) f_j)` and `d_j (e_i (x) f_j)`.
#[derive(Debug, Clone)]
pub struct TensorModel {
    pub a1: MarkedGroup,
    pub a2: MarkedGroup,
    pub quotient: Quotient,
}

impl TensorModel {
    pub fn n_generators(&self) -> usize {
        self.a1.rank() * self.a2.rank()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.a2.rank() + j
    }

    pub fn generator_name(&self, k: usize) -> String {
        let (i, j) = (k / self.a2.rank(), k % self.a2.rank());
        format!("{}(x){}", self.a1.names[i], self.a2.names[j])
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quotient.group
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.quotient.relations
    }

    pub fn tensor(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n_generators()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[self.index(i, j)] += x * y;
            }
        }
        out
    }
}

pub fn tensor_model(a1: &MarkedGroup, a2: &MarkedGroup) -> Result<TensorModel> {
    let (n1, n2) = (a1.rank(), a2.rank());
    let mut relations = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            for d in [&a1.moduli[i], &a2.moduli[j]] {
                if !d.is_zero() {
                    let mut r = vec![BigInt::zero(); n1 * n2];
                    r[i * n2 + j] = d.clone();
                    relations.push(r);
                }
            }
        }
    }
    let quotient = quotient_group(n1 * n2, &relations)?;
    Ok(TensorModel { a1: a1.clone(), a2: a2.clone(), quotient })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub vector: Vec<BigInt>,
    pub provenance: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationSet {
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn vectors(&self) -> Vec<Vec<BigInt>> {
        self.relations.iter().map(|r| r.vector.clone()).collect()
    }
}

/// Checks that `a1` carries a translation and `a2` an automorphism of the shape Type `t` needs.
fn check_action(t: u8, a1: &MarkedGroup, a2: &MarkedGroup) -> Result<()> {
    let need = match t {
        1 => 2,
        5 => 3,
        _ => return Err(Error::input(format!("push-forward relations exist for Types 1 and 5 only, got {t}"))),
    };
    if a1.marked_order != Some(need) {
        return Err(Error::input(format!("Type {t} needs a marked point of order {need} on A1")));
    }
    let ok = if t == 1 { a2.is_negation() } else { a2.satisfies_omega_relation() };
    if !ok {
        let what = if t == 1 { "-1" } else { "w with w^2 + w + 1 = 0" };
        return Err(Error::input(format!("Type {t} needs A2 to carry {what}")));
    }
    Ok(())
}

/// For each generator pair `(P, Q)`, the element `z_{P,Q} - sigma_*(z_{P,Q})`, which dies
/// under the push-forward to `S` because `pi . sigma = pi`. With
/// `sigma_*(z_{P,Q}) = z_{P+P0, aQ} - z_{P0, aQ}` it expands to `P (x) (Q - aQ)`.
pub fn pushforward_relations(t: u8, model: &TensorModel) -> Result<RelationSet> {
    let (a1, a2) = (&model.a1, &model.a2);
    check_action(t, a1, a2)?;
    let p0 = a1.marked_point.as_ref().expect("checked");
    let mut relations = Vec::new();
    for i in 0..a1.rank() {
        for j in 0..a2.rank() {
            let p = a1.generator(i);
            let q = a2.generator(j);
            let aq = a2.apply_automorphism(&q);
            let shifted = a1.add(&p, p0);
            let mut v = model.tensor(&p, &q);
            let sub = model.tensor(&shifted, &aq);
            let add = model.tensor(p0, &aq);
            for k in 0..v.len() {
                v[k] = &v[k] - &sub[k] + &add[k];
            }
            relations.push(Relation {
                vector: v,
                provenance: format!("z({},{}) - sigma_*z({},{})", a1.names[i], a2.names[j], a1.names[i], a2.names[j]),
            });
        }
    }
    Ok(RelationSet { relations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientReport {
    pub group: FinAbGroup,
    /// 0 when the quotient is infinite.
    pub exponent: BigInt,
    /// `None` when `z` has infinite order in the quotient.
    pub z_order: Option<BigInt>,
}

pub fn quotient_exponent(model: &TensorModel, relations: &RelationSet, z: &[BigInt]) -> Result<QuotientReport> {
    let mut rows = model.relations().to_vec();
    rows.extend(relations.vectors());
    let q = quotient_group(model.n_generators(), &rows)?;
    if z.len() != model.n_generators() {
        return Err(Error::input("designated element has the wrong length"));
    }
    Ok(QuotientReport { exponent: q.group.exponent(), z_order: q.element_order(z), group: q.group })
}

/// The two universal models: `A1 = Z<P> + Z/n<P0>` against `Z<Q>` or `Z<Q> + Z<w(Q)>`.
pub fn universal_model(t: u8) -> Result<TensorModel> {
    let n = match t {
        1 => 2,
        5 => 3,
        _ => return Err(Error::input(format!("universal models exist for Types 1 and 5 only, got {t}"))),
    };
    tensor_model(&MarkedGroup::universal_translation(n), &MarkedGroup::universal_automorphism(t)?)
}
