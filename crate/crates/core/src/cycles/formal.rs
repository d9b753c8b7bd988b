use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{MarkedGroup, TensorModel};

/// `[a, b]` is the class of the point `(a, b)` of `X`; `z[a, b]` is the special cycle
/// `[a, b] - [a, O] - [O, b] + [O, O]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CycleSymbol {
    Point(Vec<BigInt>, Vec<BigInt>),
    Special(Vec<BigInt>, Vec<BigInt>),
}

/// An integer combination of cycle symbols, with coordinates already reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalCycleExpr {
    terms: BTreeMap<CycleSymbol, BigInt>,
}

/// Image of an expression under bilinearity: the tensor part, the classes
/// `[a, O] - [O, O]` and `[O, b] - [O, O]` (one free symbol per point), and the multiple of `[O, O]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    pub tensor: Vec<BigInt>,
    pub first: BTreeMap<Vec<BigInt>, BigInt>,
    pub second: BTreeMap<Vec<BigInt>, BigInt>,
    pub base: BigInt,
}

fn bump<K: Ord>(map: &mut BTreeMap<K, BigInt>, k: K, c: &BigInt) {
    let e = map.entry(k).or_insert_with(BigInt::zero);
    *e += c;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, BigInt>) {
    map.retain(|_, v| !v.is_zero());
}

impl FormalCycleExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(a1: &MarkedGroup, a2: &MarkedGroup, a: &[BigInt], b: &[BigInt]) -> Self {
        Self::single(CycleSymbol::Point(a1.reduce(a), a2.reduce(b)))
    }

    pub fn special(a1: &MarkedGroup, a2: &MarkedGroup, a: &[BigInt], b: &[BigInt]) -> Self {
        Self::single(CycleSymbol::Special(a1.reduce(a), a2.reduce(b)))
    }

    fn single(s: CycleSymbol) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(s, BigInt::one());
        FormalCycleExpr { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CycleSymbol, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            bump(&mut terms, k.clone(), v);
        }
        prune(&mut terms);
        FormalCycleExpr { terms }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut terms: BTreeMap<_, _> = self.terms.iter().map(|(s, v)| (s.clone(), v * k)).collect();
        prune(&mut terms);
        FormalCycleExpr { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigInt::one()))
    }

    /// Rewrites every special cycle as its four point classes.
    pub fn expand_special(&self, a1: &MarkedGroup, a2: &MarkedGroup) -> Self {
        let (o1, o2) = (a1.zero(), a2.zero());
        let mut out = FormalCycleExpr::zero();
        for (s, c) in &self.terms {
            let piece = match s {
                CycleSymbol::Point(..) => Self::single(s.clone()),
                CycleSymbol::Special(a, b) => Self::point(a1, a2, a, b)
                    .sub(&Self::point(a1, a2, a, &o2))
                    .sub(&Self::point(a1, a2, &o1, b))
                    .add(&Self::point(a1, a2, &o1, &o2)),
            };
            out = out.add(&piece.scale(c));
        }
        out
    }

    /// Push-forward along `sigma(a, b) = (a + P0, w b)`, applied to point classes.
    pub fn sigma_push(&self, a1: &MarkedGroup, a2: &MarkedGroup) -> Self {
        let p0 = a1.marked_point.clone().unwrap_or_else(|| a1.zero());
        let mut out = FormalCycleExpr::zero();
        for (s, c) in &self.expand_special(a1, a2).terms {
            if let CycleSymbol::Point(a, b) = s {
                out = out.add(&Self::point(a1, a2, &a1.add(a, &p0), &a2.apply_automorphism(b)).scale(c));
            }
        }
        out
    }

    pub fn normalize(&self, model: &TensorModel) -> BilinearForm {
        let (a1, a2) = (&model.a1, &model.a2);
        let mut form = BilinearForm {
            tensor: vec![BigInt::zero(); model.n_generators()],
            first: BTreeMap::new(),
            second: BTreeMap::new(),
            base: BigInt::zero(),
        };
        for (s, c) in &self.terms {
            let (a, b) = match s {
                CycleSymbol::Point(a, b) | CycleSymbol::Special(a, b) => (a, b),
            };
            for (t, v) in form.tensor.iter_mut().zip(model.tensor(a, b)) {
                *t += v * c;
            }
            if let CycleSymbol::Point(..) = s {
                if !a1.is_zero(a) {
                    bump(&mut form.first, a.clone(), c);
                }
                if !a2.is_zero(b) {
                    bump(&mut form.second, b.clone(), c);
                }
                form.base += c;
            }
        }
        // reduce tensor coordinates modulo the order of each generator
        for i in 0..a1.rank() {
            for j in 0..a2.rank() {
                let d = num_integer::Integer::gcd(&a1.moduli[i], &a2.moduli[j]);
                if !d.is_zero() {
                    let k = model.index(i, j);
                    form.tensor[k] = num_integer::Integer::mod_floor(&form.tensor[k], &d);
                }
            }
        }
        prune(&mut form.first);
        prune(&mut form.second);
        form
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::universal_model;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn special_cycle_is_pure_tensor() {
        let m = universal_model(1).unwrap();
        let z = FormalCycleExpr::special(&m.a1, &m.a2, &big(&[1, 1]), &big(&[-1]));
        let f = z.normalize(&m);
        assert_eq!(f.tensor, big(&[-1, 1]));
        assert!(f.first.is_empty() && f.second.is_empty() && f.base.is_zero());
        assert_eq!(z.expand_special(&m.a1, &m.a2).normalize(&m), f);
    }

    #[test]
    fn sigma_has_the_order_of_the_action() {
        for (t, n) in [(1u8, 2), (5, 3)] {
            let m = universal_model(t).unwrap();
            let z = FormalCycleExpr::special(&m.a1, &m.a2, &m.a1.generator(0), &m.a2.generator(0));
            let mut w = z.clone();
            for _ in 0..n {
                w = w.sigma_push(&m.a1, &m.a2);
            }
            assert_eq!(w, z.expand_special(&m.a1, &m.a2));
            assert_ne!(z.sigma_push(&m.a1, &m.a2), z.expand_special(&m.a1, &m.a2));
        }
    }

    fn arb_expr(t: u8) -> impl Strategy<Value = FormalCycleExpr> {
        let dims = if t == 1 { 1 } else { 2 };
        prop::collection::vec(
            (any::<bool>(), prop::collection::vec(-3i64..4, 2), prop::collection::vec(-3i64..4, dims), -4i64..5),
            0..6,
        )
        .prop_map(move |terms| {
            let m = universal_model(t).unwrap();
            terms.into_iter().fold(FormalCycleExpr::zero(), |acc, (special, a, b, c)| {
                let e = if special {
                    FormalCycleExpr::special(&m.a1, &m.a2, &big(&a), &big(&b))
                } else {
                    FormalCycleExpr::point(&m.a1, &m.a2, &big(&a), &big(&b))
                };
                acc.add(&e.scale(&BigInt::from(c)))
            })
        })
    }

    fn add_forms(x: &BilinearForm, y: &BilinearForm, m: &TensorModel) -> BilinearForm {
        let mut first = x.first.clone();
        for (k, v) in &y.first {
            bump(&mut first, k.clone(), v);
        }
        let mut second = x.second.clone();
        for (k, v) in &y.second {
            bump(&mut second, k.clone(), v);
        }
        prune(&mut first);
        prune(&mut second);
        let tensor: Vec<BigInt> = x.tensor.iter().zip(&y.tensor).map(|(a, b)| a + b).collect();
        let mut out = BilinearForm { tensor, first, second, base: &x.base + &y.base };
        for (k, t) in out.tensor.iter_mut().enumerate() {
            let i = k / m.a2.rank();
            let j = k % m.a2.rank();
            let d = num_integer::Integer::gcd(&m.a1.moduli[i], &m.a2.moduli[j]);
            if !d.is_zero() {
                *t = num_integer::Integer::mod_floor(t, &d);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn normalization_is_additive(e in arb_expr(5), f in arb_expr(5)) {
            let m = universal_model(5).unwrap();
            prop_assert_eq!(e.add(&f).normalize(&m), add_forms(&e.normalize(&m), &f.normalize(&m), &m));
        }

        #[test]
        fn expansion_is_idempotent(e in arb_expr(1)) {
            let m = universal_model(1).unwrap();
            let once = e.expand_special(&m.a1, &m.a2);
            prop_assert_eq!(once.expand_special(&m.a1, &m.a2), once.clone());
            prop_assert_eq!(once.normalize(&m), e.normalize(&m));
        }

        // bilinearity in the first slot: z[a + a', b] = z[a, b] + z[a', b]
        #[test]
        fn special_cycles_are_bilinear(a in prop::collection::vec(-3i64..4, 2), a2 in prop::collection::vec(-3i64..4, 2),
                                       b in prop::collection::vec(-3i64..4, 2)) {
            let m = universal_model(5).unwrap();
            let lhs = FormalCycleExpr::special(&m.a1, &m.a2, &m.a1.add(&big(&a), &big(&a2)), &big(&b));
            let rhs = FormalCycleExpr::special(&m.a1, &m.a2, &big(&a), &big(&b))
                .add(&FormalCycleExpr::special(&m.a1, &m.a2, &big(&a2), &big(&b)));
            prop_assert_eq!(lhs.normalize(&m), rhs.normalize(&m));
        }
    }
}
