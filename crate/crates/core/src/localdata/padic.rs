//! Root finding for polynomials over F_p and Z_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::numeric::{padic_valuation, primes_pow_mod, residue_mod, Valuation};

type PolyFp = Vec<u64>;

fn trim(mut f: PolyFp) -> PolyFp {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv(a: u64, p: u64) -> u64 {
    primes_pow_mod(a, p - 2, p)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> PolyFp {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let lead_inv = inv(*m.last().expect("nonzero modulus"), p);
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(c, mi, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> PolyFp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> PolyFp {
    let mut acc = poly_rem(&[1], m, p);
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv(lead, p);
        a.iter_mut().for_each(|c| *c = mulmod(*c, li, p));
    }
    a
}

fn split_roots(g: &[u64], p: u64, out: &mut Vec<u64>) {
    let g = trim(g.to_vec());
    match g.len() {
        0 | 1 => {}
        2 => out.push(mulmod(p - g[0], inv(g[1], p), p)),
        deg_plus_one => {
            for a in 0..p {
                let h = poly_powmod(&[a, 1], (p - 1) / 2, &g, p);
                let d = poly_gcd(&g, &poly_sub(&h, &[1], p), p);
                if d.len() > 1 && d.len() < deg_plus_one {
                    let (q, _) = poly_divmod(&g, &d, p);
                    split_roots(&d, p, out);
                    split_roots(&q, p, out);
                    return;
                }
            }
        }
    }
}

fn poly_divmod(a: &[u64], m: &[u64], p: u64) -> (PolyFp, PolyFp) {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    if r.len() < m.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - m.len() + 1];
    let lead_inv = inv(*m.last().unwrap(), p);
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(c, mi, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

/// Distinct roots in F_p (p odd) of a polynomial with coefficients listed from degree 0 up.
pub(crate) fn roots_mod_p(f: &[u64], p: u64) -> Vec<u64> {
    let f = trim(f.iter().map(|c| c % p).collect());
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    if f[0] == 0 {
        roots.push(0);
    }
    // gcd with x^(p-1) - 1 keeps the nonzero roots, each once
    let xp = poly_powmod(&[0, 1], p - 1, &f, p);
    let g = poly_gcd(&f, &poly_sub(&xp, &[1], p), p);
    split_roots(&g, p, &mut roots);
    roots.sort_unstable();
    roots.dedup();
    roots
}

pub(crate) fn derivative_mod_p(f: &[u64], p: u64) -> PolyFp {
    trim(f.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect())
}

pub(crate) fn eval_mod_p(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, p) + c) % p)
}

/// A root in Z_p known modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicRoot {
    pub approx: BigInt,
    pub precision: u32,
}

impl PadicRoot {
    pub fn residue(&self, p: u64) -> u64 {
        self.approx.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
    }
}

fn residue_big(x: &BigRational, modulus: &BigInt) -> BigInt {
    let d_inv = x
        .denom()
        .extended_gcd(modulus)
        .x
        .mod_floor(modulus);
    (x.numer() * d_inv).mod_floor(modulus)
}

fn eval_big(f: &[BigRational], x: &BigInt, modulus: &BigInt) -> BigInt {
    f.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + residue_big(c, modulus)).mod_floor(modulus))
}

fn derivative(f: &[BigRational]) -> Vec<BigRational> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// `f(r + p t)` as a polynomial in `t`.
fn shift_scale(f: &[BigRational], r: u64, p: u64) -> Vec<BigRational> {
    let n = f.len();
    let r = BigRational::from_integer(BigInt::from(r));
    let p = BigRational::from_integer(BigInt::from(p));
    // Horner in the ring Q[t]: acc = acc * (r + p t) + c
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    for c in f.iter().rev() {
        let mut next = vec![BigRational::zero(); n];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            next[i] += a * &r;
            if i + 1 < n {
                next[i + 1] += a * &p;
            }
        }
        next[0] += c;
        acc = next;
    }
    acc
}

/// Scales `f` so that its coefficients are p-integral with minimum valuation 0.
fn normalize(f: &[BigRational], p: u64) -> Vec<BigRational> {
    let pb = BigInt::from(p);
    let vmin = f
        .iter()
        .map(|c| padic_valuation(c, &pb))
        .min()
        .unwrap_or(Valuation::Infinite);
    match vmin {
        Valuation::Infinite => f.to_vec(),
        Valuation::Finite(v) => {
            let scale = BigRational::from_integer(num_traits::pow(pb, v.unsigned_abs() as usize));
            f.iter().map(|c| if v >= 0 { c / &scale } else { c * &scale }).collect()
        }
    }
}

fn lift_simple_root(f: &[BigRational], r: u64, p: u64, precision: u32) -> BigInt {
    let modulus = num_traits::pow(BigInt::from(p), precision as usize);
    let df = derivative(f);
    let mut x = BigInt::from(r);
    let mut known = 1u32;
    while known < precision {
        let fx = eval_big(f, &x, &modulus);
        let dfx = eval_big(&df, &x, &modulus);
        let dinv = dfx.extended_gcd(&modulus).x;
        x = (&x - fx * dinv).mod_floor(&modulus);
        known *= 2;
    }
    x
}

/// Roots in Z_p of a squarefree polynomial with p-integral coefficients (p odd), each
/// given modulo `p^precision`. Repeated residues are resolved by substituting
/// `x = r + p t` and recursing.
pub fn padic_roots(f: &[BigRational], p: u64, precision: u32) -> Vec<PadicRoot> {
    let mut out = Vec::new();
    roots_rec(f, p, precision.max(1), 0, &mut out);
    out.sort_by(|a, b| a.approx.cmp(&b.approx));
    out
}

fn roots_rec(f: &[BigRational], p: u64, precision: u32, depth: u32, out: &mut Vec<PadicRoot>) {
    // A squarefree input separates its roots after v(disc) steps; the cap guards misuse.
    if depth > 256 {
        return;
    }
    let f = normalize(f, p);
    let fbar: Vec<u64> = f
        .iter()
        .map(|c| residue_mod(c, p).expect("normalized coefficients are p-integral"))
        .collect();
    let dbar = derivative_mod_p(&fbar, p);
    let pb = BigInt::from(p);
    for r in roots_mod_p(&fbar, p) {
        if eval_mod_p(&dbar, r, p) != 0 {
            out.push(PadicRoot { approx: lift_simple_root(&f, r, p, precision), precision });
        } else if precision <= 1 {
            // Cannot resolve further at this precision; report nothing rather than guess.
            continue;
        } else {
            let g = shift_scale(&f, r, p);
            let mut sub = Vec::new();
            roots_rec(&g, p, precision - 1, depth + 1, &mut sub);
            let modulus = num_traits::pow(pb.clone(), precision as usize);
            for t in sub {
                let approx = (BigInt::from(r) + &pb * t.approx).mod_floor(&modulus);
                out.push(PadicRoot { approx, precision });
            }
        }
    }
}
