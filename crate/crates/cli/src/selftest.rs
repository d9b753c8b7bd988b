//! Seeded randomized checks of the arithmetic the certificates rest on.

use std::time::{Duration, Instant};

use bielliptic_core::elliptic::PrimeField;
use bielliptic_core::numeric::{is_prime, rational, smith_normal_form, square_class, Matrix};
use bielliptic_core::{FpCurve, Integer};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_241_018;

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    /// First few counterexamples, if any.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn primes_up_to(n: u64, from: u64) -> Vec<u64> {
    (from..=n).filter(|&p| is_prime(p)).collect()
}

fn random_curve(rng: &mut ChaCha8Rng, primes: &[u64]) -> FpCurve {
    loop {
        let p = *primes.choose(rng).expect("nonempty");
        let f = PrimeField::new(p).expect("prime");
        let a = rng.gen_range(0..p) as i128;
        let b = rng.gen_range(0..p) as i128;
        if let Ok(e) = FpCurve::new(f, f.elem(a), f.elem(b)) {
            return e;
        }
    }
}

fn record(failures: &mut Vec<String>, msg: String) {
    if failures.len() < 5 {
        failures.push(msg);
    }
}

/// Group law associativity on `curves` random curves with `triples` random triples each,
/// plus the Hasse bound on every curve counted along the way.
pub fn group_law_suites(seed: u64, curves: usize, triples: usize) -> (SuiteResult, SuiteResult) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = primes_up_to(101, 5);
    let mut assoc = Vec::new();
    let mut hasse = Vec::new();
    let mut hasse_cases = 0;
    for _ in 0..curves {
        let e = random_curve(&mut rng, &primes);
        let p = e.field().p();
        let pts = e.points(p).expect("small prime");
        let n = e.count_points(p).expect("small prime");
        hasse_cases += 1;
        let t = n as i64 - p as i64 - 1;
        if (t * t) as u64 > 4 * p || n != pts.len() as u64 {
            record(&mut hasse, format!("{e}: #E = {n}, enumerated {}", pts.len()));
        }
        for _ in 0..triples {
            let (x, y, z) = (pts.choose(&mut rng).unwrap(), pts.choose(&mut rng).unwrap(), pts.choose(&mut rng).unwrap());
            let lhs = e.add(&e.add(x, y).unwrap(), z).unwrap();
            let rhs = e.add(x, &e.add(y, z).unwrap()).unwrap();
            if lhs != rhs {
                record(&mut assoc, format!("{e}: ({x} + {y}) + {z} != {x} + ({y} + {z})"));
            }
        }
    }
    let elapsed = start.elapsed();
    (
        SuiteResult { name: "associativity", cases: curves * triples, failures: assoc, elapsed },
        SuiteResult { name: "hasse", cases: hasse_cases, failures: hasse, elapsed },
    )
}

fn is_unimodular(m: &Matrix<Integer>) -> bool {
    let d = m.determinant();
    d == Integer::from(1) || d == Integer::from(-1)
}

pub fn smith_suite(seed: u64, cases: usize) -> SuiteResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut failures = Vec::new();
    for _ in 0..cases {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let rows: Vec<Vec<Integer>> =
            (0..r).map(|_| (0..c).map(|_| Integer::from(rng.gen_range(-9i64..=9))).collect()).collect();
        let m = Matrix::from_rows(rows.clone(), c);
        let s = smith_normal_form(&m);
        let d = &s.diagonal;
        let zero = Integer::from(0);
        let off_diagonal_zero = (0..r).all(|i| (0..c).all(|j| i == j || d[(i, j)] == zero));
        let inv = s.invariants();
        let chain = inv.iter().all(|x| *x >= zero)
            && inv.windows(2).all(|w| if w[0] == zero { w[1] == zero } else { &w[1] % &w[0] == zero });
        if s.left.mul(&m).mul(&s.right) != *d || !is_unimodular(&s.left) || !is_unimodular(&s.right) || !off_diagonal_zero || !chain {
            record(&mut failures, format!("{rows:?}"));
        }
    }
    SuiteResult { name: "smith-normal-form", cases, failures, elapsed: start.elapsed() }
}

pub fn square_class_suite(seed: u64, cases: usize) -> SuiteResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1a55);
    let primes = primes_up_to(101, 3);
    let mut failures = Vec::new();
    let nonzero = |rng: &mut ChaCha8Rng, p: u64| loop {
        let n = rng.gen_range(-1_000_000i64..=1_000_000);
        let d = rng.gen_range(1i64..=1_000_000);
        if n != 0 {
            let k = rng.gen_range(-3i32..=3);
            let pk = rational(p.pow(k.unsigned_abs()) as i64, 1);
            return if k >= 0 { rational(n, d) * pk } else { rational(n, d) / pk };
        }
    };
    for _ in 0..cases {
        let p = *primes.choose(&mut rng).unwrap();
        let x = nonzero(&mut rng, p);
        let y = nonzero(&mut rng, p);
        let lhs = square_class(&(&x * &y), p).unwrap();
        let rhs = square_class(&x, p).unwrap() * square_class(&y, p).unwrap();
        if lhs != rhs {
            record(&mut failures, format!("p = {p}, x = {x}, y = {y}"));
        }
    }
    SuiteResult { name: "square-class-multiplicativity", cases, failures, elapsed: start.elapsed() }
}

/// The standard battery: 20 curves x 100 triples, 200 matrices, 200 pairs.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let (assoc, hasse) = group_law_suites(seed, 20, 100);
    vec![assoc, hasse, smith_suite(seed, 200), square_class_suite(seed, 200)]
}
