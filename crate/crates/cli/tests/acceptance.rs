//! Acceptance run: one PASS/FAIL line per criterion, each under its time budget.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bielliptic_cli::{run_command, selftest, point_of_order, Verdict};
use bielliptic_core::cycles::{builtin_script, finite_instance, full_bound_certificate, replay_derivation, FiniteInstance};
use bielliptic_core::elliptic::PrimeField;
use bielliptic_core::numeric::is_prime;
use bielliptic_core::surfaces::intermediate_cover;
use bielliptic_core::{FpCurve, Integer};
use serde_json::Value;

type Check = Result<String, String>;

fn run(args: &str) -> (i32, Value) {
    let argv: Vec<&str> = args.split_whitespace().collect();
    let (code, report) = run_command(&argv);
    (code, report.to_value())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Check {
    for label in ["33.a2", "198.a2"] {
        let (code, v) = run(&format!("curve reduction {label} -p 11 --json"));
        ensure(code == 0, || format!("{label}: exit {code}"))?;
        let summary = v["result"]["summary"].as_str().unwrap_or_default();
        ensure(summary == "split multiplicative reduction at p=11", || format!("{label}: {summary:?}"))?;
    }
    Ok("both curves: split multiplicative reduction at p=11".into())
}

fn criterion_2() -> Check {
    let (_, a) = run("curve reduction 33.a2 -p 2 --json");
    let (_, b) = run("curve reduction 198.a2 -p 2 --json");
    let (va, vb) = (a["result"]["v_j"].as_i64(), b["result"]["v_j"].as_i64());
    ensure(va == Some(0) && vb == Some(-2), || format!("v_2(j) = {va:?}, {vb:?}"))?;
    let (_, w) = run("brauer witness --e1 33.a2 --e2 198.a2 -p 11 --json");
    let cert = &w["result"]["nonisogeny"];
    ensure(cert["certified"] == true && cert["p"] == 2, || format!("certificate {cert}"))?;
    ensure(cert["v_j"] == serde_json::json!([0, -2]), || format!("certificate {cert}"))?;
    Ok("v_2(j) = 0 for 33.a2, -2 for 198.a2; certificate at p = 2".into())
}

fn criterion_3() -> Check {
    for (t, bound) in [(1, 4u64), (5, 9)] {
        let (code, v) = run(&format!("cycles verify --type {t} --universal --json"));
        let order: u64 = v["result"]["z_order"].as_str().and_then(|s| s.parse().ok()).unwrap_or(0);
        ensure(code == 0 && order != 0 && bound % order == 0, || format!("type {t}: order {order}, exit {code}"))?;
    }
    let expected = [8, 16, 16, 32, 27, 81, 24];
    for (t, want) in (1..=7).zip(expected) {
        let c = full_bound_certificate(t).map_err(|e| e.to_string())?;
        ensure(c.verified() && c.exponent_bound == want && c.total == want, || {
            format!("type {t}: bound {}, certified {}", c.exponent_bound, c.total)
        })?;
    }
    Ok("universal orders divide 4 and 9; bounds 8, 16, 16, 32, 27, 81, 24".into())
}

fn criterion_4() -> Check {
    let mut mutants = 0;
    for name in ["type1_main", "type5_main"] {
        let s = builtin_script(name).ok_or("missing script")?;
        ensure(replay_derivation(&s).map_err(|e| e.to_string())?.passed(), || format!("{name} fails"))?;
        for i in 0..s.steps.len() {
            let v = replay_derivation(&s.without_step(i)).map_err(|e| e.to_string())?;
            ensure(!v.passed(), || format!("{name} still passes without step {}", i + 1))?;
            mutants += 1;
        }
    }
    Ok(format!("both scripts pass; all {mutants} single-step deletions fail"))
}

/// Order of the quotient of `prod Z/m_k` by the span of `rels`, and its exponent, by
/// closing the span under addition and testing multiples of the basis cosets.
fn brute_force_quotient(moduli: &[u64], rels: &[Vec<u64>]) -> (u64, u64) {
    let add = |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x + y) % m).collect() };
    let zero = vec![0u64; moduli.len()];
    let mut span: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for r in rels {
            let y = add(&x, r);
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let total: u64 = moduli.iter().product();
    let mut exponent = 1u64;
    for k in 0..moduli.len() {
        let mut e = vec![0u64; moduli.len()];
        e[k] = 1 % moduli[k];
        let mut acc = e.clone();
        let mut n = 1u64;
        while !span.contains(&acc) {
            acc = add(&acc, &e);
            n += 1;
        }
        exponent = lcm(exponent, n);
    }
    (total / span.len() as u64, exponent)
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn residue(x: &Integer, m: u64) -> u64 {
    let m = Integer::from(m);
    to_u64(&(((x % &m) + &m) % &m))
}

fn to_u64(x: &Integer) -> u64 {
    u64::try_from(x).expect("small")
}

/// Cross-checks one instance; returns whether the brute-force oracle ran.
fn check_instance(fi: &FiniteInstance, bound: u64) -> Result<bool, String> {
    let e = to_u64(&fi.quotient.exponent);
    ensure(e != 0 && bound % e == 0, || format!("p = {}: exponent {e} does not divide {bound}", fi.p))?;
    let order = fi.model.group().order().map(|o| to_u64(&o)).unwrap_or(u64::MAX);
    if order > 256 {
        return Ok(false);
    }
    let (a1, a2) = (&fi.model.a1, &fi.model.a2);
    let mut moduli = Vec::new();
    for d1 in &a1.moduli {
        for d2 in &a2.moduli {
            moduli.push(gcd(to_u64(d1), to_u64(d2)));
        }
    }
    let rels: Vec<Vec<u64>> = fi
        .relations
        .vectors()
        .iter()
        .map(|r| r.iter().zip(&moduli).map(|(x, m)| residue(x, *m)).collect())
        .collect();
    let (q_order, q_exp) = brute_force_quotient(&moduli, &rels);
    let sn_order = fi.quotient.group.order().map(|o| to_u64(&o));
    ensure(sn_order == Some(q_order) && q_exp == e, || {
        format!("p = {}: Smith gives {:?} / {e}, enumeration {q_order} / {q_exp}", fi.p, sn_order)
    })?;
    Ok(true)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn curve(p: u64, a: i128, b: i128) -> Option<FpCurve> {
    let f = PrimeField::new(p).ok()?;
    FpCurve::new(f, f.elem(a), f.elem(b)).ok()
}

/// Pairs with a nontrivial tensor group, at most one per prime.
fn finite_pairs(t: u8, n: u64, want: usize) -> Result<(usize, usize), String> {
    let eps2 = n * n;
    let (mut found, mut oracle) = (0, 0);
    for p in (5..=101u64).filter(|&p| is_prime(p)) {
        if t == 5 && p % 3 != 1 {
            continue;
        }
        'search: for a in 0..p as i128 {
            for b in 1..p as i128 {
                let Some(e1) = curve(p, if t == 5 { (a + 1) % p as i128 } else { a }, b) else { continue };
                let Some(p0) = point_of_order(&e1, n, p).map_err(|e| e.to_string())? else { continue };
                // Type 5 needs j = 0 on the second curve
                let e2 = if t == 5 { curve(p, 0, b) } else { curve(p, (a + 2) % p as i128, b) };
                let Some(e2) = e2 else { continue };
                let fi = finite_instance(t, &e1, &p0, &e2, p).map_err(|e| e.to_string())?;
                if fi.model.group().is_trivial() {
                    continue;
                }
                if check_instance(&fi, eps2)? {
                    oracle += 1;
                }
                found += 1;
                break 'search;
            }
        }
        if found >= want {
            break;
        }
    }
    ensure(found >= want, || format!("type {t}: only {found} pairs"))?;
    Ok((found, oracle))
}

fn criterion_5() -> Check {
    let (f1, o1) = finite_pairs(1, 2, 6)?;
    let (f5, o5) = finite_pairs(5, 3, 4)?;
    Ok(format!("{f1} Type 1 pairs ({o1} enumerated), {f5} Type 5 pairs ({o5} enumerated); exponents divide 4 and 9"))
}

fn criterion_6() -> Check {
    let (code, v) = run("brauer witness --e1 33.a2 --e2 198.a2 -p 11 --json");
    let r = &v["result"];
    let counts = &r["counts"];
    ensure(code == 0 && r["conclusion"] == true, || format!("exit {code}, {r}"))?;
    ensure(counts["hom"] == 16 && counts["h2"] == 4 && counts["witnesses"] == 2, || format!("counts {counts}"))?;
    let field = r["working_field"].as_str().unwrap_or_default().to_string();
    ensure(!field.is_empty(), || "no working field".into())?;
    let (code, v) = run("brauer witness --e1 0,1 --e2 198.a2 -p 11 --json");
    let msg = v["result"]["message"].as_str().unwrap_or_default();
    ensure(code == 2 && v["verdict"] == Verdict::Error.tag() && msg.contains("T(X) is 2-divisible"), || {
        format!("control: exit {code}, {msg}")
    })?;
    Ok(format!("conclusion true over {field}, counts 16/4/2; good-reduction control rejected"))
}

fn criterion_7() -> Check {
    let mut got = Vec::new();
    for t in 1..=7 {
        if let Some(s) = intermediate_cover(t).map_err(|e| e.to_string())? {
            got.push((s.source_type, s.target_type, s.degree));
        }
    }
    got.sort();
    let want = vec![(2, 1, 2), (3, 1, 2), (4, 3, 2), (6, 5, 3), (7, 1, 3)];
    ensure(got == want, || format!("{got:?}"))?;
    Ok("3->1 (2), 7->1 (3), 2->1 (2), 4->3 (2), 6->5 (3)".into())
}

fn criterion_8() -> Check {
    let suites = selftest::run_all(selftest::DEFAULT_SEED);
    let mut parts = Vec::new();
    for s in &suites {
        ensure(s.passed(), || format!("{}: {:?}", s.name, s.failures))?;
        parts.push(format!("{} x{}", s.name, s.cases));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(u32, Duration, fn() -> Check); 8] = [
        (1, Duration::from_secs(1), criterion_1),
        (2, Duration::from_secs(1), criterion_2),
        (3, Duration::from_secs(1), criterion_3),
        (4, Duration::from_secs(1), criterion_4),
        (5, Duration::from_secs(30), criterion_5),
        (6, Duration::from_secs(1), criterion_6),
        (7, Duration::from_secs(1), criterion_7),
        (8, Duration::from_secs(60), criterion_8),
    ];
    let mut failed = 0;
    for (n, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}; took {elapsed:?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {n}: {msg} [{} ms]", elapsed.as_millis()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n}: {msg} [{} ms]", elapsed.as_millis());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
