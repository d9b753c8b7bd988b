//! The `bielliptic` command line: argument parsing, command dispatch and reports.

pub mod report;
pub mod selftest;

use std::path::PathBuf;

use bielliptic_core::brauer::{obstruction_witness, Conclusion, SecondPoint, WitnessCounts};
use bielliptic_core::catalog::{ingest_catalog, shipped_catalog, CatalogEntry};
use bielliptic_core::cycles::{
    builtin_script, finite_instance, full_bound_certificate, parse_script, pushforward_relations, quotient_exponent,
    replay_derivation, universal_model, DerivationScript, Verdict as ReplayVerdict,
};
use bielliptic_core::elliptic::{enumeration_bound, ENUMERATION_BOUND_VAR};
use bielliptic_core::localdata::{
    full_two_torsion_field, minimal_at_p, mu2_point, potentially_multiplicative, reduction_type, tate_valuation,
    LocalTwoTorsionPoint, NonIsogeny, DEFAULT_PADIC_PRECISION,
};
use bielliptic_core::numeric::{is_prime, padic_valuation, parse_rational, Valuation};
use bielliptic_core::surfaces::{all_types, epsilon, exponent_bound, intermediate_cover};
use bielliptic_core::{Error, FpCurve, FpPoint, Integer, RationalCurve};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

pub use report::{Report, Verdict};

#[derive(Debug, Parser)]
#[command(name = "bielliptic", version, about = "Zero-cycle certificates for bielliptic surfaces")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = selftest::DEFAULT_SEED)]
    pub seed: u64,
    /// Curve catalog to resolve labels against (defaults to the shipped one).
    #[arg(long, global = true, value_name = "PATH")]
    pub catalog: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants, reduction, torsion and point counts of a single curve.
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// The classification table, cover lattice and exponent bounds.
    Surface {
        #[command(subcommand)]
        cmd: SurfaceCmd,
    },
    /// Quotient models and derivation replay.
    Cycles {
        #[command(subcommand)]
        cmd: CyclesCmd,
    },
    /// The 2-torsion obstruction witness.
    Brauer {
        #[command(subcommand)]
        cmd: BrauerCmd,
    },
    /// Catalog validation.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Randomized property checks of the underlying arithmetic.
    Selftest,
}

/// Curves are catalog labels or inline short models `A,B`.
#[derive(Debug, Subcommand)]
pub enum CurveCmd {
    Info {
        curve: String,
    },
    Reduction {
        curve: String,
        #[arg(short)]
        p: u64,
    },
    Torsion {
        curve: String,
        #[arg(short)]
        p: Option<u64>,
    },
    Count {
        curve: String,
        #[arg(short)]
        p: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCmd {
    Table,
    Covers,
    Bound {
        #[arg(long = "type", value_name = "N")]
        surface_type: u8,
    },
}

#[derive(Debug, Subcommand)]
pub enum CyclesCmd {
    Verify {
        #[arg(long = "type", value_name = "1|5")]
        surface_type: u8,
        #[arg(long, conflicts_with_all = ["fp", "curve1", "curve2"])]
        universal: bool,
        #[arg(long, value_name = "P")]
        fp: Option<u64>,
        #[arg(long, requires = "fp")]
        curve1: Option<String>,
        #[arg(long, requires = "fp")]
        curve2: Option<String>,
    },
    Replay {
        /// A built-in script name or a path.
        #[arg(long)]
        script: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum BrauerCmd {
    Witness {
        #[arg(long)]
        e1: String,
        #[arg(long)]
        e2: String,
        #[arg(short)]
        p: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    Check { path: PathBuf },
}

type Outcome = Result<Report, Error>;

fn val(v: Valuation) -> Value {
    match v {
        Valuation::Finite(n) => json!(n),
        Valuation::Infinite => json!("inf"),
    }
}

struct Ctx<'a> {
    argv: &'a [String],
    catalog: Vec<CatalogEntry>,
    seed: u64,
}

impl Ctx<'_> {
    fn report(&self, verdict: Verdict, result: Value, lines: Vec<String>) -> Report {
        Report::new(self.argv, verdict, result).with_lines(lines)
    }

    fn curve(&self, spec: &str) -> Result<RationalCurve, Error> {
        if let Some(e) = self.catalog.iter().find(|e| e.label == spec) {
            return Ok(e.curve.clone());
        }
        let parsed = spec.split_once(',').and_then(|(a, b)| Some((parse_rational(a)?, parse_rational(b)?)));
        match parsed {
            Some((a, b)) => Ok(RationalCurve::from_short(a, b)?.with_label(spec)),
            None => Err(Error::Input(format!("unknown curve {spec:?}: not a catalog label and not of the form A,B"))),
        }
    }
}

fn name(e: &RationalCurve) -> String {
    e.label().unwrap_or("curve").to_string()
}

fn point_x(pt: &LocalTwoTorsionPoint, p: u64) -> Value {
    match pt.rational.as_ref().and_then(|r| r.x()) {
        Some(x) => json!(x.to_string()),
        None => json!(format!("{} mod {p}", pt.x.residue(p))),
    }
}

fn curve_info(ctx: &Ctx, spec: &str) -> Outcome {
    let e = ctx.curve(spec)?;
    let inv = e.invariants();
    let listed = ctx.catalog.iter().find(|c| c.label == spec).map(|c| c.a_invariants.iter().map(|a| a.to_string()).collect::<Vec<_>>());
    let two: Vec<String> = e.rational_cubic_roots().iter().map(|x| x.to_string()).collect();
    let result = json!({
        "curve": name(&e),
        "listed_coefficients": listed,
        "a": e.a().to_string(),
        "b": e.b().to_string(),
        "c4": inv.c4.to_string(),
        "c6": inv.c6.to_string(),
        "discriminant": inv.discriminant.to_string(),
        "j_invariant": inv.j.to_string(),
        "rational_two_torsion_x": two,
    });
    let lines = vec![
        format!("{e}"),
        format!("discriminant {}, j = {}", inv.discriminant, inv.j),
        format!("rational 2-torsion x-coordinates: [{}]", two.join(", ")),
    ];
    Ok(ctx.report(Verdict::Verified, result, lines))
}

fn curve_reduction(ctx: &Ctx, spec: &str, p: u64) -> Outcome {
    let e = ctx.curve(spec)?;
    if !is_prime(p) {
        return Err(Error::Input(format!("{p} is not prime")));
    }
    if p < 5 {
        // only the j-invariant test is available here
        let v_j = padic_valuation(&e.j_invariant(), &Integer::from(p));
        let pm = potentially_multiplicative(&e, p)?;
        let kind = if pm { "potentially multiplicative" } else { "potentially good" };
        let result = json!({ "curve": name(&e), "p": p, "v_j": val(v_j), "potentially_multiplicative": pm, "class": null });
        let lines = vec![format!("{}: v_{p}(j) = {v_j}, {kind} reduction at p={p}", name(&e))];
        return Ok(ctx.report(Verdict::Verified, result, lines));
    }
    let model = minimal_at_p(&e, p)?;
    let red = &model.reduction;
    let phrase = format!("{} reduction at p={p}", red.class.tag().replace('-', " "));
    let mut result = json!({
        "curve": name(&e),
        "p": p,
        "class": red.class.tag(),
        "v_delta_min": val(red.v_delta_min),
        "v_c4": val(red.v_c4),
        "v_j": val(red.v_j),
        "scale_exponent": model.scale_exponent,
        "summary": phrase,
    });
    let mut lines = vec![format!("{}: {phrase}", name(&e))];
    lines.push(format!("v(disc_min) = {}, v(c4) = {}, v(j) = {}", red.v_delta_min, red.v_c4, red.v_j));
    if red.class.is_multiplicative() {
        let t = tate_valuation(&e, p)?;
        result["tate"] = json!({ "v_q": t.v_q, "q_square_class": t.q_square_class.tag() });
        lines.push(format!("Tate parameter: v(q) = {}, q in square class {}", t.v_q, t.q_square_class));
    }
    Ok(ctx.report(Verdict::Verified, result, lines))
}

fn curve_torsion(ctx: &Ctx, spec: &str, p: Option<u64>) -> Outcome {
    let e = ctx.curve(spec)?;
    let two: Vec<String> = e.rational_cubic_roots().iter().map(|x| x.to_string()).collect();
    let mut result = json!({ "curve": name(&e), "rational_two_torsion_x": two });
    let mut lines = vec![format!("{}: rational 2-torsion x-coordinates [{}]", name(&e), two.join(", "))];
    if let Some(p) = p {
        let f = full_two_torsion_field(&e, p)?;
        let points: Vec<Value> = f
            .points
            .iter()
            .map(|pt| json!({ "x": point_x(pt, p), "residue": pt.x.residue(p), "reduces_to_node": pt.reduces_to_node }))
            .collect();
        result["local"] = json!({
            "p": p,
            "status": f.status.tag(),
            "degree": f.degree(),
            "discriminant_class": f.discriminant_class.tag(),
            "points": points,
            "node_residue": f.node_residue,
            "precision": DEFAULT_PADIC_PRECISION,
        });
        lines.push(format!("over Q_{p}: {} ({})", f.description(), f.status.tag()));
        if reduction_type(&e, p)?.class == bielliptic_core::localdata::ReductionClass::SplitMultiplicative {
            let mu = mu2_point(&e, p)?;
            result["local"]["mu2_point_x"] = point_x(&mu, p);
            lines.push(format!("mu_2 point: x = {}", point_x(&mu, p).as_str().unwrap_or("?")));
        }
    }
    Ok(ctx.report(Verdict::Verified, result, lines))
}

fn reduce(e: &RationalCurve, p: u64) -> Result<FpCurve, Error> {
    e.reduce_mod(p).map_err(|err| Error::Input(format!("{} has no good model over F_{p}: {err}", name(e))))
}

fn curve_count(ctx: &Ctx, spec: &str, p: u64) -> Outcome {
    let e = ctx.curve(spec)?;
    let bound = enumeration_bound();
    let r = reduce(&e, p)?;
    let n = r.count_points(bound)?;
    let g = r.group_structure(bound)?;
    let t = n as i128 - p as i128 - 1;
    let hasse = t * t <= 4 * p as i128;
    let result = json!({
        "curve": name(&e), "p": p, "count": n, "trace": t, "group": g.group.to_string(), "hasse": hasse,
    });
    let lines = vec![format!("#{}(F_{p}) = {n} ~ {}, trace {t}", name(&e), g.group)];
    let verdict = if hasse { Verdict::Verified } else { Verdict::Refuted };
    Ok(ctx.report(verdict, result, lines).cite("enumeration_bound", json!(bound)))
}

fn surface_table(ctx: &Ctx) -> Outcome {
    let mut rows = Vec::new();
    let mut lines = vec!["type  G            ord K  |G|  H2_tors    bound".to_string()];
    for r in all_types() {
        let bound = exponent_bound(r.type_number)?;
        rows.push(json!({
            "type": r.type_number,
            "group": r.group_label,
            "ord_k": r.ord_k,
            "group_order": r.group_order(),
            "h2_torsion": r.h2_torsion.to_string(),
            "exponent_bound": bound,
        }));
        lines.push(format!(
            "{:<5} {:<12} {:<6} {:<4} {:<10} {}",
            r.type_number,
            r.group_label,
            r.ord_k,
            r.group_order(),
            r.h2_torsion.to_string(),
            bound
        ));
    }
    Ok(ctx.report(Verdict::Verified, json!({ "types": rows }), lines))
}

fn surface_covers(ctx: &Ctx) -> Outcome {
    let mut steps = Vec::new();
    let mut lines = Vec::new();
    for t in 1..=7 {
        if let Some(s) = intermediate_cover(t)? {
            steps.push(json!({ "source": s.source_type, "target": s.target_type, "degree": s.degree }));
            lines.push(format!("Type {} -> Type {} (degree {})", s.source_type, s.target_type, s.degree));
        }
    }
    Ok(ctx.report(Verdict::Verified, json!({ "covers": steps }), lines))
}

fn replay_json(name: &str, v: &ReplayVerdict) -> Value {
    match v {
        ReplayVerdict::Pass { conclusion, steps, multiple } => json!({
            "script": name, "passed": true, "conclusion": conclusion, "steps": steps,
            "multiple": multiple.as_ref().map(|k| k.to_string()),
        }),
        ReplayVerdict::Fail { step, line, reason } => json!({
            "script": name, "passed": false, "step": step, "line": line, "reason": reason,
        }),
    }
}

fn surface_bound(ctx: &Ctx, t: u8) -> Outcome {
    let cert = full_bound_certificate(t)?;
    let chain: Vec<Value> = cert
        .chain
        .iter()
        .map(|s| json!({ "source": s.source_type, "target": s.target_type, "degree": s.degree }))
        .collect();
    let scripts: Vec<Value> = cert.verdicts.iter().map(|(n, v)| replay_json(n, v)).collect();
    let group_order = all_types().iter().find(|r| r.type_number == t).map(|r| r.group_order());
    let result = json!({
        "type": t,
        "exponent_bound": cert.exponent_bound,
        "epsilon": cert.epsilon,
        "group_order": group_order,
        "certificate": {
            "chain": chain,
            "base_type": cert.base_type,
            "cover_degree": cert.cover_degree,
            "cokernel_factor": cert.cokernel_factor,
            "replay_factor": cert.replay_factor,
            "total": cert.total,
            "scripts": scripts,
            "verified": cert.verified(),
        },
    });
    let mut lines = vec![format!(
        "Type {t}: exponent bound {} = {}^2 * {}",
        cert.exponent_bound,
        cert.epsilon,
        group_order.unwrap_or(0)
    )];
    lines.push(format!(
        "certificate: cover degree {} x cokernel {} x replay {} = {}",
        cert.cover_degree, cert.cokernel_factor, cert.replay_factor, cert.total
    ));
    let verdict = if cert.verified() { Verdict::Verified } else { Verdict::Refuted };
    Ok(ctx.report(verdict, result, lines).cite("axioms", json!(["composite_reduction", "type1_main", "type5_main"])))
}

fn check_verify_type(t: u8) -> Result<u64, Error> {
    match t {
        1 => Ok(2),
        5 => Ok(3),
        _ => Err(Error::Input(format!("--type must be 1 or 5, got {t}"))),
    }
}

fn cycles_universal(ctx: &Ctx, t: u8) -> Outcome {
    check_verify_type(t)?;
    let model = universal_model(t)?;
    let rels = pushforward_relations(t, &model)?;
    let z = model.tensor(&model.a1.generator(0), &model.a2.generator(0));
    let q = quotient_exponent(&model, &rels, &z)?;
    let eps = epsilon(t)?;
    let bound = eps * eps;
    let divides = q.z_order.as_ref().is_some_and(|k| Integer::from(bound) % k == Integer::from(0));
    let order = q.z_order.as_ref().map(|k| k.to_string());
    let result = json!({
        "type": t,
        "model": "universal",
        "tensor_group": model.group().to_string(),
        "quotient_group": q.group.to_string(),
        "z_order": order,
        "bound": bound,
        "divides_bound": divides,
    });
    let lines = vec![format!(
        "Type {t} universal model: pi_*(z[P,Q]) has order {} in {}, {} {bound}",
        order.as_deref().unwrap_or("infinite"),
        q.group,
        if divides { "dividing" } else { "NOT dividing" }
    )];
    let verdict = if divides { Verdict::Verified } else { Verdict::Refuted };
    Ok(ctx.report(verdict, result, lines))
}

/// First point of order `n` (a prime) in enumeration order.
pub fn point_of_order(e: &FpCurve, n: u64, bound: u64) -> Result<Option<FpPoint>, Error> {
    Ok(e.points(bound)?.into_iter().find(|pt| !pt.is_identity() && e.mul_small(n as i64, pt).is_identity()))
}

fn cycles_finite(ctx: &Ctx, t: u8, p: u64, c1: Option<&str>, c2: Option<&str>) -> Outcome {
    let n = check_verify_type(t)?;
    let (Some(c1), Some(c2)) = (c1, c2) else {
        return Err(Error::Input("--fp needs both --curve1 and --curve2".into()));
    };
    let bound = enumeration_bound();
    let (r1, r2) = (ctx.curve(c1)?, ctx.curve(c2)?);
    let (e1, e2) = (reduce(&r1, p)?, reduce(&r2, p)?);
    let p0 = point_of_order(&e1, n, bound)?
        .ok_or_else(|| Error::Input(format!("{c1} has no point of order {n} over F_{p}")))?;
    let fi = finite_instance(t, &e1, &p0, &e2, bound)?;
    let orders: Vec<Value> = fi
        .generator_orders
        .iter()
        .map(|((i, j), o)| json!({ "generators": [i, j], "order": o.as_ref().map(|k| k.to_string()) }))
        .collect();
    let ok = fi.within_bound();
    let result = json!({
        "type": t,
        "p": p,
        "curve1": c1,
        "curve2": c2,
        "p0": p0.to_string(),
        "tensor_group": fi.model.group().to_string(),
        "quotient_group": fi.quotient.group.to_string(),
        "exponent": fi.quotient.exponent.to_string(),
        "bound": fi.per_cycle_bound,
        "generator_orders": orders,
        "within_bound": ok,
    });
    let lines = vec![
        format!("Type {t} over F_{p}: P0 = {p0}, E1 (x) E2 ~ {}", fi.model.group()),
        format!(
            "quotient {} has exponent {}, {} {}",
            fi.quotient.group,
            fi.quotient.exponent,
            if ok { "dividing" } else { "NOT dividing" },
            fi.per_cycle_bound
        ),
    ];
    let verdict = if ok { Verdict::Verified } else { Verdict::Refuted };
    Ok(ctx.report(verdict, result, lines).cite("enumeration_bound", json!(bound)))
}

fn load_script(spec: &str) -> Result<DerivationScript, Error> {
    if let Some(s) = builtin_script(spec) {
        return Ok(s);
    }
    let path = PathBuf::from(spec);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Input(format!("{spec} is neither a built-in script nor a readable file: {e}")))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec).to_string();
    parse_script(&stem, &text)
}

fn cycles_replay(ctx: &Ctx, spec: &str) -> Outcome {
    let script = load_script(spec)?;
    let v = replay_derivation(&script)?;
    let mut axioms: Vec<&str> = script.steps.iter().map(|s| s.axiom.tag()).collect();
    axioms.sort();
    axioms.dedup();
    let lines = vec![match &v {
        ReplayVerdict::Pass { conclusion, steps, .. } => format!("{}: {steps} steps replayed, concluded {conclusion}", script.name),
        ReplayVerdict::Fail { step, line, reason } => format!("{}: step {step} (line {line}) fails: {reason}", script.name),
    }];
    let verdict = if v.passed() { Verdict::Verified } else { Verdict::Refuted };
    Ok(ctx.report(verdict, replay_json(&script.name, &v), lines).cite("axioms", json!(axioms)))
}

fn counts_json(c: &WitnessCounts) -> Value {
    json!({ "hom": c.hom, "hom_gal": c.hom_gal, "h2": c.h2, "witnesses": c.witnesses })
}

fn brauer_witness(ctx: &Ctx, s1: &str, s2: &str, p: u64) -> Outcome {
    let (e1, e2) = (ctx.curve(s1)?, ctx.curve(s2)?);
    let r = obstruction_witness(&e1, &e2, p)?;
    let reduction: Vec<Value> = (0..2)
        .map(|i| {
            json!({
                "curve": r.labels[i],
                "class": r.reduction[i].class.tag(),
                "v_delta_min": val(r.reduction[i].v_delta_min),
                "v_j": val(r.reduction[i].v_j),
                "v_q": r.tate[i].v_q,
                "q_square_class": r.tate[i].q_square_class.tag(),
                "two_torsion": r.two_torsion[i].status.tag(),
            })
        })
        .collect();
    let bases: Vec<Value> = r
        .bases
        .iter()
        .map(|b| {
            let p2 = match &b.p2 {
                SecondPoint::Local(pt) => point_x(pt, p),
                SecondPoint::Conjugate { class, .. } => json!(format!("conjugate over Q_{p}(sqrt {class})")),
            };
            json!({ "p1_x": point_x(&b.p1, p), "p2_x": p2 })
        })
        .collect();
    let nonisogeny = match &r.nonisogeny {
        NonIsogeny::Certificate { p, v_j } => json!({ "certified": true, "p": p, "v_j": [val(v_j[0]), val(v_j[1])] }),
        NonIsogeny::Inconclusive => json!({ "certified": false }),
    };
    let status = match r.conclusion {
        Conclusion::Established => "established",
        Conclusion::Conditional => "conditional",
        Conclusion::NoWitness => "no-witness",
    };
    let result = json!({
        "curves": r.labels,
        "p": p,
        "reduction": reduction,
        "nonisogeny": nonisogeny,
        "working_field": r.working_field.to_string(),
        "working_field_degree": r.working_field.degree(),
        "bases": bases,
        "counts": counts_json(&r.counts),
        "base_field_counts": counts_json(&r.base_field_counts),
        "witness": r.witness.map(|w| w.to_string()),
        "conclusion": r.conclusion_holds(),
        "status": status,
    });
    let mut lines = vec![
        format!("{} and {}: split multiplicative reduction at p={p}", r.labels[0], r.labels[1]),
        format!("working field {}", r.working_field),
        format!(
            "|Hom| = {}, |Hom_Gal| = {}, |H2| = {}, witnesses with nonzero class = {}",
            r.counts.hom, r.counts.hom_gal, r.counts.h2, r.counts.witnesses
        ),
    ];
    match &r.nonisogeny {
        NonIsogeny::Certificate { p: q, v_j } => {
            lines.push(format!("not geometrically isogenous: v_{q}(j) = {} vs {}", v_j[0], v_j[1]))
        }
        NonIsogeny::Inconclusive => lines.push("non-isogeny not certified; conclusion is conditional".into()),
    }
    if let Some(w) = r.witness {
        lines.push(format!("witness {w}"));
    }
    lines.push(format!("conclusion: {}", r.conclusion_holds()));
    let verdict = match r.conclusion {
        Conclusion::Established => Verdict::Verified,
        Conclusion::Conditional => Verdict::Conditional,
        Conclusion::NoWitness => Verdict::Refuted,
    };
    Ok(ctx.report(verdict, result, lines).cite("padic_precision", json!(DEFAULT_PADIC_PRECISION)))
}

fn catalog_check(ctx: &Ctx, path: &PathBuf) -> Outcome {
    let entries = ingest_catalog(path)?;
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "label": e.label,
                "form": if e.is_long_form() { "long" } else { "short" },
                "a": e.curve.a().to_string(),
                "b": e.curve.b().to_string(),
            })
        })
        .collect();
    let mut lines = vec![format!("{}: {} entries", path.display(), entries.len())];
    lines.extend(entries.iter().map(|e| format!("  {}: y^2 = x^3 + ({})x + ({})", e.label, e.curve.a(), e.curve.b())));
    Ok(ctx.report(Verdict::Verified, json!({ "entries": rows }), lines))
}

fn run_selftest(ctx: &Ctx) -> Outcome {
    let suites = selftest::run_all(ctx.seed);
    let ok = suites.iter().all(|s| s.passed());
    let rows: Vec<Value> = suites
        .iter()
        .map(|s| json!({ "suite": s.name, "cases": s.cases, "failures": s.failures }))
        .collect();
    let lines = suites
        .iter()
        .map(|s| format!("{} {} ({} cases)", if s.passed() { "PASS" } else { "FAIL" }, s.name, s.cases))
        .collect();
    let verdict = if ok { Verdict::Verified } else { Verdict::Refuted };
    Ok(ctx.report(verdict, json!({ "suites": rows }), lines).cite("seed", json!(ctx.seed)))
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Outcome {
    match cmd {
        Command::Curve { cmd } => match cmd {
            CurveCmd::Info { curve } => curve_info(ctx, curve),
            CurveCmd::Reduction { curve, p } => curve_reduction(ctx, curve, *p),
            CurveCmd::Torsion { curve, p } => curve_torsion(ctx, curve, *p),
            CurveCmd::Count { curve, p } => curve_count(ctx, curve, *p),
        },
        Command::Surface { cmd } => match cmd {
            SurfaceCmd::Table => surface_table(ctx),
            SurfaceCmd::Covers => surface_covers(ctx),
            SurfaceCmd::Bound { surface_type } => surface_bound(ctx, *surface_type),
        },
        Command::Cycles { cmd } => match cmd {
            CyclesCmd::Verify { surface_type, universal: true, .. } => cycles_universal(ctx, *surface_type),
            CyclesCmd::Verify { surface_type, fp: Some(p), curve1, curve2, .. } => {
                cycles_finite(ctx, *surface_type, *p, curve1.as_deref(), curve2.as_deref())
            }
            CyclesCmd::Verify { .. } => Err(Error::Input("cycles verify needs --universal or --fp".into())),
            CyclesCmd::Replay { script } => cycles_replay(ctx, script),
        },
        Command::Brauer { cmd: BrauerCmd::Witness { e1, e2, p } } => brauer_witness(ctx, e1, e2, *p),
        Command::Catalog { cmd: CatalogCmd::Check { path } } => catalog_check(ctx, path),
        Command::Selftest => run_selftest(ctx),
    }
}

/// Runs one command line (without the program name) and returns its exit code and report.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> (i32, Report) {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(std::iter::once("bielliptic".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let r = Report::new(&argv, Verdict::Verified, json!({ "help": text })).with_lines(vec![text]);
                return (0, r);
            }
            let r = Report::new(&argv, Verdict::Error, json!({ "message": "usage error", "usage": text }))
                .with_lines(vec![text]);
            return (2, r);
        }
    };
    let catalog = match &cli.catalog {
        Some(path) => ingest_catalog(path),
        None => Ok(shipped_catalog()),
    };
    let report = match catalog {
        Ok(catalog) => {
            let ctx = Ctx { argv: &argv, catalog, seed: cli.seed };
            dispatch(&ctx, &cli.command).unwrap_or_else(|e| Report::error(&argv, e.to_string()))
        }
        Err(e) => Report::error(&argv, e.to_string()),
    };
    let report = if std::env::var_os(ENUMERATION_BOUND_VAR).is_some() {
        report.cite("enumeration_bound_override", json!(enumeration_bound()))
    } else {
        report
    };
    (report.exit_code(), report)
}
