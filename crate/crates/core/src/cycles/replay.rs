//! Checker for derivation scripts.
//!
//! A step `axiom : lhs => rhs` is accepted when `lhs - rhs`, put in the normal form the
//! axiom allows, lies in the span of the earlier steps (in the same normal form) plus
//! the torsion relations the axiom provides. Facts proved on `X` are also available
//! pushed forward to `S`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{tensor_model, MarkedGroup, TensorModel};
use crate::error::{Error, Result};
use crate::numeric::quotient_group;

pub const BUILTIN_SCRIPTS: [(&str, &str); 3] = [
    ("type1_main", include_str!("../../scripts/type1_main.txt")),
    ("type5_main", include_str!("../../scripts/type5_main.txt")),
    ("composite_reduction", include_str!("../../scripts/composite_reduction.txt")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Bilinearity,
    TorsionEquivalence,
    PushforwardFunctoriality,
    DegreeIdentity,
    /// Integer combination of earlier steps, with no further rewriting.
    Combine,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [
        Axiom::Bilinearity,
        Axiom::TorsionEquivalence,
        Axiom::PushforwardFunctoriality,
        Axiom::DegreeIdentity,
        Axiom::Combine,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Axiom::Bilinearity => "bilinearity",
            Axiom::TorsionEquivalence => "torsion-equivalence",
            Axiom::PushforwardFunctoriality => "pushforward-functoriality",
            Axiom::DegreeIdentity => "degree-identity",
            Axiom::Combine => "combine",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.tag() == s)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Level {
    X,
    S,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Atom {
    Point(Vec<BigInt>, Vec<BigInt>),
    Special(Vec<BigInt>, Vec<BigInt>),
    Named(String),
    PushPull(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Expr(BTreeMap<(Level, Atom), BigInt>);

impl Expr {
    fn atom(level: Level, atom: Atom) -> Self {
        let mut m = BTreeMap::new();
        m.insert((level, atom), BigInt::one());
        Expr(m)
    }

    fn add_scaled(&mut self, other: &Expr, k: &BigInt) {
        for (key, v) in &other.0 {
            *self.0.entry(key.clone()).or_insert_with(BigInt::zero) += v * k;
        }
        self.0.retain(|_, v| !v.is_zero());
    }

    fn minus(&self, other: &Expr) -> Expr {
        let mut out = self.clone();
        out.add_scaled(other, &-BigInt::one());
        out
    }

    fn levels(&self) -> BTreeSet<Level> {
        self.0
            .keys()
            .filter(|(_, a)| matches!(a, Atom::Point(..) | Atom::Special(..)))
            .map(|(l, _)| *l)
            .collect()
    }

    fn pushed(&self) -> Expr {
        let mut out = Expr::default();
        for ((_, atom), v) in &self.0 {
            out.add_scaled(&Expr::atom(Level::S, atom.clone()), v);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Step {
    pub line: usize,
    pub axiom: Axiom,
    pub text: String,
    lhs: Expr,
    rhs: Expr,
}

#[derive(Debug, Clone)]
struct Claim {
    text: String,
    lhs: Expr,
    rhs: Expr,
}

/// Symbols available to a script: the universal groups for its type, if any.
#[derive(Debug, Clone)]
struct Context {
    model: Option<TensorModel>,
    degree: Option<BigInt>,
    cokernel: bool,
}

#[derive(Debug, Clone)]
pub struct DerivationScript {
    pub name: String,
    pub surface_type: Option<u8>,
    pub steps: Vec<Step>,
    conclusion: Claim,
    ctx: Context,
}

impl DerivationScript {
    pub fn conclusion(&self) -> &str {
        &self.conclusion.text
    }

    pub fn degree(&self) -> Option<&BigInt> {
        self.ctx.degree.as_ref()
    }

    /// The same script with one step removed; used for negative controls.
    pub fn without_step(&self, index: usize) -> DerivationScript {
        let mut s = self.clone();
        s.steps.remove(index);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass {
        conclusion: String,
        steps: usize,
        /// `k` when the conclusion reads `k * x => 0` for a single symbol `x`.
        multiple: Option<BigInt>,
    },
    Fail {
        step: usize,
        line: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

// ---- parsing ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '[' => out.push(Tok::LBrack),
            ']' => out.push(Tok::RBrack),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            ',' => out.push(Tok::Comma),
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            d if d.is_ascii_digit() => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                out.push(Tok::Int(digits.parse().expect("digits")));
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..=i].iter().collect()));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
        i += 1;
    }
    Ok(out)
}

const RESERVED: [&str; 7] = ["pi", "z", "pushpull", "w", "w2", "O", "P0"];

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a Context,
}

type PResult<T> = std::result::Result<T, String>;

impl<'a> Parser<'a> {
    fn new(s: &str, ctx: &'a Context) -> PResult<Self> {
        Ok(Parser { toks: tokenize(s)?, pos: 0, ctx })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(format!("expected {t:?}, found {got:?}")),
        }
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(format!("unexpected trailing {t:?}")),
        }
    }

    fn model(&self) -> PResult<&'a TensorModel> {
        self.ctx.model.as_ref().ok_or_else(|| "points need a `% type 1` or `% type 5` directive".to_string())
    }

    fn expr(&mut self, level: Level) -> PResult<Expr> {
        let mut out = Expr::default();
        let mut sign = BigInt::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                sign = -sign;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term(level)?;
            out.add_scaled(&t, &sign);
            match self.peek() {
                Some(Tok::Plus) => sign = BigInt::one(),
                Some(Tok::Minus) => sign = -BigInt::one(),
                _ => return Ok(out),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self, level: Level) -> PResult<Expr> {
        if let Some(Tok::Int(k)) = self.peek().cloned() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::LParen | Tok::LBrack | Tok::Ident(_)) => {}
                _ if k.is_zero() => return Ok(Expr::default()),
                _ => return Err(format!("bare integer {k} is not a cycle")),
            }
            let mut out = Expr::default();
            out.add_scaled(&self.factor(level)?, &k);
            return Ok(out);
        }
        self.factor(level)
    }

    fn factor(&mut self, level: Level) -> PResult<Expr> {
        match self.next() {
            Some(Tok::LParen) => {
                let e = self.expr(level)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::LBrack) => {
                let (a, b) = self.point_pair()?;
                Ok(Expr::atom(level, Atom::Point(a, b)))
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "pi" => {
                    if level == Level::S {
                        return Err("pi(...) cannot be nested".into());
                    }
                    self.expect(Tok::LParen)?;
                    let e = self.expr(Level::S)?;
                    self.expect(Tok::RParen)?;
                    Ok(e)
                }
                "z" => {
                    self.expect(Tok::LBrack)?;
                    let (a, b) = self.point_pair()?;
                    Ok(Expr::atom(level, Atom::Special(a, b)))
                }
                "pushpull" => {
                    self.expect(Tok::LParen)?;
                    let n = self.ident()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::atom(Level::S, Atom::PushPull(n)))
                }
                other if RESERVED.contains(&other) || other.starts_with(|c: char| c.is_ascii_uppercase()) => {
                    Err(format!("{other} cannot stand alone as a cycle"))
                }
                _ => Ok(Expr::atom(Level::S, Atom::Named(name))),
            },
            got => Err(format!("expected a cycle, found {got:?}")),
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.next() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => Ok(s),
            got => Err(format!("expected a name, found {got:?}")),
        }
    }

    fn point_pair(&mut self) -> PResult<(Vec<BigInt>, Vec<BigInt>)> {
        let m = self.model()?;
        let a = self.point(&m.a1, true)?;
        self.expect(Tok::Comma)?;
        let b = self.point(&m.a2, false)?;
        self.expect(Tok::RBrack)?;
        Ok((a, b))
    }

    /// `+- k name +- ...` where names come from the group's generators.
    fn point(&mut self, g: &MarkedGroup, first: bool) -> PResult<Vec<BigInt>> {
        let mut acc = g.zero();
        let mut sign = BigInt::one();
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                sign = -sign;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let mut k = BigInt::one();
            if let Some(Tok::Int(n)) = self.peek().cloned() {
                self.pos += 1;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                }
                k = n;
            }
            let p = self.point_atom(g, first)?;
            acc = g.add(&acc, &g.scale(&(&k * &sign), &p));
            match self.peek() {
                Some(Tok::Plus) => sign = BigInt::one(),
                Some(Tok::Minus) => sign = -BigInt::one(),
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn point_atom(&mut self, g: &MarkedGroup, first: bool) -> PResult<Vec<BigInt>> {
        let name = match self.next() {
            Some(Tok::Ident(s)) => s,
            got => return Err(format!("expected a point, found {got:?}")),
        };
        if name == "O" {
            return Ok(g.zero());
        }
        if !first && (name == "w" || name == "w2") {
            self.expect(Tok::LParen)?;
            let mut p = self.point(g, false)?;
            self.expect(Tok::RParen)?;
            for _ in 0..if name == "w" { 1 } else { 2 } {
                p = g.apply_automorphism(&p);
            }
            return Ok(p);
        }
        if first && name == "P0" {
            return g.marked_point.clone().ok_or_else(|| "no marked point".to_string());
        }
        match g.names.iter().position(|n| *n == name) {
            Some(i) => Ok(g.generator(i)),
            None => Err(format!("unknown point {name}")),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_equation(text: &str, line: usize, ctx: &Context) -> Result<(Expr, Expr)> {
    let (l, r) = text.split_once("=>").ok_or_else(|| parse_err(line, "missing `=>`"))?;
    let side = |s: &str| -> Result<Expr> {
        let mut p = Parser::new(s, ctx).map_err(|m| parse_err(line, m))?;
        let e = p.expr(Level::X).map_err(|m| parse_err(line, m))?;
        p.finish().map_err(|m| parse_err(line, m))?;
        Ok(e)
    };
    let (lhs, rhs) = (side(l)?, side(r)?);
    let mut levels = lhs.levels();
    levels.extend(rhs.levels());
    if levels.len() > 1 {
        return Err(parse_err(line, "an equation mixes cycles on X with cycles on S"));
    }
    Ok((lhs, rhs))
}

fn parse_count(s: &str, line: usize, what: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .ok()
        .filter(|n| n.is_positive())
        .ok_or_else(|| parse_err(line, format!("{what} must be a positive integer, got {:?}", s.trim())))
}

pub fn parse_script(name: &str, text: &str) -> Result<DerivationScript> {
    let mut surface_type = None;
    let mut degree = None;
    let mut cokernel = false;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();

    for &(n, l) in &lines {
        let Some(d) = l.strip_prefix('%') else { continue };
        let d = d.trim();
        let (key, rest) = d.split_once(char::is_whitespace).unwrap_or((d, ""));
        match key {
            "type" => {
                let t = parse_count(rest, n, "type")?;
                surface_type = Some(match u8::try_from(&t) {
                    Ok(t @ (1 | 5)) => t,
                    _ => return Err(parse_err(n, "scripts support Types 1 and 5")),
                });
            }
            "degree" => degree = Some(parse_count(rest, n, "degree")?),
            "cokernel" => cokernel = true,
            "conclusion" => {}
            other => return Err(parse_err(n, format!("unknown directive {other}"))),
        }
    }
    let model = match surface_type {
        Some(t) => {
            let n = if t == 1 { 2 } else { 3 };
            Some(tensor_model(&MarkedGroup::universal_translation(n), &MarkedGroup::universal_automorphism(t)?)?)
        }
        None => None,
    };
    let ctx = Context { model, degree, cokernel };

    let mut steps = Vec::new();
    let mut conclusion = None;
    for &(n, l) in &lines {
        if let Some(d) = l.strip_prefix('%') {
            if let Some(c) = d.trim().strip_prefix("conclusion") {
                let (lhs, rhs) = parse_equation(c, n, &ctx)?;
                conclusion = Some(Claim { text: c.trim().replace("=>", "="), lhs, rhs });
            }
            continue;
        }
        let (tag, eq) = l.split_once(':').ok_or_else(|| parse_err(n, "expected `axiom : lhs => rhs`"))?;
        let axiom = Axiom::parse(tag.trim()).ok_or_else(|| parse_err(n, format!("unknown axiom {:?}", tag.trim())))?;
        if axiom == Axiom::DegreeIdentity && ctx.degree.is_none() {
            return Err(parse_err(n, "degree-identity needs a `% degree m` directive"));
        }
        let (lhs, rhs) = parse_equation(eq, n, &ctx)?;
        steps.push(Step { line: n, axiom, text: eq.trim().to_string(), lhs, rhs });
    }
    let conclusion = conclusion.ok_or_else(|| parse_err(0, "missing `% conclusion` directive"))?;
    Ok(DerivationScript { name: name.to_string(), surface_type, steps, conclusion, ctx })
}

// ---- normal forms ----

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Raw(Level, Atom),
    Tensor(Level, usize),
    First(Level, Vec<BigInt>),
    Second(Level, Vec<BigInt>),
    Base(Level),
}

type Vector = BTreeMap<Key, BigInt>;

fn bump(v: &mut Vector, k: Key, c: &BigInt) {
    *v.entry(k).or_insert_with(BigInt::zero) += c;
}

fn canonical_orbit(m: &TensorModel, a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let p0 = m.a1.marked_point.clone().expect("typed scripts mark P0");
    let n = m.a1.marked_order.expect("typed scripts mark P0");
    let mut cur = (a.to_vec(), b.to_vec());
    let mut best = cur.clone();
    for _ in 1..n {
        cur = (m.a1.add(&cur.0, &p0), m.a2.apply_automorphism(&cur.1));
        best = best.min(cur.clone());
    }
    best
}

fn normal_form(ctx: &Context, axiom: Axiom, e: &Expr) -> Vector {
    let mut out = Vector::new();
    for ((level, atom), c) in &e.0 {
        let level = *level;
        match atom {
            Atom::PushPull(name) => {
                if axiom == Axiom::DegreeIdentity {
                    let m = ctx.degree.clone().expect("checked while parsing");
                    bump(&mut out, Key::Raw(level, Atom::Named(name.clone())), &(c * m));
                } else if !ctx.cokernel {
                    bump(&mut out, Key::Raw(level, atom.clone()), c);
                }
            }
            Atom::Named(_) => bump(&mut out, Key::Raw(level, atom.clone()), c),
            Atom::Point(a, b) | Atom::Special(a, b) => {
                let m = ctx.model.as_ref().expect("points need a model");
                match axiom {
                    Axiom::Combine | Axiom::DegreeIdentity => bump(&mut out, Key::Raw(level, atom.clone()), c),
                    Axiom::Bilinearity | Axiom::TorsionEquivalence => {
                        for (k, t) in m.tensor(a, b).into_iter().enumerate() {
                            if !t.is_zero() {
                                bump(&mut out, Key::Tensor(level, k), &(t * c));
                            }
                        }
                        if let Atom::Point(..) = atom {
                            if !m.a1.is_zero(a) {
                                bump(&mut out, Key::First(level, a.clone()), c);
                            }
                            if !m.a2.is_zero(b) {
                                bump(&mut out, Key::Second(level, b.clone()), c);
                            }
                            bump(&mut out, Key::Base(level), c);
                        }
                    }
                    Axiom::PushforwardFunctoriality if level == Level::S => {
                        let (o1, o2) = (m.a1.zero(), m.a2.zero());
                        let points: Vec<(Vec<BigInt>, Vec<BigInt>, i64)> = match atom {
                            Atom::Special(..) => vec![
                                (a.clone(), b.clone(), 1),
                                (a.clone(), o2.clone(), -1),
                                (o1.clone(), b.clone(), -1),
                                (o1, o2, 1),
                            ],
                            _ => vec![(a.clone(), b.clone(), 1)],
                        };
                        for (x, y, s) in points {
                            let (x, y) = canonical_orbit(m, &x, &y);
                            bump(&mut out, Key::Raw(level, Atom::Point(x, y)), &(c * BigInt::from(s)));
                        }
                    }
                    Axiom::PushforwardFunctoriality => bump(&mut out, Key::Raw(level, atom.clone()), c),
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Relations that hold in the target of the normal form, restricted to the given keys.
fn torsion_relations(ctx: &Context, axiom: Axiom, keys: &BTreeSet<Key>) -> Vec<Vector> {
    let Some(m) = ctx.model.as_ref() else { return Vec::new() };
    if !matches!(axiom, Axiom::Bilinearity | Axiom::TorsionEquivalence) {
        return Vec::new();
    }
    let n2 = m.a2.rank();
    let mut out = Vec::new();
    for key in keys {
        let order = match key {
            Key::Tensor(_, k) => Some(m.a1.moduli[k / n2].gcd(&m.a2.moduli[k % n2])),
            Key::First(_, a) if axiom == Axiom::TorsionEquivalence => m.a1.element_order(a),
            Key::Second(_, b) if axiom == Axiom::TorsionEquivalence => m.a2.element_order(b),
            _ => None,
        };
        if let Some(d) = order.filter(|d| !d.is_zero()) {
            out.push(Vector::from([(key.clone(), d)]));
        }
    }
    out
}

fn licensed(ctx: &Context, axiom: Axiom, facts: &[Expr], target: &Expr) -> Result<bool> {
    let t = normal_form(ctx, axiom, target);
    if t.is_empty() {
        return Ok(true);
    }
    let fs: Vec<Vector> = facts.iter().map(|f| normal_form(ctx, axiom, f)).collect();
    let mut keys: BTreeSet<Key> = t.keys().cloned().collect();
    for f in &fs {
        keys.extend(f.keys().cloned());
    }
    let rels = torsion_relations(ctx, axiom, &keys);
    let index: BTreeMap<&Key, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let dense = |v: &Vector| -> Vec<BigInt> {
        let mut row = vec![BigInt::zero(); keys.len()];
        for (k, c) in v {
            row[index[k]] = c.clone();
        }
        row
    };
    let rows: Vec<Vec<BigInt>> = fs.iter().chain(rels.iter()).map(&dense).collect();
    Ok(quotient_group(keys.len(), &rows)?.contains(&dense(&t)))
}

pub fn replay_derivation(script: &DerivationScript) -> Result<Verdict> {
    let ctx = &script.ctx;
    let mut facts: Vec<Expr> = Vec::new();
    for (i, step) in script.steps.iter().enumerate() {
        let diff = step.lhs.minus(&step.rhs);
        if !licensed(ctx, step.axiom, &facts, &diff)? {
            return Ok(Verdict::Fail {
                step: i + 1,
                line: step.line,
                reason: format!("{} does not license `{}`", step.axiom, step.text),
            });
        }
        if diff.levels().contains(&Level::X) {
            facts.push(diff.pushed());
        }
        facts.push(diff);
    }
    let claimed = script.conclusion.lhs.minus(&script.conclusion.rhs);
    let last = script.steps.last().map(|s| s.lhs.minus(&s.rhs));
    if last.as_ref() != Some(&claimed) {
        return Ok(Verdict::Fail {
            step: script.steps.len(),
            line: script.steps.last().map_or(0, |s| s.line),
            reason: format!("the last step does not state the conclusion `{}`", script.conclusion.text),
        });
    }
    let multiple = match (claimed.0.len(), script.conclusion.rhs.0.is_empty()) {
        (1, true) => claimed.0.values().next().map(|k| k.abs()),
        _ => None,
    };
    Ok(Verdict::Pass { conclusion: script.conclusion.text.clone(), steps: script.steps.len(), multiple })
}

pub fn builtin_script(name: &str) -> Option<DerivationScript> {
    match name {
        "type1_main" | "type5_main" => {
            let text = BUILTIN_SCRIPTS.iter().find(|(n, _)| *n == name)?.1;
            Some(parse_script(name, text).expect("built-in scripts parse"))
        }
        _ => None,
    }
}

/// The cokernel argument for a cover of degree `m`, as a script.
pub fn composite_reduction(m: u64) -> Result<DerivationScript> {
    if m == 0 {
        return Err(Error::input("cover degree must be positive"));
    }
    let template = BUILTIN_SCRIPTS[2].1;
    parse_script("composite_reduction", &template.replace("{m}", &m.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Verdict {
        replay_derivation(&parse_script("t", text).unwrap()).unwrap()
    }

    #[test]
    fn builtins_pass() {
        let v = replay_derivation(&builtin_script("type1_main").unwrap()).unwrap();
        assert_eq!(v, Verdict::Pass { conclusion: "4*pi(z[P,Q]) = 0".into(), steps: 7, multiple: Some(4.into()) });
        let v = replay_derivation(&builtin_script("type5_main").unwrap()).unwrap();
        assert!(matches!(v, Verdict::Pass { multiple: Some(ref k), .. } if *k == BigInt::from(9)), "{v:?}");
        for m in [1, 2, 3, 4] {
            let v = replay_derivation(&composite_reduction(m).unwrap()).unwrap();
            assert!(matches!(v, Verdict::Pass { multiple: Some(ref k), .. } if *k == BigInt::from(m)), "{v:?}");
        }
    }

    #[test]
    fn deleting_the_second_definition_breaks_the_combination() {
        let s = builtin_script("type1_main").unwrap();
        match replay_derivation(&s.without_step(1)).unwrap() {
            Verdict::Fail { step, .. } => assert_eq!(s.without_step(1).steps[step - 1].axiom, Axiom::Combine),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn essential_steps() {
        for name in ["type1_main", "type5_main"] {
            let s = builtin_script(name).unwrap();
            for i in 0..s.steps.len() {
                let v = replay_derivation(&s.without_step(i)).unwrap();
                assert!(!v.passed(), "{name} passes without step {}", i + 1);
            }
        }
        let s = composite_reduction(3).unwrap();
        assert!(!replay_derivation(&s.without_step(0)).unwrap().passed());
    }

    #[test]
    fn wrong_axiom_is_rejected() {
        // the orbit identification is not a consequence of bilinearity
        let v = run("% type 1\n% conclusion pi([O,-Q]) => pi([P0,Q])\nbilinearity : pi([O,-Q]) => pi([P0,Q])\n");
        assert!(matches!(v, Verdict::Fail { step: 1, line: 3, .. }));
        let v = run("% type 1\n% conclusion pi([O,-Q]) => pi([P0,Q])\npushforward-functoriality : pi([O,-Q]) => pi([P0,Q])\n");
        assert!(v.passed());
        // push-forward says nothing on X itself
        let v = run("% type 1\n% conclusion [O,-Q] => [P0,Q]\npushforward-functoriality : [O,-Q] => [P0,Q]\n");
        assert!(!v.passed());
        // a non-torsion point gives no rational equivalence
        let v = run("% type 1\n% conclusion 2*([P,Q] - [O,Q]) => 0\ntorsion-equivalence : 2*([P,Q] - [O,Q]) => 0\n");
        assert!(!v.passed());
    }

    #[test]
    fn stronger_conclusion_fails() {
        let text = BUILTIN_SCRIPTS[0].1.replace("4*pi(z[P,Q]) => 0", "2*pi(z[P,Q]) => 0");
        assert!(!run(&text).passed());
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "% type 1\n% conclusion 0 => 0\n\nbilinearity : [P,Q] => [P,\n";
        assert!(matches!(parse_script("bad", bad), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_script("bad", "% type 1\nfoo : 0 => 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_script("bad", "% type 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_script("bad", "% conclusion [P,Q] => 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_script("bad", "% type 1\n% conclusion 0 => 0\ncombine : pi(pi([P,Q])) => 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_script("bad", "% type 1\n% conclusion 0 => 0\ncombine : pi([P,Q]) => [P,Q]\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_script("bad", "% type 1\ncombine : 0 => 0\n").is_err());
    }

    #[test]
    fn point_syntax() {
        let s = parse_script("t", "% type 5\n% conclusion [2P0 + P, w2(Q)] => [P - P0, -Q - w(Q)]\ncombine : [2P0 + P, w2(Q)] => [P - P0, -Q - w(Q)]\n").unwrap();
        assert_eq!(s.steps[0].lhs, s.steps[0].rhs);
    }
}
