//! Gödel's System T: simply typed terms over `N` with zero, successor and a
//! recursor, evaluated call-by-value on big naturals.
//!
//! `R a f n` has type `s` when `a : s`, `f : N /\ s -> s` and `n : N`, with
//! `R a f 0 = a` and `R a f (n+1) = f (n, R a f n)`.
//!
//! Surface syntax:
//!
//! ```text
//! type := prod ("->" type)?     prod := base ("/\" base)*     base := N | Unit | "(" type ")"
//! term := fun x:type => term | app
//! app  := atom+ | S atom | R atom atom atom | fst atom | snd atom
//! atom := x | NAT | Z | unit | "(" term ")" | "(" term "," term ")"
//! ```
//!
//! Identifiers that are not bound resolve to the prelude: `succ`, `pd`,
//! `add`, `mul`, `double`, `iter` and `ack`.

use crate::syntax::lex::{Cursor, Tok};
use crate::syntax::ParseError;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::rc::Rc;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TType {
    N,
    Unit,
    Prod(Box<TType>, Box<TType>),
    Arrow(Box<TType>, Box<TType>),
}

impl TType {
    pub fn prod(a: TType, b: TType) -> Self {
        TType::Prod(Box::new(a), Box::new(b))
    }
    pub fn arrow(a: TType, b: TType) -> Self {
        TType::Arrow(Box::new(a), Box::new(b))
    }
    /// `N -> ... -> N -> N` with `k` arguments.
    pub fn nat_fn(k: usize) -> Self {
        (0..k).fold(TType::N, |acc, _| TType::arrow(TType::N, acc))
    }
}

impl fmt::Display for TType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &TType, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                TType::N => write!(f, "N"),
                TType::Unit => write!(f, "Unit"),
                TType::Prod(a, b) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(a, 1, f)?;
                    write!(f, " /\\ ")?;
                    go(b, 2, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                TType::Arrow(a, b) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(a, 1, f)?;
                    write!(f, " -> ")?;
                    go(b, 0, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TTerm {
    Var(usize),
    Z,
    S(Box<TTerm>),
    R(Box<TTerm>, Box<TTerm>, Box<TTerm>),
    Lam(TType, Box<TTerm>),
    App(Box<TTerm>, Box<TTerm>),
    Pair(Box<TTerm>, Box<TTerm>),
    Fst(Box<TTerm>),
    Snd(Box<TTerm>),
    UnitVal,
}

impl TTerm {
    pub fn s(t: TTerm) -> Self {
        TTerm::S(Box::new(t))
    }
    pub fn r(a: TTerm, f: TTerm, n: TTerm) -> Self {
        TTerm::R(Box::new(a), Box::new(f), Box::new(n))
    }
    pub fn lam(a: TType, b: TTerm) -> Self {
        TTerm::Lam(a, Box::new(b))
    }
    pub fn app(f: TTerm, x: TTerm) -> Self {
        TTerm::App(Box::new(f), Box::new(x))
    }
    pub fn apps(f: TTerm, xs: impl IntoIterator<Item = TTerm>) -> Self {
        xs.into_iter().fold(f, TTerm::app)
    }
    pub fn pair(a: TTerm, b: TTerm) -> Self {
        TTerm::Pair(Box::new(a), Box::new(b))
    }
    pub fn fst(t: TTerm) -> Self {
        TTerm::Fst(Box::new(t))
    }
    pub fn snd(t: TTerm) -> Self {
        TTerm::Snd(Box::new(t))
    }

    /// `S^n Z`.
    pub fn numeral(n: u64) -> Self {
        (0..n).fold(TTerm::Z, |acc, _| TTerm::s(acc))
    }
}

impl fmt::Display for TTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &TTerm, depth: usize, arg: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let open = |f: &mut fmt::Formatter<'_>| if arg { write!(f, "(") } else { Ok(()) };
            let close = |f: &mut fmt::Formatter<'_>| if arg { write!(f, ")") } else { Ok(()) };
            match t {
                TTerm::Var(i) if *i < depth => write!(f, "x{}", depth - 1 - i),
                TTerm::Var(i) => write!(f, "_free{}", i - depth),
                TTerm::Z => write!(f, "Z"),
                TTerm::UnitVal => write!(f, "unit"),
                TTerm::S(x) => {
                    open(f)?;
                    write!(f, "S ")?;
                    go(x, depth, true, f)?;
                    close(f)
                }
                TTerm::R(a, s, n) => {
                    open(f)?;
                    write!(f, "R ")?;
                    go(a, depth, true, f)?;
                    write!(f, " ")?;
                    go(s, depth, true, f)?;
                    write!(f, " ")?;
                    go(n, depth, true, f)?;
                    close(f)
                }
                TTerm::Fst(x) | TTerm::Snd(x) => {
                    open(f)?;
                    write!(f, "{} ", if matches!(t, TTerm::Fst(_)) { "fst" } else { "snd" })?;
                    go(x, depth, true, f)?;
                    close(f)
                }
                TTerm::Pair(a, b) => {
                    write!(f, "(")?;
                    go(a, depth, false, f)?;
                    write!(f, ", ")?;
                    go(b, depth, false, f)?;
                    write!(f, ")")
                }
                TTerm::Lam(a, b) => {
                    open(f)?;
                    write!(f, "fun x{depth}:{a} => ")?;
                    go(b, depth + 1, false, f)?;
                    close(f)
                }
                TTerm::App(g, x) => {
                    open(f)?;
                    match &**g {
                        TTerm::App(..) => go(g, depth, false, f)?,
                        _ => go(g, depth, true, f)?,
                    }
                    write!(f, " ")?;
                    go(x, depth, true, f)?;
                    close(f)
                }
            }
        }
        go(self, 0, false, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unbound variable {0}")]
    Unbound(usize),
    #[error("ill-typed {term}: {msg}")]
    Type { term: String, msg: String },
    #[error("fuel exhausted")]
    Fuel,
    #[error("result is not a natural number")]
    NotNat,
    #[error("arity mismatch: {0}")]
    Arity(String),
}

fn type_err(t: &TTerm, msg: impl Into<String>) -> TError {
    TError::Type { term: t.to_string(), msg: msg.into() }
}

pub fn type_of(env: &mut Vec<TType>, t: &TTerm) -> Result<TType, TError> {
    Ok(match t {
        TTerm::Var(i) => env.iter().rev().nth(*i).cloned().ok_or(TError::Unbound(*i))?,
        TTerm::Z => TType::N,
        TTerm::UnitVal => TType::Unit,
        TTerm::S(x) => match type_of(env, x)? {
            TType::N => TType::N,
            other => return Err(type_err(t, format!("successor of {other}"))),
        },
        TTerm::R(a, f, n) => {
            let s = type_of(env, a)?;
            let want = TType::arrow(TType::prod(TType::N, s.clone()), s.clone());
            let got = type_of(env, f)?;
            if got != want {
                return Err(type_err(t, format!("step has type {got}, expected {want}")));
            }
            if type_of(env, n)? != TType::N {
                return Err(type_err(t, "recursion argument is not N"));
            }
            s
        }
        TTerm::Lam(a, b) => {
            env.push(a.clone());
            let r = type_of(env, b);
            env.pop();
            TType::arrow(a.clone(), r?)
        }
        TTerm::App(f, x) => match type_of(env, f)? {
            TType::Arrow(a, b) => {
                let xt = type_of(env, x)?;
                if xt != *a {
                    return Err(type_err(t, format!("argument has type {xt}, expected {a}")));
                }
                *b
            }
            other => return Err(type_err(t, format!("applied a term of type {other}"))),
        },
        TTerm::Pair(a, b) => TType::prod(type_of(env, a)?, type_of(env, b)?),
        TTerm::Fst(x) | TTerm::Snd(x) => match type_of(env, x)? {
            TType::Prod(a, b) => {
                if matches!(t, TTerm::Fst(_)) {
                    *a
                } else {
                    *b
                }
            }
            other => return Err(type_err(t, format!("projection from {other}"))),
        },
    })
}

pub fn typecheck_closed(t: &TTerm) -> Result<TType, TError> {
    type_of(&mut vec![], t)
}

const PRELUDE: &[(&str, &str)] = &[
    ("succ", "fun n:N => S n"),
    ("pd", "fun n:N => R 0 (fun p:N /\\ N => fst p) n"),
    ("add", "fun x:N => fun y:N => R x (fun p:N /\\ N => S (snd p)) y"),
    ("mul", "fun x:N => fun y:N => R 0 (fun p:N /\\ N => add (snd p) x) y"),
    ("double", "fun n:N => R Z (fun p:N /\\ N => S (S (snd p))) n"),
    ("iter", "fun f:N -> N => fun n:N => R (f 1) (fun p:N /\\ N => f (snd p)) n"),
    ("ack", "fun m:N => R succ (fun q:N /\\ (N -> N) => fun n:N => iter (snd q) n) m"),
];

fn prelude() -> &'static Vec<(String, TTerm)> {
    static P: OnceLock<Vec<(String, TTerm)>> = OnceLock::new();
    P.get_or_init(|| {
        let mut defs: Vec<(String, TTerm)> = Vec::new();
        for (name, src) in PRELUDE {
            let t = parse_with(src, &defs).expect("prelude parses");
            typecheck_closed(&t).expect("prelude typechecks");
            defs.push((name.to_string(), t));
        }
        defs
    })
}

/// A prelude term by name.
pub fn named(name: &str) -> Option<TTerm> {
    prelude().iter().find(|(n, _)| n == name).map(|(_, t)| t.clone())
}

pub fn prelude_names() -> Vec<&'static str> {
    PRELUDE.iter().map(|(n, _)| *n).collect()
}

/// The doubling function by primitive recursion.
pub fn double_term() -> TTerm {
    named("double").expect("prelude entry")
}

/// Ackermann's function via recursion at type `N -> N`.
pub fn ackermann_term() -> TTerm {
    named("ack").expect("prelude entry")
}

const T_KEYWORDS: &[&str] = &["fun", "fst", "snd", "unit", "Z", "S", "R", "N", "Unit"];

pub fn parse_ttype(src: &str) -> Result<TType, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = ttype(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

pub(crate) fn ttype(cur: &mut Cursor) -> Result<TType, ParseError> {
    let mut parts = vec![tbase(cur)?];
    while cur.eat(&Tok::Wedge) {
        parts.push(tbase(cur)?);
    }
    let lhs = parts.into_iter().reduce(TType::prod).expect("one factor");
    if cur.eat(&Tok::Arrow) {
        Ok(TType::arrow(lhs, ttype(cur)?))
    } else {
        Ok(lhs)
    }
}

fn tbase(cur: &mut Cursor) -> Result<TType, ParseError> {
    if cur.eat_kw("N") {
        Ok(TType::N)
    } else if cur.eat_kw("Unit") {
        Ok(TType::Unit)
    } else if cur.eat(&Tok::LParen) {
        let t = ttype(cur)?;
        cur.expect(&Tok::RParen)?;
        Ok(t)
    } else {
        Err(cur.unexpected("a type"))
    }
}

/// Parses a closed term; free identifiers resolve to the prelude.
pub fn parse_tterm(src: &str) -> Result<TTerm, ParseError> {
    parse_with(src, prelude())
}

fn parse_with(src: &str, defs: &[(String, TTerm)]) -> Result<TTerm, ParseError> {
    let mut cur = Cursor::new(src)?;
    let mut scope = Vec::new();
    let t = tterm(&mut cur, &mut scope, defs)?;
    cur.finish()?;
    Ok(t)
}

fn tterm(cur: &mut Cursor, scope: &mut Vec<String>, defs: &[(String, TTerm)]) -> Result<TTerm, ParseError> {
    if cur.eat_kw("fun") {
        let pos = cur.pos();
        let x = cur.ident()?;
        if T_KEYWORDS.contains(&x.as_str()) {
            return Err(ParseError::new(pos, format!("'{x}' is a keyword")));
        }
        cur.expect(&Tok::Colon)?;
        let a = ttype(cur)?;
        cur.expect(&Tok::FatArrow)?;
        scope.push(x);
        let body = tterm(cur, scope, defs);
        scope.pop();
        return Ok(TTerm::lam(a, body?));
    }
    let mut head = if cur.eat_kw("S") {
        TTerm::s(tatom(cur, scope, defs)?)
    } else if cur.eat_kw("R") {
        let a = tatom(cur, scope, defs)?;
        let f = tatom(cur, scope, defs)?;
        let n = tatom(cur, scope, defs)?;
        TTerm::r(a, f, n)
    } else if cur.eat_kw("fst") {
        TTerm::fst(tatom(cur, scope, defs)?)
    } else if cur.eat_kw("snd") {
        TTerm::snd(tatom(cur, scope, defs)?)
    } else {
        tatom(cur, scope, defs)?
    };
    while starts_atom(cur) {
        head = TTerm::app(head, tatom(cur, scope, defs)?);
    }
    Ok(head)
}

fn starts_atom(cur: &Cursor) -> bool {
    match cur.peek() {
        Tok::Nat(_) | Tok::LParen => true,
        Tok::Ident(s) => !matches!(s.as_str(), "fun" | "S" | "R" | "fst" | "snd" | "N" | "Unit"),
        _ => false,
    }
}

fn tatom(cur: &mut Cursor, scope: &mut Vec<String>, defs: &[(String, TTerm)]) -> Result<TTerm, ParseError> {
    let pos = cur.pos();
    match cur.peek().clone() {
        Tok::Nat(n) => {
            cur.bump();
            Ok(TTerm::numeral(n))
        }
        Tok::LParen => {
            cur.bump();
            let a = tterm(cur, scope, defs)?;
            if cur.eat(&Tok::Comma) {
                let b = tterm(cur, scope, defs)?;
                cur.expect(&Tok::RParen)?;
                Ok(TTerm::pair(a, b))
            } else {
                cur.expect(&Tok::RParen)?;
                Ok(a)
            }
        }
        Tok::Ident(s) if s == "Z" => {
            cur.bump();
            Ok(TTerm::Z)
        }
        Tok::Ident(s) if s == "unit" => {
            cur.bump();
            Ok(TTerm::UnitVal)
        }
        Tok::Ident(s) if !T_KEYWORDS.contains(&s.as_str()) => {
            cur.bump();
            if let Some(k) = scope.iter().rev().position(|v| *v == s) {
                Ok(TTerm::Var(k))
            } else if let Some((_, t)) = defs.iter().find(|(n, _)| *n == s) {
                Ok(t.clone())
            } else {
                Err(ParseError::new(pos, format!("unknown identifier '{s}'")))
            }
        }
        _ => Err(cur.unexpected("a term")),
    }
}

/// Runtime values.
#[derive(Clone, Debug)]
pub enum TVal {
    Nat(BigUint),
    Unit,
    Pair(Rc<TVal>, Rc<TVal>),
    Closure(Rc<Vec<TVal>>, Rc<TTerm>),
}

impl TVal {
    pub fn as_nat(&self) -> Option<&BigUint> {
        match self {
            TVal::Nat(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for TVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TVal::Nat(n) => write!(f, "{n}"),
            TVal::Unit => write!(f, "unit"),
            TVal::Pair(a, b) => write!(f, "({a}, {b})"),
            TVal::Closure(..) => write!(f, "<fun>"),
        }
    }
}

/// Call-by-value evaluator with a step budget.
pub struct Machine {
    pub fuel: u64,
}

impl Machine {
    pub fn new(fuel: u64) -> Self {
        Machine { fuel }
    }

    fn tick(&mut self) -> Result<(), TError> {
        if self.fuel == 0 {
            return Err(TError::Fuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    pub fn eval(&mut self, env: &[TVal], t: &TTerm) -> Result<TVal, TError> {
        self.tick()?;
        Ok(match t {
            TTerm::Var(i) => env.iter().rev().nth(*i).cloned().ok_or(TError::Unbound(*i))?,
            TTerm::Z => TVal::Nat(BigUint::zero()),
            TTerm::UnitVal => TVal::Unit,
            TTerm::S(x) => match self.eval(env, x)? {
                TVal::Nat(n) => TVal::Nat(n + 1u8),
                _ => return Err(TError::NotNat),
            },
            TTerm::R(a, f, n) => {
                let base = self.eval(env, a)?;
                let step = self.eval(env, f)?;
                let TVal::Nat(k) = self.eval(env, n)? else { return Err(TError::NotNat) };
                let mut acc = base;
                let mut i = BigUint::zero();
                while i < k {
                    let arg = TVal::Pair(Rc::new(TVal::Nat(i.clone())), Rc::new(acc));
                    acc = self.apply(&step, arg)?;
                    i += 1u8;
                }
                acc
            }
            TTerm::Lam(_, b) => TVal::Closure(Rc::new(env.to_vec()), Rc::new((**b).clone())),
            TTerm::App(f, x) => {
                let fv = self.eval(env, f)?;
                let xv = self.eval(env, x)?;
                self.apply(&fv, xv)?
            }
            TTerm::Pair(a, b) => TVal::Pair(Rc::new(self.eval(env, a)?), Rc::new(self.eval(env, b)?)),
            TTerm::Fst(x) | TTerm::Snd(x) => match self.eval(env, x)? {
                TVal::Pair(a, b) => (*if matches!(t, TTerm::Fst(_)) { a } else { b }).clone(),
                _ => return Err(type_err(t, "projection of a non-pair")),
            },
        })
    }

    pub fn apply(&mut self, f: &TVal, x: TVal) -> Result<TVal, TError> {
        match f {
            TVal::Closure(env, body) => {
                let mut e = (**env).clone();
                e.push(x);
                self.eval(&e, body)
            }
            _ => Err(TError::Type { term: format!("{f:?}"), msg: "applied a non-function".into() }),
        }
    }
}

/// Evaluates a closed term of type `N`.
pub fn eval_nat(t: &TTerm, fuel: u64) -> Result<BigUint, TError> {
    match typecheck_closed(t)? {
        TType::N => {}
        other => return Err(type_err(t, format!("has type {other}, expected N"))),
    }
    match Machine::new(fuel).eval(&[], t)? {
        TVal::Nat(n) => Ok(n),
        _ => Err(TError::NotNat),
    }
}

/// Applies a closed `N -> ... -> N` term to numerals and evaluates.
pub fn apply_nat(f: &TTerm, args: &[u64], fuel: u64) -> Result<BigUint, TError> {
    eval_nat(&TTerm::apps(f.clone(), args.iter().map(|&n| TTerm::numeral(n))), fuel)
}

/// Whether `f` agrees with `native` on every argument tuple.
pub fn check_representation(
    f: &TTerm,
    native: impl Fn(&[u64]) -> BigUint,
    range: &[Vec<u64>],
    fuel: u64,
) -> Result<bool, TError> {
    for args in range {
        if apply_nat(f, args, fuel)? != native(args) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primitive recursive schemata. Recursion is on the last argument:
/// `f(xs, 0) = g(xs)` and `f(xs, n+1) = h(xs, n, f(xs, n))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimRecDef {
    /// The constant zero of the given arity.
    Zero(usize),
    Succ,
    /// Projection onto argument `i` of `k`.
    Proj(usize, usize),
    Compose(Box<PrimRecDef>, Vec<PrimRecDef>),
    PrimRec(Box<PrimRecDef>, Box<PrimRecDef>),
}

impl PrimRecDef {
    pub fn compose(f: PrimRecDef, gs: Vec<PrimRecDef>) -> Self {
        PrimRecDef::Compose(Box::new(f), gs)
    }
    pub fn primrec(g: PrimRecDef, h: PrimRecDef) -> Self {
        PrimRecDef::PrimRec(Box::new(g), Box::new(h))
    }

    pub fn arity(&self) -> Result<usize, TError> {
        match self {
            PrimRecDef::Zero(k) => Ok(*k),
            PrimRecDef::Succ => Ok(1),
            PrimRecDef::Proj(i, k) => {
                if i < k {
                    Ok(*k)
                } else {
                    Err(TError::Arity(format!("projection {i} of {k}")))
                }
            }
            PrimRecDef::Compose(f, gs) => {
                let fa = f.arity()?;
                if fa != gs.len() {
                    return Err(TError::Arity(format!("outer function takes {fa} arguments, given {}", gs.len())));
                }
                let mut m = None;
                for g in gs {
                    let ga = g.arity()?;
                    if *m.get_or_insert(ga) != ga {
                        return Err(TError::Arity("inner functions disagree on arity".into()));
                    }
                }
                m.ok_or_else(|| TError::Arity("composition with no inner functions".into()))
            }
            PrimRecDef::PrimRec(g, h) => {
                let k = g.arity()?;
                let ha = h.arity()?;
                if ha != k + 2 {
                    return Err(TError::Arity(format!("step takes {ha} arguments, expected {}", k + 2)));
                }
                Ok(k + 1)
            }
        }
    }

    /// Direct interpretation on big naturals.
    pub fn eval(&self, args: &[BigUint]) -> BigUint {
        match self {
            PrimRecDef::Zero(_) => BigUint::zero(),
            PrimRecDef::Succ => &args[0] + 1u8,
            PrimRecDef::Proj(i, _) => args[*i].clone(),
            PrimRecDef::Compose(f, gs) => {
                let inner: Vec<BigUint> = gs.iter().map(|g| g.eval(args)).collect();
                f.eval(&inner)
            }
            PrimRecDef::PrimRec(g, h) => {
                let (xs, n) = args.split_at(args.len() - 1);
                let n = n[0].to_u64().expect("recursion argument fits in 64 bits");
                let mut acc = g.eval(xs);
                for i in 0..n {
                    let mut a = xs.to_vec();
                    a.push(BigUint::from(i));
                    a.push(acc);
                    acc = h.eval(&a);
                }
                acc
            }
        }
    }

    pub fn addition() -> Self {
        PrimRecDef::primrec(PrimRecDef::Proj(0, 1), PrimRecDef::compose(PrimRecDef::Succ, vec![PrimRecDef::Proj(2, 3)]))
    }

    pub fn predecessor() -> Self {
        PrimRecDef::primrec(PrimRecDef::Zero(0), PrimRecDef::Proj(0, 2))
    }

    pub fn multiplication() -> Self {
        PrimRecDef::primrec(
            PrimRecDef::Zero(1),
            PrimRecDef::compose(PrimRecDef::addition(), vec![PrimRecDef::Proj(2, 3), PrimRecDef::Proj(0, 3)]),
        )
    }
}

fn lams(k: usize, body: TTerm) -> TTerm {
    (0..k).fold(body, |acc, _| TTerm::lam(TType::N, acc))
}

/// A curried closed term representing the schema.
pub fn compile_primrec(d: &PrimRecDef) -> Result<TTerm, TError> {
    let k = d.arity()?;
    Ok(match d {
        PrimRecDef::Zero(_) => lams(k, TTerm::Z),
        PrimRecDef::Succ => lams(1, TTerm::s(TTerm::Var(0))),
        PrimRecDef::Proj(i, _) => lams(k, TTerm::Var(k - 1 - i)),
        PrimRecDef::Compose(f, gs) => {
            let args = |g: TTerm| TTerm::apps(g, (0..k).map(|j| TTerm::Var(k - 1 - j)));
            let inner = gs.iter().map(|g| compile_primrec(g).map(args)).collect::<Result<Vec<_>, _>>()?;
            lams(k, TTerm::apps(compile_primrec(f)?, inner))
        }
        PrimRecDef::PrimRec(g, h) => {
            let m = k - 1;
            let base = TTerm::apps(compile_primrec(g)?, (0..m).map(|j| TTerm::Var(m - j)));
            let step_body = TTerm::apps(
                compile_primrec(h)?,
                (0..m).map(|j| TTerm::Var(m - j + 1)).chain([TTerm::fst(TTerm::Var(0)), TTerm::snd(TTerm::Var(0))]),
            );
            let step = TTerm::lam(TType::prod(TType::N, TType::N), step_body);
            lams(k, TTerm::r(base, step, TTerm::Var(0)))
        }
    })
}

/// Reference Ackermann function.
pub fn ackermann(m: u64, n: u64) -> BigUint {
    match (m, n) {
        (0, n) => BigUint::from(n + 1),
        (m, 0) => ackermann(m - 1, 1),
        (m, n) => {
            let inner = ackermann(m, n - 1).to_u64().expect("small Ackermann value");
            ackermann(m - 1, inner)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        assert_eq!(eval_nat(&parse_tterm("S (S Z)").unwrap(), 100).unwrap(), BigUint::from(2u8));
        assert_eq!(apply_nat(&double_term(), &[3], 10_000).unwrap(), BigUint::from(6u8));
        assert_eq!(apply_nat(&ackermann_term(), &[2, 3], 1_000_000).unwrap(), BigUint::from(9u8));
        assert_eq!(eval_nat(&parse_tterm("ack 3 3").unwrap(), 10_000_000).unwrap(), BigUint::from(61u8));
    }

    #[test]
    fn ackermann_oracle() {
        assert_eq!(ackermann(0, 5), BigUint::from(6u8));
        assert_eq!(ackermann(1, 1), BigUint::from(3u8));
        assert_eq!(ackermann(3, 3), BigUint::from(61u8));
    }

    #[test]
    fn schemata() {
        let add = compile_primrec(&PrimRecDef::addition()).unwrap();
        assert_eq!(typecheck_closed(&add).unwrap(), TType::nat_fn(2));
        assert_eq!(apply_nat(&add, &[2, 3], 10_000).unwrap(), BigUint::from(5u8));
        let pd = compile_primrec(&PrimRecDef::predecessor()).unwrap();
        assert_eq!(apply_nat(&pd, &[0], 1000).unwrap(), BigUint::zero());
        assert_eq!(apply_nat(&pd, &[4], 1000).unwrap(), BigUint::from(3u8));
        let mul = compile_primrec(&PrimRecDef::multiplication()).unwrap();
        assert_eq!(apply_nat(&mul, &[3, 4], 100_000).unwrap(), BigUint::from(12u8));
        let bad = PrimRecDef::primrec(PrimRecDef::Zero(1), PrimRecDef::Succ);
        assert!(matches!(compile_primrec(&bad), Err(TError::Arity(_))));
    }

    #[test]
    fn types_and_errors() {
        assert_eq!(parse_ttype("N /\\ N -> N").unwrap(), TType::arrow(TType::prod(TType::N, TType::N), TType::N));
        assert!(matches!(eval_nat(&parse_tterm("S unit").unwrap(), 100), Err(TError::Type { .. })));
        assert!(matches!(eval_nat(&parse_tterm("ack 3 3").unwrap(), 100), Err(TError::Fuel)));
        assert!(parse_tterm("nope 1").is_err());
    }

    #[test]
    fn display_reparses_structurally() {
        let t = ackermann_term();
        let shown = t.to_string();
        assert_eq!(parse_tterm(&shown).unwrap(), t);
    }
}
