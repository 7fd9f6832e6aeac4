//! Arithmetic sentences and their realizability in worlds with natural
//! numbers: coded register-machine programs and System T values.
//!
//! Falsity is `S 0 = 0`, `~A` is `A -> S 0 = 0` and `A \/ B` is
//! `exists z:N. (z = 0 -> A) /\ (z != 0 -> B)`. An equation is realized by
//! the unit value when it holds, a conjunction by a pair, an implication by a
//! function on realizers, `forall x` by a function on values and `exists x`
//! by a pair of a witness and a realizer.
//!
//! Quantifiers over `N` range over `0..=nat_bound`; other types range over
//! supplied samples. Realizers of an antecedent are drawn from a bounded
//! candidate set.

use super::RealizeError;
use crate::recworld::{self, apply_checked, const_code, run, Code, Instr, Nat, Outcome, RecError, RecWorld};
use crate::syntax::lex::{Cursor, Tok};
use crate::syntax::ParseError;
use crate::systemt::{self, parse_tterm, typecheck_closed, Machine, TError, TTerm, TType, TVal};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ATerm {
    Var(String),
    Num(u64),
    Succ(Box<ATerm>),
    Add(Box<ATerm>, Box<ATerm>),
    Mul(Box<ATerm>, Box<ATerm>),
    App(Box<ATerm>, Box<ATerm>),
}

impl ATerm {
    pub fn var(x: &str) -> Self {
        ATerm::Var(x.to_string())
    }
    pub fn succ(t: ATerm) -> Self {
        ATerm::Succ(Box::new(t))
    }
    pub fn add(a: ATerm, b: ATerm) -> Self {
        ATerm::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: ATerm, b: ATerm) -> Self {
        ATerm::Mul(Box::new(a), Box::new(b))
    }
    pub fn app(f: ATerm, x: ATerm) -> Self {
        ATerm::App(Box::new(f), Box::new(x))
    }

    fn free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            ATerm::Var(x) => {
                out.insert(x.clone());
            }
            ATerm::Num(_) => {}
            ATerm::Succ(t) => t.free_vars(out),
            ATerm::Add(a, b) | ATerm::Mul(a, b) | ATerm::App(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }
}

impl fmt::Display for ATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ATerm::Var(x) => write!(f, "{x}"),
            ATerm::Num(n) => write!(f, "{n}"),
            ATerm::Succ(t) => write!(f, "S({t})"),
            ATerm::Add(a, b) => write!(f, "({a} + {b})"),
            ATerm::Mul(a, b) => write!(f, "({a} * {b})"),
            ATerm::App(a, b) => write!(f, "{a}({b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sentence {
    Eq(ATerm, ATerm),
    And(Box<Sentence>, Box<Sentence>),
    Imp(Box<Sentence>, Box<Sentence>),
    Forall(String, TType, Box<Sentence>),
    Exists(String, TType, Box<Sentence>),
}

impl Sentence {
    pub fn eq(a: ATerm, b: ATerm) -> Self {
        Sentence::Eq(a, b)
    }
    pub fn top() -> Self {
        Sentence::Eq(ATerm::Num(0), ATerm::Num(0))
    }
    pub fn bot() -> Self {
        Sentence::Eq(ATerm::Num(1), ATerm::Num(0))
    }
    pub fn and(a: Sentence, b: Sentence) -> Self {
        Sentence::And(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Sentence, b: Sentence) -> Self {
        Sentence::Imp(Box::new(a), Box::new(b))
    }
    pub fn not(a: Sentence) -> Self {
        Sentence::imp(a, Sentence::bot())
    }
    pub fn forall(x: &str, ty: TType, a: Sentence) -> Self {
        Sentence::Forall(x.to_string(), ty, Box::new(a))
    }
    pub fn exists(x: &str, ty: TType, a: Sentence) -> Self {
        Sentence::Exists(x.to_string(), ty, Box::new(a))
    }

    /// `exists z:N. (z = 0 -> a) /\ (z != 0 -> b)` with `z` fresh.
    pub fn or(a: Sentence, b: Sentence) -> Self {
        let mut used = a.free_vars();
        used.extend(b.free_vars());
        let mut z = String::from("z");
        while used.contains(&z) {
            z.push('\'');
        }
        let is_zero = Sentence::eq(ATerm::Var(z.clone()), ATerm::Num(0));
        Sentence::exists(&z, TType::N, Sentence::and(Sentence::imp(is_zero.clone(), a), Sentence::imp(Sentence::not(is_zero), b)))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Sentence::Eq(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            Sentence::And(a, b) | Sentence::Imp(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Sentence::Forall(x, _, a) | Sentence::Exists(x, _, a) => {
                let mut inner = BTreeSet::new();
                a.collect_free(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_exists(&self) -> bool {
        match self {
            Sentence::Eq(..) => false,
            Sentence::And(a, b) | Sentence::Imp(a, b) => a.has_exists() || b.has_exists(),
            Sentence::Forall(_, _, a) => a.has_exists(),
            Sentence::Exists(..) => true,
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sentence::Eq(a, b) => write!(f, "{a} = {b}"),
            Sentence::And(a, b) => write!(f, "({a} /\\ {b})"),
            Sentence::Imp(a, b) => write!(f, "({a} -> {b})"),
            Sentence::Forall(x, t, a) => write!(f, "(forall {x}:{t}. {a})"),
            Sentence::Exists(x, t, a) => write!(f, "(exists {x}:{t}. {a})"),
        }
    }
}

const S_KEYWORDS: &[&str] = &["forall", "exists", "S", "T", "F"];

/// Parses a sentence.
///
/// ```text
/// s    := forall x:type. s | exists x:type. s | disj ("->" s)?
/// disj := conj ("\/" conj)*     conj := un ("/\" un)*
/// un   := "~" un | T | F | "(" s ")" | t "=" t | t "!=" t
/// t    := m ("+" m)*            m := app ("*" app)*
/// app  := S atom | atom atom*   atom := NAT | x | "(" t ")"
/// ```
pub fn parse_sentence(src: &str) -> Result<Sentence, ParseError> {
    let mut cur = Cursor::new(src)?;
    let s = sentence(&mut cur)?;
    cur.finish()?;
    Ok(s)
}

fn sentence(cur: &mut Cursor) -> Result<Sentence, ParseError> {
    if let Some(q) = quantifier(cur)? {
        return Ok(q);
    }
    let lhs = disj(cur)?;
    if cur.eat(&Tok::Arrow) {
        Ok(Sentence::imp(lhs, sentence(cur)?))
    } else {
        Ok(lhs)
    }
}

fn quantifier(cur: &mut Cursor) -> Result<Option<Sentence>, ParseError> {
    let universal = if cur.eat_kw("forall") {
        true
    } else if cur.eat_kw("exists") {
        false
    } else {
        return Ok(None);
    };
    let x = binder(cur)?;
    cur.expect(&Tok::Colon)?;
    let ty = systemt::ttype(cur)?;
    cur.expect(&Tok::Dot)?;
    let body = sentence(cur)?;
    Ok(Some(if universal { Sentence::forall(&x, ty, body) } else { Sentence::exists(&x, ty, body) }))
}

fn binder(cur: &mut Cursor) -> Result<String, ParseError> {
    let pos = cur.pos();
    let x = cur.ident()?;
    if S_KEYWORDS.contains(&x.as_str()) {
        return Err(ParseError::new(pos, format!("'{x}' is a keyword")));
    }
    Ok(x)
}

fn disj(cur: &mut Cursor) -> Result<Sentence, ParseError> {
    let mut acc = conj(cur)?;
    while cur.eat(&Tok::Vee) {
        acc = Sentence::or(acc, conj(cur)?);
    }
    Ok(acc)
}

fn conj(cur: &mut Cursor) -> Result<Sentence, ParseError> {
    let mut acc = unary(cur)?;
    while cur.eat(&Tok::Wedge) {
        acc = Sentence::and(acc, unary(cur)?);
    }
    Ok(acc)
}

fn unary(cur: &mut Cursor) -> Result<Sentence, ParseError> {
    if cur.eat(&Tok::Tilde) {
        return Ok(Sentence::not(unary(cur)?));
    }
    if cur.eat_kw("T") {
        return Ok(Sentence::top());
    }
    if cur.eat_kw("F") {
        return Ok(Sentence::bot());
    }
    if let Some(q) = quantifier(cur)? {
        return Ok(q);
    }
    if *cur.peek() == Tok::LParen {
        let mark = cur.mark();
        cur.bump();
        if let Ok(s) = sentence(cur) {
            if cur.eat(&Tok::RParen) {
                return Ok(s);
            }
        }
        cur.reset(mark);
    }
    let lhs = term(cur)?;
    if cur.eat(&Tok::Eq) {
        Ok(Sentence::eq(lhs, term(cur)?))
    } else if cur.eat(&Tok::Neq) {
        Ok(Sentence::not(Sentence::eq(lhs, term(cur)?)))
    } else {
        Err(cur.unexpected("'=' or '!='"))
    }
}

fn term(cur: &mut Cursor) -> Result<ATerm, ParseError> {
    let mut acc = product(cur)?;
    while cur.eat(&Tok::Plus) {
        acc = ATerm::add(acc, product(cur)?);
    }
    Ok(acc)
}

fn product(cur: &mut Cursor) -> Result<ATerm, ParseError> {
    let mut acc = application(cur)?;
    while cur.eat(&Tok::Star) {
        acc = ATerm::mul(acc, application(cur)?);
    }
    Ok(acc)
}

fn application(cur: &mut Cursor) -> Result<ATerm, ParseError> {
    if cur.eat_kw("S") {
        return Ok(ATerm::succ(term_atom(cur)?));
    }
    let mut acc = term_atom(cur)?;
    while matches!(cur.peek(), Tok::Nat(_) | Tok::LParen) || matches!(cur.peek(), Tok::Ident(s) if !S_KEYWORDS.contains(&s.as_str())) {
        acc = ATerm::app(acc, term_atom(cur)?);
    }
    Ok(acc)
}

fn term_atom(cur: &mut Cursor) -> Result<ATerm, ParseError> {
    match cur.peek().clone() {
        Tok::Nat(n) => {
            cur.bump();
            Ok(ATerm::Num(n))
        }
        Tok::LParen => {
            cur.bump();
            let t = term(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        Tok::Ident(_) => Ok(ATerm::Var(binder(cur)?)),
        _ => Err(cur.unexpected("a term")),
    }
}

/// A world with natural numbers in which realizers live.
pub trait NnoWorld {
    type Val: Clone + fmt::Debug;

    fn numeral(&self, n: &BigUint) -> Self::Val;
    /// The natural a value denotes; failure means the value is not a numeral.
    fn read_nat(&self, v: &Self::Val) -> Result<BigUint, RealizeError>;
    fn unit(&self) -> Self::Val;
    fn pair(&self, a: &Self::Val, b: &Self::Val) -> Self::Val;
    fn fst(&self, v: &Self::Val) -> Result<Self::Val, RealizeError>;
    fn snd(&self, v: &Self::Val) -> Result<Self::Val, RealizeError>;
    fn apply(&self, f: &Self::Val, x: &Self::Val) -> Result<Self::Val, RealizeError>;
    /// The function ignoring its argument and returning `v`.
    fn constant(&self, v: &Self::Val) -> Self::Val;
    /// `n ↦ fst (r·n)`.
    fn first_component(&self, r: &Self::Val) -> Self::Val;
    /// `n ↦` the `n`-fold iterate: `0 ↦ base` and `k+1 ↦ step·k·(value at k)`.
    fn induction(&self, base: &Self::Val, step: &Self::Val) -> Self::Val;

    fn nat(&self, n: u64) -> Self::Val {
        self.numeral(&BigUint::from(n))
    }
}

fn rec_err(e: RecError) -> RealizeError {
    match e {
        RecError::Fuel => RealizeError::Undetermined("fuel exhausted".into()),
        other => RealizeError::World(other.to_string()),
    }
}

impl NnoWorld for RecWorld {
    type Val = Nat;

    fn numeral(&self, n: &BigUint) -> Nat {
        Nat::from_big(n.clone())
    }
    fn read_nat(&self, v: &Nat) -> Result<BigUint, RealizeError> {
        v.as_big().cloned().ok_or_else(|| RealizeError::Readback("value beyond the arithmetic range".into()))
    }
    fn unit(&self) -> Nat {
        Nat::zero()
    }
    fn pair(&self, a: &Nat, b: &Nat) -> Nat {
        recworld::pair(a, b)
    }
    fn fst(&self, v: &Nat) -> Result<Nat, RealizeError> {
        recworld::unpair(v).map(|(a, _)| a).map_err(rec_err)
    }
    fn snd(&self, v: &Nat) -> Result<Nat, RealizeError> {
        recworld::unpair(v).map(|(_, b)| b).map_err(rec_err)
    }
    fn apply(&self, f: &Nat, x: &Nat) -> Result<Nat, RealizeError> {
        apply_checked(&Code(f.clone()), x, self.fuel).map_err(rec_err)
    }
    fn constant(&self, v: &Nat) -> Nat {
        const_code(v).0
    }
    fn first_component(&self, r: &Nat) -> Nat {
        Code::from_program(&[Instr::Const(1, r.clone()), Instr::Call(0, 1, 0), Instr::Unpair(0, 0, 1)]).0
    }
    fn induction(&self, base: &Nat, step: &Nat) -> Nat {
        Code::from_program(&[
            Instr::Mov(1, 0),
            Instr::Const(0, base.clone()),
            Instr::Const(2, Nat::zero()),
            Instr::Const(3, step.clone()),
            Instr::DecJz(1, 9),
            Instr::Call(4, 3, 2),
            Instr::Call(0, 4, 0),
            Instr::Inc(2),
            Instr::Jmp(4),
        ])
        .0
    }
}

/// System T values evaluated with a step budget.
#[derive(Clone, Debug)]
pub struct TWorld {
    pub fuel: u64,
}

impl Default for TWorld {
    fn default() -> Self {
        TWorld { fuel: 1_000_000 }
    }
}

fn t_err(e: TError) -> RealizeError {
    match e {
        TError::Fuel => RealizeError::Undetermined("fuel exhausted".into()),
        other => RealizeError::World(other.to_string()),
    }
}

impl TWorld {
    /// Evaluates a closed, well-typed term.
    pub fn value(&self, src: &str) -> Result<TVal, RealizeError> {
        let t = parse_tterm(src).map_err(|e| RealizeError::World(e.to_string()))?;
        typecheck_closed(&t).map_err(t_err)?;
        Machine::new(self.fuel).eval(&[], &t).map_err(t_err)
    }

    fn closure(env: Vec<TVal>, body: TTerm) -> TVal {
        TVal::Closure(Rc::new(env), Rc::new(body))
    }
}

impl NnoWorld for TWorld {
    type Val = TVal;

    fn numeral(&self, n: &BigUint) -> TVal {
        TVal::Nat(n.clone())
    }
    fn read_nat(&self, v: &TVal) -> Result<BigUint, RealizeError> {
        v.as_nat().cloned().ok_or_else(|| RealizeError::Readback(format!("{v:?} is not a numeral")))
    }
    fn unit(&self) -> TVal {
        TVal::Unit
    }
    fn pair(&self, a: &TVal, b: &TVal) -> TVal {
        TVal::Pair(Rc::new(a.clone()), Rc::new(b.clone()))
    }
    fn fst(&self, v: &TVal) -> Result<TVal, RealizeError> {
        match v {
            TVal::Pair(a, _) => Ok((**a).clone()),
            _ => Err(RealizeError::World("projection of a non-pair".into())),
        }
    }
    fn snd(&self, v: &TVal) -> Result<TVal, RealizeError> {
        match v {
            TVal::Pair(_, b) => Ok((**b).clone()),
            _ => Err(RealizeError::World("projection of a non-pair".into())),
        }
    }
    fn apply(&self, f: &TVal, x: &TVal) -> Result<TVal, RealizeError> {
        Machine::new(self.fuel).apply(f, x.clone()).map_err(t_err)
    }
    fn constant(&self, v: &TVal) -> TVal {
        TWorld::closure(vec![v.clone()], TTerm::Var(1))
    }
    fn first_component(&self, r: &TVal) -> TVal {
        TWorld::closure(vec![r.clone()], TTerm::fst(TTerm::app(TTerm::Var(1), TTerm::Var(0))))
    }
    fn induction(&self, base: &TVal, step: &TVal) -> TVal {
        // Under the step's binder: 0 = (k, acc), 1 = n, 2 = step, 3 = base.
        let body = TTerm::apps(TTerm::Var(2), [TTerm::fst(TTerm::Var(0)), TTerm::snd(TTerm::Var(0))]);
        let step_fn = TTerm::lam(TType::prod(TType::N, TType::N), body);
        TWorld::closure(vec![base.clone(), step.clone()], TTerm::r(TTerm::Var(2), step_fn, TTerm::Var(0)))
    }
}

/// Bounded realizability of sentences in a world.
pub struct Arith<'a, W: NnoWorld> {
    pub world: &'a W,
    /// Quantifiers over `N` range over `0..=nat_bound`.
    pub nat_bound: u64,
    /// Values for quantifiers over other types.
    pub samples: Vec<W::Val>,
    pub max_candidates: usize,
}

type Env<V> = Vec<(String, V)>;

fn bind<V: Clone>(env: &Env<V>, x: &str, v: V) -> Env<V> {
    let mut e = env.clone();
    e.push((x.to_string(), v));
    e
}

impl<'a, W: NnoWorld> Arith<'a, W> {
    pub fn new(world: &'a W, nat_bound: u64) -> Self {
        Arith { world, nat_bound, samples: vec![], max_candidates: 4096 }
    }

    fn domain(&self, ty: &TType) -> Vec<W::Val> {
        match ty {
            TType::N => (0..=self.nat_bound).map(|n| self.world.nat(n)).collect(),
            _ => self.samples.clone(),
        }
    }

    pub fn eval(&self, t: &ATerm, env: &Env<W::Val>) -> Result<W::Val, RealizeError> {
        let w = self.world;
        let nat = |t: &ATerm| -> Result<BigUint, RealizeError> { w.read_nat(&self.eval(t, env)?) };
        Ok(match t {
            ATerm::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| RealizeError::World(format!("unbound variable {x}")))?,
            ATerm::Num(n) => w.nat(*n),
            ATerm::Succ(a) => w.numeral(&(nat(a)? + 1u8)),
            ATerm::Add(a, b) => w.numeral(&(nat(a)? + nat(b)?)),
            ATerm::Mul(a, b) => w.numeral(&(nat(a)? * nat(b)?)),
            ATerm::App(f, x) => w.apply(&self.eval(f, env)?, &self.eval(x, env)?)?,
        })
    }

    fn equation(&self, a: &ATerm, b: &ATerm, env: &Env<W::Val>) -> Result<bool, RealizeError> {
        Ok(self.world.read_nat(&self.eval(a, env)?)? == self.world.read_nat(&self.eval(b, env)?)?)
    }

    /// Whether `r` realizes `a` under `env`.
    pub fn realizes_in(&self, r: &W::Val, a: &Sentence, env: &Env<W::Val>) -> Result<bool, RealizeError> {
        let w = self.world;
        match a {
            Sentence::Eq(x, y) => self.equation(x, y, env),
            Sentence::And(x, y) => Ok(self.realizes_in(&w.fst(r)?, x, env)? && self.realizes_in(&w.snd(r)?, y, env)?),
            Sentence::Imp(x, y) => {
                for s in self.candidates_in(x, env)? {
                    if !self.realizes_in(&w.apply(r, &s)?, y, env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Sentence::Forall(x, ty, body) => {
                for v in self.domain(ty) {
                    if !self.realizes_in(&w.apply(r, &v)?, body, &bind(env, x, v))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Sentence::Exists(x, ty, body) => {
                let v = w.fst(r)?;
                if *ty == TType::N {
                    w.read_nat(&v)?;
                }
                self.realizes_in(&w.snd(r)?, body, &bind(env, x, v))
            }
        }
    }

    pub fn realizes(&self, r: &W::Val, a: &Sentence) -> Result<bool, RealizeError> {
        self.realizes_in(r, a, &vec![])
    }

    /// A bounded set of realizers of `a`: units for true equations, pairs,
    /// witnesses found below the bounds and constant functions.
    pub fn candidates_in(&self, a: &Sentence, env: &Env<W::Val>) -> Result<Vec<W::Val>, RealizeError> {
        let w = self.world;
        let mut out = match a {
            Sentence::Eq(x, y) => {
                if self.equation(x, y, env)? {
                    vec![w.unit()]
                } else {
                    vec![]
                }
            }
            Sentence::And(x, y) => {
                let (cx, cy) = (self.candidates_in(x, env)?, self.candidates_in(y, env)?);
                cx.iter().flat_map(|u| cy.iter().map(move |v| w.pair(u, v))).take(self.max_candidates).collect()
            }
            Sentence::Imp(x, y) => {
                if self.candidates_in(x, env)?.is_empty() {
                    vec![w.constant(&w.unit())]
                } else {
                    self.candidates_in(y, env)?.iter().map(|b| w.constant(b)).collect()
                }
            }
            Sentence::Forall(x, ty, body) => {
                let dom = self.domain(ty);
                let first = match dom.first() {
                    Some(v) => self.candidates_in(body, &bind(env, x, v.clone()))?,
                    None => vec![w.unit()],
                };
                let mut keep = Vec::new();
                for c in first {
                    let f = w.constant(&c);
                    if self.realizes_in(&f, a, env)? {
                        keep.push(f);
                    }
                }
                keep
            }
            Sentence::Exists(x, ty, body) => {
                let mut v = Vec::new();
                for d in self.domain(ty) {
                    for c in self.candidates_in(body, &bind(env, x, d.clone()))? {
                        v.push(w.pair(&d, &c));
                    }
                    if v.len() >= self.max_candidates {
                        break;
                    }
                }
                v
            }
        };
        out.truncate(self.max_candidates);
        Ok(out)
    }

    /// A realizer of a closed sentence found within the bounds, if any.
    pub fn find_realizer(&self, a: &Sentence) -> Result<Option<W::Val>, RealizeError> {
        if !a.is_closed() {
            return Err(RealizeError::World(format!("{a} has free variables")));
        }
        for c in self.candidates_in(a, &vec![])? {
            if self.realizes(&c, a)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct ExcludedMiddle<V> {
    pub side: Side,
    pub realizer: V,
    /// The realizer passed the bounded check against `A \/ ~A`.
    pub verified: bool,
}

/// A realizer of `A \/ ~A` for a closed `A`: the left injection of a found
/// realizer of `A`, or the right injection of a constant when there is none.
pub fn check_excluded_middle_sentence<W: NnoWorld>(ar: &Arith<'_, W>, a: &Sentence) -> Result<ExcludedMiddle<W::Val>, RealizeError> {
    let w = ar.world;
    let found = ar.find_realizer(a)?;
    let (side, realizer) = match found {
        Some(x) => (Side::Left, w.pair(&w.nat(0), &w.pair(&w.constant(&x), &w.constant(&w.unit())))),
        None if a.has_exists() => return Err(RealizeError::Undetermined(format!("no realizer of {a} within the bounds"))),
        None => (Side::Right, w.pair(&w.nat(1), &w.pair(&w.constant(&w.unit()), &w.constant(&w.unit())))),
    };
    let verified = ar.realizes(&realizer, &Sentence::or(a.clone(), Sentence::not(a.clone())))?;
    Ok(ExcludedMiddle { side, realizer, verified })
}

#[derive(Clone, Debug)]
pub struct Extraction<V> {
    pub values: Vec<(u64, BigUint)>,
    /// Inputs where the oracle rejected the extracted value.
    pub failures: Vec<u64>,
    /// `n ↦ fst (r·n)` as a value of the world.
    pub morphism: V,
}

impl<V> Extraction<V> {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Reads off the function named by a realizer of `forall x. exists y. A(x,y)`
/// and checks `A(n, f(n))` with the oracle.
pub fn extract_function<W: NnoWorld>(
    world: &W,
    r: &W::Val,
    inputs: &[u64],
    oracle: impl Fn(u64, &BigUint) -> bool,
) -> Result<Extraction<W::Val>, RealizeError> {
    let morphism = world.first_component(r);
    let mut values = Vec::new();
    let mut failures = Vec::new();
    for &n in inputs {
        let y = world.read_nat(&world.apply(&morphism, &world.nat(n))?)?;
        if !oracle(n, &y) {
            failures.push(n);
        }
        values.push((n, y));
    }
    Ok(Extraction { values, failures, morphism })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtRow {
    pub input: u64,
    /// Steps of the halting run.
    pub trace_len: u64,
    pub output: BigUint,
    /// The run with exactly `trace_len` steps halts with `output` and one
    /// step fewer does not.
    pub t_holds: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtScenario {
    pub code: Code,
    pub rows: Vec<CtRow>,
    pub status: &'static str,
}

impl CtScenario {
    pub fn verified(&self) -> bool {
        self.rows.iter().all(|r| r.t_holds && r.agrees)
    }
}

/// Witnesses for `exists e. forall x. exists w. exists y. T(e,x,w,y) /\ f x = y`
/// taking `e` to be `code` and `w` the length of the run, checked on
/// `inputs` against the reference `f`.
pub fn ct_scenario(code: &Code, f: impl Fn(u64) -> BigUint, inputs: &[u64], fuel: u64) -> Result<CtScenario, RealizeError> {
    let mut rows = Vec::new();
    for &x in inputs {
        let input = Nat::from(x);
        let full = run(code, &input, fuel);
        let Outcome::Halted(y) = full.outcome else {
            return Err(RealizeError::Undetermined(format!("run on {x} did not halt")));
        };
        let output = y.as_big().cloned().ok_or_else(|| RealizeError::Readback("output too large".into()))?;
        let w = full.steps;
        let exact = run(code, &input, w).outcome == Outcome::Halted(y.clone());
        let minimal = w == 0 || matches!(run(code, &input, w - 1).outcome, Outcome::OutOfFuel);
        rows.push(CtRow { input: x, trace_len: w, agrees: f(x) == output, output, t_holds: exact && minimal });
    }
    Ok(CtScenario { code: code.clone(), rows, status: super::BOUNDED_VERIFIED })
}

/// The natural a world value denotes as a `u64`, when it fits.
pub fn small_nat<W: NnoWorld>(world: &W, v: &W::Val) -> Option<u64> {
    world.read_nat(v).ok().and_then(|n| n.to_u64())
}

/// Whether a natural is zero; a convenience for oracles.
pub fn is_zero(n: &BigUint) -> bool {
    n.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recworld::rec_bcc;

    fn s(src: &str) -> Sentence {
        parse_sentence(src).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(s("0 = 0"), Sentence::top());
        assert_eq!(s("F"), Sentence::bot());
        assert_eq!(s("~(1 = 0)"), Sentence::not(Sentence::eq(ATerm::Num(1), ATerm::Num(0))));
        let e = s("exists y:N. y = 2 * 2");
        assert!(e.is_closed() && e.has_exists());
        assert!(!s("forall x:N. x + 0 = x").has_exists());
        assert!(s("forall f:N -> N. f 0 = f 0").is_closed());
        assert!(!s("x = 0").is_closed());
        assert!(parse_sentence("forall S:N. 0 = 0").is_err());
    }

    #[test]
    fn excluded_middle_examples() {
        let w = TWorld::default();
        let ar = Arith::new(&w, 6);
        assert_eq!(check_excluded_middle_sentence(&ar, &s("0 = 0")).unwrap().side, Side::Left);
        assert_eq!(check_excluded_middle_sentence(&ar, &s("S 0 = 0")).unwrap().side, Side::Right);
        let em = check_excluded_middle_sentence(&ar, &s("exists y:N. y = 2 * 2")).unwrap();
        assert_eq!(em.side, Side::Left);
        assert!(em.verified);
        let inner = w.snd(&em.realizer).unwrap();
        let witness = w.apply(&w.fst(&inner).unwrap(), &w.unit()).unwrap();
        assert_eq!(small_nat(&w, &w.fst(&witness).unwrap()), Some(4));
        let short = Arith::new(&w, 3);
        assert!(matches!(check_excluded_middle_sentence(&short, &s("exists y:N. y = 2 * 2")), Err(RealizeError::Undetermined(_))));
    }

    #[test]
    fn extraction_in_both_worlds() {
        let t = TWorld::default();
        let r = t.value("fun x:N => (double x, unit)").unwrap();
        let ex = extract_function(&t, &r, &[3], |n, y| *y == BigUint::from(2 * n)).unwrap();
        assert_eq!(ex.values, vec![(3, BigUint::from(6u8))]);
        let m = rec_bcc();
        let succ_pair = Code::assemble("inc r0\nconst r1 0\npair r0 r0 r1").unwrap();
        let ex = extract_function(&m, &succ_pair.0, &[0, 5], |n, y| *y == BigUint::from(n + 1)).unwrap();
        assert!(ex.verified());
        assert_eq!(recworld::apply(&Code(ex.morphism), &Nat::from(9), 10_000), Some(Nat::from(10)));
    }

    #[test]
    fn realizer_of_universal_statement() {
        let t = TWorld::default();
        let ar = Arith::new(&t, 8);
        let a = s("forall x:N. exists y:N. y = x + x");
        let r = t.value("fun x:N => (double x, unit)").unwrap();
        assert!(ar.realizes(&r, &a).unwrap());
        let wrong = t.value("fun x:N => (x, unit)").unwrap();
        assert!(!ar.realizes(&wrong, &a).unwrap());
    }

    #[test]
    fn induction_in_both_worlds() {
        let a = |n: u64| Sentence::exists("y", TType::N, Sentence::eq(ATerm::var("y"), ATerm::add(ATerm::Num(n), ATerm::Num(n))));
        let t = TWorld::default();
        let base = t.value("(0, unit)").unwrap();
        let step = t.value("fun k:N => fun p:N /\\ Unit => (S (S (fst p)), unit)").unwrap();
        let ind = t.induction(&base, &step);
        let ar = Arith::new(&t, 8);
        for n in 0..=8 {
            assert!(ar.realizes(&t.apply(&ind, &t.nat(n)).unwrap(), &a(n)).unwrap(), "{n}");
        }
        let m = rec_bcc();
        let step_fn = Code::assemble("unpair r0 r1 r2\ninc r1\ninc r1\nconst r2 0\npair r0 r1 r2").unwrap();
        let step = const_code(&step_fn.0).0;
        let ind = m.induction(&recworld::pair_u64(0, 0), &step);
        let ar = Arith::new(&m, 8);
        for n in 0..=8 {
            assert!(ar.realizes(&NnoWorld::apply(&m, &ind, &m.nat(n)).unwrap(), &a(n)).unwrap(), "{n}");
        }
    }

    #[test]
    fn ct_for_doubling() {
        let code = recworld::reference_code("double").unwrap();
        let sc = ct_scenario(&code, |x| BigUint::from(2 * x), &[0, 1, 5], 100_000).unwrap();
        assert!(sc.verified());
        assert!(sc.rows[2].trace_len > sc.rows[1].trace_len);
    }
}
