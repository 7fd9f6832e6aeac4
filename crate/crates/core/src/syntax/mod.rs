//! Formulas, proof terms and contexts, with their concrete syntax and the
//! type checker that ties a proof term to a natural-deduction derivation.
//!
//! Proof terms are nameless: `Var(i)` points at the `i`-th enclosing binder,
//! counting outward, and then into the context from its right end. Two terms
//! that differ only in bound names are therefore structurally equal.
//!
//! Surface syntax:
//!
//! ```text
//! form := imp
//! imp  := or ("->" imp)?
//! or   := and ("\/" and)*
//! and  := neg ("/\" neg)*
//! neg  := "~" neg | atom
//! atom := "T" | "F" | "p" NAT | "(" form ")"
//!
//! term   := "fun" x ":" form "=>" term
//!         | "case" term "of" "inl" x "=>" term "|" "inr" x "=>" term
//!         | prefix+                       (application, left associative)
//! prefix := ("fst" | "snd") prefix
//!         | ("inl" | "inr" | "abort") "[" form "]" prefix
//!         | x | "unit" | "(" term ")" | "(" term "," term ")"
//! ```
//!
//! `inl[B] t` proves `A \/ B` from `t : A`, `inr[A] t` proves `A \/ B` from
//! `t : B`, and `abort[A] t` proves `A` from `t : F`.

pub(crate) mod lex;

use lex::{Cursor, Tok};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable #{index} under {depth} binders")]
    Unbound { index: usize, depth: usize },
    #[error("type mismatch in `{subterm}`: expected {expected}, found {found}")]
    Mismatch { subterm: String, expected: String, found: Formula },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Formula {
    Atom(u32),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(i: u32) -> Self {
        Formula::Atom(i)
    }
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }
    pub fn not(a: Formula) -> Self {
        Formula::imp(a, Formula::Bot)
    }
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Atom indices occurring in the formula, ascending.
    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut s = BTreeSet::new();
        self.collect_atoms(&mut s);
        s
    }

    pub(crate) fn collect_atoms(&self, s: &mut BTreeSet<u32>) {
        match self {
            Formula::Atom(i) => {
                s.insert(*i);
            }
            Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(s);
                b.collect_atoms(s);
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when the formula uses only atoms, `T`, `/\` and `->`.
    pub fn in_cc_fragment(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top => true,
            Formula::Bot | Formula::Or(..) => false,
            Formula::And(a, b) | Formula::Imp(a, b) => a.in_cc_fragment() && b.in_cc_fragment(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Imp(_, b) if **b == Formula::Bot => 3,
            Formula::Imp(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Formula::Atom(i) => write!(f, "p{i}")?,
            Formula::Top => write!(f, "T")?,
            Formula::Bot => write!(f, "F")?,
            Formula::Imp(a, b) if **b == Formula::Bot => {
                write!(f, "~")?;
                a.fmt_at(3, f)?;
            }
            Formula::Imp(a, b) => {
                a.fmt_at(1, f)?;
                write!(f, " -> ")?;
                b.fmt_at(0, f)?;
            }
            Formula::Or(a, b) => {
                a.fmt_at(1, f)?;
                write!(f, " \\/ ")?;
                b.fmt_at(2, f)?;
            }
            Formula::And(a, b) => {
                a.fmt_at(2, f)?;
                write!(f, " /\\ ")?;
                b.fmt_at(3, f)?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(0, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum ProofTerm {
    Var(usize),
    Unit,
    Abort(Box<ProofTerm>, Formula),
    Pair(Box<ProofTerm>, Box<ProofTerm>),
    Proj0(Box<ProofTerm>),
    Proj1(Box<ProofTerm>),
    /// Left injection; the formula is the right disjunct.
    Inl(Box<ProofTerm>, Formula),
    /// Right injection; the formula is the left disjunct.
    Inr(Box<ProofTerm>, Formula),
    /// Scrutinee, then the left and right branch bodies, each under one binder.
    Case(Box<ProofTerm>, Box<ProofTerm>, Box<ProofTerm>),
    Lam(Formula, Box<ProofTerm>),
    App(Box<ProofTerm>, Box<ProofTerm>),
}

use ProofTerm as P;

impl ProofTerm {
    pub fn var(i: usize) -> Self {
        P::Var(i)
    }
    pub fn abort(t: ProofTerm, a: Formula) -> Self {
        P::Abort(Box::new(t), a)
    }
    pub fn pair(a: ProofTerm, b: ProofTerm) -> Self {
        P::Pair(Box::new(a), Box::new(b))
    }
    pub fn proj0(t: ProofTerm) -> Self {
        P::Proj0(Box::new(t))
    }
    pub fn proj1(t: ProofTerm) -> Self {
        P::Proj1(Box::new(t))
    }
    pub fn inl(t: ProofTerm, right: Formula) -> Self {
        P::Inl(Box::new(t), right)
    }
    pub fn inr(t: ProofTerm, left: Formula) -> Self {
        P::Inr(Box::new(t), left)
    }
    pub fn case(s: ProofTerm, l: ProofTerm, r: ProofTerm) -> Self {
        P::Case(Box::new(s), Box::new(l), Box::new(r))
    }
    pub fn lam(a: Formula, body: ProofTerm) -> Self {
        P::Lam(a, Box::new(body))
    }
    pub fn app(f: ProofTerm, x: ProofTerm) -> Self {
        P::App(Box::new(f), Box::new(x))
    }

    pub fn size(&self) -> usize {
        match self {
            P::Var(_) | P::Unit => 1,
            P::Abort(t, _) | P::Proj0(t) | P::Proj1(t) | P::Inl(t, _) | P::Inr(t, _) | P::Lam(_, t) => {
                1 + t.size()
            }
            P::Pair(a, b) | P::App(a, b) => 1 + a.size() + b.size(),
            P::Case(s, l, r) => 1 + s.size() + l.size() + r.size(),
        }
    }

    /// Immediate subterms in position order, with the number of binders each sits under.
    pub fn children(&self) -> Vec<(&ProofTerm, usize)> {
        match self {
            P::Var(_) | P::Unit => vec![],
            P::Abort(t, _) | P::Proj0(t) | P::Proj1(t) | P::Inl(t, _) | P::Inr(t, _) => vec![(t, 0)],
            P::Lam(_, t) => vec![(t, 1)],
            P::Pair(a, b) | P::App(a, b) => vec![(a, 0), (b, 0)],
            P::Case(s, l, r) => vec![(s, 0), (l, 1), (r, 1)],
        }
    }

    pub(crate) fn children_mut(&mut self) -> Vec<&mut ProofTerm> {
        match self {
            P::Var(_) | P::Unit => vec![],
            P::Abort(t, _) | P::Proj0(t) | P::Proj1(t) | P::Inl(t, _) | P::Inr(t, _) | P::Lam(_, t) => {
                vec![&mut **t]
            }
            P::Pair(a, b) | P::App(a, b) => vec![&mut **a, &mut **b],
            P::Case(s, l, r) => vec![&mut **s, &mut **l, &mut **r],
        }
    }

    /// True if `Var(i)` (relative to this term's root) occurs free.
    pub fn has_free(&self, i: usize) -> bool {
        match self {
            P::Var(j) => *j == i,
            _ => self.children().into_iter().any(|(c, b)| c.has_free(i + b)),
        }
    }

    /// Free variable indices relative to the root, ascending.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        fn go(t: &ProofTerm, depth: usize, out: &mut BTreeSet<usize>) {
            match t {
                P::Var(j) if *j >= depth => {
                    out.insert(j - depth);
                }
                P::Var(_) => {}
                _ => {
                    for (c, b) in t.children() {
                        go(c, depth + b, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, 0, &mut out);
        out
    }

    /// Adds `d` to every free index at or above `cutoff`.
    pub fn shift(&self, d: isize, cutoff: usize) -> ProofTerm {
        match self {
            P::Var(j) if *j >= cutoff => P::Var((*j as isize + d) as usize),
            P::Var(j) => P::Var(*j),
            _ => self.map_children(|c, b| c.shift(d, cutoff + b)),
        }
    }

    /// Replaces free index `j` by `s`, lowering the indices above `j`.
    pub fn subst(&self, j: usize, s: &ProofTerm) -> ProofTerm {
        match self {
            P::Var(k) if *k == j => s.shift(j as isize, 0),
            P::Var(k) if *k > j => P::Var(k - 1),
            P::Var(k) => P::Var(*k),
            _ => self.map_children(|c, b| c.subst(j + b, s)),
        }
    }

    /// Substitutes `s` for the innermost free variable.
    pub fn instantiate(&self, s: &ProofTerm) -> ProofTerm {
        self.subst(0, s)
    }

    pub(crate) fn map_children(&self, mut f: impl FnMut(&ProofTerm, usize) -> ProofTerm) -> ProofTerm {
        match self {
            P::Var(j) => P::Var(*j),
            P::Unit => P::Unit,
            P::Abort(t, a) => P::Abort(Box::new(f(t, 0)), a.clone()),
            P::Pair(a, b) => P::Pair(Box::new(f(a, 0)), Box::new(f(b, 0))),
            P::Proj0(t) => P::Proj0(Box::new(f(t, 0))),
            P::Proj1(t) => P::Proj1(Box::new(f(t, 0))),
            P::Inl(t, b) => P::Inl(Box::new(f(t, 0)), b.clone()),
            P::Inr(t, a) => P::Inr(Box::new(f(t, 0)), a.clone()),
            P::Case(s, l, r) => P::Case(Box::new(f(s, 0)), Box::new(f(l, 1)), Box::new(f(r, 1))),
            P::Lam(a, t) => P::Lam(a.clone(), Box::new(f(t, 1))),
            P::App(a, b) => P::App(Box::new(f(a, 0)), Box::new(f(b, 0))),
        }
    }

    /// Renders the term using `names` (context order) for free variables.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut scope: Vec<String> = names.to_vec();
        let mut out = String::new();
        print_term(self, &mut scope, Slot::Open, &mut out);
        out
    }

    fn class(&self) -> u8 {
        match self {
            P::Var(_) | P::Unit | P::Pair(..) => 3,
            P::Proj0(_) | P::Proj1(_) | P::Inl(..) | P::Inr(..) | P::Abort(..) => 2,
            P::App(..) => 1,
            P::Lam(..) | P::Case(..) => 0,
        }
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Open,
    Head,
    Arg,
}

const KEYWORDS: &[&str] = &["fun", "fst", "snd", "inl", "inr", "case", "of", "abort", "unit"];

fn fresh_name(scope: &[String]) -> String {
    let letters = "abcdefghjkmnqrstuvwxyz";
    for round in 0.. {
        for c in letters.chars() {
            let name = if round == 0 { c.to_string() } else { format!("{c}{round}") };
            if !scope.contains(&name) {
                return name;
            }
        }
    }
    unreachable!()
}

fn print_term(t: &ProofTerm, scope: &mut Vec<String>, slot: Slot, out: &mut String) {
    let cls = t.class();
    let paren = match slot {
        Slot::Open => false,
        Slot::Head => cls == 0,
        Slot::Arg => cls < 3,
    };
    if paren {
        out.push('(');
    }
    match t {
        P::Var(i) => {
            if *i < scope.len() {
                out.push_str(&scope[scope.len() - 1 - i]);
            } else {
                out.push_str(&format!("_free{}", i - scope.len()));
            }
        }
        P::Unit => out.push_str("unit"),
        P::Pair(a, b) => {
            out.push('(');
            print_term(a, scope, Slot::Open, out);
            out.push_str(", ");
            print_term(b, scope, Slot::Open, out);
            out.push(')');
        }
        P::Proj0(x) | P::Proj1(x) => {
            out.push_str(if matches!(t, P::Proj0(_)) { "fst " } else { "snd " });
            print_term(x, scope, Slot::Arg, out);
        }
        P::Inl(x, a) | P::Inr(x, a) | P::Abort(x, a) => {
            let kw = match t {
                P::Inl(..) => "inl",
                P::Inr(..) => "inr",
                _ => "abort",
            };
            out.push_str(&format!("{kw}[{a}] "));
            print_term(x, scope, Slot::Arg, out);
        }
        P::App(f, x) => {
            print_term(f, scope, Slot::Head, out);
            out.push(' ');
            print_term(x, scope, Slot::Arg, out);
        }
        P::Lam(a, body) => {
            let n = fresh_name(scope);
            out.push_str(&format!("fun {n}:{a} => "));
            scope.push(n);
            print_term(body, scope, Slot::Open, out);
            scope.pop();
        }
        P::Case(s, l, r) => {
            out.push_str("case ");
            print_term(s, scope, Slot::Head, out);
            let a = fresh_name(scope);
            out.push_str(&format!(" of inl {a} => "));
            scope.push(a);
            print_term(l, scope, Slot::Head, out);
            scope.pop();
            let b = fresh_name(scope);
            out.push_str(&format!(" | inr {b} => "));
            scope.push(b);
            print_term(r, scope, Slot::Open, out);
            scope.pop();
        }
    }
    if paren {
        out.push(')');
    }
}

/// An ordered list of named hypotheses. The last entry is the innermost.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Context {
    entries: Vec<(String, Formula)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_entries(entries: Vec<(String, Formula)>) -> Self {
        Context { entries }
    }

    /// Parses `x:A, y:B` (possibly empty).
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(src)?;
        let mut ctx = Context::new();
        if *cur.peek() == Tok::Eof {
            return Ok(ctx);
        }
        loop {
            let pos = cur.pos();
            let name = cur.ident()?;
            if KEYWORDS.contains(&name.as_str()) {
                return Err(ParseError::new(pos, format!("'{name}' is a keyword")));
            }
            if ctx.entries.iter().any(|(n, _)| *n == name) {
                return Err(ParseError::new(pos, format!("duplicate hypothesis '{name}'")));
            }
            cur.expect(&Tok::Colon)?;
            let a = formula(&mut cur)?;
            ctx.entries.push((name, a));
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.finish()?;
        Ok(ctx)
    }

    pub fn push(&mut self, name: impl Into<String>, a: Formula) {
        self.entries.push((name.into(), a));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(String, Formula)] {
        &self.entries
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.entries.iter().map(|(_, a)| a.clone()).collect()
    }

    /// Formula of the variable with nameless index `i`.
    pub fn lookup(&self, i: usize) -> Option<&Formula> {
        self.entries.len().checked_sub(i + 1).map(|k| &self.entries[k].1)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (n, a)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{a}")?;
        }
        Ok(())
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(src)?;
    let f = formula(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

pub(crate) fn formula(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let lhs = disj(cur)?;
    if cur.eat(&Tok::Arrow) {
        Ok(Formula::imp(lhs, formula(cur)?))
    } else {
        Ok(lhs)
    }
}

fn disj(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let mut acc = conj(cur)?;
    while cur.eat(&Tok::Vee) {
        acc = Formula::or(acc, conj(cur)?);
    }
    Ok(acc)
}

fn conj(cur: &mut Cursor) -> Result<Formula, ParseError> {
    let mut acc = neg(cur)?;
    while cur.eat(&Tok::Wedge) {
        acc = Formula::and(acc, neg(cur)?);
    }
    Ok(acc)
}

fn neg(cur: &mut Cursor) -> Result<Formula, ParseError> {
    if cur.eat(&Tok::Tilde) {
        return Ok(Formula::not(neg(cur)?));
    }
    let pos = cur.pos();
    match cur.peek().clone() {
        Tok::LParen => {
            cur.bump();
            let f = formula(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        Tok::Ident(s) => {
            cur.bump();
            match s.as_str() {
                "T" => Ok(Formula::Top),
                "F" => Ok(Formula::Bot),
                _ => {
                    let digits = s.strip_prefix('p').filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
                    match digits.and_then(|d| d.parse::<u32>().ok()) {
                        Some(i) => Ok(Formula::Atom(i)),
                        None => Err(ParseError::new(pos, format!("'{s}' is not a formula atom"))),
                    }
                }
            }
        }
        _ => Err(cur.unexpected("a formula")),
    }
}

/// Parses a closed proof term.
pub fn parse_term(src: &str) -> Result<ProofTerm, ParseError> {
    parse_term_in(&Context::new(), src)
}

/// Parses a proof term whose free names are resolved against `ctx`.
pub fn parse_term_in(ctx: &Context, src: &str) -> Result<ProofTerm, ParseError> {
    let mut cur = Cursor::new(src)?;
    let mut scope = ctx.names();
    let t = term(&mut cur, &mut scope)?;
    cur.finish()?;
    Ok(t)
}

fn binder(cur: &mut Cursor) -> Result<String, ParseError> {
    let pos = cur.pos();
    let n = cur.ident()?;
    if KEYWORDS.contains(&n.as_str()) {
        return Err(ParseError::new(pos, format!("'{n}' is a keyword")));
    }
    Ok(n)
}

fn term(cur: &mut Cursor, scope: &mut Vec<String>) -> Result<ProofTerm, ParseError> {
    if cur.eat_kw("fun") {
        let x = binder(cur)?;
        cur.expect(&Tok::Colon)?;
        let a = formula(cur)?;
        cur.expect(&Tok::FatArrow)?;
        scope.push(x);
        let body = term(cur, scope);
        scope.pop();
        return Ok(P::lam(a, body?));
    }
    if cur.eat_kw("case") {
        let s = term(cur, scope)?;
        cur.expect_kw("of")?;
        cur.expect_kw("inl")?;
        let a = binder(cur)?;
        cur.expect(&Tok::FatArrow)?;
        scope.push(a);
        let l = term(cur, scope);
        scope.pop();
        let l = l?;
        cur.expect(&Tok::Bar)?;
        cur.expect_kw("inr")?;
        let b = binder(cur)?;
        cur.expect(&Tok::FatArrow)?;
        scope.push(b);
        let r = term(cur, scope);
        scope.pop();
        return Ok(P::case(s, l, r?));
    }
    let mut acc = prefix(cur, scope)?;
    while starts_prefix(cur) {
        let x = prefix(cur, scope)?;
        acc = P::app(acc, x);
    }
    Ok(acc)
}

fn starts_prefix(cur: &Cursor) -> bool {
    match cur.peek() {
        Tok::LParen => true,
        Tok::Ident(s) => !matches!(s.as_str(), "fun" | "case" | "of"),
        _ => false,
    }
}

fn prefix(cur: &mut Cursor, scope: &mut Vec<String>) -> Result<ProofTerm, ParseError> {
    let pos = cur.pos();
    match cur.peek().clone() {
        Tok::Ident(s) if s == "fst" || s == "snd" => {
            cur.bump();
            let x = prefix(cur, scope)?;
            Ok(if s == "fst" { P::proj0(x) } else { P::proj1(x) })
        }
        Tok::Ident(s) if s == "inl" || s == "inr" || s == "abort" => {
            cur.bump();
            cur.expect(&Tok::LBrack)?;
            let a = formula(cur)?;
            cur.expect(&Tok::RBrack)?;
            let x = prefix(cur, scope)?;
            Ok(match s.as_str() {
                "inl" => P::inl(x, a),
                "inr" => P::inr(x, a),
                _ => P::abort(x, a),
            })
        }
        Tok::Ident(s) if s == "unit" => {
            cur.bump();
            Ok(P::Unit)
        }
        Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => Err(cur.unexpected("a term")),
        Tok::Ident(s) => {
            cur.bump();
            match scope.iter().rposition(|n| *n == s) {
                Some(k) => Ok(P::Var(scope.len() - 1 - k)),
                None => Err(ParseError::new(pos, format!("unbound variable '{s}'"))),
            }
        }
        Tok::LParen => {
            cur.bump();
            let a = term(cur, scope)?;
            if cur.eat(&Tok::Comma) {
                let b = term(cur, scope)?;
                cur.expect(&Tok::RParen)?;
                Ok(P::pair(a, b))
            } else {
                cur.expect(&Tok::RParen)?;
                Ok(a)
            }
        }
        _ => Err(cur.unexpected("a term")),
    }
}

/// Infers the formula proved by `t` from the hypotheses in `ctx`.
pub fn typecheck(ctx: &Context, t: &ProofTerm) -> Result<Formula, TypeError> {
    let mut env = ctx.formulas();
    infer(&mut env, t)
}

/// Like [`typecheck`], over a bare list of hypothesis formulas in context order.
pub fn infer(env: &mut Vec<Formula>, t: &ProofTerm) -> Result<Formula, TypeError> {
    let mismatch = |t: &ProofTerm, expected: String, found: Formula| TypeError::Mismatch {
        subterm: t.to_string(),
        expected,
        found,
    };
    match t {
        P::Var(i) => env
            .len()
            .checked_sub(i + 1)
            .map(|k| env[k].clone())
            .ok_or(TypeError::Unbound { index: *i, depth: env.len() }),
        P::Unit => Ok(Formula::Top),
        P::Abort(x, a) => match infer(env, x)? {
            Formula::Bot => Ok(a.clone()),
            other => Err(mismatch(x, "F".into(), other)),
        },
        P::Pair(a, b) => Ok(Formula::and(infer(env, a)?, infer(env, b)?)),
        P::Proj0(x) | P::Proj1(x) => match infer(env, x)? {
            Formula::And(a, b) => Ok(if matches!(t, P::Proj0(_)) { *a } else { *b }),
            other => Err(mismatch(x, "a conjunction".into(), other)),
        },
        P::Inl(x, b) => Ok(Formula::or(infer(env, x)?, b.clone())),
        P::Inr(x, a) => Ok(Formula::or(a.clone(), infer(env, x)?)),
        P::Case(s, l, r) => match infer(env, s)? {
            Formula::Or(a, b) => {
                env.push(*a);
                let cl = infer(env, l);
                env.pop();
                let cl = cl?;
                env.push(*b);
                let cr = infer(env, r);
                env.pop();
                let cr = cr?;
                if cl == cr {
                    Ok(cl)
                } else {
                    Err(mismatch(r, cl.to_string(), cr))
                }
            }
            other => Err(mismatch(s, "a disjunction".into(), other)),
        },
        P::Lam(a, body) => {
            env.push(a.clone());
            let b = infer(env, body);
            env.pop();
            Ok(Formula::imp(a.clone(), b?))
        }
        P::App(f, x) => match infer(env, f)? {
            Formula::Imp(a, b) => {
                let got = infer(env, x)?;
                if got == *a {
                    Ok(*b)
                } else {
                    Err(mismatch(x, a.to_string(), got))
                }
            }
            other => Err(mismatch(f, "an implication".into(), other)),
        },
    }
}
