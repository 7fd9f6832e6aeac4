//! A small register machine with numerically coded programs, universal
//! application `e·n`, the S-m-n construction and the category of coded
//! computable maps.
//!
//! # Naturals
//!
//! Codes nest: a program that loads another program as a constant carries its
//! code in an exponent, so values are kept in a canonical mixed form. A value
//! with at most [`MAX_BITS`] bits is stored as a big integer. A larger value
//! is stored as the pair `(a, b)` with value `2^a (2b+1)`. The form is unique,
//! so structural equality is numeric equality. Arithmetic on stored pairs
//! faults; programs handle such values only through `pair`, `unpair`, `const`,
//! `mov` and `call`.
//!
//! # Machine
//!
//! Registers `r0..r15` start at zero except `r0`, which holds the input. The
//! program halts by `halt`, by running off the end or by jumping out of range.
//! The result is `r0`.
//!
//! ```text
//! inc r           r := r + 1
//! decjz r t       if r = 0 goto t, else r := r - 1
//! jmp t           goto t
//! halt
//! const r v       r := v             (v decimal or <a,b>)
//! mov d s         d := s
//! pair d a b      d := 2^a (2b+1)
//! unpair s a b    (a, b) := unpair(s); faults on 0
//! call d e x      d := e·x, sharing the fuel budget
//! ```
//!
//! Assembly text has one instruction per line; `#` starts a comment and jump
//! targets are instruction indices.
//!
//! # Coding
//!
//! A program `[i1, ..., ik]` has code `<c(i1), <c(i2), ... <c(ik), 0>>>`
//! with `<a,b> = 2^a (2b+1)`. Instruction codes are `halt = 0`,
//! `inc r = <1,r>`, `decjz r t = <2,<r,t>>`, `jmp t = <3,t>`,
//! `const r v = <4,<r,v>>`, `pair d a b = <5,<d,<a,b>>>`,
//! `unpair s a b = <6,<s,<a,b>>>`, `call d e x = <7,<d,<e,x>>>` and
//! `mov d s = <8,<d,s>>`. Every natural decodes to some program: unknown
//! opcodes decode to `halt`, out-of-range registers wrap modulo the register
//! count and a zero payload reads as `<0,0>`.

use crate::semantics::{Model, ModelError};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// Largest bit length stored as a plain integer.
pub const MAX_BITS: u64 = 1 << 14;
pub const REGISTERS: usize = 16;
const MAX_CALL_DEPTH: usize = 2_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Nat {
    Big(BigUint),
    Pair(Arc<Nat>, Arc<Nat>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecError {
    #[error("0 is not of the form 2^a(2b+1)")]
    UnpairZero,
    #[error("line {line}: {msg}")]
    Assembly { line: usize, msg: String },
    #[error("invalid natural '{0}'")]
    BadNat(String),
    #[error("fuel exhausted")]
    Fuel,
    #[error("machine fault: {0}")]
    Fault(String),
}

impl Nat {
    pub fn zero() -> Self {
        Nat::Big(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Nat::Big(n) if n.is_zero())
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self {
            Nat::Big(n) => n.to_u64(),
            Nat::Pair(..) => None,
        }
    }

    pub fn as_big(&self) -> Option<&BigUint> {
        match self {
            Nat::Big(n) => Some(n),
            Nat::Pair(..) => None,
        }
    }

    /// Canonical form of an integer of any size.
    pub fn from_big(n: BigUint) -> Self {
        if n.bits() <= MAX_BITS {
            return Nat::Big(n);
        }
        let a = n.trailing_zeros().expect("nonzero");
        let b = (n >> a) >> 1u8;
        Nat::Pair(Arc::new(Nat::from(a)), Arc::new(Nat::from_big(b)))
    }

    /// Bit length, when it fits in a `u64`.
    pub fn bit_len(&self) -> Option<u64> {
        match self {
            Nat::Big(n) => Some(n.bits()),
            Nat::Pair(a, b) => a.to_u64()?.checked_add(b.bit_len()?)?.checked_add(1),
        }
    }

    fn inc(&self) -> Result<Nat, RecError> {
        match self {
            Nat::Big(n) => Ok(Nat::from_big(n + 1u8)),
            Nat::Pair(..) => Err(RecError::Fault("increment of a value beyond the arithmetic range".into())),
        }
    }

    fn dec(&self) -> Result<Nat, RecError> {
        match self {
            Nat::Big(n) => Ok(Nat::Big(n - 1u8)),
            Nat::Pair(..) => Err(RecError::Fault("decrement of a value beyond the arithmetic range".into())),
        }
    }
}

impl From<u64> for Nat {
    fn from(n: u64) -> Self {
        Nat::Big(BigUint::from(n))
    }
}

impl From<BigUint> for Nat {
    fn from(n: BigUint) -> Self {
        Nat::from_big(n)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nat::Big(n) => write!(f, "{n}"),
            Nat::Pair(a, b) => write!(f, "<{a},{b}>"),
        }
    }
}

impl FromStr for Nat {
    type Err = RecError;

    /// Decimal digits or `<a,b>`, nested freely.
    fn from_str(s: &str) -> Result<Self, RecError> {
        fn go(s: &[u8], i: &mut usize) -> Option<Nat> {
            if s.get(*i) == Some(&b'<') {
                *i += 1;
                let a = go(s, i)?;
                (s.get(*i) == Some(&b',')).then_some(())?;
                *i += 1;
                let b = go(s, i)?;
                (s.get(*i) == Some(&b'>')).then_some(())?;
                *i += 1;
                return Some(pair(&a, &b));
            }
            let start = *i;
            while s.get(*i).is_some_and(u8::is_ascii_digit) {
                *i += 1;
            }
            let digits = std::str::from_utf8(&s[start..*i]).ok()?;
            BigUint::from_str(digits).ok().map(Nat::from_big)
        }
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0;
        match go(t.as_bytes(), &mut i) {
            Some(n) if i == t.len() => Ok(n),
            _ => Err(RecError::BadNat(s.to_string())),
        }
    }
}

/// `2^a (2b+1)`.
pub fn pair(a: &Nat, b: &Nat) -> Nat {
    if let (Nat::Big(x), Nat::Big(y)) = (a, b) {
        if let Some(k) = x.to_u64() {
            if k.saturating_add(y.bits()).saturating_add(1) <= MAX_BITS {
                return Nat::Big(((y << 1u8) + 1u8) << k);
            }
        }
    }
    Nat::Pair(Arc::new(a.clone()), Arc::new(b.clone()))
}

pub fn unpair(n: &Nat) -> Result<(Nat, Nat), RecError> {
    match n {
        Nat::Big(x) if x.is_zero() => Err(RecError::UnpairZero),
        Nat::Big(x) => {
            let a = x.trailing_zeros().expect("nonzero");
            Ok((Nat::from(a), Nat::Big((x >> a) >> 1u8)))
        }
        Nat::Pair(a, b) => Ok(((**a).clone(), (**b).clone())),
    }
}

pub fn pair_u64(a: u64, b: u64) -> Nat {
    pair(&Nat::from(a), &Nat::from(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Instr {
    Halt,
    Inc(usize),
    DecJz(usize, usize),
    Jmp(usize),
    Const(usize, Nat),
    Mov(usize, usize),
    Pair(usize, usize, usize),
    Unpair(usize, usize, usize),
    Call(usize, usize, usize),
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Halt => write!(f, "halt"),
            Instr::Inc(r) => write!(f, "inc r{r}"),
            Instr::DecJz(r, t) => write!(f, "decjz r{r} {t}"),
            Instr::Jmp(t) => write!(f, "jmp {t}"),
            Instr::Const(r, v) => write!(f, "const r{r} {v}"),
            Instr::Mov(d, s) => write!(f, "mov r{d} r{s}"),
            Instr::Pair(d, a, b) => write!(f, "pair r{d} r{a} r{b}"),
            Instr::Unpair(s, a, b) => write!(f, "unpair r{s} r{a} r{b}"),
            Instr::Call(d, e, x) => write!(f, "call r{d} r{e} r{x}"),
        }
    }
}

fn n(k: usize) -> Nat {
    Nat::from(k as u64)
}

fn pair3(a: usize, b: usize, c: usize) -> Nat {
    pair(&n(a), &pair(&n(b), &n(c)))
}

impl Instr {
    pub fn encode(&self) -> Nat {
        let op = |k: u64, payload: Nat| pair(&Nat::from(k), &payload);
        match self {
            Instr::Halt => Nat::zero(),
            Instr::Inc(r) => op(1, n(*r)),
            Instr::DecJz(r, t) => op(2, pair(&n(*r), &n(*t))),
            Instr::Jmp(t) => op(3, n(*t)),
            Instr::Const(r, v) => op(4, pair(&n(*r), v)),
            Instr::Pair(d, a, b) => op(5, pair3(*d, *a, *b)),
            Instr::Unpair(s, a, b) => op(6, pair3(*s, *a, *b)),
            Instr::Call(d, e, x) => op(7, pair3(*d, *e, *x)),
            Instr::Mov(d, s) => op(8, pair(&n(*d), &n(*s))),
        }
    }

    /// Total decoding.
    pub fn decode(c: &Nat) -> Instr {
        fn split(c: &Nat) -> (Nat, Nat) {
            unpair(c).unwrap_or_else(|_| (Nat::zero(), Nat::zero()))
        }
        fn reg(c: &Nat) -> usize {
            match c {
                Nat::Big(x) => (x % REGISTERS).to_usize().expect("small"),
                Nat::Pair(..) => 0,
            }
        }
        fn target(c: &Nat) -> usize {
            c.to_u64().and_then(|t| usize::try_from(t).ok()).unwrap_or(usize::MAX)
        }
        fn three(c: &Nat) -> (usize, usize, usize) {
            let (x, rest) = split(c);
            let (y, z) = split(&rest);
            (reg(&x), reg(&y), reg(&z))
        }
        if c.is_zero() {
            return Instr::Halt;
        }
        let (op, p) = split(c);
        match op.to_u64() {
            Some(1) => Instr::Inc(reg(&p)),
            Some(2) => {
                let (r, t) = split(&p);
                Instr::DecJz(reg(&r), target(&t))
            }
            Some(3) => Instr::Jmp(target(&p)),
            Some(4) => {
                let (r, v) = split(&p);
                Instr::Const(reg(&r), v)
            }
            Some(5) => {
                let (d, a, b) = three(&p);
                Instr::Pair(d, a, b)
            }
            Some(6) => {
                let (s, a, b) = three(&p);
                Instr::Unpair(s, a, b)
            }
            Some(7) => {
                let (d, e, x) = three(&p);
                Instr::Call(d, e, x)
            }
            Some(8) => {
                let (d, s) = split(&p);
                Instr::Mov(reg(&d), reg(&s))
            }
            _ => Instr::Halt,
        }
    }

    fn shifted(&self, k: usize) -> Instr {
        match self {
            Instr::DecJz(r, t) => Instr::DecJz(*r, t.saturating_add(k)),
            Instr::Jmp(t) => Instr::Jmp(t.saturating_add(k)),
            other => other.clone(),
        }
    }
}

/// A program code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Code(pub Nat);

impl Code {
    pub fn from_program(prog: &[Instr]) -> Code {
        Code(prog.iter().rev().fold(Nat::zero(), |rest, i| pair(&i.encode(), &rest)))
    }

    pub fn program(&self) -> Vec<Instr> {
        let mut out = Vec::new();
        let mut c = self.0.clone();
        while let Ok((i, rest)) = unpair(&c) {
            out.push(Instr::decode(&i));
            c = rest;
        }
        out
    }

    pub fn assemble(text: &str) -> Result<Code, RecError> {
        parse_assembly(text).map(|p| Code::from_program(&p))
    }

    pub fn disassemble(&self) -> String {
        self.program().iter().map(|i| format!("{i}\n")).collect()
    }

    pub fn as_nat(&self) -> &Nat {
        &self.0
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn parse_assembly(text: &str) -> Result<Vec<Instr>, RecError> {
    let mut prog = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| RecError::Assembly { line: k + 1, msg };
        let words: Vec<&str> = line.split_whitespace().collect();
        let reg = |w: &str| -> Result<usize, RecError> {
            w.strip_prefix('r')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|r| *r < REGISTERS)
                .ok_or_else(|| err(format!("bad register '{w}'")))
        };
        let num = |w: &str| w.parse::<usize>().map_err(|_| err(format!("bad target '{w}'")));
        let arity = |k: usize| {
            if words.len() == k + 1 {
                Ok(())
            } else {
                Err(err(format!("'{}' takes {k} operands", words[0])))
            }
        };
        let instr = match words[0] {
            "halt" => arity(0).map(|_| Instr::Halt)?,
            "inc" => arity(1).and_then(|_| Ok(Instr::Inc(reg(words[1])?)))?,
            "decjz" => arity(2).and_then(|_| Ok(Instr::DecJz(reg(words[1])?, num(words[2])?)))?,
            "jmp" => arity(1).and_then(|_| Ok(Instr::Jmp(num(words[1])?)))?,
            "const" => {
                if words.len() < 3 {
                    return Err(err("'const' takes 2 operands".into()));
                }
                let v: Nat = words[2..].concat().parse().map_err(|e: RecError| err(e.to_string()))?;
                Instr::Const(reg(words[1])?, v)
            }
            "mov" => arity(2).and_then(|_| Ok(Instr::Mov(reg(words[1])?, reg(words[2])?)))?,
            "pair" => arity(3).and_then(|_| Ok(Instr::Pair(reg(words[1])?, reg(words[2])?, reg(words[3])?)))?,
            "unpair" => arity(3).and_then(|_| Ok(Instr::Unpair(reg(words[1])?, reg(words[2])?, reg(words[3])?)))?,
            "call" => arity(3).and_then(|_| Ok(Instr::Call(reg(words[1])?, reg(words[2])?, reg(words[3])?)))?,
            other => return Err(err(format!("unknown instruction '{other}'"))),
        };
        prog.push(instr);
    }
    Ok(prog)
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Halted(Nat),
    OutOfFuel,
    Fault(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub outcome: Outcome,
    /// Instructions executed, including nested calls.
    pub steps: u64,
}

struct Runner {
    fuel: u64,
    used: u64,
    cache: HashMap<Nat, Arc<Vec<Instr>>>,
}

impl Runner {
    fn program(&mut self, code: &Nat) -> Arc<Vec<Instr>> {
        if let Some(p) = self.cache.get(code) {
            return p.clone();
        }
        let p = Arc::new(Code(code.clone()).program());
        self.cache.insert(code.clone(), p.clone());
        p
    }

    fn exec(&mut self, code: &Nat, input: Nat, depth: usize) -> Result<Nat, RecError> {
        if depth > MAX_CALL_DEPTH {
            return Err(RecError::Fault("call depth exceeded".into()));
        }
        let prog = self.program(code);
        let mut regs: Vec<Nat> = vec![Nat::zero(); REGISTERS];
        regs[0] = input;
        let mut pc = 0usize;
        while let Some(instr) = prog.get(pc) {
            if self.used >= self.fuel {
                return Err(RecError::Fuel);
            }
            self.used += 1;
            pc += 1;
            match instr {
                Instr::Halt => break,
                Instr::Inc(r) => regs[*r] = regs[*r].inc()?,
                Instr::DecJz(r, t) => {
                    if regs[*r].is_zero() {
                        pc = *t;
                    } else {
                        regs[*r] = regs[*r].dec()?;
                    }
                }
                Instr::Jmp(t) => pc = *t,
                Instr::Const(r, v) => regs[*r] = v.clone(),
                Instr::Mov(d, s) => regs[*d] = regs[*s].clone(),
                Instr::Pair(d, a, b) => regs[*d] = pair(&regs[*a], &regs[*b]),
                Instr::Unpair(s, a, b) => {
                    let (x, y) = unpair(&regs[*s]).map_err(|e| RecError::Fault(e.to_string()))?;
                    regs[*a] = x;
                    regs[*b] = y;
                }
                Instr::Call(d, e, x) => {
                    let (e, x) = (regs[*e].clone(), regs[*x].clone());
                    regs[*d] = self.exec(&e, x, depth + 1)?;
                }
            }
        }
        Ok(regs.swap_remove(0))
    }
}

/// Runs `e` on `input` with a step budget.
pub fn run(e: &Code, input: &Nat, fuel: u64) -> Run {
    let mut r = Runner { fuel, used: 0, cache: HashMap::new() };
    let outcome = match r.exec(&e.0, input.clone(), 0) {
        Ok(v) => Outcome::Halted(v),
        Err(RecError::Fuel) => Outcome::OutOfFuel,
        Err(e) => Outcome::Fault(e.to_string()),
    };
    Run { outcome, steps: r.used }
}

/// `e·n`, or `None` if the run does not halt within `fuel` steps.
pub fn apply(e: &Code, n: &Nat, fuel: u64) -> Option<Nat> {
    match run(e, n, fuel).outcome {
        Outcome::Halted(v) => Some(v),
        _ => None,
    }
}

/// Like [`apply`] but distinguishes fuel exhaustion from faults.
pub fn apply_checked(e: &Code, n: &Nat, fuel: u64) -> Result<Nat, RecError> {
    match run(e, n, fuel).outcome {
        Outcome::Halted(v) => Ok(v),
        Outcome::OutOfFuel => Err(RecError::Fuel),
        Outcome::Fault(m) => Err(RecError::Fault(m)),
    }
}

const SMN_PREFIX: usize = 3;

/// A code for `y ↦ e·<x,y>`: load `x`, pair it with the input, clear the
/// scratch register and continue with `e` shifted past the prefix.
pub fn smn(e: &Code, x: &Nat) -> Code {
    let mut prog = vec![Instr::Const(1, x.clone()), Instr::Pair(0, 1, 0), Instr::Const(1, Nat::zero())];
    prog.extend(e.program().iter().map(|i| i.shifted(SMN_PREFIX)));
    Code::from_program(&prog)
}

/// A code computing `x ↦ smn(e, x)`.
pub fn smn_builder(e: &Code) -> Code {
    let mut tail = vec![Instr::Pair(0, 1, 0), Instr::Const(1, Nat::zero())];
    tail.extend(e.program().iter().map(|i| i.shifted(SMN_PREFIX)));
    let tail = Code::from_program(&tail).0;
    Code::from_program(&[
        Instr::Const(2, Nat::from(1)),
        Instr::Pair(2, 2, 0),
        Instr::Const(3, Nat::from(4)),
        Instr::Pair(2, 3, 2),
        Instr::Const(3, tail),
        Instr::Pair(0, 2, 3),
    ])
}

pub fn const_code(v: &Nat) -> Code {
    Code::from_program(&[Instr::Const(0, v.clone())])
}

/// Hand-assembled programs on a single natural input.
pub const REFERENCE_PROGRAMS: &[(&str, &str)] = &[
    ("succ", "inc r0"),
    ("pred", "decjz r0 1"),
    ("double", "decjz r0 4\ninc r1\ninc r1\njmp 0\nmov r0 r1"),
    ("half", "decjz r0 4\ndecjz r0 4\ninc r1\njmp 0\nmov r0 r1"),
    ("parity", "decjz r0 4\ndecjz r0 3\njmp 0\ninc r1\nmov r0 r1"),
    ("sign", "decjz r0 2\nconst r0 1"),
    (
        "triangular",
        "decjz r0 7\ninc r1\nmov r2 r0\ndecjz r2 6\ninc r1\njmp 3\njmp 0\nmov r0 r1",
    ),
    ("square", "mov r1 r0\ndecjz r1 6\nmov r2 r0\ndecjz r2 1\ninc r3\njmp 3\nmov r0 r3"),
    (
        "fib",
        "inc r2\ndecjz r0 9\nmov r3 r2\nmov r4 r1\ndecjz r4 7\ninc r2\njmp 4\nmov r1 r3\njmp 1\nmov r0 r1",
    ),
    ("pow2", "inc r1\ndecjz r0 6\nmov r2 r1\ndecjz r2 1\ninc r1\njmp 3\nmov r0 r1"),
];

/// Addition on paired input `<x,y>`.
pub const ADD_PROGRAM: &str = "unpair r0 r1 r2\ndecjz r2 4\ninc r1\njmp 1\nmov r0 r1";

/// A program that never halts.
pub const LOOP_PROGRAM: &str = "jmp 0";

pub fn reference_code(name: &str) -> Option<Code> {
    match name {
        "add" => Some(ADD_PROGRAM),
        "loop" => Some(LOOP_PROGRAM),
        _ => REFERENCE_PROGRAMS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s),
    }
    .map(|src| Code::assemble(src).expect("reference program assembles"))
}

/// Objects of the computable world: sets of naturals with an equivalence.
///
/// Membership and equivalence for exponentials are checked on samples of
/// the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RecObject {
    /// `{0}`.
    Terminal,
    Initial,
    Nat,
    /// `{0, ..., k-1}`.
    Finite(u64),
    Product(Box<RecObject>, Box<RecObject>),
    /// Tagged `<0,a>` or `<1,b>`.
    Coproduct(Box<RecObject>, Box<RecObject>),
    /// Codes mapping members to members, respecting equivalence.
    Exp(Box<RecObject>, Box<RecObject>),
}

/// A coded map between objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecMor {
    pub src: RecObject,
    pub tgt: RecObject,
    pub code: Code,
}

/// Result of comparing two maps on samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampledEq {
    Equal { samples: usize },
    Differ { input: Nat },
    /// A run exhausted its fuel before the comparison was settled.
    Undetermined { input: Nat },
}

/// The category of coded computable maps with sampled equality.
#[derive(Clone, Debug)]
pub struct RecWorld {
    pub fuel: u64,
    /// Naturals `0..=samples` stand in for `N` when sampling.
    pub samples: u64,
    /// Cap on the number of samples per object.
    pub max_samples: usize,
}

impl Default for RecWorld {
    fn default() -> Self {
        RecWorld { fuel: 100_000, samples: 6, max_samples: 256 }
    }
}

/// The computable world with default fuel and sample sizes.
pub fn rec_bcc() -> RecWorld {
    RecWorld::default()
}

fn prod(a: &RecObject, b: &RecObject) -> RecObject {
    RecObject::Product(Box::new(a.clone()), Box::new(b.clone()))
}

impl RecWorld {
    pub fn mor(&self, src: &RecObject, tgt: &RecObject, prog: &[Instr]) -> RecMor {
        RecMor { src: src.clone(), tgt: tgt.clone(), code: Code::from_program(prog) }
    }

    pub fn apply(&self, e: &Code, x: &Nat) -> Result<Nat, RecError> {
        apply_checked(e, x, self.fuel)
    }

    /// Enumerated members, bounded by the sample settings.
    pub fn samples(&self, a: &RecObject) -> Vec<Nat> {
        let cap = self.max_samples;
        let mut out: Vec<Nat> = match a {
            RecObject::Terminal => vec![Nat::zero()],
            RecObject::Initial => vec![],
            RecObject::Nat => (0..=self.samples).map(Nat::from).collect(),
            RecObject::Finite(k) => (0..*k).map(Nat::from).collect(),
            RecObject::Product(x, y) => {
                let (xs, ys) = (self.samples(x), self.samples(y));
                xs.iter().flat_map(|u| ys.iter().map(move |v| pair(u, v))).take(cap).collect()
            }
            RecObject::Coproduct(x, y) => {
                let left = self.samples(x).into_iter().map(|u| pair(&Nat::zero(), &u));
                let right = self.samples(y).into_iter().map(|v| pair(&Nat::from(1), &v));
                left.chain(right).collect()
            }
            RecObject::Exp(x, y) => {
                let mut v: Vec<Nat> = self.samples(y).iter().map(|b| const_code(b).0).collect();
                if x == y {
                    v.push(Code::from_program(&[]).0);
                }
                if **x == RecObject::Nat && **y == RecObject::Nat {
                    v.push(reference_code("succ").expect("builtin").0);
                }
                v
            }
        };
        out.truncate(cap);
        out
    }

    pub fn member(&self, a: &RecObject, n: &Nat) -> Result<bool, RecError> {
        Ok(match a {
            RecObject::Terminal => n.is_zero(),
            RecObject::Initial => false,
            RecObject::Nat => true,
            RecObject::Finite(k) => n.to_u64().is_some_and(|v| v < *k),
            RecObject::Product(x, y) => match unpair(n) {
                Ok((u, v)) => self.member(x, &u)? && self.member(y, &v)?,
                Err(_) => false,
            },
            RecObject::Coproduct(x, y) => match unpair(n) {
                Ok((t, v)) => match t.to_u64() {
                    Some(0) => self.member(x, &v)?,
                    Some(1) => self.member(y, &v)?,
                    _ => false,
                },
                Err(_) => false,
            },
            RecObject::Exp(x, y) => {
                let e = Code(n.clone());
                for s in self.samples(x) {
                    match run(&e, &s, self.fuel).outcome {
                        Outcome::Halted(v) => {
                            if !self.member(y, &v)? {
                                return Ok(false);
                            }
                        }
                        Outcome::OutOfFuel => return Err(RecError::Fuel),
                        Outcome::Fault(_) => return Ok(false),
                    }
                }
                true
            }
        })
    }

    /// Equivalence of two members.
    pub fn equiv(&self, a: &RecObject, m: &Nat, n: &Nat) -> Result<bool, RecError> {
        Ok(match a {
            RecObject::Product(x, y) => {
                let ((m0, m1), (n0, n1)) = (unpair(m)?, unpair(n)?);
                self.equiv(x, &m0, &n0)? && self.equiv(y, &m1, &n1)?
            }
            RecObject::Coproduct(x, y) => {
                let ((mt, mv), (nt, nv)) = (unpair(m)?, unpair(n)?);
                mt == nt && self.equiv(if mt.is_zero() { x } else { y }, &mv, &nv)?
            }
            RecObject::Exp(x, y) => {
                for s in self.samples(x) {
                    let (u, v) = (self.apply(&Code(m.clone()), &s)?, self.apply(&Code(n.clone()), &s)?);
                    if !self.equiv(y, &u, &v)? {
                        return Ok(false);
                    }
                }
                true
            }
            _ => m == n,
        })
    }

    /// Compares `f` and `g` on the samples of their common source.
    pub fn sampled_equal(&self, f: &RecMor, g: &RecMor) -> Result<SampledEq, RecError> {
        let xs = self.samples(&f.src);
        for x in &xs {
            let (u, v) = match (self.apply(&f.code, x), self.apply(&g.code, x)) {
                (Ok(u), Ok(v)) => (u, v),
                (Err(RecError::Fuel), _) | (_, Err(RecError::Fuel)) => return Ok(SampledEq::Undetermined { input: x.clone() }),
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            match self.equiv(&f.tgt, &u, &v) {
                Ok(true) => {}
                Ok(false) => return Ok(SampledEq::Differ { input: x.clone() }),
                Err(RecError::Fuel) => return Ok(SampledEq::Undetermined { input: x.clone() }),
                Err(_) => return Ok(SampledEq::Differ { input: x.clone() }),
            }
        }
        Ok(SampledEq::Equal { samples: xs.len() })
    }
}

fn mismatch(what: &str, a: &RecObject, b: &RecObject) -> ModelError {
    ModelError::Mismatch(format!("{what}: {a:?} vs {b:?}"))
}

impl Model for RecWorld {
    type Obj = RecObject;
    type Mor = RecMor;

    fn id(&self, a: &RecObject) -> Result<RecMor, ModelError> {
        Ok(self.mor(a, a, &[]))
    }

    fn compose(&self, g: &RecMor, f: &RecMor) -> Result<RecMor, ModelError> {
        if f.tgt != g.src {
            return Err(mismatch("compose", &f.tgt, &g.src));
        }
        Ok(self.mor(
            &f.src,
            &g.tgt,
            &[
                Instr::Const(1, f.code.0.clone()),
                Instr::Call(0, 1, 0),
                Instr::Const(1, g.code.0.clone()),
                Instr::Call(0, 1, 0),
            ],
        ))
    }

    fn terminal(&self) -> RecObject {
        RecObject::Terminal
    }

    fn to_terminal(&self, a: &RecObject) -> Result<RecMor, ModelError> {
        Ok(self.mor(a, &RecObject::Terminal, &[Instr::Const(0, Nat::zero())]))
    }

    fn initial(&self) -> Result<RecObject, ModelError> {
        Ok(RecObject::Initial)
    }

    fn from_initial(&self, a: &RecObject) -> Result<RecMor, ModelError> {
        Ok(self.mor(&RecObject::Initial, a, &[]))
    }

    fn product(&self, a: &RecObject, b: &RecObject) -> Result<RecObject, ModelError> {
        Ok(prod(a, b))
    }

    fn proj0(&self, a: &RecObject, b: &RecObject) -> Result<RecMor, ModelError> {
        Ok(self.mor(&prod(a, b), a, &[Instr::Unpair(0, 0, 1)]))
    }

    fn proj1(&self, a: &RecObject, b: &RecObject) -> Result<RecMor, ModelError> {
        Ok(self.mor(&prod(a, b), b, &[Instr::Unpair(0, 1, 0)]))
    }

    fn pair(&self, f: &RecMor, g: &RecMor) -> Result<RecMor, ModelError> {
        if f.src != g.src {
            return Err(mismatch("pair", &f.src, &g.src));
        }
        Ok(self.mor(
            &f.src,
            &prod(&f.tgt, &g.tgt),
            &[
                Instr::Mov(3, 0),
                Instr::Const(1, f.code.0.clone()),
                Instr::Call(1, 1, 3),
                Instr::Const(2, g.code.0.clone()),
                Instr::Call(2, 2, 3),
                Instr::Pair(0, 1, 2),
            ],
        ))
    }

    fn coproduct(&self, a: &RecObject, b: &RecObject) -> Result<RecObject, ModelError> {
        Ok(RecObject::Coproduct(Box::new(a.clone()), Box::new(b.clone())))
    }

    fn inj0(&self, a: &RecObject, b: &RecObject) -> Result<RecMor, ModelError> {
        let ab = self.coproduct(a, b)?;
        Ok(self.mor(a, &ab, &[Instr::Const(1, Nat::zero()), Instr::Pair(0, 1, 0)]))
    }

    fn inj1(&self, a: &RecObject, b: &RecObject) -> Result<RecMor, ModelError> {
        let ab = self.coproduct(a, b)?;
        Ok(self.mor(b, &ab, &[Instr::Const(1, Nat::from(1)), Instr::Pair(0, 1, 0)]))
    }

    fn copair(&self, f: &RecMor, g: &RecMor) -> Result<RecMor, ModelError> {
        if f.tgt != g.tgt {
            return Err(mismatch("copair", &f.tgt, &g.tgt));
        }
        let src = self.coproduct(&f.src, &g.src)?;
        Ok(self.mor(
            &src,
            &f.tgt,
            &[
                Instr::Unpair(0, 1, 0),
                Instr::DecJz(1, 4),
                Instr::Const(2, g.code.0.clone()),
                Instr::Jmp(5),
                Instr::Const(2, f.code.0.clone()),
                Instr::Call(0, 2, 0),
            ],
        ))
    }

    fn exponential(&self, a: &RecObject, b: &RecObject) -> Result<RecObject, ModelError> {
        Ok(RecObject::Exp(Box::new(a.clone()), Box::new(b.clone())))
    }

    fn eval(&self, a: &RecObject, b: &RecObject) -> Result<RecMor, ModelError> {
        let src = prod(&self.exponential(a, b)?, a);
        Ok(self.mor(&src, b, &[Instr::Unpair(0, 1, 2), Instr::Call(0, 1, 2)]))
    }

    fn curry(&self, c: &RecObject, a: &RecObject, b: &RecObject, f: &RecMor) -> Result<RecMor, ModelError> {
        if f.src != prod(c, a) || f.tgt != *b {
            return Err(mismatch("curry", &f.src, &prod(c, a)));
        }
        Ok(RecMor { src: c.clone(), tgt: self.exponential(a, b)?, code: smn_builder(&f.code) })
    }

    fn mor_eq(&self, f: &RecMor, g: &RecMor) -> Result<bool, ModelError> {
        if f.src != g.src || f.tgt != g.tgt {
            return Ok(false);
        }
        match self.sampled_equal(f, g) {
            Ok(SampledEq::Equal { .. }) => Ok(true),
            Ok(SampledEq::Differ { .. }) => Ok(false),
            Ok(SampledEq::Undetermined { input }) => Err(ModelError::Fuel(format!("comparing maps at input {input}"))),
            Err(e) => Err(ModelError::Mismatch(e.to_string())),
        }
    }

    fn points(&self, a: &RecObject) -> Result<Vec<RecMor>, ModelError> {
        Ok(self
            .samples(a)
            .iter()
            .map(|v| RecMor { src: RecObject::Terminal, tgt: a.clone(), code: const_code(v) })
            .collect())
    }

    fn point_summand(&self, a: &RecObject, b: &RecObject, r: &RecMor) -> Result<Option<(bool, RecMor)>, ModelError> {
        let v = self.apply(&r.code, &Nat::zero()).map_err(|e| match e {
            RecError::Fuel => ModelError::Fuel("evaluating a point".into()),
            other => ModelError::Mismatch(other.to_string()),
        })?;
        let Ok((tag, x)) = unpair(&v) else { return Ok(None) };
        let point = |o: &RecObject| RecMor { src: RecObject::Terminal, tgt: o.clone(), code: const_code(&x) };
        Ok(match tag.to_u64() {
            Some(0) => Some((false, point(a))),
            Some(1) => Some((true, point(b))),
            _ => None,
        })
    }

    fn nno(&self) -> Result<RecObject, ModelError> {
        Ok(RecObject::Nat)
    }

    fn zero(&self) -> Result<RecMor, ModelError> {
        Ok(self.mor(&RecObject::Terminal, &RecObject::Nat, &[Instr::Const(0, Nat::zero())]))
    }

    fn succ(&self) -> Result<RecMor, ModelError> {
        Ok(self.mor(&RecObject::Nat, &RecObject::Nat, &[Instr::Inc(0)]))
    }

    fn iterate(&self, a: &RecObject, base: &RecMor, step: &RecMor) -> Result<RecMor, ModelError> {
        if base.src != RecObject::Terminal || base.tgt != *a || step.src != *a || step.tgt != *a {
            return Err(ModelError::Mismatch("iteration needs 1 -> A and A -> A".into()));
        }
        Ok(self.mor(
            &RecObject::Nat,
            a,
            &[
                Instr::Mov(1, 0),
                Instr::Const(0, Nat::zero()),
                Instr::Const(2, base.code.0.clone()),
                Instr::Call(0, 2, 0),
                Instr::Const(2, step.code.0.clone()),
                Instr::DecJz(1, 8),
                Instr::Call(0, 2, 0),
                Instr::Jmp(5),
            ],
        ))
    }

    /// Numerals as straight-line increment programs.
    fn numeral(&self, k: u64) -> Result<RecMor, ModelError> {
        let mut prog = vec![Instr::Const(0, Nat::zero())];
        prog.extend((0..k).map(|_| Instr::Inc(0)));
        Ok(self.mor(&RecObject::Terminal, &RecObject::Nat, &prog))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        assert_eq!(pair_u64(0, 0), Nat::from(1));
        assert_eq!(pair_u64(3, 2), Nat::from(40));
        assert_eq!(unpair(&Nat::zero()), Err(RecError::UnpairZero));
        let big = pair(&Nat::from(MAX_BITS + 5), &Nat::from(3));
        assert!(matches!(big, Nat::Pair(..)));
        assert_eq!(unpair(&big).unwrap(), (Nat::from(MAX_BITS + 5), Nat::from(3)));
    }

    #[test]
    fn canonical_form_agrees_with_integers() {
        let a = 100u64;
        let b = BigUint::from(1u8) << (MAX_BITS as usize);
        let direct = Nat::from_big(((b.clone() << 1u8) + 1u8) << a);
        assert_eq!(pair(&Nat::from(a), &Nat::from_big(b)), direct);
        assert_eq!(direct.bit_len(), Some(a + MAX_BITS + 2));
    }

    #[test]
    fn apply_examples() {
        let succ = reference_code("succ").unwrap();
        assert_eq!(apply(&succ, &Nat::from(5), 100), Some(Nat::from(6)));
        let lp = reference_code("loop").unwrap();
        for fuel in [1, 10, 10_000] {
            assert_eq!(apply(&lp, &Nat::zero(), fuel), None);
        }
        assert_eq!(run(&lp, &Nat::zero(), 7).outcome, Outcome::OutOfFuel);
    }

    #[test]
    fn smn_examples() {
        let add = reference_code("add").unwrap();
        assert_eq!(apply(&smn(&add, &Nat::from(2)), &Nat::from(3), 1000), Some(Nat::from(5)));
        let builder = smn_builder(&add);
        assert_eq!(apply(&builder, &Nat::from(2), 100), Some(smn(&add, &Nat::from(2)).0));
    }

    #[test]
    fn assembly_roundtrip() {
        for (_, src) in REFERENCE_PROGRAMS {
            let c = Code::assemble(src).unwrap();
            assert_eq!(Code::assemble(&c.disassemble()).unwrap(), c);
            assert_eq!(Code::from_program(&c.program()), c);
        }
        assert!(matches!(Code::assemble("inc r99"), Err(RecError::Assembly { line: 1, .. })));
        assert!(matches!(Code::assemble("halt\nfrob r1"), Err(RecError::Assembly { line: 2, .. })));
    }

    #[test]
    fn decoding_is_total() {
        for k in 0..2000u64 {
            let c = Code(Nat::from(k));
            let _ = run(&c, &Nat::from(3), 50);
        }
    }

    #[test]
    fn exponential_law_for_successor() {
        let m = rec_bcc();
        let n = RecObject::Nat;
        let f = m.succ().unwrap();
        let t = m.terminal();
        // f ∘ p1 : 1 × N -> N, curried to a point of [N,N].
        let fp = m.compose(&f, &m.proj1(&t, &n).unwrap()).unwrap();
        let lam = m.curry(&t, &n, &n, &fp).unwrap();
        let ev = m.eval(&n, &n).unwrap();
        for a in 0..=8u64 {
            let point = m.numeral(a).unwrap();
            let lhs = m.compose(&ev, &m.pair(&lam, &point).unwrap()).unwrap();
            let rhs = m.compose(&f, &point).unwrap();
            assert!(m.mor_eq(&lhs, &rhs).unwrap(), "a = {a}");
        }
    }

    #[test]
    fn iterate_and_numerals() {
        let m = rec_bcc();
        for k in 0..=10u64 {
            let p = m.numeral(k).unwrap();
            assert_eq!(m.apply(&p.code, &Nat::zero()).unwrap(), Nat::from(k));
        }
        let double = m.iterate(&RecObject::Nat, &m.numeral(0).unwrap(), &m.compose(&m.succ().unwrap(), &m.succ().unwrap()).unwrap()).unwrap();
        assert_eq!(m.apply(&double.code, &Nat::from(7)).unwrap(), Nat::from(14));
    }

    #[test]
    fn fuel_reported_distinctly() {
        let m = RecWorld { fuel: 50, ..RecWorld::default() };
        let lp = RecMor { src: RecObject::Nat, tgt: RecObject::Nat, code: reference_code("loop").unwrap() };
        let id = m.id(&RecObject::Nat).unwrap();
        assert!(matches!(m.sampled_equal(&lp, &id).unwrap(), SampledEq::Undetermined { .. }));
        assert!(matches!(m.mor_eq(&lp, &id), Err(ModelError::Fuel(_))));
        let succ = m.succ().unwrap();
        assert!(!m.mor_eq(&succ, &id).unwrap());
    }
}
