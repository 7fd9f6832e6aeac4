//! βη-conversion on proof terms.
//!
//! Every rule has a contracting orientation, called forward:
//!
//! | rule       | forward                                   |
//! |------------|-------------------------------------------|
//! | `beta-and` | `fst (a, b)` to `a`, `snd (a, b)` to `b`  |
//! | `beta-imp` | `(fun x => b) a` to `b[a/x]`              |
//! | `beta-or-l`| `case inl d of ...` to the left branch    |
//! | `beta-or-r`| `case inr d of ...` to the right branch   |
//! | `eta-and`  | `(fst u, snd u)` to `u`                   |
//! | `eta-imp`  | `fun x => f x` to `f` (x not free in f)   |
//! | `eta-or`   | `case u of inl a => inl a \| inr b => inr b` to `u` |
//! | `eta-top`  | any term of type `T` to `unit`            |
//! | `eta-bot`  | any term, under a hypothesis of type `F`, to `abort` of that hypothesis |
//!
//! The `eta-bot` rule picks the innermost `F`-typed hypothesis in scope.
//! Bounded search explores forward steps from both ends plus η-expansions at
//! non-introduction positions, so the traces it returns can contain backward
//! steps of any rule.

use crate::syntax::{infer, Context, Formula, ProofTerm, TypeError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

use ProofTerm as P;

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    BetaAnd,
    BetaImp,
    BetaOrL,
    BetaOrR,
    EtaAnd,
    EtaImp,
    EtaOr,
    EtaTop,
    EtaBot,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::BetaAnd,
        Rule::BetaImp,
        Rule::BetaOrL,
        Rule::BetaOrR,
        Rule::EtaAnd,
        Rule::EtaImp,
        Rule::EtaOr,
        Rule::EtaTop,
        Rule::EtaBot,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::BetaAnd => "beta-and",
            Rule::BetaImp => "beta-imp",
            Rule::BetaOrL => "beta-or-l",
            Rule::BetaOrR => "beta-or-r",
            Rule::EtaAnd => "eta-and",
            Rule::EtaImp => "eta-imp",
            Rule::EtaOr => "eta-or",
            Rule::EtaTop => "eta-top",
            Rule::EtaBot => "eta-bot",
        }
    }

    pub fn from_tag(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.tag() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    Fwd,
    Bwd,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Fwd => Dir::Bwd,
            Dir::Bwd => Dir::Fwd,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    pub path: Vec<usize>,
    pub dir: Dir,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@", self.rule.tag())?;
        if self.path.is_empty() {
            write!(f, "/")?;
        }
        for k in &self.path {
            write!(f, "/{k}")?;
        }
        let d = match self.dir {
            Dir::Fwd => "fwd",
            Dir::Bwd => "bwd",
        };
        write!(f, "({d})")
    }
}

impl std::str::FromStr for Step {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (rule, rest) = s.split_once('@').ok_or("missing '@'")?;
        let rule = Rule::from_tag(rule).ok_or_else(|| format!("unknown rule '{rule}'"))?;
        let open = rest.find('(').ok_or("missing direction")?;
        let (path, dir) = rest.split_at(open);
        let dir = match dir {
            "(fwd)" => Dir::Fwd,
            "(bwd)" => Dir::Bwd,
            _ => return Err(format!("bad direction '{dir}'")),
        };
        let path = if path == "/" {
            vec![]
        } else {
            path.strip_prefix('/')
                .ok_or("path must start with '/'")?
                .split('/')
                .map(|k| k.parse::<usize>().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?
        };
        Ok(Step { rule, path, dir })
    }
}

/// A chain of single βη steps from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionTrace {
    pub steps: Vec<Step>,
    /// `terms[k]` is the term before step `k`; the last entry is the target.
    pub terms: Vec<ProofTerm>,
}

impl ConversionTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn source(&self) -> &ProofTerm {
        &self.terms[0]
    }

    pub fn target(&self) -> &ProofTerm {
        self.terms.last().expect("trace holds at least its source")
    }

    /// One `RULE@PATH(DIR)` line per step.
    pub fn serialize(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }

    /// Re-checks every step: the rule applies at the recorded position and
    /// every intermediate term has the source's type.
    pub fn replay(&self, ctx: &Context) -> Result<(), ReplayError> {
        if self.terms.len() != self.steps.len() + 1 {
            return Err(ReplayError::Shape);
        }
        let ty = crate::syntax::typecheck(ctx, &self.terms[0])?;
        let env = ctx.formulas();
        for (k, step) in self.steps.iter().enumerate() {
            let (before, after) = match step.dir {
                Dir::Fwd => (&self.terms[k], &self.terms[k + 1]),
                Dir::Bwd => (&self.terms[k + 1], &self.terms[k]),
            };
            if !same_outside(before, after, &step.path) {
                return Err(ReplayError::Step(k));
            }
            let (sub_env, sub) = locate(&env, before, &step.path).ok_or(ReplayError::Step(k))?;
            let expected = subterm_at(after, &step.path).ok_or(ReplayError::Step(k))?;
            match contract(step.rule, &sub_env, sub) {
                Some(r) if r == *expected => {}
                _ => return Err(ReplayError::Step(k)),
            }
            let t = crate::syntax::typecheck(ctx, &self.terms[k + 1])?;
            if t != ty {
                return Err(ReplayError::Step(k));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ConversionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("trace has mismatched step and term counts")]
    Shape,
    #[error("step {0} does not replay")]
    Step(usize),
    #[error(transparent)]
    Type(#[from] TypeError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("`{0}` leaves the T, /\\, -> fragment")]
    Fragment(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("terms have different types: {0} and {1}")]
    TypeDiffers(Formula, Formula),
}

/// Contracts a β-redex sitting at the root, if there is one.
fn beta_root(t: &ProofTerm) -> Option<(Rule, ProofTerm)> {
    match t {
        P::Proj0(x) => match &**x {
            P::Pair(a, _) => Some((Rule::BetaAnd, (**a).clone())),
            _ => None,
        },
        P::Proj1(x) => match &**x {
            P::Pair(_, b) => Some((Rule::BetaAnd, (**b).clone())),
            _ => None,
        },
        P::App(f, x) => match &**f {
            P::Lam(_, body) => Some((Rule::BetaImp, body.instantiate(x))),
            _ => None,
        },
        P::Case(s, l, r) => match &**s {
            P::Inl(d, _) => Some((Rule::BetaOrL, l.instantiate(d))),
            P::Inr(d, _) => Some((Rule::BetaOrR, r.instantiate(d))),
            _ => None,
        },
        _ => None,
    }
}

/// Contracts the leftmost-outermost β-redex.
pub fn beta_step(t: &ProofTerm) -> Option<ProofTerm> {
    if let Some((_, r)) = beta_root(t) {
        return Some(r);
    }
    let mut out = t.clone();
    let mut done = false;
    for c in out.children_mut() {
        if let Some(r) = beta_step(c) {
            *c = r;
            done = true;
            break;
        }
    }
    done.then_some(out)
}

/// Iterates [`beta_step`]; `None` if the limit is hit first.
pub fn beta_normalize(t: &ProofTerm, limit: usize) -> Option<(ProofTerm, usize)> {
    let mut cur = t.clone();
    for n in 0..=limit {
        match beta_step(&cur) {
            Some(next) => cur = next,
            None => return Some((cur, n)),
        }
    }
    None
}

fn innermost_bot(env: &[Formula]) -> Option<usize> {
    env.iter().rev().position(|a| *a == Formula::Bot)
}

/// Forward application of `rule` at the root of `u`, typed under `env`.
pub fn contract(rule: Rule, env: &[Formula], u: &ProofTerm) -> Option<ProofTerm> {
    match rule {
        Rule::BetaAnd | Rule::BetaImp | Rule::BetaOrL | Rule::BetaOrR => {
            beta_root(u).filter(|(r, _)| *r == rule).map(|(_, t)| t)
        }
        Rule::EtaAnd => match u {
            P::Pair(a, b) => match (&**a, &**b) {
                (P::Proj0(x), P::Proj1(y)) if x == y => Some((**x).clone()),
                _ => None,
            },
            _ => None,
        },
        Rule::EtaImp => match u {
            P::Lam(_, body) => match &**body {
                P::App(f, x) if **x == P::Var(0) && !f.has_free(0) => Some(f.shift(-1, 0)),
                _ => None,
            },
            _ => None,
        },
        Rule::EtaOr => match u {
            P::Case(s, l, r) => {
                let shape = matches!(&**l, P::Inl(a, _) if **a == P::Var(0))
                    && matches!(&**r, P::Inr(b, _) if **b == P::Var(0));
                if !shape {
                    return None;
                }
                let mut e = env.to_vec();
                let ts = infer(&mut e, s).ok()?;
                let tu = infer(&mut e, u).ok()?;
                (ts == tu).then(|| (**s).clone())
            }
            _ => None,
        },
        Rule::EtaTop => {
            if *u == P::Unit {
                return None;
            }
            let mut e = env.to_vec();
            (infer(&mut e, u).ok()? == Formula::Top).then_some(P::Unit)
        }
        Rule::EtaBot => {
            let k = innermost_bot(env)?;
            let mut e = env.to_vec();
            let a = infer(&mut e, u).ok()?;
            let target = P::abort(P::Var(k), a);
            (*u != target).then_some(target)
        }
    }
}

/// Deterministic η-expansion of `u : ty`, used as a backward step in search.
fn expand(rule: Rule, ty: &Formula, u: &ProofTerm) -> Option<ProofTerm> {
    match (rule, ty) {
        (Rule::EtaAnd, Formula::And(..)) if !matches!(u, P::Pair(..)) => {
            Some(P::pair(P::proj0(u.clone()), P::proj1(u.clone())))
        }
        (Rule::EtaImp, Formula::Imp(a, _)) if !matches!(u, P::Lam(..)) => {
            Some(P::lam((**a).clone(), P::app(u.shift(1, 0), P::Var(0))))
        }
        (Rule::EtaOr, Formula::Or(a, b)) if !matches!(u, P::Inl(..) | P::Inr(..)) => Some(P::case(
            u.clone(),
            P::inl(P::Var(0), (**b).clone()),
            P::inr(P::Var(0), (**a).clone()),
        )),
        _ => None,
    }
}

/// The subterm at `path` together with the hypotheses in scope there.
fn locate<'a>(env: &[Formula], t: &'a ProofTerm, path: &[usize]) -> Option<(Vec<Formula>, &'a ProofTerm)> {
    let mut env = env.to_vec();
    let mut cur = t;
    for &k in path {
        let next = match (cur, k) {
            (P::Lam(a, body), 0) => {
                env.push(a.clone());
                &**body
            }
            (P::Case(s, l, r), 1 | 2) => {
                let mut e = env.clone();
                let Formula::Or(a, b) = infer(&mut e, s).ok()? else { return None };
                env.push(if k == 1 { *a } else { *b });
                if k == 1 {
                    &**l
                } else {
                    &**r
                }
            }
            _ => cur.children().get(k)?.0,
        };
        cur = next;
    }
    Some((env, cur))
}

fn subterm_at<'a>(t: &'a ProofTerm, path: &[usize]) -> Option<&'a ProofTerm> {
    let mut cur = t;
    for &k in path {
        cur = cur.children().get(k)?.0;
    }
    Some(cur)
}

fn replace_at(t: &ProofTerm, path: &[usize], new: &ProofTerm) -> ProofTerm {
    match path.split_first() {
        None => new.clone(),
        Some((&k, rest)) => {
            let mut out = t.clone();
            let mut kids = out.children_mut();
            *kids[k] = replace_at(kids[k], rest, new);
            out
        }
    }
}

fn same_outside(a: &ProofTerm, b: &ProofTerm, path: &[usize]) -> bool {
    match path.split_first() {
        None => true,
        Some((&k, rest)) => {
            if std::mem::discriminant(a) != std::mem::discriminant(b) {
                return false;
            }
            let ka = a.children();
            let kb = b.children();
            if ka.len() != kb.len() || k >= ka.len() {
                return false;
            }
            let shell_eq = a.map_children(|_, _| P::Unit) == b.map_children(|_, _| P::Unit);
            shell_eq
                && ka.iter().zip(&kb).enumerate().all(|(i, (x, y))| {
                    if i == k {
                        same_outside(x.0, y.0, rest)
                    } else {
                        x.0 == y.0
                    }
                })
        }
    }
}

/// All single steps available from `t`, sorted by step.
fn moves(env: &[Formula], t: &ProofTerm) -> Vec<(Step, ProofTerm)> {
    let mut found = Vec::new();
    let mut env = env.to_vec();
    let mut path = Vec::new();
    collect_moves(&mut env, t, &mut path, &mut found);
    let mut out: Vec<(Step, ProofTerm)> =
        found.into_iter().map(|(step, sub)| (step.clone(), replace_at(t, &step.path, &sub))).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn collect_moves(env: &mut Vec<Formula>, u: &ProofTerm, path: &mut Vec<usize>, out: &mut Vec<(Step, ProofTerm)>) {
    let Ok(ty) = infer(&mut env.clone(), u) else { return };
    for rule in Rule::ALL {
        if let Some(r) = contract(rule, env, u) {
            out.push((Step { rule, path: path.clone(), dir: Dir::Fwd }, r));
        }
        if let Some(r) = expand(rule, &ty, u) {
            out.push((Step { rule, path: path.clone(), dir: Dir::Bwd }, r));
        }
    }
    let scrut_ty = match u {
        P::Case(s, _, _) => infer(&mut env.clone(), s).ok(),
        _ => None,
    };
    for (k, (child, binders)) in u.children().into_iter().enumerate() {
        let pushed = match (u, binders) {
            (P::Lam(a, _), 1) => Some(a.clone()),
            (P::Case(..), 1) => match &scrut_ty {
                Some(Formula::Or(a, b)) => Some(if k == 1 { (**a).clone() } else { (**b).clone() }),
                _ => return,
            },
            _ => None,
        };
        if let Some(a) = &pushed {
            env.push(a.clone());
        }
        path.push(k);
        collect_moves(env, child, path, out);
        path.pop();
        if pushed.is_some() {
            env.pop();
        }
    }
}

struct Side {
    seen: HashMap<ProofTerm, Vec<Step>>,
    frontier: Vec<ProofTerm>,
}

impl Side {
    fn new(t: &ProofTerm) -> Self {
        let mut seen = HashMap::new();
        seen.insert(t.clone(), Vec::new());
        Side { seen, frontier: vec![t.clone()] }
    }
}

fn rebuild(env: &[Formula], start: &ProofTerm, steps: Vec<Step>, mid_terms: Vec<ProofTerm>) -> ConversionTrace {
    let _ = env;
    let mut terms = vec![start.clone()];
    terms.extend(mid_terms);
    ConversionTrace { steps, terms }
}

fn apply_forward_steps(env: &[Formula], start: &ProofTerm, steps: &[Step]) -> Vec<ProofTerm> {
    let mut cur = start.clone();
    let mut out = Vec::new();
    for step in steps {
        let (_, sub) = locate(env, &cur, &step.path).expect("recorded step position exists");
        let ty = infer(&mut locate(env, &cur, &step.path).unwrap().0, sub).expect("search keeps terms typed");
        let new = match step.dir {
            Dir::Fwd => contract(step.rule, &locate(env, &cur, &step.path).unwrap().0, sub),
            Dir::Bwd => expand(step.rule, &ty, sub),
        }
        .expect("recorded step applies");
        cur = replace_at(&cur, &step.path, &new);
        out.push(cur.clone());
    }
    out
}

/// Breadth-first search for a βη-conversion between `t` and `s`.
///
/// `budget` bounds the number of distinct terms visited. Terms larger than
/// twice the larger input plus 16 are not explored. Among the shortest
/// traces found at the meeting layer, the least under step ordering wins.
pub fn bounded_convertible(ctx: &Context, t: &ProofTerm, s: &ProofTerm, budget: usize) -> Option<ConversionTrace> {
    let env = ctx.formulas();
    if t == s {
        return Some(ConversionTrace { steps: vec![], terms: vec![t.clone()] });
    }
    let cap = 2 * t.size().max(s.size()) + 16;
    let mut left = Side::new(t);
    let mut right = Side::new(s);
    let mut visited = 2usize;
    loop {
        let grow_left = left.frontier.len() <= right.frontier.len();
        let (side, other) = if grow_left { (&mut left, &right) } else { (&mut right, &left) };
        let mut next = Vec::new();
        for node in std::mem::take(&mut side.frontier) {
            let base = side.seen[&node].clone();
            for (step, nb) in moves(&env, &node) {
                if nb.size() > cap || side.seen.contains_key(&nb) {
                    continue;
                }
                let mut tr = base.clone();
                tr.push(step);
                side.seen.insert(nb.clone(), tr);
                next.push(nb);
                visited += 1;
                if visited > budget {
                    return None;
                }
            }
        }
        let mut best: Option<Vec<Step>> = None;
        let mut best_meet: Option<ProofTerm> = None;
        for m in &next {
            if let Some(o) = other.seen.get(m) {
                let (lt, rt) = if grow_left { (&side.seen[m], o) } else { (o, &side.seen[m]) };
                let mut cand = lt.clone();
                cand.extend(rt.iter().rev().map(|st| Step { dir: st.dir.flip(), ..st.clone() }));
                if best.as_ref().is_none_or(|b| (cand.len(), &cand) < (b.len(), b)) {
                    best = Some(cand);
                    best_meet = Some(m.clone());
                }
            }
        }
        if let (Some(steps), Some(meet)) = (best, best_meet) {
            let (lsteps, rsteps) = (left.seen[&meet].clone(), right.seen[&meet].clone());
            let mut terms = apply_forward_steps(&env, t, &lsteps);
            let mut rterms = vec![s.clone()];
            rterms.extend(apply_forward_steps(&env, s, &rsteps));
            rterms.reverse();
            terms.extend(rterms.into_iter().skip(1));
            return Some(rebuild(&env, t, steps, terms));
        }
        if next.is_empty() {
            return None;
        }
        side.frontier = next;
    }
}

#[derive(Clone, Debug)]
enum Val {
    Lam(Rc<Vec<Val>>, Rc<ProofTerm>),
    Pair(Rc<Val>, Rc<Val>),
    Unit,
    Ne(Rc<Ne>),
}

#[derive(Debug)]
enum Ne {
    Lvl(usize),
    App(Rc<Ne>, Val),
    Fst(Rc<Ne>),
    Snd(Rc<Ne>),
}

fn eval(env: &[Val], t: &ProofTerm) -> Val {
    match t {
        P::Var(i) => env[env.len() - 1 - i].clone(),
        P::Unit => Val::Unit,
        P::Pair(a, b) => Val::Pair(Rc::new(eval(env, a)), Rc::new(eval(env, b))),
        P::Proj0(x) => vproj(eval(env, x), false),
        P::Proj1(x) => vproj(eval(env, x), true),
        P::Lam(_, body) => Val::Lam(Rc::new(env.to_vec()), Rc::new((**body).clone())),
        P::App(f, x) => vapp(eval(env, f), eval(env, x)),
        _ => unreachable!("fragment checked before evaluation"),
    }
}

fn vproj(v: Val, second: bool) -> Val {
    match v {
        Val::Pair(a, b) => (*if second { b } else { a }).clone(),
        Val::Ne(n) => Val::Ne(Rc::new(if second { Ne::Snd(n) } else { Ne::Fst(n) })),
        _ => unreachable!("projection of a non-pair in a typed term"),
    }
}

fn vapp(f: Val, x: Val) -> Val {
    match f {
        Val::Lam(env, body) => {
            let mut e = (*env).clone();
            e.push(x);
            eval(&e, &body)
        }
        Val::Ne(n) => Val::Ne(Rc::new(Ne::App(n, x))),
        _ => unreachable!("application of a non-function in a typed term"),
    }
}

fn reify(ty: &Formula, v: Val, types: &mut Vec<Formula>) -> ProofTerm {
    match ty {
        Formula::Top => P::Unit,
        Formula::And(a, b) => {
            let l = reify(a, vproj(v.clone(), false), types);
            let r = reify(b, vproj(v, true), types);
            P::pair(l, r)
        }
        Formula::Imp(a, b) => {
            let lvl = types.len();
            types.push((**a).clone());
            let body = reify(b, vapp(v, Val::Ne(Rc::new(Ne::Lvl(lvl)))), types);
            types.pop();
            P::lam((**a).clone(), body)
        }
        _ => match v {
            Val::Ne(n) => reify_ne(&n, types).0,
            _ => unreachable!("atom-typed value is neutral"),
        },
    }
}

fn reify_ne(n: &Ne, types: &mut Vec<Formula>) -> (ProofTerm, Formula) {
    match n {
        Ne::Lvl(l) => (P::Var(types.len() - 1 - l), types[*l].clone()),
        Ne::App(f, x) => {
            let (ft, fty) = reify_ne(f, types);
            let Formula::Imp(a, b) = fty else { unreachable!() };
            (P::app(ft, reify(&a, x.clone(), types)), *b)
        }
        Ne::Fst(p) | Ne::Snd(p) => {
            let (pt, pty) = reify_ne(p, types);
            let Formula::And(a, b) = pty else { unreachable!() };
            if matches!(n, Ne::Fst(_)) {
                (P::proj0(pt), *a)
            } else {
                (P::proj1(pt), *b)
            }
        }
    }
}

fn term_in_fragment(t: &ProofTerm) -> bool {
    match t {
        P::Case(..) | P::Inl(..) | P::Inr(..) | P::Abort(..) => false,
        P::Lam(a, _) if !a.in_cc_fragment() => false,
        _ => t.children().into_iter().all(|(c, _)| term_in_fragment(c)),
    }
}

/// β-normal η-long form of a term in the `T, /\, ->` fragment.
pub fn long_normal_form(ctx: &Context, t: &ProofTerm) -> Result<ProofTerm, RewriteError> {
    let ty = crate::syntax::typecheck(ctx, t)?;
    if let Some((_, a)) = ctx.entries().iter().find(|(_, a)| !a.in_cc_fragment()) {
        return Err(RewriteError::Fragment(a.to_string()));
    }
    if !term_in_fragment(t) {
        return Err(RewriteError::Fragment(t.to_string()));
    }
    let env: Vec<Val> = (0..ctx.len()).map(|l| Val::Ne(Rc::new(Ne::Lvl(l)))).collect();
    let mut types = ctx.formulas();
    Ok(reify(&ty, eval(&env, t), &mut types))
}

/// Decides βη-equality for terms of the `T, /\, ->` fragment by comparing
/// long normal forms.
pub fn eta_expandable_equal(ctx: &Context, t: &ProofTerm, s: &ProofTerm) -> Result<bool, RewriteError> {
    let a = crate::syntax::typecheck(ctx, t)?;
    let b = crate::syntax::typecheck(ctx, s)?;
    if a != b {
        return Err(RewriteError::TypeDiffers(a, b));
    }
    Ok(long_normal_form(ctx, t)? == long_normal_form(ctx, s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term_in, Context};

    fn ctx(s: &str) -> Context {
        Context::parse(s).unwrap()
    }

    #[test]
    fn beta_examples() {
        let c = ctx("d:p0, e:p1");
        let t = parse_term_in(&c, "fst (d, e)").unwrap();
        assert_eq!(beta_step(&t), Some(P::Var(1)));
        let t = parse_term_in(&c, "(fun x:p0 => x) d").unwrap();
        assert_eq!(beta_step(&t), Some(P::Var(1)));
        let t = parse_term_in(&c, "case inl[p0] d of inl a => (a, e) | inr b => (b, e)").unwrap();
        assert_eq!(beta_step(&t), Some(P::pair(P::Var(1), P::Var(0))));
        assert_eq!(beta_step(&P::Var(0)), None);
    }

    #[test]
    fn leftmost_outermost() {
        let c = ctx("d:p0");
        let t = parse_term_in(&c, "(fun x:p0 => fst (x, x)) (fst (d, d))").unwrap();
        let r = beta_step(&t).unwrap();
        assert_eq!(r, parse_term_in(&c, "fst (fst (d, d), fst (d, d))").unwrap());
    }

    #[test]
    fn fragment_equality() {
        let c = ctx("u:p0/\\p1");
        let t = parse_term_in(&c, "(fst u, snd u)").unwrap();
        assert!(eta_expandable_equal(&c, &t, &P::Var(0)).unwrap());
        let c = ctx("u:p0/\\p0");
        let a = parse_term_in(&c, "fst u").unwrap();
        let b = parse_term_in(&c, "snd u").unwrap();
        assert!(!eta_expandable_equal(&c, &a, &b).unwrap());
        assert!(eta_expandable_equal(&c, &a, &a).unwrap());
        let c = ctx("u:p0\\/p1");
        assert!(matches!(eta_expandable_equal(&c, &P::Var(0), &P::Var(0)), Err(RewriteError::Fragment(_))));
    }

    #[test]
    fn step_text_roundtrip() {
        let s = Step { rule: Rule::EtaOr, path: vec![1, 0, 2], dir: Dir::Bwd };
        assert_eq!(s.to_string(), "eta-or@/1/0/2(bwd)");
        assert_eq!(s.to_string().parse::<Step>().unwrap(), s);
        let r = Step { rule: Rule::BetaImp, path: vec![], dir: Dir::Fwd };
        assert_eq!(r.to_string().parse::<Step>().unwrap(), r);
    }

    #[test]
    fn search_examples() {
        let c = ctx("u:p0/\\p1");
        let t = parse_term_in(&c, "(fst u, snd u)").unwrap();
        let tr = bounded_convertible(&c, &t, &P::Var(0), DEFAULT_BUDGET).unwrap();
        assert_eq!(tr.serialize(), "eta-and@/(fwd)\n");
        tr.replay(&c).unwrap();

        let c = ctx("u:p0\\/p1");
        let t = parse_term_in(&c, "case u of inl a => inl[p1] a | inr b => inr[p0] b").unwrap();
        let tr = bounded_convertible(&c, &t, &P::Var(0), DEFAULT_BUDGET).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(tr.steps[0].rule, Rule::EtaOr);
        tr.replay(&c).unwrap();

        let c = ctx("u:p0/\\p0");
        let a = parse_term_in(&c, "fst u").unwrap();
        let b = parse_term_in(&c, "snd u").unwrap();
        assert!(bounded_convertible(&c, &a, &b, 2_000).is_none());
    }

    #[test]
    fn redundant_intro_elim() {
        let c = ctx("d:p0, e:p1");
        let t = parse_term_in(&c, "fst (d, e)").unwrap();
        let tr = bounded_convertible(&c, &t, &P::Var(1), DEFAULT_BUDGET).unwrap();
        assert_eq!(tr.len(), 1);
        tr.replay(&c).unwrap();
    }

    #[test]
    fn backward_steps_replay() {
        let c = ctx("u:p0/\\p1");
        let t = parse_term_in(&c, "(fst u, snd u)").unwrap();
        let tr = bounded_convertible(&c, &P::Var(0), &t, DEFAULT_BUDGET).unwrap();
        assert_eq!(tr.serialize(), "eta-and@/(bwd)\n");
        tr.replay(&c).unwrap();
    }
}
