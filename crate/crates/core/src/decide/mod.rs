//! Budgeted deciders for proof existence, proof equivalence and formula
//! isomorphism.
//!
//! Every verdict carries a witness that can be re-checked independently of
//! the procedure that produced it.

pub mod hsi;
pub mod kripke;
pub mod search;

use crate::models::FinOrd;
use crate::rewrite::{beta_normalize, bounded_convertible, ConversionTrace};
use crate::semantics::{interpret_proof, Assignment};
use crate::syntax::{typecheck, Context, Formula, ProofTerm, TypeError};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub use kripke::{rooted_trees, Countermodel, CountermodelSearch};
pub use search::Prover;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<P, N> {
    Positive(P),
    Negative(N),
    Unknown { spent: usize },
}

impl<P, N> Verdict<P, N> {
    pub fn is_positive(&self) -> bool {
        matches!(self, Verdict::Positive(_))
    }
    pub fn is_negative(&self) -> bool {
        matches!(self, Verdict::Negative(_))
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Positive(_) => "positive",
            Verdict::Negative(_) => "negative",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("terms have different types: {0} and {1}")]
    TypeDiffers(Formula, Formula),
    #[error("{0} is outside the T, /\\, -> fragment")]
    Fragment(Formula),
}

pub type ProvableVerdict = Verdict<ProofTerm, Countermodel>;

impl ProvableVerdict {
    pub fn to_json(&self) -> Json {
        match self {
            Verdict::Positive(t) => json!({"verdict": "positive", "proof": t.to_string()}),
            Verdict::Negative(cm) => json!({"verdict": "negative", "countermodel": countermodel_json(cm)}),
            Verdict::Unknown { spent } => json!({"verdict": "unknown", "spent": spent}),
        }
    }
}

pub fn countermodel_json(cm: &Countermodel) -> Json {
    let valuation: serde_json::Map<String, Json> =
        cm.valuation.iter().map(|(p, ws)| (format!("p{p}"), json!(ws))).collect();
    json!({"poset": cm.poset.matrix(), "parents": cm.parents, "valuation": valuation})
}

/// Interleaves proof search with countermodel enumeration in doubling
/// rounds. Each round looks for a countermodel first, so a round that finds
/// both reports the countermodel.
pub fn decide_provable(a: &Formula, budget: usize) -> ProvableVerdict {
    let mut models = CountermodelSearch::new(a);
    models.max_nodes = usize::MAX;
    let mut spent = 0;
    let mut round = 64usize;
    let mut proof_done = false;
    while spent < budget {
        let slice = round.min(budget - spent);
        if let Some(cm) = models.advance(slice) {
            return Verdict::Negative(cm);
        }
        spent += slice;
        if !proof_done && spent < budget {
            let slice = round.min(budget - spent);
            let mut p = Prover::new(slice);
            match p.prove_closed(a) {
                Ok(Some(t)) => return Verdict::Positive(t),
                Ok(None) => proof_done = true,
                Err(_) => {}
            }
            spent += p.steps.min(slice);
        }
        round = round.saturating_mul(2);
    }
    Verdict::Unknown { spent }
}

/// A finite assignment under which two terms denote different functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub assignment: BTreeMap<u32, usize>,
    /// First context element where the tables differ, and both outputs.
    pub input: usize,
    pub left: usize,
    pub right: usize,
}

pub type EquivVerdict = Verdict<ConversionTrace, Separation>;

impl EquivVerdict {
    pub fn to_json(&self) -> Json {
        match self {
            Verdict::Positive(tr) => json!({"verdict": "positive", "trace": tr.steps.iter().map(|s| s.to_string()).collect::<Vec<_>>()}),
            Verdict::Negative(s) => json!({"verdict": "negative", "countermodel": {
                "assignment": s.assignment.iter().map(|(p, n)| (format!("p{p}"), json!(n))).collect::<serde_json::Map<_, _>>(),
                "input": s.input, "left": s.left, "right": s.right}}),
            Verdict::Unknown { spent } => json!({"verdict": "unknown", "spent": spent}),
        }
    }
}

fn term_atoms(t: &ProofTerm, out: &mut BTreeSet<u32>) {
    match t {
        ProofTerm::Abort(_, a) | ProofTerm::Inl(_, a) | ProofTerm::Inr(_, a) | ProofTerm::Lam(a, _) => {
            out.extend(a.atoms())
        }
        _ => {}
    }
    for (c, _) in t.children() {
        term_atoms(c, out);
    }
}

/// Assignments of `atoms` to `1..=max` in which some atom has size `max`,
/// in lexicographic order.
fn assignments_at(atoms: &[u32], max: usize) -> Vec<BTreeMap<u32, usize>> {
    let k = atoms.len();
    let total = max.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let mut vals = vec![0; k];
            for v in vals.iter_mut().rev() {
                *v = code % max + 1;
                code /= max;
            }
            atoms.iter().copied().zip(vals).collect::<BTreeMap<_, _>>()
        })
        .filter(|a| k == 0 || a.values().any(|&v| v == max))
        .collect()
}

/// Looks for a FinOrd assignment with all atoms of size at most `max` and
/// one of size exactly `max` separating the two terms.
pub fn separate_at(ctx: &Context, t: &ProofTerm, s: &ProofTerm, max: usize) -> Option<Separation> {
    let mut atoms = BTreeSet::new();
    for f in ctx.formulas() {
        atoms.extend(f.atoms());
    }
    if let Ok(ty) = typecheck(ctx, t) {
        atoms.extend(ty.atoms());
    }
    term_atoms(t, &mut atoms);
    term_atoms(s, &mut atoms);
    let atoms: Vec<u32> = atoms.into_iter().collect();
    let m = FinOrd::new();
    assignments_at(&atoms, max).into_par_iter().find_map_first(|assignment| {
        let a: Assignment<usize> = assignment.clone();
        let f = interpret_proof(&m, &a, ctx, t).ok()?;
        let g = interpret_proof(&m, &a, ctx, s).ok()?;
        let input = (0..f.src).find(|&i| f.map[i] != g.map[i])?;
        Some(Separation { assignment, input, left: f.map[input], right: g.map[input] })
    })
}

/// Re-interprets both terms under the separation's assignment.
pub fn check_separation(ctx: &Context, t: &ProofTerm, s: &ProofTerm, sep: &Separation) -> bool {
    let m = FinOrd::new();
    match (interpret_proof(&m, &sep.assignment, ctx, t), interpret_proof(&m, &sep.assignment, ctx, s)) {
        (Ok(f), Ok(g)) => f.map.get(sep.input) == Some(&sep.left) && g.map.get(sep.input) == Some(&sep.right) && sep.left != sep.right,
        _ => false,
    }
}

pub const MAX_CARDINALITY: usize = 4;

/// Alternates FinOrd separation at atom sizes `1..=4` with conversion search
/// on a growing share of the budget.
pub fn decide_equivalent(ctx: &Context, t: &ProofTerm, s: &ProofTerm, budget: usize) -> Result<EquivVerdict, DecideError> {
    let a = typecheck(ctx, t)?;
    let b = typecheck(ctx, s)?;
    if a != b {
        return Err(DecideError::TypeDiffers(a, b));
    }
    let mut spent = 0;
    for r in 1..=MAX_CARDINALITY {
        if let Some(sep) = separate_at(ctx, t, s, r) {
            return Ok(Verdict::Negative(sep));
        }
        let slice = budget * r / MAX_CARDINALITY;
        if let Some(tr) = bounded_convertible(ctx, t, s, slice) {
            return Ok(Verdict::Positive(tr));
        }
        spent = slice;
    }
    Ok(Verdict::Unknown { spent })
}

/// One factor of the isomorphism normal form: `P1 -> ... -> Pk -> p`, with
/// the premises kept as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub premises: Vec<Factor>,
    pub head: u32,
}

/// Normal form of a `T, /\, ->` formula up to isomorphism: a sorted multiset
/// of factors, where `T` is empty, conjunction is union and `A -> B` adds
/// the factors of `A` as premises to every factor of `B`.
pub fn iso_normal_form(a: &Formula) -> Result<Vec<Factor>, DecideError> {
    let mut out = match a {
        Formula::Atom(p) => vec![Factor { premises: vec![], head: *p }],
        Formula::Top => vec![],
        Formula::And(x, y) => {
            let mut v = iso_normal_form(x)?;
            v.extend(iso_normal_form(y)?);
            v
        }
        Formula::Imp(x, y) => {
            let prem = iso_normal_form(x)?;
            iso_normal_form(y)?
                .into_iter()
                .map(|mut f| {
                    f.premises.extend(prem.iter().cloned());
                    f.premises.sort();
                    f
                })
                .collect()
        }
        _ => return Err(DecideError::Fragment(a.clone())),
    };
    out.sort();
    Ok(out)
}

/// Decides isomorphism in the `T, /\, ->` fragment.
pub fn decide_identical_cc(a: &Formula, b: &Formula) -> Result<bool, DecideError> {
    Ok(iso_normal_form(a)? == iso_normal_form(b)?)
}

/// Why two formulas are not isomorphic.
#[derive(Clone, Debug, PartialEq)]
pub enum Distinction {
    /// Their cardinalities differ under a FinOrd assignment.
    Cardinality { assignment: BTreeMap<u32, u64>, left: BigUint, right: BigUint },
    /// One of the two implications is not provable.
    ProvabilityGap { implication: Formula, countermodel: Countermodel },
}

/// Mutually inverse proofs, with conversions of both composites to identities.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoWitness {
    pub forward: ProofTerm,
    pub backward: ProofTerm,
    pub there_and_back: ConversionTrace,
    pub back_and_there: ConversionTrace,
}

pub type IdentityVerdict = Verdict<IsoWitness, Distinction>;

impl IdentityVerdict {
    pub fn to_json(&self) -> Json {
        match self {
            Verdict::Positive(w) => json!({"verdict": "positive", "forward": w.forward.to_string(), "backward": w.backward.to_string()}),
            Verdict::Negative(Distinction::Cardinality { assignment, left, right }) => json!({"verdict": "negative", "countermodel": {
                "kind": "cardinality",
                "assignment": assignment.iter().map(|(p, n)| (format!("p{p}"), json!(n))).collect::<serde_json::Map<_, _>>(),
                "left": left.to_string(), "right": right.to_string()}}),
            Verdict::Negative(Distinction::ProvabilityGap { implication, countermodel }) => json!({"verdict": "negative", "countermodel": {
                "kind": "provability-gap", "implication": implication.to_string(), "kripke": countermodel_json(countermodel)}}),
            Verdict::Unknown { spent } => json!({"verdict": "unknown", "spent": spent}),
        }
    }
}

/// Largest exponent the cardinality refuter will evaluate.
const MAX_EXPONENT: u64 = 4096;

/// `|A|` for finite sets of the given sizes; `None` if a power is too big.
pub fn cardinality(a: &Formula, sizes: &BTreeMap<u32, u64>) -> Option<BigUint> {
    Some(match a {
        Formula::Atom(p) => BigUint::from(*sizes.get(p)?),
        Formula::Top => BigUint::one(),
        Formula::Bot => BigUint::zero(),
        Formula::And(x, y) => cardinality(x, sizes)? * cardinality(y, sizes)?,
        Formula::Or(x, y) => cardinality(x, sizes)? + cardinality(y, sizes)?,
        Formula::Imp(x, y) => {
            let base = cardinality(y, sizes)?;
            let exp = cardinality(x, sizes)?;
            if base <= BigUint::one() || exp.is_zero() {
                return Some(if exp.is_zero() { BigUint::one() } else { base });
            }
            let e = exp.to_u64().filter(|&e| e <= MAX_EXPONENT)?;
            num_traits::pow::pow(base, e as usize)
        }
    })
}

/// Assignments of atoms to `0..=max_size` where the cardinalities differ.
pub fn cardinality_refutation(a: &Formula, b: &Formula, max_size: u64) -> Option<(BTreeMap<u32, u64>, BigUint, BigUint)> {
    let atoms: Vec<u32> = a.atoms().union(&b.atoms()).copied().collect();
    let radix = max_size + 1;
    let total = radix.pow(atoms.len() as u32);
    (0..total).into_par_iter().find_map_first(|mut code| {
        let mut sizes = BTreeMap::new();
        for &p in atoms.iter().rev() {
            sizes.insert(p, code % radix);
            code /= radix;
        }
        let (l, r) = (cardinality(a, &sizes)?, cardinality(b, &sizes)?);
        (l != r).then_some((sizes, l, r))
    })
}

/// Normal closed inhabitants of `goal` in the given hypotheses, up to a
/// nesting depth, in a fixed order.
pub fn inhabitants(env: &mut Vec<Formula>, goal: &Formula, depth: usize, limit: usize) -> Vec<ProofTerm> {
    let mut out = Vec::new();
    inhabit(env, goal, depth, limit, &mut out);
    out
}

fn inhabit(env: &mut Vec<Formula>, goal: &Formula, depth: usize, limit: usize, out: &mut Vec<ProofTerm>) {
    if depth == 0 || out.len() >= limit {
        return;
    }
    match goal {
        Formula::Top => out.push(ProofTerm::Unit),
        Formula::And(a, b) => {
            let ls = inhabitants(env, a, depth - 1, limit);
            let rs = inhabitants(env, b, depth - 1, limit);
            for l in &ls {
                for r in &rs {
                    if out.len() < limit {
                        out.push(ProofTerm::pair(l.clone(), r.clone()));
                    }
                }
            }
        }
        Formula::Imp(a, b) => {
            env.push((**a).clone());
            let bodies = inhabitants(env, b, depth - 1, limit);
            env.pop();
            out.extend(bodies.into_iter().take(limit - out.len()).map(|t| ProofTerm::lam((**a).clone(), t)));
        }
        _ => {
            if let Formula::Or(a, b) = goal {
                for t in inhabitants(env, a, depth - 1, limit) {
                    out.push(ProofTerm::inl(t, (**b).clone()));
                }
                for t in inhabitants(env, b, depth - 1, limit) {
                    out.push(ProofTerm::inr(t, (**a).clone()));
                }
            }
            for k in 0..env.len() {
                let idx = env.len() - 1 - k;
                let hyp = env[k].clone();
                spines(env, ProofTerm::Var(idx), &hyp, goal, depth - 1, limit, out);
            }
        }
    }
    out.truncate(limit);
}

/// Eliminations applied to `head : ty` that end at `goal`.
fn spines(env: &mut Vec<Formula>, head: ProofTerm, ty: &Formula, goal: &Formula, depth: usize, limit: usize, out: &mut Vec<ProofTerm>) {
    if out.len() >= limit {
        return;
    }
    if ty == goal {
        out.push(head.clone());
    }
    if depth == 0 {
        return;
    }
    match ty {
        Formula::And(a, b) => {
            spines(env, ProofTerm::proj0(head.clone()), a, goal, depth - 1, limit, out);
            spines(env, ProofTerm::proj1(head), b, goal, depth - 1, limit, out);
        }
        Formula::Imp(a, b) => {
            for arg in inhabitants(env, a, depth - 1, limit) {
                spines(env, ProofTerm::app(head.clone(), arg), b, goal, depth - 1, limit, out);
            }
        }
        Formula::Bot => out.push(ProofTerm::abort(head, goal.clone())),
        _ => {}
    }
}

fn composite_is_identity(a: &Formula, f: &ProofTerm, g: &ProofTerm, budget: usize) -> Option<ConversionTrace> {
    let ctx = Context::from_entries(vec![("x".into(), a.clone())]);
    let comp = ProofTerm::app(g.shift(1, 0), ProofTerm::app(f.shift(1, 0), ProofTerm::Var(0)));
    let (norm, _) = beta_normalize(&comp, 1000)?;
    match decide_equivalent(&ctx, &norm, &ProofTerm::Var(0), budget).ok()? {
        Verdict::Positive(tr) => {
            // Prefix the β-normalization so the trace starts at the composite.
            bounded_convertible(&ctx, &comp, &ProofTerm::Var(0), budget).or(Some(tr))
        }
        _ => None,
    }
}

/// Sound but incomplete isomorphism check for the full language.
///
/// Tries, in order: FinOrd cardinalities with atoms of size `0..=3`, a
/// provability gap between the two implications, then a bounded search for
/// inverse proof pairs.
pub fn semi_decide_identical(a: &Formula, b: &Formula, budget: usize) -> IdentityVerdict {
    if let Some((assignment, left, right)) = cardinality_refutation(a, b, 3) {
        return Verdict::Negative(Distinction::Cardinality { assignment, left, right });
    }
    let share = (budget / 4).max(1);
    for imp in [Formula::imp(a.clone(), b.clone()), Formula::imp(b.clone(), a.clone())] {
        if let Verdict::Negative(cm) = decide_provable(&imp, share) {
            return Verdict::Negative(Distinction::ProvabilityGap { implication: imp, countermodel: cm });
        }
    }
    let per_pair = 200.min(budget);
    let mut spent = 0;
    for depth in 1..=6 {
        let fs = inhabitants(&mut vec![], &Formula::imp(a.clone(), b.clone()), depth, 16);
        let gs = inhabitants(&mut vec![], &Formula::imp(b.clone(), a.clone()), depth, 16);
        for f in &fs {
            for g in &gs {
                if spent + 2 * per_pair > budget {
                    return Verdict::Unknown { spent };
                }
                spent += 2 * per_pair;
                let Some(gf) = composite_is_identity(a, f, g, per_pair) else { continue };
                let Some(fg) = composite_is_identity(b, g, f, per_pair) else { continue };
                return Verdict::Positive(IsoWitness {
                    forward: f.clone(),
                    backward: g.clone(),
                    there_and_back: gf,
                    back_and_there: fg,
                });
            }
        }
    }
    Verdict::Unknown { spent }
}

/// `fun s => fun z => s (s ... z)` with `n` applications, a proof of
/// `(p -> p) -> p -> p` for the given atom.
pub fn church_numeral(atom: u32, n: usize) -> ProofTerm {
    let p = Formula::atom(atom);
    let mut body = ProofTerm::Var(0);
    for _ in 0..n {
        body = ProofTerm::app(ProofTerm::Var(1), body);
    }
    ProofTerm::lam(Formula::imp(p.clone(), p.clone()), ProofTerm::lam(p, body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{evaluate, Value};
    use crate::syntax::{parse_formula, parse_term_in};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn provable_examples() {
        assert_eq!(decide_provable(&Formula::Top, 1000), Verdict::Positive(ProofTerm::Unit));
        let Verdict::Negative(cm) = decide_provable(&f("p0 \\/ ~p0"), 1000) else { panic!() };
        assert_eq!(cm.parents.len(), 2);
        assert!(cm.refutes(&f("p0 \\/ ~p0")));
        assert!(decide_provable(&f("~p0 \\/ ~~p0"), 100_000).is_negative());
        let Verdict::Positive(t) = decide_provable(&f("~~(p0 \\/ ~p0)"), 100_000) else { panic!() };
        assert_eq!(typecheck(&Context::new(), &t).unwrap(), f("~~(p0 \\/ ~p0)"));
    }

    #[test]
    fn equivalence_examples() {
        let c = Context::parse("u:p0/\\p0").unwrap();
        let a = parse_term_in(&c, "fst u").unwrap();
        let b = parse_term_in(&c, "snd u").unwrap();
        let Verdict::Negative(sep) = decide_equivalent(&c, &a, &b, 10_000).unwrap() else { panic!() };
        assert_eq!(sep.assignment[&0], 2);
        assert!(check_separation(&c, &a, &b, &sep));

        let c = Context::parse("u:p0/\\p1").unwrap();
        let a = parse_term_in(&c, "(fst u, snd u)").unwrap();
        let Verdict::Positive(tr) = decide_equivalent(&c, &a, &ProofTerm::Var(0), 10_000).unwrap() else { panic!() };
        assert_eq!(tr.len(), 1);
        let Verdict::Positive(tr) = decide_equivalent(&c, &a, &a, 10_000).unwrap() else { panic!() };
        assert!(tr.is_empty());
        assert!(matches!(decide_equivalent(&c, &a, &parse_term_in(&c, "fst u").unwrap(), 10), Err(DecideError::TypeDiffers(..))));
    }

    #[test]
    fn cc_identity_examples() {
        assert!(decide_identical_cc(&f("(p0 /\\ p1) -> p2"), &f("p0 -> p1 -> p2")).unwrap());
        assert!(!decide_identical_cc(&f("p0"), &f("p0 /\\ p0")).unwrap());
        assert!(decide_identical_cc(&f("p0 -> p1"), &f("p0 -> p1")).unwrap());
        assert!(matches!(decide_identical_cc(&f("p0 \\/ p1"), &f("p0")), Err(DecideError::Fragment(_))));
    }

    #[test]
    fn semi_identity_examples() {
        let Verdict::Positive(w) = semi_decide_identical(&f("T /\\ p0"), &f("p0"), 100_000) else { panic!() };
        w.there_and_back.replay(&Context::from_entries(vec![("x".into(), f("T /\\ p0"))])).unwrap();
        let Verdict::Negative(Distinction::Cardinality { assignment, left, right }) = semi_decide_identical(&f("p0"), &f("p0 \\/ p0"), 1000) else { panic!() };
        assert_eq!((assignment[&0], left, right), (1, BigUint::from(1u8), BigUint::from(2u8)));
        let gap = semi_decide_identical(&f("~p0 \\/ ~~p0"), &f("T"), 100_000);
        assert!(matches!(gap, Verdict::Negative(Distinction::ProvabilityGap { .. })), "{gap:?}");
        assert!(cardinality_refutation(&f("~p0 \\/ ~~p0"), &f("T"), 3).is_none());
    }

    #[test]
    fn church_numerals_are_distinct() {
        let succ = Value::function(|v| match v {
            Value::Elem(n) => Value::Elem((n + 1).min(7)),
            _ => unreachable!(),
        });
        let vals: Vec<usize> = (0..=5)
            .map(|n| {
                let t = church_numeral(0, n);
                assert_eq!(typecheck(&Context::new(), &t).unwrap(), f("(p0 -> p0) -> p0 -> p0"));
                match evaluate(&[], &t).apply(succ.clone()).apply(Value::Elem(0)) {
                    Value::Elem(k) => k,
                    _ => unreachable!(),
                }
            })
            .collect();
        assert_eq!(vals, vec![0, 1, 2, 3, 4, 5]);
    }
}
