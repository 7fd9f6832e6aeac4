//! Terminating proof search in the contraction-free sequent calculus G4ip,
//! producing natural-deduction terms.

use crate::syntax::{Formula, ProofTerm};
use std::collections::{BTreeSet, HashSet};

/// Proof terms with named binders, converted to de Bruijn form at the end.
#[derive(Clone, Debug)]
enum Nt {
    Var(u64),
    Unit,
    Abort(Box<Nt>, Formula),
    Pair(Box<Nt>, Box<Nt>),
    Fst(Box<Nt>),
    Snd(Box<Nt>),
    Inl(Box<Nt>, Formula),
    Inr(Box<Nt>, Formula),
    Case(Box<Nt>, u64, Box<Nt>, u64, Box<Nt>),
    Lam(u64, Formula, Box<Nt>),
    App(Box<Nt>, Box<Nt>),
}

impl Nt {
    fn to_term(&self, scope: &mut Vec<u64>) -> ProofTerm {
        let b = |x: &Nt, s: &mut Vec<u64>| x.to_term(s);
        match self {
            Nt::Var(id) => {
                let pos = scope.iter().rposition(|v| v == id).expect("named variable in scope");
                ProofTerm::Var(scope.len() - 1 - pos)
            }
            Nt::Unit => ProofTerm::Unit,
            Nt::Abort(t, a) => ProofTerm::abort(b(t, scope), a.clone()),
            Nt::Pair(x, y) => ProofTerm::pair(b(x, scope), b(y, scope)),
            Nt::Fst(x) => ProofTerm::proj0(b(x, scope)),
            Nt::Snd(x) => ProofTerm::proj1(b(x, scope)),
            Nt::Inl(x, f) => ProofTerm::inl(b(x, scope), f.clone()),
            Nt::Inr(x, f) => ProofTerm::inr(b(x, scope), f.clone()),
            Nt::Case(s, l, lb, r, rb) => {
                let st = b(s, scope);
                scope.push(*l);
                let lt = b(lb, scope);
                scope.pop();
                scope.push(*r);
                let rt = b(rb, scope);
                scope.pop();
                ProofTerm::case(st, lt, rt)
            }
            Nt::Lam(x, a, body) => {
                scope.push(*x);
                let bt = b(body, scope);
                scope.pop();
                ProofTerm::lam(a.clone(), bt)
            }
            Nt::App(f, x) => ProofTerm::app(b(f, scope), b(x, scope)),
        }
    }
}

fn bx(t: Nt) -> Box<Nt> {
    Box::new(t)
}

#[derive(Clone, Debug)]
struct Hyp {
    f: Formula,
    t: Nt,
}

/// The step budget ran out before the search finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfBudget;

pub struct Prover {
    pub steps: usize,
    budget: usize,
    fresh: u64,
    failed: HashSet<(Vec<Formula>, Formula)>,
}

impl Prover {
    pub fn new(budget: usize) -> Self {
        Prover { steps: 0, budget, fresh: 0, failed: HashSet::new() }
    }

    fn var(&mut self) -> u64 {
        self.fresh += 1;
        self.fresh
    }

    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    /// Searches for a closed proof; `Ok(None)` means the formula is not
    /// provable.
    pub fn prove_closed(&mut self, goal: &Formula) -> Result<Option<ProofTerm>, OutOfBudget> {
        Ok(self.prove(vec![], goal)?.map(|t| t.to_term(&mut vec![])))
    }

    /// Applies the invertible left rules until only atoms, disjunctions and
    /// implications with an atomic or implicational antecedent remain.
    fn saturate(&mut self, mut todo: Vec<Hyp>, goal: &Formula) -> Result<Vec<Hyp>, Nt> {
        let mut stable: Vec<Hyp> = Vec::new();
        loop {
            while let Some(h) = todo.pop() {
                if stable.iter().any(|s| s.f == h.f) {
                    continue;
                }
                match h.f.clone() {
                    Formula::Top => {}
                    Formula::Bot => return Err(Nt::Abort(bx(h.t), goal.clone())),
                    Formula::And(a, b) => {
                        todo.push(Hyp { f: *a, t: Nt::Fst(bx(h.t.clone())) });
                        todo.push(Hyp { f: *b, t: Nt::Snd(bx(h.t)) });
                    }
                    Formula::Imp(a, b) => match *a {
                        Formula::Top => todo.push(Hyp { f: *b, t: Nt::App(bx(h.t), bx(Nt::Unit)) }),
                        Formula::Bot => {}
                        Formula::And(c, d) => {
                            let (x, y) = (self.var(), self.var());
                            let body = Nt::App(bx(h.t), bx(Nt::Pair(bx(Nt::Var(x)), bx(Nt::Var(y)))));
                            let t = Nt::Lam(x, (*c).clone(), bx(Nt::Lam(y, (*d).clone(), bx(body))));
                            todo.push(Hyp { f: Formula::imp(*c, Formula::imp(*d, *b)), t });
                        }
                        Formula::Or(c, d) => {
                            let (x, y) = (self.var(), self.var());
                            let left = Nt::Lam(x, (*c).clone(), bx(Nt::App(bx(h.t.clone()), bx(Nt::Inl(bx(Nt::Var(x)), (*d).clone())))));
                            let right = Nt::Lam(y, (*d).clone(), bx(Nt::App(bx(h.t), bx(Nt::Inr(bx(Nt::Var(y)), (*c).clone())))));
                            todo.push(Hyp { f: Formula::imp(*c, (*b).clone()), t: left });
                            todo.push(Hyp { f: Formula::imp(*d, *b), t: right });
                        }
                        _ => stable.push(h),
                    },
                    _ => stable.push(h),
                }
            }
            // Modus ponens with an atomic antecedent present.
            let fire = stable.iter().enumerate().find_map(|(i, h)| match &h.f {
                Formula::Imp(a, _) if matches!(**a, Formula::Atom(_)) => {
                    stable.iter().find(|s| s.f == **a).map(|s| (i, s.t.clone()))
                }
                _ => None,
            });
            match fire {
                Some((i, arg)) => {
                    let h = stable.remove(i);
                    let Formula::Imp(_, b) = h.f else { unreachable!() };
                    todo.push(Hyp { f: *b, t: Nt::App(bx(h.t), bx(arg)) });
                }
                None => return Ok(stable),
            }
        }
    }

    fn prove(&mut self, hyps: Vec<Hyp>, goal: &Formula) -> Result<Option<Nt>, OutOfBudget> {
        self.tick()?;
        let stable = match self.saturate(hyps, goal) {
            Ok(s) => s,
            Err(t) => return Ok(Some(t)),
        };
        if let Some(h) = stable.iter().find(|h| h.f == *goal) {
            return Ok(Some(h.t.clone()));
        }
        match goal {
            Formula::Top => return Ok(Some(Nt::Unit)),
            Formula::And(a, b) => {
                let Some(l) = self.prove(stable.clone(), a)? else { return Ok(None) };
                let Some(r) = self.prove(stable, b)? else { return Ok(None) };
                return Ok(Some(Nt::Pair(bx(l), bx(r))));
            }
            Formula::Imp(a, b) => {
                let x = self.var();
                let mut h = stable;
                h.push(Hyp { f: (**a).clone(), t: Nt::Var(x) });
                return Ok(self.prove(h, b)?.map(|body| Nt::Lam(x, (**a).clone(), bx(body))));
            }
            _ => {}
        }
        if let Some(i) = stable.iter().position(|h| matches!(h.f, Formula::Or(..))) {
            let mut rest = stable;
            let h = rest.remove(i);
            let Formula::Or(a, b) = h.f else { unreachable!() };
            let (x, y) = (self.var(), self.var());
            let mut lh = rest.clone();
            lh.push(Hyp { f: *a, t: Nt::Var(x) });
            let Some(l) = self.prove(lh, goal)? else { return Ok(None) };
            let mut rh = rest;
            rh.push(Hyp { f: *b, t: Nt::Var(y) });
            let Some(r) = self.prove(rh, goal)? else { return Ok(None) };
            return Ok(Some(Nt::Case(bx(h.t), x, bx(l), y, bx(r))));
        }
        let key = {
            let set: BTreeSet<Formula> = stable.iter().map(|h| h.f.clone()).collect();
            (set.into_iter().collect::<Vec<_>>(), goal.clone())
        };
        if self.failed.contains(&key) {
            return Ok(None);
        }
        if let Formula::Or(a, b) = goal {
            if let Some(t) = self.prove(stable.clone(), a)? {
                return Ok(Some(Nt::Inl(bx(t), (**b).clone())));
            }
            if let Some(t) = self.prove(stable.clone(), b)? {
                return Ok(Some(Nt::Inr(bx(t), (**a).clone())));
            }
        }
        for i in 0..stable.len() {
            let Formula::Imp(cd, b) = &stable[i].f else { continue };
            let Formula::Imp(c, d) = &**cd else { continue };
            let f = stable[i].t.clone();
            let mut rest = stable.clone();
            rest.remove(i);
            // (C -> D) -> B  gives  D -> B  as  fun d => f (fun c => d).
            let (dv, cv) = (self.var(), self.var());
            let d_to_b = Nt::Lam(dv, (**d).clone(), bx(Nt::App(bx(f.clone()), bx(Nt::Lam(cv, (**c).clone(), bx(Nt::Var(dv)))))));
            let mut left = rest.clone();
            left.push(Hyp { f: Formula::imp((**d).clone(), (**b).clone()), t: d_to_b });
            let cx = self.var();
            left.push(Hyp { f: (**c).clone(), t: Nt::Var(cx) });
            let Some(u) = self.prove(left, d)? else { continue };
            let arg = Nt::Lam(cx, (**c).clone(), bx(u));
            let mut right = rest;
            right.push(Hyp { f: (**b).clone(), t: Nt::App(bx(f), bx(arg)) });
            if let Some(t) = self.prove(right, goal)? {
                return Ok(Some(t));
            }
        }
        self.failed.insert(key);
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, typecheck, Context};

    fn prove(s: &str) -> Option<ProofTerm> {
        let f = parse_formula(s).unwrap();
        let t = Prover::new(100_000).prove_closed(&f).unwrap();
        if let Some(t) = &t {
            assert_eq!(typecheck(&Context::new(), t).unwrap(), f, "{t}");
        }
        t
    }

    #[test]
    fn theorems() {
        for s in [
            "T",
            "p0 -> p0",
            "~~(p0 \\/ ~p0)",
            "(p0 -> p1) -> (p1 -> p2) -> p0 -> p2",
            "p0 /\\ p1 -> p1 /\\ p0",
            "(p0 \\/ p1) -> (p1 \\/ p0)",
            "~~~p0 -> ~p0",
            "((p0 -> p1) -> p2) -> (p1 -> p2)",
            "F -> p0",
        ] {
            assert!(prove(s).is_some(), "{s}");
        }
    }

    #[test]
    fn non_theorems() {
        for s in ["p0 \\/ ~p0", "~p0 \\/ ~~p0", "((p0 -> p1) -> p0) -> p0", "~~p0 -> p0", "p0"] {
            assert!(prove(s).is_none(), "{s}");
        }
    }
}
