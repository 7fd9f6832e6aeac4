//! Seeded random formulas and well-typed proof terms.

use crate::syntax::{Formula, ProofTerm};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A formula of roughly `size` connectives over atoms `p0..p{atoms-1}`;
/// with `cc_only` it stays in the `T, /\, ->` fragment.
pub fn formula<R: Rng>(rng: &mut R, atoms: u32, size: usize, cc_only: bool) -> Formula {
    if size == 0 {
        return match rng.gen_range(0..8) {
            0 => Formula::Top,
            1 if !cc_only => Formula::Bot,
            _ => Formula::atom(rng.gen_range(0..atoms.max(1))),
        };
    }
    let left = rng.gen_range(0..size);
    let (a, b) = (formula(rng, atoms, left, cc_only), formula(rng, atoms, size - 1 - left, cc_only));
    match rng.gen_range(0..if cc_only { 2 } else { 3 }) {
        0 => Formula::and(a, b),
        1 => Formula::imp(a, b),
        _ => Formula::or(a, b),
    }
}

/// Random well-typed terms built from introductions, variables and
/// eliminations, with β-redexes inserted up to a depth.
pub struct TermGen<'r, R: Rng> {
    pub rng: &'r mut R,
    pub atoms: u32,
    pub cc_only: bool,
    work: usize,
}

/// Generator calls allowed per attempt at a closed term.
const WORK: usize = 400;

impl<'r, R: Rng> TermGen<'r, R> {
    pub fn new(rng: &'r mut R, atoms: u32, cc_only: bool) -> Self {
        TermGen { rng, atoms, cc_only, work: WORK }
    }

    /// A closed term of a random type, retrying until the generator succeeds.
    pub fn closed(&mut self, redex_depth: usize) -> (Formula, ProofTerm) {
        loop {
            let size = self.rng.gen_range(1..4);
            let a = formula(self.rng, self.atoms, size, self.cc_only);
            self.work = WORK;
            if let Some(t) = self.term(&mut vec![], &a, redex_depth) {
                return (a, t);
            }
        }
    }

    pub fn term(&mut self, env: &mut Vec<Formula>, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        if self.work == 0 {
            return None;
        }
        self.work -= 1;
        self.attempt(env, goal, depth)
    }

    fn attempt(&mut self, env: &mut Vec<Formula>, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        for _ in 0..6 {
            let choice = if depth == 0 { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..5) };
            let t = match choice {
                0 => self.variable(env, goal).or_else(|| self.intro(env, goal, depth)),
                1 => self.intro(env, goal, depth).or_else(|| self.elim(env, goal, depth)),
                2 => self.beta(env, goal, depth),
                3 => self.projection(env, goal, depth),
                _ if self.cc_only => self.beta(env, goal, depth),
                _ => self.case(env, goal, depth),
            };
            if t.is_some() {
                return t;
            }
        }
        None
    }

    fn variable(&mut self, env: &[Formula], goal: &Formula) -> Option<ProofTerm> {
        let hits: Vec<usize> = (0..env.len()).filter(|&i| &env[env.len() - 1 - i] == goal).collect();
        (!hits.is_empty()).then(|| ProofTerm::var(hits[self.rng.gen_range(0..hits.len())]))
    }

    fn under(&mut self, env: &mut Vec<Formula>, a: &Formula, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        env.push(a.clone());
        let t = self.term(env, goal, depth);
        env.pop();
        t
    }

    fn intro(&mut self, env: &mut Vec<Formula>, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        match goal {
            Formula::Top => Some(ProofTerm::Unit),
            Formula::And(a, b) => Some(ProofTerm::pair(self.term(env, a, depth)?, self.term(env, b, depth)?)),
            Formula::Imp(a, b) => Some(ProofTerm::lam((**a).clone(), self.under(env, a, b, depth)?)),
            Formula::Or(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Some(ProofTerm::inl(self.term(env, a, depth)?, (**b).clone()))
                } else {
                    Some(ProofTerm::inr(self.term(env, b, depth)?, (**a).clone()))
                }
            }
            Formula::Atom(_) | Formula::Bot => self.variable(env, goal).or_else(|| self.elim(env, goal, depth)),
        }
    }

    fn elim(&mut self, env: &mut Vec<Formula>, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        for i in 0..env.len() {
            let ty = env[env.len() - 1 - i].clone();
            match &ty {
                Formula::Imp(a, b) if **b == *goal && **a != *goal => {
                    if let Some(x) = self.term(env, a, depth.saturating_sub(1)) {
                        return Some(ProofTerm::app(ProofTerm::var(i), x));
                    }
                }
                Formula::And(a, _) if **a == *goal => return Some(ProofTerm::proj0(ProofTerm::var(i))),
                Formula::And(_, b) if **b == *goal => return Some(ProofTerm::proj1(ProofTerm::var(i))),
                Formula::Bot => return Some(ProofTerm::abort(ProofTerm::var(i), goal.clone())),
                _ => {}
            }
        }
        None
    }

    fn side_formula(&mut self) -> Formula {
        let size = self.rng.gen_range(0..2);
        formula(self.rng, self.atoms, size, true)
    }

    fn beta(&mut self, env: &mut Vec<Formula>, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        let b = self.side_formula();
        let arg = self.term(env, &b, depth - 1)?;
        let body = self.under(env, &b, goal, depth - 1)?;
        Some(ProofTerm::app(ProofTerm::lam(b, body), arg))
    }

    fn projection(&mut self, env: &mut Vec<Formula>, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        let b = self.side_formula();
        let keep = self.term(env, goal, depth - 1)?;
        let other = self.term(env, &b, depth - 1)?;
        Some(if self.rng.gen_bool(0.5) {
            ProofTerm::proj0(ProofTerm::pair(keep, other))
        } else {
            ProofTerm::proj1(ProofTerm::pair(other, keep))
        })
    }

    fn case(&mut self, env: &mut Vec<Formula>, goal: &Formula, depth: usize) -> Option<ProofTerm> {
        let (a, c) = (self.side_formula(), self.side_formula());
        let scrutinee = if self.rng.gen_bool(0.5) {
            ProofTerm::inl(self.term(env, &a, depth - 1)?, c.clone())
        } else {
            ProofTerm::inr(self.term(env, &c, depth - 1)?, a.clone())
        };
        let l = self.under(env, &a, goal, depth - 1)?;
        let r = self.under(env, &c, goal, depth - 1)?;
        Some(ProofTerm::case(scrutinee, l, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{typecheck, Context};

    #[test]
    fn generated_terms_typecheck() {
        let mut r = rng(7);
        for cc_only in [true, false] {
            let mut g = TermGen::new(&mut r, 2, cc_only);
            for _ in 0..200 {
                let (a, t) = g.closed(2);
                assert_eq!(typecheck(&Context::new(), &t).unwrap(), a, "{t}");
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = TermGen::new(&mut rng(3), 2, false).closed(2);
        let b = TermGen::new(&mut rng(3), 2, false).closed(2);
        assert_eq!(a, b);
    }
}
