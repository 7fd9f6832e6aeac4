//! Finite rooted Kripke trees and forcing.

use crate::models::{heyting_implies, FinPoset};
use crate::syntax::Formula;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A Kripke countermodel: a rooted tree with a monotone valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    /// Parent of each node in preorder; node 0 is the root.
    pub parents: Vec<Option<usize>>,
    pub poset: FinPoset,
    /// Nodes where each atom holds, keyed by atom index.
    pub valuation: BTreeMap<u32, Vec<usize>>,
}

impl Countermodel {
    pub fn new(parents: Vec<Option<usize>>, valuation: BTreeMap<u32, Vec<usize>>) -> Self {
        let poset = FinPoset::tree(&parents).expect("parent links form a tree");
        Countermodel { parents, poset, valuation }
    }

    fn holds_atom(&self, w: usize, p: u32) -> bool {
        self.valuation.get(&p).is_some_and(|ws| ws.contains(&w))
    }

    /// Forcing at a node, clause by clause.
    pub fn forces(&self, w: usize, a: &Formula) -> bool {
        match a {
            Formula::Atom(p) => self.holds_atom(w, *p),
            Formula::Top => true,
            Formula::Bot => false,
            Formula::And(x, y) => self.forces(w, x) && self.forces(w, y),
            Formula::Or(x, y) => self.forces(w, x) || self.forces(w, y),
            Formula::Imp(x, y) => self.poset.up(w).into_iter().all(|u| !self.forces(u, x) || self.forces(u, y)),
        }
    }

    /// Whether the valuation is monotone and the root fails to force `a`.
    pub fn refutes(&self, a: &Formula) -> bool {
        let monotone = self.valuation.keys().all(|&p| {
            (0..self.poset.len()).all(|w| !self.holds_atom(w, p) || self.poset.up(w).into_iter().all(|u| self.holds_atom(u, p)))
        });
        monotone && !self.forces(0, a)
    }
}

/// Canonical code of a rooted tree: `(` followed by sorted child codes, `)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Shape(Vec<Shape>);

impl Shape {
    fn code(&self) -> String {
        let mut s = String::from("(");
        for c in &self.0 {
            s.push_str(&c.code());
        }
        s.push(')');
        s
    }

    fn canonical(mut self) -> Shape {
        self.0 = self.0.into_iter().map(Shape::canonical).collect();
        self.0.sort_by_key(Shape::code);
        self
    }

    fn size(&self) -> usize {
        1 + self.0.iter().map(Shape::size).sum::<usize>()
    }

    fn with_leaf_at(&self, k: &mut usize) -> Option<Shape> {
        if *k == 0 {
            let mut c = self.0.clone();
            c.push(Shape(vec![]));
            return Some(Shape(c));
        }
        *k -= 1;
        for (i, child) in self.0.iter().enumerate() {
            if let Some(nc) = child.with_leaf_at(k) {
                let mut c = self.0.clone();
                c[i] = nc;
                return Some(Shape(c));
            }
        }
        None
    }

    fn parents(&self) -> Vec<Option<usize>> {
        fn walk(s: &Shape, parent: Option<usize>, out: &mut Vec<Option<usize>>) {
            let me = out.len();
            out.push(parent);
            for c in &s.0 {
                walk(c, Some(me), out);
            }
        }
        let mut out = Vec::new();
        walk(self, None, &mut out);
        out
    }
}

/// Rooted trees with `n` nodes as parent arrays, ordered by shape code.
pub fn rooted_trees(n: usize) -> Vec<Vec<Option<usize>>> {
    if n == 0 {
        return vec![];
    }
    let mut level: BTreeSet<(String, Shape)> = BTreeSet::new();
    let root = Shape(vec![]);
    level.insert((root.code(), root));
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for (_, t) in &level {
            for k in 0..t.size() {
                let grown = t.with_leaf_at(&mut k.clone()).expect("position within tree").canonical();
                next.insert((grown.code(), grown));
            }
        }
        level = next;
    }
    level.into_iter().map(|(_, s)| s.parents()).collect()
}

/// Resumable enumeration of trees and valuations, smallest trees first.
pub struct CountermodelSearch {
    formula: Formula,
    atoms: Vec<u32>,
    nodes: usize,
    trees: Vec<Vec<Option<usize>>>,
    tree: usize,
    current: Option<(FinPoset, Vec<u64>)>,
    valuation: u128,
    pub max_nodes: usize,
}

impl CountermodelSearch {
    pub fn new(formula: &Formula) -> Self {
        CountermodelSearch {
            formula: formula.clone(),
            atoms: formula.atoms().into_iter().collect(),
            nodes: 0,
            trees: vec![],
            tree: 0,
            current: None,
            valuation: 0,
            max_nodes: 12,
        }
    }

    fn truth(&self, p: &FinPoset, upsets: &[u64], code: u128, a: &Formula) -> u64 {
        match a {
            Formula::Atom(x) => {
                let k = self.atoms.iter().position(|y| y == x).expect("atom of the formula");
                let radix = upsets.len() as u128;
                let digit = code / radix.pow((self.atoms.len() - 1 - k) as u32) % radix;
                upsets[digit as usize]
            }
            Formula::Top => p.full(),
            Formula::Bot => 0,
            Formula::And(x, y) => self.truth(p, upsets, code, x) & self.truth(p, upsets, code, y),
            Formula::Or(x, y) => self.truth(p, upsets, code, x) | self.truth(p, upsets, code, y),
            Formula::Imp(x, y) => {
                heyting_implies(p, self.truth(p, upsets, code, x), self.truth(p, upsets, code, y)).expect("truth sets are upsets")
            }
        }
    }

    /// Checks up to `steps` valuations; returns a countermodel if one turns up.
    /// Once the node limit is passed the search reports `None` forever.
    pub fn advance(&mut self, steps: usize) -> Option<Countermodel> {
        let mut left = steps;
        while left > 0 {
            let Some((poset, upsets)) = &self.current else {
                if self.tree >= self.trees.len() {
                    if self.nodes >= self.max_nodes {
                        return None;
                    }
                    self.nodes += 1;
                    self.trees = rooted_trees(self.nodes);
                    self.tree = 0;
                    continue;
                }
                let p = FinPoset::tree(&self.trees[self.tree]).expect("tree");
                let ups = p.upsets();
                self.current = Some((p, ups));
                self.valuation = 0;
                continue;
            };
            let total = (upsets.len() as u128).saturating_pow(self.atoms.len() as u32);
            if self.valuation >= total {
                self.current = None;
                self.tree += 1;
                continue;
            }
            left -= 1;
            let code = self.valuation;
            self.valuation += 1;
            if self.truth(poset, upsets, code, &self.formula) & 1 == 0 {
                let radix = upsets.len() as u128;
                let valuation = self
                    .atoms
                    .iter()
                    .enumerate()
                    .map(|(k, &a)| {
                        let digit = code / radix.pow((self.atoms.len() - 1 - k) as u32) % radix;
                        let set = upsets[digit as usize];
                        (a, (0..poset.len()).filter(|w| set >> w & 1 == 1).collect())
                    })
                    .collect();
                return Some(Countermodel::new(self.trees[self.tree].clone(), valuation));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| rooted_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
        for n in 1..=5 {
            for t in rooted_trees(n) {
                assert!(FinPoset::tree(&t).unwrap().is_rooted_tree());
            }
        }
    }

    #[test]
    fn excluded_middle_countermodel() {
        let f = parse_formula("p0 \\/ ~p0").unwrap();
        let cm = CountermodelSearch::new(&f).advance(1000).unwrap();
        assert_eq!(cm.parents, vec![None, Some(0)]);
        assert_eq!(cm.valuation[&0], vec![1]);
        assert!(cm.refutes(&f));
    }
}
