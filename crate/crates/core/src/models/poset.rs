//! Finite posets, their upset Heyting algebras, preorder reflection and the
//! prime-filter embedding.

use crate::semantics::{Model, ModelError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("order matrix is not {0}x{0}")]
    Shape(usize),
    #[error("order is not reflexive at {0}")]
    Reflexive(usize),
    #[error("order is not antisymmetric at ({0}, {1})")]
    Antisymmetric(usize, usize),
    #[error("order is not transitive at ({0}, {1}, {2})")]
    Transitive(usize, usize, usize),
    #[error("{0:#b} is not an upset")]
    NotUpset(u64),
    #[error("posets are limited to 64 points")]
    TooBig,
}

/// A partial order on `0..n`, stored as `le[a][b] = a <= b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinPoset {
    n: usize,
    le: Vec<Vec<bool>>,
}

impl FinPoset {
    pub fn new(le: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let n = le.len();
        if n > 64 {
            return Err(PosetError::TooBig);
        }
        if le.iter().any(|r| r.len() != n) {
            return Err(PosetError::Shape(n));
        }
        for a in 0..n {
            if !le[a][a] {
                return Err(PosetError::Reflexive(a));
            }
            for b in 0..n {
                if a != b && le[a][b] && le[b][a] {
                    return Err(PosetError::Antisymmetric(a, b));
                }
                for c in 0..n {
                    if le[a][b] && le[b][c] && !le[a][c] {
                        return Err(PosetError::Transitive(a, b, c));
                    }
                }
            }
        }
        Ok(FinPoset { n, le })
    }

    /// Reflexive-transitive closure of the given covering pairs.
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut le = vec![vec![false; n]; n];
        for (a, row) in le.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in pairs {
            le[a][b] = true;
        }
        warshall(&mut le);
        FinPoset::new(le)
    }

    pub fn chain(n: usize) -> Self {
        let le = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        FinPoset { n, le }
    }

    pub fn antichain(n: usize) -> Self {
        let le = (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect();
        FinPoset { n, le }
    }

    /// A rooted tree from parent links; the root is the least element.
    pub fn tree(parents: &[Option<usize>]) -> Result<Self, PosetError> {
        let pairs: Vec<_> = parents.iter().enumerate().filter_map(|(c, p)| p.map(|p| (p, c))).collect();
        FinPoset::from_relation(parents.len(), &pairs)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.le
    }

    /// Points above `w`, in increasing index order.
    pub fn up(&self, w: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.le[w][u]).collect()
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn is_upset(&self, u: u64) -> bool {
        u & !self.full() == 0
            && (0..self.n).all(|a| u >> a & 1 == 0 || (0..self.n).all(|b| !self.le[a][b] || u >> b & 1 == 1))
    }

    pub fn upset_of(&self, w: usize) -> u64 {
        self.up(w).into_iter().fold(0, |acc, u| acc | 1 << u)
    }

    /// Every upset, in increasing bitmask order.
    pub fn upsets(&self) -> Vec<u64> {
        (0..=self.full()).filter(|&u| self.is_upset(u)).collect()
    }

    pub fn is_rooted_tree(&self) -> bool {
        let has_least = (0..self.n).any(|r| (0..self.n).all(|b| self.le[r][b]));
        let downsets_linear = (0..self.n).all(|w| {
            let below: Vec<_> = (0..self.n).filter(|&a| self.le[a][w]).collect();
            below.iter().all(|&a| below.iter().all(|&b| self.le[a][b] || self.le[b][a]))
        });
        self.n > 0 && has_least && downsets_linear
    }

    /// Every partial order on `0..n`.
    pub fn enumerate(n: usize) -> Vec<FinPoset> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
        let mut out = Vec::new();
        for mask in 0u64..1 << pairs.len() {
            let mut le = vec![vec![false; n]; n];
            for (a, row) in le.iter_mut().enumerate() {
                row[a] = true;
            }
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    le[a][b] = true;
                }
            }
            if let Ok(p) = FinPoset::new(le) {
                out.push(p);
            }
        }
        out
    }
}

fn warshall(le: &mut [Vec<bool>]) {
    let n = le.len();
    for k in 0..n {
        for a in 0..n {
            if le[a][k] {
                for b in 0..n {
                    if le[k][b] {
                        le[a][b] = true;
                    }
                }
            }
        }
    }
}

/// `{x | for all y >= x, y in u implies y in v}`.
pub fn heyting_implies(p: &FinPoset, u: u64, v: u64) -> Result<u64, PosetError> {
    for s in [u, v] {
        if !p.is_upset(s) {
            return Err(PosetError::NotUpset(s));
        }
    }
    Ok((0..p.len())
        .filter(|&x| p.up(x).into_iter().all(|y| u >> y & 1 == 0 || v >> y & 1 == 1))
        .fold(0, |acc, x| acc | 1 << x))
}

/// Upsets of a finite poset as a Heyting algebra, and as a thin model whose
/// morphisms are inclusions.
#[derive(Clone, Debug)]
pub struct UpsetAlgebra {
    pub poset: FinPoset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inclusion {
    pub src: u64,
    pub tgt: u64,
}

impl UpsetAlgebra {
    pub fn new(poset: FinPoset) -> Self {
        UpsetAlgebra { poset }
    }

    pub fn top(&self) -> u64 {
        self.poset.full()
    }

    pub fn implies(&self, u: u64, v: u64) -> Result<u64, PosetError> {
        heyting_implies(&self.poset, u, v)
    }

    pub fn neg(&self, u: u64) -> Result<u64, PosetError> {
        self.implies(u, 0)
    }

    pub fn elements(&self) -> Vec<u64> {
        self.poset.upsets()
    }

    fn incl(&self, src: u64, tgt: u64) -> Result<Inclusion, ModelError> {
        if src & !tgt == 0 {
            Ok(Inclusion { src, tgt })
        } else {
            Err(ModelError::Mismatch(format!("{src:#b} is not below {tgt:#b}")))
        }
    }

    fn checked(&self, r: Result<u64, PosetError>) -> Result<u64, ModelError> {
        r.map_err(|e| ModelError::Mismatch(e.to_string()))
    }
}

impl Model for UpsetAlgebra {
    type Obj = u64;
    type Mor = Inclusion;

    fn id(&self, a: &u64) -> Result<Inclusion, ModelError> {
        self.incl(*a, *a)
    }
    fn compose(&self, g: &Inclusion, f: &Inclusion) -> Result<Inclusion, ModelError> {
        if f.tgt != g.src {
            return Err(ModelError::Mismatch("inclusion endpoints differ".into()));
        }
        self.incl(f.src, g.tgt)
    }
    fn terminal(&self) -> u64 {
        self.top()
    }
    fn to_terminal(&self, a: &u64) -> Result<Inclusion, ModelError> {
        self.incl(*a, self.top())
    }
    fn initial(&self) -> Result<u64, ModelError> {
        Ok(0)
    }
    fn from_initial(&self, a: &u64) -> Result<Inclusion, ModelError> {
        self.incl(0, *a)
    }
    fn product(&self, a: &u64, b: &u64) -> Result<u64, ModelError> {
        Ok(a & b)
    }
    fn proj0(&self, a: &u64, b: &u64) -> Result<Inclusion, ModelError> {
        self.incl(a & b, *a)
    }
    fn proj1(&self, a: &u64, b: &u64) -> Result<Inclusion, ModelError> {
        self.incl(a & b, *b)
    }
    fn pair(&self, f: &Inclusion, g: &Inclusion) -> Result<Inclusion, ModelError> {
        if f.src != g.src {
            return Err(ModelError::Mismatch("pairing needs a common source".into()));
        }
        self.incl(f.src, f.tgt & g.tgt)
    }
    fn coproduct(&self, a: &u64, b: &u64) -> Result<u64, ModelError> {
        Ok(a | b)
    }
    fn inj0(&self, a: &u64, b: &u64) -> Result<Inclusion, ModelError> {
        self.incl(*a, a | b)
    }
    fn inj1(&self, a: &u64, b: &u64) -> Result<Inclusion, ModelError> {
        self.incl(*b, a | b)
    }
    fn copair(&self, f: &Inclusion, g: &Inclusion) -> Result<Inclusion, ModelError> {
        if f.tgt != g.tgt {
            return Err(ModelError::Mismatch("copairing needs a common target".into()));
        }
        self.incl(f.src | g.src, f.tgt)
    }
    fn exponential(&self, a: &u64, b: &u64) -> Result<u64, ModelError> {
        self.checked(self.implies(*a, *b))
    }
    fn eval(&self, a: &u64, b: &u64) -> Result<Inclusion, ModelError> {
        let e = self.exponential(a, b)?;
        self.incl(e & a, *b)
    }
    fn curry(&self, c: &u64, a: &u64, b: &u64, f: &Inclusion) -> Result<Inclusion, ModelError> {
        if f.src != c & a || f.tgt != *b {
            return Err(ModelError::Mismatch("curry argument has the wrong endpoints".into()));
        }
        self.incl(*c, self.exponential(a, b)?)
    }
    fn mor_eq(&self, f: &Inclusion, g: &Inclusion) -> Result<bool, ModelError> {
        Ok(f == g)
    }
    fn points(&self, a: &u64) -> Result<Vec<Inclusion>, ModelError> {
        Ok(if *a == self.top() { vec![self.incl(self.top(), *a)?] } else { vec![] })
    }
}

/// Quotient of a preorder by mutual reachability.
///
/// Returns the reflected poset and the class of every input object. Classes
/// are numbered in order of their least member.
pub fn poset_reflection(n: usize, hom_nonempty: impl Fn(usize, usize) -> bool) -> (FinPoset, Vec<usize>) {
    let mut reach: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a == b || hom_nonempty(a, b)).collect()).collect();
    warshall(&mut reach);
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for a in 0..n {
        if class[a] == usize::MAX {
            for b in a..n {
                if reach[a][b] && reach[b][a] {
                    class[b] = reps.len();
                }
            }
            reps.push(a);
        }
    }
    let le = reps.iter().map(|&a| reps.iter().map(|&b| reach[a][b]).collect()).collect();
    (FinPoset::new(le).expect("reflection of a preorder is a poset"), class)
}

/// Outcome of checking the prime-filter embedding of an upset algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KripkeReport {
    pub elements: usize,
    pub prime_filters: usize,
    pub injective: bool,
    pub order_embedding: bool,
    pub preserves: bool,
}

impl KripkeReport {
    pub fn ok(&self) -> bool {
        self.injective && self.order_embedding && self.preserves
    }
}

/// Builds `e(a)(f) = f(a)` from the algebra into upsets of its poset of
/// prime filters and checks it is an order-embedding preserving
/// `T, F, /\, \/, ->`.
///
/// Prime filters are the lattice homomorphisms into `2`; in a finite
/// lattice every filter is principal, so candidates are `up(m)`.
pub fn kripke_embedding_check(h: &UpsetAlgebra) -> KripkeReport {
    let elems = h.elements();
    let sub = |a: u64, b: u64| a & !b == 0;
    let filters: Vec<Vec<bool>> = elems
        .iter()
        .filter(|&&m| m != 0)
        .map(|&m| elems.iter().map(|&x| sub(m, x)).collect::<Vec<bool>>())
        .filter(|f| {
            (0..elems.len()).all(|i| {
                (0..elems.len()).all(|j| {
                    let join = elems.iter().position(|&z| z == elems[i] | elems[j]).expect("closed under union");
                    !f[join] || f[i] || f[j]
                })
            })
        })
        .collect();
    let fl: Vec<(usize, usize)> = (0..filters.len())
        .flat_map(|a| (0..filters.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| (0..elems.len()).all(|i| !filters[a][i] || filters[b][i]))
        .collect();
    let spectrum = FinPoset::from_relation(filters.len(), &fl).expect("inclusion of filters is a partial order");
    let target = UpsetAlgebra::new(spectrum);
    let e: Vec<u64> = (0..elems.len())
        .map(|i| (0..filters.len()).filter(|&f| filters[f][i]).fold(0, |acc, f| acc | 1 << f))
        .collect();
    let idx = |x: u64| elems.iter().position(|&z| z == x).expect("operation stays in the algebra");
    let injective = (0..e.len()).all(|i| (0..e.len()).all(|j| i == j || e[i] != e[j]));
    let order_embedding = (0..e.len()).all(|i| (0..e.len()).all(|j| sub(elems[i], elems[j]) == sub(e[i], e[j])));
    let mut preserves = e[idx(h.top())] == target.top() && e[idx(0)] == 0;
    for i in 0..elems.len() {
        for j in 0..elems.len() {
            let (a, b) = (elems[i], elems[j]);
            let imp = h.implies(a, b).expect("upsets");
            let timp = target.implies(e[i], e[j]).expect("image of e is upsets");
            preserves &= e[idx(a & b)] == e[i] & e[j] && e[idx(a | b)] == e[i] | e[j] && e[idx(imp)] == timp;
        }
    }
    KripkeReport { elements: elems.len(), prime_filters: filters.len(), injective, order_embedding, preserves }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implication_examples() {
        let p = FinPoset::chain(2);
        assert_eq!(heyting_implies(&p, 0b10, 0).unwrap(), 0);
        for u in p.upsets() {
            assert_eq!(heyting_implies(&p, u, u).unwrap(), p.full());
        }
        assert!(matches!(heyting_implies(&p, 0b01, 0), Err(PosetError::NotUpset(1))));
    }

    #[test]
    fn weak_excluded_middle_with_top() {
        for n in 1..=4 {
            for p in FinPoset::enumerate(n) {
                let has_top = (0..n).any(|t| (0..n).all(|a| p.leq(a, t)));
                if !has_top {
                    continue;
                }
                let h = UpsetAlgebra::new(p.clone());
                for u in p.upsets() {
                    let nu = h.neg(u).unwrap();
                    assert_eq!(nu | h.neg(nu).unwrap(), p.full());
                }
            }
        }
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| FinPoset::enumerate(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn tree_shape() {
        let t = FinPoset::tree(&[None, Some(0), Some(0)]).unwrap();
        assert!(t.is_rooted_tree());
        assert!(!FinPoset::antichain(2).is_rooted_tree());
        let vee = FinPoset::from_relation(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(!vee.is_rooted_tree());
    }

    #[test]
    fn reflection_examples() {
        let (p, cls) = poset_reflection(3, |_, _| false);
        assert_eq!(p, FinPoset::antichain(3));
        assert_eq!(cls, vec![0, 1, 2]);
        // FinOrd on {0,1,2}: a map m -> n exists iff m == 0 or n > 0.
        let (p, cls) = poset_reflection(3, |m, n| m == 0 || n > 0);
        assert_eq!(p, FinPoset::chain(2));
        assert_eq!(cls, vec![0, 1, 1]);
    }

    #[test]
    fn kripke_examples() {
        for p in [FinPoset::chain(1), FinPoset::chain(2), FinPoset::antichain(2)] {
            let r = kripke_embedding_check(&UpsetAlgebra::new(p));
            assert!(r.ok(), "{r:?}");
        }
        let r = kripke_embedding_check(&UpsetAlgebra::new(FinPoset::antichain(2)));
        assert_eq!(r.prime_filters, 2);
    }
}
