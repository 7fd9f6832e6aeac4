//! Finite cardinals and explicit function tables.
//!
//! Conventions: the pair `(a, b)` in `A x B` has index `a*|B| + b`; the right
//! summand of `A + B` is offset by `|A|`; a function `f: A -> B` in `[A,B]`
//! has index `sum f(i) * |B|^(|A|-1-i)`, so `f(0)` is the leading digit.

use crate::semantics::{Model, ModelError};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Table {
    pub src: usize,
    pub tgt: usize,
    pub map: Vec<usize>,
}

impl Table {
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }
}

#[derive(Clone, Debug)]
pub struct FinOrd {
    /// Largest object or table this instance will build.
    pub cap: usize,
    /// When set, `N` is `{0..k-1}` with successor saturating at `k-1`.
    pub truncated_nno: Option<usize>,
}

impl Default for FinOrd {
    fn default() -> Self {
        FinOrd { cap: 1 << 20, truncated_nno: None }
    }
}

impl FinOrd {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_truncated_nno(k: usize) -> Self {
        FinOrd { truncated_nno: Some(k.max(1)), ..Self::default() }
    }

    fn sized(&self, what: &str, n: Option<usize>) -> Result<usize, ModelError> {
        match n {
            Some(n) if n <= self.cap => Ok(n),
            _ => Err(ModelError::TooLarge(what.to_string())),
        }
    }

    fn table(&self, src: usize, tgt: usize, map: Vec<usize>) -> Table {
        debug_assert!(map.len() == src && map.iter().all(|&y| y < tgt));
        Table { src, tgt, map }
    }

    pub fn tabulate(&self, src: usize, tgt: usize, f: impl Fn(usize) -> usize) -> Result<Table, ModelError> {
        self.sized("table", Some(src))?;
        Ok(self.table(src, tgt, (0..src).map(f).collect()))
    }

    /// Index in `[a, b]` of the function with the given values.
    pub fn encode_fn(&self, b: usize, values: &[usize]) -> usize {
        values.iter().fold(0, |acc, &v| acc * b + v)
    }

    /// Values of the function with index `e` in `[a, b]`.
    pub fn decode_fn(&self, a: usize, b: usize, mut e: usize) -> Vec<usize> {
        let mut out = vec![0; a];
        for slot in out.iter_mut().rev() {
            *slot = e % b.max(1);
            e /= b.max(1);
        }
        out
    }

    /// The truncated `N` with its zero and successor.
    fn trunc(&self) -> Result<usize, ModelError> {
        self.truncated_nno.ok_or(ModelError::Unsupported("natural numbers object"))
    }
}

impl Model for FinOrd {
    type Obj = usize;
    type Mor = Table;

    fn id(&self, a: &usize) -> Result<Table, ModelError> {
        self.tabulate(*a, *a, |x| x)
    }
    fn compose(&self, g: &Table, f: &Table) -> Result<Table, ModelError> {
        if f.tgt != g.src {
            return Err(ModelError::Mismatch(format!("{} -> {} then {} -> {}", f.src, f.tgt, g.src, g.tgt)));
        }
        Ok(self.table(f.src, g.tgt, f.map.iter().map(|&y| g.map[y]).collect()))
    }
    fn terminal(&self) -> usize {
        1
    }
    fn to_terminal(&self, a: &usize) -> Result<Table, ModelError> {
        self.tabulate(*a, 1, |_| 0)
    }
    fn initial(&self) -> Result<usize, ModelError> {
        Ok(0)
    }
    fn from_initial(&self, a: &usize) -> Result<Table, ModelError> {
        Ok(self.table(0, *a, vec![]))
    }
    fn product(&self, a: &usize, b: &usize) -> Result<usize, ModelError> {
        self.sized("product", a.checked_mul(*b))
    }
    fn proj0(&self, a: &usize, b: &usize) -> Result<Table, ModelError> {
        let n = self.product(a, b)?;
        self.tabulate(n, *a, |i| i / b)
    }
    fn proj1(&self, a: &usize, b: &usize) -> Result<Table, ModelError> {
        let n = self.product(a, b)?;
        self.tabulate(n, *b, |i| i % b)
    }
    fn pair(&self, f: &Table, g: &Table) -> Result<Table, ModelError> {
        if f.src != g.src {
            return Err(ModelError::Mismatch("pairing needs a common source".into()));
        }
        let tgt = self.product(&f.tgt, &g.tgt)?;
        self.tabulate(f.src, tgt, |i| f.map[i] * g.tgt + g.map[i])
    }
    fn coproduct(&self, a: &usize, b: &usize) -> Result<usize, ModelError> {
        self.sized("coproduct", a.checked_add(*b))
    }
    fn inj0(&self, a: &usize, b: &usize) -> Result<Table, ModelError> {
        self.tabulate(*a, self.coproduct(a, b)?, |i| i)
    }
    fn inj1(&self, a: &usize, b: &usize) -> Result<Table, ModelError> {
        self.tabulate(*b, self.coproduct(a, b)?, |i| a + i)
    }
    fn copair(&self, f: &Table, g: &Table) -> Result<Table, ModelError> {
        if f.tgt != g.tgt {
            return Err(ModelError::Mismatch("copairing needs a common target".into()));
        }
        let n = self.coproduct(&f.src, &g.src)?;
        self.tabulate(n, f.tgt, |i| if i < f.src { f.map[i] } else { g.map[i - f.src] })
    }
    fn exponential(&self, a: &usize, b: &usize) -> Result<usize, ModelError> {
        let n = u32::try_from(*a).ok().and_then(|a| b.checked_pow(a));
        self.sized("exponential", n)
    }
    fn eval(&self, a: &usize, b: &usize) -> Result<Table, ModelError> {
        let e = self.exponential(a, b)?;
        let n = self.product(&e, a)?;
        self.tabulate(n, *b, |i| {
            let (f, x) = (i / a, i % a);
            f / b.pow((a - 1 - x) as u32) % b
        })
    }
    fn curry(&self, c: &usize, a: &usize, b: &usize, f: &Table) -> Result<Table, ModelError> {
        if f.src != self.product(c, a)? || f.tgt != *b {
            return Err(ModelError::Mismatch("curry argument has the wrong endpoints".into()));
        }
        let e = self.exponential(a, b)?;
        self.tabulate(*c, e, |z| self.encode_fn(*b, &f.map[z * a..(z + 1) * a]))
    }
    fn mor_eq(&self, f: &Table, g: &Table) -> Result<bool, ModelError> {
        Ok(f == g)
    }

    /// Tabulated directly: `(f, g)` goes to the function agreeing with `f`
    /// on the left summand and with `g` on the right.
    fn case_map(&self, a: &usize, b: &usize, c: &usize) -> Result<Table, ModelError> {
        let ea = self.exponential(a, c)?;
        let eb = self.exponential(b, c)?;
        let p = self.product(&ea, &eb)?;
        let ab = self.coproduct(a, b)?;
        let tgt = self.exponential(&ab, c)?;
        self.tabulate(p, tgt, |i| {
            let mut vals = self.decode_fn(*a, *c, i / eb);
            vals.extend(self.decode_fn(*b, *c, i % eb));
            self.encode_fn(*c, &vals)
        })
    }

    fn points(&self, a: &usize) -> Result<Vec<Table>, ModelError> {
        Ok((0..*a).map(|x| self.table(1, *a, vec![x])).collect())
    }

    fn nno(&self) -> Result<usize, ModelError> {
        self.trunc()
    }
    fn zero(&self) -> Result<Table, ModelError> {
        let k = self.trunc()?;
        Ok(self.table(1, k, vec![0]))
    }
    fn succ(&self) -> Result<Table, ModelError> {
        let k = self.trunc()?;
        self.tabulate(k, k, |n| (n + 1).min(k - 1))
    }
    fn point_component(&self, a: &usize, b: &usize, r: &Table, second: bool) -> Result<Table, ModelError> {
        let i = r.map[0];
        Ok(if second { self.table(1, *b, vec![i % b]) } else { self.table(1, *a, vec![i / b]) })
    }

    fn point_apply(&self, a: &usize, b: &usize, f: &Table, x: &Table) -> Result<Table, ModelError> {
        let digit = f.map[0] / b.pow((a - 1 - x.map[0]) as u32) % b;
        Ok(self.table(1, *b, vec![digit]))
    }

    fn point_summand(&self, a: &usize, b: &usize, r: &Table) -> Result<Option<(bool, Table)>, ModelError> {
        let i = r.map[0];
        Ok(Some(if i < *a { (false, self.table(1, *a, vec![i])) } else { (true, self.table(1, *b, vec![i - a])) }))
    }

    fn iterate(&self, a: &usize, base: &Table, step: &Table) -> Result<Table, ModelError> {
        let k = self.trunc()?;
        if base.src != 1 || base.tgt != *a || step.src != *a || step.tgt != *a {
            return Err(ModelError::Mismatch("iteration needs 1 -> A and A -> A".into()));
        }
        let mut vals = vec![base.map[0]];
        for n in 1..k {
            vals.push(step.map[vals[n - 1]]);
        }
        Ok(self.table(k, *a, vals))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::generic_case_map;

    #[test]
    fn sizes() {
        let m = FinOrd::new();
        assert_eq!(m.product(&2, &2).unwrap(), 4);
        assert_eq!(m.exponential(&2, &2).unwrap(), 4);
        assert_eq!(m.exponential(&0, &5).unwrap(), 1);
        assert_eq!(m.exponential(&3, &0).unwrap(), 0);
        assert!(matches!(m.exponential(&40, &3), Err(ModelError::TooLarge(_))));
    }

    #[test]
    fn eval_curry_law() {
        let m = FinOrd::new();
        let f = m.tabulate(6, 2, |i| (i * 7 + 1) % 2).unwrap();
        let (c, a, b) = (2, 3, 2);
        let lam = m.curry(&c, &a, &b, &f).unwrap();
        let lhs = m
            .compose(&m.eval(&a, &b).unwrap(), &m.pair(&m.compose(&lam, &m.proj0(&c, &a).unwrap()).unwrap(), &m.proj1(&c, &a).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, f);
    }

    #[test]
    fn direct_case_map_matches_generic() {
        let m = FinOrd::new();
        for (a, b, c) in [(1, 1, 2), (2, 1, 2), (0, 2, 2), (1, 2, 1), (2, 2, 2)] {
            assert_eq!(m.case_map(&a, &b, &c).unwrap(), generic_case_map(&m, &a, &b, &c).unwrap());
        }
    }

    #[test]
    fn truncated_numerals() {
        let m = FinOrd::with_truncated_nno(4);
        let n: Vec<usize> = (0..6).map(|k| m.numeral(k).unwrap().map[0]).collect();
        assert_eq!(n, vec![0, 1, 2, 3, 3, 3]);
    }
}
