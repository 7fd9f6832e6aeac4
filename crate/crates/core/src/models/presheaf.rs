//! Covariant functors from a finite poset to finite sets.
//!
//! A presheaf stores a size per point and, for every `w <= u`, a restriction
//! table `E(w) -> E(u)`. The exponential `[E, F](w)` is the set of natural
//! families `(a_u : E(u) -> F(u))` for `u >= w`, which is
//! `Hom(y^w x E, F)` written out pointwise.

use super::poset::{poset_reflection, FinPoset};
use crate::semantics::{Model, ModelError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Presheaf {
    pub sizes: Vec<usize>,
    /// `restrict[w][u]` is present exactly when `w <= u`.
    pub restrict: Vec<Vec<Option<Vec<usize>>>>,
}

impl Presheaf {
    pub fn constant(p: &FinPoset, n: usize) -> Self {
        Presheaf::build(p, vec![n; p.len()], |_, _, x| x)
    }

    pub fn build(p: &FinPoset, sizes: Vec<usize>, r: impl Fn(usize, usize, usize) -> usize) -> Self {
        let n = p.len();
        let restrict = (0..n)
            .map(|w| {
                (0..n)
                    .map(|u| p.leq(w, u).then(|| (0..sizes[w]).map(|x| r(w, u, x)).collect()))
                    .collect()
            })
            .collect();
        Presheaf { sizes, restrict }
    }

    pub fn at(&self, w: usize, u: usize, x: usize) -> usize {
        self.restrict[w][u].as_ref().expect("restriction along w <= u")[x]
    }

    /// Whether the restriction tables form a functor over `p`.
    pub fn is_valid(&self, p: &FinPoset) -> bool {
        let n = p.len();
        if self.sizes.len() != n || self.restrict.len() != n {
            return false;
        }
        for w in 0..n {
            for u in 0..n {
                match (&self.restrict[w][u], p.leq(w, u)) {
                    (Some(t), true) => {
                        if t.len() != self.sizes[w] || t.iter().any(|&y| y >= self.sizes[u]) {
                            return false;
                        }
                        if w == u && t.iter().enumerate().any(|(x, &y)| x != y) {
                            return false;
                        }
                    }
                    (None, false) => {}
                    _ => return false,
                }
            }
        }
        (0..n).all(|w| {
            (0..n).all(|u| {
                (0..n).all(|v| {
                    !(p.leq(w, u) && p.leq(u, v)) || (0..self.sizes[w]).all(|x| self.at(u, v, self.at(w, u, x)) == self.at(w, v, x))
                })
            })
        })
    }

    /// Points where the presheaf is inhabited.
    pub fn support(&self) -> u64 {
        self.sizes.iter().enumerate().filter(|(_, &s)| s > 0).fold(0, |acc, (w, _)| acc | 1 << w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub src: Arc<Presheaf>,
    pub tgt: Arc<Presheaf>,
    pub comps: Vec<Vec<usize>>,
}

/// One member of `[E, F](w)`: a component table per point above `w`.
type Family = Vec<Vec<usize>>;

struct ExpData {
    obj: Arc<Presheaf>,
    /// Points above each `w`, in the order families store them.
    ups: Vec<Vec<usize>>,
    families: Vec<Vec<Family>>,
    index: Vec<HashMap<Family, usize>>,
}

pub struct PresheafModel {
    pub poset: FinPoset,
    /// Largest pointwise set this instance will build.
    pub cap: usize,
    cache: Mutex<HashMap<(Arc<Presheaf>, Arc<Presheaf>), Arc<ExpData>>>,
}

impl PresheafModel {
    pub fn new(poset: FinPoset) -> Self {
        PresheafModel { poset, cap: 4096, cache: Mutex::new(HashMap::new()) }
    }

    pub fn object(&self, p: Presheaf) -> Result<Arc<Presheaf>, ModelError> {
        if p.is_valid(&self.poset) {
            Ok(Arc::new(p))
        } else {
            Err(ModelError::Mismatch("restriction tables are not functorial".into()))
        }
    }

    fn n(&self) -> usize {
        self.poset.len()
    }

    fn check_size(&self, s: Option<usize>) -> Result<usize, ModelError> {
        match s {
            Some(s) if s <= self.cap => Ok(s),
            _ => Err(ModelError::TooLarge("presheaf component".into())),
        }
    }

    fn nat(&self, src: &Arc<Presheaf>, tgt: &Arc<Presheaf>, f: impl Fn(usize, usize) -> usize) -> NatTrans {
        let comps = (0..self.n()).map(|w| (0..src.sizes[w]).map(|x| f(w, x)).collect()).collect();
        NatTrans { src: src.clone(), tgt: tgt.clone(), comps }
    }

    /// Whether the components commute with restriction.
    pub fn is_natural(&self, t: &NatTrans) -> bool {
        let p = &self.poset;
        (0..self.n()).all(|w| {
            (0..self.n()).all(|u| {
                !p.leq(w, u) || (0..t.src.sizes[w]).all(|x| t.comps[u][t.src.at(w, u, x)] == t.tgt.at(w, u, t.comps[w][x]))
            })
        })
    }

    /// Natural transformations `e -> f` in lexicographic order, up to `limit`.
    pub fn hom(&self, e: &Presheaf, f: &Presheaf, limit: usize) -> Vec<Vec<Vec<usize>>> {
        let pts: Vec<(usize, usize)> = (0..self.n()).flat_map(|w| (0..e.sizes[w]).map(move |x| (w, x))).collect();
        let mut comps: Vec<Vec<usize>> = e.sizes.iter().map(|&s| vec![usize::MAX; s]).collect();
        let mut out = Vec::new();
        self.hom_rec(e, f, &pts, 0, &mut comps, &mut out, limit);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn hom_rec(
        &self,
        e: &Presheaf,
        f: &Presheaf,
        pts: &[(usize, usize)],
        k: usize,
        comps: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let Some(&(w, x)) = pts.get(k) else {
            out.push(comps.clone());
            return;
        };
        for y in 0..f.sizes[w] {
            comps[w][x] = y;
            let consistent = (0..self.n()).all(|v| {
                let mut ok = true;
                if self.poset.leq(v, w) {
                    for x0 in 0..e.sizes[v] {
                        if e.at(v, w, x0) == x && comps[v][x0] != usize::MAX {
                            ok &= f.at(v, w, comps[v][x0]) == y;
                        }
                    }
                }
                if self.poset.leq(w, v) {
                    let img = comps[v][e.at(w, v, x)];
                    ok &= img == usize::MAX || img == f.at(w, v, y);
                }
                ok
            });
            if consistent {
                self.hom_rec(e, f, pts, k + 1, comps, out, limit);
            }
        }
        comps[w][x] = usize::MAX;
    }

    fn exp_data(&self, e: &Arc<Presheaf>, f: &Arc<Presheaf>) -> Result<Arc<ExpData>, ModelError> {
        let key = (e.clone(), f.clone());
        if let Some(d) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(d.clone());
        }
        let n = self.n();
        let ups: Vec<Vec<usize>> = (0..n)
            .map(|w| std::iter::once(w).chain(self.poset.up(w).into_iter().filter(|&u| u != w)).collect())
            .collect();
        let mut families = Vec::with_capacity(n);
        for w in 0..n {
            let sub = FinPoset::new(ups[w].iter().map(|&a| ups[w].iter().map(|&b| self.poset.leq(a, b)).collect()).collect())
                .expect("sub-poset of a poset");
            let local = PresheafModel::new(sub);
            let restrict = |p: &Presheaf| Presheaf {
                sizes: ups[w].iter().map(|&u| p.sizes[u]).collect(),
                restrict: ups[w].iter().map(|&a| ups[w].iter().map(|&b| p.restrict[a][b].clone()).collect()).collect(),
            };
            let fams = local.hom(&restrict(e), &restrict(f), self.cap + 1);
            self.check_size(Some(fams.len()))?;
            families.push(fams);
        }
        let index: Vec<HashMap<Family, usize>> =
            families.iter().map(|fs| fs.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect()).collect();
        let restrict = (0..n)
            .map(|w| {
                (0..n)
                    .map(|u| {
                        self.poset.leq(w, u).then(|| {
                            families[w]
                                .iter()
                                .map(|fam| {
                                    let sub: Family = ups[u]
                                        .iter()
                                        .map(|v| fam[ups[w].iter().position(|x| x == v).expect("up(u) within up(w)")].clone())
                                        .collect();
                                    index[u][&sub]
                                })
                                .collect()
                        })
                    })
                    .collect()
            })
            .collect();
        let obj = Arc::new(Presheaf { sizes: families.iter().map(Vec::len).collect(), restrict });
        let data = Arc::new(ExpData { obj, ups, families, index });
        self.cache.lock().expect("cache lock").insert(key, data.clone());
        Ok(data)
    }
}

impl Model for PresheafModel {
    type Obj = Arc<Presheaf>;
    type Mor = NatTrans;

    fn id(&self, a: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        Ok(self.nat(a, a, |_, x| x))
    }
    fn compose(&self, g: &NatTrans, f: &NatTrans) -> Result<NatTrans, ModelError> {
        if f.tgt != g.src {
            return Err(ModelError::Mismatch("natural transformations do not compose".into()));
        }
        Ok(self.nat(&f.src, &g.tgt, |w, x| g.comps[w][f.comps[w][x]]))
    }
    fn terminal(&self) -> Arc<Presheaf> {
        Arc::new(Presheaf::constant(&self.poset, 1))
    }
    fn to_terminal(&self, a: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        Ok(self.nat(a, &self.terminal(), |_, _| 0))
    }
    fn initial(&self) -> Result<Arc<Presheaf>, ModelError> {
        Ok(Arc::new(Presheaf::constant(&self.poset, 0)))
    }
    fn from_initial(&self, a: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        Ok(self.nat(&self.initial()?, a, |_, _| unreachable!("empty component")))
    }
    fn product(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<Arc<Presheaf>, ModelError> {
        let sizes = (0..self.n())
            .map(|w| self.check_size(a.sizes[w].checked_mul(b.sizes[w])))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arc::new(Presheaf::build(&self.poset, sizes, |w, u, i| {
            let (x, y) = (i / b.sizes[w], i % b.sizes[w]);
            a.at(w, u, x) * b.sizes[u] + b.at(w, u, y)
        })))
    }
    fn proj0(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        let p = self.product(a, b)?;
        Ok(self.nat(&p, a, |w, i| i / b.sizes[w]))
    }
    fn proj1(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        let p = self.product(a, b)?;
        Ok(self.nat(&p, b, |w, i| i % b.sizes[w]))
    }
    fn pair(&self, f: &NatTrans, g: &NatTrans) -> Result<NatTrans, ModelError> {
        if f.src != g.src {
            return Err(ModelError::Mismatch("pairing needs a common source".into()));
        }
        let p = self.product(&f.tgt, &g.tgt)?;
        Ok(self.nat(&f.src, &p, |w, x| f.comps[w][x] * g.tgt.sizes[w] + g.comps[w][x]))
    }
    fn coproduct(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<Arc<Presheaf>, ModelError> {
        let sizes = (0..self.n())
            .map(|w| self.check_size(a.sizes[w].checked_add(b.sizes[w])))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arc::new(Presheaf::build(&self.poset, sizes, |w, u, i| {
            if i < a.sizes[w] {
                a.at(w, u, i)
            } else {
                a.sizes[u] + b.at(w, u, i - a.sizes[w])
            }
        })))
    }
    fn inj0(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        Ok(self.nat(a, &self.coproduct(a, b)?, |_, x| x))
    }
    fn inj1(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        Ok(self.nat(b, &self.coproduct(a, b)?, |w, x| a.sizes[w] + x))
    }
    fn copair(&self, f: &NatTrans, g: &NatTrans) -> Result<NatTrans, ModelError> {
        if f.tgt != g.tgt {
            return Err(ModelError::Mismatch("copairing needs a common target".into()));
        }
        let s = self.coproduct(&f.src, &g.src)?;
        Ok(self.nat(&s, &f.tgt, |w, i| {
            let k = f.src.sizes[w];
            if i < k {
                f.comps[w][i]
            } else {
                g.comps[w][i - k]
            }
        }))
    }
    fn exponential(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<Arc<Presheaf>, ModelError> {
        Ok(self.exp_data(a, b)?.obj.clone())
    }
    fn eval(&self, a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<NatTrans, ModelError> {
        let d = self.exp_data(a, b)?;
        let p = self.product(&d.obj, a)?;
        Ok(self.nat(&p, b, |w, i| {
            let (fam, x) = (i / a.sizes[w], i % a.sizes[w]);
            // `w` is the least point of `up(w)`, stored first.
            d.families[w][fam][0][x]
        }))
    }
    fn curry(&self, c: &Arc<Presheaf>, a: &Arc<Presheaf>, b: &Arc<Presheaf>, f: &NatTrans) -> Result<NatTrans, ModelError> {
        if f.src != self.product(c, a)? || f.tgt != *b {
            return Err(ModelError::Mismatch("curry argument has the wrong endpoints".into()));
        }
        let d = self.exp_data(a, b)?;
        let mut comps = Vec::with_capacity(self.n());
        for w in 0..self.n() {
            let mut row = Vec::with_capacity(c.sizes[w]);
            for z in 0..c.sizes[w] {
                let fam: Family = d.ups[w]
                    .iter()
                    .map(|&u| {
                        let cz = c.at(w, u, z);
                        (0..a.sizes[u]).map(|x| f.comps[u][cz * a.sizes[u] + x]).collect()
                    })
                    .collect();
                let idx = *d.index[w].get(&fam).ok_or_else(|| ModelError::Mismatch("curried family is not natural".into()))?;
                row.push(idx);
            }
            comps.push(row);
        }
        Ok(NatTrans { src: c.clone(), tgt: d.obj.clone(), comps })
    }
    fn mor_eq(&self, f: &NatTrans, g: &NatTrans) -> Result<bool, ModelError> {
        Ok(f == g)
    }
    fn points(&self, a: &Arc<Presheaf>) -> Result<Vec<NatTrans>, ModelError> {
        let one = self.terminal();
        Ok(self.hom(&one, a, self.cap).into_iter().map(|comps| NatTrans { src: one.clone(), tgt: a.clone(), comps }).collect())
    }
}

/// Every presheaf on `p` with component sizes at most `max_size`.
pub fn enumerate_presheaves(p: &FinPoset, max_size: usize) -> Vec<Presheaf> {
    let n = p.len();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; n];
    loop {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|w| (0..n).map(move |u| (w, u))).filter(|&(w, u)| w != u && p.leq(w, u)).collect();
        let mut choice = vec![0usize; pairs.len()];
        let counts: Vec<usize> = pairs.iter().map(|&(w, u)| sizes[u].pow(sizes[w] as u32)).collect();
        if counts.iter().all(|&c| c > 0) {
            loop {
                let mut restrict: Vec<Vec<Option<Vec<usize>>>> = (0..n)
                    .map(|w| (0..n).map(|u| (w == u).then(|| (0..sizes[w]).collect())).collect())
                    .collect();
                for (k, &(w, u)) in pairs.iter().enumerate() {
                    let mut code = choice[k];
                    let mut t = vec![0; sizes[w]];
                    for slot in t.iter_mut() {
                        *slot = code % sizes[u];
                        code /= sizes[u];
                    }
                    restrict[w][u] = Some(t);
                }
                let cand = Presheaf { sizes: sizes.clone(), restrict };
                if cand.is_valid(p) {
                    out.push(cand);
                }
                let mut k = 0;
                while k < choice.len() {
                    choice[k] += 1;
                    if choice[k] < counts[k] {
                        break;
                    }
                    choice[k] = 0;
                    k += 1;
                }
                if k == choice.len() {
                    break;
                }
            }
        }
        let mut i = 0;
        while i < n {
            sizes[i] += 1;
            if sizes[i] <= max_size {
                break;
            }
            sizes[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Result of comparing the reflection of bounded presheaves with upsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeReflectionReport {
    pub presheaves: usize,
    pub classes: usize,
    pub upsets: usize,
    /// Each class has a single support and supports biject with upsets.
    pub bijective: bool,
    /// Class order coincides with inclusion of supports.
    pub order_preserving: bool,
}

impl TreeReflectionReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.order_preserving
    }
}

/// Reflects the category of presheaves on `p` with sizes at most
/// `max_size` and compares the result with the upsets of `p`.
pub fn tree_reflection_check(p: &FinPoset, max_size: usize) -> TreeReflectionReport {
    let m = PresheafModel::new(p.clone());
    let objs = enumerate_presheaves(p, max_size);
    let (refl, class) = poset_reflection(objs.len(), |a, b| !m.hom(&objs[a], &objs[b], 1).is_empty());
    let mut support = vec![None; refl.len()];
    let mut consistent = true;
    for (k, o) in objs.iter().enumerate() {
        let s = o.support();
        match support[class[k]] {
            None => support[class[k]] = Some(s),
            Some(t) => consistent &= t == s,
        }
    }
    let supports: Vec<u64> = support.into_iter().map(|s| s.unwrap_or(u64::MAX)).collect();
    let mut sorted = supports.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let upsets = p.upsets();
    let bijective = consistent && sorted.len() == supports.len() && sorted == upsets;
    let order_preserving = (0..refl.len())
        .all(|i| (0..refl.len()).all(|j| refl.leq(i, j) == (supports[i] & !supports[j] == 0)));
    TreeReflectionReport { presheaves: objs.len(), classes: refl.len(), upsets: upsets.len(), bijective, order_preserving }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_exponential_is_set_exponential() {
        let p = FinPoset::chain(1);
        let m = PresheafModel::new(p.clone());
        let e = m.object(Presheaf::constant(&p, 2)).unwrap();
        let f = m.object(Presheaf::constant(&p, 3)).unwrap();
        assert_eq!(m.exponential(&e, &f).unwrap().sizes, vec![9]);
    }

    #[test]
    fn exponential_from_terminal() {
        let p = FinPoset::chain(2);
        let m = PresheafModel::new(p.clone());
        let f = m.object(Presheaf::build(&p, vec![2, 3], |_, _, x| x)).unwrap();
        let one = m.terminal();
        assert_eq!(m.exponential(&one, &f).unwrap().sizes, f.sizes);
    }

    #[test]
    fn chain_exponential_counts() {
        let p = FinPoset::chain(2);
        let m = PresheafModel::new(p.clone());
        let c = m.object(Presheaf::constant(&p, 2)).unwrap();
        let exp = m.exponential(&c, &c).unwrap();
        for w in 0..2 {
            let yoneda = m.object(Presheaf::build(&p, (0..2).map(|u| usize::from(p.leq(w, u))).collect(), |_, _, x| x)).unwrap();
            let prod = m.product(&yoneda, &c).unwrap();
            assert_eq!(exp.sizes[w], m.hom(&prod, &c, usize::MAX).len());
        }
    }

    #[test]
    fn tree_reflection_two_chain() {
        let r = tree_reflection_check(&FinPoset::chain(2), 2);
        assert_eq!(r.classes, 3);
        assert!(r.ok(), "{r:?}");
    }
}
