//! Realizability over bicartesian closed models.
//!
//! A C-set is a carrier object, a set of elements and a relation saying which
//! points `1 -> carrier` realize which elements. Formulas are realized by
//! points of their carrier: `⊤` by the unique point, a conjunction by pairs,
//! a disjunction by injected realizers and an implication by points sending
//! every realizer of the antecedent to a realizer of the consequent.
//!
//! Quantification over points is carried out on what the model enumerates.
//! For finite carriers that is exact; elsewhere results are
//! [`BOUNDED_VERIFIED`].

pub mod arith;

use crate::decide::decide_provable;
use crate::models::{FinOrd, Table};
use crate::semantics::{interpret_proof, Assignment, Model, ModelError, SemanticsError};
use crate::syntax::{typecheck, Context, Formula, ProofTerm, TypeError};
use crate::systemt::TType;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use thiserror::Error;

/// Label for results checked only on enumerated samples.
pub const BOUNDED_VERIFIED: &str = "bounded-verified";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("no carrier for atom p{0}")]
    MissingAtom(u32),
    #[error("bound exhausted: {0}")]
    Bound(String),
    #[error("undetermined within bounds: {0}")]
    Undetermined(String),
    #[error("readback failed: {0}")]
    Readback(String),
    #[error("{0}")]
    World(String),
}

#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    /// Largest point enumeration for an implication antecedent.
    pub max_points: usize,
    /// Largest number of tuples or functions enumerated at once.
    pub max_tuples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_points: 1 << 15, max_tuples: 1 << 16 }
    }
}

/// A carrier with elements and a realizing relation.
pub struct CSet<M: Model> {
    pub carrier: M::Obj,
    pub labels: Vec<String>,
    pub points: Vec<M::Mor>,
    /// `(point, element)` pairs.
    pub rel: Vec<(usize, usize)>,
}

impl<M: Model> Clone for CSet<M> {
    fn clone(&self) -> Self {
        CSet { carrier: self.carrier.clone(), labels: self.labels.clone(), points: self.points.clone(), rel: self.rel.clone() }
    }
}

impl<M: Model> std::fmt::Debug for CSet<M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CSet").field("carrier", &self.carrier).field("labels", &self.labels).field("rel", &self.rel).finish()
    }
}

impl<M: Model> CSet<M> {
    pub fn new(carrier: M::Obj, labels: Vec<String>, points: Vec<M::Mor>, rel: Vec<(usize, usize)>) -> Self {
        CSet { carrier, labels, points, rel }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Point indices realizing element `e`.
    pub fn realizers(&self, e: usize) -> Vec<usize> {
        self.rel.iter().filter(|(_, x)| *x == e).map(|(p, _)| *p).collect()
    }

    /// Every element has a realizer.
    pub fn is_surjective(&self) -> bool {
        (0..self.len()).all(|e| self.rel.iter().any(|(_, x)| *x == e))
    }

    /// Elements realized by a point, compared up to morphism equality.
    pub fn elements_of(&self, m: &M, x: &M::Mor) -> Result<Vec<usize>, RealizeError> {
        let mut out = Vec::new();
        for (i, p) in self.points.iter().enumerate() {
            if m.mor_eq(p, x)? {
                out.extend(self.rel.iter().filter(|(q, _)| *q == i).map(|(_, e)| *e));
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Each element has exactly one realizer up to morphism equality.
    pub fn is_projective(&self, m: &M) -> Result<bool, RealizeError> {
        for e in 0..self.len() {
            let rs = self.realizers(e);
            let Some((&first, rest)) = rs.split_first() else { return Ok(false) };
            for &r in rest {
                if !m.mor_eq(&self.points[first], &self.points[r])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Every enumerated point of the carrier realizes some element.
    pub fn is_total(&self, m: &M) -> Result<bool, RealizeError> {
        for x in m.points(&self.carrier)? {
            if self.elements_of(m, &x)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn cset_terminal<M: Model>(m: &M) -> Result<CSet<M>, RealizeError> {
    let t = m.terminal();
    Ok(CSet::new(t.clone(), vec!["*".into()], vec![m.id(&t)?], vec![(0, 0)]))
}

/// Numerals `0..count` realizing themselves.
pub fn cset_standard_nat<M: Model>(m: &M, count: u64) -> Result<CSet<M>, RealizeError> {
    let points = (0..count).map(|n| m.numeral(n)).collect::<Result<Vec<_>, _>>()?;
    let n = count as usize;
    Ok(CSet::new(m.nno()?, (0..count).map(|k| k.to_string()).collect(), points, (0..n).map(|k| (k, k)).collect()))
}

pub fn cset_product<M: Model>(m: &M, s: &CSet<M>, t: &CSet<M>) -> Result<CSet<M>, RealizeError> {
    let carrier = m.product(&s.carrier, &t.carrier)?;
    let mut points = Vec::new();
    for x in &s.points {
        for y in &t.points {
            points.push(m.pair(x, y)?);
        }
    }
    let labels = s.labels.iter().flat_map(|a| t.labels.iter().map(move |b| format!("({a},{b})"))).collect();
    let mut rel = Vec::new();
    for &(x, i) in &s.rel {
        for &(y, j) in &t.rel {
            rel.push((x * t.points.len() + y, i * t.len() + j));
        }
    }
    Ok(CSet::new(carrier, labels, points, rel))
}

pub fn cset_coproduct<M: Model>(m: &M, s: &CSet<M>, t: &CSet<M>) -> Result<CSet<M>, RealizeError> {
    let carrier = m.coproduct(&s.carrier, &t.carrier)?;
    let (i0, i1) = (m.inj0(&s.carrier, &t.carrier)?, m.inj1(&s.carrier, &t.carrier)?);
    let mut points = s.points.iter().map(|x| m.compose(&i0, x)).collect::<Result<Vec<_>, _>>()?;
    points.extend(t.points.iter().map(|y| m.compose(&i1, y)).collect::<Result<Vec<_>, _>>()?);
    let mut labels: Vec<String> = s.labels.iter().map(|a| format!("inl {a}")).collect();
    labels.extend(t.labels.iter().map(|b| format!("inr {b}")));
    let mut rel = s.rel.clone();
    rel.extend(t.rel.iter().map(|&(y, j)| (y + s.points.len(), j + s.len())));
    Ok(CSet::new(carrier, labels, points, rel))
}

/// The exponential with every enumerated point of `[|S|,|T|]` as a candidate.
pub fn cset_exponential<M: Model>(m: &M, s: &CSet<M>, t: &CSet<M>, bounds: &Bounds) -> Result<CSet<M>, RealizeError> {
    let carrier = m.exponential(&s.carrier, &t.carrier)?;
    let candidates = m.points(&carrier)?;
    if candidates.len() > bounds.max_points {
        return Err(RealizeError::Bound(format!("{} points in an exponential", candidates.len())));
    }
    cset_exponential_from(m, s, t, candidates, bounds)
}

/// The exponential over given candidate points: its elements are the maps
/// `g` tracked by some candidate `f`, meaning `x ⊩ i` implies `f·x ⊩ g(i)`.
pub fn cset_exponential_from<M: Model>(
    m: &M,
    s: &CSet<M>,
    t: &CSet<M>,
    candidates: Vec<M::Mor>,
    bounds: &Bounds,
) -> Result<CSet<M>, RealizeError> {
    let carrier = m.exponential(&s.carrier, &t.carrier)?;
    let mut functions: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut rel = Vec::new();
    for (fi, f) in candidates.iter().enumerate() {
        let mut allowed: Vec<Option<Vec<usize>>> = vec![None; s.len()];
        for &(x, i) in &s.rel {
            let fx = m.point_apply(&s.carrier, &t.carrier, f, &s.points[x])?;
            let js = t.elements_of(m, &fx)?;
            let slot = &mut allowed[i];
            *slot = Some(match slot.take() {
                None => js,
                Some(prev) => prev.into_iter().filter(|j| js.contains(j)).collect(),
            });
        }
        let choices: Vec<Vec<usize>> = allowed.into_iter().map(|a| a.unwrap_or_else(|| (0..t.len()).collect())).collect();
        let count = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
        match count {
            Some(0) => continue,
            Some(k) if k <= bounds.max_tuples => {}
            _ => return Err(RealizeError::Bound("maps tracked by one candidate".into())),
        }
        for g in odometer(&choices.iter().map(Vec::len).collect::<Vec<_>>()) {
            let g: Vec<usize> = g.iter().enumerate().map(|(i, &k)| choices[i][k]).collect();
            let next = functions.len();
            let e = *functions.entry(g).or_insert(next);
            rel.push((fi, e));
        }
    }
    let mut labels = vec![String::new(); functions.len()];
    for (g, e) in &functions {
        labels[*e] = format!("[{}]", g.iter().map(|j| t.labels[*j].as_str()).collect::<Vec<_>>().join(","));
    }
    Ok(CSet::new(carrier, labels, candidates, rel))
}

/// All digit vectors below the given radices, last digit fastest.
fn odometer(radices: &[usize]) -> Vec<Vec<usize>> {
    if radices.contains(&0) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = vec![0; radices.len()];
    loop {
        out.push(cur.clone());
        let mut k = radices.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < radices[k] {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// The C-set of a type over the standard natural numbers.
pub fn standard_cset<M: Model>(m: &M, ty: &TType, nat_elems: u64, bounds: &Bounds) -> Result<CSet<M>, RealizeError> {
    match ty {
        TType::N => cset_standard_nat(m, nat_elems),
        TType::Unit => cset_terminal(m),
        TType::Prod(a, b) => cset_product(m, &standard_cset(m, a, nat_elems, bounds)?, &standard_cset(m, b, nat_elems, bounds)?),
        TType::Arrow(a, b) => {
            cset_exponential(m, &standard_cset(m, a, nat_elems, bounds)?, &standard_cset(m, b, nat_elems, bounds)?, bounds)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeReport {
    pub ty: String,
    pub elements: usize,
    pub projective: bool,
    pub total: bool,
    /// Flags predicted from the components by closure under `x` and `->`.
    pub derived_projective: Option<bool>,
    pub derived_total: Option<bool>,
}

impl TypeReport {
    /// Predicted flags are confirmed by direct enumeration.
    pub fn consistent(&self) -> bool {
        self.derived_projective.is_none_or(|d| !d || self.projective) && self.derived_total.is_none_or(|d| !d || self.total)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivityReport {
    pub status: &'static str,
    pub entries: Vec<TypeReport>,
}

/// Projectivity and totality of standard C-sets, checked directly and
/// predicted from components.
pub fn projectivity_report<M: Model>(
    m: &M,
    types: &[TType],
    nat_elems: u64,
    bounds: &Bounds,
) -> Result<ProjectivityReport, RealizeError> {
    fn flags<M: Model>(m: &M, ty: &TType, n: u64, b: &Bounds) -> Result<(bool, bool, usize), RealizeError> {
        let c = standard_cset(m, ty, n, b)?;
        Ok((c.is_projective(m)?, c.is_total(m)?, c.len()))
    }
    let mut entries = Vec::new();
    for ty in types {
        let (projective, total, elements) = flags(m, ty, nat_elems, bounds)?;
        let (derived_projective, derived_total) = match ty {
            TType::Prod(a, b) | TType::Arrow(a, b) => {
                let (pa, ta, _) = flags(m, a, nat_elems, bounds)?;
                let (pb, tb, _) = flags(m, b, nat_elems, bounds)?;
                (Some(pa && pb), Some(ta && tb))
            }
            _ => (None, None),
        };
        entries.push(TypeReport { ty: ty.to_string(), elements, projective, total, derived_projective, derived_total });
    }
    Ok(ProjectivityReport { status: BOUNDED_VERIFIED, entries })
}

/// Carriers and realizer sets for atoms.
pub struct PropInterp<M: Model> {
    pub atoms: BTreeMap<u32, (M::Obj, Vec<M::Mor>)>,
    /// Interpret `⊥` as the terminal object with no realizers instead of the
    /// initial object.
    pub unit_bottom: bool,
}

impl<M: Model> Clone for PropInterp<M> {
    fn clone(&self) -> Self {
        PropInterp { atoms: self.atoms.clone(), unit_bottom: self.unit_bottom }
    }
}

impl<M: Model> PropInterp<M> {
    pub fn assignment(&self) -> Assignment<M::Obj> {
        self.atoms.iter().map(|(k, (o, _))| (*k, o.clone())).collect()
    }
}

/// Realizability of formulas under one interpretation, with memoized
/// realizer sets.
pub struct Realizability<'a, M: Model> {
    m: &'a M,
    interp: &'a PropInterp<M>,
    bounds: Bounds,
    cache: RefCell<HashMap<Formula, Rc<Vec<M::Mor>>>>,
}

impl<'a, M: Model> Realizability<'a, M> {
    pub fn new(m: &'a M, interp: &'a PropInterp<M>, bounds: Bounds) -> Self {
        Realizability { m, interp, bounds, cache: RefCell::new(HashMap::new()) }
    }

    pub fn carrier(&self, a: &Formula) -> Result<M::Obj, RealizeError> {
        let m = self.m;
        Ok(match a {
            Formula::Atom(p) => self.interp.atoms.get(p).ok_or(RealizeError::MissingAtom(*p))?.0.clone(),
            Formula::Top => m.terminal(),
            Formula::Bot if self.interp.unit_bottom => m.terminal(),
            Formula::Bot => m.initial()?,
            Formula::And(x, y) => m.product(&self.carrier(x)?, &self.carrier(y)?)?,
            Formula::Or(x, y) => m.coproduct(&self.carrier(x)?, &self.carrier(y)?)?,
            Formula::Imp(x, y) => m.exponential(&self.carrier(x)?, &self.carrier(y)?)?,
        })
    }

    /// Whether the point `r` of the carrier realizes `a`.
    pub fn realizes(&self, r: &M::Mor, a: &Formula) -> Result<bool, RealizeError> {
        let m = self.m;
        match a {
            Formula::Atom(p) => {
                let (_, rs) = self.interp.atoms.get(p).ok_or(RealizeError::MissingAtom(*p))?;
                for q in rs {
                    if m.mor_eq(q, r)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Top => Ok(true),
            Formula::Bot => Ok(false),
            Formula::And(x, y) => {
                let (cx, cy) = (self.carrier(x)?, self.carrier(y)?);
                Ok(self.realizes(&m.point_component(&cx, &cy, r, false)?, x)?
                    && self.realizes(&m.point_component(&cx, &cy, r, true)?, y)?)
            }
            Formula::Or(x, y) => {
                let (cx, cy) = (self.carrier(x)?, self.carrier(y)?);
                match m.point_summand(&cx, &cy, r)? {
                    Some((false, s)) => self.realizes(&s, x),
                    Some((true, s)) => self.realizes(&s, y),
                    None => Ok(false),
                }
            }
            Formula::Imp(x, y) => {
                let (cx, cy) = (self.carrier(x)?, self.carrier(y)?);
                for s in self.realizers(x)?.iter() {
                    if !self.realizes(&m.point_apply(&cx, &cy, r, s)?, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// All realizers of `a` among the enumerated points.
    pub fn realizers(&self, a: &Formula) -> Result<Rc<Vec<M::Mor>>, RealizeError> {
        if let Some(v) = self.cache.borrow().get(a) {
            return Ok(v.clone());
        }
        let m = self.m;
        let out: Vec<M::Mor> = match a {
            Formula::Atom(p) => self.interp.atoms.get(p).ok_or(RealizeError::MissingAtom(*p))?.1.clone(),
            Formula::Top => vec![m.id(&m.terminal())?],
            Formula::Bot => vec![],
            Formula::And(x, y) => {
                let (rx, ry) = (self.realizers(x)?, self.realizers(y)?);
                if rx.len().saturating_mul(ry.len()) > self.bounds.max_tuples {
                    return Err(RealizeError::Bound(format!("realizers of {a}")));
                }
                let mut v = Vec::new();
                for u in rx.iter() {
                    for w in ry.iter() {
                        v.push(m.pair(u, w)?);
                    }
                }
                v
            }
            Formula::Or(x, y) => {
                let (cx, cy) = (self.carrier(x)?, self.carrier(y)?);
                let (i0, i1) = (m.inj0(&cx, &cy)?, m.inj1(&cx, &cy)?);
                let mut v = Vec::new();
                for u in self.realizers(x)?.iter() {
                    v.push(m.compose(&i0, u)?);
                }
                for w in self.realizers(y)?.iter() {
                    v.push(m.compose(&i1, w)?);
                }
                v
            }
            Formula::Imp(..) => {
                let points = m.points(&self.carrier(a)?)?;
                if points.len() > self.bounds.max_points {
                    return Err(RealizeError::Bound(format!("{} points for {a}", points.len())));
                }
                let mut v = Vec::new();
                for r in points {
                    if self.realizes(&r, a)? {
                        v.push(r);
                    }
                }
                v
            }
        };
        let out = Rc::new(out);
        self.cache.borrow_mut().insert(a.clone(), out.clone());
        Ok(out)
    }

    pub fn is_realizable(&self, a: &Formula) -> Result<bool, RealizeError> {
        Ok(!self.realizers(a)?.is_empty())
    }
}

/// The denotation of a proof together with its bounded check.
#[derive(Clone, Debug)]
pub struct ProofCheck<Mor> {
    pub realizer: Mor,
    /// Realizer tuples of the context that were tried.
    pub tuples: usize,
    pub holds: bool,
}

/// Interprets `t` and checks that it sends every tuple of realizers of the
/// context to a realizer of its type.
pub fn realize_proof<M: Model>(
    m: &M,
    interp: &PropInterp<M>,
    ctx: &Context,
    t: &ProofTerm,
    bounds: &Bounds,
) -> Result<ProofCheck<M::Mor>, RealizeError> {
    if interp.unit_bottom {
        return Err(RealizeError::World("proof denotations need the initial object for falsity".into()));
    }
    let goal = typecheck(ctx, t)?;
    let realizer = interpret_proof(m, &interp.assignment(), ctx, t)?;
    let rz = Realizability::new(m, interp, *bounds);
    let formulas = ctx.formulas();
    let sets = formulas.iter().map(|f| rz.realizers(f)).collect::<Result<Vec<_>, _>>()?;
    let total = sets.iter().try_fold(1usize, |acc, s| acc.checked_mul(s.len()));
    if total.is_none_or(|k| k > bounds.max_tuples) {
        return Err(RealizeError::Bound("context realizer tuples".into()));
    }
    let mut tuples = 0;
    for pick in odometer(&sets.iter().map(|s| s.len()).collect::<Vec<_>>()) {
        tuples += 1;
        let mut point: Option<M::Mor> = None;
        for (k, &i) in pick.iter().enumerate() {
            let s = sets[k][i].clone();
            point = Some(match point {
                None => s,
                Some(acc) => m.pair(&acc, &s)?,
            });
        }
        let point = match point {
            Some(p) => p,
            None => m.id(&m.terminal())?,
        };
        let value = m.compose(&realizer, &point)?;
        if !rz.realizes(&value, &goal)? {
            return Ok(ProofCheck { realizer, tuples, holds: false });
        }
    }
    Ok(ProofCheck { realizer, tuples, holds: true })
}

fn fin_point(size: usize, x: usize) -> Table {
    Table { src: 1, tgt: size, map: vec![x] }
}

/// Every interpretation of the atoms in FinOrd with carriers of size at most
/// `max_carrier` and every realizer subset.
pub fn fin_interpretations(atoms: &[u32], max_carrier: usize, unit_bottom: bool) -> Vec<PropInterp<FinOrd>> {
    let mut per_atom: Vec<(usize, Vec<usize>)> = Vec::new();
    for size in 0..=max_carrier {
        for mask in 0..(1usize << size) {
            per_atom.push((size, (0..size).filter(|x| mask >> x & 1 == 1).collect()));
        }
    }
    odometer(&vec![per_atom.len(); atoms.len()])
        .into_iter()
        .map(|pick| PropInterp {
            atoms: atoms
                .iter()
                .zip(pick)
                .map(|(&p, k)| {
                    let (size, subset) = &per_atom[k];
                    (p, (*size, subset.iter().map(|&x| fin_point(*size, x)).collect()))
                })
                .collect(),
            unit_bottom,
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub interpretations: usize,
    pub failures: usize,
}

/// Checks the denotation of a closed proof of `a` under every finite
/// interpretation with carriers up to `max_carrier`.
pub fn soundness_sweep(a: &Formula, proof: &ProofTerm, max_carrier: usize, bounds: &Bounds) -> Result<SweepReport, RealizeError> {
    let m = FinOrd::new();
    let atoms: Vec<u32> = a.atoms().into_iter().collect();
    let ctx = Context::new();
    let mut report = SweepReport::default();
    let mut denotations: HashMap<Vec<usize>, Table> = HashMap::new();
    for interp in fin_interpretations(&atoms, max_carrier, false) {
        let sizes: Vec<usize> = interp.atoms.values().map(|(s, _)| *s).collect();
        let realizer = match denotations.get(&sizes) {
            Some(r) => r.clone(),
            None => {
                let r = interpret_proof(&m, &interp.assignment(), &ctx, proof)?;
                denotations.insert(sizes, r.clone());
                r
            }
        };
        report.interpretations += 1;
        if !Realizability::new(&m, &interp, *bounds).realizes(&realizer, a)? {
            report.failures += 1;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PremiseIndependence {
    pub formula: Formula,
    pub interpretations: usize,
    /// Interpretations where the premise is realizable.
    pub premise_realized: usize,
    /// The conclusion was realizable whenever the premise was.
    pub transfers: bool,
    /// The implication has no intuitionistic proof.
    pub unprovable: bool,
}

/// `(p0 -> p1 \/ p2) -> (p0 -> p1) \/ (p0 -> p2)`: realizability of the
/// premise yields realizability of the conclusion in every finite
/// interpretation, yet the implication is not provable.
pub fn premise_independence(max_carrier: usize, budget: usize, bounds: &Bounds) -> Result<PremiseIndependence, RealizeError> {
    let (p, q, r) = (Formula::atom(0), Formula::atom(1), Formula::atom(2));
    let premise = Formula::imp(p.clone(), Formula::or(q.clone(), r.clone()));
    let conclusion = Formula::or(Formula::imp(p.clone(), q), Formula::imp(p, r));
    let formula = Formula::imp(premise.clone(), conclusion.clone());
    let m = FinOrd::new();
    let mut out = PremiseIndependence {
        formula: formula.clone(),
        interpretations: 0,
        premise_realized: 0,
        transfers: true,
        unprovable: decide_provable(&formula, budget).is_negative(),
    };
    for interp in fin_interpretations(&[0, 1, 2], max_carrier, false) {
        let rz = Realizability::new(&m, &interp, *bounds);
        out.interpretations += 1;
        if rz.is_realizable(&premise)? {
            out.premise_realized += 1;
            if !rz.is_realizable(&conclusion)? {
                out.transfers = false;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::Prover;
    use crate::syntax::parse_formula;

    fn fin_cset(size: usize, rel: Vec<(usize, usize)>, elems: usize) -> CSet<FinOrd> {
        CSet::new(size, (0..elems).map(|e| e.to_string()).collect(), (0..size).map(|x| fin_point(size, x)).collect(), rel)
    }

    #[test]
    fn exponential_of_two_element_sets() {
        let m = FinOrd::new();
        let s = fin_cset(2, vec![(0, 0), (1, 1)], 2);
        let e = cset_exponential(&m, &s, &s, &Bounds::default()).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(e.rel.len(), 4);
        assert!(e.is_surjective());
        assert!(e.is_projective(&m).unwrap());
    }

    #[test]
    fn unit_product_is_bijective() {
        let m = FinOrd::new();
        let s = fin_cset(3, vec![(0, 0), (1, 1), (2, 1)], 2);
        let p = cset_product(&m, &cset_terminal(&m).unwrap(), &s).unwrap();
        assert_eq!(p.len(), s.len());
        assert_eq!(p.rel.len(), s.rel.len());
        assert!(!s.is_projective(&m).unwrap());
    }

    #[test]
    fn top_and_negation_examples() {
        let m = FinOrd::new();
        let interp = PropInterp { atoms: [(0, (2usize, vec![]))].into_iter().collect(), unit_bottom: true };
        let rz = Realizability::new(&m, &interp, Bounds::default());
        assert!(rz.realizes(&fin_point(1, 0), &Formula::Top).unwrap());
        let neg = parse_formula("~p0").unwrap();
        let pts = m.points(&rz.carrier(&neg).unwrap()).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(rz.realizes(&pts[0], &neg).unwrap());
    }

    #[test]
    fn proofs_realize_their_types() {
        let m = FinOrd::new();
        for src in ["p0 /\\ p1 -> p0", "F -> p0", "p0 -> p0", "p0 -> p1 -> p0 /\\ p1", "(p0 -> p1) -> p0 -> p1"] {
            let a = parse_formula(src).unwrap();
            let t = Prover::new(10_000).prove_closed(&a).unwrap().unwrap();
            let atoms: Vec<u32> = a.atoms().into_iter().collect();
            for interp in fin_interpretations(&atoms, 2, false) {
                let c = realize_proof(&m, &interp, &Context::new(), &t, &Bounds::default()).unwrap();
                assert!(c.holds, "{src}");
            }
        }
    }

    #[test]
    fn open_proof_checked_on_tuples() {
        let m = FinOrd::new();
        let ctx = Context::parse("x:p0, y:p1").unwrap();
        let t = crate::syntax::parse_term_in(&ctx, "(y, x)").unwrap();
        for interp in fin_interpretations(&[0, 1], 2, false) {
            let c = realize_proof(&m, &interp, &ctx, &t, &Bounds::default()).unwrap();
            assert!(c.holds);
        }
    }

    #[test]
    fn independence_of_premise() {
        let r = premise_independence(1, 10_000, &Bounds::default()).unwrap();
        assert!(r.transfers && r.unprovable);
        assert!(r.premise_realized > 0);
    }
}
