//! Interpretation of formulas and proof terms in any bicartesian closed model.
//!
//! A context `x1:A1, ..., xn:An` denotes `1` when empty, `A1` alone when it
//! has one entry, and `((A1 x A2) x A3) x ...` otherwise. Binders under an
//! empty context are bridged with the projection `1 x A -> A`.

use crate::syntax::{infer, Context, Formula, ProofTerm, TypeError};
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::rc::Rc;
use thiserror::Error;

use ProofTerm as P;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("model has no {0}")]
    Unsupported(&'static str),
    #[error("{0} exceeds the size cap")]
    TooLarge(String),
    #[error("morphisms do not compose: {0}")]
    Mismatch(String),
    #[error("fuel exhausted while {0}")]
    Fuel(String),
}

/// A bicartesian closed structure given by object and morphism handles.
///
/// `compose(g, f)` is `g ∘ f`. `pair(f, g)` takes `f: C -> A`, `g: C -> B`;
/// `copair(f, g)` takes `f: A -> C`, `g: B -> C`. `eval(a, b)` is
/// `[a,b] x a -> b` and `curry(c, a, b, f)` turns `f: c x a -> b` into
/// `c -> [a,b]`.
pub trait Model {
    type Obj: Clone + Debug + PartialEq;
    type Mor: Clone + Debug;

    fn id(&self, a: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, ModelError>;
    fn terminal(&self) -> Self::Obj;
    fn to_terminal(&self, a: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn initial(&self) -> Result<Self::Obj, ModelError>;
    fn from_initial(&self, a: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Obj, ModelError>;
    fn proj0(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn proj1(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, ModelError>;
    fn coproduct(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Obj, ModelError>;
    fn inj0(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn inj1(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn copair(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, ModelError>;
    fn exponential(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Obj, ModelError>;
    fn eval(&self, a: &Self::Obj, b: &Self::Obj) -> Result<Self::Mor, ModelError>;
    fn curry(&self, c: &Self::Obj, a: &Self::Obj, b: &Self::Obj, f: &Self::Mor) -> Result<Self::Mor, ModelError>;
    fn mor_eq(&self, f: &Self::Mor, g: &Self::Mor) -> Result<bool, ModelError>;

    /// The canonical `[a,c] x [b,c] -> [a+b, c]` used for case analysis.
    fn case_map(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Result<Self::Mor, ModelError>
    where
        Self: Sized,
    {
        generic_case_map(self, a, b, c)
    }

    /// Global elements `1 -> a`.
    fn points(&self, _a: &Self::Obj) -> Result<Vec<Self::Mor>, ModelError> {
        Err(ModelError::Unsupported("point enumeration"))
    }

    fn nno(&self) -> Result<Self::Obj, ModelError> {
        Err(ModelError::Unsupported("natural numbers object"))
    }
    fn zero(&self) -> Result<Self::Mor, ModelError> {
        Err(ModelError::Unsupported("natural numbers object"))
    }
    fn succ(&self) -> Result<Self::Mor, ModelError> {
        Err(ModelError::Unsupported("natural numbers object"))
    }
    /// The unique `N -> a` sending zero to `base` and commuting with `step`.
    fn iterate(&self, _a: &Self::Obj, _base: &Self::Mor, _step: &Self::Mor) -> Result<Self::Mor, ModelError> {
        Err(ModelError::Unsupported("natural numbers object"))
    }
    /// `s^n ∘ zero`.
    fn numeral(&self, n: u64) -> Result<Self::Mor, ModelError> {
        let s = self.succ()?;
        let mut r = self.zero()?;
        for _ in 0..n {
            r = self.compose(&s, &r)?;
        }
        Ok(r)
    }

    /// A component of a point of `a x b`.
    fn point_component(&self, a: &Self::Obj, b: &Self::Obj, r: &Self::Mor, second: bool) -> Result<Self::Mor, ModelError> {
        let p = if second { self.proj1(a, b)? } else { self.proj0(a, b)? };
        self.compose(&p, r)
    }

    /// `ev ∘ <f, x>` for points `f` of `[a,b]` and `x` of `a`.
    fn point_apply(&self, a: &Self::Obj, b: &Self::Obj, f: &Self::Mor, x: &Self::Mor) -> Result<Self::Mor, ModelError> {
        self.compose(&self.eval(a, b)?, &self.pair(f, x)?)
    }

    /// The summand holding a point of `a + b` (`true` for the right one) and
    /// the point it is injected from.
    fn point_summand(&self, a: &Self::Obj, b: &Self::Obj, r: &Self::Mor) -> Result<Option<(bool, Self::Mor)>, ModelError> {
        for (second, x) in [(false, a), (true, b)] {
            let inj = if second { self.inj1(a, b)? } else { self.inj0(a, b)? };
            for s in self.points(x)? {
                if self.mor_eq(&self.compose(&inj, &s)?, r)? {
                    return Ok(Some((second, s)));
                }
            }
        }
        Ok(None)
    }
}

/// The case-analysis map built from the universal constructions alone.
///
/// With `P = [A,C] x [B,C]`, each summand `X` gets
/// `hX = curry(ev_{X,C} ∘ <pX ∘ p1, p0>) : X -> [P,C]`, and the map is
/// `curry(ev_{P,C} ∘ <(hA, hB) ∘ p1, p0>)`.
pub fn generic_case_map<M: Model>(m: &M, a: &M::Obj, b: &M::Obj, c: &M::Obj) -> Result<M::Mor, ModelError> {
    let ea = m.exponential(a, c)?;
    let eb = m.exponential(b, c)?;
    let p = m.product(&ea, &eb)?;
    let summand = |x: &M::Obj, pick: M::Mor| -> Result<M::Mor, ModelError> {
        let f = m.compose(&pick, &m.proj1(x, &p)?)?;
        let body = m.compose(&m.eval(x, c)?, &m.pair(&f, &m.proj0(x, &p)?)?)?;
        m.curry(x, &p, c, &body)
    };
    let ha = summand(a, m.proj0(&ea, &eb)?)?;
    let hb = summand(b, m.proj1(&ea, &eb)?)?;
    let h = m.copair(&ha, &hb)?;
    let ab = m.coproduct(a, b)?;
    let inner = m.pair(&m.compose(&h, &m.proj1(&p, &ab)?)?, &m.proj0(&p, &ab)?)?;
    let body = m.compose(&m.eval(&p, c)?, &inner)?;
    m.curry(&p, &ab, c, &body)
}

pub type Assignment<O> = BTreeMap<u32, O>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("no object assigned to atom p{0}")]
    MissingAtom(u32),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn interpret_formula<M: Model>(m: &M, a: &Assignment<M::Obj>, f: &Formula) -> Result<M::Obj, SemanticsError> {
    Ok(match f {
        Formula::Atom(i) => a.get(i).cloned().ok_or(SemanticsError::MissingAtom(*i))?,
        Formula::Top => m.terminal(),
        Formula::Bot => m.initial()?,
        Formula::And(x, y) => m.product(&interpret_formula(m, a, x)?, &interpret_formula(m, a, y)?)?,
        Formula::Or(x, y) => m.coproduct(&interpret_formula(m, a, x)?, &interpret_formula(m, a, y)?)?,
        Formula::Imp(x, y) => m.exponential(&interpret_formula(m, a, x)?, &interpret_formula(m, a, y)?)?,
    })
}

/// The object denoted by a list of hypotheses, associated to the left.
pub fn interpret_context<M: Model>(
    m: &M,
    a: &Assignment<M::Obj>,
    env: &[Formula],
) -> Result<M::Obj, SemanticsError> {
    let mut it = env.iter();
    let Some(first) = it.next() else { return Ok(m.terminal()) };
    let mut acc = interpret_formula(m, a, first)?;
    for f in it {
        acc = m.product(&acc, &interpret_formula(m, a, f)?)?;
    }
    Ok(acc)
}

struct Interp<'a, M: Model> {
    m: &'a M,
    a: &'a Assignment<M::Obj>,
}

impl<M: Model> Interp<'_, M> {
    fn obj(&self, f: &Formula) -> Result<M::Obj, SemanticsError> {
        interpret_formula(self.m, self.a, f)
    }

    fn ctx(&self, env: &[Formula]) -> Result<M::Obj, SemanticsError> {
        interpret_context(self.m, self.a, env)
    }

    /// Projection from the context object onto entry `j`.
    fn project(&self, env: &[Formula], j: usize) -> Result<M::Mor, SemanticsError> {
        let n = env.len();
        if n == 1 {
            return Ok(self.m.id(&self.obj(&env[0])?)?);
        }
        let prefix = self.ctx(&env[..n - 1])?;
        let last = self.obj(&env[n - 1])?;
        if j == n - 1 {
            return Ok(self.m.proj1(&prefix, &last)?);
        }
        let p0 = self.m.proj0(&prefix, &last)?;
        let rest = self.project(&env[..n - 1], j)?;
        Ok(self.m.compose(&rest, &p0)?)
    }

    /// `|env| x |a| -> |env, a|`.
    fn extend(&self, env: &[Formula], a: &Formula) -> Result<M::Mor, SemanticsError> {
        let ao = self.obj(a)?;
        if env.is_empty() {
            Ok(self.m.proj1(&self.m.terminal(), &ao)?)
        } else {
            Ok(self.m.id(&self.m.product(&self.ctx(env)?, &ao)?)?)
        }
    }

    /// `λ` of a body typed under `env, a`.
    fn abstract_body(
        &self,
        env: &mut Vec<Formula>,
        a: &Formula,
        body: &ProofTerm,
    ) -> Result<(M::Mor, Formula), SemanticsError> {
        env.push(a.clone());
        let b_ty = infer(env, body);
        let b_mor = b_ty.clone().map_err(SemanticsError::from).and_then(|_| self.go(env, body));
        env.pop();
        let (b_ty, b_mor) = (b_ty?, b_mor?);
        let bridged = self.m.compose(&b_mor, &self.extend(env, a)?)?;
        let c = self.ctx(env)?;
        Ok((self.m.curry(&c, &self.obj(a)?, &self.obj(&b_ty)?, &bridged)?, b_ty))
    }

    fn go(&self, env: &mut Vec<Formula>, t: &ProofTerm) -> Result<M::Mor, SemanticsError> {
        let m = self.m;
        Ok(match t {
            P::Var(i) => {
                if *i >= env.len() {
                    return Err(TypeError::Unbound { index: *i, depth: env.len() }.into());
                }
                self.project(env, env.len() - 1 - i)?
            }
            P::Unit => m.to_terminal(&self.ctx(env)?)?,
            P::Abort(x, a) => m.compose(&m.from_initial(&self.obj(a)?)?, &self.go(env, x)?)?,
            P::Pair(x, y) => m.pair(&self.go(env, x)?, &self.go(env, y)?)?,
            P::Proj0(x) | P::Proj1(x) => {
                let Formula::And(a, b) = infer(env, x)? else {
                    return Err(self.mismatch(env, t));
                };
                let (ao, bo) = (self.obj(&a)?, self.obj(&b)?);
                let p = if matches!(t, P::Proj0(_)) { m.proj0(&ao, &bo)? } else { m.proj1(&ao, &bo)? };
                m.compose(&p, &self.go(env, x)?)?
            }
            P::Inl(x, b) => {
                let a = infer(env, x)?;
                let i = m.inj0(&self.obj(&a)?, &self.obj(b)?)?;
                m.compose(&i, &self.go(env, x)?)?
            }
            P::Inr(x, a) => {
                let b = infer(env, x)?;
                let i = m.inj1(&self.obj(a)?, &self.obj(&b)?)?;
                m.compose(&i, &self.go(env, x)?)?
            }
            P::Case(s, l, r) => {
                let Formula::Or(a, b) = infer(env, s)? else {
                    return Err(self.mismatch(env, t));
                };
                let (ll, c) = self.abstract_body(env, &a, l)?;
                let (rl, _) = self.abstract_body(env, &b, r)?;
                let (ao, bo, co) = (self.obj(&a)?, self.obj(&b)?, self.obj(&c)?);
                let i = m.case_map(&ao, &bo, &co)?;
                let ab = m.coproduct(&ao, &bo)?;
                let fun = m.compose(&i, &m.pair(&ll, &rl)?)?;
                m.compose(&m.eval(&ab, &co)?, &m.pair(&fun, &self.go(env, s)?)?)?
            }
            P::Lam(a, body) => self.abstract_body(env, a, body)?.0,
            P::App(f, x) => {
                let Formula::Imp(a, b) = infer(env, f)? else {
                    return Err(self.mismatch(env, t));
                };
                let ev = m.eval(&self.obj(&a)?, &self.obj(&b)?)?;
                m.compose(&ev, &m.pair(&self.go(env, f)?, &self.go(env, x)?)?)?
            }
        })
    }

    fn mismatch(&self, env: &[Formula], t: &ProofTerm) -> SemanticsError {
        match infer(&mut env.to_vec(), t) {
            Err(e) => e.into(),
            Ok(_) => unreachable!("well-typed eliminator has the right scrutinee type"),
        }
    }
}

/// The morphism `|ctx| -> |A|` denoted by `t`.
pub fn interpret_proof<M: Model>(
    m: &M,
    a: &Assignment<M::Obj>,
    ctx: &Context,
    t: &ProofTerm,
) -> Result<M::Mor, SemanticsError> {
    crate::syntax::typecheck(ctx, t)?;
    let mut env = ctx.formulas();
    Interp { m, a }.go(&mut env, t)
}

/// Whether two terms denote the same morphism under an assignment.
pub fn same_denotation<M: Model>(
    m: &M,
    a: &Assignment<M::Obj>,
    ctx: &Context,
    t: &ProofTerm,
    s: &ProofTerm,
) -> Result<bool, SemanticsError> {
    let f = interpret_proof(m, a, ctx, t)?;
    let g = interpret_proof(m, a, ctx, s)?;
    Ok(m.mor_eq(&f, &g)?)
}

/// A set-theoretic value, for direct evaluation without building tables.
#[derive(Clone)]
pub enum Value {
    Elem(usize),
    Unit,
    Pair(Rc<Value>, Rc<Value>),
    Inl(Rc<Value>),
    Inr(Rc<Value>),
    Fun(Rc<dyn Fn(Value) -> Value>),
}

impl Debug for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Elem(n) => write!(f, "{n}"),
            Value::Unit => write!(f, "()"),
            Value::Pair(a, b) => write!(f, "({a:?}, {b:?})"),
            Value::Inl(a) => write!(f, "inl {a:?}"),
            Value::Inr(a) => write!(f, "inr {a:?}"),
            Value::Fun(_) => write!(f, "<fun>"),
        }
    }
}

impl Value {
    pub fn apply(&self, x: Value) -> Value {
        match self {
            Value::Fun(f) => f(x),
            _ => panic!("applied a non-function value"),
        }
    }

    pub fn function(f: impl Fn(Value) -> Value + 'static) -> Value {
        Value::Fun(Rc::new(f))
    }
}

/// Evaluates a well-typed term in an environment of values, innermost
/// binder last.
pub fn evaluate(env: &[Value], t: &ProofTerm) -> Value {
    match t {
        P::Var(i) => env[env.len() - 1 - i].clone(),
        P::Unit => Value::Unit,
        P::Abort(..) => panic!("evaluated abort: the empty set has no elements"),
        P::Pair(a, b) => Value::Pair(Rc::new(evaluate(env, a)), Rc::new(evaluate(env, b))),
        P::Proj0(x) | P::Proj1(x) => match evaluate(env, x) {
            Value::Pair(a, b) => (*if matches!(t, P::Proj0(_)) { a } else { b }).clone(),
            v => panic!("projection of {v:?}"),
        },
        P::Inl(x, _) => Value::Inl(Rc::new(evaluate(env, x))),
        P::Inr(x, _) => Value::Inr(Rc::new(evaluate(env, x))),
        P::Case(s, l, r) => {
            let (v, body) = match evaluate(env, s) {
                Value::Inl(v) => (v, l),
                Value::Inr(v) => (v, r),
                v => panic!("case on {v:?}"),
            };
            let mut e = env.to_vec();
            e.push((*v).clone());
            evaluate(&e, body)
        }
        P::Lam(_, body) => {
            let env = env.to_vec();
            let body = (**body).clone();
            Value::function(move |x| {
                let mut e = env.clone();
                e.push(x);
                evaluate(&e, &body)
            })
        }
        P::App(f, x) => evaluate(env, f).apply(evaluate(env, x)),
    }
}
