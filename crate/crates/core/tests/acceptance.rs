//! Acceptance criteria, one line each. Every check compares library output
//! with an oracle written here from first principles.

use bhk_core::decide::hsi::{ad_bc_equation, check_hsi_equation, grid, wilkie_equation};
use bhk_core::decide::{
    cardinality_refutation, decide_equivalent, decide_identical_cc, decide_provable, rooted_trees, semi_decide_identical,
    Countermodel, Distinction, Verdict,
};
use bhk_core::gen::{self, TermGen};
use bhk_core::models::{kripke_embedding_check, tree_reflection_check, FinOrd, FinPoset, Table, UpsetAlgebra};
use bhk_core::realize::arith::{check_excluded_middle_sentence, extract_function, parse_sentence, Arith, NnoWorld, Side, TWorld};
use bhk_core::realize::{fin_interpretations, soundness_sweep, Bounds, Realizability};
use bhk_core::recworld::{self, pair_u64, reference_code, smn, unpair, Code, Nat, RecWorld, REFERENCE_PROGRAMS};
use bhk_core::rewrite::{beta_normalize, long_normal_form, Rule};
use bhk_core::semantics::{interpret_proof, Model};
use bhk_core::syntax::{parse_formula, parse_term_in, typecheck, Context, Formula};
use bhk_core::systemt::{ackermann_term, apply_nat, double_term, eval_nat, parse_tterm, TTerm};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(src: &str) -> Formula {
    parse_formula(src).unwrap_or_else(|e| panic!("{src}: {e}"))
}

/// Forcing on a finite poset given by its order matrix.
fn forces(le: &[Vec<bool>], val: &BTreeMap<u32, Vec<usize>>, w: usize, a: &Formula) -> bool {
    match a {
        Formula::Atom(p) => val.get(p).is_some_and(|ws| ws.contains(&w)),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::And(x, y) => forces(le, val, w, x) && forces(le, val, w, y),
        Formula::Or(x, y) => forces(le, val, w, x) || forces(le, val, w, y),
        Formula::Imp(x, y) => (0..le.len()).filter(|&u| le[w][u]).all(|u| !forces(le, val, u, x) || forces(le, val, u, y)),
    }
}

fn refuted_by(cm: &Countermodel, a: &Formula) -> bool {
    let le = cm.poset.matrix();
    let n = le.len();
    let root_below_all = (0..n).all(|w| le[0][w]);
    let monotone = cm.valuation.values().all(|ws| ws.iter().all(|&w| (0..n).filter(|&u| le[w][u]).all(|u| ws.contains(&u))));
    root_below_all && monotone && !forces(le, &cm.valuation, 0, a)
}

fn criterion_1() -> Check {
    let theorems = [
        "p0 -> p0",
        "p0 /\\ p1 -> p1 /\\ p0",
        "p0 \\/ p1 -> p1 \\/ p0",
        "~~(p0 \\/ ~p0)",
        "p0 -> ~~p0",
        "~~~p0 -> ~p0",
        "(p0 -> p1) -> (p1 -> p2) -> p0 -> p2",
        "(p0 -> p1 -> p2) -> p0 /\\ p1 -> p2",
        "(p0 /\\ p1 -> p2) -> p0 -> p1 -> p2",
        "F -> p0",
        "T",
        "(p0 -> p1) -> ~p1 -> ~p0",
        "~(p0 \\/ p1) -> ~p0 /\\ ~p1",
        "~p0 /\\ ~p1 -> ~(p0 \\/ p1)",
        "p0 /\\ (p1 \\/ p2) -> p0 /\\ p1 \\/ p0 /\\ p2",
        "~~(((p0 -> p1) -> p0) -> p0)",
        "~p0 \\/ p1 -> p0 -> p1",
        "~~(~~p0 -> p0)",
        "p0 \\/ ~p0 -> ~~p0 -> p0",
    ];
    let non_theorems = [
        "p0 \\/ ~p0",
        "~p0 \\/ ~~p0",
        "((p0 -> p1) -> p0) -> p0",
        "~~p0 -> p0",
        "(p0 -> p1) \\/ (p1 -> p0)",
        "(~~p0 -> p0) -> p0 \\/ ~p0",
        "p0",
        "(p0 -> p1) -> ~p0 \\/ p1",
        "~(p0 /\\ p1) -> ~p0 \\/ ~p1",
        "p0 -> p0 /\\ p1",
        "(p0 -> p1 \\/ p2) -> (p0 -> p1) \\/ (p0 -> p2)",
    ];
    let start = Instant::now();
    for (src, expect) in theorems.iter().map(|s| (s, true)).chain(non_theorems.iter().map(|s| (s, false))) {
        let a = f(src);
        match decide_provable(&a, 100_000) {
            Verdict::Positive(t) => {
                ensure(expect, || format!("{src} proved"))?;
                ensure(typecheck(&Context::new(), &t).ok() == Some(a.clone()), || format!("proof of {src} does not typecheck"))?;
            }
            Verdict::Negative(cm) => {
                ensure(!expect, || format!("{src} refuted"))?;
                ensure(refuted_by(&cm, &a), || format!("countermodel for {src} does not refute it"))?;
            }
            Verdict::Unknown { .. } => return Err(format!("{src} unknown")),
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("30 formulas in {took:.2?}"))
}

/// Context element `i` of `p0 /\ p0` with `|p0| = 2` is the pair `(i / 2, i % 2)`.
fn criterion_2() -> Check {
    let ctx = Context::parse("u:p0 /\\ p0").unwrap();
    let (l, r) = (parse_term_in(&ctx, "fst u").unwrap(), parse_term_in(&ctx, "snd u").unwrap());
    match decide_equivalent(&ctx, &l, &r, 10_000).map_err(|e| e.to_string())? {
        Verdict::Negative(sep) => {
            ensure(sep.assignment.get(&0) == Some(&2), || format!("separated at {:?}", sep.assignment))?;
            ensure(sep.left == sep.input / 2 && sep.right == sep.input % 2 && sep.left != sep.right, || format!("{sep:?}"))?;
        }
        other => return Err(format!("projections: {}", other.tag())),
    }

    let pairs: [(Rule, &str, &str, &str); 9] = [
        (Rule::BetaAnd, "d:p0, e:p1", "fst (d, e)", "d"),
        (Rule::BetaImp, "d:p0", "(fun x:p0 => (x, x)) d", "(d, d)"),
        (Rule::BetaOrL, "d:p0", "case inl[p1] d of inl a => a | inr b => d", "d"),
        (Rule::BetaOrR, "e:p1, d:p0", "case inr[p0] e of inl a => d | inr b => d", "d"),
        (Rule::EtaAnd, "u:p0 /\\ p1", "(fst u, snd u)", "u"),
        (Rule::EtaImp, "g:p0 -> p1", "fun x:p0 => g x", "g"),
        (Rule::EtaOr, "u:p0 \\/ p1", "case u of inl a => inl[p1] a | inr b => inr[p0] b", "u"),
        (Rule::EtaTop, "u:T", "u", "unit"),
        (Rule::EtaBot, "z:F, d:p0", "d", "abort[p0] z"),
    ];
    for (rule, c, t, s) in pairs {
        let ctx = Context::parse(c).unwrap();
        let (t, s) = (parse_term_in(&ctx, t).unwrap(), parse_term_in(&ctx, s).unwrap());
        match decide_equivalent(&ctx, &t, &s, 10_000).map_err(|e| e.to_string())? {
            Verdict::Positive(tr) => {
                ensure(tr.len() <= 3, || format!("{rule:?}: trace of length {}", tr.len()))?;
                tr.replay(&ctx).map_err(|e| format!("{rule:?}: {e}"))?;
                ensure(tr.source() == &t && tr.target() == &s, || format!("{rule:?}: trace endpoints"))?;
            }
            other => return Err(format!("{rule:?}: {}", other.tag())),
        }
    }

    let m = FinOrd::new();
    let mut rng = gen::rng(2);
    let (mut checked, mut violations) = (0, 0);
    while checked < 200 {
        let (a, t) = TermGen::new(&mut rng, 2, false).closed(2);
        let ctx = Context::new();
        let Some((nf, _)) = beta_normalize(&t, 10_000) else { continue };
        let mut forms = vec![nf];
        forms.extend(long_normal_form(&ctx, &t).ok());
        let sizes: BTreeMap<u32, usize> = a.atoms().into_iter().map(|p| (p, rng.gen_range(0..=3))).collect();
        let Ok(den) = interpret_proof(&m, &sizes, &ctx, &t) else { continue };
        let Ok(others) = forms.iter().map(|s| interpret_proof(&m, &sizes, &ctx, s)).collect::<Result<Vec<_>, _>>() else { continue };
        checked += 1;
        violations += others.iter().filter(|g| **g != den).count();
    }
    ensure(violations == 0, || format!("{violations} invariance violations"))?;
    Ok("projections separated at 2, nine pairs, 200 random terms".into())
}

fn card(a: &Formula, sizes: &BTreeMap<u32, u32>) -> BigUint {
    match a {
        Formula::Atom(p) => BigUint::from(sizes[p]),
        Formula::Top => BigUint::one(),
        Formula::Bot => BigUint::zero(),
        Formula::And(x, y) => card(x, sizes) * card(y, sizes),
        Formula::Or(x, y) => card(x, sizes) + card(y, sizes),
        Formula::Imp(x, y) => card(y, sizes).pow(card(x, sizes).to_u32().expect("small exponent")),
    }
}

fn cardinalities_agree(a: &Formula, b: &Formula) -> bool {
    let atoms: Vec<u32> = a.atoms().union(&b.atoms()).copied().collect();
    let total = 4usize.pow(atoms.len() as u32);
    (0..total).all(|mut code| {
        let sizes: BTreeMap<u32, u32> = atoms
            .iter()
            .map(|&p| {
                let s = (code % 4) as u32;
                code /= 4;
                (p, s)
            })
            .collect();
        card(a, &sizes) == card(b, &sizes)
    })
}

/// One random isomorphism-preserving rewrite at every node.
fn shuffle<R: Rng>(rng: &mut R, a: &Formula) -> Formula {
    use Formula::*;
    let a = match a {
        And(x, y) => Formula::and(shuffle(rng, x), shuffle(rng, y)),
        Imp(x, y) => Formula::imp(shuffle(rng, x), shuffle(rng, y)),
        other => other.clone(),
    };
    if !rng.gen_bool(0.6) {
        return a;
    }
    match a {
        And(x, y) if *x == Top => *y,
        And(x, y) => Formula::and(*y, *x),
        Imp(x, y) if *x == Top => *y,
        Imp(_, y) if *y == Top => Top,
        Imp(x, y) => match (*x, *y) {
            (And(p, q), c) => Formula::imp(*p, Formula::imp(*q, c)),
            (p, And(q, r)) => Formula::and(Formula::imp(p.clone(), *q), Formula::imp(p, *r)),
            (p, c) => Formula::imp(p, c),
        },
        other => other,
    }
}

fn criterion_3() -> Check {
    let mut rng = gen::rng(3);
    let mut isos = 0;
    for k in 0..100 {
        let size = rng.gen_range(0..=3);
        let a = gen::formula(&mut rng, 3, size, true);
        let b = if k % 2 == 0 {
            shuffle(&mut rng, &a)
        } else {
            let size = rng.gen_range(0..=3);
            gen::formula(&mut rng, 3, size, true)
        };
        let decided = decide_identical_cc(&a, &b).map_err(|e| e.to_string())?;
        let oracle = cardinalities_agree(&a, &b);
        ensure(decided == oracle, || format!("{a} vs {b}: decided {decided}, cardinalities {oracle}"))?;
        isos += usize::from(decided);
    }

    let axioms = [
        ("T /\\ p0", "p0"),
        ("p0 /\\ p1", "p1 /\\ p0"),
        ("p0 /\\ (p1 /\\ p2)", "(p0 /\\ p1) /\\ p2"),
        ("T -> p0", "p0"),
        ("(p0 /\\ p1) -> p2", "p0 -> (p1 -> p2)"),
        ("p0 -> T", "T"),
        ("p0 -> (p1 /\\ p2)", "(p0 -> p1) /\\ (p0 -> p2)"),
    ];
    for (l, r) in axioms {
        ensure(decide_identical_cc(&f(l), &f(r)) == Ok(true), || format!("axiom {l} = {r}"))?;
    }
    ensure(decide_identical_cc(&f("p0"), &f("p0 /\\ p0")) == Ok(false), || "p vs p /\\ p".into())?;

    let (a, b) = (f("~p0 \\/ ~~p0"), f("T"));
    ensure(cardinality_refutation(&a, &b, 3).is_none(), || "cardinality refuter fired".into())?;
    ensure(cardinalities_agree(&a, &b), || "oracle cardinalities differ".into())?;
    match semi_decide_identical(&a, &b, 100_000) {
        Verdict::Negative(Distinction::ProvabilityGap { implication, countermodel }) => {
            ensure(refuted_by(&countermodel, &implication), || "gap countermodel does not refute".into())?;
        }
        other => return Err(format!("~p \\/ ~~p vs T: {}", other.tag())),
    }
    Ok(format!("100 random pairs ({isos} isomorphic), 7 axioms, p vs p/\\p, provability gap"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let samples = grid(&["x", "y"], &[1, 2, 3]);
    let (l, r) = wilkie_equation();
    ensure(check_hsi_equation(&l, &r, &samples), || "Wilkie's equation".into())?;
    let (l, r) = ad_bc_equation();
    ensure(check_hsi_equation(&l, &r, &grid(&["x"], &[1, 2, 3])), || "AD = BC".into())?;
    let poly = |x: u32, powers: &[u32]| powers.iter().map(|&k| BigUint::from(x).pow(k)).sum::<BigUint>();
    for x in 1..=3u32 {
        let (a, b, c, d) = (poly(x, &[0, 1]), poly(x, &[0, 1, 2]), poly(x, &[0, 3]), poly(x, &[0, 2, 4]));
        ensure(&a * &d == &b * &c, || format!("AD = BC oracle at {x}"))?;
        for y in 1..=3u32 {
            let side = |u: u32, v: u32| (a.pow(u) + b.pow(u)).pow(v) * (c.pow(v) + d.pow(v)).pow(u);
            ensure(side(x, y) == side(y, x), || format!("Wilkie oracle at {x},{y}"))?;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("both identities on {{1,2,3}} in {took:.2?}"))
}

fn ack(m: u64, n: u64) -> u64 {
    match (m, n) {
        (0, n) => n + 1,
        (m, 0) => ack(m - 1, 1),
        (m, n) => ack(m - 1, ack(m, n - 1)),
    }
}

fn criterion_5() -> Check {
    let fuel = 50_000_000;
    let double = double_term();
    for n in 0..=20u64 {
        let v = apply_nat(&double, &[n], fuel).map_err(|e| e.to_string())?;
        ensure(v == BigUint::from(2 * n), || format!("double {n} = {v}"))?;
    }
    let a = ackermann_term();
    for m in 0..=3u64 {
        for n in 0..=3u64 {
            let v = apply_nat(&a, &[m, n], fuel).map_err(|e| e.to_string())?;
            ensure(v == BigUint::from(ack(m, n)), || format!("A({m},{n}) = {v}"))?;
        }
    }
    ensure(ack(3, 3) == 61, || "oracle A(3,3)".into())?;

    type Native = fn(u64, u64) -> u64;
    let steps: [(&str, Native); 4] = [
        ("fun p:N /\\ N => S (snd p)", |_, acc| acc + 1),
        ("fun p:N /\\ N => add (fst p) (snd p)", |k, acc| k + acc),
        ("fun p:N /\\ N => mul (S (fst p)) (snd p)", |k, acc| (k + 1) * acc),
        ("fun p:N /\\ N => fst p", |k, _| k),
    ];
    let mut rng = gen::rng(5);
    for _ in 0..100 {
        let (src, native) = steps.choose(&mut rng).expect("non-empty");
        let step = parse_tterm(src).map_err(|e| e.to_string())?;
        let (base, n) = (rng.gen_range(0..5u64), rng.gen_range(0..8u64));
        let rec = |k: u64| TTerm::r(TTerm::numeral(base), step.clone(), TTerm::numeral(k));
        let at_zero = eval_nat(&rec(0), fuel).map_err(|e| e.to_string())?;
        ensure(at_zero == BigUint::from(base), || format!("R {base} ({src}) 0"))?;
        let unfolded = TTerm::app(step.clone(), TTerm::pair(TTerm::numeral(n), rec(n)));
        let lhs = eval_nat(&rec(n + 1), fuel).map_err(|e| e.to_string())?;
        let rhs = eval_nat(&unfolded, fuel).map_err(|e| e.to_string())?;
        let expected = (0..=n).fold(base, |acc, k| native(k, acc));
        ensure(lhs == rhs && lhs == BigUint::from(expected), || format!("R {base} ({src}) {}: {lhs} {rhs} {expected}", n + 1))?;
    }

    let values: Vec<BigUint> = (0..=50).map(|k| eval_nat(&TTerm::numeral(k), fuel).expect("numeral")).collect();
    for i in 0..=50usize {
        ensure(values[i] == BigUint::from(i), || format!("numeral {i}"))?;
        for j in 0..i {
            ensure(TTerm::numeral(i as u64) != TTerm::numeral(j as u64) && values[i] != values[j], || format!("numerals {i}, {j}"))?;
        }
    }
    Ok("double, Ackermann, 100 recursor instances, numerals to 50".into())
}

fn native(name: &str, n: u64) -> u64 {
    let fib = |n: u64| (0..n).fold((0u64, 1u64), |(a, b), _| (b, a + b)).0;
    match name {
        "succ" => n + 1,
        "pred" => n.saturating_sub(1),
        "double" => 2 * n,
        "half" => n / 2,
        "parity" => n % 2,
        "sign" => n.min(1),
        "triangular" => n * (n + 1) / 2,
        "square" => n * n,
        "fib" => fib(n),
        "pow2" => 1 << n,
        other => panic!("no native version of {other}"),
    }
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let fuel = 10_000_000;
    ensure(REFERENCE_PROGRAMS.len() == 10, || "ten reference programs".into())?;
    for (name, _) in REFERENCE_PROGRAMS {
        let code = reference_code(name).expect("reference program");
        for n in 0..=20u64 {
            let got = recworld::apply(&code, &Nat::from(n), fuel).and_then(|v| v.to_u64());
            ensure(got == Some(native(name, n)), || format!("{name}({n}) = {got:?}"))?;
        }
    }

    let paired = [
        "unpair r0 r0 r1",
        "unpair r0 r1 r0",
        recworld::ADD_PROGRAM,
        "unpair r0 r1 r2\ninc r1\nmov r0 r1",
        "unpair r0 r1 r2\ndecjz r2 5\ninc r1\ninc r1\njmp 1\nmov r0 r1",
    ];
    let oracles: [fn(u64, u64) -> u64; 5] = [|x, _| x, |_, y| y, |x, y| x + y, |x, _| x + 1, |x, y| x + 2 * y];
    for (src, oracle) in paired.iter().zip(oracles) {
        let e = Code::assemble(src).map_err(|e| e.to_string())?;
        for x in 0..5u64 {
            let s = smn(&e, &Nat::from(x));
            for y in 0..5u64 {
                let direct = recworld::apply(&e, &pair_u64(x, y), fuel);
                let specialised = recworld::apply(&s, &Nat::from(y), fuel);
                ensure(direct == specialised && direct == Some(Nat::from(oracle(x, y))), || format!("s-m-n {src} {x} {y}"))?;
            }
        }
    }

    let limit = 1u64 << 16;
    let mut hit = vec![false; limit as usize + 1];
    for a in 0..=16u64 {
        for b in 0..limit {
            let code = (1u64 << a) * (2 * b + 1);
            if code > limit {
                break;
            }
            let p = pair_u64(a, b);
            ensure(p.to_u64() == Some(code), || format!("pair({a},{b})"))?;
            ensure(!hit[code as usize], || format!("pair collision at {code}"))?;
            hit[code as usize] = true;
            let back = unpair(&p).map_err(|e| e.to_string())?;
            ensure(back == (Nat::from(a), Nat::from(b)), || format!("unpair {code}"))?;
        }
    }
    ensure(hit[1..].iter().all(|&h| h), || "pairing misses a code".into())?;
    ensure(unpair(&Nat::zero()).is_err(), || "unpair 0".into())?;

    let w = RecWorld::default();
    let nat = bhk_core::recworld::RecObject::Nat;
    let prod = w.product(&nat, &nat).map_err(|e| e.to_string())?;
    let add = w.mor(&prod, &nat, &recworld::parse_assembly(recworld::ADD_PROGRAM).map_err(|e| e.to_string())?);
    let lam = w.curry(&nat, &nat, &nat, &add).map_err(|e| e.to_string())?;
    let exp = w.exponential(&nat, &nat).map_err(|e| e.to_string())?;
    let p0 = w.compose(&lam, &w.proj0(&nat, &nat).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let lam_x_id = Model::pair(&w, &p0, &w.proj1(&nat, &nat).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let lhs = w.compose(&w.eval(&nat, &nat).map_err(|e| e.to_string())?, &lam_x_id).map_err(|e| e.to_string())?;
    ensure(lhs.tgt == nat && lam.tgt == exp, || "exponential law typing".into())?;
    for x in 0..6u64 {
        for y in 0..6u64 {
            let v = w.apply(&lhs.code, &pair_u64(x, y)).map_err(|e| e.to_string())?;
            ensure(v == Nat::from(x + y), || format!("ev . (curry f x id) at ({x},{y}) = {v}"))?;
        }
    }
    ensure(w.mor_eq(&lhs, &add).map_err(|e| e.to_string())?, || "sampled morphism equality".into())?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok(format!("programs, s-m-n grid, pairing to 2^16, exponential law in {took:.2?}"))
}

fn point(size: usize, x: usize) -> Table {
    Table { src: 1, tgt: size, map: vec![x] }
}

fn criterion_7() -> Check {
    let theorems = [
        "p0 -> p0",
        "p0 /\\ p1 -> p0",
        "p0 /\\ p1 -> p1",
        "p0 -> p0 \\/ p1",
        "p1 -> p0 \\/ p1",
        "p0 \\/ p1 -> p1 \\/ p0",
        "F -> p0",
        "p0 -> T",
        "T",
        "p0 -> p1 -> p0",
        "p0 -> ~~p0",
        "~p0 -> p0 -> p1",
        "~~~p0 -> ~p0",
        "~~(p0 \\/ ~p0)",
        "p0 -> p0 /\\ p0",
        "p0 \\/ p0 -> p0",
        "p0 /\\ T -> p0",
        "(T -> p0) -> p0",
        "p0 -> T -> p0",
        "~(p0 /\\ ~p0)",
        "p0 /\\ ~p0 -> p1",
        "~p0 \\/ p1 -> p0 -> p1",
        "~(p0 \\/ p1) -> ~p0",
        "~p0 /\\ ~p1 -> ~(p0 \\/ p1)",
        "(p0 -> p1) -> ~p1 -> ~p0",
        "p0 \\/ F -> p0",
        "p0 -> p0 \\/ F",
        "p0 -> p1 -> p1",
        "~~(~~p0 -> p0)",
        "p0 \\/ ~p0 -> ~~p0 -> p0",
    ];
    let mut interpretations = 0;
    for src in theorems {
        let a = f(src);
        let Verdict::Positive(proof) = decide_provable(&a, 100_000) else { return Err(format!("{src} not proved")) };
        let rep = soundness_sweep(&a, &proof, 3, &Bounds::default()).map_err(|e| format!("{src}: {e}"))?;
        ensure(rep.failures == 0, || format!("{src}: {} failures", rep.failures))?;
        interpretations += rep.interpretations;
    }

    let m = FinOrd::new();
    let mut rng = gen::rng(7);
    for _ in 0..20 {
        let size = rng.gen_range(0..=2);
        let a = gen::formula(&mut rng, 2, size, false);
        let atoms: Vec<u32> = a.atoms().into_iter().collect();
        for interp in fin_interpretations(&atoms, 2, true) {
            let rz = Realizability::new(&m, &interp, Bounds::default());
            let (pos, neg) = (rz.is_realizable(&a), rz.is_realizable(&Formula::not(a.clone())));
            ensure(pos.is_ok() && neg.is_ok() && pos != neg, || format!("negation law for {a}"))?;
        }
    }

    for _ in 0..20 {
        let (sa, sb) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let (a, b) = (gen::formula(&mut rng, 2, sa, false), gen::formula(&mut rng, 2, sb, false));
        let or = Formula::or(a.clone(), b.clone());
        let atoms: Vec<u32> = or.atoms().into_iter().collect();
        for interp in fin_interpretations(&atoms, 2, false) {
            let rz = Realizability::new(&m, &interp, Bounds::default());
            let (ca, cb) = (rz.carrier(&a).map_err(|e| e.to_string())?, rz.carrier(&b).map_err(|e| e.to_string())?);
            for i in 0..ca + cb {
                let oracle = if i < ca { rz.realizes(&point(ca, i), &a) } else { rz.realizes(&point(cb, i - ca), &b) };
                let got = rz.realizes(&point(ca + cb, i), &or);
                ensure(got.is_ok() && got == oracle, || format!("disjunction clause for {or} at {i}"))?;
            }
        }
    }

    let t = TWorld::default();
    let ar = Arith::new(&t, 8);
    let sentences = [
        ("0 = 0", true),
        ("S 0 = 0", false),
        ("forall x:N. x + 0 = x", true),
        ("forall x:N. x = 0", false),
        ("exists y:N. y = 2 * 3", true),
        ("exists y:N. y * y = 9", true),
        ("2 + 2 = 5", false),
        ("forall x:N. x * 1 = x", true),
        ("~(1 = 0)", true),
        ("forall x:N. ~(S x = 0)", true),
    ];
    for (src, truth) in sentences {
        let s = parse_sentence(src).map_err(|e| e.to_string())?;
        let em = check_excluded_middle_sentence(&ar, &s).map_err(|e| format!("{src}: {e}"))?;
        ensure(em.verified && (em.side == Side::Left) == truth, || format!("excluded middle for {src}"))?;
    }

    let r = t.value("fun x:N => (double x, unit)").map_err(|e| e.to_string())?;
    let ex = extract_function(&t, &r, &(0..=10).collect::<Vec<_>>(), |n, y| *y == BigUint::from(2 * n)).map_err(|e| e.to_string())?;
    ensure(ex.verified(), || format!("doubling failures {:?}", ex.failures))?;
    let r = t.value("fun x:N => (S x, unit)").map_err(|e| e.to_string())?;
    let ex = extract_function(&t, &r, &(0..=10).collect::<Vec<_>>(), |n, y| *y == BigUint::from(n + 1)).map_err(|e| e.to_string())?;
    ensure(ex.verified(), || format!("successor failures {:?}", ex.failures))?;

    let w = RecWorld::default();
    let realizers = [
        ("decjz r0 4\ninc r1\ninc r1\njmp 0\nmov r0 r1\nconst r1 0\npair r0 r0 r1", 2u64, 0u64),
        ("inc r0\nconst r1 0\npair r0 r0 r1", 1, 1),
    ];
    for (src, mul, add) in realizers {
        let r = Code::assemble(src).map_err(|e| e.to_string())?;
        let ex = extract_function(&w, &r.0, &(0..=10).collect::<Vec<_>>(), |n, y| *y == BigUint::from(mul * n + add))
            .map_err(|e| e.to_string())?;
        ensure(ex.verified(), || format!("rec extraction failures {:?}", ex.failures))?;
        let code = Code(ex.morphism);
        for n in 0..=10u64 {
            let v = recworld::apply(&code, &Nat::from(n), 1_000_000);
            ensure(v == Some(Nat::from(mul * n + add)), || format!("extracted code at {n}: {v:?}"))?;
        }
        let sentence = parse_sentence(if mul == 2 { "forall x:N. exists y:N. y = x + x" } else { "forall x:N. exists y:N. y = S x" })
            .map_err(|e| e.to_string())?;
        ensure(Arith::new(&w, 10).realizes(&r.0, &sentence).unwrap_or(false), || format!("realizer of {sentence}"))?;
        ensure(NnoWorld::apply(&w, &w.first_component(&r.0), &w.nat(3)).ok() == Some(Nat::from(3 * mul + add)), || "first component".into())?;
    }
    Ok(format!("{interpretations} sweep interpretations, negation, disjunction, 10 sentences, extraction"))
}

fn upsets(le: &[Vec<bool>]) -> usize {
    let n = le.len();
    (0u32..1 << n)
        .filter(|s| (0..n).all(|a| s & (1 << a) == 0 || (0..n).all(|b| !le[a][b] || s & (1 << b) != 0)))
        .count()
}

fn criterion_8() -> Check {
    let mut trees = 0;
    for n in 1..=3 {
        for parents in rooted_trees(n) {
            let p = FinPoset::tree(&parents).map_err(|e| e.to_string())?;
            let rep = tree_reflection_check(&p, 2);
            ensure(rep.ok() && rep.classes == upsets(p.matrix()), || format!("tree {parents:?}: {rep:?}"))?;
            trees += 1;
        }
    }
    ensure(trees == 4, || format!("{trees} rooted trees"))?;
    let mut posets = 0;
    let expected_counts = [1, 3, 19, 219];
    for n in 1..=4 {
        let all = FinPoset::enumerate(n);
        ensure(all.len() == expected_counts[n - 1], || format!("{} posets on {n} points", all.len()))?;
        for p in all {
            let rep = kripke_embedding_check(&UpsetAlgebra::new(p.clone()));
            ensure(rep.ok() && rep.prime_filters == p.len() && rep.elements == upsets(p.matrix()), || format!("{:?}: {rep:?}", p.matrix()))?;
            posets += 1;
        }
    }
    Ok(format!("{trees} trees, {posets} posets"))
}

fn main() {
    let criteria: [(u32, fn() -> Check); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
