//! `bhk`: command-line access to the deciders, evaluators and realizability
//! checks of `bhk-core`.
//!
//! Every command builds a JSON report; `--json` prints it on one line and
//! the default output is a plain rendering of the same report. Exit codes:
//! 0 positive, 1 negative, 2 unknown, 3 usage error.

use bhk_core::decide::{
    cardinality_refutation, decide_equivalent, decide_identical_cc, decide_provable, rooted_trees, semi_decide_identical,
    DecideError,
};
use bhk_core::gen::{self, TermGen};
use bhk_core::models::{kripke_embedding_check, tree_reflection_check, FinOrd, FinPoset, UpsetAlgebra};
use bhk_core::realize::arith::{extract_function, parse_sentence, Arith, NnoWorld, Sentence, TWorld};
use bhk_core::realize::{fin_interpretations, soundness_sweep, Bounds, PropInterp, Realizability};
use bhk_core::recworld::{self, reference_code, Code, Nat, Outcome, RecWorld};
use bhk_core::rewrite::{beta_normalize, long_normal_form};
use bhk_core::semantics::interpret_proof;
use bhk_core::syntax::{parse_formula, parse_term_in, Context, Formula};
use bhk_core::systemt::{parse_tterm, typecheck_closed, Machine, TError};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "bhk", version, about = "Proofs, models and realizers for intuitionistic logic")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Search budget for the deciders.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget: usize,
    /// Step budget for evaluators and machines.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    fuel: u64,
    /// Size bound for enumerations; its meaning depends on the command.
    #[arg(long, global = true)]
    bounds: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide whether a formula has a proof.
    Prove { formula: String },
    /// Decide whether two proof terms are βη-equal.
    Equiv {
        #[arg(long, default_value = "")]
        ctx: String,
        left: String,
        right: String,
    },
    /// Decide whether two formulas are isomorphic.
    Iso { left: String, right: String },
    /// Evaluate a closed System T term.
    EvalT { term: String },
    /// Run a machine program: a reference name, an assembly file or inline
    /// assembly with `;` between instructions.
    RecRun {
        program: String,
        #[arg(default_value = "0")]
        input: String,
    },
    /// Check finite realizability of a formula; `--bounds` is the largest carrier.
    Realize { formula: String },
    /// Extract the function named by a realizer of `forall x:N. exists y:N. A`;
    /// `--bounds` is the largest input.
    Extract {
        sentence: String,
        realizer: String,
        #[arg(long, value_enum, default_value_t = World::T)]
        world: World,
    },
    /// Run a bounded structural check.
    ModelCheck {
        #[arg(value_enum)]
        check: Check,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum World {
    /// System T values.
    T,
    /// Coded machine programs.
    Rec,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Check {
    /// Prime-filter embedding of upset algebras; `--bounds` is the largest poset.
    Kripke,
    /// Reflection of presheaves on rooted trees; `--bounds` is the largest tree.
    Trees,
    /// Random terms keep their FinOrd denotation under normalization;
    /// `--bounds` is the number of terms.
    BetaEta,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Outcome3 = Result<Value, Usage>;

fn verdict_code(v: &Value) -> u8 {
    match v.get("verdict").and_then(Value::as_str) {
        Some("positive") => 0,
        Some("negative") => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("BHK_MAX_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{report}");
            } else {
                print!("{}", render(&report));
            }
            ExitCode::from(verdict_code(&report))
        }
        Err(Usage(msg)) => {
            eprintln!("bhk: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome3 {
    match &cli.cmd {
        Cmd::Prove { formula } => Ok(decide_provable(&parse_formula(formula)?, cli.budget).to_json()),
        Cmd::Equiv { ctx, left, right } => {
            let ctx = Context::parse(ctx)?;
            let (t, s) = (parse_term_in(&ctx, left)?, parse_term_in(&ctx, right)?);
            Ok(decide_equivalent(&ctx, &t, &s, cli.budget)?.to_json())
        }
        Cmd::Iso { left, right } => iso(&parse_formula(left)?, &parse_formula(right)?, cli.budget),
        Cmd::EvalT { term } => eval_t(term, cli.fuel),
        Cmd::RecRun { program, input } => rec_run(program, input, cli.fuel),
        Cmd::Realize { formula } => realize(&parse_formula(formula)?, cli.bounds.unwrap_or(2), cli.budget),
        Cmd::Extract { sentence, realizer, world } => {
            let s = parse_sentence(sentence)?;
            let max = cli.bounds.unwrap_or(10) as u64;
            match world {
                World::T => {
                    let w = TWorld { fuel: cli.fuel };
                    let r = w.value(realizer)?;
                    extract(&w, &s, &r, max, |_| Value::Null)
                }
                World::Rec => {
                    let w = RecWorld { fuel: cli.fuel, ..RecWorld::default() };
                    let r = load_program(realizer)?.0;
                    extract(&w, &s, &r, max, |m: &Nat| {
                        json!({"code": m.to_string(), "assembly": Code(m.clone()).disassemble()})
                    })
                }
            }
        }
        Cmd::ModelCheck { check } => Ok(model_check(*check, cli.bounds, cli.seed)),
    }
}

fn iso(a: &Formula, b: &Formula, budget: usize) -> Outcome3 {
    if !(a.in_cc_fragment() && b.in_cc_fragment()) {
        return Ok(semi_decide_identical(a, b, budget).to_json());
    }
    let same = decide_identical_cc(a, b).map_err(|e: DecideError| Usage(e.to_string()))?;
    if same {
        return Ok(json!({"verdict": "positive", "method": "normal-form"}));
    }
    let countermodel = match cardinality_refutation(a, b, 3) {
        Some((assignment, left, right)) => json!({
            "kind": "cardinality",
            "assignment": assignment.iter().map(|(p, n)| (format!("p{p}"), json!(n))).collect::<serde_json::Map<_, _>>(),
            "left": left.to_string(),
            "right": right.to_string(),
        }),
        None => json!({"kind": "normal-form"}),
    };
    Ok(json!({"verdict": "negative", "method": "normal-form", "countermodel": countermodel}))
}

fn eval_t(src: &str, fuel: u64) -> Outcome3 {
    let t = parse_tterm(src)?;
    let ty = typecheck_closed(&t)?;
    match Machine::new(fuel).eval(&[], &t) {
        Ok(v) => Ok(json!({"verdict": "positive", "type": ty.to_string(), "value": v.to_string()})),
        Err(TError::Fuel) => Ok(json!({"verdict": "unknown", "reason": "fuel exhausted", "fuel": fuel})),
        Err(e) => Err(e.into()),
    }
}

fn load_program(src: &str) -> Result<Code, Usage> {
    if let Some(c) = reference_code(src) {
        return Ok(c);
    }
    let text = match std::fs::read_to_string(src) {
        Ok(t) => t,
        Err(_) => src.replace(';', "\n"),
    };
    Ok(Code::assemble(&text)?)
}

fn rec_run(program: &str, input: &str, fuel: u64) -> Outcome3 {
    let code = load_program(program)?;
    let x: Nat = input.parse().map_err(|e: recworld::RecError| Usage(e.to_string()))?;
    let r = recworld::run(&code, &x, fuel);
    Ok(match r.outcome {
        Outcome::Halted(v) => json!({"verdict": "positive", "value": v.to_string(), "steps": r.steps}),
        Outcome::OutOfFuel => json!({"verdict": "unknown", "reason": "fuel exhausted", "steps": r.steps}),
        Outcome::Fault(msg) => json!({"verdict": "negative", "reason": msg, "steps": r.steps}),
    })
}

fn interp_json(i: &PropInterp<FinOrd>) -> Value {
    let atoms: serde_json::Map<String, Value> = i
        .atoms
        .iter()
        .map(|(p, (size, rs))| (format!("p{p}"), json!({"carrier": size, "realizers": rs.iter().map(|t| t.map[0]).collect::<Vec<_>>()})))
        .collect();
    Value::Object(atoms)
}

fn realize(a: &Formula, max_carrier: usize, budget: usize) -> Outcome3 {
    let m = FinOrd::new();
    let atoms: Vec<u32> = a.atoms().into_iter().collect();
    let interps = fin_interpretations(&atoms, max_carrier, false);
    let mut failure = None;
    for interp in &interps {
        match Realizability::new(&m, interp, Bounds::default()).is_realizable(a) {
            Ok(true) => {}
            Ok(false) => {
                failure = Some(interp_json(interp));
                break;
            }
            Err(e) => return Ok(json!({"verdict": "unknown", "reason": e.to_string()})),
        }
    }
    let provable = decide_provable(a, budget);
    let mut report = json!({"interpretations": interps.len(), "provable": provable.tag()});
    if let bhk_core::decide::Verdict::Positive(proof) = &provable {
        let sweep = soundness_sweep(a, proof, max_carrier, &Bounds::default())?;
        report["proof"] = json!(proof.to_string());
        report["proof_sweep"] = json!({"interpretations": sweep.interpretations, "failures": sweep.failures});
    }
    match failure {
        None => report["verdict"] = json!("positive"),
        Some(cm) => {
            report["verdict"] = json!("negative");
            report["countermodel"] = cm;
        }
    }
    Ok(report)
}

fn extract<W: NnoWorld>(
    w: &W,
    s: &Sentence,
    r: &W::Val,
    max: u64,
    describe: impl Fn(&W::Val) -> Value,
) -> Outcome3 {
    let Sentence::Forall(x, _, inner) = s else {
        return Err(Usage("expected a sentence of the form forall x:N. exists y:N. A".into()));
    };
    let Sentence::Exists(y, _, body) = &**inner else {
        return Err(Usage("expected a sentence of the form forall x:N. exists y:N. A".into()));
    };
    let ar = Arith::new(w, max.max(4));
    let oracle = |n: u64, v: &BigUint| {
        let env = vec![(x.clone(), w.nat(n)), (y.clone(), w.numeral(v))];
        ar.candidates_in(body, &env)
            .map(|cs| cs.iter().any(|c| ar.realizes_in(c, body, &env).unwrap_or(false)))
            .unwrap_or(false)
    };
    let inputs: Vec<u64> = (0..=max).collect();
    let ex = match extract_function(w, r, &inputs, oracle) {
        Ok(ex) => ex,
        Err(e) => return Ok(json!({"verdict": "unknown", "reason": e.to_string()})),
    };
    let realizes = ar.realizes(r, s).unwrap_or(false);
    let values: Vec<Value> = ex.values.iter().map(|(n, v)| json!([n, v.to_string()])).collect();
    let mut report = json!({
        "verdict": if ex.verified() && realizes { "positive" } else { "negative" },
        "values": values,
        "failures": ex.failures,
        "realizes": realizes,
    });
    let morphism = describe(&ex.morphism);
    if !morphism.is_null() {
        report["morphism"] = morphism;
    }
    Ok(report)
}

fn model_check(check: Check, bounds: Option<usize>, seed: u64) -> Value {
    match check {
        Check::Kripke => {
            let max = bounds.unwrap_or(4);
            let mut posets = 0;
            let mut failures = Vec::new();
            for n in 1..=max {
                for p in FinPoset::enumerate(n) {
                    posets += 1;
                    let rep = kripke_embedding_check(&UpsetAlgebra::new(p.clone()));
                    if !rep.ok() {
                        failures.push(json!(p.matrix()));
                    }
                }
            }
            json!({"verdict": if failures.is_empty() { "positive" } else { "negative" }, "posets": posets, "failures": failures})
        }
        Check::Trees => {
            let max = bounds.unwrap_or(3);
            let mut reports = Vec::new();
            let mut ok = true;
            for n in 1..=max {
                for parents in rooted_trees(n) {
                    let p = FinPoset::tree(&parents).expect("rooted trees are posets");
                    let rep = tree_reflection_check(&p, 2);
                    ok &= rep.ok();
                    reports.push(json!({"parents": parents, "classes": rep.classes, "upsets": rep.upsets, "ok": rep.ok()}));
                }
            }
            json!({"verdict": if ok { "positive" } else { "negative" }, "trees": reports})
        }
        Check::BetaEta => {
            let count = bounds.unwrap_or(200);
            let m = FinOrd::new();
            let mut rng = gen::rng(seed);
            let mut violations = Vec::new();
            let mut checked = 0;
            let mut drawn = 0;
            while checked < count && drawn < 50 * count.max(1) {
                drawn += 1;
                let (a, t) = TermGen::new(&mut rng, 2, false).closed(2);
                let ctx = Context::new();
                let Some((nf, _)) = beta_normalize(&t, 10_000) else { continue };
                let mut forms = vec![nf];
                if let Ok(long) = long_normal_form(&ctx, &t) {
                    forms.push(long);
                }
                let sizes: BTreeMap<u32, usize> = a.atoms().into_iter().map(|p| (p, rng.gen_range(0..=3))).collect();
                let Ok(f) = interpret_proof(&m, &sizes, &ctx, &t) else { continue };
                let mut images = Vec::new();
                for s in &forms {
                    match interpret_proof(&m, &sizes, &ctx, s) {
                        Ok(g) => images.push((s, g)),
                        Err(_) => break,
                    }
                }
                if images.len() < forms.len() {
                    continue;
                }
                checked += 1;
                for (s, g) in images {
                    if f != g {
                        violations.push(json!({"term": t.to_string(), "normal_form": s.to_string()}));
                    }
                }
            }
            let verdict = if !violations.is_empty() {
                "negative"
            } else if checked < count {
                "unknown"
            } else {
                "positive"
            };
            json!({"verdict": verdict, "checked": checked, "violations": violations, "seed": seed})
        }
    }
}

fn render(report: &Value) -> String {
    if let (Some("positive"), Some(Value::String(v))) = (report.get("verdict").and_then(Value::as_str), report.get("value")) {
        return format!("{v}\n");
    }
    let mut out = String::new();
    if let Value::Object(map) = report {
        if let Some(v) = map.get("verdict").and_then(Value::as_str) {
            out.push_str(&format!("verdict: {v}\n"));
        }
        for (k, v) in map.iter().filter(|(k, _)| k.as_str() != "verdict") {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    }
    out
}
