use bhk_core::decide::{decide_provable, Verdict};
use bhk_core::gen::{self, TermGen};
use bhk_core::models::{heyting_implies, FinOrd, FinPoset};
use bhk_core::recworld::{self, pair, smn, unpair, Code, Nat};
use bhk_core::rewrite::{beta_normalize, beta_step, long_normal_form};
use bhk_core::semantics::interpret_proof;
use bhk_core::syntax::{parse_formula, parse_term, typecheck, Context, Formula};
use bhk_core::systemt::{apply_nat, compile_primrec, named, PrimRecDef};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;
use std::collections::BTreeMap;

fn closed_term(seed: u64, cc_only: bool) -> (Formula, bhk_core::syntax::ProofTerm) {
    TermGen::new(&mut gen::rng(seed), 2, cc_only).closed(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formulas_print_and_reparse(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let size = rng.gen_range(0..6);
        let a = gen::formula(&mut rng, 3, size, false);
        prop_assert_eq!(parse_formula(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn terms_print_and_reparse(seed in any::<u64>()) {
        let (_, t) = closed_term(seed, false);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn beta_normal_forms_keep_type_and_have_no_redex(seed in any::<u64>()) {
        let (a, t) = closed_term(seed, false);
        let (nf, _) = beta_normalize(&t, 10_000).expect("simply typed terms normalize");
        prop_assert_eq!(typecheck(&Context::new(), &nf).unwrap(), a);
        prop_assert!(beta_step(&nf).is_none());
    }

    #[test]
    fn long_normal_form_is_idempotent(seed in any::<u64>()) {
        let (_, t) = closed_term(seed, true);
        let ctx = Context::new();
        let once = long_normal_form(&ctx, &t).unwrap();
        prop_assert_eq!(long_normal_form(&ctx, &once).unwrap(), once);
    }

    #[test]
    fn denotation_survives_normalization(seed in any::<u64>(), s0 in 0usize..=3, s1 in 0usize..=3) {
        let (a, t) = closed_term(seed, false);
        let (nf, _) = beta_normalize(&t, 10_000).unwrap();
        let sizes: BTreeMap<u32, usize> = [(0, s0), (1, s1)].into_iter().filter(|(p, _)| a.atoms().contains(p)).collect();
        let m = FinOrd::new();
        let ctx = Context::new();
        if let (Ok(f), Ok(g)) = (interpret_proof(&m, &sizes, &ctx, &t), interpret_proof(&m, &sizes, &ctx, &nf)) {
            prop_assert_eq!(f, g);
        }
    }

    #[test]
    fn provability_verdicts_carry_witnesses(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let size = rng.gen_range(1..5);
        let a = gen::formula(&mut rng, 2, size, false);
        match decide_provable(&a, 20_000) {
            Verdict::Positive(t) => prop_assert_eq!(typecheck(&Context::new(), &t).unwrap(), a),
            Verdict::Negative(cm) => prop_assert!(cm.refutes(&a)),
            Verdict::Unknown { .. } => {}
        }
    }

    #[test]
    fn function_codes_roundtrip(a in 0usize..5, b in 1usize..5, seed in any::<u64>()) {
        let m = FinOrd::new();
        let mut rng = gen::rng(seed);
        let values: Vec<usize> = (0..a).map(|_| rng.gen_range(0..b)).collect();
        let e = m.encode_fn(b, &values);
        prop_assert!(e < b.pow(a as u32));
        prop_assert_eq!(m.decode_fn(a, b, e), values);
    }

    #[test]
    fn heyting_implication_is_residual(n in 1usize..=4, pick in any::<u64>()) {
        let all = FinPoset::enumerate(n);
        let p = &all[(pick as usize) % all.len()];
        let ups = p.upsets();
        for &u in &ups {
            for &v in &ups {
                let imp = heyting_implies(p, u, v).unwrap();
                prop_assert!(p.is_upset(imp));
                for &w in &ups {
                    prop_assert_eq!(w & u & !v == 0, w & !imp == 0);
                }
            }
        }
    }

    #[test]
    fn prelude_arithmetic_matches_native(a in 0u64..30, b in 0u64..30) {
        let fuel = 10_000_000;
        prop_assert_eq!(apply_nat(&named("add").unwrap(), &[a, b], fuel).unwrap(), BigUint::from(a + b));
        prop_assert_eq!(apply_nat(&named("mul").unwrap(), &[a, b], fuel).unwrap(), BigUint::from(a * b));
        prop_assert_eq!(apply_nat(&named("pd").unwrap(), &[a], fuel).unwrap(), BigUint::from(a.saturating_sub(1)));
    }

    #[test]
    fn compiled_primitive_recursion_agrees(a in 0u64..20, b in 0u64..20) {
        let fuel = 10_000_000;
        for (d, args) in [
            (PrimRecDef::addition(), vec![a, b]),
            (PrimRecDef::multiplication(), vec![a, b]),
            (PrimRecDef::predecessor(), vec![a]),
        ] {
            let big: Vec<BigUint> = args.iter().map(|&x| BigUint::from(x)).collect();
            let t = compile_primrec(&d).unwrap();
            prop_assert_eq!(apply_nat(&t, &args, fuel).unwrap(), d.eval(&big));
        }
    }

    #[test]
    fn pairing_roundtrips(a in 0u64..20_000, b in any::<u64>()) {
        let (x, y) = (Nat::from(a), Nat::from(b));
        let p = pair(&x, &y);
        prop_assert!(!p.is_zero());
        prop_assert_eq!(unpair(&p).unwrap(), (x, y));
        prop_assert_eq!(p.to_string().parse::<Nat>().unwrap(), p);
    }

    #[test]
    fn assembly_roundtrips(seed in any::<u64>()) {
        let names: Vec<&str> = recworld::REFERENCE_PROGRAMS.iter().map(|(n, _)| *n).collect();
        let code = recworld::reference_code(names[(seed as usize) % names.len()]).unwrap();
        prop_assert_eq!(Code::assemble(&code.disassemble()).unwrap(), code);
    }

    #[test]
    fn smn_specialises_the_first_argument(x in 0u64..50, y in 0u64..50) {
        let add = recworld::reference_code("add").unwrap();
        let s = smn(&add, &Nat::from(x));
        prop_assert_eq!(recworld::apply(&s, &Nat::from(y), 100_000), Some(Nat::from(x + y)));
    }
}
