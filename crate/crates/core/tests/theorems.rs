//! Preservation, progress and kind preservation on generated well-typed programs.

mod common;

use common::chor_gen::{candidate, well_typed};
use common::props::{kind_preservation, kind_preservation_defs, preservation_and_progress};
use polychor::eval::eval;
use polychor::typeck::TypingCtx;
use proptest::prelude::*;
use std::collections::BTreeSet;

#[test]
fn five_hundred_generated_programs() {
    let (progs, tried) = well_typed(0, 500);
    let mut steps = 0;
    for (i, (unit, prog)) in progs.iter().enumerate() {
        let ctx = TypingCtx::new(&prog.universe);
        kind_preservation(&ctx, &unit.main).unwrap_or_else(|e| panic!("program {i}: {e}"));
        kind_preservation_defs(&TypingCtx::for_defs(&prog.universe), &unit.defs).unwrap();
        steps += preservation_and_progress(prog, 500).unwrap_or_else(|e| panic!("program {i}: {e}"));
    }
    eprintln!("500 programs from {tried} candidates, {steps} steps");
}

#[test]
fn generated_programs_fire_every_rule() {
    let (progs, _) = well_typed(0, 500);
    let mut fired = BTreeSet::new();
    for (_, prog) in &progs {
        for s in eval(&prog.main_expr(), &prog.elaborated_defs(), 500).steps {
            fired.insert(s.rule.to_string());
        }
    }
    let all = ["AppAbs", "AppTAbs", "Def", "Com", "CaseL", "CaseR", "Fst", "Snd", "Sel"];
    assert_eq!(fired, all.iter().map(|r| r.to_string()).collect());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_programs_preserve_types(seed in any::<u64>()) {
        if let Some((unit, prog)) = candidate(seed) {
            let ctx = TypingCtx::new(&prog.universe);
            prop_assert_eq!(kind_preservation(&ctx, &unit.main), Ok(()));
            let r = preservation_and_progress(&prog, 500);
            prop_assert!(r.is_ok(), "{:?}", r);
        }
    }
}
