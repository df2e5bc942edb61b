//! Metatheory checks run on individual programs.

use polychor::eval::{step, StepResult};
use polychor::syntax::{Defs, Expr, Kind, Type};
use polychor::typeck::{kind_of, normalize, subkind, type_equiv, type_of, CheckedProgram, TypingCtx};

/// Preservation and progress along the reduction sequence of `main`, for up to
/// `fuel` steps. Returns the number of steps taken.
pub fn preservation_and_progress(prog: &CheckedProgram, fuel: usize) -> Result<usize, String> {
    let defs = prog.elaborated_defs();
    let ctx = TypingCtx::new(&prog.universe);
    let ty = prog.main.ty.clone();
    let mut m = prog.main_expr();
    for k in 0..fuel {
        match step(&m, &defs) {
            StepResult::Value => return Ok(k),
            StepResult::Stuck(at) => return Err(format!("progress: stuck at {at:?} after {k} steps")),
            StepResult::Stepped(s) => {
                let t = type_of(&ctx, &defs, &s.result)
                    .map_err(|e| format!("preservation: step {k} ({:?}) is ill-typed: {e}", s.rule))?;
                if !type_equiv(&t.ty, &ty) {
                    return Err(format!("preservation: step {k} ({:?}) changed the type", s.rule));
                }
                if kind_of(&ctx, &t.ty).map(|k| k.base().clone()) != Ok(Kind::Star) {
                    return Err(format!("kindable types: the type after step {k} is not of kind *"));
                }
                kind_preservation(&ctx, &s.result)?;
                m = s.result;
            }
        }
    }
    Ok(fuel)
}

/// Every type written in `m` has the same kind as its normal form.
pub fn kind_preservation(ctx: &TypingCtx, m: &Expr) -> Result<(), String> {
    let mut err = None;
    visit_types(ctx, m, &mut |ctx, t| {
        if err.is_some() {
            return;
        }
        let Ok(k) = kind_of(ctx, t) else { return };
        match kind_of(ctx, &normalize(t)) {
            Ok(k2) if subkind(&k, &k2) && subkind(&k2, &k) => {}
            other => err = Some(format!("kind preservation: {t:?} :: {k:?} but normal form gives {other:?}")),
        }
    });
    err.map_or(Ok(()), Err)
}

pub fn kind_preservation_defs(ctx: &TypingCtx, defs: &Defs) -> Result<(), String> {
    for d in defs.iter() {
        kind_preservation(ctx, &d.body)?;
    }
    Ok(())
}

fn visit_types(ctx: &TypingCtx, m: &Expr, f: &mut dyn FnMut(&TypingCtx, &Type)) {
    match m {
        Expr::Var(_) | Expr::Def(_) => {}
        Expr::Lit(_, at) => f(ctx, at),
        Expr::Lam { ann, body, .. } => {
            f(ctx, ann);
            visit_types(ctx, body, f);
        }
        Expr::TLam { var, kind, body } => visit_types(&ctx.enter_tyvar(var, kind), body, f),
        Expr::App(a, b) | Expr::Pair(a, b) => {
            visit_types(ctx, a, f);
            visit_types(ctx, b, f);
        }
        Expr::TApp(a, t) => {
            visit_types(ctx, a, f);
            f(ctx, t);
        }
        Expr::Inl(t, v) | Expr::Inr(t, v) => {
            f(ctx, t);
            visit_types(ctx, v, f);
        }
        Expr::Case { scrut, left_body, right_body, .. } => {
            visit_types(ctx, scrut, f);
            visit_types(ctx, left_body, f);
            visit_types(ctx, right_body, f);
        }
        Expr::Fst(a) | Expr::Snd(a) => visit_types(ctx, a, f),
        Expr::Com { ty, from, to } => {
            f(ctx, ty);
            f(ctx, from);
            f(ctx, to);
        }
        Expr::Select { from, to, body, .. } => {
            f(ctx, from);
            f(ctx, to);
            visit_types(ctx, body, f);
        }
    }
}
