//! Call-by-value, left-to-right reduction of choreographies.

use crate::name::Name;
use crate::parse::print_expr;
use crate::syntax::{is_value, subst_expr, subst_proc_expr, subst_type_in_expr, Defs, Expr, Type};
use crate::typeck::normalize;
use serde::Serialize;
use std::fmt;

/// The axiom a reduction step fired.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Rule {
    AppAbs,
    AppTAbs,
    Def,
    Com,
    CaseL,
    CaseR,
    Fst,
    Snd,
    Sel,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One reduction `m -> result`, with the redex it contracted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub rule: Rule,
    pub redex: Expr,
    pub contractum: Expr,
    pub result: Expr,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepResult {
    Value,
    Stepped(Step),
    /// A closed non-value with no applicable rule; carries the offending subterm.
    Stuck(Expr),
}

/// One step of `m`.
pub fn step(m: &Expr, defs: &Defs) -> StepResult {
    if is_value(m) {
        return StepResult::Value;
    }
    match reduce(m, defs) {
        Ok((rule, redex, contractum, result)) => StepResult::Stepped(Step {
            rule,
            redex,
            contractum,
            result,
        }),
        Err(stuck) => StepResult::Stuck(stuck),
    }
}

type Reduced = (Rule, Expr, Expr, Expr);

/// Reduces the leftmost-innermost redex in evaluation position.
fn reduce(m: &Expr, defs: &Defs) -> Result<Reduced, Expr> {
    let within = |sub: &Expr, rebuild: &dyn Fn(Expr) -> Expr| -> Result<Reduced, Expr> {
        let (rule, redex, contractum, r) = reduce(sub, defs)?;
        Ok((rule, redex, contractum, rebuild(r)))
    };
    let fire = |rule: Rule, contractum: Expr| Ok((rule, m.clone(), contractum.clone(), contractum));
    match m {
        Expr::Def(f) => match defs.get(f) {
            Some(d) => fire(Rule::Def, d.body.clone()),
            None => Err(m.clone()),
        },
        Expr::App(f, a) if !is_value(f) => within(f, &|f2| Expr::App(Box::new(f2), a.clone())),
        Expr::App(f, a) if !is_value(a) => within(a, &|a2| Expr::App(f.clone(), Box::new(a2))),
        Expr::App(f, a) => match &**f {
            Expr::Lam { var, body, .. } => fire(Rule::AppAbs, subst_expr(body, var, a)),
            Expr::Com { from, to, .. } => match (from, to) {
                (Type::Proc(p), Type::Proc(q)) => fire(Rule::Com, subst_proc_expr(a, p, q)),
                _ => Err(m.clone()),
            },
            _ => Err(m.clone()),
        },
        Expr::TApp(f, t) if !is_value(f) => within(f, &|f2| Expr::TApp(Box::new(f2), t.clone())),
        Expr::TApp(f, t) => match &**f {
            Expr::TLam { var, body, .. } => fire(Rule::AppTAbs, subst_type_in_expr(body, var, &normalize(t))),
            _ => Err(m.clone()),
        },
        Expr::Inl(t, v) => within(v, &|v2| Expr::Inl(t.clone(), Box::new(v2))),
        Expr::Inr(t, v) => within(v, &|v2| Expr::Inr(t.clone(), Box::new(v2))),
        Expr::Pair(a, b) if !is_value(a) => within(a, &|a2| Expr::Pair(Box::new(a2), b.clone())),
        Expr::Pair(a, b) => within(b, &|b2| Expr::Pair(a.clone(), Box::new(b2))),
        Expr::Fst(p) | Expr::Snd(p) if !is_value(p) => {
            let first = matches!(m, Expr::Fst(_));
            within(p, &|p2| if first { Expr::Fst(Box::new(p2)) } else { Expr::Snd(Box::new(p2)) })
        }
        Expr::Fst(p) => match &**p {
            Expr::Pair(a, _) => fire(Rule::Fst, (**a).clone()),
            _ => Err(m.clone()),
        },
        Expr::Snd(p) => match &**p {
            Expr::Pair(_, b) => fire(Rule::Snd, (**b).clone()),
            _ => Err(m.clone()),
        },
        Expr::Case { scrut, left, left_body, right, right_body } if !is_value(scrut) => within(scrut, &|s2| {
            Expr::Case {
                scrut: Box::new(s2),
                left: left.clone(),
                left_body: left_body.clone(),
                right: right.clone(),
                right_body: right_body.clone(),
            }
        }),
        Expr::Case { scrut, left, left_body, right, right_body } => match &**scrut {
            Expr::Inl(_, v) => fire(Rule::CaseL, subst_expr(left_body, left, v)),
            Expr::Inr(_, v) => fire(Rule::CaseR, subst_expr(right_body, right, v)),
            _ => Err(m.clone()),
        },
        Expr::Select { body, .. } => fire(Rule::Sel, (**body).clone()),
        Expr::Var(_) | Expr::Lit(..) | Expr::Lam { .. } | Expr::TLam { .. } | Expr::Com { .. } => Err(m.clone()),
    }
}

/// How an evaluation ended.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Value(Expr),
    Stuck { term: Expr, at: Expr },
    Timeout(Expr),
}

/// The rules fired, in order, and the final state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub steps: Vec<TraceEntry>,
    pub outcome: Outcome,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TraceEntry {
    pub rule: Rule,
    pub redex: String,
    pub contractum: String,
}

/// Runs `m` for at most `fuel` steps.
pub fn eval(m: &Expr, defs: &Defs, fuel: usize) -> Trace {
    let mut cur = m.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        match step(&cur, defs) {
            StepResult::Value => {
                return Trace {
                    steps,
                    outcome: Outcome::Value(cur),
                }
            }
            StepResult::Stuck(at) => {
                return Trace {
                    steps,
                    outcome: Outcome::Stuck { term: cur, at },
                }
            }
            StepResult::Stepped(s) => {
                steps.push(TraceEntry {
                    rule: s.rule,
                    redex: print_expr(&s.redex),
                    contractum: print_expr(&s.contractum),
                });
                cur = s.result;
            }
        }
    }
    let outcome = if is_value(&cur) { Outcome::Value(cur) } else { Outcome::Timeout(cur) };
    Trace { steps, outcome }
}

/// Every select removed; used to compare runs that differ only in choices.
pub fn erase_selects(m: &Expr) -> Expr {
    let e = |m: &Expr| Box::new(erase_selects(m));
    match m {
        Expr::Var(_) | Expr::Def(_) | Expr::Lit(..) | Expr::Com { .. } => m.clone(),
        Expr::Lam { var, ann, rho, body } => Expr::Lam {
            var: var.clone(),
            ann: ann.clone(),
            rho: rho.clone(),
            body: e(body),
        },
        Expr::TLam { var, kind, body } => Expr::TLam {
            var: var.clone(),
            kind: kind.clone(),
            body: e(body),
        },
        Expr::App(a, b) => Expr::App(e(a), e(b)),
        Expr::TApp(a, t) => Expr::TApp(e(a), t.clone()),
        Expr::Inl(t, a) => Expr::Inl(t.clone(), e(a)),
        Expr::Inr(t, a) => Expr::Inr(t.clone(), e(a)),
        Expr::Case { scrut, left, left_body, right, right_body } => Expr::Case {
            scrut: e(scrut),
            left: left.clone(),
            left_body: e(left_body),
            right: right.clone(),
            right_body: e(right_body),
        },
        Expr::Pair(a, b) => Expr::Pair(e(a), e(b)),
        Expr::Fst(a) => Expr::Fst(e(a)),
        Expr::Snd(a) => Expr::Snd(e(a)),
        Expr::Select { body, .. } => erase_selects(body),
    }
}

/// Names of the processes a step's redex communicates between, if it is a `com`.
pub fn com_endpoints(s: &Step) -> Option<(Name, Name)> {
    match &s.redex {
        Expr::App(f, _) => match &**f {
            Expr::Com { from: Type::Proc(p), to: Type::Proc(q), .. } => Some((p.clone(), q.clone())),
            _ => None,
        },
        _ => None,
    }
}
