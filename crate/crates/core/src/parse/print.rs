//! Printers producing text accepted by the parsers.

use super::SourceUnit;
use crate::name::Name;
use crate::net::{LocalExpr, LocalType};
use crate::syntax::{fv_expr, Atom, BaseTy, Expr, Kind, Literal, ProcSet, Type};
use std::collections::BTreeMap;
use std::fmt::Write;

fn set(rho: &ProcSet) -> String {
    let items: Vec<&str> = rho.iter().map(|a| a.name().as_str()).collect();
    format!("{{{}}}", items.join(", "))
}

fn paren(s: String, yes: bool) -> String {
    if yes {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_kind(k: &Kind) -> String {
    kind(k, 0)
}

fn kind(k: &Kind, lvl: u8) -> String {
    match k {
        Kind::Star => "*".into(),
        Kind::Proc => "proc".into(),
        Kind::Arrow(a, b) => paren(format!("{} => {}", kind(a, 1), kind(b, 0)), lvl > 0),
        Kind::Without(b, rho) => paren(format!("{} \\ {}", kind(b, 2), set(rho)), lvl > 1),
    }
}

pub fn print_type(t: &Type) -> String {
    ty(t, 0)
}

fn loc(t: &Type) -> String {
    match t {
        Type::Var(x) | Type::Proc(x) => x.to_string(),
        other => format!("({})", ty(other, 0)),
    }
}

fn base_name(b: BaseTy) -> &'static str {
    match b {
        BaseTy::Unit => "()",
        BaseTy::Int => "Int",
        BaseTy::Str => "String",
    }
}

// Levels: 0 arrow, 1 sum, 2 product, 3 application, 4 atom.
fn ty(t: &Type, lvl: u8) -> String {
    if let Some(l) = t.as_bool() {
        return format!("Bool@{}", loc(l));
    }
    match t {
        Type::Var(x) | Type::Proc(x) => x.to_string(),
        Type::Base(b, l) => format!("{}@{}", base_name(*b), loc(l)),
        Type::Arrow(a, rho, b) => {
            let arrow = if rho.is_empty() { "->".to_string() } else { format!("->{}", set(rho)) };
            paren(format!("{} {} {}", ty(a, 1), arrow, ty(b, 0)), lvl > 0)
        }
        Type::Sum(a, b) => paren(format!("{} + {}", ty(a, 1), ty(b, 2)), lvl > 1),
        Type::Prod(a, b) => paren(format!("{} * {}", ty(a, 2), ty(b, 3)), lvl > 2),
        Type::App(a, b) => paren(format!("{} {}", ty(a, 3), ty(b, 4)), lvl > 3),
        Type::Forall(x, k, body) => paren(format!("forall {x}::{}. {}", kind(k, 0), ty(body, 0)), lvl > 0),
        Type::Lam(x, k, body) => paren(format!("fn {x}::{} => {}", kind(k, 1), ty(body, 0)), lvl > 0),
    }
}

pub fn print_expr(m: &Expr) -> String {
    expr(m, 0)
}

fn lit(l: &Literal) -> String {
    match l {
        Literal::Unit => "()".into(),
        Literal::Int(n) => n.to_string(),
        Literal::Str(s) => format!("{s:?}"),
    }
}

fn bool_lit(m: &Expr) -> Option<String> {
    let (t, v, word) = match m {
        Expr::Inl(t, v) => (t, v, "true"),
        Expr::Inr(t, v) => (t, v, "false"),
        _ => return None,
    };
    match (t, &**v) {
        (Type::Base(BaseTy::Unit, l1), Expr::Lit(Literal::Unit, l2)) if **l1 == *l2 => Some(format!("{word}@{}", loc(l1))),
        _ => None,
    }
}

fn is_binder(m: &Expr) -> bool {
    match m {
        Expr::Lam { .. } | Expr::TLam { .. } | Expr::Case { .. } | Expr::Select { .. } => true,
        Expr::App(f, _) => matches!(**f, Expr::Lam { rho: None, .. }),
        _ => false,
    }
}

// Levels: 0 binder forms, 1 application, 2 postfix, 3 atom.
fn expr(m: &Expr, lvl: u8) -> String {
    if let Some(s) = bool_lit(m) {
        return s;
    }
    match m {
        Expr::Var(x) | Expr::Def(x) => x.to_string(),
        Expr::Lit(l, at) => format!("{}@{}", lit(l), loc(at)),
        Expr::Lam { var, ann, rho, body } => {
            let r = rho.as_ref().map(|r| format!("{} ", set(r))).unwrap_or_default();
            paren(format!("\\{r}{var}:{}. {}", ty(ann, 0), expr(body, 0)), lvl > 0)
        }
        Expr::TLam { var, kind: k, body } => paren(format!("/\\{var}::{}. {}", kind(k, 0), expr(body, 0)), lvl > 0),
        Expr::App(f, a) => match &**f {
            Expr::Lam { var, ann, rho: None, body } => paren(
                format!("let {var} : {} = {} in {}", ty(ann, 0), expr(a, 0), expr(body, 0)),
                lvl > 0,
            ),
            _ => paren(format!("{} {}", expr(f, 1), expr(a, 2)), lvl > 1),
        },
        Expr::TApp(f, t) => paren(format!("{} [{}]", expr(f, 2), ty(t, 0)), lvl > 2),
        Expr::Inl(t, v) => paren(format!("inl[{}] {}", ty(t, 0), expr(v, 2)), lvl > 1),
        Expr::Inr(t, v) => paren(format!("inr[{}] {}", ty(t, 0), expr(v, 2)), lvl > 1),
        Expr::Case { scrut, left, left_body, right, right_body } => {
            let s = if left == right && !fv_expr(left_body).contains(left) && !fv_expr(right_body).contains(left) {
                format!("if {} then {} else {}", expr(scrut, 0), expr(left_body, 0), expr(right_body, 0))
            } else {
                let lb = expr(left_body, 0);
                let lb = paren(lb, is_binder(left_body));
                format!("case {} of inl {left} => {lb} | inr {right} => {}", expr(scrut, 0), expr(right_body, 0))
            };
            paren(s, lvl > 0)
        }
        Expr::Pair(a, b) => format!("({}, {})", expr(a, 0), expr(b, 0)),
        Expr::Fst(a) => paren(format!("fst {}", expr(a, 2)), lvl > 1),
        Expr::Snd(a) => paren(format!("snd {}", expr(a, 2)), lvl > 1),
        Expr::Com { ty: t, from, to } => paren(format!("com[{}] {} {}", ty(t, 0), loc(from), loc(to)), lvl > 1),
        Expr::Select { from, to, label, body } => {
            paren(format!("select {} {} {label}; {}", loc(from), loc(to), expr(body, 0)), lvl > 0)
        }
    }
}

/// Prints a whole source unit in the `.chor` file format.
pub fn print_program(u: &SourceUnit) -> String {
    let mut out = String::new();
    let procs: Vec<&str> = u.processes.iter().map(|p| p.as_str()).collect();
    writeln!(out, "processes {};", procs.join(", ")).unwrap();
    for d in u.defs.iter() {
        writeln!(out, "def {} : {} = {};", d.name, print_type(&d.ty), print_expr(&d.body)).unwrap();
    }
    writeln!(out, "main = {};", print_expr(&u.main)).unwrap();
    out
}

pub fn print_local_type(t: &LocalType) -> String {
    lty(t, 0)
}

fn lty(t: &LocalType, lvl: u8) -> String {
    match t {
        LocalType::Var(x) | LocalType::Proc(x) => x.to_string(),
        LocalType::Base(b) => base_name(*b).into(),
        LocalType::Bot => "bot".into(),
        LocalType::Arrow(a, b) => paren(format!("{} -> {}", lty(a, 1), lty(b, 0)), lvl > 0),
        LocalType::Sum(a, b) => paren(format!("{} + {}", lty(a, 1), lty(b, 2)), lvl > 1),
        LocalType::Prod(a, b) => paren(format!("{} * {}", lty(a, 2), lty(b, 3)), lvl > 2),
        LocalType::App(a, b) => paren(format!("{} {}", lty(a, 3), lty(b, 4)), lvl > 3),
        LocalType::Forall(x, b) => paren(format!("forall {x}. {}", lty(b, 0)), lvl > 0),
        LocalType::Lam(x, b) => paren(format!("fn {x} => {}", lty(b, 0)), lvl > 0),
        LocalType::AmI(a, t1, t2) => {
            paren(format!("ami {} then {} else {}", a.name(), lty(t1, 0), lty(t2, 0)), lvl > 0)
        }
    }
}

pub fn print_local(l: &LocalExpr) -> String {
    lex(l, 0)
}

fn lex_binder(l: &LocalExpr) -> bool {
    matches!(
        l,
        LocalExpr::Lam { .. }
            | LocalExpr::TLam { .. }
            | LocalExpr::Case { .. }
            | LocalExpr::AmI { .. }
            | LocalExpr::Choose { .. }
    )
}

fn atom(a: &Atom) -> &str {
    a.name().as_str()
}

fn lex(l: &LocalExpr, lvl: u8) -> String {
    match l {
        LocalExpr::Var(x) | LocalExpr::Def(x) => x.to_string(),
        LocalExpr::Lit(v) => lit(v),
        LocalExpr::Bot => "bot".into(),
        LocalExpr::Lam { var, ann, body } => paren(format!("\\{var}:{}. {}", lty(ann, 0), lex(body, 0)), lvl > 0),
        LocalExpr::TLam { var, body } => paren(format!("/\\{var}. {}", lex(body, 0)), lvl > 0),
        LocalExpr::App(f, a) => paren(format!("{} {}", lex(f, 1), lex(a, 2)), lvl > 1),
        LocalExpr::TApp(f, t) => paren(format!("{} [{}]", lex(f, 2), lty(t, 0)), lvl > 2),
        LocalExpr::Inl(t, v) => paren(format!("inl[{}] {}", lty(t, 0), lex(v, 2)), lvl > 1),
        LocalExpr::Inr(t, v) => paren(format!("inr[{}] {}", lty(t, 0), lex(v, 2)), lvl > 1),
        LocalExpr::Case { scrut, left, left_body, right, right_body } => {
            let lb = paren(lex(left_body, 0), lex_binder(left_body));
            paren(
                format!("case {} of inl {left} => {lb} | inr {right} => {}", lex(scrut, 0), lex(right_body, 0)),
                lvl > 0,
            )
        }
        LocalExpr::Pair(a, b) => format!("({}, {})", lex(a, 0), lex(b, 0)),
        LocalExpr::Fst(a) => paren(format!("fst {}", lex(a, 2)), lvl > 1),
        LocalExpr::Snd(a) => paren(format!("snd {}", lex(a, 2)), lvl > 1),
        LocalExpr::Send(a) => paren(format!("send {}", atom(a)), lvl > 1),
        LocalExpr::Recv(a) => paren(format!("recv {}", atom(a)), lvl > 1),
        LocalExpr::RoleSub(a, b) => format!("sub[{} := {}]", atom(a), atom(b)),
        LocalExpr::Offer { from, branches } => {
            let bs: Vec<String> = branches.iter().map(|(k, b)| format!("{k}: {}", lex(b, 0))).collect();
            format!("offer {} {{{}}}", atom(from), bs.join(", "))
        }
        LocalExpr::Choose { to, label, body } => {
            paren(format!("choose {} {label}; {}", atom(to), lex(body, 0)), lvl > 0)
        }
        LocalExpr::AmI { proc, then, els } => {
            paren(format!("ami {} then {} else {}", atom(proc), lex(then, 0), lex(els, 0)), lvl > 0)
        }
    }
}

/// Prints local definitions as `def f = M;` lines.
pub fn print_local_defs(defs: &BTreeMap<Name, LocalExpr>) -> String {
    let mut out = String::new();
    for (f, body) in defs {
        writeln!(out, "def {f} = {};", print_local(body)).unwrap();
    }
    out
}
