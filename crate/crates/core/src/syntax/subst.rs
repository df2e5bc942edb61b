//! Capture-avoiding substitution of types, terms and process names.

use super::{ftv, ftv_kind, Atom, Expr, Kind, ProcSet, Type};
use crate::name::{fresh, Name};
use std::collections::BTreeSet;

/// `rho[X := v]`. Elements that would become non-process types are dropped;
/// this never happens on well-kinded input.
fn subst_set(rho: &ProcSet, x: &str, v: &Type) -> ProcSet {
    rho.iter()
        .filter_map(|a| match a {
            Atom::Var(y) if &**y == x => Atom::of_type(v),
            other => Some(other.clone()),
        })
        .collect()
}

pub fn subst_kind(k: &Kind, x: &str, v: &Type) -> Kind {
    match k {
        Kind::Star | Kind::Proc => k.clone(),
        Kind::Arrow(a, b) => Kind::arrow(subst_kind(a, x, v), subst_kind(b, x, v)),
        Kind::Without(inner, rho) => Kind::without(subst_kind(inner, x, v), subst_set(rho, x, v)),
    }
}

struct TySub<'a> {
    x: &'a str,
    v: &'a Type,
    fv: BTreeSet<Name>,
}

impl TySub<'_> {
    fn ty(&self, t: &Type) -> Type {
        match t {
            Type::Var(y) if &**y == self.x => self.v.clone(),
            Type::Var(_) | Type::Proc(_) => t.clone(),
            Type::Base(b, l) => Type::base(*b, self.ty(l)),
            Type::Arrow(a, rho, b) => Type::arrow(self.ty(a), subst_set(rho, self.x, self.v), self.ty(b)),
            Type::Sum(a, b) => Type::sum(self.ty(a), self.ty(b)),
            Type::Prod(a, b) => Type::prod(self.ty(a), self.ty(b)),
            Type::App(a, b) => Type::app(self.ty(a), self.ty(b)),
            Type::Forall(y, k, body) => {
                let (y, body) = self.binder(y, body);
                Type::Forall(y, subst_kind(k, self.x, self.v), Box::new(body))
            }
            Type::Lam(y, k, body) => {
                let (y, body) = self.binder(y, body);
                Type::Lam(y, subst_kind(k, self.x, self.v), Box::new(body))
            }
        }
    }

    fn binder(&self, y: &Name, body: &Type) -> (Name, Type) {
        if &**y == self.x {
            return (y.clone(), body.clone());
        }
        if self.fv.contains(y) {
            let body_fv = ftv(body);
            let y2 = fresh(y, |s| {
                self.fv.contains(s) || body_fv.contains(s) || s == self.x
            });
            let renamed = rename_type_var(body, y, &y2);
            (y2, self.ty(&renamed))
        } else {
            (y.clone(), self.ty(body))
        }
    }
}

/// `t[X := v]`, capture-avoiding. `v` is normally a type value.
pub fn subst_type(t: &Type, x: &str, v: &Type) -> Type {
    let mut fv = ftv(v);
    fv.insert(Name::new(x));
    TySub { x, v, fv }.ty(t)
}

/// Renames free occurrences of type variable `from` to `to`.
pub fn rename_type_var(t: &Type, from: &str, to: &Name) -> Type {
    subst_type(t, from, &Type::Var(to.clone()))
}

fn proc_set(rho: &ProcSet, p: &str, q: &Name) -> ProcSet {
    rho.iter()
        .map(|a| match a {
            Atom::Proc(n) if &**n == p => Atom::Proc(q.clone()),
            other => other.clone(),
        })
        .collect()
}

pub fn subst_proc_kind(k: &Kind, p: &str, q: &Name) -> Kind {
    match k {
        Kind::Star | Kind::Proc => k.clone(),
        Kind::Arrow(a, b) => Kind::arrow(subst_proc_kind(a, p, q), subst_proc_kind(b, p, q)),
        Kind::Without(inner, rho) => Kind::without(subst_proc_kind(inner, p, q), proc_set(rho, p, q)),
    }
}

/// Role substitution `t[p := q]` on process names.
pub fn subst_proc_type(t: &Type, p: &str, q: &Name) -> Type {
    match t {
        Type::Proc(n) if &**n == p => Type::Proc(q.clone()),
        Type::Var(_) | Type::Proc(_) => t.clone(),
        Type::Base(b, l) => Type::base(*b, subst_proc_type(l, p, q)),
        Type::Arrow(a, rho, b) => Type::arrow(
            subst_proc_type(a, p, q),
            proc_set(rho, p, q),
            subst_proc_type(b, p, q),
        ),
        Type::Sum(a, b) => Type::sum(subst_proc_type(a, p, q), subst_proc_type(b, p, q)),
        Type::Prod(a, b) => Type::prod(subst_proc_type(a, p, q), subst_proc_type(b, p, q)),
        Type::App(a, b) => Type::app(subst_proc_type(a, p, q), subst_proc_type(b, p, q)),
        Type::Forall(y, k, b) => {
            Type::Forall(y.clone(), subst_proc_kind(k, p, q), Box::new(subst_proc_type(b, p, q)))
        }
        Type::Lam(y, k, b) => {
            Type::Lam(y.clone(), subst_proc_kind(k, p, q), Box::new(subst_proc_type(b, p, q)))
        }
    }
}

/// Role substitution `m[p := q]`, reaching every embedded type, kind and endpoint.
pub fn subst_proc_expr(m: &Expr, p: &str, q: &Name) -> Expr {
    let t = |t: &Type| subst_proc_type(t, p, q);
    let e = |m: &Expr| Box::new(subst_proc_expr(m, p, q));
    match m {
        Expr::Var(_) | Expr::Def(_) => m.clone(),
        Expr::Lit(l, at) => Expr::Lit(l.clone(), t(at)),
        Expr::Lam { var, ann, rho, body } => Expr::Lam {
            var: var.clone(),
            ann: t(ann),
            rho: rho.as_ref().map(|r| proc_set(r, p, q)),
            body: e(body),
        },
        Expr::TLam { var, kind, body } => Expr::TLam {
            var: var.clone(),
            kind: subst_proc_kind(kind, p, q),
            body: e(body),
        },
        Expr::App(a, b) => Expr::App(e(a), e(b)),
        Expr::TApp(a, ty) => Expr::TApp(e(a), t(ty)),
        Expr::Inl(ty, a) => Expr::Inl(t(ty), e(a)),
        Expr::Inr(ty, a) => Expr::Inr(t(ty), e(a)),
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
        Expr::Com { ty, from, to } => Expr::Com { ty: t(ty), from: t(from), to: t(to) },
        Expr::Select { from, to, label, body } => Expr::Select {
            from: t(from),
            to: t(to),
            label: label.clone(),
            body: e(body),
        },
    }
}

/// Free term variables.
pub fn fv_expr(m: &Expr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fv_into(m, &mut out);
    out
}

fn fv_into(m: &Expr, out: &mut BTreeSet<Name>) {
    match m {
        Expr::Var(x) => {
            out.insert(x.clone());
        }
        Expr::Def(_) | Expr::Lit(..) | Expr::Com { .. } => {}
        Expr::Lam { var, body, .. } => {
            let mut inner = fv_expr(body);
            inner.remove(var);
            out.extend(inner);
        }
        Expr::TLam { body, .. } | Expr::TApp(body, _) | Expr::Inl(_, body) | Expr::Inr(_, body) => {
            fv_into(body, out)
        }
        Expr::Fst(a) | Expr::Snd(a) | Expr::Select { body: a, .. } => fv_into(a, out),
        Expr::App(a, b) | Expr::Pair(a, b) => {
            fv_into(a, out);
            fv_into(b, out);
        }
        Expr::Case { scrut, left, left_body, right, right_body } => {
            fv_into(scrut, out);
            let mut l = fv_expr(left_body);
            l.remove(left);
            let mut r = fv_expr(right_body);
            r.remove(right);
            out.extend(l);
            out.extend(r);
        }
    }
}

/// Free type variables of a term, including those in annotations and endpoints.
pub fn ftv_expr(m: &Expr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    ftv_expr_into(m, &mut out);
    out
}

fn ftv_expr_into(m: &Expr, out: &mut BTreeSet<Name>) {
    match m {
        Expr::Var(_) | Expr::Def(_) => {}
        Expr::Lit(_, at) => out.extend(ftv(at)),
        Expr::Lam { ann, rho, body, .. } => {
            out.extend(ftv(ann));
            if let Some(r) = rho {
                out.extend(r.var_names().cloned());
            }
            ftv_expr_into(body, out);
        }
        Expr::TLam { var, kind, body } => {
            out.extend(ftv_kind(kind));
            let mut inner = ftv_expr(body);
            inner.remove(var);
            out.extend(inner);
        }
        Expr::TApp(a, t) | Expr::Inl(t, a) | Expr::Inr(t, a) => {
            out.extend(ftv(t));
            ftv_expr_into(a, out);
        }
        Expr::App(a, b) | Expr::Pair(a, b) => {
            ftv_expr_into(a, out);
            ftv_expr_into(b, out);
        }
        Expr::Fst(a) | Expr::Snd(a) => ftv_expr_into(a, out),
        Expr::Case { scrut, left_body, right_body, .. } => {
            ftv_expr_into(scrut, out);
            ftv_expr_into(left_body, out);
            ftv_expr_into(right_body, out);
        }
        Expr::Com { ty, from, to } => {
            out.extend(ftv(ty));
            out.extend(ftv(from));
            out.extend(ftv(to));
        }
        Expr::Select { from, to, body, .. } => {
            out.extend(ftv(from));
            out.extend(ftv(to));
            ftv_expr_into(body, out);
        }
    }
}

/// Every process name occurring syntactically in a term.
pub fn procs_in_expr(m: &Expr) -> BTreeSet<Name> {
    fn ty(t: &Type, out: &mut BTreeSet<Name>) {
        match t {
            Type::Proc(p) => {
                out.insert(p.clone());
            }
            Type::Var(_) => {}
            Type::Base(_, l) => ty(l, out),
            Type::Arrow(a, rho, b) => {
                ty(a, out);
                out.extend(rho.proc_names().cloned());
                ty(b, out);
            }
            Type::Sum(a, b) | Type::Prod(a, b) | Type::App(a, b) => {
                ty(a, out);
                ty(b, out);
            }
            Type::Forall(_, k, b) | Type::Lam(_, k, b) => {
                kind(k, out);
                ty(b, out);
            }
        }
    }
    fn kind(k: &Kind, out: &mut BTreeSet<Name>) {
        match k {
            Kind::Star | Kind::Proc => {}
            Kind::Arrow(a, b) => {
                kind(a, out);
                kind(b, out);
            }
            Kind::Without(k, rho) => {
                kind(k, out);
                out.extend(rho.proc_names().cloned());
            }
        }
    }
    fn go(m: &Expr, out: &mut BTreeSet<Name>) {
        match m {
            Expr::Var(_) | Expr::Def(_) => {}
            Expr::Lit(_, at) => ty(at, out),
            Expr::Lam { ann, rho, body, .. } => {
                ty(ann, out);
                if let Some(r) = rho {
                    out.extend(r.proc_names().cloned());
                }
                go(body, out);
            }
            Expr::TLam { kind: k, body, .. } => {
                kind(k, out);
                go(body, out);
            }
            Expr::TApp(a, t) | Expr::Inl(t, a) | Expr::Inr(t, a) => {
                ty(t, out);
                go(a, out);
            }
            Expr::App(a, b) | Expr::Pair(a, b) => {
                go(a, out);
                go(b, out);
            }
            Expr::Fst(a) | Expr::Snd(a) => go(a, out),
            Expr::Case { scrut, left_body, right_body, .. } => {
                go(scrut, out);
                go(left_body, out);
                go(right_body, out);
            }
            Expr::Com { ty: t, from, to } => {
                ty(t, out);
                ty(from, out);
                ty(to, out);
            }
            Expr::Select { from, to, body, .. } => {
                ty(from, out);
                ty(to, out);
                go(body, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(m, &mut out);
    out
}

struct ExprSub<'a> {
    x: &'a str,
    v: &'a Expr,
    fv: BTreeSet<Name>,
    ftv: BTreeSet<Name>,
}

impl ExprSub<'_> {
    fn go(&self, m: &Expr) -> Expr {
        let e = |m: &Expr| Box::new(self.go(m));
        match m {
            Expr::Var(y) if &**y == self.x => self.v.clone(),
            Expr::Var(_) | Expr::Def(_) | Expr::Lit(..) | Expr::Com { .. } => m.clone(),
            Expr::Lam { var, ann, rho, body } => {
                let (var, body) = self.binder(var, body);
                Expr::Lam { var, ann: ann.clone(), rho: rho.clone(), body: Box::new(body) }
            }
            Expr::TLam { var, kind, body } => {
                if self.ftv.contains(var) {
                    let avoid = ftv_expr(body);
                    let y = fresh(var, |s| self.ftv.contains(s) || avoid.contains(s));
                    let body = subst_type_in_expr(body, var, &Type::Var(y.clone()));
                    Expr::TLam { var: y, kind: kind.clone(), body: e(&body) }
                } else {
                    Expr::TLam { var: var.clone(), kind: kind.clone(), body: e(body) }
                }
            }
            Expr::App(a, b) => Expr::App(e(a), e(b)),
            Expr::TApp(a, t) => Expr::TApp(e(a), t.clone()),
            Expr::Inl(t, a) => Expr::Inl(t.clone(), e(a)),
            Expr::Inr(t, a) => Expr::Inr(t.clone(), e(a)),
            Expr::Case { scrut, left, left_body, right, right_body } => {
                let (left, lb) = self.binder(left, left_body);
                let (right, rb) = self.binder(right, right_body);
                Expr::Case {
                    scrut: e(scrut),
                    left,
                    left_body: Box::new(lb),
                    right,
                    right_body: Box::new(rb),
                }
            }
            Expr::Pair(a, b) => Expr::Pair(e(a), e(b)),
            Expr::Fst(a) => Expr::Fst(e(a)),
            Expr::Snd(a) => Expr::Snd(e(a)),
            Expr::Select { from, to, label, body } => Expr::Select {
                from: from.clone(),
                to: to.clone(),
                label: label.clone(),
                body: e(body),
            },
        }
    }

    fn binder(&self, y: &Name, body: &Expr) -> (Name, Expr) {
        if &**y == self.x {
            return (y.clone(), body.clone());
        }
        if self.fv.contains(y) {
            let avoid = fv_expr(body);
            let y2 = fresh(y, |s| self.fv.contains(s) || avoid.contains(s) || s == self.x);
            let renamed = subst_expr(body, y, &Expr::Var(y2.clone()));
            (y2, self.go(&renamed))
        } else {
            (y.clone(), self.go(body))
        }
    }
}

/// `m[x := v]`, capture-avoiding for both term and type binders.
pub fn subst_expr(m: &Expr, x: &str, v: &Expr) -> Expr {
    ExprSub { x, v, fv: fv_expr(v), ftv: ftv_expr(v) }.go(m)
}

/// `m[X := v]` on every embedded type.
pub fn subst_type_in_expr(m: &Expr, x: &str, v: &Type) -> Expr {
    let vfv = ftv(v);
    subst_ty_expr(m, x, v, &vfv)
}

fn subst_ty_expr(m: &Expr, x: &str, v: &Type, vfv: &BTreeSet<Name>) -> Expr {
    let t = |t: &Type| subst_type(t, x, v);
    let e = |m: &Expr| Box::new(subst_ty_expr(m, x, v, vfv));
    match m {
        Expr::Var(_) | Expr::Def(_) => m.clone(),
        Expr::Lit(l, at) => Expr::Lit(l.clone(), t(at)),
        Expr::Lam { var, ann, rho, body } => Expr::Lam {
            var: var.clone(),
            ann: t(ann),
            rho: rho.as_ref().map(|r| subst_set(r, x, v)),
            body: e(body),
        },
        Expr::TLam { var, kind, body } => {
            let kind = subst_kind(kind, x, v);
            if &**var == x {
                Expr::TLam { var: var.clone(), kind, body: body.clone() }
            } else if vfv.contains(var) {
                let avoid = ftv_expr(body);
                let y = fresh(var, |s| vfv.contains(s) || avoid.contains(s) || s == x);
                let renamed = subst_type_in_expr(body, var, &Type::Var(y.clone()));
                Expr::TLam { var: y, kind, body: e(&renamed) }
            } else {
                Expr::TLam { var: var.clone(), kind, body: e(body) }
            }
        }
        Expr::App(a, b) => Expr::App(e(a), e(b)),
        Expr::TApp(a, ty) => Expr::TApp(e(a), t(ty)),
        Expr::Inl(ty, a) => Expr::Inl(t(ty), e(a)),
        Expr::Inr(ty, a) => Expr::Inr(t(ty), e(a)),
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
        Expr::Com { ty, from, to } => Expr::Com { ty: t(ty), from: t(from), to: t(to) },
        Expr::Select { from, to, label, body } => Expr::Select {
            from: t(from),
            to: t(to),
            label: label.clone(),
            body: e(body),
        },
    }
}
