//! Syntax of local programs run by individual processes.

use crate::name::{fresh, Name};
use crate::syntax::{Atom, BaseTy, Literal};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LocalType {
    Var(Name),
    Proc(Name),
    Base(BaseTy),
    Bot,
    Arrow(Box<LocalType>, Box<LocalType>),
    Sum(Box<LocalType>, Box<LocalType>),
    Prod(Box<LocalType>, Box<LocalType>),
    Forall(Name, Box<LocalType>),
    Lam(Name, Box<LocalType>),
    App(Box<LocalType>, Box<LocalType>),
    /// `AmI V then T1 else T2` at the type level.
    AmI(Atom, Box<LocalType>, Box<LocalType>),
}

impl LocalType {
    pub fn arrow(a: LocalType, b: LocalType) -> Self {
        LocalType::Arrow(Box::new(a), Box::new(b))
    }
    pub fn sum(a: LocalType, b: LocalType) -> Self {
        LocalType::Sum(Box::new(a), Box::new(b))
    }
    pub fn prod(a: LocalType, b: LocalType) -> Self {
        LocalType::Prod(Box::new(a), Box::new(b))
    }
    pub fn app(a: LocalType, b: LocalType) -> Self {
        LocalType::App(Box::new(a), Box::new(b))
    }
    pub fn is_bot(&self) -> bool {
        matches!(self, LocalType::Bot)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LocalExpr {
    Var(Name),
    Def(Name),
    Lit(Literal),
    Bot,
    Lam {
        var: Name,
        ann: LocalType,
        body: Box<LocalExpr>,
    },
    TLam {
        var: Name,
        body: Box<LocalExpr>,
    },
    App(Box<LocalExpr>, Box<LocalExpr>),
    TApp(Box<LocalExpr>, LocalType),
    Inl(LocalType, Box<LocalExpr>),
    Inr(LocalType, Box<LocalExpr>),
    Case {
        scrut: Box<LocalExpr>,
        left: Name,
        left_body: Box<LocalExpr>,
        right: Name,
        right_body: Box<LocalExpr>,
    },
    Pair(Box<LocalExpr>, Box<LocalExpr>),
    Fst(Box<LocalExpr>),
    Snd(Box<LocalExpr>),
    Send(Atom),
    Recv(Atom),
    Offer {
        from: Atom,
        branches: BTreeMap<Name, LocalExpr>,
    },
    Choose {
        to: Atom,
        label: Name,
        body: Box<LocalExpr>,
    },
    /// Role substitution function `(V1 := V2)`.
    RoleSub(Atom, Atom),
    AmI {
        proc: Atom,
        then: Box<LocalExpr>,
        els: Box<LocalExpr>,
    },
}

impl LocalExpr {
    pub fn app(a: LocalExpr, b: LocalExpr) -> Self {
        LocalExpr::App(Box::new(a), Box::new(b))
    }
    pub fn lam(x: &Name, ann: LocalType, body: LocalExpr) -> Self {
        LocalExpr::Lam { var: x.clone(), ann, body: Box::new(body) }
    }
    pub fn pair(a: LocalExpr, b: LocalExpr) -> Self {
        LocalExpr::Pair(Box::new(a), Box::new(b))
    }
    pub fn is_bot(&self) -> bool {
        matches!(self, LocalExpr::Bot)
    }
}

pub fn is_local_value(l: &LocalExpr) -> bool {
    match l {
        LocalExpr::Var(_)
        | LocalExpr::Lit(_)
        | LocalExpr::Bot
        | LocalExpr::Lam { .. }
        | LocalExpr::TLam { .. }
        | LocalExpr::Send(_)
        | LocalExpr::Recv(_)
        | LocalExpr::RoleSub(..) => true,
        LocalExpr::Inl(_, v) | LocalExpr::Inr(_, v) => is_local_value(v),
        LocalExpr::Pair(a, b) => is_local_value(a) && is_local_value(b),
        _ => false,
    }
}

fn atom_subst(a: &Atom, x: &str, v: &LocalType) -> Atom {
    match (a, v) {
        (Atom::Var(y), LocalType::Proc(p)) if &**y == x => Atom::Proc(p.clone()),
        (Atom::Var(y), LocalType::Var(z)) if &**y == x => Atom::Var(z.clone()),
        _ => a.clone(),
    }
}

pub fn ftv_ltype(t: &LocalType) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go(t: &LocalType, out: &mut BTreeSet<Name>) {
        match t {
            LocalType::Var(x) => {
                out.insert(x.clone());
            }
            LocalType::Proc(_) | LocalType::Base(_) | LocalType::Bot => {}
            LocalType::Arrow(a, b) | LocalType::Sum(a, b) | LocalType::Prod(a, b) | LocalType::App(a, b) => {
                go(a, out);
                go(b, out);
            }
            LocalType::Forall(x, b) | LocalType::Lam(x, b) => {
                let mut inner = BTreeSet::new();
                go(b, &mut inner);
                inner.remove(x);
                out.extend(inner);
            }
            LocalType::AmI(a, t1, t2) => {
                if let Atom::Var(x) = a {
                    out.insert(x.clone());
                }
                go(t1, out);
                go(t2, out);
            }
        }
    }
    go(t, &mut out);
    out
}

/// `t[X := v]`, capture-avoiding.
pub fn subst_ltype(t: &LocalType, x: &str, v: &LocalType) -> LocalType {
    let vfv = ftv_ltype(v);
    subst_ltype_with(t, x, v, &vfv)
}

fn subst_ltype_with(t: &LocalType, x: &str, v: &LocalType, vfv: &BTreeSet<Name>) -> LocalType {
    let s = |t: &LocalType| Box::new(subst_ltype_with(t, x, v, vfv));
    match t {
        LocalType::Var(y) if &**y == x => v.clone(),
        LocalType::Var(_) | LocalType::Proc(_) | LocalType::Base(_) | LocalType::Bot => t.clone(),
        LocalType::Arrow(a, b) => LocalType::Arrow(s(a), s(b)),
        LocalType::Sum(a, b) => LocalType::Sum(s(a), s(b)),
        LocalType::Prod(a, b) => LocalType::Prod(s(a), s(b)),
        LocalType::App(a, b) => LocalType::App(s(a), s(b)),
        LocalType::AmI(a, t1, t2) => LocalType::AmI(atom_subst(a, x, v), s(t1), s(t2)),
        LocalType::Forall(y, b) | LocalType::Lam(y, b) => {
            let (y, body) = if &**y == x {
                (y.clone(), (**b).clone())
            } else if vfv.contains(y) {
                let avoid = ftv_ltype(b);
                let y2 = fresh(y, |n| vfv.contains(n) || avoid.contains(n) || n == x);
                let renamed = subst_ltype(b, y, &LocalType::Var(y2.clone()));
                (y2, subst_ltype_with(&renamed, x, v, vfv))
            } else {
                (y.clone(), subst_ltype_with(b, x, v, vfv))
            };
            match t {
                LocalType::Forall(..) => LocalType::Forall(y, Box::new(body)),
                _ => LocalType::Lam(y, Box::new(body)),
            }
        }
    }
}

fn proc_atom(a: &Atom, p: &str, q: &Name) -> Atom {
    match a {
        Atom::Proc(n) if &**n == p => Atom::Proc(q.clone()),
        _ => a.clone(),
    }
}

pub fn subst_proc_ltype(t: &LocalType, p: &str, q: &Name) -> LocalType {
    let s = |t: &LocalType| Box::new(subst_proc_ltype(t, p, q));
    match t {
        LocalType::Proc(n) if &**n == p => LocalType::Proc(q.clone()),
        LocalType::Var(_) | LocalType::Proc(_) | LocalType::Base(_) | LocalType::Bot => t.clone(),
        LocalType::Arrow(a, b) => LocalType::Arrow(s(a), s(b)),
        LocalType::Sum(a, b) => LocalType::Sum(s(a), s(b)),
        LocalType::Prod(a, b) => LocalType::Prod(s(a), s(b)),
        LocalType::App(a, b) => LocalType::App(s(a), s(b)),
        LocalType::Forall(y, b) => LocalType::Forall(y.clone(), s(b)),
        LocalType::Lam(y, b) => LocalType::Lam(y.clone(), s(b)),
        LocalType::AmI(a, t1, t2) => LocalType::AmI(proc_atom(a, p, q), s(t1), s(t2)),
    }
}

/// Role substitution `l[p := q]`.
pub fn subst_proc_local(l: &LocalExpr, p: &str, q: &Name) -> LocalExpr {
    let e = |l: &LocalExpr| Box::new(subst_proc_local(l, p, q));
    let t = |t: &LocalType| subst_proc_ltype(t, p, q);
    let a = |x: &Atom| proc_atom(x, p, q);
    match l {
        LocalExpr::Var(_) | LocalExpr::Def(_) | LocalExpr::Lit(_) | LocalExpr::Bot => l.clone(),
        LocalExpr::Lam { var, ann, body } => LocalExpr::Lam { var: var.clone(), ann: t(ann), body: e(body) },
        LocalExpr::TLam { var, body } => LocalExpr::TLam { var: var.clone(), body: e(body) },
        LocalExpr::App(x, y) => LocalExpr::App(e(x), e(y)),
        LocalExpr::TApp(x, ty) => LocalExpr::TApp(e(x), t(ty)),
        LocalExpr::Inl(ty, x) => LocalExpr::Inl(t(ty), e(x)),
        LocalExpr::Inr(ty, x) => LocalExpr::Inr(t(ty), e(x)),
        LocalExpr::Case { scrut, left, left_body, right, right_body } => LocalExpr::Case {
            scrut: e(scrut),
            left: left.clone(),
            left_body: e(left_body),
            right: right.clone(),
            right_body: e(right_body),
        },
        LocalExpr::Pair(x, y) => LocalExpr::Pair(e(x), e(y)),
        LocalExpr::Fst(x) => LocalExpr::Fst(e(x)),
        LocalExpr::Snd(x) => LocalExpr::Snd(e(x)),
        LocalExpr::Send(x) => LocalExpr::Send(a(x)),
        LocalExpr::Recv(x) => LocalExpr::Recv(a(x)),
        LocalExpr::Offer { from, branches } => LocalExpr::Offer {
            from: a(from),
            branches: branches.iter().map(|(k, v)| (k.clone(), subst_proc_local(v, p, q))).collect(),
        },
        LocalExpr::Choose { to, label, body } => LocalExpr::Choose { to: a(to), label: label.clone(), body: e(body) },
        LocalExpr::RoleSub(x, y) => LocalExpr::RoleSub(a(x), a(y)),
        LocalExpr::AmI { proc, then, els } => LocalExpr::AmI { proc: a(proc), then: e(then), els: e(els) },
    }
}

pub fn fv_local(l: &LocalExpr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go(l: &LocalExpr, out: &mut BTreeSet<Name>) {
        match l {
            LocalExpr::Var(x) => {
                out.insert(x.clone());
            }
            LocalExpr::Def(_)
            | LocalExpr::Lit(_)
            | LocalExpr::Bot
            | LocalExpr::Send(_)
            | LocalExpr::Recv(_)
            | LocalExpr::RoleSub(..) => {}
            LocalExpr::Lam { var, body, .. } => {
                let mut inner = BTreeSet::new();
                go(body, &mut inner);
                inner.remove(var);
                out.extend(inner);
            }
            LocalExpr::TLam { body, .. }
            | LocalExpr::TApp(body, _)
            | LocalExpr::Inl(_, body)
            | LocalExpr::Inr(_, body)
            | LocalExpr::Fst(body)
            | LocalExpr::Snd(body)
            | LocalExpr::Choose { body, .. } => go(body, out),
            LocalExpr::App(a, b) | LocalExpr::Pair(a, b) => {
                go(a, out);
                go(b, out);
            }
            LocalExpr::AmI { then, els, .. } => {
                go(then, out);
                go(els, out);
            }
            LocalExpr::Case { scrut, left, left_body, right, right_body } => {
                go(scrut, out);
                let mut l = BTreeSet::new();
                go(left_body, &mut l);
                l.remove(left);
                let mut r = BTreeSet::new();
                go(right_body, &mut r);
                r.remove(right);
                out.extend(l);
                out.extend(r);
            }
            LocalExpr::Offer { branches, .. } => {
                for b in branches.values() {
                    go(b, out);
                }
            }
        }
    }
    go(l, &mut out);
    out
}

pub fn ftv_local(l: &LocalExpr) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn atom(a: &Atom, out: &mut BTreeSet<Name>) {
        if let Atom::Var(x) = a {
            out.insert(x.clone());
        }
    }
    fn go(l: &LocalExpr, out: &mut BTreeSet<Name>) {
        match l {
            LocalExpr::Var(_) | LocalExpr::Def(_) | LocalExpr::Lit(_) | LocalExpr::Bot => {}
            LocalExpr::Lam { ann, body, .. } => {
                out.extend(ftv_ltype(ann));
                go(body, out);
            }
            LocalExpr::TLam { var, body } => {
                let mut inner = BTreeSet::new();
                go(body, &mut inner);
                inner.remove(var);
                out.extend(inner);
            }
            LocalExpr::TApp(x, t) | LocalExpr::Inl(t, x) | LocalExpr::Inr(t, x) => {
                out.extend(ftv_ltype(t));
                go(x, out);
            }
            LocalExpr::Fst(x) | LocalExpr::Snd(x) => go(x, out),
            LocalExpr::App(a, b) | LocalExpr::Pair(a, b) => {
                go(a, out);
                go(b, out);
            }
            LocalExpr::Case { scrut, left_body, right_body, .. } => {
                go(scrut, out);
                go(left_body, out);
                go(right_body, out);
            }
            LocalExpr::Send(a) | LocalExpr::Recv(a) => atom(a, out),
            LocalExpr::Offer { from, branches } => {
                atom(from, out);
                for b in branches.values() {
                    go(b, out);
                }
            }
            LocalExpr::Choose { to, body, .. } => {
                atom(to, out);
                go(body, out);
            }
            LocalExpr::RoleSub(a, b) => {
                atom(a, out);
                atom(b, out);
            }
            LocalExpr::AmI { proc, then, els } => {
                atom(proc, out);
                go(then, out);
                go(els, out);
            }
        }
    }
    go(l, &mut out);
    out
}

/// `l[x := v]` for a term variable, capture-avoiding.
pub fn subst_local(l: &LocalExpr, x: &str, v: &LocalExpr) -> LocalExpr {
    let vfv = fv_local(v);
    let vftv = ftv_local(v);
    LSub { x, v, vfv: &vfv, vftv: &vftv }.go(l)
}

struct LSub<'a> {
    x: &'a str,
    v: &'a LocalExpr,
    vfv: &'a BTreeSet<Name>,
    vftv: &'a BTreeSet<Name>,
}

impl LSub<'_> {
    fn binder(&self, y: &Name, body: &LocalExpr) -> (Name, LocalExpr) {
        if &**y == self.x {
            (y.clone(), body.clone())
        } else if self.vfv.contains(y) {
            let avoid = fv_local(body);
            let y2 = fresh(y, |n| self.vfv.contains(n) || avoid.contains(n) || n == self.x);
            let renamed = subst_local(body, y, &LocalExpr::Var(y2.clone()));
            (y2, self.go(&renamed))
        } else {
            (y.clone(), self.go(body))
        }
    }

    fn go(&self, l: &LocalExpr) -> LocalExpr {
        let e = |l: &LocalExpr| Box::new(self.go(l));
        match l {
            LocalExpr::Var(y) if &**y == self.x => self.v.clone(),
            LocalExpr::Var(_)
            | LocalExpr::Def(_)
            | LocalExpr::Lit(_)
            | LocalExpr::Bot
            | LocalExpr::Send(_)
            | LocalExpr::Recv(_)
            | LocalExpr::RoleSub(..) => l.clone(),
            LocalExpr::Lam { var, ann, body } => {
                let (var, body) = self.binder(var, body);
                LocalExpr::Lam { var, ann: ann.clone(), body: Box::new(body) }
            }
            LocalExpr::TLam { var, body } => {
                if self.vftv.contains(var) {
                    let avoid = ftv_local(body);
                    let y = fresh(var, |n| self.vftv.contains(n) || avoid.contains(n));
                    let renamed = subst_ltype_in_local(body, var, &LocalType::Var(y.clone()));
                    LocalExpr::TLam { var: y, body: e(&renamed) }
                } else {
                    LocalExpr::TLam { var: var.clone(), body: e(body) }
                }
            }
            LocalExpr::App(a, b) => LocalExpr::App(e(a), e(b)),
            LocalExpr::TApp(a, t) => LocalExpr::TApp(e(a), t.clone()),
            LocalExpr::Inl(t, a) => LocalExpr::Inl(t.clone(), e(a)),
            LocalExpr::Inr(t, a) => LocalExpr::Inr(t.clone(), e(a)),
            LocalExpr::Case { scrut, left, left_body, right, right_body } => {
                let (left, lb) = self.binder(left, left_body);
                let (right, rb) = self.binder(right, right_body);
                LocalExpr::Case {
                    scrut: e(scrut),
                    left,
                    left_body: Box::new(lb),
                    right,
                    right_body: Box::new(rb),
                }
            }
            LocalExpr::Pair(a, b) => LocalExpr::Pair(e(a), e(b)),
            LocalExpr::Fst(a) => LocalExpr::Fst(e(a)),
            LocalExpr::Snd(a) => LocalExpr::Snd(e(a)),
            LocalExpr::Offer { from, branches } => LocalExpr::Offer {
                from: from.clone(),
                branches: branches.iter().map(|(k, b)| (k.clone(), self.go(b))).collect(),
            },
            LocalExpr::Choose { to, label, body } => {
                LocalExpr::Choose { to: to.clone(), label: label.clone(), body: e(body) }
            }
            LocalExpr::AmI { proc, then, els } => {
                LocalExpr::AmI { proc: proc.clone(), then: e(then), els: e(els) }
            }
        }
    }
}

/// `l[X := v]` on every embedded local type and endpoint.
pub fn subst_ltype_in_local(l: &LocalExpr, x: &str, v: &LocalType) -> LocalExpr {
    let vfv = ftv_ltype(v);
    subst_ltl(l, x, v, &vfv)
}

fn subst_ltl(l: &LocalExpr, x: &str, v: &LocalType, vfv: &BTreeSet<Name>) -> LocalExpr {
    let e = |l: &LocalExpr| Box::new(subst_ltl(l, x, v, vfv));
    let t = |t: &LocalType| subst_ltype(t, x, v);
    let a = |y: &Atom| atom_subst(y, x, v);
    match l {
        LocalExpr::Var(_) | LocalExpr::Def(_) | LocalExpr::Lit(_) | LocalExpr::Bot => l.clone(),
        LocalExpr::Lam { var, ann, body } => LocalExpr::Lam { var: var.clone(), ann: t(ann), body: e(body) },
        LocalExpr::TLam { var, body } => {
            if &**var == x {
                l.clone()
            } else if vfv.contains(var) {
                let avoid = ftv_local(body);
                let y = fresh(var, |n| vfv.contains(n) || avoid.contains(n) || n == x);
                let renamed = subst_ltype_in_local(body, var, &LocalType::Var(y.clone()));
                LocalExpr::TLam { var: y, body: e(&renamed) }
            } else {
                LocalExpr::TLam { var: var.clone(), body: e(body) }
            }
        }
        LocalExpr::App(p, q) => LocalExpr::App(e(p), e(q)),
        LocalExpr::TApp(p, ty) => LocalExpr::TApp(e(p), t(ty)),
        LocalExpr::Inl(ty, p) => LocalExpr::Inl(t(ty), e(p)),
        LocalExpr::Inr(ty, p) => LocalExpr::Inr(t(ty), e(p)),
        LocalExpr::Case { scrut, left, left_body, right, right_body } => LocalExpr::Case {
            scrut: e(scrut),
            left: left.clone(),
            left_body: e(left_body),
            right: right.clone(),
            right_body: e(right_body),
        },
        LocalExpr::Pair(p, q) => LocalExpr::Pair(e(p), e(q)),
        LocalExpr::Fst(p) => LocalExpr::Fst(e(p)),
        LocalExpr::Snd(p) => LocalExpr::Snd(e(p)),
        LocalExpr::Send(y) => LocalExpr::Send(a(y)),
        LocalExpr::Recv(y) => LocalExpr::Recv(a(y)),
        LocalExpr::Offer { from, branches } => LocalExpr::Offer {
            from: a(from),
            branches: branches.iter().map(|(k, b)| (k.clone(), subst_ltl(b, x, v, vfv))).collect(),
        },
        LocalExpr::Choose { to, label, body } => LocalExpr::Choose { to: a(to), label: label.clone(), body: e(body) },
        LocalExpr::RoleSub(p, q) => LocalExpr::RoleSub(a(p), a(q)),
        LocalExpr::AmI { proc, then, els } => LocalExpr::AmI { proc: a(proc), then: e(then), els: e(els) },
    }
}

#[derive(Default)]
struct Canon {
    next: usize,
    tys: Vec<(Name, Name)>,
    terms: Vec<(Name, Name)>,
}

fn look(env: &[(Name, Name)], x: &Name) -> Name {
    env.iter().rev().find(|(o, _)| o == x).map(|(_, c)| c.clone()).unwrap_or_else(|| x.clone())
}

impl Canon {
    fn fresh(&mut self) -> Name {
        let n = Name::from(format!("#{}", self.next));
        self.next += 1;
        n
    }

    fn atom(&self, a: &Atom) -> Atom {
        match a {
            Atom::Var(x) => Atom::Var(look(&self.tys, x)),
            p => p.clone(),
        }
    }

    fn ty(&mut self, t: &LocalType) -> LocalType {
        match t {
            LocalType::Var(x) => LocalType::Var(look(&self.tys, x)),
            LocalType::Proc(_) | LocalType::Base(_) | LocalType::Bot => t.clone(),
            LocalType::Arrow(a, b) => {
                let a = self.ty(a);
                LocalType::arrow(a, self.ty(b))
            }
            LocalType::Sum(a, b) => {
                let a = self.ty(a);
                LocalType::sum(a, self.ty(b))
            }
            LocalType::Prod(a, b) => {
                let a = self.ty(a);
                LocalType::prod(a, self.ty(b))
            }
            LocalType::App(a, b) => {
                let a = self.ty(a);
                LocalType::app(a, self.ty(b))
            }
            LocalType::AmI(a, t1, t2) => {
                let a = self.atom(a);
                let t1 = self.ty(t1);
                LocalType::AmI(a, Box::new(t1), Box::new(self.ty(t2)))
            }
            LocalType::Forall(x, b) | LocalType::Lam(x, b) => {
                let c = self.fresh();
                self.tys.push((x.clone(), c.clone()));
                let body = Box::new(self.ty(b));
                self.tys.pop();
                match t {
                    LocalType::Forall(..) => LocalType::Forall(c, body),
                    _ => LocalType::Lam(c, body),
                }
            }
        }
    }

    fn term_binder(&mut self, x: &Name, body: &LocalExpr) -> (Name, LocalExpr) {
        let c = self.fresh();
        self.terms.push((x.clone(), c.clone()));
        let body = self.expr(body);
        self.terms.pop();
        (c, body)
    }

    fn expr(&mut self, l: &LocalExpr) -> LocalExpr {
        match l {
            LocalExpr::Var(x) => LocalExpr::Var(look(&self.terms, x)),
            LocalExpr::Def(_) | LocalExpr::Lit(_) | LocalExpr::Bot => l.clone(),
            LocalExpr::Lam { var, ann, body } => {
                let ann = self.ty(ann);
                let (var, body) = self.term_binder(var, body);
                LocalExpr::Lam { var, ann, body: Box::new(body) }
            }
            LocalExpr::TLam { var, body } => {
                let c = self.fresh();
                self.tys.push((var.clone(), c.clone()));
                let body = self.expr(body);
                self.tys.pop();
                LocalExpr::TLam { var: c, body: Box::new(body) }
            }
            LocalExpr::App(a, b) => {
                let a = self.expr(a);
                LocalExpr::app(a, self.expr(b))
            }
            LocalExpr::TApp(a, t) => {
                let a = self.expr(a);
                LocalExpr::TApp(Box::new(a), self.ty(t))
            }
            LocalExpr::Inl(t, a) => {
                let t = self.ty(t);
                LocalExpr::Inl(t, Box::new(self.expr(a)))
            }
            LocalExpr::Inr(t, a) => {
                let t = self.ty(t);
                LocalExpr::Inr(t, Box::new(self.expr(a)))
            }
            LocalExpr::Case { scrut, left, left_body, right, right_body } => {
                let scrut = self.expr(scrut);
                let (left, lb) = self.term_binder(left, left_body);
                let (right, rb) = self.term_binder(right, right_body);
                LocalExpr::Case {
                    scrut: Box::new(scrut),
                    left,
                    left_body: Box::new(lb),
                    right,
                    right_body: Box::new(rb),
                }
            }
            LocalExpr::Pair(a, b) => {
                let a = self.expr(a);
                LocalExpr::pair(a, self.expr(b))
            }
            LocalExpr::Fst(a) => LocalExpr::Fst(Box::new(self.expr(a))),
            LocalExpr::Snd(a) => LocalExpr::Snd(Box::new(self.expr(a))),
            LocalExpr::Send(a) => LocalExpr::Send(self.atom(a)),
            LocalExpr::Recv(a) => LocalExpr::Recv(self.atom(a)),
            LocalExpr::RoleSub(a, b) => LocalExpr::RoleSub(self.atom(a), self.atom(b)),
            LocalExpr::Offer { from, branches } => {
                let from = self.atom(from);
                let branches = branches.iter().map(|(k, b)| (k.clone(), self.expr(b))).collect();
                LocalExpr::Offer { from, branches }
            }
            LocalExpr::Choose { to, label, body } => {
                let to = self.atom(to);
                LocalExpr::Choose { to, label: label.clone(), body: Box::new(self.expr(body)) }
            }
            LocalExpr::AmI { proc, then, els } => {
                let proc = self.atom(proc);
                let then = self.expr(then);
                LocalExpr::AmI { proc, then: Box::new(then), els: Box::new(self.expr(els)) }
            }
        }
    }
}

pub fn canon_local(l: &LocalExpr) -> LocalExpr {
    Canon::default().expr(l)
}

pub fn canon_ltype(t: &LocalType) -> LocalType {
    Canon::default().ty(t)
}

pub fn alpha_eq_local(a: &LocalExpr, b: &LocalExpr) -> bool {
    canon_local(a) == canon_local(b)
}

pub fn alpha_eq_ltype(a: &LocalType, b: &LocalType) -> bool {
    canon_ltype(a) == canon_ltype(b)
}
