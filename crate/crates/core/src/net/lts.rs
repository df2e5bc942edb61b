//! Labelled transitions of local programs and of networks.

use super::syntax::*;
use crate::name::Name;
use crate::syntax::Atom;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Placeholder process in projected definitions; replaced by the unfolding process.
pub const DEF_PROC: &str = "$d";

/// Stands for the value a communication delivers; filled in by the network.
const HOLE: &str = "$hole";

/// Local definitions, already projected at [`DEF_PROC`].
pub type LocalDefs = BTreeMap<Name, LocalExpr>;

/// A network: one local program per process.
pub type Network = BTreeMap<Name, LocalExpr>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LocalLabel {
    Tau,
    /// Only enabled at the process itself.
    Iam,
    /// Sends `value`; the successor holds a hole for the reply.
    Send { to: Name, value: LocalExpr },
    /// Offers `value` back; the successor holds a hole for the received value.
    Recv { from: Name, value: LocalExpr },
    Choose { to: Name, label: Name },
    Offer { from: Name, label: Name },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum LocalRule {
    Def,
    Bot,
    Bott,
    Sub,
    AmIThen,
    AmIElse,
    Choose,
    Offer,
    Send,
    Recv,
    AbsApp,
    TAbsApp,
    CaseL,
    CaseR,
    Proj1,
    Proj2,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalStep {
    pub label: LocalLabel,
    pub rule: LocalRule,
    pub next: LocalExpr,
}

/// `t` reduced under `≡_at`: beta plus resolution of closed `AmI` tests.
pub fn normalize_ltype_at(t: &LocalType, at: &Name) -> LocalType {
    let mut fuel = 10_000usize;
    norm_lt(t, at, &mut fuel)
}

pub fn ltype_equiv_at(a: &LocalType, b: &LocalType, at: &Name) -> bool {
    alpha_eq_ltype(&normalize_ltype_at(a, at), &normalize_ltype_at(b, at))
}

fn norm_lt(t: &LocalType, at: &Name, fuel: &mut usize) -> LocalType {
    if *fuel == 0 {
        return t.clone();
    }
    *fuel -= 1;
    let n = |t: &LocalType, fuel: &mut usize| Box::new(norm_lt(t, at, fuel));
    match t {
        LocalType::Var(_) | LocalType::Proc(_) | LocalType::Base(_) | LocalType::Bot => t.clone(),
        LocalType::Arrow(a, b) => LocalType::Arrow(n(a, fuel), n(b, fuel)),
        LocalType::Sum(a, b) => LocalType::Sum(n(a, fuel), n(b, fuel)),
        LocalType::Prod(a, b) => LocalType::Prod(n(a, fuel), n(b, fuel)),
        LocalType::Forall(x, b) => LocalType::Forall(x.clone(), n(b, fuel)),
        LocalType::Lam(x, b) => LocalType::Lam(x.clone(), n(b, fuel)),
        LocalType::App(f, a) => {
            let f = norm_lt(f, at, fuel);
            let a = norm_lt(a, at, fuel);
            match f {
                LocalType::Lam(x, b) | LocalType::Forall(x, b) => norm_lt(&subst_ltype(&b, &x, &a), at, fuel),
                f => LocalType::app(f, a),
            }
        }
        LocalType::AmI(Atom::Proc(q), t1, t2) => norm_lt(if q == at { t1 } else { t2 }, at, fuel),
        LocalType::AmI(a, t1, t2) => LocalType::AmI(a.clone(), n(t1, fuel), n(t2, fuel)),
    }
}

/// Every transition of `l` when run by process `at`.
pub fn local_transitions(l: &LocalExpr, defs: &LocalDefs, at: &Name) -> Vec<LocalStep> {
    let mut out = Vec::new();
    Lts { defs, at }.go(l, &mut out);
    out
}

struct Lts<'a> {
    defs: &'a LocalDefs,
    at: &'a Name,
}

fn step(label: LocalLabel, rule: LocalRule, next: LocalExpr) -> LocalStep {
    LocalStep { label, rule, next }
}

fn tau(rule: LocalRule, next: LocalExpr) -> LocalStep {
    step(LocalLabel::Tau, rule, next)
}

impl Lts<'_> {
    /// Steps of `sub`, each successor placed back into its context.
    fn within(&self, sub: &LocalExpr, out: &mut Vec<LocalStep>, rebuild: impl Fn(LocalExpr) -> LocalExpr) {
        let mut inner = Vec::new();
        self.go(sub, &mut inner);
        out.extend(inner.into_iter().map(|s| LocalStep { next: rebuild(s.next), ..s }));
    }

    fn go(&self, l: &LocalExpr, out: &mut Vec<LocalStep>) {
        match l {
            LocalExpr::Def(f) => {
                if let Some(body) = self.defs.get(f) {
                    out.push(tau(LocalRule::Def, subst_proc_local(body, DEF_PROC, self.at)));
                }
            }
            LocalExpr::App(f, a) => {
                self.within(f, out, |f2| LocalExpr::App(Box::new(f2), a.clone()));
                if is_local_value(f) {
                    self.within(a, out, |a2| LocalExpr::App(f.clone(), Box::new(a2)));
                }
                if is_local_value(f) && is_local_value(a) {
                    self.app_value(f, a, out);
                }
            }
            LocalExpr::TApp(f, t) => {
                self.within(f, out, |f2| LocalExpr::TApp(Box::new(f2), t.clone()));
                match &**f {
                    LocalExpr::TLam { var, body } => {
                        let v = normalize_ltype_at(t, self.at);
                        out.push(step(LocalLabel::Iam, LocalRule::TAbsApp, subst_ltype_in_local(body, var, &v)));
                    }
                    LocalExpr::Bot if t.is_bot() => out.push(tau(LocalRule::Bott, LocalExpr::Bot)),
                    _ => {}
                }
            }
            LocalExpr::AmI { proc: Atom::Proc(q), then, els } => {
                if q == self.at {
                    out.push(step(LocalLabel::Iam, LocalRule::AmIThen, (**then).clone()));
                } else {
                    out.push(step(LocalLabel::Iam, LocalRule::AmIElse, (**els).clone()));
                }
            }
            LocalExpr::Choose { to: Atom::Proc(q), label, body } => out.push(step(
                LocalLabel::Choose { to: q.clone(), label: label.clone() },
                LocalRule::Choose,
                (**body).clone(),
            )),
            LocalExpr::Offer { from: Atom::Proc(q), branches } => {
                for (label, body) in branches {
                    out.push(step(
                        LocalLabel::Offer { from: q.clone(), label: label.clone() },
                        LocalRule::Offer,
                        body.clone(),
                    ));
                }
            }
            LocalExpr::Inl(t, v) => self.within(v, out, |v2| LocalExpr::Inl(t.clone(), Box::new(v2))),
            LocalExpr::Inr(t, v) => self.within(v, out, |v2| LocalExpr::Inr(t.clone(), Box::new(v2))),
            LocalExpr::Pair(a, b) => {
                self.within(a, out, |a2| LocalExpr::Pair(Box::new(a2), b.clone()));
                self.within(b, out, |b2| LocalExpr::Pair(a.clone(), Box::new(b2)));
            }
            LocalExpr::Fst(p) | LocalExpr::Snd(p) => {
                let first = matches!(l, LocalExpr::Fst(_));
                self.within(p, out, |p2| if first { LocalExpr::Fst(Box::new(p2)) } else { LocalExpr::Snd(Box::new(p2)) });
                if let LocalExpr::Pair(a, b) = &**p {
                    if is_local_value(a) && is_local_value(b) {
                        out.push(if first {
                            tau(LocalRule::Proj1, (**a).clone())
                        } else {
                            tau(LocalRule::Proj2, (**b).clone())
                        });
                    }
                }
            }
            LocalExpr::Case { scrut, left, left_body, right, right_body } => {
                self.within(scrut, out, |s2| LocalExpr::Case {
                    scrut: Box::new(s2),
                    left: left.clone(),
                    left_body: left_body.clone(),
                    right: right.clone(),
                    right_body: right_body.clone(),
                });
                match &**scrut {
                    LocalExpr::Inl(_, v) if is_local_value(v) => {
                        out.push(tau(LocalRule::CaseL, subst_local(left_body, left, v)))
                    }
                    LocalExpr::Inr(_, v) if is_local_value(v) => {
                        out.push(tau(LocalRule::CaseR, subst_local(right_body, right, v)))
                    }
                    _ => {}
                }
            }
            LocalExpr::Var(_)
            | LocalExpr::Lit(_)
            | LocalExpr::Bot
            | LocalExpr::Lam { .. }
            | LocalExpr::TLam { .. }
            | LocalExpr::Send(_)
            | LocalExpr::Recv(_)
            | LocalExpr::RoleSub(..)
            | LocalExpr::AmI { .. }
            | LocalExpr::Choose { .. }
            | LocalExpr::Offer { .. } => {}
        }
    }

    fn app_value(&self, f: &LocalExpr, a: &LocalExpr, out: &mut Vec<LocalStep>) {
        let hole = LocalExpr::Var(Name::new(HOLE));
        match f {
            LocalExpr::Lam { var, body, .. } => out.push(tau(LocalRule::AbsApp, subst_local(body, var, a))),
            LocalExpr::Bot if a.is_bot() => out.push(tau(LocalRule::Bot, LocalExpr::Bot)),
            LocalExpr::RoleSub(Atom::Proc(p), Atom::Proc(q)) => out.push(tau(LocalRule::Sub, subst_proc_local(a, p, q))),
            LocalExpr::Send(Atom::Proc(p)) => out.push(step(
                LocalLabel::Send { to: p.clone(), value: a.clone() },
                LocalRule::Send,
                hole,
            )),
            LocalExpr::Recv(Atom::Proc(p)) => out.push(step(
                LocalLabel::Recv { from: p.clone(), value: a.clone() },
                LocalRule::Recv,
                hole,
            )),
            _ => {}
        }
    }
}

/// Network-level labels: an internal step of one process, or an interaction of two.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum NetLabel {
    Tau(Name),
    Com { from: Name, to: Name },
    Sel { from: Name, to: Name, label: Name },
}

impl NetLabel {
    pub fn procs(&self) -> Vec<&Name> {
        match self {
            NetLabel::Tau(p) => vec![p],
            NetLabel::Com { from, to } | NetLabel::Sel { from, to, .. } => vec![from, to],
        }
    }
}

impl fmt::Display for NetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetLabel::Tau(p) => write!(f, "tau[{p}]"),
            NetLabel::Com { from, to } => write!(f, "com[{from} -> {to}]"),
            NetLabel::Sel { from, to, label } => write!(f, "sel[{from} -> {to}: {label}]"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NetStep {
    pub label: NetLabel,
    /// Local rules fired, one per participating process.
    pub rules: Vec<LocalRule>,
    pub next: Network,
}

fn fill(l: &LocalExpr, v: &LocalExpr) -> LocalExpr {
    subst_local(l, HOLE, v)
}

/// Every transition of the network.
pub fn net_transitions(n: &Network, defs: &LocalDefs) -> Vec<NetStep> {
    let locals: BTreeMap<&Name, Vec<LocalStep>> =
        n.iter().map(|(p, l)| (p, local_transitions(l, defs, p))).collect();
    let mut out = Vec::new();
    for (p, steps) in &locals {
        for s in steps {
            let with = |next: LocalExpr| {
                let mut m = n.clone();
                m.insert((*p).clone(), next);
                m
            };
            match &s.label {
                LocalLabel::Tau | LocalLabel::Iam => out.push(NetStep {
                    label: NetLabel::Tau((*p).clone()),
                    rules: vec![s.rule],
                    next: with(s.next.clone()),
                }),
                LocalLabel::Send { to, value } => {
                    for r in locals.get(to).into_iter().flatten() {
                        if let LocalLabel::Recv { from, value: reply } = &r.label {
                            if from == *p {
                                let mut m = with(fill(&s.next, &subst_proc_local(reply, p, to)));
                                m.insert(to.clone(), fill(&r.next, &subst_proc_local(value, p, to)));
                                out.push(NetStep {
                                    label: NetLabel::Com { from: (*p).clone(), to: to.clone() },
                                    rules: vec![s.rule, r.rule],
                                    next: m,
                                });
                            }
                        }
                    }
                }
                LocalLabel::Choose { to, label } => {
                    for r in locals.get(to).into_iter().flatten() {
                        if r.label == (LocalLabel::Offer { from: (*p).clone(), label: label.clone() }) {
                            let mut m = with(s.next.clone());
                            m.insert(to.clone(), r.next.clone());
                            out.push(NetStep {
                                label: NetLabel::Sel { from: (*p).clone(), to: to.clone(), label: label.clone() },
                                rules: vec![s.rule, r.rule],
                                next: m,
                            });
                        }
                    }
                }
                LocalLabel::Recv { .. } | LocalLabel::Offer { .. } => {}
            }
        }
    }
    out
}

pub fn network_is_final(n: &Network) -> bool {
    n.values().all(is_local_value)
}
