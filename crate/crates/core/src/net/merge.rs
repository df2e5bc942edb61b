//! Merging of local programs and the induced ordering on networks.

use super::lts::{normalize_ltype_at, Network};
use super::syntax::*;
use crate::name::{fresh, Name};
use crate::syntax::Atom;
use std::collections::BTreeSet;

/// `a ⊔ b`: defined when the two programs agree up to the branches of offers.
pub fn merge(a: &LocalExpr, b: &LocalExpr) -> Option<LocalExpr> {
    use LocalExpr as L;
    let m = |x: &LocalExpr, y: &LocalExpr| merge(x, y).map(Box::new);
    let ty = |s: &LocalType, t: &LocalType| alpha_eq_ltype(s, t).then(|| s.clone());
    match (a, b) {
        (L::Var(_) | L::Def(_) | L::Lit(_) | L::Bot | L::Send(_) | L::Recv(_) | L::RoleSub(..), _) => {
            (a == b).then(|| a.clone())
        }
        (L::Lam { var: x, ann: s, body: m1 }, L::Lam { var: y, ann: t, body: m2 }) => {
            let ann = ty(s, t)?;
            let (z, m1, m2) = common_var(x, m1, y, m2);
            Some(L::Lam { var: z, ann, body: m(&m1, &m2)? })
        }
        (L::TLam { var: x, body: m1 }, L::TLam { var: y, body: m2 }) => {
            let (z, m1, m2) = if x == y {
                (x.clone(), (**m1).clone(), (**m2).clone())
            } else {
                let taken: BTreeSet<Name> = ftv_local(m1).into_iter().chain(ftv_local(m2)).collect();
                let z = fresh(x, |n| taken.contains(n));
                let v = LocalType::Var(z.clone());
                (z, subst_ltype_in_local(m1, x, &v), subst_ltype_in_local(m2, y, &v))
            };
            Some(L::TLam { var: z, body: m(&m1, &m2)? })
        }
        (L::App(f1, a1), L::App(f2, a2)) => Some(L::App(m(f1, f2)?, m(a1, a2)?)),
        (L::TApp(f1, s), L::TApp(f2, t)) => Some(L::TApp(m(f1, f2)?, ty(s, t)?)),
        (L::Inl(s, x), L::Inl(t, y)) => Some(L::Inl(ty(s, t)?, m(x, y)?)),
        (L::Inr(s, x), L::Inr(t, y)) => Some(L::Inr(ty(s, t)?, m(x, y)?)),
        (
            L::Case { scrut: s1, left: l1, left_body: lb1, right: r1, right_body: rb1 },
            L::Case { scrut: s2, left: l2, left_body: lb2, right: r2, right_body: rb2 },
        ) => {
            let (l, lb1, lb2) = common_var(l1, lb1, l2, lb2);
            let (r, rb1, rb2) = common_var(r1, rb1, r2, rb2);
            Some(L::Case {
                scrut: m(s1, s2)?,
                left: l,
                left_body: m(&lb1, &lb2)?,
                right: r,
                right_body: m(&rb1, &rb2)?,
            })
        }
        (L::Pair(a1, b1), L::Pair(a2, b2)) => Some(L::Pair(m(a1, a2)?, m(b1, b2)?)),
        (L::Fst(x), L::Fst(y)) => Some(L::Fst(m(x, y)?)),
        (L::Snd(x), L::Snd(y)) => Some(L::Snd(m(x, y)?)),
        (L::Offer { from: p, branches: bs1 }, L::Offer { from: q, branches: bs2 }) if p == q => {
            let mut out = bs1.clone();
            for (label, b2) in bs2 {
                let merged = match bs1.get(label) {
                    Some(b1) => merge(b1, b2)?,
                    None => b2.clone(),
                };
                out.insert(label.clone(), merged);
            }
            Some(L::Offer { from: p.clone(), branches: out })
        }
        (L::Choose { to: p, label: l1, body: b1 }, L::Choose { to: q, label: l2, body: b2 }) if p == q && l1 == l2 => {
            Some(L::Choose { to: p.clone(), label: l1.clone(), body: m(b1, b2)? })
        }
        (L::AmI { proc: p, then: t1, els: e1 }, L::AmI { proc: q, then: t2, els: e2 }) if p == q => {
            Some(L::AmI { proc: p.clone(), then: m(t1, t2)?, els: m(e1, e2)? })
        }
        _ => None,
    }
}

/// Renames the term binders `x` in `m1` and `y` in `m2` to one shared name.
fn common_var(x: &Name, m1: &LocalExpr, y: &Name, m2: &LocalExpr) -> (Name, LocalExpr, LocalExpr) {
    if x == y {
        return (x.clone(), m1.clone(), m2.clone());
    }
    let taken: BTreeSet<Name> = fv_local(m1).into_iter().chain(fv_local(m2)).collect();
    let z = fresh(x, |n| taken.contains(n));
    let v = LocalExpr::Var(z.clone());
    (z, subst_local(m1, x, &v), subst_local(m2, y, &v))
}

/// Merges a non-empty sequence left to right.
pub fn merge_all<'a>(items: impl IntoIterator<Item = &'a LocalExpr>) -> Option<LocalExpr> {
    let mut it = items.into_iter();
    let first = it.next()?.clone();
    it.try_fold(first, |acc, x| merge(&acc, x))
}

/// `a ⊒ b`: `a` offers at least the behaviour of `b`.
pub fn geq(a: &LocalExpr, b: &LocalExpr) -> bool {
    merge(a, b).is_some_and(|m| alpha_eq_local(&m, a))
}

/// Pointwise [`geq`]; a process missing from a network counts as `⊥`.
pub fn network_geq(n: &Network, m: &Network) -> bool {
    let bot = LocalExpr::Bot;
    n.keys().chain(m.keys()).all(|p| geq(n.get(p).unwrap_or(&bot), m.get(p).unwrap_or(&bot)))
}

/// Administrative normal form of `l` at process `at`: type beta steps,
/// `ami` tests on known processes and applications of `⊥` removed everywhere,
/// including under binders and inside offer branches. `⊥ L` becomes `L`; in a
/// projection the argument of a `⊥` function itself evaluates to `⊥`.
pub fn admin_nf(l: &LocalExpr, at: &Name) -> LocalExpr {
    use LocalExpr as L;
    let n = |l: &LocalExpr| Box::new(admin_nf(l, at));
    let t = |t: &LocalType| normalize_ltype_at(t, at);
    match l {
        L::Var(_) | L::Def(_) | L::Lit(_) | L::Bot | L::Send(_) | L::Recv(_) | L::RoleSub(..) => l.clone(),
        L::Lam { var, ann, body } => L::Lam { var: var.clone(), ann: t(ann), body: n(body) },
        L::TLam { var, body } => L::TLam { var: var.clone(), body: n(body) },
        L::App(f, a) => match (admin_nf(f, at), admin_nf(a, at)) {
            (L::Bot, a) => a,
            (f, a) => L::app(f, a),
        },
        L::TApp(f, ty) => match (admin_nf(f, at), t(ty)) {
            (L::Bot, _) => L::Bot,
            (L::TLam { var, body }, ty) => admin_nf(&subst_ltype_in_local(&body, &var, &ty), at),
            (f, ty) => L::TApp(Box::new(f), ty),
        },
        L::Inl(ty, v) => L::Inl(t(ty), n(v)),
        L::Inr(ty, v) => L::Inr(t(ty), n(v)),
        L::Case { scrut, left, left_body, right, right_body } => L::Case {
            scrut: n(scrut),
            left: left.clone(),
            left_body: n(left_body),
            right: right.clone(),
            right_body: n(right_body),
        },
        L::Pair(a, b) => L::Pair(n(a), n(b)),
        L::Fst(x) => L::Fst(n(x)),
        L::Snd(x) => L::Snd(n(x)),
        L::Offer { from, branches } => L::Offer {
            from: from.clone(),
            branches: branches.iter().map(|(k, b)| (k.clone(), admin_nf(b, at))).collect(),
        },
        L::Choose { to, label, body } => L::Choose { to: to.clone(), label: label.clone(), body: n(body) },
        L::AmI { proc: Atom::Proc(q), then, els } => admin_nf(if q == at { then } else { els }, at),
        L::AmI { proc, then, els } => L::AmI { proc: proc.clone(), then: n(then), els: n(els) },
    }
}

/// [`network_geq`] after [`admin_nf`] on both sides.
pub fn network_geq_admin(n: &Network, m: &Network) -> bool {
    let bot = LocalExpr::Bot;
    n.keys().chain(m.keys()).all(|p| {
        let a = admin_nf(n.get(p).unwrap_or(&bot), p);
        let b = admin_nf(m.get(p).unwrap_or(&bot), p);
        geq(&a, &b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_local_expr;

    fn l(s: &str) -> LocalExpr {
        parse_local_expr(s, &["A", "B"], &[]).unwrap()
    }

    #[test]
    fn offers_union_labels() {
        let m = merge(&l("offer A {x: 1}"), &l("offer A {y: 2}")).unwrap();
        assert_eq!(m, l("offer A {x: 1, y: 2}"));
        assert!(merge(&l("offer A {x: 1}"), &l("offer A {x: 2}")).is_none());
        assert!(merge(&l("offer A {x: 1}"), &l("offer B {x: 1}")).is_none());
    }

    #[test]
    fn binders_are_aligned() {
        let m = merge(&l("\\x:Int. offer A {a: x}"), &l("\\y:Int. offer A {b: y}")).unwrap();
        assert!(alpha_eq_local(&m, &l("\\z:Int. offer A {a: z, b: z}")));
    }

    #[test]
    fn bottom_merges_only_with_itself() {
        assert_eq!(merge(&LocalExpr::Bot, &LocalExpr::Bot), Some(LocalExpr::Bot));
        assert!(merge(&LocalExpr::Bot, &l("1")).is_none());
        assert!(merge(&l("choose A x; 1"), &l("choose A y; 1")).is_none());
    }

    #[test]
    fn administrative_forms() {
        let a = Name::new("A");
        assert_eq!(admin_nf(&l("bot (send B 1)"), &a), l("send B 1"));
        assert_eq!(admin_nf(&l("(/\\X. ami X then 1 else 2) [B]"), &a), l("2"));
        assert_eq!(admin_nf(&l("(/\\X. ami X then 1 else 2) [A]"), &a), l("1"));
        assert_eq!(admin_nf(&l("offer B {x: bot [Int]}"), &a), l("offer B {x: bot}"));
    }

    #[test]
    fn ordering() {
        assert!(geq(&l("offer A {x: 1, y: 2}"), &l("offer A {x: 1}")));
        assert!(!geq(&l("offer A {x: 1}"), &l("offer A {x: 1, y: 2}")));
        let n: Network = [(Name::new("A"), l("offer B {x: 1, y: 2}"))].into_iter().collect();
        let m: Network = [(Name::new("A"), l("offer B {y: 2}")), (Name::new("B"), LocalExpr::Bot)].into_iter().collect();
        assert!(network_geq(&n, &m));
        assert!(!network_geq(&m, &n));
    }
}
