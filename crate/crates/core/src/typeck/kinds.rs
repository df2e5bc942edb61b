//! Subkinding and kind synthesis.
//!
//! Synthesis returns the kind with the largest exclusion set derivable from
//! the environment. In `full` mode distinct concrete process names are also
//! known to be distinct, so `p :: Proc \ (universe - {p})`; checks use that
//! mode, reported kinds do not.

use super::{TypeError, TypingCtx};
use crate::syntax::{Atom, Kind, ProcSet, Type};

/// `k1 <= k2`.
pub fn subkind(k1: &Kind, k2: &Kind) -> bool {
    sub(&k1.normalized(), &k2.normalized())
}

fn sub(a: &Kind, b: &Kind) -> bool {
    match (a, b) {
        (_, Kind::Without(b1, r2)) => match a {
            Kind::Without(a1, r1) => r1.is_superset(r2) && sub(a1, b1),
            _ => false,
        },
        (Kind::Without(a1, _), _) => sub(a1, b),
        (Kind::Star, Kind::Star) | (Kind::Proc, Kind::Proc) => true,
        (Kind::Arrow(a1, a2), Kind::Arrow(b1, b2)) => sub(a1, b1) && sub(a2, b2),
        _ => false,
    }
}

/// The kind of `t` as reported to users.
pub fn kind_of(ctx: &TypingCtx, t: &Type) -> Result<Kind, TypeError> {
    synth_kind(ctx, t, false, &mut ProcSet::new())
}

/// `t :: k`.
pub fn has_kind(ctx: &TypingCtx, t: &Type, k: &Kind) -> Result<(), TypeError> {
    check_kind(ctx, t, k, &mut ProcSet::new())
}

fn ill(t: &Type, reason: &str) -> TypeError {
    TypeError::IllKinded {
        ty: t.clone(),
        reason: reason.into(),
    }
}

fn star_excl(ctx: &TypingCtx, t: &Type, full: bool, used: &mut ProcSet) -> Result<ProcSet, TypeError> {
    let k = synth_kind(ctx, t, full, used)?;
    match k.base() {
        Kind::Star => Ok(k.excluded()),
        _ => Err(ill(t, "expected a type of kind *")),
    }
}

fn proc_excl(ctx: &TypingCtx, t: &Type, full: bool, used: &mut ProcSet) -> Result<ProcSet, TypeError> {
    let k = synth_kind(ctx, t, full, used)?;
    match k.base() {
        Kind::Proc => Ok(k.excluded()),
        _ => Err(TypeError::NotAProcess(t.clone())),
    }
}

fn drop_var(k: &Kind, x: &Atom) -> Kind {
    match k {
        Kind::Star | Kind::Proc => k.clone(),
        Kind::Arrow(a, b) => Kind::arrow(drop_var(a, x), drop_var(b, x)),
        Kind::Without(inner, r) => {
            let mut r = r.clone();
            r.remove(x);
            Kind::without(drop_var(inner, x), r)
        }
    }
}

/// Kind synthesis. Every process-kinded atom looked up in `theta` is
/// recorded in `used`; atoms bound inside `t` are not.
pub(crate) fn synth_kind(ctx: &TypingCtx, t: &Type, full: bool, used: &mut ProcSet) -> Result<Kind, TypeError> {
    match t {
        Type::Var(x) => {
            let k = ctx.lookup_tyvar(x).ok_or_else(|| TypeError::UnboundTypeVar(x.clone()))?;
            if k.is_proc_kind() {
                let a = Atom::Var(x.clone());
                if !ctx.theta.contains(&a) {
                    return Err(TypeError::ProcessEscape(x.clone()));
                }
                used.insert(a);
            }
            Ok(k.normalized())
        }
        Type::Proc(p) => {
            let k = ctx.lookup_proc(p).ok_or_else(|| TypeError::UnknownProcess(p.clone()))?;
            let a = Atom::Proc(p.clone());
            if !ctx.theta.contains(&a) {
                return Err(TypeError::ProcessEscape(p.clone()));
            }
            used.insert(a);
            if full {
                let others = ProcSet::procs(ctx.universe.iter().filter(|q| *q != p).cloned());
                Ok(Kind::without(k.normalized(), others))
            } else {
                Ok(k.normalized())
            }
        }
        Type::Base(_, l) => Ok(Kind::without(Kind::Star, proc_excl(ctx, l, full, used)?)),
        Type::Arrow(a, rho, b) => {
            let mut ex = star_excl(ctx, a, full, used)?.intersection(&star_excl(ctx, b, full, used)?);
            for v in rho.iter() {
                ex = ex.intersection(&proc_excl(ctx, &v.to_type(), full, used)?);
            }
            Ok(Kind::without(Kind::Star, ex))
        }
        Type::Sum(a, b) | Type::Prod(a, b) => {
            let ex = star_excl(ctx, a, full, used)?.intersection(&star_excl(ctx, b, full, used)?);
            Ok(Kind::without(Kind::Star, ex))
        }
        Type::Forall(x, k, body) => {
            let inner = ctx.enter_tyvar(x, k);
            let var = Atom::Var(x.clone());
            let mut u = ProcSet::new();
            let mut ex = star_excl(&inner, body, full, &mut u)?;
            ex.remove(&var);
            u.remove(&var);
            *used = used.union(&u);
            Ok(Kind::without(Kind::Star, ex))
        }
        Type::Lam(x, k, body) => {
            let inner = ctx.enter_tyvar(x, k);
            let var = Atom::Var(x.clone());
            let mut u = ProcSet::new();
            let kb = synth_kind(&inner, body, full, &mut u)?;
            u.remove(&var);
            *used = used.union(&u);
            Ok(Kind::arrow(k.normalized(), drop_var(&kb, &var)))
        }
        Type::App(f, a) => {
            let kf = synth_kind(ctx, f, full, used)?;
            match kf.base() {
                Kind::Arrow(k1, k2) => {
                    check_kind(ctx, a, k1, used)?;
                    // A redex reports the kind of its reduct, which may carry
                    // distinctness learned from the argument.
                    let nf = super::normalize::normalize(t);
                    if nf != *t {
                        return synth_kind(ctx, &nf, full, used);
                    }
                    Ok((**k2).clone())
                }
                _ => Err(ill(t, "applied type is not a type-level function")),
            }
        }
    }
}

pub(crate) fn check_kind(ctx: &TypingCtx, t: &Type, k: &Kind, used: &mut ProcSet) -> Result<(), TypeError> {
    let found = synth_kind(ctx, t, true, used)?;
    let k = k.normalized();
    if sub(&found, &k) {
        return Ok(());
    }
    // An arrow kind excluding rho on both sides has that exclusion overall.
    if let Kind::Without(inner, rho) = &k {
        if let Kind::Arrow(k1, k2) = &**inner {
            let spread = Kind::arrow(
                Kind::without((**k1).clone(), rho.clone()),
                Kind::without((**k2).clone(), rho.clone()),
            );
            if sub(&found, &spread) {
                return Ok(());
            }
        }
    }
    Err(TypeError::KindMismatch {
        ty: t.clone(),
        expected: k,
        found: synth_kind(ctx, t, false, &mut ProcSet::new())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::Name;
    use crate::parse::{parse_kind, parse_type};
    use std::collections::BTreeSet;

    const PROCS: [&str; 3] = ["Alice", "Bob", "Carol"];

    fn ctx() -> TypingCtx {
        let u: BTreeSet<Name> = PROCS.iter().map(|p| Name::new(p)).collect();
        TypingCtx::new(&u)
    }

    fn k(s: &str) -> Kind {
        parse_kind(s, &PROCS).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s, &PROCS).unwrap()
    }

    #[test]
    fn reported_kinds() {
        let c = ctx();
        assert_eq!(kind_of(&c, &ty("Int@Alice")).unwrap(), Kind::Star);
        assert_eq!(kind_of(&c, &ty("fn X::proc => Int@X")).unwrap(), k("proc => *"));
        assert_eq!(
            kind_of(&c, &ty("forall X::proc \\ {Alice}. Int@X -> Int@Alice")).unwrap(),
            Kind::Star
        );
        assert!(kind_of(&c, &ty("(fn X::proc => Int@X) Int@Alice")).is_err());
    }

    #[test]
    fn distinct_names_in_checks() {
        let c = ctx();
        assert!(has_kind(&c, &ty("Bob"), &k("proc \\ {Alice}")).is_ok());
        assert!(has_kind(&c, &ty("Alice"), &k("proc \\ {Alice}")).is_err());
        assert!(has_kind(&c, &ty("Int@Bob"), &k("* \\ {Alice, Carol}")).is_ok());
    }

    #[test]
    fn bound_variables_follow_restrictions() {
        let c = ctx();
        let t = ty("forall X::proc \\ {Alice}. forall Y::proc \\ {X}. Int@Y");
        assert!(kind_of(&c, &t).is_ok());
        // Alice learns that it differs from X.
        let inner = c.enter_tyvar(&Name::new("X"), &k("proc \\ {Alice}"));
        assert!(has_kind(&inner, &Type::proc("Alice"), &Kind::without(Kind::Proc, [Atom::Var(Name::new("X"))].into_iter().collect())).is_ok());
        assert!(has_kind(&inner, &Type::proc("Bob"), &Kind::without(Kind::Proc, [Atom::Var(Name::new("X"))].into_iter().collect())).is_err());
    }

    #[test]
    fn theta_restricts_processes() {
        let u: BTreeSet<Name> = PROCS.iter().map(|p| Name::new(p)).collect();
        let c = TypingCtx::for_defs(&u);
        assert_eq!(kind_of(&c, &ty("Int@Alice")), Err(TypeError::ProcessEscape(Name::new("Alice"))));
        assert!(kind_of(&c, &ty("forall S::proc. Int@S")).is_ok());
    }

    #[test]
    fn arrow_kind_exclusion_spreads() {
        let c = ctx();
        let t = ty("fn X::proc \\ {Alice} => Int@X");
        assert!(has_kind(&c, &t, &k("(proc => *) \\ {Alice}")).is_ok());
        let u = ty("fn X::proc => Int@X");
        assert!(has_kind(&c, &u, &k("(proc => *) \\ {Alice}")).is_err());
    }

    #[test]
    fn subkind_basics() {
        assert!(subkind(&k("proc \\ {Alice, Bob}"), &k("proc \\ {Alice}")));
        assert!(!subkind(&k("proc \\ {Alice}"), &k("proc \\ {Alice, Bob}")));
        assert!(subkind(&k("proc \\ {Alice}"), &k("proc")));
        assert!(!subkind(&k("proc"), &k("*")));
        assert!(subkind(&k("proc => * \\ {Bob}"), &k("proc => *")));
    }

    /// Least relation closed under the subkinding rules, over a finite kind space.
    fn closure(space: &[Kind]) -> Vec<Vec<bool>> {
        let n = space.len();
        let idx = |k: &Kind| space.iter().position(|x| x == k);
        let mut r = vec![vec![false; n]; n];
        loop {
            let before = r.clone();
            for i in 0..n {
                r[i][i] = true;
                if let Kind::Without(inner, _) = &space[i] {
                    if let Some(j) = idx(inner) {
                        r[i][j] = true;
                    }
                }
                for j in 0..n {
                    let (a, b) = (&space[i], &space[j]);
                    if let (Kind::Arrow(a1, a2), Kind::Arrow(b1, b2)) = (a, b) {
                        if let (Some(p), Some(q), Some(s), Some(t)) = (idx(a1), idx(b1), idx(a2), idx(b2)) {
                            if before[p][q] && before[s][t] {
                                r[i][j] = true;
                            }
                        }
                    }
                    // K1 <= K2 gives K1 \ (r1 u r2) <= K2 \ r1, with empty sets normalised away.
                    let (a1, ra) = (a.base(), a.excluded());
                    let (b1, rb) = (b.base(), b.excluded());
                    if ra.is_superset(&rb) {
                        if let (Some(p), Some(q)) = (idx(a1), idx(b1)) {
                            if before[p][q] {
                                r[i][j] = true;
                            }
                        }
                    }
                }
            }
            for m in 0..n {
                for i in 0..n {
                    if r[i][m] {
                        for j in 0..n {
                            if r[m][j] {
                                r[i][j] = true;
                            }
                        }
                    }
                }
            }
            if r == before {
                return r;
            }
        }
    }

    #[test]
    fn subkind_matches_rule_closure() {
        let sets: Vec<ProcSet> = vec![
            ProcSet::procs(["A"]),
            ProcSet::procs(["B"]),
            ProcSet::procs(["A", "B"]),
        ];
        let mut level0 = vec![Kind::Star, Kind::Proc];
        for b in [Kind::Star, Kind::Proc] {
            for s in &sets {
                level0.push(Kind::without(b.clone(), s.clone()));
            }
        }
        let mut space = level0.clone();
        for a in &level0 {
            for b in &level0 {
                let arr = Kind::arrow(a.clone(), b.clone());
                for s in &sets {
                    space.push(Kind::without(arr.clone(), s.clone()));
                }
                space.push(arr);
            }
        }
        let r = closure(&space);
        for (i, a) in space.iter().enumerate() {
            for (j, b) in space.iter().enumerate() {
                assert_eq!(subkind(a, b), r[i][j], "{a:?} <= {b:?}");
            }
        }
    }
}
