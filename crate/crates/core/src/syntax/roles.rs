//! Involved processes (`roles`), mentioned names (`mn`) and free type variables.

use super::{Atom, Kind, ProcSet, Type};
use crate::name::Name;
use std::collections::BTreeSet;

/// Processes involved in a type, relative to the declared universe.
///
/// A binder whose kind is not a `Without` kind may be instantiated with
/// anything, so it involves every process; `K \ rho` involves all but `rho`.
pub fn roles(t: &Type, universe: &BTreeSet<Name>) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    roles_into(t, universe, &mut out);
    out
}

fn roles_into(t: &Type, universe: &BTreeSet<Name>, out: &mut BTreeSet<Name>) {
    match t {
        Type::Var(_) => {}
        Type::Proc(p) => {
            out.insert(p.clone());
        }
        Type::Base(_, l) => roles_into(l, universe, out),
        Type::Arrow(a, rho, b) => {
            roles_into(a, universe, out);
            out.extend(rho.proc_names().cloned());
            roles_into(b, universe, out);
        }
        Type::Sum(a, b) | Type::Prod(a, b) | Type::App(a, b) => {
            roles_into(a, universe, out);
            roles_into(b, universe, out);
        }
        Type::Forall(_, k, body) | Type::Lam(_, k, body) => match k {
            Kind::Without(_, rho) => {
                roles_into(body, universe, out);
                out.extend(universe.iter().filter(|p| !rho.contains_proc(p)).cloned());
            }
            _ => out.extend(universe.iter().cloned()),
        },
    }
}

/// Names a type mentions: like `roles`, but a binder contributes only its
/// explicit exclusions rather than the universe.
pub fn mn(t: &Type) -> ProcSet {
    match t {
        Type::Var(_) => ProcSet::new(),
        Type::Proc(p) => ProcSet::procs([p.clone()]),
        Type::Base(_, l) => mn(l),
        Type::Arrow(a, rho, b) => {
            let mut s = mn(a).union(&mn(b));
            for p in rho.proc_names() {
                s.insert(Atom::Proc(p.clone()));
            }
            s
        }
        Type::Sum(a, b) | Type::Prod(a, b) | Type::App(a, b) => mn(a).union(&mn(b)),
        Type::Forall(x, k, body) | Type::Lam(x, k, body) => {
            let mut s = mn(body);
            if let Kind::Without(_, rho) = k {
                s = s.union(rho);
            }
            s.remove(&Atom::Var(x.clone()));
            s
        }
    }
}

/// Free type variables, including those in `rho` sets and binder kinds.
pub fn ftv(t: &Type) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    ftv_into(t, &mut out);
    out
}

fn ftv_into(t: &Type, out: &mut BTreeSet<Name>) {
    match t {
        Type::Var(x) => {
            out.insert(x.clone());
        }
        Type::Proc(_) => {}
        Type::Base(_, l) => ftv_into(l, out),
        Type::Arrow(a, rho, b) => {
            ftv_into(a, out);
            out.extend(rho.var_names().cloned());
            ftv_into(b, out);
        }
        Type::Sum(a, b) | Type::Prod(a, b) | Type::App(a, b) => {
            ftv_into(a, out);
            ftv_into(b, out);
        }
        Type::Forall(x, k, body) | Type::Lam(x, k, body) => {
            out.extend(ftv_kind(k));
            let mut inner = ftv(body);
            inner.remove(x);
            out.extend(inner);
        }
    }
}

/// Type variables occurring in the excluded sets of a kind.
pub fn ftv_kind(k: &Kind) -> BTreeSet<Name> {
    match k {
        Kind::Star | Kind::Proc => BTreeSet::new(),
        Kind::Arrow(a, b) => {
            let mut s = ftv_kind(a);
            s.extend(ftv_kind(b));
            s
        }
        Kind::Without(k, rho) => {
            let mut s = ftv_kind(k);
            s.extend(rho.var_names().cloned());
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe() -> BTreeSet<Name> {
        ["A", "B", "C"].into_iter().map(Name::new).collect()
    }

    fn names(xs: &[&str]) -> BTreeSet<Name> {
        xs.iter().map(|s| Name::new(s)).collect()
    }

    #[test]
    fn roles_of_located_and_arrow() {
        let t = Type::arrow(Type::int_at(Type::proc("A")), ProcSet::procs(["C"]), Type::int_at(Type::var("X")));
        assert_eq!(roles(&t, &universe()), names(&["A", "C"]));
    }

    #[test]
    fn roles_of_binders() {
        let unrestricted = Type::forall("X", Kind::Proc, Type::int_at(Type::var("X")));
        assert_eq!(roles(&unrestricted, &universe()), universe());
        let restricted = Type::forall(
            "X",
            Kind::without(Kind::Proc, ProcSet::procs(["A"])),
            Type::int_at(Type::var("X")),
        );
        assert_eq!(roles(&restricted, &universe()), names(&["B", "C"]));
    }

    #[test]
    fn mn_counts_only_explicit_names() {
        let t = Type::lam("X", Kind::Proc, Type::prod(Type::int_at(Type::var("X")), Type::int_at(Type::proc("B"))));
        assert_eq!(mn(&t), ProcSet::procs(["B"]));
        let w = Type::forall(
            "X",
            Kind::without(Kind::Proc, ProcSet::procs(["A"])),
            Type::int_at(Type::var("X")),
        );
        assert_eq!(mn(&w), ProcSet::procs(["A"]));
    }

    #[test]
    fn ftv_binds() {
        let t = Type::forall(
            "X",
            Kind::without(Kind::Proc, [Atom::Var(Name::new("Z"))].into_iter().collect()),
            Type::arrow(Type::var("X"), [Atom::Var(Name::new("Y"))].into_iter().collect(), Type::var("W")),
        );
        assert_eq!(ftv(&t), names(&["W", "Y", "Z"]));
    }
}
