//! Kinding, type normalisation and bidirectional type checking.
//!
//! Checking elaborates every lambda with its process set `rho`, so the
//! elaborated term re-checks in checking mode with the same type.

mod check;
mod kinds;
mod normalize;

pub use check::{check_program, type_of, CheckedProgram, Node, TypedExpr};
pub use kinds::{has_kind, kind_of, subkind};
pub use normalize::{normalize, normalize_type, type_equiv};

use crate::name::Name;
use crate::parse::{print_kind, print_type};
use crate::syntax::{Atom, Kind, ProcSet, Type};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TypeError {
    #[error("type mismatch in {context}: expected {}, found {}", print_type(.expected), print_type(.found))]
    TypeMismatch {
        context: String,
        expected: Type,
        found: Type,
    },
    #[error("unbound variable `{0}`")]
    UnboundVar(Name),
    #[error("unknown definition `{0}`")]
    UnknownDef(Name),
    #[error("unbound type variable `{0}`")]
    UnboundTypeVar(Name),
    #[error("undeclared process `{0}`")]
    UnknownProcess(Name),
    #[error("expected a function, found a term of type {}", print_type(.0))]
    NotAFunction(Type),
    #[error("expected a polymorphic term, found a term of type {}", print_type(.0))]
    NotAForall(Type),
    #[error("expected a sum, found a term of type {}", print_type(.0))]
    NotASum(Type),
    #[error("expected a pair, found a term of type {}", print_type(.0))]
    NotAProduct(Type),
    #[error("process `{0}` is not available here; add it to the lambda's process set")]
    ProcessEscape(Name),
    #[error("endpoint {} of `com` may be mentioned by the transported type {}", print_type(.endpoint), print_type(.ty))]
    ComMentionsEndpoint { endpoint: Type, ty: Type },
    #[error("`select` endpoint {} is not a process", print_type(.0))]
    SelectEndpointNotProc(Type),
    #[error("{} is not a process", print_type(.0))]
    NotAProcess(Type),
    #[error("{} does not have kind {}; its kind is {}", print_type(.ty), print_kind(.expected), print_kind(.found))]
    KindMismatch { ty: Type, expected: Kind, found: Kind },
    #[error("ill-kinded type {}: {reason}", print_type(.ty))]
    IllKinded { ty: Type, reason: String },
    #[error("definition `{name}`: {source}")]
    InDef {
        name: Name,
        #[source]
        source: Box<TypeError>,
    },
}

/// A binding in the typing environment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Entry {
    Term(Name, Type),
    TyVar(Name, Kind),
    Proc(Name, Kind),
}

/// Typing environment: the available processes `theta` and the ordered
/// bindings `gamma`. Lookups take the innermost binding.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypingCtx {
    pub universe: BTreeSet<Name>,
    pub theta: ProcSet,
    pub gamma: Vec<Entry>,
}

impl TypingCtx {
    /// Context for a main choreography: every declared process is available.
    pub fn new(universe: &BTreeSet<Name>) -> Self {
        TypingCtx {
            universe: universe.clone(),
            theta: ProcSet::procs(universe.iter().cloned()),
            gamma: universe.iter().map(|p| Entry::Proc(p.clone(), Kind::Proc)).collect(),
        }
    }

    /// Context for global definitions: no process is available.
    pub fn for_defs(universe: &BTreeSet<Name>) -> Self {
        TypingCtx {
            theta: ProcSet::new(),
            ..TypingCtx::new(universe)
        }
    }

    pub fn lookup_term(&self, x: &str) -> Option<&Type> {
        self.gamma.iter().rev().find_map(|e| match e {
            Entry::Term(y, t) if &**y == x => Some(t),
            _ => None,
        })
    }

    pub fn lookup_tyvar(&self, x: &str) -> Option<&Kind> {
        self.gamma.iter().rev().find_map(|e| match e {
            Entry::TyVar(y, k) if &**y == x => Some(k),
            _ => None,
        })
    }

    pub fn lookup_proc(&self, p: &str) -> Option<&Kind> {
        self.gamma.iter().rev().find_map(|e| match e {
            Entry::Proc(q, k) if &**q == p => Some(k),
            _ => None,
        })
    }

    pub fn binds_tyvar(&self, x: &str) -> bool {
        self.lookup_tyvar(x).is_some()
    }

    pub fn push_term(&mut self, x: Name, t: Type) {
        self.gamma.push(Entry::Term(x, t));
    }

    /// Enter the scope of a type binder `X :: k`: shadowing via [`ctx_plus`],
    /// the symmetric restriction for `Without` kinds, and `X` joins `theta`
    /// when it ranges over processes.
    pub fn enter_tyvar(&self, x: &Name, k: &Kind) -> TypingCtx {
        let var = Atom::Var(x.clone());
        let mut g = ctx_plus(&self.gamma, &var);
        if let Kind::Without(_, rho) = k {
            g = ctx_restrict_sym(&g, rho, x);
        }
        g.push(Entry::TyVar(x.clone(), k.clone()));
        let mut theta = self.theta.clone();
        theta.remove(&var);
        if k.is_proc_kind() {
            theta.insert(var);
        }
        TypingCtx {
            universe: self.universe.clone(),
            theta,
            gamma: g,
        }
    }
}

fn map_kinds(gamma: &[Entry], f: impl Fn(&Atom, &Kind) -> Kind) -> Vec<Entry> {
    gamma
        .iter()
        .map(|e| match e {
            Entry::TyVar(x, k) => Entry::TyVar(x.clone(), f(&Atom::Var(x.clone()), k)),
            Entry::Proc(p, k) => Entry::Proc(p.clone(), f(&Atom::Proc(p.clone()), k)),
            Entry::Term(..) => e.clone(),
        })
        .collect()
}

fn kind_minus(k: &Kind, v: &Atom) -> Kind {
    match k {
        Kind::Star | Kind::Proc => k.clone(),
        Kind::Arrow(a, b) => Kind::arrow(kind_minus(a, v), kind_minus(b, v)),
        Kind::Without(inner, rho) => {
            let mut r = rho.clone();
            r.remove(v);
            Kind::without(kind_minus(inner, v), r)
        }
    }
}

/// `gamma + v`: forget every exclusion of `v`, so a rebound `v` carries no
/// stale distinctness facts.
pub fn ctx_plus(gamma: &[Entry], v: &Atom) -> Vec<Entry> {
    map_kinds(gamma, |_, k| kind_minus(k, v))
}

/// `gamma & rho \ x`: every binding for a member of `rho` also excludes `x`.
pub fn ctx_restrict_sym(gamma: &[Entry], rho: &ProcSet, x: &Name) -> Vec<Entry> {
    map_kinds(gamma, |a, k| {
        if rho.contains(a) {
            Kind::without(k.clone(), ProcSet::from_iter([Atom::Var(x.clone())]))
        } else {
            k.clone()
        }
    })
}
