//! Abstract syntax of choreographies: kinds, types, terms and global definitions.
//!
//! Process names and type variables are distinct constructors; the parser
//! decides which one an identifier denotes from the `processes` header.

mod alpha;
mod roles;
mod subst;

pub use alpha::{alpha_eq_expr, alpha_eq_kind, alpha_eq_type, canon_expr, canon_kind, canon_type};
pub use roles::{ftv, ftv_kind, mn, roles};
pub use subst::{
    fv_expr, ftv_expr, rename_type_var, subst_expr, subst_kind, subst_proc_expr, subst_proc_kind,
    subst_proc_type, subst_type, subst_type_in_expr, procs_in_expr,
};

use crate::name::Name;
use std::collections::BTreeSet;

/// Element of a process set: a concrete process or a type variable standing for one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Proc(Name),
    Var(Name),
}

impl Atom {
    pub fn name(&self) -> &Name {
        match self {
            Atom::Proc(n) | Atom::Var(n) => n,
        }
    }

    pub fn to_type(&self) -> Type {
        match self {
            Atom::Proc(n) => Type::Proc(n.clone()),
            Atom::Var(n) => Type::Var(n.clone()),
        }
    }

    /// The atom a type value denotes, if it is a process name or a variable.
    pub fn of_type(t: &Type) -> Option<Atom> {
        match t {
            Type::Proc(n) => Some(Atom::Proc(n.clone())),
            Type::Var(n) => Some(Atom::Var(n.clone())),
            _ => None,
        }
    }
}

/// A finite set of processes and process-kinded type variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ProcSet(pub BTreeSet<Atom>);

impl ProcSet {
    pub fn new() -> Self {
        ProcSet(BTreeSet::new())
    }

    pub fn procs<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Name>,
    {
        ProcSet(names.into_iter().map(|n| Atom::Proc(n.into())).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.0.contains(a)
    }

    pub fn contains_proc(&self, p: &str) -> bool {
        self.0.contains(&Atom::Proc(Name::new(p)))
    }

    pub fn contains_var(&self, x: &str) -> bool {
        self.0.contains(&Atom::Var(Name::new(x)))
    }

    pub fn insert(&mut self, a: Atom) {
        self.0.insert(a);
    }

    pub fn remove(&mut self, a: &Atom) {
        self.0.remove(a);
    }

    pub fn union(&self, other: &ProcSet) -> ProcSet {
        ProcSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &ProcSet) -> ProcSet {
        ProcSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &ProcSet) -> ProcSet {
        ProcSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_superset(&self, other: &ProcSet) -> bool {
        self.0.is_superset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn proc_names(&self) -> impl Iterator<Item = &Name> {
        self.0.iter().filter_map(|a| match a {
            Atom::Proc(n) => Some(n),
            Atom::Var(_) => None,
        })
    }

    pub fn var_names(&self) -> impl Iterator<Item = &Name> {
        self.0.iter().filter_map(|a| match a {
            Atom::Var(n) => Some(n),
            Atom::Proc(_) => None,
        })
    }
}

impl FromIterator<Atom> for ProcSet {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        ProcSet(iter.into_iter().collect())
    }
}

/// Kinds. Nested `Without` layers are flattened and `K \ {}` collapses to `K`
/// when built through [`Kind::without`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    Star,
    Proc,
    Arrow(Box<Kind>, Box<Kind>),
    Without(Box<Kind>, ProcSet),
}

impl Kind {
    pub fn arrow(a: Kind, b: Kind) -> Kind {
        Kind::Arrow(Box::new(a), Box::new(b))
    }

    /// `k \ rho`, flattened.
    pub fn without(k: Kind, rho: ProcSet) -> Kind {
        match k {
            Kind::Without(inner, r0) => Kind::without(*inner, r0.union(&rho)),
            k if rho.is_empty() => k,
            k => Kind::Without(Box::new(k), rho),
        }
    }

    /// The kind with its outer `Without` layers removed.
    pub fn base(&self) -> &Kind {
        match self {
            Kind::Without(k, _) => k.base(),
            k => k,
        }
    }

    /// The outer excluded set (empty when there is no `Without` layer).
    pub fn excluded(&self) -> ProcSet {
        match self {
            Kind::Without(k, r) => k.excluded().union(r),
            _ => ProcSet::new(),
        }
    }

    pub fn is_without(&self) -> bool {
        matches!(self, Kind::Without(..))
    }

    /// `Proc` or `Proc \ rho`.
    pub fn is_proc_kind(&self) -> bool {
        matches!(self.base(), Kind::Proc)
    }

    /// Normal form: flattened `Without` layers, empty exclusions dropped, recursively.
    pub fn normalized(&self) -> Kind {
        match self {
            Kind::Star => Kind::Star,
            Kind::Proc => Kind::Proc,
            Kind::Arrow(a, b) => Kind::arrow(a.normalized(), b.normalized()),
            Kind::Without(k, r) => Kind::without(k.normalized(), r.clone()),
        }
    }
}

/// Located base types.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BaseTy {
    Unit,
    Int,
    Str,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Type {
    Var(Name),
    Proc(Name),
    /// `()@V`, `Int@V`, `String@V`.
    Base(BaseTy, Box<Type>),
    Arrow(Box<Type>, ProcSet, Box<Type>),
    Sum(Box<Type>, Box<Type>),
    Prod(Box<Type>, Box<Type>),
    Forall(Name, Kind, Box<Type>),
    Lam(Name, Kind, Box<Type>),
    App(Box<Type>, Box<Type>),
}

impl Type {
    pub fn var(x: &str) -> Type {
        Type::Var(Name::new(x))
    }
    pub fn proc(p: &str) -> Type {
        Type::Proc(Name::new(p))
    }
    pub fn base(b: BaseTy, at: Type) -> Type {
        Type::Base(b, Box::new(at))
    }
    pub fn unit_at(at: Type) -> Type {
        Type::base(BaseTy::Unit, at)
    }
    pub fn int_at(at: Type) -> Type {
        Type::base(BaseTy::Int, at)
    }
    /// `Bool@V`, encoded as `()@V + ()@V`.
    pub fn bool_at(at: Type) -> Type {
        Type::sum(Type::unit_at(at.clone()), Type::unit_at(at))
    }
    pub fn arrow(a: Type, rho: ProcSet, b: Type) -> Type {
        Type::Arrow(Box::new(a), rho, Box::new(b))
    }
    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Box::new(a), Box::new(b))
    }
    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }
    pub fn forall(x: &str, k: Kind, body: Type) -> Type {
        Type::Forall(Name::new(x), k, Box::new(body))
    }
    pub fn lam(x: &str, k: Kind, body: Type) -> Type {
        Type::Lam(Name::new(x), k, Box::new(body))
    }
    pub fn app(a: Type, b: Type) -> Type {
        Type::App(Box::new(a), Box::new(b))
    }

    /// The location `V` if this is `Bool@V` in its sum encoding.
    pub fn as_bool(&self) -> Option<&Type> {
        match self {
            Type::Sum(a, b) => match (&**a, &**b) {
                (Type::Base(BaseTy::Unit, l), Type::Base(BaseTy::Unit, r)) if l == r => Some(l),
                _ => None,
            },
            _ => None,
        }
    }
}

/// Type values: types with no application anywhere.
pub fn is_type_value(t: &Type) -> bool {
    match t {
        Type::Var(_) | Type::Proc(_) => true,
        Type::Base(_, l) => is_type_value(l),
        Type::Arrow(a, _, b) | Type::Sum(a, b) | Type::Prod(a, b) => {
            is_type_value(a) && is_type_value(b)
        }
        Type::Forall(_, _, b) | Type::Lam(_, _, b) => is_type_value(b),
        Type::App(..) => false,
    }
}

/// Literal payloads of located values.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Literal {
    Unit,
    Int(i64),
    Str(String),
}

impl Literal {
    pub fn base(&self) -> BaseTy {
        match self {
            Literal::Unit => BaseTy::Unit,
            Literal::Int(_) => BaseTy::Int,
            Literal::Str(_) => BaseTy::Str,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    Var(Name),
    /// Reference to a global definition.
    Def(Name),
    /// `()@V`, `n@V`, `"s"@V`.
    Lit(Literal, Type),
    /// `\x:T. M`; `rho` is `None` until the typechecker elaborates it.
    Lam {
        var: Name,
        ann: Type,
        rho: Option<ProcSet>,
        body: Box<Expr>,
    },
    TLam {
        var: Name,
        kind: Kind,
        body: Box<Expr>,
    },
    App(Box<Expr>, Box<Expr>),
    TApp(Box<Expr>, Type),
    /// `inl[T] M`: `T` is the right summand.
    Inl(Type, Box<Expr>),
    /// `inr[T] M`: `T` is the left summand.
    Inr(Type, Box<Expr>),
    Case {
        scrut: Box<Expr>,
        left: Name,
        left_body: Box<Expr>,
        right: Name,
        right_body: Box<Expr>,
    },
    Pair(Box<Expr>, Box<Expr>),
    Fst(Box<Expr>),
    Snd(Box<Expr>),
    /// `com[T] V1 V2`, a function value.
    Com {
        ty: Type,
        from: Type,
        to: Type,
    },
    Select {
        from: Type,
        to: Type,
        label: Name,
        body: Box<Expr>,
    },
}

impl Expr {
    pub fn var(x: &str) -> Expr {
        Expr::Var(Name::new(x))
    }
    pub fn def(f: &str) -> Expr {
        Expr::Def(Name::new(f))
    }
    pub fn lit(l: Literal, at: Type) -> Expr {
        Expr::Lit(l, at)
    }
    pub fn int(n: i64, at: &str) -> Expr {
        Expr::Lit(Literal::Int(n), Type::proc(at))
    }
    pub fn unit(at: &str) -> Expr {
        Expr::Lit(Literal::Unit, Type::proc(at))
    }
    pub fn lam(x: &str, ann: Type, body: Expr) -> Expr {
        Expr::Lam {
            var: Name::new(x),
            ann,
            rho: None,
            body: Box::new(body),
        }
    }
    pub fn tlam(x: &str, kind: Kind, body: Expr) -> Expr {
        Expr::TLam {
            var: Name::new(x),
            kind,
            body: Box::new(body),
        }
    }
    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }
    pub fn tapp(f: Expr, t: Type) -> Expr {
        Expr::TApp(Box::new(f), t)
    }
    pub fn pair(a: Expr, b: Expr) -> Expr {
        Expr::Pair(Box::new(a), Box::new(b))
    }
    pub fn case(scrut: Expr, l: &str, lb: Expr, r: &str, rb: Expr) -> Expr {
        Expr::Case {
            scrut: Box::new(scrut),
            left: Name::new(l),
            left_body: Box::new(lb),
            right: Name::new(r),
            right_body: Box::new(rb),
        }
    }
    pub fn com(ty: Type, from: &str, to: &str) -> Expr {
        Expr::Com {
            ty,
            from: Type::proc(from),
            to: Type::proc(to),
        }
    }
    pub fn select(from: &str, to: &str, label: &str, body: Expr) -> Expr {
        Expr::Select {
            from: Type::proc(from),
            to: Type::proc(to),
            label: Name::new(label),
            body: Box::new(body),
        }
    }
}

/// Values of the choreographic language.
pub fn is_value(m: &Expr) -> bool {
    match m {
        Expr::Var(_) | Expr::Lit(..) | Expr::Lam { .. } | Expr::TLam { .. } | Expr::Com { .. } => {
            true
        }
        Expr::Inl(_, v) | Expr::Inr(_, v) => is_value(v),
        Expr::Pair(a, b) => is_value(a) && is_value(b),
        _ => false,
    }
}

/// A global definition `def f : T = M;`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Def {
    pub name: Name,
    pub ty: Type,
    pub body: Expr,
}

/// Global definitions, kept in declaration order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Defs(pub Vec<Def>);

impl Defs {
    pub fn get(&self, f: &str) -> Option<&Def> {
        self.0.iter().find(|d| &*d.name == f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Def> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
