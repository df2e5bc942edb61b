//! α-canonical forms: bound variables renamed to `#0, #1, ...` in pre-order.
//!
//! `#` cannot appear in source identifiers, so canonical names never collide
//! with free ones and α-equivalence is equality of canonical forms.

use super::{Atom, Expr, Kind, ProcSet, Type};
use crate::name::Name;

#[derive(Default)]
struct Canon {
    next: usize,
    tys: Vec<(Name, Name)>,
    terms: Vec<(Name, Name)>,
}

fn lookup(env: &[(Name, Name)], x: &Name) -> Name {
    env.iter()
        .rev()
        .find(|(o, _)| o == x)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(|| x.clone())
}

impl Canon {
    fn fresh(&mut self) -> Name {
        let n = Name::from(format!("#{}", self.next));
        self.next += 1;
        n
    }

    fn set(&self, rho: &ProcSet) -> ProcSet {
        rho.iter()
            .map(|a| match a {
                Atom::Var(x) => Atom::Var(lookup(&self.tys, x)),
                p => p.clone(),
            })
            .collect()
    }

    fn kind(&self, k: &Kind) -> Kind {
        match k {
            Kind::Star | Kind::Proc => k.clone(),
            Kind::Arrow(a, b) => Kind::arrow(self.kind(a), self.kind(b)),
            Kind::Without(inner, rho) => Kind::without(self.kind(inner), self.set(rho)),
        }
    }

    fn ty(&mut self, t: &Type) -> Type {
        match t {
            Type::Var(x) => Type::Var(lookup(&self.tys, x)),
            Type::Proc(_) => t.clone(),
            Type::Base(b, l) => Type::base(*b, self.ty(l)),
            Type::Arrow(a, rho, b) => {
                let a = self.ty(a);
                let rho = self.set(rho);
                Type::arrow(a, rho, self.ty(b))
            }
            Type::Sum(a, b) => {
                let a = self.ty(a);
                Type::sum(a, self.ty(b))
            }
            Type::Prod(a, b) => {
                let a = self.ty(a);
                Type::prod(a, self.ty(b))
            }
            Type::App(a, b) => {
                let a = self.ty(a);
                Type::app(a, self.ty(b))
            }
            Type::Forall(x, k, body) => {
                let (x, k, body) = self.ty_binder(x, k, body);
                Type::Forall(x, k, Box::new(body))
            }
            Type::Lam(x, k, body) => {
                let (x, k, body) = self.ty_binder(x, k, body);
                Type::Lam(x, k, Box::new(body))
            }
        }
    }

    fn ty_binder(&mut self, x: &Name, k: &Kind, body: &Type) -> (Name, Kind, Type) {
        let k = self.kind(k).normalized();
        let c = self.fresh();
        self.tys.push((x.clone(), c.clone()));
        let body = self.ty(body);
        self.tys.pop();
        (c, k, body)
    }

    fn term_binder(&mut self, x: &Name, body: &Expr) -> (Name, Expr) {
        let c = self.fresh();
        self.terms.push((x.clone(), c.clone()));
        let body = self.expr(body);
        self.terms.pop();
        (c, body)
    }

    fn expr(&mut self, m: &Expr) -> Expr {
        match m {
            Expr::Var(x) => Expr::Var(lookup(&self.terms, x)),
            Expr::Def(_) => m.clone(),
            Expr::Lit(l, at) => Expr::Lit(l.clone(), self.ty(at)),
            Expr::Lam { var, ann, rho, body } => {
                let ann = self.ty(ann);
                let rho = rho.as_ref().map(|r| self.set(r));
                let (var, body) = self.term_binder(var, body);
                Expr::Lam { var, ann, rho, body: Box::new(body) }
            }
            Expr::TLam { var, kind, body } => {
                let kind = self.kind(kind).normalized();
                let c = self.fresh();
                self.tys.push((var.clone(), c.clone()));
                let body = self.expr(body);
                self.tys.pop();
                Expr::TLam { var: c, kind, body: Box::new(body) }
            }
            Expr::App(a, b) => {
                let a = self.expr(a);
                Expr::app(a, self.expr(b))
            }
            Expr::TApp(a, t) => {
                let a = self.expr(a);
                Expr::tapp(a, self.ty(t))
            }
            Expr::Inl(t, a) => {
                let t = self.ty(t);
                Expr::Inl(t, Box::new(self.expr(a)))
            }
            Expr::Inr(t, a) => {
                let t = self.ty(t);
                Expr::Inr(t, Box::new(self.expr(a)))
            }
            Expr::Case { scrut, left, left_body, right, right_body } => {
                let scrut = self.expr(scrut);
                let (left, lb) = self.term_binder(left, left_body);
                let (right, rb) = self.term_binder(right, right_body);
                Expr::Case {
                    scrut: Box::new(scrut),
                    left,
                    left_body: Box::new(lb),
                    right,
                    right_body: Box::new(rb),
                }
            }
            Expr::Pair(a, b) => {
                let a = self.expr(a);
                Expr::pair(a, self.expr(b))
            }
            Expr::Fst(a) => Expr::Fst(Box::new(self.expr(a))),
            Expr::Snd(a) => Expr::Snd(Box::new(self.expr(a))),
            Expr::Com { ty, from, to } => {
                let ty = self.ty(ty);
                let from = self.ty(from);
                Expr::Com { ty, from, to: self.ty(to) }
            }
            Expr::Select { from, to, label, body } => {
                let from = self.ty(from);
                let to = self.ty(to);
                Expr::Select { from, to, label: label.clone(), body: Box::new(self.expr(body)) }
            }
        }
    }
}

pub fn canon_type(t: &Type) -> Type {
    Canon::default().ty(t)
}

pub fn canon_kind(k: &Kind) -> Kind {
    Canon::default().kind(k).normalized()
}

pub fn canon_expr(m: &Expr) -> Expr {
    Canon::default().expr(m)
}

pub fn alpha_eq_type(a: &Type, b: &Type) -> bool {
    canon_type(a) == canon_type(b)
}

pub fn alpha_eq_kind(a: &Kind, b: &Kind) -> bool {
    canon_kind(a) == canon_kind(b)
}

pub fn alpha_eq_expr(a: &Expr, b: &Expr) -> bool {
    canon_expr(a) == canon_expr(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalent_binders() {
        let a = Type::forall("X", Kind::Proc, Type::int_at(Type::var("X")));
        let b = Type::forall("Y", Kind::Proc, Type::int_at(Type::var("Y")));
        assert!(alpha_eq_type(&a, &b));
        let c = Type::forall("Y", Kind::Proc, Type::int_at(Type::var("X")));
        assert!(!alpha_eq_type(&a, &c));
    }

    #[test]
    fn binder_scope_reaches_inner_kinds() {
        let mk = |x: &str| {
            Type::forall(
                x,
                Kind::Proc,
                Type::forall(
                    "Y",
                    Kind::without(Kind::Proc, [Atom::Var(Name::new(x))].into_iter().collect()),
                    Type::int_at(Type::var("Y")),
                ),
            )
        };
        assert!(alpha_eq_type(&mk("X"), &mk("Q")));
    }

    #[test]
    fn term_binders() {
        let a = Expr::lam("x", Type::unit_at(Type::proc("A")), Expr::var("x"));
        let b = Expr::lam("y", Type::unit_at(Type::proc("A")), Expr::var("y"));
        assert!(alpha_eq_expr(&a, &b));
        assert!(!alpha_eq_expr(&a, &Expr::lam("y", Type::unit_at(Type::proc("A")), Expr::var("x"))));
    }
}
