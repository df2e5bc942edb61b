//! Type-directed generator of closed choreographies over at most four processes.
//!
//! Every candidate is filtered through the checker, so callers only see
//! well-typed programs. Terms are built to a depth of at most six.

use polychor::name::Name;
use polychor::parse::SourceUnit;
use polychor::syntax::{Atom, BaseTy, Def, Defs, Expr, Kind, Literal, ProcSet, Type};
use polychor::typeck::{check_program, CheckedProgram};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const MAX_DEPTH: usize = 6;
const NAMES: [&str; 4] = ["A", "B", "C", "D"];

struct Gen {
    rng: ChaCha8Rng,
    procs: Vec<Name>,
    fresh: usize,
}

/// Term variables in scope with their types.
type Env = Vec<(Name, Type)>;

fn n(s: &str) -> Name {
    Name::new(s)
}

fn proc_ty(p: &Name) -> Type {
    Type::Proc(p.clone())
}

/// The fixed library every generated program may call.
pub fn library() -> Defs {
    let s = Type::var("S");
    let int_s = Type::int_at(s.clone());
    let id_int = Def {
        name: n("id_int"),
        ty: Type::forall("S", Kind::Proc, Type::arrow(int_s.clone(), ProcSet::new(), int_s.clone())),
        body: Expr::tlam("S", Kind::Proc, Expr::lam("x", int_s.clone(), Expr::var("x"))),
    };
    let flip = Def {
        name: n("flip"),
        ty: Type::forall(
            "S",
            Kind::Proc,
            Type::arrow(Type::bool_at(s.clone()), ProcSet::new(), Type::bool_at(s.clone())),
        ),
        body: Expr::tlam(
            "S",
            Kind::Proc,
            Expr::lam(
                "b",
                Type::bool_at(s.clone()),
                Expr::case(
                    Expr::var("b"),
                    "t",
                    Expr::Inr(Type::unit_at(s.clone()), Box::new(Expr::var("t"))),
                    "f",
                    Expr::Inl(Type::unit_at(s.clone()), Box::new(Expr::var("f"))),
                ),
            ),
        ),
    };
    Defs(vec![id_int, flip])
}

impl Gen {
    fn proc(&mut self) -> Name {
        self.procs.choose(&mut self.rng).unwrap().clone()
    }

    fn other(&mut self, p: &Name) -> Name {
        let rest: Vec<&Name> = self.procs.iter().filter(|q| *q != p).collect();
        (*rest.choose(&mut self.rng).unwrap()).clone()
    }

    fn var(&mut self, base: &str) -> Name {
        self.fresh += 1;
        n(&format!("{base}{}", self.fresh))
    }

    fn base(&mut self) -> Type {
        let p = proc_ty(&self.proc());
        match self.rng.gen_range(0..4) {
            0 => Type::int_at(p),
            1 => Type::unit_at(p),
            2 => Type::base(BaseTy::Str, p),
            _ => Type::bool_at(p),
        }
    }

    fn ty(&mut self, d: usize) -> Type {
        if d == 0 || self.rng.gen_bool(0.55) {
            return self.base();
        }
        match self.rng.gen_range(0..3) {
            0 => Type::prod(self.ty(d - 1), self.ty(d - 1)),
            1 => Type::sum(self.ty(d - 1), self.ty(d - 1)),
            _ => {
                let rho = ProcSet::procs(self.procs.iter().cloned());
                Type::arrow(self.ty(d - 1), rho, self.ty(d - 1))
            }
        }
    }

    /// An annotation denoting `t`, sometimes as an unreduced type-level redex.
    fn annotation(&mut self, t: &Type) -> Type {
        match t {
            Type::Base(b, at) if self.rng.gen_bool(0.3) => {
                Type::app(Type::lam("Y", Kind::Proc, Type::base(*b, Type::var("Y"))), (**at).clone())
            }
            _ => t.clone(),
        }
    }

    fn value(&mut self, env: &Env, t: &Type, d: usize) -> Expr {
        match t {
            Type::Base(b, at) => {
                let lit = match b {
                    BaseTy::Unit => Literal::Unit,
                    BaseTy::Int => Literal::Int(self.rng.gen_range(-5..50)),
                    BaseTy::Str => Literal::Str(["a", "b", "title"].choose(&mut self.rng).unwrap().to_string()),
                };
                Expr::Lit(lit, (**at).clone())
            }
            Type::Prod(a, b) => Expr::pair(self.value(env, a, d), self.value(env, b, d)),
            Type::Sum(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Expr::Inl((**b).clone(), Box::new(self.value(env, a, d)))
                } else {
                    Expr::Inr((**a).clone(), Box::new(self.value(env, b, d)))
                }
            }
            Type::Arrow(a, _, b) => {
                let x = self.var("x");
                let ann = self.annotation(a);
                let mut inner = env.clone();
                inner.push((x.clone(), (**a).clone()));
                let body = self.term(&inner, b, d.saturating_sub(1));
                Expr::Lam { var: x, ann, rho: None, body: Box::new(body) }
            }
            _ => unreachable!("generator only builds ground types"),
        }
    }

    fn term(&mut self, env: &Env, t: &Type, d: usize) -> Expr {
        let vars: Vec<Name> = env.iter().filter(|(_, s)| s == t).map(|(x, _)| x.clone()).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.3) {
            return Expr::Var(vars.choose(&mut self.rng).unwrap().clone());
        }
        if d == 0 || self.rng.gen_bool(0.1) {
            return self.value(env, t, d);
        }
        let d1 = d - 1;
        match self.rng.gen_range(0..8) {
            0 => {
                let a = self.ty(1);
                let x = self.var("v");
                let ann = self.annotation(&a);
                let mut inner = env.clone();
                inner.push((x.clone(), a.clone()));
                let body = self.term(&inner, t, d1);
                let arg = self.term(env, &a, d1);
                Expr::app(Expr::Lam { var: x, ann, rho: None, body: Box::new(body) }, arg)
            }
            1 => {
                let (a, b) = (self.ty(1), self.ty(1));
                let scrut = self.term(env, &Type::sum(a.clone(), b.clone()), d1);
                let (x, y) = (self.var("l"), self.var("r"));
                let mut le = env.clone();
                le.push((x.clone(), a));
                let mut re = env.clone();
                re.push((y.clone(), b));
                let lb = self.term(&le, t, d1);
                let rb = self.term(&re, t, d1);
                Expr::case(scrut, &x, lb, &y, rb)
            }
            2 => {
                let p = self.proc();
                let q = self.other(&p);
                let label = ["L", "R", "Go"].choose(&mut self.rng).unwrap().to_string();
                Expr::select(&p, &q, &label, self.term(env, t, d1))
            }
            3 => {
                let other = self.ty(1);
                if self.rng.gen_bool(0.5) {
                    Expr::Fst(Box::new(self.term(env, &Type::prod(t.clone(), other), d1)))
                } else {
                    Expr::Snd(Box::new(self.term(env, &Type::prod(other, t.clone()), d1)))
                }
            }
            4 => self.com(env, t, d1),
            5 => self.poly(env, t, d1),
            6 => self.library_call(env, t, d1),
            _ => self.term(env, t, d1),
        }
    }

    /// `com[fn X::proc => T'] p q M` for a located type at `q`.
    fn com(&mut self, env: &Env, t: &Type, d: usize) -> Expr {
        let (shape, q) = match t {
            Type::Base(b, at) => (Type::base(*b, Type::var("X")), (**at).clone()),
            _ => match t.as_bool() {
                Some(at) => (Type::bool_at(Type::var("X")), at.clone()),
                None => return self.value(env, t, d),
            },
        };
        let Type::Proc(q) = q else { return self.value(env, t, d) };
        let p = self.other(&q);
        let fun = Type::lam("X", Kind::Proc, shape.clone());
        let src = polychor::syntax::subst_type(&shape, "X", &proc_ty(&p));
        let arg = self.term(env, &src, d);
        Expr::app(Expr::Com { ty: fun, from: proc_ty(&p), to: proc_ty(&q) }, arg)
    }

    /// `(ΛX::Proc\rest. M{X/r}) [r]` for a closed `M`.
    fn poly(&mut self, env: &Env, t: &Type, d: usize) -> Expr {
        let m = self.term(&Vec::new(), t, d);
        let procs: Vec<Name> = polychor::syntax::procs_in_expr(&m).into_iter().collect();
        let Some(r) = procs.choose(&mut self.rng).cloned() else { return self.value(env, t, d) };
        let x = self.var("X");
        let rest = ProcSet::procs(self.procs.iter().filter(|p| **p != r).cloned());
        let body = abstract_expr(&m, &r, &x);
        Expr::tapp(Expr::tlam(&x, Kind::without(Kind::Proc, rest), body), proc_ty(&r))
    }

    fn library_call(&mut self, env: &Env, t: &Type, d: usize) -> Expr {
        match t {
            Type::Base(BaseTy::Int, at) => {
                Expr::app(Expr::tapp(Expr::def("id_int"), (**at).clone()), self.term(env, t, d))
            }
            _ => match t.as_bool() {
                Some(at) => Expr::app(Expr::tapp(Expr::def("flip"), at.clone()), self.term(env, t, d)),
                None => self.value(env, t, d),
            },
        }
    }
}

/// Replaces the process `r` by the type variable `x` throughout `m`.
pub fn abstract_expr(m: &Expr, r: &Name, x: &Name) -> Expr {
    let e = |m: &Expr| Box::new(abstract_expr(m, r, x));
    let t = |s: &Type| abstract_type(s, r, x);
    match m {
        Expr::Var(_) | Expr::Def(_) => m.clone(),
        Expr::Lit(l, at) => Expr::Lit(l.clone(), t(at)),
        Expr::Lam { var, ann, rho, body } => Expr::Lam {
            var: var.clone(),
            ann: t(ann),
            rho: rho.as_ref().map(|s| abstract_set(s, r, x)),
            body: e(body),
        },
        Expr::TLam { var, kind, body } => Expr::TLam { var: var.clone(), kind: abstract_kind(kind, r, x), body: e(body) },
        Expr::App(f, a) => Expr::App(e(f), e(a)),
        Expr::TApp(f, s) => Expr::TApp(e(f), t(s)),
        Expr::Inl(s, v) => Expr::Inl(t(s), e(v)),
        Expr::Inr(s, v) => Expr::Inr(t(s), e(v)),
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
        Expr::Select { from, to, label, body } => {
            Expr::Select { from: t(from), to: t(to), label: label.clone(), body: e(body) }
        }
    }
}

fn abstract_set(s: &ProcSet, r: &Name, x: &Name) -> ProcSet {
    ProcSet(
        s.iter()
            .map(|a| match a {
                Atom::Proc(p) if p == r => Atom::Var(x.clone()),
                a => a.clone(),
            })
            .collect(),
    )
}

fn abstract_kind(k: &Kind, r: &Name, x: &Name) -> Kind {
    match k {
        Kind::Star | Kind::Proc => k.clone(),
        Kind::Arrow(a, b) => Kind::arrow(abstract_kind(a, r, x), abstract_kind(b, r, x)),
        Kind::Without(k, s) => Kind::Without(Box::new(abstract_kind(k, r, x)), abstract_set(s, r, x)),
    }
}

pub fn abstract_type(t: &Type, r: &Name, x: &Name) -> Type {
    let b = |s: &Type| Box::new(abstract_type(s, r, x));
    match t {
        Type::Proc(p) if p == r => Type::Var(x.clone()),
        Type::Var(_) | Type::Proc(_) => t.clone(),
        Type::Base(k, at) => Type::Base(*k, b(at)),
        Type::Arrow(a, s, c) => Type::Arrow(b(a), abstract_set(s, r, x), b(c)),
        Type::Sum(a, c) => Type::Sum(b(a), b(c)),
        Type::Prod(a, c) => Type::Prod(b(a), b(c)),
        Type::Forall(y, k, body) => Type::Forall(y.clone(), abstract_kind(k, r, x), b(body)),
        Type::Lam(y, k, body) => Type::Lam(y.clone(), abstract_kind(k, r, x), b(body)),
        Type::App(f, a) => Type::App(b(f), b(a)),
    }
}

/// One candidate from `seed`; `None` when it fails to check.
pub fn candidate(seed: u64) -> Option<(SourceUnit, CheckedProgram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(2..=4);
    let procs: Vec<Name> = NAMES[..count].iter().map(|p| n(p)).collect();
    let mut g = Gen { rng, procs: procs.clone(), fresh: 0 };
    let depth = g.rng.gen_range(3..=MAX_DEPTH);
    let t = g.ty(2);
    let main = g.term(&Vec::new(), &t, depth);
    let unit = SourceUnit { processes: procs, defs: library(), main, spans: BTreeMap::new() };
    let checked = check_program(&unit).ok()?;
    Some((unit, checked))
}

/// The first `count` well-typed programs from consecutive seeds starting at `start`,
/// with the number of candidates tried.
pub fn well_typed(start: u64, count: usize) -> (Vec<(SourceUnit, CheckedProgram)>, usize) {
    let mut out = Vec::new();
    let mut seed = start;
    while out.len() < count {
        if let Some(p) = candidate(seed) {
            out.push(p);
        }
        seed += 1;
        assert!(seed - start < 50 * count as u64 + 1000, "generator acceptance rate collapsed");
    }
    (out, (seed - start) as usize)
}
