//! Endpoint projection of typed choreographies to local programs.
//!
//! Projection walks a [`TypedExpr`]. The then-branch of a process
//! abstraction `ΛX` projects the body with `X := p`; that substitution is
//! carried alongside the walk and applied to node types on demand, so the
//! substituted body is never re-checked.

use crate::name::{fresh, Name};
use crate::net::{fv_local, merge, LocalDefs, LocalExpr, LocalType, Network, DEF_PROC};
use crate::parse::{print_expr, print_local};
use crate::syntax::{ftv, fv_expr, ftv_expr, procs_in_expr, roles, subst_kind, subst_type, Atom, Kind, Type};
use crate::typeck::{CheckedProgram, Node, TypedExpr};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ProjectionError {
    #[error("cannot merge branches of `{at}` at {process}: `{left}` vs `{right}`")]
    MergeFailure {
        process: Name,
        at: String,
        left: String,
        right: String,
    },
    #[error("in def `{name}`: {source}")]
    InDef {
        name: Name,
        #[source]
        source: Box<ProjectionError>,
    },
}

/// Kinds of the type variables in scope.
pub type KindEnv = BTreeMap<Name, Kind>;

fn excludes(k: &Kind, p: &Name) -> bool {
    k.excluded().contains(&Atom::Proc(p.clone()))
}

/// Maximal kind of `t`, with exclusions tracked only for `p`.
fn kind_at(t: &Type, env: &KindEnv, p: &Name) -> Kind {
    let star = |ex: bool| if ex { Kind::without(Kind::Star, [Atom::Proc(p.clone())].into_iter().collect()) } else { Kind::Star };
    let ex = |t: &Type, env: &KindEnv| excludes(&kind_at(t, env, p), p);
    match t {
        Type::Var(x) => env.get(x).cloned().unwrap_or(Kind::Star),
        Type::Proc(q) if q == p => Kind::Proc,
        Type::Proc(_) => Kind::without(Kind::Proc, [Atom::Proc(p.clone())].into_iter().collect()),
        Type::Base(_, l) => star(ex(l, env)),
        Type::Arrow(a, rho, b) => star(ex(a, env) && ex(b, env) && rho.iter().all(|v| ex(&v.to_type(), env))),
        Type::Sum(a, b) | Type::Prod(a, b) => star(ex(a, env) && ex(b, env)),
        Type::Forall(x, k, body) => star(ex(body, &bind(env, x, k))),
        Type::Lam(x, k, body) => Kind::arrow(k.clone(), kind_at(body, &bind(env, x, k), p)),
        Type::App(f, _) => match kind_at(f, env, p).base() {
            Kind::Arrow(_, k2) => (**k2).clone(),
            _ => Kind::Star,
        },
    }
}

fn bind(env: &KindEnv, x: &Name, k: &Kind) -> KindEnv {
    let mut e = env.clone();
    e.insert(x.clone(), k.clone());
    e
}

/// `⟦t⟧_p`. Type variables are looked up in `env`.
///
/// The clauses test for bottom syntactically, so they are applied to the
/// normal form of `t`: equivalent types project to the same local type.
pub fn project_type(t: &Type, p: &Name, env: &KindEnv) -> LocalType {
    clauses(&crate::typeck::normalize(t), p, env)
}

fn clauses(t: &Type, p: &Name, env: &KindEnv) -> LocalType {
    let pr = |t: &Type| clauses(t, p, env);
    match t {
        Type::Var(x) => match env.get(x) {
            Some(k) if !k.is_proc_kind() && excludes(k, p) => LocalType::Bot,
            _ => LocalType::Var(x.clone()),
        },
        Type::Proc(q) => LocalType::Proc(q.clone()),
        Type::Base(b, l) => match &**l {
            Type::Proc(q) if q == p => LocalType::Base(*b),
            _ => LocalType::Bot,
        },
        Type::Prod(a, b) | Type::Sum(a, b) => {
            let (a, b) = (pr(a), pr(b));
            if a.is_bot() && b.is_bot() {
                LocalType::Bot
            } else if matches!(t, Type::Prod(..)) {
                LocalType::prod(a, b)
            } else {
                LocalType::sum(a, b)
            }
        }
        Type::Arrow(a, rho, b) => {
            let (a, b) = (pr(a), pr(b));
            if rho.contains_proc(p) || !a.is_bot() || !b.is_bot() {
                LocalType::arrow(a, b)
            } else {
                LocalType::Bot
            }
        }
        Type::Forall(x, k, body) | Type::Lam(x, k, body) => {
            let inner = clauses(body, p, &bind(env, x, k));
            let wrap = |b: LocalType| match t {
                Type::Forall(..) => LocalType::Forall(x.clone(), Box::new(b)),
                _ => LocalType::Lam(x.clone(), Box::new(b)),
            };
            if inner.is_bot() && excludes(k, p) {
                LocalType::Bot
            } else if k.is_proc_kind() {
                let then = clauses(&subst_type(body, x, &Type::Proc(p.clone())), p, env);
                wrap(LocalType::AmI(Atom::Var(x.clone()), Box::new(then), Box::new(inner)))
            } else {
                wrap(inner)
            }
        }
        Type::App(f, a) => {
            let (lf, la) = (pr(f), pr(a));
            // A vanished head leaves nothing to apply; types carry no effects.
            if lf.is_bot() {
                LocalType::Bot
            } else if la.is_bot() && excludes(&kind_at(a, env, p), p) {
                lf
            } else {
                LocalType::app(lf, la)
            }
        }
    }
}

/// Projection of one typed term at one process.
struct Projector<'a> {
    p: &'a Name,
    /// Process universe widened with `p`, for `roles`.
    universe: BTreeSet<Name>,
}

/// Pending `X := q` substitutions and kinds of the variables in scope.
#[derive(Clone, Default)]
struct Scope {
    sigma: BTreeMap<Name, Type>,
    kinds: KindEnv,
}

impl Scope {
    fn ty(&self, t: &Type) -> Type {
        self.sigma.iter().fold(t.clone(), |t, (x, v)| subst_type(&t, x, v))
    }

    fn kind(&self, k: &Kind) -> Kind {
        self.sigma.iter().fold(k.clone(), |k, (x, v)| subst_kind(&k, x, v))
    }

    fn atom(&self, t: &Type) -> Atom {
        match self.ty(t) {
            Type::Proc(q) => Atom::Proc(q),
            Type::Var(x) => Atom::Var(x),
            other => unreachable!("process position holds non-process type {other:?}"),
        }
    }
}

fn bot_if(cond: bool, l: impl FnOnce() -> LocalExpr) -> LocalExpr {
    if cond {
        LocalExpr::Bot
    } else {
        l()
    }
}

impl Projector<'_> {
    fn ty(&self, t: &Type, s: &Scope) -> LocalType {
        project_type(&s.ty(t), self.p, &s.kinds)
    }

    fn is_self(&self, t: &Type, s: &Scope) -> bool {
        matches!(s.ty(t), Type::Proc(q) if q == *self.p)
    }

    fn go(&self, m: &TypedExpr, s: &Scope) -> Result<LocalExpr, ProjectionError> {
        use LocalExpr as L;
        let b = |l: LocalExpr| Box::new(l);
        Ok(match &m.node {
            Node::Var(x) => bot_if(self.ty(&m.ty, s).is_bot(), || L::Var(x.clone())),
            Node::Def(f) => L::Def(f.clone()),
            Node::Lit(l, at) => bot_if(!self.is_self(at, s), || L::Lit(l.clone())),
            Node::Lam { var, ann, body, .. } => {
                let lb = self.go(body, s)?;
                let la = self.ty(ann, s);
                bot_if(lb.is_bot() && la.is_bot(), || L::Lam { var: var.clone(), ann: la, body: b(lb) })
            }
            Node::App(f, a) => {
                let (lf, la) = (self.go(f, s)?, self.go(a, s)?);
                if lf.is_bot() && la.is_bot() {
                    L::Bot
                } else if self.involved(&f.ty, s) || (!lf.is_bot() && !la.is_bot()) {
                    L::app(lf, la)
                } else if la.is_bot() {
                    lf
                } else {
                    la
                }
            }
            Node::TLam { var, kind, body } => {
                let k = s.kind(kind);
                let mut inner = s.clone();
                inner.sigma.remove(var);
                inner.kinds.insert(var.clone(), k.clone());
                let lb = self.go(body, &inner)?;
                // The bottom clause comes first, as for quantified types: an
                // abstraction over processes excluding `p` never runs at `p`.
                if lb.is_bot() && excludes(&k, self.p) {
                    L::Bot
                } else if k.is_proc_kind() {
                    let mut then_scope = s.clone();
                    then_scope.sigma.insert(var.clone(), Type::Proc(self.p.clone()));
                    then_scope.kinds.remove(var);
                    let then = self.go(body, &then_scope)?;
                    L::TLam {
                        var: var.clone(),
                        body: b(L::AmI { proc: Atom::Var(var.clone()), then: b(then), els: b(lb) }),
                    }
                } else {
                    L::TLam { var: var.clone(), body: b(lb) }
                }
            }
            Node::TApp(..) if self.ty(&m.ty, s).is_bot() && self.out_of_reach(m, s) => L::Bot,
            Node::TApp(f, t, _) => {
                let lf = self.go(f, s)?;
                let t = s.ty(t);
                let lt = project_type(&t, self.p, &s.kinds);
                if lf.is_bot() && lt.is_bot() {
                    L::Bot
                } else if lt.is_bot() && excludes(&kind_at(&t, &s.kinds, self.p), self.p) {
                    lf
                } else if lf.is_bot() {
                    L::Bot
                } else {
                    L::TApp(b(lf), lt)
                }
            }
            Node::Inl(t, v) | Node::Inr(t, v) => {
                let lv = self.go(v, s)?;
                if self.ty(&m.ty, s).is_bot() {
                    lv
                } else if matches!(m.node, Node::Inl(..)) {
                    L::Inl(self.ty(t, s), b(lv))
                } else {
                    L::Inr(self.ty(t, s), b(lv))
                }
            }
            Node::Case { scrut, left, left_body, right, right_body } => {
                let ls = self.go(scrut, s)?;
                let (l1, l2) = (self.go(left_body, s)?, self.go(right_body, s)?);
                if self.involved(&scrut.ty, s) {
                    L::Case { scrut: b(ls), left: left.clone(), left_body: b(l1), right: right.clone(), right_body: b(l2) }
                } else if l1.is_bot() && l2.is_bot() {
                    ls
                } else {
                    let merged = merge(&l1, &l2).ok_or_else(|| ProjectionError::MergeFailure {
                        process: self.p.clone(),
                        at: print_expr(&m.to_expr()),
                        left: print_local(&l1),
                        right: print_local(&l2),
                    })?;
                    if ls.is_bot() {
                        merged
                    } else {
                        let z = fresh(&Name::new("z"), |n| fv_local(&merged).contains(n));
                        L::app(L::Lam { var: z, ann: LocalType::Bot, body: b(merged) }, ls)
                    }
                }
            }
            Node::Pair(x, y) => {
                let (lx, ly) = (self.go(x, s)?, self.go(y, s)?);
                bot_if(lx.is_bot() && ly.is_bot(), || L::pair(lx, ly))
            }
            Node::Fst(x) | Node::Snd(x) => {
                let lx = self.go(x, s)?;
                if lx.is_bot() {
                    L::Bot
                } else if self.ty(&x.ty, s).is_bot() {
                    lx
                } else if matches!(m.node, Node::Fst(_)) {
                    L::Fst(b(lx))
                } else {
                    L::Snd(b(lx))
                }
            }
            Node::Select { from, to, label, body } => {
                let lb = self.go(body, s)?;
                let (f_self, t_self) = (self.is_self(from, s), self.is_self(to, s));
                let same = s.ty(from) == s.ty(to);
                if f_self && !same {
                    L::Choose { to: s.atom(to), label: label.clone(), body: b(lb) }
                } else if t_self && !same {
                    L::Offer { from: s.atom(from), branches: [(label.clone(), lb)].into_iter().collect() }
                } else {
                    lb
                }
            }
            Node::Com { ty, from, to } => {
                let (f_self, t_self) = (self.is_self(from, s), self.is_self(to, s));
                if f_self && t_self {
                    let x = Name::new("x");
                    let at_p = crate::typeck::normalize(&Type::app(s.ty(ty), Type::Proc(self.p.clone())));
                    L::Lam { var: x.clone(), ann: project_type(&at_p, self.p, &s.kinds), body: b(L::Var(x)) }
                } else if f_self {
                    L::Send(s.atom(to))
                } else if t_self {
                    L::Recv(s.atom(from))
                } else if !self.ty(&m.ty, s).is_bot() {
                    L::RoleSub(s.atom(from), s.atom(to))
                } else {
                    L::Bot
                }
            }
        })
    }

    /// `H [T1] .. [Tk]` where `H` is a definition or a type abstraction shaped
    /// like one (no free variables, no process names) and no `Ti` can name
    /// `p`. Such a spine never acts at `p`, so like a variable it projects to
    /// `⊥` wherever its type does.
    fn out_of_reach(&self, m: &TypedExpr, s: &Scope) -> bool {
        let mut head = m;
        let mut args = Vec::new();
        while let Node::TApp(f, t, _) = &head.node {
            args.push(s.ty(t));
            head = f;
        }
        let def_like = match &head.node {
            Node::Def(_) => true,
            Node::TLam { .. } => {
                let h = head.to_expr();
                fv_expr(&h).is_empty() && procs_in_expr(&h).is_empty() && ftv_expr(&h).is_empty()
            }
            _ => false,
        };
        def_like
            && args.iter().all(|t| {
                !roles(t, &self.universe).contains(self.p)
                    && ftv(t).iter().all(|x| s.kinds.get(x).is_some_and(|k| excludes(k, self.p)))
            })
    }

    fn involved(&self, t: &Type, s: &Scope) -> bool {
        roles(&s.ty(t), &self.universe).contains(self.p)
    }
}

/// `⟦m⟧_p` for a closed typed term over `universe`.
pub fn project_expr(
    m: &TypedExpr,
    p: &Name,
    universe: &BTreeSet<Name>,
) -> Result<LocalExpr, ProjectionError> {
    let mut u = universe.clone();
    u.insert(p.clone());
    Projector { p, universe: u }.go(m, &Scope::default())
}

/// Processes that get an entry in the projected network: the roles of the
/// term's type plus every process named in the term.
pub fn network_domain(m: &TypedExpr, universe: &BTreeSet<Name>) -> BTreeSet<Name> {
    let mut d = roles(&m.ty, universe);
    d.extend(procs_in_expr(&m.to_expr()));
    d
}

pub fn project_network(m: &TypedExpr, universe: &BTreeSet<Name>) -> Result<Network, ProjectionError> {
    network_domain(m, universe)
        .into_iter()
        .map(|p| project_expr(m, &p, universe).map(|l| (p, l)))
        .collect()
}

/// Every definition projected once, at the placeholder process.
pub fn project_defs(prog: &CheckedProgram) -> Result<LocalDefs, ProjectionError> {
    let at = Name::new(DEF_PROC);
    prog.defs
        .iter()
        .map(|(f, _, body)| {
            project_expr(body, &at, &prog.universe)
                .map(|l| (f.clone(), l))
                .map_err(|e| ProjectionError::InDef { name: f.clone(), source: Box::new(e) })
        })
        .collect()
}

/// The network of `prog`'s main choreography and its local definitions.
pub fn project_program(prog: &CheckedProgram) -> Result<(Network, LocalDefs), ProjectionError> {
    Ok((project_network(&prog.main, &prog.universe)?, project_defs(prog)?))
}
