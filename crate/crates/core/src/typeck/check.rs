//! Bidirectional type checking with elaboration of lambda process sets.
//!
//! A lambda without an explicit process set gets the smallest one that
//! covers what its body uses beyond its own type: processes and variables
//! looked up in `theta` ("hard" uses), and the processes in the types of
//! variables it mentions ("soft" uses). Soft uses are what keep the
//! elaborated term well-typed after values are substituted into it.

use super::kinds::{check_kind, synth_kind};
use super::normalize::{normalize, type_equiv};
use super::{TypeError, TypingCtx};
use crate::name::{fresh, Name};
use crate::parse::SourceUnit;
use crate::syntax::{
    ftv, ftv_expr, ftv_kind, mn, roles, subst_type, subst_type_in_expr, Atom, Def, Defs, Expr, Kind, Literal,
    ProcSet, Type,
};
use std::collections::BTreeSet;

/// A term annotated with its (normal-form) type at every node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypedExpr {
    pub node: Node,
    pub ty: Type,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Node {
    Var(Name),
    Def(Name),
    Lit(Literal, Type),
    Lam {
        var: Name,
        ann: Type,
        rho: ProcSet,
        body: Box<TypedExpr>,
    },
    TLam {
        var: Name,
        kind: Kind,
        body: Box<TypedExpr>,
    },
    App(Box<TypedExpr>, Box<TypedExpr>),
    /// Type application with the argument's reported kind.
    TApp(Box<TypedExpr>, Type, Kind),
    Inl(Type, Box<TypedExpr>),
    Inr(Type, Box<TypedExpr>),
    Case {
        scrut: Box<TypedExpr>,
        left: Name,
        left_body: Box<TypedExpr>,
        right: Name,
        right_body: Box<TypedExpr>,
    },
    Pair(Box<TypedExpr>, Box<TypedExpr>),
    Fst(Box<TypedExpr>),
    Snd(Box<TypedExpr>),
    Com {
        ty: Type,
        from: Type,
        to: Type,
    },
    Select {
        from: Type,
        to: Type,
        label: Name,
        body: Box<TypedExpr>,
    },
}

impl TypedExpr {
    /// The elaborated term: every lambda carries its process set and every
    /// embedded type is in normal form.
    pub fn to_expr(&self) -> Expr {
        let b = |t: &TypedExpr| Box::new(t.to_expr());
        match &self.node {
            Node::Var(x) => Expr::Var(x.clone()),
            Node::Def(f) => Expr::Def(f.clone()),
            Node::Lit(l, at) => Expr::Lit(l.clone(), at.clone()),
            Node::Lam { var, ann, rho, body } => Expr::Lam {
                var: var.clone(),
                ann: ann.clone(),
                rho: Some(rho.clone()),
                body: b(body),
            },
            Node::TLam { var, kind, body } => Expr::TLam {
                var: var.clone(),
                kind: kind.clone(),
                body: b(body),
            },
            Node::App(f, a) => Expr::App(b(f), b(a)),
            Node::TApp(f, t, _) => Expr::TApp(b(f), t.clone()),
            Node::Inl(t, m) => Expr::Inl(t.clone(), b(m)),
            Node::Inr(t, m) => Expr::Inr(t.clone(), b(m)),
            Node::Case { scrut, left, left_body, right, right_body } => Expr::Case {
                scrut: b(scrut),
                left: left.clone(),
                left_body: b(left_body),
                right: right.clone(),
                right_body: b(right_body),
            },
            Node::Pair(l, r) => Expr::Pair(b(l), b(r)),
            Node::Fst(m) => Expr::Fst(b(m)),
            Node::Snd(m) => Expr::Snd(b(m)),
            Node::Com { ty, from, to } => Expr::Com {
                ty: ty.clone(),
                from: from.clone(),
                to: to.clone(),
            },
            Node::Select { from, to, label, body } => Expr::Select {
                from: from.clone(),
                to: to.clone(),
                label: label.clone(),
                body: b(body),
            },
        }
    }
}

/// A checked source unit.
#[derive(Clone, Debug)]
pub struct CheckedProgram {
    pub universe: BTreeSet<Name>,
    /// Definitions in declaration order with their normal-form signatures.
    pub defs: Vec<(Name, Type, TypedExpr)>,
    pub main: TypedExpr,
}

impl CheckedProgram {
    pub fn elaborated_defs(&self) -> Defs {
        Defs(
            self.defs
                .iter()
                .map(|(name, ty, body)| Def {
                    name: name.clone(),
                    ty: ty.clone(),
                    body: body.to_expr(),
                })
                .collect(),
        )
    }

    pub fn main_expr(&self) -> Expr {
        self.main.to_expr()
    }
}

/// Checks every definition under an empty `theta`, then the main choreography.
pub fn check_program(unit: &SourceUnit) -> Result<CheckedProgram, TypeError> {
    let universe = unit.universe();
    let mut defs = Vec::new();
    for d in unit.defs.iter() {
        let wrap = |e| TypeError::InDef {
            name: d.name.clone(),
            source: Box::new(e),
        };
        let ctx = TypingCtx::for_defs(&universe);
        let mut c = Checker::new(&unit.defs);
        c.kind(&ctx, &d.ty, &Kind::Star).map_err(wrap)?;
        let sig = normalize(&d.ty);
        let body = c.check(&ctx, &d.body, &sig).map_err(wrap)?;
        defs.push((d.name.clone(), sig, body));
    }
    let main = type_of(&TypingCtx::new(&universe), &unit.defs, &unit.main)?;
    Ok(CheckedProgram { universe, defs, main })
}

/// Synthesises the type of `m`, elaborating it.
pub fn type_of(ctx: &TypingCtx, defs: &Defs, m: &Expr) -> Result<TypedExpr, TypeError> {
    Checker::new(defs).synth(ctx, m)
}

#[derive(Default)]
struct Frame {
    hard: ProcSet,
    soft: ProcSet,
}

struct Checker<'a> {
    defs: &'a Defs,
    frames: Vec<Frame>,
}

fn mismatch(context: &str, expected: &Type, found: &Type) -> TypeError {
    TypeError::TypeMismatch {
        context: context.into(),
        expected: expected.clone(),
        found: found.clone(),
    }
}

/// Processes and variables a type itself accounts for.
fn cover(t: &Type, universe: &BTreeSet<Name>) -> ProcSet {
    let mut s = ProcSet::procs(roles(t, universe));
    for x in ftv(t) {
        s.insert(Atom::Var(x));
    }
    s
}

fn typed(node: Node, ty: Type) -> TypedExpr {
    TypedExpr { node, ty }
}

impl<'a> Checker<'a> {
    fn new(defs: &'a Defs) -> Self {
        Checker {
            defs,
            frames: vec![Frame::default()],
        }
    }

    fn top(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("frame stack is never empty")
    }

    fn kind(&mut self, ctx: &TypingCtx, t: &Type, k: &Kind) -> Result<(), TypeError> {
        let mut used = ProcSet::new();
        check_kind(ctx, t, k, &mut used)?;
        let top = self.top();
        top.hard = top.hard.union(&used);
        Ok(())
    }

    fn proc_arg(&mut self, ctx: &TypingCtx, t: &Type) -> Result<Type, TypeError> {
        let mut used = ProcSet::new();
        let k = synth_kind(ctx, t, false, &mut used)?;
        if !k.is_proc_kind() {
            return Err(TypeError::NotAProcess(t.clone()));
        }
        let top = self.top();
        top.hard = top.hard.union(&used);
        Ok(normalize(t))
    }

    /// Kind annotations may only mention names in scope.
    fn kind_scope(&self, ctx: &TypingCtx, k: &Kind) -> Result<(), TypeError> {
        for x in ftv_kind(k) {
            if !ctx.binds_tyvar(&x) {
                return Err(TypeError::UnboundTypeVar(x));
            }
        }
        let mut stack = vec![k];
        while let Some(k) = stack.pop() {
            match k {
                Kind::Star | Kind::Proc => {}
                Kind::Arrow(a, b) => stack.extend([&**a, &**b]),
                Kind::Without(inner, rho) => {
                    if let Some(p) = rho.proc_names().find(|p| !ctx.universe.contains(*p)) {
                        return Err(TypeError::UnknownProcess(p.clone()));
                    }
                    stack.push(inner);
                }
            }
        }
        Ok(())
    }

    fn synth(&mut self, ctx: &TypingCtx, m: &Expr) -> Result<TypedExpr, TypeError> {
        match m {
            Expr::Var(x) => {
                let t = ctx.lookup_term(x).ok_or_else(|| TypeError::UnboundVar(x.clone()))?.clone();
                let soft = cover(&t, &ctx.universe).intersection(&ctx.theta);
                let top = self.top();
                top.soft = top.soft.union(&soft);
                Ok(typed(Node::Var(x.clone()), t))
            }
            Expr::Def(f) => {
                let d = self.defs.get(f).ok_or_else(|| TypeError::UnknownDef(f.clone()))?;
                Ok(typed(Node::Def(f.clone()), normalize(&d.ty)))
            }
            Expr::Lit(l, at) => {
                let at = self.proc_arg(ctx, at)?;
                Ok(typed(Node::Lit(l.clone(), at.clone()), Type::base(l.base(), at)))
            }
            Expr::Lam { var, ann, rho, body } => self.lam(ctx, var, ann, rho.as_ref(), body, None),
            Expr::TLam { var, kind, body } => self.tlam(ctx, var, kind, body, None),
            Expr::App(f, a) => {
                let f = self.synth(ctx, f)?;
                let (t1, t2) = match &f.ty {
                    Type::Arrow(t1, _, t2) => ((**t1).clone(), (**t2).clone()),
                    other => return Err(TypeError::NotAFunction(other.clone())),
                };
                let a = self.check(ctx, a, &t1)?;
                Ok(typed(Node::App(Box::new(f), Box::new(a)), t2))
            }
            Expr::TApp(f, t) => {
                let f = self.synth(ctx, f)?;
                let (x, k, body) = match &f.ty {
                    Type::Forall(x, k, body) => (x.clone(), k.clone(), (**body).clone()),
                    other => return Err(TypeError::NotAForall(other.clone())),
                };
                self.kind(ctx, t, &k)?;
                let reported = synth_kind(ctx, t, false, &mut ProcSet::new())?;
                let tn = normalize(t);
                let ty = normalize(&subst_type(&body, &x, &tn));
                Ok(typed(Node::TApp(Box::new(f), tn, reported), ty))
            }
            Expr::Inl(t, inner) => {
                self.kind(ctx, t, &Kind::Star)?;
                let inner = self.synth(ctx, inner)?;
                let tn = normalize(t);
                let ty = Type::sum(inner.ty.clone(), tn.clone());
                Ok(typed(Node::Inl(tn, Box::new(inner)), ty))
            }
            Expr::Inr(t, inner) => {
                self.kind(ctx, t, &Kind::Star)?;
                let inner = self.synth(ctx, inner)?;
                let tn = normalize(t);
                let ty = Type::sum(tn.clone(), inner.ty.clone());
                Ok(typed(Node::Inr(tn, Box::new(inner)), ty))
            }
            Expr::Case { .. } => self.case(ctx, m, None),
            Expr::Pair(a, b) => {
                let a = self.synth(ctx, a)?;
                let b = self.synth(ctx, b)?;
                let ty = Type::prod(a.ty.clone(), b.ty.clone());
                Ok(typed(Node::Pair(Box::new(a), Box::new(b)), ty))
            }
            Expr::Fst(p) | Expr::Snd(p) => {
                let p = self.synth(ctx, p)?;
                let (a, b) = match &p.ty {
                    Type::Prod(a, b) => ((**a).clone(), (**b).clone()),
                    other => return Err(TypeError::NotAProduct(other.clone())),
                };
                Ok(if matches!(m, Expr::Fst(_)) {
                    typed(Node::Fst(Box::new(p)), a)
                } else {
                    typed(Node::Snd(Box::new(p)), b)
                })
            }
            Expr::Com { ty, from, to } => {
                self.kind(ctx, ty, &Kind::arrow(Kind::Proc, Kind::Star))?;
                let mut excl = mn(ty);
                for x in ftv(ty) {
                    excl.insert(Atom::Var(x));
                }
                let excl_kind = Kind::without(Kind::Proc, excl);
                let mut ends = Vec::new();
                for v in [from, to] {
                    let vn = self.proc_arg(ctx, v)?;
                    self.kind(ctx, v, &excl_kind).map_err(|e| match e {
                        TypeError::KindMismatch { .. } => TypeError::ComMentionsEndpoint {
                            endpoint: v.clone(),
                            ty: ty.clone(),
                        },
                        e => e,
                    })?;
                    ends.push(vn);
                }
                let tn = normalize(ty);
                let (from, to) = (ends[0].clone(), ends[1].clone());
                let res = Type::arrow(
                    normalize(&Type::app(tn.clone(), from.clone())),
                    ProcSet::new(),
                    normalize(&Type::app(tn.clone(), to.clone())),
                );
                Ok(typed(Node::Com { ty: tn, from, to }, res))
            }
            Expr::Select { .. } => self.select(ctx, m, None),
        }
    }

    fn check(&mut self, ctx: &TypingCtx, m: &Expr, expected: &Type) -> Result<TypedExpr, TypeError> {
        let expected = normalize(expected);
        match (m, &expected) {
            (Expr::Lam { var, ann, rho, body }, Type::Arrow(_, erho, t2)) => {
                let r = self.lam(ctx, var, ann, rho.as_ref(), body, Some((erho, t2)))?;
                self.agree("function", &expected, r)
            }
            (Expr::TLam { var, kind, body }, Type::Forall(..)) => {
                let r = self.tlam(ctx, var, kind, body, Some(&expected))?;
                self.agree("polymorphic term", &expected, r)
            }
            (Expr::Pair(a, b), Type::Prod(ea, eb)) => {
                let a = self.check(ctx, a, ea)?;
                let b = self.check(ctx, b, eb)?;
                Ok(typed(Node::Pair(Box::new(a), Box::new(b)), expected.clone()))
            }
            (Expr::Inl(t, inner), Type::Sum(el, er)) => {
                self.kind(ctx, t, &Kind::Star)?;
                let tn = normalize(t);
                if !type_equiv(&tn, er) {
                    return Err(mismatch("inl annotation", er, &tn));
                }
                let inner = self.check(ctx, inner, el)?;
                Ok(typed(Node::Inl(tn, Box::new(inner)), expected.clone()))
            }
            (Expr::Inr(t, inner), Type::Sum(el, er)) => {
                self.kind(ctx, t, &Kind::Star)?;
                let tn = normalize(t);
                if !type_equiv(&tn, el) {
                    return Err(mismatch("inr annotation", el, &tn));
                }
                let inner = self.check(ctx, inner, er)?;
                Ok(typed(Node::Inr(tn, Box::new(inner)), expected.clone()))
            }
            (Expr::Case { .. }, _) => self.case(ctx, m, Some(&expected)),
            (Expr::Select { .. }, _) => self.select(ctx, m, Some(&expected)),
            _ => {
                let r = self.synth(ctx, m)?;
                self.agree("expression", &expected, r)
            }
        }
    }

    fn agree(&self, context: &str, expected: &Type, r: TypedExpr) -> Result<TypedExpr, TypeError> {
        if type_equiv(expected, &r.ty) {
            Ok(r)
        } else {
            Err(mismatch(context, expected, &r.ty))
        }
    }

    fn lam(
        &mut self,
        ctx: &TypingCtx,
        var: &Name,
        ann: &Type,
        rho: Option<&ProcSet>,
        body: &Expr,
        expected: Option<(&ProcSet, &Type)>,
    ) -> Result<TypedExpr, TypeError> {
        self.kind(ctx, ann, &Kind::Star)?;
        let t1 = normalize(ann);
        if let Some(rho) = rho {
            for v in rho.iter() {
                self.proc_arg(ctx, &v.to_type())?;
            }
        }
        let fixed = match (rho, expected) {
            (Some(r), Some((e, _))) if r != e => {
                return Err(TypeError::TypeMismatch {
                    context: "lambda process set".into(),
                    expected: Type::arrow(t1.clone(), e.clone(), expected.unwrap().1.clone()),
                    found: Type::arrow(t1.clone(), r.clone(), expected.unwrap().1.clone()),
                })
            }
            (Some(r), _) => Some(r.clone()),
            (None, Some((e, _))) => Some(e.clone()),
            (None, None) => None,
        };
        let mut inner = ctx.clone();
        inner.push_term(var.clone(), t1.clone());
        self.frames.push(Frame::default());
        let body = match expected {
            Some((_, t2)) => self.check(&inner, body, t2),
            None => self.synth(&inner, body),
        };
        let frame = self.frames.pop().expect("pushed above");
        let body = body?;
        let t2 = body.ty.clone();
        let covered = cover(&t1, &ctx.universe).union(&cover(&t2, &ctx.universe));
        let rho = match fixed {
            Some(r) => r,
            None => frame.hard.union(&frame.soft).difference(&covered),
        };
        let allowed = rho.union(&covered);
        if let Some(a) = frame.hard.difference(&allowed).iter().next() {
            return Err(TypeError::ProcessEscape(a.name().clone()));
        }
        let top = self.top();
        top.hard = top.hard.union(&frame.hard).union(&rho);
        top.soft = top.soft.union(&frame.soft);
        let ty = Type::arrow(t1.clone(), rho.clone(), t2);
        Ok(typed(
            Node::Lam {
                var: var.clone(),
                ann: t1,
                rho,
                body: Box::new(body),
            },
            ty,
        ))
    }

    fn tlam(
        &mut self,
        ctx: &TypingCtx,
        var: &Name,
        kind: &Kind,
        body: &Expr,
        expected: Option<&Type>,
    ) -> Result<TypedExpr, TypeError> {
        self.kind_scope(ctx, kind)?;
        let kind = kind.normalized();
        let (x, body) = if ctx.binds_tyvar(var) {
            let avoid = ftv_expr(body);
            let y = fresh(var, |s| ctx.binds_tyvar(s) || avoid.contains(s));
            (y.clone(), subst_type_in_expr(body, var, &Type::Var(y)))
        } else {
            (var.clone(), body.clone())
        };
        let expected_body = match expected {
            Some(Type::Forall(y, ek, eb)) => {
                if ek.normalized() != kind {
                    return Err(mismatch(
                        "type abstraction kind",
                        expected.unwrap(),
                        &Type::Forall(x.clone(), kind.clone(), eb.clone()),
                    ));
                }
                Some(subst_type(eb, y, &Type::Var(x.clone())))
            }
            _ => None,
        };
        let inner = ctx.enter_tyvar(&x, &kind);
        self.frames.push(Frame::default());
        let body = match &expected_body {
            Some(t) => self.check(&inner, &body, t),
            None => self.synth(&inner, &body),
        };
        let mut frame = self.frames.pop().expect("pushed above");
        let body = body?;
        let xa = Atom::Var(x.clone());
        frame.hard.remove(&xa);
        frame.soft.remove(&xa);
        let top = self.top();
        top.hard = top.hard.union(&frame.hard);
        top.soft = top.soft.union(&frame.soft);
        let ty = Type::Forall(x.clone(), kind.clone(), Box::new(body.ty.clone()));
        Ok(typed(
            Node::TLam {
                var: x,
                kind,
                body: Box::new(body),
            },
            ty,
        ))
    }

    fn case(&mut self, ctx: &TypingCtx, m: &Expr, expected: Option<&Type>) -> Result<TypedExpr, TypeError> {
        let Expr::Case { scrut, left, left_body, right, right_body } = m else {
            unreachable!("case called on a non-case term")
        };
        let scrut = self.synth(ctx, scrut)?;
        let (a, b) = match &scrut.ty {
            Type::Sum(a, b) => ((**a).clone(), (**b).clone()),
            other => return Err(TypeError::NotASum(other.clone())),
        };
        let mut lctx = ctx.clone();
        lctx.push_term(left.clone(), a);
        let lb = match expected {
            Some(t) => self.check(&lctx, left_body, t)?,
            None => self.synth(&lctx, left_body)?,
        };
        let ty = lb.ty.clone();
        let mut rctx = ctx.clone();
        rctx.push_term(right.clone(), b);
        let rb = self.check(&rctx, right_body, &ty)?;
        Ok(typed(
            Node::Case {
                scrut: Box::new(scrut),
                left: left.clone(),
                left_body: Box::new(lb),
                right: right.clone(),
                right_body: Box::new(rb),
            },
            ty,
        ))
    }

    fn select(&mut self, ctx: &TypingCtx, m: &Expr, expected: Option<&Type>) -> Result<TypedExpr, TypeError> {
        let Expr::Select { from, to, label, body } = m else {
            unreachable!("select called on a non-select term")
        };
        let mut ends = Vec::new();
        for v in [from, to] {
            let vn = self.proc_arg(ctx, v).map_err(|e| match e {
                TypeError::NotAProcess(t) => TypeError::SelectEndpointNotProc(t),
                e => e,
            })?;
            ends.push(vn);
        }
        let body = match expected {
            Some(t) => self.check(ctx, body, t)?,
            None => self.synth(ctx, body)?,
        };
        let ty = body.ty.clone();
        Ok(typed(
            Node::Select {
                from: ends[0].clone(),
                to: ends[1].clone(),
                label: label.clone(),
                body: Box::new(body),
            },
            ty,
        ))
    }
}
