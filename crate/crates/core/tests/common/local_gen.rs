//! Random local programs for the merge algebra.
//!
//! Triples are drawn as variants of one base term that differ in the branches
//! of their offers, so most pairs are mergeable. A small fraction of leaves is
//! perturbed to keep undefined merges in the mix.

use polychor::name::Name;
use polychor::net::{alpha_eq_local, merge, LocalExpr as L, LocalType};
use polychor::syntax::{Atom, BaseTy, Literal};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

const LABELS: [&str; 4] = ["Buy", "Quit", "L", "R"];

fn n(s: &str) -> Name {
    Name::new(s)
}

pub struct LocalGen {
    rng: ChaCha8Rng,
}

impl LocalGen {
    pub fn new(seed: u64) -> Self {
        LocalGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn atom(&mut self) -> Atom {
        match self.rng.gen_range(0..4) {
            0 => Atom::Var(n("X")),
            1 => Atom::Proc(n("A")),
            2 => Atom::Proc(n("B")),
            _ => Atom::Proc(n("C")),
        }
    }

    fn ty(&mut self) -> LocalType {
        match self.rng.gen_range(0..4) {
            0 => LocalType::Bot,
            1 => LocalType::Base(BaseTy::Int),
            2 => LocalType::Base(BaseTy::Unit),
            _ => LocalType::arrow(LocalType::Base(BaseTy::Int), LocalType::Bot),
        }
    }

    fn leaf(&mut self) -> L {
        match self.rng.gen_range(0..7) {
            0 => L::Bot,
            1 => L::Lit(Literal::Unit),
            2 => L::Lit(Literal::Int(self.rng.gen_range(0..3))),
            3 => L::Var(n(["x", "y"].choose(&mut self.rng).unwrap())),
            4 => L::Send(self.atom()),
            5 => L::Recv(self.atom()),
            _ => L::Def(n("f")),
        }
    }

    fn branches(&mut self, d: usize) -> BTreeMap<Name, L> {
        let count = self.rng.gen_range(1..=3);
        let mut labels = LABELS.to_vec();
        labels.shuffle(&mut self.rng);
        labels[..count].iter().map(|l| (n(l), self.term(d))).collect()
    }

    pub fn term(&mut self, d: usize) -> L {
        if d == 0 || self.rng.gen_bool(0.2) {
            return self.leaf();
        }
        let b = |g: &mut Self| Box::new(g.term(d - 1));
        match self.rng.gen_range(0..11) {
            0 => {
                let var = n(["x", "y", "z"].choose(&mut self.rng).unwrap());
                L::Lam { var, ann: self.ty(), body: b(self) }
            }
            1 => L::TLam { var: n(["X", "Y"].choose(&mut self.rng).unwrap()), body: b(self) },
            2 => L::App(b(self), b(self)),
            3 => L::Pair(b(self), b(self)),
            4 => L::Fst(b(self)),
            5 => L::Inl(self.ty(), b(self)),
            6 => L::Case {
                scrut: b(self),
                left: n("x"),
                left_body: b(self),
                right: n(["y", "z"].choose(&mut self.rng).unwrap()),
                right_body: b(self),
            },
            7 | 8 => L::Offer { from: self.atom(), branches: self.branches(d - 1) },
            9 => L::Choose { to: self.atom(), label: n(LABELS.choose(&mut self.rng).unwrap()), body: b(self) },
            _ => L::AmI { proc: self.atom(), then: b(self), els: b(self) },
        }
    }

    /// A copy of `l` whose offers may lose, gain or change branches.
    pub fn variant(&mut self, l: &L) -> L {
        let v = |g: &mut Self, x: &L| Box::new(g.variant(x));
        match l {
            L::Var(_) | L::Def(_) | L::Lit(_) | L::Bot | L::Send(_) | L::Recv(_) | L::RoleSub(..) => {
                if self.rng.gen_bool(0.03) {
                    self.leaf()
                } else {
                    l.clone()
                }
            }
            L::Lam { var, ann, body } => L::Lam { var: var.clone(), ann: ann.clone(), body: v(self, body) },
            L::TLam { var, body } => L::TLam { var: var.clone(), body: v(self, body) },
            L::App(a, b) => L::App(v(self, a), v(self, b)),
            L::TApp(a, t) => L::TApp(v(self, a), t.clone()),
            L::Inl(t, a) => L::Inl(t.clone(), v(self, a)),
            L::Inr(t, a) => L::Inr(t.clone(), v(self, a)),
            L::Case { scrut, left, left_body, right, right_body } => L::Case {
                scrut: v(self, scrut),
                left: left.clone(),
                left_body: v(self, left_body),
                right: right.clone(),
                right_body: v(self, right_body),
            },
            L::Pair(a, b) => L::Pair(v(self, a), v(self, b)),
            L::Fst(a) => L::Fst(v(self, a)),
            L::Snd(a) => L::Snd(v(self, a)),
            L::Offer { from, branches } => {
                let mut out = BTreeMap::new();
                for (label, body) in branches {
                    if self.rng.gen_bool(0.25) {
                        continue;
                    }
                    out.insert(label.clone(), self.variant(body));
                }
                if out.is_empty() || self.rng.gen_bool(0.3) {
                    let label = n(LABELS.choose(&mut self.rng).unwrap());
                    if !out.contains_key(&label) {
                        let body = self.term(2);
                        out.insert(label, body);
                    }
                }
                L::Offer { from: from.clone(), branches: out }
            }
            L::Choose { to, label, body } => L::Choose { to: to.clone(), label: label.clone(), body: v(self, body) },
            L::AmI { proc, then, els } => L::AmI { proc: proc.clone(), then: v(self, then), els: v(self, els) },
        }
    }

    /// Three variants of a fresh base term.
    pub fn triple(&mut self) -> (L, L, L) {
        let d = self.rng.gen_range(1..=5);
        let base = self.term(d);
        (self.variant(&base), self.variant(&base), self.variant(&base))
    }
}

fn same(a: &Option<L>, b: &Option<L>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => alpha_eq_local(a, b),
        (None, None) => true,
        _ => false,
    }
}

/// Idempotence, commutativity and conditional associativity on one triple.
/// Returns whether `a ⊔ b` was defined.
pub fn check_triple(a: &L, b: &L, c: &L) -> Result<bool, String> {
    for x in [a, b, c] {
        if !same(&merge(x, x), &Some(x.clone())) {
            return Err(format!("idempotence fails on {x:?}"));
        }
    }
    for (x, y) in [(a, b), (b, c), (a, c)] {
        if !same(&merge(x, y), &merge(y, x)) {
            return Err(format!("commutativity fails on {x:?} and {y:?}"));
        }
    }
    let left = merge(a, b).and_then(|ab| merge(&ab, c));
    let right = merge(b, c).and_then(|bc| merge(a, &bc));
    if (left.is_some() || right.is_some()) && !same(&left, &right) {
        return Err(format!("associativity fails on {a:?}, {b:?}, {c:?}"));
    }
    Ok(merge(a, b).is_some())
}

/// Merging two offers from the same sender unions their labels and merges
/// the shared branches.
pub fn check_offer_union(g: &mut LocalGen) -> Result<(), String> {
    let base = L::Offer { from: Atom::Proc(n("B")), branches: g.branches(2) };
    let (x, y) = (g.variant(&base), g.variant(&base));
    let (L::Offer { branches: b1, .. }, L::Offer { branches: b2, .. }) = (&x, &y) else { unreachable!() };
    let Some(m) = merge(&x, &y) else {
        // Only a shared branch that fails to merge may make the offers unmergeable.
        let clash = b1.iter().any(|(l, e)| b2.get(l).is_some_and(|f| merge(e, f).is_none()));
        return if clash { Ok(()) } else { Err(format!("offers {x:?} and {y:?} should merge")) };
    };
    let L::Offer { from, branches } = &m else { return Err(format!("merge of offers gave {m:?}")) };
    if *from != Atom::Proc(n("B")) {
        return Err("merged offer changed its sender".into());
    }
    let want: BTreeSet<&Name> = b1.keys().chain(b2.keys()).collect();
    if branches.keys().collect::<BTreeSet<_>>() != want {
        return Err(format!("labels of {m:?} are not the union"));
    }
    for (l, body) in branches {
        let expect = match (b1.get(l), b2.get(l)) {
            (Some(e), Some(f)) => merge(e, f),
            (Some(e), None) | (None, Some(e)) => Some(e.clone()),
            (None, None) => None,
        };
        if !same(&Some(body.clone()), &expect) {
            return Err(format!("branch {l} of {m:?} is not the merge of its sources"));
        }
    }
    Ok(())
}

/// Runs `count` triples and offer pairs; returns how many `a ⊔ b` were defined.
pub fn merge_algebra(seed: u64, count: usize) -> Result<usize, String> {
    let mut g = LocalGen::new(seed);
    let mut defined = 0;
    for _ in 0..count {
        let (a, b, c) = g.triple();
        defined += check_triple(&a, &b, &c)? as usize;
        check_offer_union(&mut g)?;
    }
    Ok(defined)
}
