//! Random kindable types over the processes `A, B, C` and the process
//! variables `X :: Proc` and `Y :: Proc \ {X}`, with type-level redexes.

use polychor::name::Name;
use polychor::project::KindEnv;
use polychor::syntax::{Atom, BaseTy, Kind, ProcSet, Type};
use polychor::typeck::{kind_of, TypingCtx};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub const PROCS: [&str; 3] = ["A", "B", "C"];

pub fn universe() -> BTreeSet<Name> {
    PROCS.iter().map(|p| Name::new(p)).collect()
}

/// The kinds of `X` and `Y`.
pub fn env() -> KindEnv {
    [
        (Name::new("X"), Kind::Proc),
        (Name::new("Y"), Kind::without(Kind::Proc, ProcSet(BTreeSet::from([Atom::Var(Name::new("X"))])))),
    ]
    .into_iter()
    .collect()
}

pub fn ctx() -> TypingCtx {
    env().iter().fold(TypingCtx::new(&universe()), |c, (x, k)| c.enter_tyvar(x, k))
}

struct TypeGen {
    rng: ChaCha8Rng,
    /// Process-kinded variables in scope.
    vars: Vec<Name>,
    fresh: usize,
}

impl TypeGen {
    fn atom(&mut self) -> Type {
        if self.rng.gen_bool(0.4) {
            Type::Var(self.vars.choose(&mut self.rng).unwrap().clone())
        } else {
            Type::proc(PROCS.choose(&mut self.rng).unwrap())
        }
    }

    fn location(&mut self) -> Type {
        let a = self.atom();
        if self.rng.gen_bool(0.2) {
            Type::app(Type::lam("L", Kind::Proc, Type::var("L")), a)
        } else {
            a
        }
    }

    fn rho(&mut self) -> ProcSet {
        let k = self.rng.gen_range(0..3);
        ProcSet((0..k).filter_map(|_| Atom::of_type(&self.atom())).collect())
    }

    fn ty(&mut self, d: usize) -> Type {
        if d == 0 || self.rng.gen_bool(0.3) {
            let b = *[BaseTy::Int, BaseTy::Unit, BaseTy::Str].choose(&mut self.rng).unwrap();
            return Type::base(b, self.location());
        }
        match self.rng.gen_range(0..6) {
            0 => Type::arrow(self.ty(d - 1), self.rho(), self.ty(d - 1)),
            1 => Type::sum(self.ty(d - 1), self.ty(d - 1)),
            2 => Type::prod(self.ty(d - 1), self.ty(d - 1)),
            3 | 4 => {
                self.fresh += 1;
                let z = Name::new(&format!("Z{}", self.fresh));
                let excl = ProcSet::procs(PROCS.iter().filter(|_| self.rng.gen_bool(0.3)).map(|p| Name::new(p)));
                let k = Kind::without(Kind::Proc, excl);
                self.vars.push(z.clone());
                let body = self.ty(d - 1);
                self.vars.pop();
                if self.rng.gen_bool(0.5) {
                    Type::Forall(z, k, Box::new(body))
                } else {
                    let arg = self.atom();
                    Type::app(Type::Lam(z, k, Box::new(body)), arg)
                }
            }
            _ => {
                let inner = self.ty(d - 1);
                Type::app(Type::lam("W", Kind::Star, inner), self.ty(0))
            }
        }
    }
}

/// A type from `seed`, kept only when it kinds in [`ctx`].
pub fn kindable(seed: u64) -> Option<Type> {
    let mut g = TypeGen { rng: ChaCha8Rng::seed_from_u64(seed), vars: vec![Name::new("X"), Name::new("Y")], fresh: 0 };
    let d = g.rng.gen_range(0..=4);
    let t = g.ty(d);
    kind_of(&ctx(), &t).ok().map(|_| t)
}
