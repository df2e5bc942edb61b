//! Type-level beta normalisation.

use super::{kinds::synth_kind, TypeError, TypingCtx};
use crate::syntax::{alpha_eq_type, is_type_value, subst_type, ProcSet, Type};

/// Bound on beta steps; only ill-kinded types can exhaust it.
const FUEL: usize = 10_000;

/// Normal form of `t`. A redex fires only once its argument is a type value.
pub fn normalize(t: &Type) -> Type {
    let mut fuel = FUEL;
    go(t, &mut fuel)
}

fn go(t: &Type, fuel: &mut usize) -> Type {
    match t {
        Type::Var(_) | Type::Proc(_) => t.clone(),
        Type::Base(b, l) => Type::base(*b, go(l, fuel)),
        Type::Arrow(a, rho, b) => Type::arrow(go(a, fuel), rho.clone(), go(b, fuel)),
        Type::Sum(a, b) => Type::sum(go(a, fuel), go(b, fuel)),
        Type::Prod(a, b) => Type::prod(go(a, fuel), go(b, fuel)),
        Type::Forall(x, k, b) => Type::Forall(x.clone(), k.normalized(), Box::new(go(b, fuel))),
        Type::Lam(x, k, b) => Type::Lam(x.clone(), k.normalized(), Box::new(go(b, fuel))),
        Type::App(f, a) => {
            let f = go(f, fuel);
            let a = go(a, fuel);
            match f {
                Type::Lam(x, _, body) if is_type_value(&a) && *fuel > 0 => {
                    *fuel -= 1;
                    go(&subst_type(&body, &x, &a), fuel)
                }
                f => Type::app(f, a),
            }
        }
    }
}

/// Kind-checks `t` and returns its normal form.
pub fn normalize_type(ctx: &TypingCtx, t: &Type) -> Result<Type, TypeError> {
    synth_kind(ctx, t, false, &mut ProcSet::new())?;
    Ok(normalize(t))
}

/// Equality of normal forms up to renaming of bound variables.
pub fn type_equiv(a: &Type, b: &Type) -> bool {
    alpha_eq_type(&normalize(a), &normalize(b))
}
