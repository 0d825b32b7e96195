use std::collections::BTreeMap;
use std::ops::Neg;

use num_traits::{Float, Num, One, ToPrimitive, Zero};

use super::{Atom, Expr, Rational, Q};

/// Number types an [`Expr`] can be evaluated in: exact rationals for the
/// numerical shadow of symbolic identities, `f32`/`f64` for numerics.
pub trait Scalar: Clone + Num + Neg<Output = Self> {
    fn from_rational(q: &Rational) -> Option<Self>;
    /// `self^e` for a rational exponent; `None` when not representable.
    fn pow_q(&self, e: Q) -> Option<Self>;
    fn exp(&self) -> Option<Self>;
    fn tanh(&self) -> Option<Self>;
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_rational(q: &Rational) -> Option<Self> {
                Some(q.numer().to_f64()? as $t / q.denom().to_f64()? as $t)
            }
            fn pow_q(&self, e: Q) -> Option<Self> {
                if e.is_integer() {
                    let k = i32::try_from(e.to_integer()).ok()?;
                    Some(Float::powi(*self, k))
                } else {
                    let v = Float::powf(*self, *e.numer() as $t / *e.denom() as $t);
                    v.is_finite().then_some(v)
                }
            }
            fn exp(&self) -> Option<Self> {
                Some(Float::exp(*self))
            }
            fn tanh(&self) -> Option<Self> {
                Some(Float::tanh(*self))
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
    fn pow_q(&self, e: Q) -> Option<Self> {
        if !e.is_integer() {
            return None;
        }
        let k = e.to_integer();
        if self.is_zero() && k < 0 {
            return None;
        }
        let base = if k < 0 { self.recip() } else { self.clone() };
        Some(num_traits::pow(base, k.unsigned_abs() as usize))
    }
    fn exp(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }
    fn tanh(&self) -> Option<Self> {
        self.is_zero().then(Rational::zero)
    }
}

impl Expr {
    /// Evaluates with atom values from `env`. `n` fixes the exponent
    /// parameter for `n`-dependent exponents. `None` if some atom is unbound
    /// or a power is not representable in `S`.
    pub fn eval<S: Scalar>(&self, env: &dyn Fn(&Atom) -> Option<S>, n: Option<Q>) -> Option<S> {
        let mut total = S::zero();
        for (m, c) in self.terms() {
            let mut term = S::from_rational(c)?;
            for (a, e) in m.factors() {
                let q = match e.as_constant() {
                    Some(q) => q,
                    None => e.eval_at(n?)?,
                };
                let base = match a {
                    Atom::Const(r) => S::from_rational(r)?,
                    Atom::Exp(arg) => arg.eval(env, n)?.exp()?,
                    Atom::Tanh(arg) => arg.eval(env, n)?.tanh()?,
                    other => env(other)?,
                };
                term = term * base.pow_q(q)?;
            }
            total = total + term;
        }
        Some(total)
    }
}

/// Exact evaluation at rational values for the listed atoms.
pub fn eval_exact(e: &Expr, values: &BTreeMap<Atom, Rational>, n: Option<Q>) -> Option<Rational> {
    e.eval(&|a: &Atom| values.get(a).cloned(), n)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use std::collections::BTreeMap;

    #[test]
    fn tanh_identity_numerically() {
        // tanh(z)^2 + (1 - tanh(z)^2) at z = 0.3 both ways
        let z = Symbol::independent("z");
        let th = Expr::tanh(Expr::sym(&z));
        let lhs = &th.pow_u32(2) + &(Expr::one() - th.pow_u32(2));
        let env = |a: &Atom| (a == &Atom::sym(&z)).then_some(0.3f64);
        let raw = 0.3f64.tanh().powi(2) + (1.0 - 0.3f64.tanh().powi(2));
        assert!((lhs.eval(&env, None).unwrap() - raw).abs() < 1e-15);
        assert_eq!(lhs, Expr::one());
    }

    #[test]
    fn exact_evaluation() {
        let x = Symbol::independent("x");
        let e = Expr::sym(&x).pow_u32(2) - Expr::frac(1, 3);
        let mut vals = BTreeMap::new();
        vals.insert(Atom::sym(&x), Rational::new(1.into(), 2.into()));
        assert_eq!(eval_exact(&e, &vals, None), Some(Rational::new((-1).into(), 12.into())));
    }
}
