use super::{q_to_rational, rational_to_q, Atom, Exponent, Expr, ExprError, Rational, Symbol, Q};
use num_traits::Zero;

/// Unnormalized expression tree, as produced by the model-file parser.
#[derive(Clone, Debug, PartialEq)]
pub enum RawExpr {
    Num(Rational),
    Atom(Atom),
    Add(Vec<RawExpr>),
    Mul(Vec<RawExpr>),
    Neg(Box<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Div(Box<RawExpr>, Box<RawExpr>),
    Pow(Box<RawExpr>, Box<RawExpr>),
    Exp(Box<RawExpr>),
    Tanh(Box<RawExpr>),
    /// Total derivative along the listed variables, applied left to right.
    Derivative(Box<RawExpr>, Vec<Symbol>),
}

/// Reduces a raw tree to its unique canonical form.
pub fn normalize(raw: &RawExpr) -> Result<Expr, ExprError> {
    Ok(match raw {
        RawExpr::Num(q) => Expr::constant(q.clone()),
        RawExpr::Atom(a) => Expr::atom(a.clone()),
        RawExpr::Add(v) => {
            let mut parts = Vec::with_capacity(v.len());
            for r in v {
                parts.push(normalize(r)?);
            }
            parts.into_iter().sum()
        }
        RawExpr::Mul(v) => {
            let mut acc = Expr::one();
            for r in v {
                acc = &acc * &normalize(r)?;
            }
            acc
        }
        RawExpr::Neg(a) => -normalize(a)?,
        RawExpr::Sub(a, b) => normalize(a)? - normalize(b)?,
        RawExpr::Div(a, b) => normalize(a)?.div(&normalize(b)?)?,
        RawExpr::Pow(a, b) => {
            let e = Exponent::from_expr(&normalize(b)?)?;
            normalize(a)?.pow(e)?
        }
        RawExpr::Exp(a) => Expr::exp(normalize(a)?),
        RawExpr::Tanh(a) => Expr::tanh(normalize(a)?),
        RawExpr::Derivative(a, vars) => {
            let mut e = normalize(a)?;
            for v in vars {
                e = crate::jet::total_derivative(&e, v);
            }
            e
        }
    })
}

impl Exponent {
    /// Reads `c + k*n + m*n^(-1)` back from an expression.
    pub fn from_expr(e: &Expr) -> Result<Exponent, ExprError> {
        let bad = || ExprError::UnsupportedExponent(e.to_string());
        let (mut c, mut k, mut m) = (Q::zero(), Q::zero(), Q::zero());
        for (mono, coeff) in e.terms() {
            let q = rational_to_q(coeff).ok_or_else(bad)?;
            match mono.factors() {
                [] => c += q,
                [(Atom::Sym(s), p)] if s.is_exponent_parameter() => match p.as_integer() {
                    Some(1) => k += q,
                    Some(-1) => m += q,
                    _ => return Err(bad()),
                },
                _ => return Err(bad()),
            }
        }
        Ok(Exponent::new(c, k, m))
    }
}

impl Expr {
    /// The expression as a raw tree (a sum of products).
    pub fn to_raw(&self) -> RawExpr {
        let terms = self
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut factors = vec![RawExpr::Num(c.clone())];
                for (a, e) in m.factors() {
                    let base = RawExpr::Atom(a.clone());
                    if e.is_one() {
                        factors.push(base);
                    } else {
                        factors.push(RawExpr::Pow(Box::new(base), Box::new(exponent_raw(e))));
                    }
                }
                RawExpr::Mul(factors)
            })
            .collect();
        RawExpr::Add(terms)
    }
}

fn exponent_raw(e: &Exponent) -> RawExpr {
    let n = || RawExpr::Atom(Atom::sym(&Symbol::exponent_parameter()));
    RawExpr::Add(vec![
        RawExpr::Num(q_to_rational(e.constant_part())),
        RawExpr::Mul(vec![RawExpr::Num(q_to_rational(e.linear_part())), n()]),
        RawExpr::Mul(vec![
            RawExpr::Num(q_to_rational(e.inverse_part())),
            RawExpr::Pow(
                Box::new(n()),
                Box::new(RawExpr::Num(Rational::from_integer((-1).into()))),
            ),
        ]),
    ])
}
