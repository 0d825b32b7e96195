#![allow(dead_code)]

use std::collections::BTreeMap;

use liesym_core::expr::{normalize, Atom, Expr, FuncSymbol, MultiIndex, Rational, RawExpr, Symbol, SymbolKind};
use liesym_core::jet::total_derivative;
use liesym_core::lie::VectorField;
use liesym_core::reduction::ReducedEquation;
use proptest::prelude::*;

pub fn t() -> Symbol {
    Symbol::independent("t")
}
pub fn x() -> Symbol {
    Symbol::independent("x")
}
pub fn u() -> Symbol {
    Symbol::dependent("u")
}
pub fn a() -> Symbol {
    Symbol::parameter("a")
}

pub fn atoms() -> Vec<Atom> {
    vec![
        Atom::Sym(t()),
        Atom::Sym(x()),
        Atom::Sym(a()),
        Atom::sym(&u()),
        Atom::jet(&u(), MultiIndex::from_vars(&[x()])),
        Atom::jet(&u(), MultiIndex::from_vars(&[t(), x()])),
        Atom::Func(FuncSymbol::new("phi", vec![t()])),
    ]
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn raw_tree() -> impl Strategy<Value = RawExpr> {
    let leaf = prop_oneof![
        (-4i64..5, 1i64..4).prop_map(|(p, q)| RawExpr::Num(rat(p, q))),
        (0..atoms().len()).prop_map(|i| RawExpr::Atom(atoms()[i].clone())),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..4).prop_map(RawExpr::Add),
            prop::collection::vec(inner.clone(), 1..3).prop_map(RawExpr::Mul),
            inner.clone().prop_map(|e| RawExpr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RawExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), 0i64..3)
                .prop_map(|(a, k)| RawExpr::Pow(Box::new(a), Box::new(RawExpr::Num(Rational::from_integer(k.into()))))),
            (inner, 0usize..3).prop_map(|(a, i)| {
                let divisor = [Atom::Sym(x()), Atom::Sym(a_sym()), Atom::sym(&u())][i].clone();
                RawExpr::Div(Box::new(a), Box::new(RawExpr::Atom(divisor)))
            }),
        ]
    })
}

pub fn a_sym() -> Symbol {
    a()
}

pub fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..7, 1i64..5, any::<bool>()), atoms().len()).prop_map(|v| {
        v.into_iter()
            .map(|(p, q, neg)| rat(if neg { -p } else { p }, q))
            .collect()
    })
}

/// Direct exact evaluation of the tree, independent of normalization.
pub fn eval_raw(r: &RawExpr, env: &BTreeMap<Atom, Rational>) -> Rational {
    match r {
        RawExpr::Num(q) => q.clone(),
        RawExpr::Atom(a) => env[a].clone(),
        RawExpr::Add(v) => v
            .iter()
            .map(|e| eval_raw(e, env))
            .fold(Rational::from_integer(0.into()), |s, x| s + x),
        RawExpr::Mul(v) => v
            .iter()
            .map(|e| eval_raw(e, env))
            .fold(Rational::from_integer(1.into()), |s, x| s * x),
        RawExpr::Neg(e) => -eval_raw(e, env),
        RawExpr::Sub(a, b) => eval_raw(a, env) - eval_raw(b, env),
        RawExpr::Div(a, b) => eval_raw(a, env) / eval_raw(b, env),
        RawExpr::Pow(a, k) => {
            let k = eval_raw(k, env).to_integer();
            let base = eval_raw(a, env);
            (0..usize::try_from(k).unwrap()).fold(Rational::from_integer(1.into()), |acc, _| acc * &base)
        }
        other => panic!("unexpected {other:?}"),
    }
}

pub fn expr() -> impl Strategy<Value = Expr> {
    raw_tree().prop_map(|r| normalize(&r).unwrap())
}

/// Polynomial of degree at most two in t, x, u with small coefficients.
pub fn poly() -> impl Strategy<Value = Expr> {
    prop::collection::vec(-3i64..4, 10).prop_map(|c| {
        let v = [Expr::sym(&t()), Expr::sym(&x()), Expr::sym(&u())];
        let mut basis = vec![Expr::one()];
        basis.extend(v.iter().cloned());
        for i in 0..3 {
            for j in i..3 {
                basis.push(&v[i] * &v[j]);
            }
        }
        basis.into_iter().zip(c).map(|(b, k)| &b * &Expr::int(k)).sum()
    })
}

pub fn poly_field() -> impl Strategy<Value = VectorField> {
    (poly(), poly(), poly()).prop_map(|(p, q, r)| VectorField::new("F", &u(), [(t(), p), (x(), q)], r).unwrap())
}

/// An ODE built by differentiating a random first integral, together with
/// that integral and the multiplier relating them.
pub fn synthetic_pair() -> impl Strategy<Value = (ReducedEquation, Expr, Expr)> {
    (prop::collection::vec((-5i64..6, 1i64..4), 5), 1i64..5, any::<bool>()).prop_map(|(c, k, second)| {
        let s = Symbol::new("sigma", SymbolKind::Reduced);
        let y = Symbol::dependent("Y");
        let yv = Expr::sym(&y);
        let sv = Expr::sym(&s);
        let q: Vec<Expr> = c.iter().map(|(p, d)| Expr::frac(*p, *d)).collect();
        let order = if second { 2 } else { 1 };
        let top = Expr::jet(&y, &vec![s.clone(); order]);
        let fi = top + &q[0] * &yv.pow_u32(2) + &(&q[1] * &sv) * &yv + &q[2] * &yv + &q[3] * &sv + q[4].clone();
        let mut eq = fi.clone();
        let gap = if second { 1 } else { 1 + (k % 2) as usize };
        for _ in 0..gap {
            eq = total_derivative(&eq, &s);
        }
        let eq = &eq * &Expr::int(k);
        (ReducedEquation::new(eq, vec![s], y), fi, Expr::frac(1, k))
    })
}
