#![allow(dead_code)]

use liesym::dsl::{Ast, BinOp};
use proptest::prelude::*;

pub fn leaf() -> impl Strategy<Value = Ast> {
    prop_oneof![
        (0u32..100).prop_map(|n| Ast::Num(n.to_string())),
        (1u32..100, 1u32..100).prop_map(|(a, b)| Ast::Num(format!("{a}.{b}"))),
        prop::sample::select(vec!["a", "x", "y_1", "u'", "alpha"]).prop_map(|s| Ast::Ident(s.to_string())),
        prop::collection::vec(prop::sample::select(vec!["t", "x", "y"]), 1..4)
            .prop_map(|v| Ast::Jet("u".into(), v.into_iter().map(String::from).collect())),
    ]
}

pub fn ast() -> impl Strategy<Value = Ast> {
    leaf().prop_recursive(5, 48, 3, |inner| {
        let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]);
        prop_oneof![
            (op, inner.clone(), inner.clone()).prop_map(|(o, l, r)| Ast::Bin(o, Box::new(l), Box::new(r))),
            inner.clone().prop_map(|a| Ast::Neg(Box::new(a))),
            (
                prop::sample::select(vec!["f", "exp", "g2"]),
                prop::collection::vec(inner.clone(), 1..3)
            )
                .prop_map(|(f, args)| Ast::Call(f.to_string(), args)),
            (inner, prop::collection::vec(prop::sample::select(vec!["t", "x"]), 1..3))
                .prop_map(|(e, v)| Ast::Deriv(Box::new(e), v.into_iter().map(String::from).collect())),
        ]
    })
}

/// Expression text over names declared in the built-in library, built so
/// that every power and quotient is defined.
pub fn model_text() -> impl Strategy<Value = String> {
    let atom = prop::sample::select(vec![
        "t",
        "x",
        "y",
        "u",
        "alpha",
        "beta",
        "phi(t)",
        "D(u;x)",
        "D(u;t,x)",
        "u[x,x]",
        "D(phi;t)",
        "u^n",
        "x^(n - 1)",
        "exp(omega1*t)",
        "2",
        "3/4",
        "0.5",
    ])
    .prop_map(String::from);
    atom.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (inner.clone(), 0u32..4).prop_map(|(a, k)| format!("({a})^{k}")),
            (inner.clone(), prop::sample::select(vec!["x", "alpha", "u", "phi(t)"]))
                .prop_map(|(a, d)| format!("({a})/{d}")),
            inner.prop_map(|a| format!("D({a}; x)")),
        ]
    })
}
