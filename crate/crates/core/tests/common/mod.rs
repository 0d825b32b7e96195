#![allow(dead_code)]

use liesym_core::expr::{Exponent, Expr, FuncSymbol, MultiIndex, Rational, Symbol};
use liesym_core::jet::{expand_pde, total_derivative, Pde};
use liesym_core::lie::VectorField;

pub fn q(p: i64, d: i64) -> Expr {
    Expr::frac(p, d)
}

pub struct V {
    pub t: Symbol,
    pub x: Symbol,
    pub y: Symbol,
    pub w: Symbol,
    pub u: Symbol,
    pub uu: Symbol,
    pub alpha: Symbol,
    pub beta: Symbol,
    pub n: Symbol,
    pub h0: Symbol,
}

pub fn v() -> V {
    V {
        t: Symbol::independent("t"),
        x: Symbol::independent("x"),
        y: Symbol::independent("y"),
        w: Symbol::independent("w"),
        u: Symbol::dependent("u"),
        uu: Symbol::dependent("U"),
        alpha: Symbol::parameter("alpha"),
        beta: Symbol::parameter("beta"),
        n: Symbol::exponent_parameter(),
        h0: Symbol::parameter("h0"),
    }
}

pub fn s(sym: &Symbol) -> Expr {
    Expr::sym(sym)
}

pub fn d(dep: &Symbol, vars: &[&Symbol]) -> Expr {
    Expr::jet(dep, &vars.iter().map(|v| (*v).clone()).collect::<Vec<_>>())
}

pub fn func(name: &str, arg: &Symbol) -> FuncSymbol {
    FuncSymbol::new(name, vec![arg.clone()])
}

/// `f` differentiated `k` times in its single argument.
pub fn fd(f: &FuncSymbol, k: u32) -> Expr {
    let arg = f.args[0].clone();
    Expr::func(f.with_orders(MultiIndex::empty().with_count(&arg, k)))
}

pub fn txy(v: &V) -> Vec<Symbol> {
    vec![v.t.clone(), v.x.clone(), v.y.clone()]
}

pub fn cc(v: &V) -> Pde {
    let u = s(&v.u);
    let inner = d(&v.u, &[&v.t]) + &s(&v.alpha) * &d(&v.u, &[&v.x]) - &u * &d(&v.u, &[&v.x]) + d(&v.u, &[&v.x, &v.x]);
    let lhs = total_derivative(&inner, &v.x) + d(&v.u, &[&v.y, &v.y]);
    expand_pde("cc", lhs, &txy(v), &v.u).unwrap()
}

pub fn gcc(v: &V) -> Pde {
    let un = s(&v.u).pow(Exponent::n()).unwrap();
    let inner = d(&v.u, &[&v.t]) + &s(&v.alpha) * &d(&v.u, &[&v.x]) - &un * &d(&v.u, &[&v.x])
        + &s(&v.beta) * &d(&v.u, &[&v.x, &v.x]);
    let lhs = total_derivative(&inner, &v.x) + d(&v.u, &[&v.y, &v.y]);
    expand_pde("gcc", lhs, &txy(v), &v.u).unwrap()
}

/// GCC with alpha fixed to zero.
pub fn gcc0(v: &V) -> Pde {
    let lhs = gcc(v).lhs().substitute_sym(&v.alpha, &Expr::zero()).unwrap();
    expand_pde("gcc0", lhs, &txy(v), &v.u).unwrap()
}

/// Printed reduced equation in (t, w) with parameter h0.
pub fn cc_reduced_printed(v: &V) -> Pde {
    let uu = s(&v.uu);
    let lhs = d(&v.uu, &[&v.w, &v.w, &v.w]) + d(&v.uu, &[&v.w]).pow_u32(2)
        - &(Expr::one() - uu + s(&v.h0)) * &d(&v.uu, &[&v.w, &v.w])
        + d(&v.uu, &[&v.w, &v.t]);
    expand_pde("cc-reduced", lhs, &[v.t.clone(), v.w.clone()], &v.uu).unwrap()
}

/// Printed reduced power-law equation in (t, w).
pub fn gcc_reduced_printed(v: &V) -> Pde {
    let uu = s(&v.uu);
    let nn = s(&v.n);
    let lhs = d(&v.uu, &[&v.w, &v.w, &v.w])
        + d(&v.uu, &[&v.w, &v.t])
        + &(&nn * &uu.pow(Exponent::n() - Exponent::one()).unwrap()) * &d(&v.uu, &[&v.w]).pow_u32(2)
        + &(uu.pow(Exponent::n()).unwrap() + Expr::one() - s(&v.alpha)) * &d(&v.uu, &[&v.w, &v.w]);
    expand_pde("gcc-reduced", lhs, &[v.t.clone(), v.w.clone()], &v.uu).unwrap()
}

pub fn field(name: &str, dep: &Symbol, xi: Vec<(&Symbol, Expr)>, eta: Expr) -> VectorField {
    VectorField::new(name, dep, xi.into_iter().map(|(s, e)| (s.clone(), e)), eta).unwrap()
}

pub fn x1(v: &V) -> VectorField {
    field("X1", &v.u, vec![(&v.t, Expr::one())], Expr::zero())
}

pub fn x2(v: &V) -> VectorField {
    field(
        "X2",
        &v.u,
        vec![
            (&v.t, &q(2, 1) * &s(&v.t)),
            (&v.x, s(&v.x)),
            (&v.y, &q(3, 2) * &s(&v.y)),
        ],
        -(s(&v.u) - s(&v.alpha)),
    )
}

/// `phi ∂_x - phi_t ∂_u` for an arbitrary expression `phi` in t.
pub fn x3_of(v: &V, phi: &Expr) -> VectorField {
    field("X3", &v.u, vec![(&v.x, phi.clone())], -phi.diff_sym(&v.t))
}

/// `psi ∂_y - 1/2 psi_t y ∂_x + 1/2 psi_tt y ∂_u`.
pub fn x4_of(v: &V, psi: &Expr) -> VectorField {
    let pt = psi.diff_sym(&v.t);
    let ptt = pt.diff_sym(&v.t);
    field(
        "X4",
        &v.u,
        vec![(&v.y, psi.clone()), (&v.x, &(&q(-1, 2) * &pt) * &s(&v.y))],
        &(&q(1, 2) * &ptt) * &s(&v.y),
    )
}

pub fn dx(v: &V) -> VectorField {
    field("X3'", &v.u, vec![(&v.x, Expr::one())], Expr::zero())
}

pub fn dy(v: &V) -> VectorField {
    field("X4'", &v.u, vec![(&v.y, Expr::one())], Expr::zero())
}

pub fn rat(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}
