mod common;

use common::*;
use liesym_core::expr::{Expr, Symbol, SymbolKind};
use liesym_core::jet::expand_pde;
use liesym_core::lie::VectorField;
use liesym_core::reduction::{
    check_first_integral, compare_reduced, invariants_for, pullback, solve_linear, verify_closed_form, Ansatz,
    ReducedEquation, ReductionError, Verdict,
};

fn reduced(name: &str) -> Symbol {
    Symbol::new(name, SymbolKind::Reduced)
}

fn ode(lhs: Expr, var: &Symbol, dep: &Symbol) -> ReducedEquation {
    ReducedEquation::new(lhs, vec![var.clone()], dep.clone())
}

/// `Y` differentiated `k` times along `var`.
fn yd(dep: &Symbol, var: &Symbol, k: usize) -> Expr {
    d(dep, &vec![var; k])
}

fn cc18(v: &V) -> Ansatz {
    Ansatz::new(
        "cc18",
        txy(v),
        v.u.clone(),
        vec![(v.t.clone(), s(&v.t)), (v.w.clone(), s(&v.y) - s(&v.x))],
        v.uu.clone(),
        s(&v.uu),
        vec![(v.y.clone(), s(&v.w) + s(&v.x))],
    )
    .unwrap()
}

/// Hand chain rule: `U_www + U_tw + U_w^2 + (U - 1 - alpha) U_ww`.
fn cc_reduced_oracle(v: &V) -> Expr {
    let uu = s(&v.uu);
    d(&v.uu, &[&v.w, &v.w, &v.w])
        + d(&v.uu, &[&v.t, &v.w])
        + d(&v.uu, &[&v.w]).pow_u32(2)
        + &(uu - Expr::one() - s(&v.alpha)) * &d(&v.uu, &[&v.w, &v.w])
}

#[test]
fn identity_ansatz_is_identity() {
    let v = v();
    let cc = cc(&v);
    let r = pullback(&cc, &Ansatz::identity(&txy(&v), &v.u)).unwrap();
    assert_eq!(&r.lhs, cc.lhs());
}

#[test]
fn cc_travelling_reduction_matches_hand_derivation() {
    let v = v();
    let r = pullback(&cc(&v), &cc18(&v)).unwrap();
    assert_eq!(r.lhs, cc_reduced_oracle(&v));
    let printed = ReducedEquation::new(
        cc_reduced_printed(&v).lhs().clone(),
        vec![v.t.clone(), v.w.clone()],
        v.uu.clone(),
    );
    let cmp = compare_reduced(&r, &printed, &[(v.h0.clone(), s(&v.alpha))]);
    assert_eq!(cmp.verdict, Verdict::UnderSubstitution(Expr::one()));
    assert_eq!(compare_reduced(&printed, &printed, &[]).verdict, Verdict::Exact);
}

#[test]
fn gcc_travelling_reduction_matches_hand_derivation() {
    let v = v();
    let a = Ansatz::new(
        "gcc-w",
        txy(&v),
        v.u.clone(),
        vec![(v.t.clone(), s(&v.t)), (v.w.clone(), s(&v.x) - s(&v.y))],
        v.uu.clone(),
        s(&v.uu),
        vec![(v.x.clone(), s(&v.w) + s(&v.y))],
    )
    .unwrap();
    let r = pullback(&gcc(&v), &a).unwrap();
    let uu = s(&v.uu);
    let un = uu.pow(liesym_core::Exponent::n()).unwrap();
    let un1 = uu
        .pow(liesym_core::Exponent::n() - liesym_core::Exponent::one())
        .unwrap();
    let oracle = &s(&v.beta) * &d(&v.uu, &[&v.w, &v.w, &v.w]) + d(&v.uu, &[&v.t, &v.w])
        - &(&s(&v.n) * &un1) * &d(&v.uu, &[&v.w]).pow_u32(2)
        + &(s(&v.alpha) + Expr::one() - un) * &d(&v.uu, &[&v.w, &v.w]);
    assert_eq!(r.lhs, oracle);
    let printed = ReducedEquation::new(
        gcc_reduced_printed(&v).lhs().clone(),
        vec![v.t.clone(), v.w.clone()],
        v.uu.clone(),
    );
    let cmp = compare_reduced(&r, &printed, &[(v.beta.clone(), Expr::one())]);
    assert_eq!(cmp.verdict, Verdict::Mismatch);
    assert!(!cmp.residual.is_zero());
}

#[test]
fn chained_reduction_equals_direct_one() {
    let v = v();
    let sigma = reduced("sigma");
    let yy = Symbol::dependent("Y");
    let first = pullback(&cc(&v), &cc18(&v)).unwrap();
    let first = expand_pde("cc19", first.lhs, &[v.t.clone(), v.w.clone()], &v.uu).unwrap();
    let wave = Ansatz::new(
        "wave",
        vec![v.t.clone(), v.w.clone()],
        v.uu.clone(),
        vec![(sigma.clone(), s(&v.w) - s(&v.t))],
        yy.clone(),
        s(&yy),
        vec![(v.w.clone(), s(&sigma) + s(&v.t))],
    )
    .unwrap();
    let chained = pullback(&first, &wave).unwrap();
    let direct = Ansatz::new(
        "direct",
        txy(&v),
        v.u.clone(),
        vec![(sigma.clone(), s(&v.y) - s(&v.x) - s(&v.t))],
        yy.clone(),
        s(&yy),
        vec![(v.y.clone(), s(&sigma) + s(&v.x) + s(&v.t))],
    )
    .unwrap();
    let direct = pullback(&cc(&v), &direct).unwrap();
    assert_eq!(chained, direct);
    // Y''' + Y'^2 + (Y - 2 - alpha) Y''
    let y = s(&yy);
    let oracle =
        yd(&yy, &sigma, 3) + yd(&yy, &sigma, 1).pow_u32(2) + &(y - q(2, 1) - s(&v.alpha)) * &yd(&yy, &sigma, 2);
    assert_eq!(direct.lhs, oracle);
}

#[test]
fn scaling_reduction_of_reduced_equation() {
    let v = v();
    let sigma = reduced("sigma");
    let yy = Symbol::dependent("Y");
    let z2 = field(
        "Z2",
        &v.uu,
        vec![(&v.t, &q(2, 1) * &s(&v.t)), (&v.w, s(&v.w))],
        s(&v.h0) + Expr::one() - s(&v.uu),
    );
    let a = invariants_for(&z2, &[v.t.clone(), v.w.clone()], std::slice::from_ref(&sigma), &yy).unwrap();
    let half = liesym_core::Exponent::constant(num_rational::Ratio::new(1, 2));
    let sqrt_t = s(&v.t).pow(half).unwrap();
    assert_eq!(a.new_independents, vec![(sigma.clone(), s(&v.w).div(&sqrt_t).unwrap())]);
    assert_eq!(
        a.dependent_invariant,
        Some(&(s(&v.uu) - s(&v.h0) - Expr::one()) * &sqrt_t)
    );
    let r = pullback(&cc_reduced_printed(&v), &a).unwrap();
    // Y''' + Y'^2 + Y Y'' - Y' - sigma Y'' / 2
    let y = s(&yy);
    let oracle = yd(&yy, &sigma, 3) + yd(&yy, &sigma, 1).pow_u32(2) + &y * &yd(&yy, &sigma, 2)
        - yd(&yy, &sigma, 1)
        - &(&q(1, 2) * &s(&sigma)) * &yd(&yy, &sigma, 2);
    assert_eq!(r.lhs, oracle);
}

#[test]
fn invariants_of_translations() {
    let v = v();
    let u2 = Symbol::dependent("U");
    let a = invariants_for(&dx(&v), &txy(&v), &[], &u2).unwrap();
    assert_eq!(a.new_independents, vec![(v.t.clone(), s(&v.t)), (v.y.clone(), s(&v.y))]);
    assert_eq!(a.rule, s(&u2));
    let sum = dx(&v).add(&dy(&v)).unwrap();
    let a = invariants_for(&sum, &txy(&v), std::slice::from_ref(&v.w), &u2).unwrap();
    assert_eq!(a.new_independents[1], (v.w.clone(), s(&v.y) - s(&v.x)));
    let r = pullback(&cc(&v), &a).unwrap();
    assert_eq!(r.lhs, cc_reduced_oracle(&v));
}

#[test]
fn invariants_are_annihilated() {
    let v = v();
    let names = [reduced("p"), reduced("q")];
    let ninv = s(&v.n).pow(liesym_core::Exponent::int(-1)).unwrap();
    let fields: Vec<VectorField> = vec![
        x1(&v),
        dx(&v).add(&dy(&v)).unwrap(),
        field(
            "Y2",
            &v.u,
            vec![
                (&v.t, &q(2, 1) * &s(&v.t)),
                (&v.x, s(&v.x)),
                (&v.y, &q(3, 2) * &s(&v.y)),
            ],
            -(&ninv * &s(&v.u)),
        ),
        field(
            "mixed",
            &v.u,
            vec![(&v.t, Expr::one()), (&v.x, s(&v.x) + q(1, 1))],
            &q(2, 1) * &s(&v.u),
        ),
    ];
    for f in &fields {
        let a = invariants_for(f, &txy(&v), &names, &v.uu).unwrap();
        for (_, inv) in &a.new_independents {
            assert!(f.act(inv).is_zero(), "{} on {}", f.name, inv);
        }
        assert!(f.act(a.dependent_invariant.as_ref().unwrap()).is_zero(), "{}", f.name);
    }
}

#[test]
fn projective_field_is_unsupported() {
    let v = v();
    let z3 = field(
        "Z3",
        &v.uu,
        vec![(&v.t, s(&v.t).pow_u32(2)), (&v.w, &s(&v.t) * &s(&v.w))],
        &(&(s(&v.h0) + Expr::one() - s(&v.uu)) * &s(&v.t)) + &s(&v.w),
    );
    let r = invariants_for(
        &z3,
        &[v.t.clone(), v.w.clone()],
        &[reduced("lambda")],
        &Symbol::dependent("Y"),
    );
    assert!(matches!(r, Err(ReductionError::Unsupported(_))));
}

#[test]
fn missing_hint_leaves_old_variable() {
    let v = v();
    let mut a = cc18(&v);
    a.hints.clear();
    a.new_independents[1].1 = &s(&v.y) * &s(&v.x);
    assert!(matches!(
        pullback(&cc(&v), &a),
        Err(ReductionError::ResidualOldVariable { .. })
    ));
}

#[test]
fn degenerate_ansatz_is_rejected() {
    let v = v();
    let r = Ansatz::new(
        "bad",
        txy(&v),
        v.u.clone(),
        vec![
            (v.w.clone(), s(&v.y) - s(&v.x)),
            (reduced("z"), &q(2, 1) * &(s(&v.x) - s(&v.y))),
        ],
        v.uu.clone(),
        s(&v.uu),
        vec![],
    );
    assert!(matches!(r, Err(ReductionError::DegenerateJacobian)));
}

#[test]
fn cc25_against_its_first_integral() {
    let v = v();
    let yy = Symbol::dependent("Y");
    let w = &v.w;
    let y = s(&yy);
    let y0 = s(&Symbol::parameter("Y0"));
    let printed = yd(&yy, w, 3) + yd(&yy, w, 1).pow_u32(2) - &y * &yd(&yy, w, 2);
    let derived = yd(&yy, w, 3) + yd(&yy, w, 1).pow_u32(2) + &y * &yd(&yy, w, 2);
    let fi = yd(&yy, w, 2) + &y * &yd(&yy, w, 1) + y0;
    let ok = check_first_integral(&ode(derived, w, &yy), &fi).unwrap();
    assert!(ok.residual.is_zero());
    assert_eq!(ok.gap, 1);
    let bad = check_first_integral(&ode(printed, w, &yy), &fi).unwrap();
    assert_eq!(bad.raw, &(&q(2, 1) * &y) * &yd(&yy, w, 2));
    assert!(!bad.residual.is_zero());
}

#[test]
fn synthetic_pair_integrates() {
    let v = v();
    let yy = Symbol::dependent("Y");
    let y = s(&yy);
    let fi = yd(&yy, &v.w, 1) + &q(1, 2) * &y.pow_u32(2);
    let eq = yd(&yy, &v.w, 2) + &y * &yd(&yy, &v.w, 1);
    let c = check_first_integral(&ode(eq, &v.w, &yy), &fi).unwrap();
    assert!(c.residual.is_zero() && c.raw.is_zero());
    assert_eq!(c.multiplier, Expr::one());
}

#[test]
fn order_gap_is_checked() {
    let v = v();
    let yy = Symbol::dependent("Y");
    let eq = yd(&yy, &v.w, 1);
    assert!(matches!(
        check_first_integral(&ode(eq.clone(), &v.w, &yy), &eq),
        Err(ReductionError::OrderGap { .. })
    ));
}

#[test]
fn tanh_family_amplitude() {
    let v = v();
    let yy = Symbol::dependent("Y");
    let (amp, c, w0) = (Symbol::parameter("A"), Symbol::parameter("c"), Symbol::parameter("w0"));
    let z = &(s(&v.w) - s(&w0)) * &s(&c).pow(liesym_core::Exponent::int(-1)).unwrap();
    let sol = &s(&amp) * &Expr::tanh(&z * &q(1, 2));
    let eq = yd(&yy, &v.w, 2) + &s(&yy) * &yd(&yy, &v.w, 1);
    let check = verify_closed_form(&eq, &yy, std::slice::from_ref(&v.w), &sol, &[]).unwrap();
    assert!(!check.certified());
    assert_eq!(check.constraints.len(), 1);
    let value = solve_linear(&check.constraints[0], &amp).unwrap();
    assert_eq!(value, s(&c).pow(liesym_core::Exponent::int(-1)).unwrap());
    let fixed = sol.substitute_sym(&amp, &value).unwrap();
    assert!(verify_closed_form(&eq, &yy, std::slice::from_ref(&v.w), &fixed, &[])
        .unwrap()
        .certified());
}

#[test]
fn z4_solution_with_side_condition() {
    let v = v();
    let eq = cc_reduced_printed(&v);
    let phi = func("phi", &v.t);
    let u0 = func("U0", &v.t);
    let ph_inv = Expr::func(phi.clone()).pow(liesym_core::Exponent::int(-1)).unwrap();
    let sol = Expr::func(u0.clone()) + &(&fd(&phi, 1) * &ph_inv) * &s(&v.w);
    let indeps = [v.t.clone(), v.w.clone()];
    let free = verify_closed_form(eq.lhs(), &v.uu, &indeps, &sol, &[]).unwrap();
    assert_eq!(free.residual, &fd(&phi, 2) * &ph_inv);
    let phi_tt = phi.with_orders(liesym_core::MultiIndex::from_vars(&[v.t.clone(), v.t.clone()]));
    let side = [(phi_tt, Expr::zero())];
    assert!(verify_closed_form(eq.lhs(), &v.uu, &indeps, &sol, &side)
        .unwrap()
        .certified());

    // the printed form, with g = 1 / (phi1 t + phi0) kept opaque through g_t = -phi1 g^2
    let g = func("g", &v.t);
    let phi1 = s(&Symbol::parameter("phi1"));
    let sol = Expr::func(u0) + &(&phi1 * &Expr::func(g.clone())) * &s(&v.w);
    let side = [(
        g.with_orders(liesym_core::MultiIndex::from_vars(std::slice::from_ref(&v.t))),
        -(&phi1 * &Expr::func(g).pow_u32(2)),
    )];
    assert!(verify_closed_form(eq.lhs(), &v.uu, &indeps, &sol, &side)
        .unwrap()
        .certified());
}

#[test]
fn constant_solves_cc() {
    let v = v();
    let k = s(&Symbol::parameter("k"));
    let cc = cc(&v);
    assert!(verify_closed_form(cc.lhs(), &v.u, &txy(&v), &k, &[])
        .unwrap()
        .certified());
}

fn scaling_ansatz(v: &V, shift: Expr) -> Ansatz {
    let zeta = reduced("zeta");
    let hh = Symbol::dependent("H");
    let t = s(&v.t);
    let sqrt_t = t
        .pow(liesym_core::Exponent::constant(num_rational::Ratio::new(1, 2)))
        .unwrap();
    let inv_2n = liesym_core::Exponent::new(0.into(), 0.into(), num_rational::Ratio::new(-1, 2));
    Ansatz::new(
        "scaling",
        vec![v.t.clone(), v.w.clone()],
        v.uu.clone(),
        vec![(zeta.clone(), (s(&v.w) - &shift * &t).div(&sqrt_t).unwrap())],
        hh.clone(),
        &s(&hh) * &t.pow(inv_2n).unwrap(),
        vec![(v.w.clone(), &s(&zeta) * &sqrt_t + &shift * &t)],
    )
    .unwrap()
}

/// `2n H H''' + n H (2 H^n - zeta) H'' - ((n + 1) H - 2 n^2 H^n H') H'`.
fn gcc_scaled_printed(v: &V) -> Expr {
    let zeta = reduced("zeta");
    let hh = Symbol::dependent("H");
    let (h, n) = (s(&hh), s(&v.n));
    let hn = h.pow(liesym_core::Exponent::n()).unwrap();
    let two_n = &q(2, 1) * &n;
    &(&two_n * &h) * &yd(&hh, &zeta, 3) + &(&(&n * &h) * &(&q(2, 1) * &hn - s(&zeta))) * &yd(&hh, &zeta, 2)
        - &(&(&(&n + &Expr::one()) * &h) - &(&(&(&two_n * &n) * &hn) * &yd(&hh, &zeta, 1))) * &yd(&hh, &zeta, 1)
}

#[test]
fn scaling_reduction_of_power_law_equation() {
    let v = v();
    let zeta = reduced("zeta");
    let hh = Symbol::dependent("H");
    let r = pullback(&gcc_reduced_printed(&v), &scaling_ansatz(&v, Expr::one() - s(&v.alpha))).unwrap();
    let printed = ReducedEquation::new(gcc_scaled_printed(&v), vec![zeta.clone()], hh.clone());
    let cmp = compare_reduced(&r, &printed, &[]);
    let factor = (&(&q(2, 1) * &s(&v.n)) * &s(&hh)).recip().unwrap();
    assert_eq!(cmp.verdict, Verdict::Multiple(factor));
    // the printed similarity variable leaves a power of t behind
    let printed_shift = -(Expr::one() + s(&v.alpha));
    assert!(matches!(
        pullback(&gcc_reduced_printed(&v), &scaling_ansatz(&v, printed_shift)),
        Err(ReductionError::ResidualOldVariable { .. })
    ));
}

#[test]
fn scaled_equation_first_integral() {
    let v = v();
    let zeta = reduced("zeta");
    let hh = Symbol::dependent("H");
    let (h, z, n) = (s(&hh), s(&zeta), s(&v.n));
    let hn = h.pow(liesym_core::Exponent::n()).unwrap();
    let h1 = s(&Symbol::parameter("H1"));
    let ninv = n.pow(liesym_core::Exponent::int(-1)).unwrap();
    let eq = ode(gcc_scaled_printed(&v), &zeta, &hh);
    let consistent =
        yd(&hh, &zeta, 2) - &(&q(1, 2) * &ninv) * &h + &(hn.clone() - &q(1, 2) * &z) * &yd(&hh, &zeta, 1) + h1.clone();
    let c = check_first_integral(&eq, &consistent).unwrap();
    assert!(c.raw.is_zero(), "{}", c.raw);
    let printed =
        yd(&hh, &zeta, 2) - &(&q(1, 2) * &ninv) * &h + &(hn - &(&q(1, 2) * &z) * &h) * &yd(&hh, &zeta, 1) + h1;
    let c = check_first_integral(&eq, &printed).unwrap();
    assert!(!c.residual.is_zero());
}
