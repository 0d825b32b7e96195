use std::collections::BTreeSet;

use super::{jet_order, linear_coefficient, ReducedEquation, ReductionError};
use crate::expr::{Atom, Expr, FuncSymbol, MultiIndex, Substitution, Symbol};
use crate::jet::{expand_pde, on_manifold, total_derivative};

/// A relation `f_J = value` on an opaque function, applied to `f_J` and all
/// its higher derivatives.
pub type SideCondition = (FuncSymbol, Expr);

fn index_minus(a: &MultiIndex, b: &MultiIndex) -> Option<MultiIndex> {
    let mut out = MultiIndex::empty();
    for (s, k) in a.entries() {
        let rest = k.checked_sub(b.count(s))?;
        out = out.with_count(s, rest);
    }
    let covered = b.entries().iter().all(|(s, k)| a.count(s) >= *k);
    covered.then_some(out)
}

/// Rewrites every derivative covered by a side condition until none is left.
pub fn apply_side_conditions(e: &Expr, side: &[SideCondition]) -> Result<Expr, ReductionError> {
    let mut e = e.clone();
    for _ in 0..16 {
        let mut map = Substitution::new();
        for a in e.atoms() {
            let Atom::Func(g) = &a else { continue };
            for (f, value) in side {
                if g.underived() != f.underived() {
                    continue;
                }
                if let Some(rest) = index_minus(&g.orders, &f.orders) {
                    map.insert(a.clone(), value.diff_index(&rest));
                    break;
                }
            }
        }
        if map.is_empty() {
            return Ok(e);
        }
        e = e.substitute_all(&map)?;
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstIntegralCheck {
    /// Number of differentiations applied to the candidate.
    pub gap: u32,
    /// `m` in `D^gap(candidate) - m * equation`.
    pub multiplier: Expr,
    /// `D^gap(candidate) - m * equation`.
    pub raw: Expr,
    /// `raw` with the candidate and its derivatives used to eliminate the
    /// highest derivatives. Zero certifies the first integral.
    pub residual: Expr,
}

/// Checks that `candidate = 0` integrates `eq` once or twice along its single
/// independent variable.
pub fn check_first_integral(eq: &ReducedEquation, candidate: &Expr) -> Result<FirstIntegralCheck, ReductionError> {
    let [var] = eq.independents.as_slice() else {
        return Err(ReductionError::NotAnOde(eq.independents.len()));
    };
    let dep = &eq.dependent;
    let (n, m) = (eq.order(), jet_order(candidate, dep));
    let gap = n
        .checked_sub(m)
        .filter(|g| (1..=2).contains(g))
        .ok_or(ReductionError::OrderGap { eq: n, fi: m })?;
    let mut derived = vec![candidate.clone()];
    for _ in 0..gap {
        let next = total_derivative(derived.last().expect("non-empty"), var);
        derived.push(next);
    }
    let lead = Atom::jet(dep, MultiIndex::empty().with_count(var, n));
    let not_linear = |e: &Expr| ReductionError::NotLinear(e.to_string());
    let cg = linear_coefficient(&derived[gap as usize], &lead).ok_or_else(|| not_linear(candidate))?;
    let ce = linear_coefficient(&eq.lhs, &lead).ok_or_else(|| not_linear(&eq.lhs))?;
    let multiplier = cg.div(&ce)?;
    let raw = &derived[gap as usize] - &(&multiplier * &eq.lhs);
    let mut residual = raw.clone();
    for d in derived.iter().rev() {
        match expand_pde("first integral", d.clone(), std::slice::from_ref(var), dep) {
            Ok(p) => residual = on_manifold(&residual, &p)?,
            Err(_) => break,
        }
    }
    Ok(FirstIntegralCheck {
        gap,
        multiplier,
        raw,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub residual: Expr,
    /// Coefficients of the residual in the independent variables, opaque
    /// functions and tanh/exp atoms, stripped of monomial factors.
    pub constraints: Vec<Expr>,
}

impl ClosedFormCheck {
    pub fn certified(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Substitutes `solution` for the dependent variable of `lhs`, applies side
/// conditions, and splits any residual into constraints on the constants.
pub fn verify_closed_form(
    lhs: &Expr,
    dependent: &Symbol,
    independents: &[Symbol],
    solution: &Expr,
    side: &[SideCondition],
) -> Result<ClosedFormCheck, ReductionError> {
    let mut map = Substitution::new();
    for j in lhs.jet_vars() {
        if &j.dependent == dependent {
            let value = apply_side_conditions(&solution.diff_index(&j.index), side)?;
            map.insert(Atom::Jet(j), value);
        }
    }
    let residual = apply_side_conditions(&lhs.substitute_all(&map)?, side)?;
    let splitting = |a: &Atom| match a {
        Atom::Tanh(_) | Atom::Exp(_) | Atom::Func(_) => true,
        Atom::Sym(s) => independents.contains(s),
        _ => false,
    };
    let constraints: BTreeSet<Expr> = residual
        .collect_by(splitting)
        .into_values()
        .map(|c| strip_content(&c))
        .collect();
    Ok(ClosedFormCheck {
        residual,
        constraints: constraints.into_iter().collect(),
    })
}

fn strip_content(e: &Expr) -> Expr {
    let content = e.monomial_content();
    let e = if content.is_one() {
        e.clone()
    } else {
        e.div(&content.to_expr()).unwrap_or_else(|_| e.clone())
    };
    e.monic()
}

/// Solves `constraint = 0` for `unknown` when it enters linearly with a
/// monomial coefficient.
pub fn solve_linear(constraint: &Expr, unknown: &Symbol) -> Option<Expr> {
    let atom = Atom::sym(unknown);
    let a = linear_coefficient(constraint, &atom)?;
    if a.is_zero() || a.contains_symbol(unknown) {
        return None;
    }
    let b = constraint - &(&a * &Expr::atom(atom));
    if b.contains_symbol(unknown) {
        return None;
    }
    (-b).div(&a).ok()
}
