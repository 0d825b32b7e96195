//! Jet coordinates, total derivatives and restriction to a PDE's solution
//! manifold.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{Atom, Expr, ExprError, JetVar, Symbol, SymbolKind};

/// Highest jet order any computation here produces: a third-order equation
/// plus one total derivative.
pub const MAX_JET_ORDER: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("equation does not contain any derivative of `{0}`")]
    NoDerivative(String),
    #[error("nonlinear in leading derivative {0}")]
    NonlinearLeading(String),
    #[error("coefficient of leading derivative {leading} is not a single monomial: {coeff}")]
    LeadingCoefficient { leading: String, coeff: String },
    #[error("jet order {0} exceeds the supported maximum")]
    OrderTooHigh(u32),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Total derivative `D_i e = ∂_i e + Σ_J u_{J+i} ∂e/∂u_J`.
///
/// Opaque functions whose arguments include the dependent variable pick up
/// the chain-rule term through `∂/∂u`.
pub fn total_derivative(e: &Expr, var: &Symbol) -> Expr {
    let mut out = e.diff_sym(var);
    let mut jets = e.jet_vars();
    for a in e.atoms() {
        if let Atom::Func(f) = a {
            for s in f.args.iter().filter(|s| s.kind() == SymbolKind::Dependent) {
                jets.insert(JetVar::base(s.clone()));
            }
        }
    }
    for j in jets {
        let d = e.diff(&Atom::Jet(j.clone()));
        if !d.is_zero() {
            out += &d * &Expr::atom(Atom::Jet(j.derive(var)));
        }
    }
    out
}

/// Repeated total derivative along the variables of a multi-index.
pub fn total_derivative_index(e: &Expr, idx: &crate::expr::MultiIndex) -> Expr {
    idx.vars().iter().fold(e.clone(), |acc, v| total_derivative(&acc, v))
}

/// A scalar PDE `lhs = 0`, solved for its leading derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pde {
    pub name: String,
    lhs: Expr,
    independents: Vec<Symbol>,
    dependent: Symbol,
    parameters: Vec<Symbol>,
    leading: JetVar,
    leading_coeff: Expr,
    leading_rhs: Expr,
}

impl Pde {
    pub fn lhs(&self) -> &Expr {
        &self.lhs
    }
    pub fn independents(&self) -> &[Symbol] {
        &self.independents
    }
    pub fn dependent(&self) -> &Symbol {
        &self.dependent
    }
    pub fn parameters(&self) -> &[Symbol] {
        &self.parameters
    }
    pub fn leading(&self) -> &JetVar {
        &self.leading
    }
    pub fn leading_coeff(&self) -> &Expr {
        &self.leading_coeff
    }
    /// The leading derivative expressed through the other terms.
    pub fn leading_rhs(&self) -> &Expr {
        &self.leading_rhs
    }
    /// Highest derivative order present.
    pub fn order(&self) -> u32 {
        self.leading.order()
    }
}

/// Expands an equation (nested derivatives are already applied by
/// normalization) and solves it for its leading derivative: the
/// highest-order jet variable of `dependent`, ties going to the largest
/// multi-index (so `u_xxx` over `u_txx`).
pub fn expand_pde(name: &str, lhs: Expr, independents: &[Symbol], dependent: &Symbol) -> Result<Pde, JetError> {
    let jets: Vec<JetVar> = lhs
        .jet_vars()
        .into_iter()
        .filter(|j| &j.dependent == dependent && !j.index.is_empty())
        .collect();
    let leading = jets
        .iter()
        .max_by(|a, b| a.index.cmp(&b.index))
        .cloned()
        .ok_or_else(|| JetError::NoDerivative(dependent.name().to_string()))?;
    if leading.order() > MAX_JET_ORDER {
        return Err(JetError::OrderTooHigh(leading.order()));
    }
    let latom = Atom::Jet(leading.clone());
    let collected = lhs.collect_by(|a| *a == latom);
    let lead_name = Expr::atom(latom.clone()).to_string();
    let mut coeff = Expr::zero();
    let mut rest = Expr::zero();
    for (key, value) in collected {
        if key.is_one() {
            rest = value;
        } else if key.factors().len() == 1 && key.factors()[0].1.is_one() {
            coeff = value;
        } else {
            return Err(JetError::NonlinearLeading(lead_name));
        }
    }
    if coeff.as_monomial().is_none() {
        return Err(JetError::LeadingCoefficient {
            leading: lead_name,
            coeff: coeff.to_string(),
        });
    }
    let leading_rhs = (-rest).div(&coeff)?;
    let parameters: BTreeSet<Symbol> = lhs
        .atoms()
        .into_iter()
        .filter_map(|a| match a {
            Atom::Sym(s) if s.kind() == SymbolKind::Parameter => Some(s),
            _ => None,
        })
        .collect();
    Ok(Pde {
        name: name.to_string(),
        lhs,
        independents: independents.to_vec(),
        dependent: dependent.clone(),
        parameters: parameters.into_iter().collect(),
        leading,
        leading_coeff: coeff,
        leading_rhs,
    })
}

/// Restricts an expression to the solution manifold by replacing the
/// leading derivative with its solved form. The solved form never contains
/// the leading derivative, so one pass is enough.
pub fn on_manifold(e: &Expr, pde: &Pde) -> Result<Expr, ExprError> {
    let latom = Atom::Jet(pde.leading.clone());
    if !e.depends_on(&latom) {
        return Ok(e.clone());
    }
    e.substitute(&latom, &pde.leading_rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::MultiIndex;

    struct Cc {
        t: Symbol,
        x: Symbol,
        y: Symbol,
        u: Symbol,
        alpha: Symbol,
    }

    fn syms() -> Cc {
        Cc {
            t: Symbol::independent("t"),
            x: Symbol::independent("x"),
            y: Symbol::independent("y"),
            u: Symbol::dependent("u"),
            alpha: Symbol::parameter("alpha"),
        }
    }

    fn cc_nested(s: &Cc) -> Expr {
        let u = Expr::sym(&s.u);
        let inner = Expr::jet(&s.u, std::slice::from_ref(&s.t))
            + &Expr::sym(&s.alpha) * &Expr::jet(&s.u, std::slice::from_ref(&s.x))
            - &u * &Expr::jet(&s.u, std::slice::from_ref(&s.x))
            + Expr::jet(&s.u, &[s.x.clone(), s.x.clone()]);
        total_derivative(&inner, &s.x) + Expr::jet(&s.u, &[s.y.clone(), s.y.clone()])
    }

    #[test]
    fn total_derivative_examples() {
        let s = syms();
        let u = Expr::sym(&s.u);
        assert_eq!(total_derivative(&u, &s.x), Expr::jet(&s.u, std::slice::from_ref(&s.x)));
        let phi = Expr::func(crate::expr::FuncSymbol::new("phi", vec![s.t.clone()]));
        assert!(total_derivative(&phi, &s.x).is_zero());
        let ux = Expr::jet(&s.u, std::slice::from_ref(&s.x));
        let uxx = Expr::jet(&s.u, &[s.x.clone(), s.x.clone()]);
        assert_eq!(total_derivative(&(&u * &ux), &s.x), ux.pow_u32(2) + &u * &uxx);
    }

    #[test]
    fn chain_rule_through_function_of_u() {
        let s = syms();
        let xi = crate::expr::FuncSymbol::new("xi", vec![s.t.clone(), s.x.clone(), s.u.clone()]);
        let d = total_derivative(&Expr::func(xi.clone()), &s.x);
        let expected = Expr::func(xi.with_orders(MultiIndex::from_vars([&s.x])))
            + &Expr::func(xi.with_orders(MultiIndex::from_vars([&s.u]))) * &Expr::jet(&s.u, std::slice::from_ref(&s.x));
        assert_eq!(d, expected);
    }

    #[test]
    fn cc_expansion_and_leading() {
        let s = syms();
        let pde = expand_pde("cc", cc_nested(&s), &[s.t.clone(), s.x.clone(), s.y.clone()], &s.u).unwrap();
        let j = |v: &[&Symbol]| Expr::jet(&s.u, &v.iter().map(|x| (*x).clone()).collect::<Vec<_>>());
        let u = Expr::sym(&s.u);
        let a = Expr::sym(&s.alpha);
        let expanded = j(&[&s.t, &s.x]) + &a * &j(&[&s.x, &s.x]) - j(&[&s.x]).pow_u32(2) - &u * &j(&[&s.x, &s.x])
            + j(&[&s.x, &s.x, &s.x])
            + j(&[&s.y, &s.y]);
        assert_eq!(pde.lhs(), &expanded);
        assert_eq!(Expr::atom(Atom::Jet(pde.leading().clone())), j(&[&s.x, &s.x, &s.x]));
        assert_eq!(pde.leading_rhs(), &-(expanded.clone() - j(&[&s.x, &s.x, &s.x])));
        assert_eq!(pde.parameters(), std::slice::from_ref(&s.alpha));

        assert_eq!(on_manifold(&j(&[&s.y, &s.y]), &pde).unwrap(), j(&[&s.y, &s.y]));
        assert!(on_manifold(pde.lhs(), &pde).unwrap().is_zero());
    }

    #[test]
    fn nonlinear_leading_is_rejected() {
        let s = syms();
        let uxxx = Expr::jet(&s.u, &[s.x.clone(), s.x.clone(), s.x.clone()]);
        let lhs = uxxx.pow_u32(2) + Expr::jet(&s.u, std::slice::from_ref(&s.t));
        assert!(matches!(
            expand_pde("bad", lhs, &[s.t.clone(), s.x.clone()], &s.u),
            Err(JetError::NonlinearLeading(_))
        ));
    }
}
