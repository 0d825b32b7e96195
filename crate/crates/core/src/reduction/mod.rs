//! Similarity reductions: invariants of translation and scaling generators,
//! pullback of a PDE under an ansatz, comparison with expected reduced
//! forms, first integrals and closed-form solutions.

mod ansatz;
mod compare;
mod integral;

use thiserror::Error;

use crate::expr::{Atom, Expr, ExprError, Symbol};
use crate::jet::JetError;

pub use ansatz::{invariants_for, pullback, Ansatz};
pub use compare::{compare_reduced, Comparison, Verdict};
pub use integral::{
    apply_side_conditions, check_first_integral, solve_linear, verify_closed_form, ClosedFormCheck, FirstIntegralCheck,
    SideCondition,
};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("unsupported field shape: {0}")]
    Unsupported(String),
    #[error("residual old variable {var} in {expr}")]
    ResidualOldVariable { var: String, expr: String },
    #[error("ansatz Jacobian has no nonzero maximal minor")]
    DegenerateJacobian,
    #[error("ansatz rule does not involve {0}")]
    MissingDependent(String),
    #[error("first integral of order {fi} cannot integrate an equation of order {eq}")]
    OrderGap { eq: u32, fi: u32 },
    #[error("{0} is not linear in its highest derivative")]
    NotLinear(String),
    #[error("reduced equation must have a single independent variable, found {0}")]
    NotAnOde(usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// A PDE or ODE in the variables of an ansatz.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedEquation {
    pub lhs: Expr,
    pub independents: Vec<Symbol>,
    pub dependent: Symbol,
}

impl ReducedEquation {
    pub fn new(lhs: Expr, independents: Vec<Symbol>, dependent: Symbol) -> Self {
        ReducedEquation {
            lhs,
            independents,
            dependent,
        }
    }

    /// Highest derivative order of the dependent variable.
    pub fn order(&self) -> u32 {
        jet_order(&self.lhs, &self.dependent)
    }
}

pub(crate) fn jet_order(e: &Expr, dep: &Symbol) -> u32 {
    e.jet_vars()
        .iter()
        .filter(|j| &j.dependent == dep)
        .map(|j| j.order())
        .max()
        .unwrap_or(0)
}

/// Linear coefficient of `a` in `e`, or `None` if `a` occurs nonlinearly.
pub(crate) fn linear_coefficient(e: &Expr, a: &Atom) -> Option<Expr> {
    let mut coeff = Expr::zero();
    for (key, value) in e.collect_by(|b| b == a) {
        if key.is_one() {
            continue;
        }
        if key.factors().len() == 1 && key.factors()[0].1.is_one() {
            coeff = value;
        } else {
            return None;
        }
    }
    Some(coeff)
}
