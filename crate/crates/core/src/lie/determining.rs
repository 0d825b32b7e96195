use std::collections::BTreeSet;

use super::{check_symmetry, LieError, VectorField};
use crate::expr::{Atom, Expr, ExprError, FuncSymbol};
use crate::jet::Pde;

/// Linear system on the generator coefficients of a PDE's point symmetries.
#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    /// `ξ^i(x, u)` for each independent variable, then `η(x, u)`.
    pub unknowns: Vec<FuncSymbol>,
    pub equations: Vec<Expr>,
}

impl DeterminingSystem {
    /// Substitutes explicit coefficient functions (`name -> body`) into every
    /// equation and returns the residuals.
    pub fn residuals(&self, solution: &[(String, Expr)]) -> Result<Vec<Expr>, ExprError> {
        self.equations
            .iter()
            .map(|eq| {
                let mut e = eq.clone();
                for (name, body) in solution {
                    e = e.substitute_function(name, body)?;
                }
                Ok(e)
            })
            .collect()
    }

    /// True when every equation vanishes under the given coefficients.
    pub fn annihilated_by(&self, solution: &[(String, Expr)]) -> Result<bool, ExprError> {
        Ok(self.residuals(solution)?.iter().all(Expr::is_zero))
    }

    /// The generic generator whose coefficients are the unknowns.
    pub fn unknown_names(&self) -> Vec<String> {
        self.unknowns.iter().map(|f| f.name.to_string()).collect()
    }
}

/// Name of the opaque unknown for `ξ^s`.
pub fn xi_name(s: &crate::expr::Symbol) -> String {
    format!("xi_{}", s.name())
}

pub const ETA_NAME: &str = "eta";

/// Derives the determining equations of `pde`: the symmetry condition for a
/// generator with opaque coefficients, restricted to the manifold and split
/// by monomials in the jet variables of order one and higher.
///
/// Equations are scaled to have leading coefficient one and deduplicated,
/// not further simplified.
pub fn determining_equations(pde: &Pde) -> Result<DeterminingSystem, LieError> {
    let mut args = pde.independents().to_vec();
    args.push(pde.dependent().clone());
    let mut unknowns = Vec::new();
    let mut xi = Vec::new();
    for s in pde.independents() {
        let f = FuncSymbol::new(&xi_name(s), args.clone());
        xi.push((s.clone(), Expr::func(f.clone())));
        unknowns.push(f);
    }
    let eta = FuncSymbol::new(ETA_NAME, args);
    unknowns.push(eta.clone());
    let field = VectorField::new("generic", pde.dependent(), xi, Expr::func(eta))?;
    let residual = check_symmetry(&field, pde)?;
    let groups = residual.collect_by(|a| matches!(a, Atom::Jet(j) if !j.index.is_empty()));
    let equations: BTreeSet<Expr> = groups.into_values().map(|e| e.monic()).collect();
    Ok(DeterminingSystem {
        unknowns,
        equations: equations.into_iter().collect(),
    })
}
