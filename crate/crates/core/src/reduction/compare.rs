use super::ReducedEquation;
use crate::expr::{Atom, Expr, Monomial, Substitution, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact,
    /// `derived = factor * expected` for a nonzero monomial factor.
    Multiple(Expr),
    /// As `Multiple`, once the substitutions are applied to the expected form.
    UnderSubstitution(Expr),
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub verdict: Verdict,
    /// `derived - factor * expected`, after substitutions when they were used.
    pub residual: Expr,
}

impl Comparison {
    pub fn matches(&self) -> bool {
        self.verdict != Verdict::Mismatch
    }
}

fn derivative_part(m: &Monomial) -> Monomial {
    m.split(|a| matches!(a, Atom::Jet(j) if !j.index.is_empty())).0
}

/// Best factor `f` with `derived = f * expected`: candidates pair the first
/// term of `derived` with each term of `expected` carrying the same
/// derivatives. Falls back to one when nothing cancels.
fn multiple(derived: &Expr, expected: &Expr) -> (Expr, Expr) {
    let fallback = || (Expr::one(), derived - expected);
    let Some((dm, dc)) = derived.terms().first() else {
        return fallback();
    };
    let key = derivative_part(dm);
    let lhs = Expr::from_term(dm.clone(), dc.clone());
    for (em, ec) in expected.terms() {
        if derivative_part(em) != key {
            continue;
        }
        let Ok(f) = lhs.div(&Expr::from_term(em.clone(), ec.clone())) else {
            continue;
        };
        let residual = derived - &(&f * expected);
        if residual.is_zero() {
            return (f, residual);
        }
    }
    fallback()
}

/// Compares a derived reduced equation with an expected one.
/// `substitutions` (e.g. `h0 -> alpha`) are tried only if the plain
/// comparison fails.
pub fn compare_reduced(
    derived: &ReducedEquation,
    expected: &ReducedEquation,
    substitutions: &[(Symbol, Expr)],
) -> Comparison {
    let (d, e) = (&derived.lhs, &expected.lhs);
    if d == e {
        return Comparison {
            verdict: Verdict::Exact,
            residual: Expr::zero(),
        };
    }
    let (f, residual) = multiple(d, e);
    if residual.is_zero() {
        return Comparison {
            verdict: Verdict::Multiple(f),
            residual,
        };
    }
    if !substitutions.is_empty() {
        let map: Substitution = substitutions.iter().map(|(s, x)| (Atom::sym(s), x.clone())).collect();
        if let Ok(sub) = e.substitute_all(&map) {
            let (f, residual) = multiple(d, &sub);
            let verdict = if residual.is_zero() {
                Verdict::UnderSubstitution(f)
            } else {
                Verdict::Mismatch
            };
            return Comparison { verdict, residual };
        }
    }
    Comparison {
        verdict: Verdict::Mismatch,
        residual,
    }
}
