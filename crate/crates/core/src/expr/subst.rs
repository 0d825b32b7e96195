use std::collections::BTreeMap;

use super::{rational_to_q, Atom, Exponent, Expr, ExprError, Symbol};

/// Simultaneous replacement of atoms by expressions.
pub type Substitution = BTreeMap<Atom, Expr>;

impl Expr {
    /// Replaces every occurrence of a single atom.
    pub fn substitute(&self, target: &Atom, replacement: &Expr) -> Result<Expr, ExprError> {
        let mut map = Substitution::new();
        map.insert(target.clone(), replacement.clone());
        self.substitute_all(&map)
    }

    pub fn substitute_sym(&self, s: &Symbol, replacement: &Expr) -> Result<Expr, ExprError> {
        self.substitute(&Atom::sym(s), replacement)
    }

    /// Replaces all mapped atoms at once, including inside `exp`/`tanh`
    /// arguments, and renormalizes.
    ///
    /// Nonnegative integer powers of a target expand multinomially; any
    /// other power needs the replacement to be a single monomial. Mapping
    /// the exponent parameter `n` to a rational constant also evaluates
    /// every `n`-dependent exponent.
    pub fn substitute_all(&self, map: &Substitution) -> Result<Expr, ExprError> {
        if map.is_empty() {
            return Ok(self.clone());
        }
        let n_value = exponent_parameter_value(map)?;
        let mut out = Vec::new();
        for (m, c) in self.terms() {
            let mut acc = Expr::constant(c.clone());
            for (a, e) in m.factors() {
                let e = match n_value {
                    Some(nv) if !e.is_constant() => Exponent::constant(
                        e.eval_at(nv)
                            .ok_or_else(|| ExprError::UnsupportedExponent(e.to_string()))?,
                    ),
                    _ => *e,
                };
                let base = substitute_atom(a, map)?;
                let factor = match base {
                    Some(b) => b.pow(e)?,
                    None => Expr::atom(a.clone()).pow(e)?,
                };
                acc = &acc * &factor;
                if acc.is_zero() {
                    break;
                }
            }
            out.extend(acc.into_terms());
        }
        Ok(Expr::from_terms(out))
    }

    /// Replaces an opaque function (every derivative of it) by an explicit
    /// expression in its arguments: `phi_{tt}` becomes `body_{tt}`.
    pub fn substitute_function(&self, name: &str, body: &Expr) -> Result<Expr, ExprError> {
        let mut map = Substitution::new();
        for a in self.atoms() {
            if let Atom::Func(f) = &a {
                if &*f.name == name {
                    let repl = body.diff_index(&f.orders);
                    map.insert(a.clone(), repl);
                }
            }
        }
        self.substitute_all(&map)
    }
}

fn exponent_parameter_value(map: &Substitution) -> Result<Option<super::Q>, ExprError> {
    for (a, r) in map {
        if let Atom::Sym(s) = a {
            if s.is_exponent_parameter() {
                return match r.as_rational().as_ref().and_then(rational_to_q) {
                    Some(q) => Ok(Some(q)),
                    None => Ok(None),
                };
            }
        }
    }
    Ok(None)
}

/// The replacement for one atom, or `None` if it is unchanged.
fn substitute_atom(a: &Atom, map: &Substitution) -> Result<Option<Expr>, ExprError> {
    if let Some(r) = map.get(a) {
        return Ok(Some(r.clone()));
    }
    match a {
        Atom::Exp(arg) => {
            let new = arg.substitute_all(map)?;
            Ok((new != **arg).then(|| Expr::exp(new)))
        }
        Atom::Tanh(arg) => {
            let new = arg.substitute_all(map)?;
            Ok((new != **arg).then(|| Expr::tanh(new)))
        }
        Atom::Func(f) => {
            for key in map.keys() {
                if let Some(s) = key.as_variable() {
                    if f.has_arg(s) {
                        return Err(ExprError::FunctionArgument(s.name().to_string()));
                    }
                }
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}
