use num_traits::Zero;

use super::{Atom, Exponent, Expr, Monomial, Rational};

impl Exponent {
    /// The exponent as an expression `c + k*n + m*n^(-1)`.
    pub fn to_expr(&self) -> Expr {
        let n = Expr::sym(&super::Symbol::exponent_parameter());
        let mut e = Expr::constant(super::q_to_rational(self.constant_part()));
        if !self.linear_part().is_zero() {
            e += n.scale(&super::q_to_rational(self.linear_part()));
        }
        if !self.inverse_part().is_zero() {
            e += n
                .pow(Exponent::int(-1))
                .expect("monomial inverse")
                .scale(&super::q_to_rational(self.inverse_part()));
        }
        e
    }
}

/// Partial derivative of a single atom (to the first power).
fn diff_atom(a: &Atom, var: &Atom) -> Expr {
    if a == var {
        return Expr::one();
    }
    match a {
        Atom::Const(_) | Atom::Sym(_) | Atom::Jet(_) => Expr::zero(),
        Atom::Func(f) => match var.as_variable() {
            Some(s) if f.has_arg(s) => Expr::func(f.with_orders(f.orders.with(s))),
            _ => Expr::zero(),
        },
        Atom::Exp(arg) => {
            let d = arg.diff(var);
            if d.is_zero() {
                return d;
            }
            &Expr::atom(a.clone()) * &d
        }
        Atom::Tanh(arg) => {
            let d = arg.diff(var);
            if d.is_zero() {
                return d;
            }
            let th = Expr::atom(a.clone());
            &(Expr::one() - th.pow_u32(2)) * &d
        }
    }
}

impl Expr {
    /// Partial derivative with respect to a symbol or jet variable, all
    /// other atoms held fixed. Opaque functions with `var` among their
    /// arguments get their derivative multi-index bumped; `tanh' = 1 -
    /// tanh^2`, `exp' = exp`.
    ///
    /// # Panics
    ///
    /// When differentiating with respect to the exponent parameter `n` a
    /// factor whose exponent depends on `n` (that derivative needs `ln`).
    pub fn diff(&self, var: &Atom) -> Expr {
        let mut out: Vec<(Monomial, Rational)> = Vec::new();
        let var_is_n = matches!(var, Atom::Sym(s) if s.is_exponent_parameter());
        for (m, c) in self.terms() {
            let factors = m.factors();
            for (i, (a, e)) in factors.iter().enumerate() {
                if var_is_n && !e.is_constant() {
                    panic!("derivative with respect to the exponent parameter of `{a:?}^({e})`");
                }
                if !a.depends_on(var) {
                    continue;
                }
                let da = diff_atom(a, var);
                if da.is_zero() {
                    continue;
                }
                // d(a^e) = e * a^(e-1) * da
                let mut rest: Vec<(Atom, Exponent)> = Vec::with_capacity(factors.len());
                for (j, (b, f)) in factors.iter().enumerate() {
                    if j == i {
                        let em1 = *e - Exponent::one();
                        if !em1.is_zero() {
                            rest.push((b.clone(), em1));
                        }
                    } else {
                        rest.push((b.clone(), *f));
                    }
                }
                let (k, rest_m) = Monomial::from_factors(rest);
                let term = (&e.to_expr() * &da).mul_monomial(&rest_m, &(c * k));
                out.extend(term.into_terms());
            }
        }
        Expr::from_terms(out)
    }

    /// Partial derivative with respect to a symbol (dependent symbols mean
    /// the underived jet variable).
    pub fn diff_sym(&self, s: &super::Symbol) -> Expr {
        self.diff(&Atom::sym(s))
    }

    /// Repeated partial derivative along a multi-index.
    pub fn diff_index(&self, idx: &super::MultiIndex) -> Expr {
        let mut e = self.clone();
        for v in idx.vars() {
            e = e.diff_sym(&v);
        }
        e
    }
}
