use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::{Atom, Exponent, Expr, Monomial, Rational};

fn write_rational(f: &mut impl Write, q: &Rational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

fn write_exponent(f: &mut impl Write, e: &Exponent) -> fmt::Result {
    if e.is_one() {
        return Ok(());
    }
    match e.as_integer() {
        Some(k) if k > 0 => write!(f, "^{k}"),
        _ if *e == Exponent::n() => f.write_str("^n"),
        _ => write!(f, "^({e})"),
    }
}

fn write_atom(f: &mut impl Write, a: &Atom) -> fmt::Result {
    match a {
        Atom::Const(c) => {
            if c.is_integer() && c.is_positive() {
                write_rational(f, c)
            } else {
                f.write_char('(')?;
                write_rational(f, c)?;
                f.write_char(')')
            }
        }
        Atom::Sym(s) => f.write_str(s.name()),
        Atom::Jet(j) => {
            if j.index.is_empty() {
                f.write_str(j.dependent.name())
            } else {
                let vars: Vec<String> = j.index.vars().iter().map(|s| s.name().to_string()).collect();
                write!(f, "D({};{})", j.dependent.name(), vars.join(","))
            }
        }
        Atom::Func(func) => {
            if func.orders.is_empty() {
                let args: Vec<&str> = func.args.iter().map(|s| s.name()).collect();
                write!(f, "{}({})", func.name, args.join(","))
            } else {
                let vars: Vec<String> = func.orders.vars().iter().map(|s| s.name().to_string()).collect();
                write!(f, "D({};{})", func.name, vars.join(","))
            }
        }
        Atom::Exp(arg) => write!(f, "exp({arg})"),
        Atom::Tanh(arg) => write!(f, "tanh({arg})"),
    }
}

pub(crate) fn write_monomial(f: &mut impl Write, m: &Monomial) -> fmt::Result {
    for (i, (a, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            f.write_char('*')?;
        }
        write_atom(f, a)?;
        write_exponent(f, e)?;
    }
    Ok(())
}

/// Canonical text in the model-file expression syntax. Derivatives always
/// print in `D(u;x,x)` form.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    f.write_char('-')?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
            if m.is_one() {
                write_rational(f, &mag)?;
            } else {
                if !mag.is_one() {
                    write_rational(f, &mag)?;
                    f.write_char('*')?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        write_monomial(f, self)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&Expr::atom(self.clone()), f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn printing() {
        let x = Symbol::independent("x");
        let u = Symbol::dependent("u");
        assert_eq!(
            Expr::sym(&x).scale(&Rational::from_integer(2.into())).to_string(),
            "2*x"
        );
        assert_eq!(Expr::sym(&u).pow(Exponent::n()).unwrap().to_string(), "u^n");
        assert_eq!(
            Expr::sym(&u).pow(Exponent::n() - Exponent::one()).unwrap().to_string(),
            "u^(n - 1)"
        );
        assert_eq!(Expr::jet(&u, &[x.clone(), x.clone()]).to_string(), "D(u;x,x)");
        assert_eq!((Expr::one() - Expr::sym(&x)).to_string(), "1 - x");
        assert_eq!(Expr::zero().to_string(), "0");
        assert_eq!(Expr::frac(-3, 2).to_string(), "-3/2");
    }
}
