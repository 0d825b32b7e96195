//! Numeric integration of reduced ODEs: compilation of a solved equation to
//! a first-order system, adaptive Dormand–Prince 5(4) and classic RK4, and
//! CSV/SVG output.

mod integrate;
mod output;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Float;
use thiserror::Error;

use crate::expr::{Atom, Expr, MultiIndex, Scalar, Symbol, Q};
use crate::jet::expand_pde;

pub use integrate::{integrate, IntegratorConfig, Method, Trajectory};
pub use output::{read_csv, to_csv, to_svg, write_csv, write_svg, CurveStyle};

/// Floating-point types the integrator runs in.
pub trait Real: Float + Scalar + fmt::Debug + fmt::Display + Send + Sync + 'static {}
impl<T: Float + Scalar + fmt::Debug + fmt::Display + Send + Sync + 'static> Real for T {}

#[derive(Debug, Error, PartialEq)]
pub enum OdeError {
    #[error("unbound parameter {0}")]
    UnboundParameter(String),
    #[error("nonlinear in highest derivative: {0}")]
    NonlinearHighest(String),
    #[error("unsupported term {0}")]
    Unsupported(String),
    #[error("initial condition has {got} components, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("right-hand side is not finite at {0}")]
    NotFinite(String),
}

#[derive(Clone, Debug)]
enum Power<F> {
    Int(i32),
    Real(F),
}

#[derive(Clone, Debug)]
enum Factor<F> {
    Slot(usize, Power<F>),
    Exp(Compiled<F>, Power<F>),
    Tanh(Compiled<F>, Power<F>),
}

/// A sum of products over a flat slot vector `[x, y, y', ..., params...]`.
#[derive(Clone, Debug)]
struct Compiled<F> {
    terms: Vec<(F, Vec<Factor<F>>)>,
}

impl<F: Real> Compiled<F> {
    fn eval(&self, slots: &[F]) -> F {
        let mut sum = F::zero();
        for (c, factors) in &self.terms {
            let mut p = *c;
            for f in factors {
                let (base, pow) = match f {
                    Factor::Slot(i, pow) => (slots[*i], pow),
                    Factor::Exp(arg, pow) => (Float::exp(arg.eval(slots)), pow),
                    Factor::Tanh(arg, pow) => (Float::tanh(arg.eval(slots)), pow),
                };
                p = p * match pow {
                    Power::Int(1) => base,
                    Power::Int(k) => base.powi(*k),
                    Power::Real(r) => base.powf(*r),
                };
            }
            sum = sum + p;
        }
        sum
    }
}

/// `y^(N) = f(x, y, ..., y^(N-1))` as a first-order system in
/// `(y, y', ..., y^(N-1))`.
#[derive(Clone, Debug)]
pub struct OdeSystem<F> {
    pub independent: Symbol,
    pub dependent: Symbol,
    /// Column names: independent variable, then each state component.
    pub names: Vec<String>,
    pub parameters: BTreeMap<String, F>,
    /// Solved form of the highest derivative, for reports.
    pub solved: Expr,
    rhs: Compiled<F>,
}

impl<F: Real> OdeSystem<F> {
    pub fn dimension(&self) -> usize {
        self.names.len() - 1
    }

    /// Writes the derivative of `state` at `x` into `out`.
    pub fn eval(&self, x: F, state: &[F], out: &mut [F]) {
        let d = self.dimension();
        let mut slots = Vec::with_capacity(1 + d + self.parameters.len());
        slots.push(x);
        slots.extend_from_slice(state);
        slots.extend(self.parameters.values().copied());
        out[..d - 1].copy_from_slice(&state[1..]);
        out[d - 1] = self.rhs.eval(&slots);
    }
}

fn power<F: Real>(e: &crate::expr::Exponent, atom: &Atom) -> Result<Power<F>, OdeError> {
    let q: Q = e
        .as_constant()
        .ok_or_else(|| OdeError::Unsupported(format!("symbolic power of {atom}")))?;
    if q.is_integer() {
        let k = i32::try_from(*q.numer()).map_err(|_| OdeError::Unsupported(format!("power {q}")))?;
        Ok(Power::Int(k))
    } else {
        let r = F::from(*q.numer()).expect("finite") / F::from(*q.denom()).expect("finite");
        Ok(Power::Real(r))
    }
}

fn compile<F: Real>(e: &Expr, slot_of: &dyn Fn(&Atom) -> Result<usize, OdeError>) -> Result<Compiled<F>, OdeError> {
    let mut terms = Vec::new();
    for (m, c) in e.terms() {
        let c = F::from_rational(c).ok_or_else(|| OdeError::Unsupported(c.to_string()))?;
        let mut factors = Vec::new();
        for (a, ex) in m.factors() {
            let p = power(ex, a)?;
            factors.push(match a {
                Atom::Exp(arg) => Factor::Exp(compile(arg, slot_of)?, p),
                Atom::Tanh(arg) => Factor::Tanh(compile(arg, slot_of)?, p),
                Atom::Const(q) => {
                    let b = F::from_rational(q).ok_or_else(|| OdeError::Unsupported(q.to_string()))?;
                    Factor::Exp(
                        Compiled {
                            terms: vec![(Float::ln(b), Vec::new())],
                        },
                        p,
                    )
                }
                _ => Factor::Slot(slot_of(a)?, p),
            });
        }
        terms.push((c, factors));
    }
    Ok(Compiled { terms })
}

/// State column name for the `k`-th derivative: `H`, `Hp`, `Hpp`, ...
pub fn state_name(dependent: &Symbol, k: usize) -> String {
    format!("{}{}", dependent.name(), "p".repeat(k))
}

/// Compiles `lhs = 0` into an explicit system. `n` binds the exponent
/// parameter; every other parameter must appear in `params`.
pub fn compile_rhs<F: Real>(
    lhs: &Expr,
    independent: &Symbol,
    dependent: &Symbol,
    params: &BTreeMap<String, F>,
    n: Option<i64>,
) -> Result<OdeSystem<F>, OdeError> {
    let lhs = match n {
        Some(k) => lhs
            .substitute_sym(&Symbol::exponent_parameter(), &Expr::int(k))
            .map_err(|e| OdeError::Unsupported(e.to_string()))?,
        None => lhs.clone(),
    };
    let pde = expand_pde("ode", lhs.clone(), std::slice::from_ref(independent), dependent)
        .map_err(|e| OdeError::NonlinearHighest(e.to_string()))?;
    let order = pde.order() as usize;
    let solved = pde.leading_rhs().clone();
    let used: BTreeMap<String, F> = solved
        .atoms()
        .into_iter()
        .filter_map(|a| match a {
            Atom::Sym(s) if s != *independent => Some(s.name().to_string()),
            _ => None,
        })
        .map(|name| match params.get(&name) {
            Some(v) => Ok((name, *v)),
            None => Err(OdeError::UnboundParameter(name)),
        })
        .collect::<Result<_, _>>()?;
    let names_of: Vec<String> = used.keys().cloned().collect();
    let slot_of = |a: &Atom| -> Result<usize, OdeError> {
        match a {
            Atom::Sym(s) if s == independent => Ok(0),
            Atom::Sym(s) => names_of
                .iter()
                .position(|p| p == s.name())
                .map(|i| 1 + order + i)
                .ok_or_else(|| OdeError::UnboundParameter(s.name().to_string())),
            Atom::Jet(j) if &j.dependent == dependent && (j.index.order() as usize) < order => {
                let k = j.index.count(independent) as usize;
                if j.index != MultiIndex::empty().with_count(independent, k as u32) {
                    return Err(OdeError::Unsupported(a.to_string()));
                }
                Ok(1 + k)
            }
            _ => Err(OdeError::Unsupported(a.to_string())),
        }
    };
    let rhs = compile(&solved, &slot_of)?;
    let mut names = vec![independent.name().to_string()];
    names.extend((0..order).map(|k| state_name(dependent, k)));
    Ok(OdeSystem {
        independent: independent.clone(),
        dependent: dependent.clone(),
        names,
        parameters: used,
        solved,
        rhs,
    })
}
