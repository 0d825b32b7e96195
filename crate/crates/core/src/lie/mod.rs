//! Point-symmetry generators and the computations built on them.

mod closure;
mod determining;
mod prolong;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::expr::{Atom, Expr, ExprError, Symbol};

pub use closure::{closure_table, decompose, ClosureEntry, ClosureReport};
pub use determining::{determining_equations, xi_name, DeterminingSystem, ETA_NAME};
pub use prolong::{apply, check_symmetry, prolong, prolong_with, ProlongedField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("coefficient of `{field}` contains the derivative {jet}; point symmetries act on (x, u) only")]
    NotPointField { field: String, jet: String },
    #[error("fields act on different dependent variables: {0} and {1}")]
    DependentMismatch(String, String),
    #[error("expression has derivative order {found}, prolongation has order {order}")]
    OrderExceeded { found: u32, order: u32 },
    #[error("prolongation order {0} is above the supported maximum of 3")]
    OrderTooHigh(u32),
    #[error("underdetermined decomposition: basis fields {0} and {1} are linearly dependent")]
    Underdetermined(String, String),
    #[error("empty basis")]
    EmptyBasis,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Infinitesimal generator `X = Σ ξ^i ∂_i + η ∂_u`.
///
/// Components that are not stored are zero, so one field can be used
/// with any set of independent variables containing its support.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    pub name: String,
    xi: BTreeMap<Symbol, Expr>,
    dependent: Symbol,
    eta: Expr,
}

impl VectorField {
    pub fn new(
        name: &str,
        dependent: &Symbol,
        xi: impl IntoIterator<Item = (Symbol, Expr)>,
        eta: Expr,
    ) -> Result<Self, LieError> {
        let mut map = BTreeMap::new();
        for (s, e) in xi {
            if !e.is_zero() {
                map.insert(s, e);
            }
        }
        let field = VectorField {
            name: name.to_string(),
            xi: map,
            dependent: dependent.clone(),
            eta,
        };
        for coeff in field.xi.values().chain(std::iter::once(&field.eta)) {
            if let Some(j) = coeff.jet_vars().into_iter().find(|j| !j.index.is_empty()) {
                return Err(LieError::NotPointField {
                    field: name.to_string(),
                    jet: Expr::atom(Atom::Jet(j)).to_string(),
                });
            }
        }
        Ok(field)
    }

    pub fn zero(name: &str, dependent: &Symbol) -> Self {
        VectorField {
            name: name.to_string(),
            xi: BTreeMap::new(),
            dependent: dependent.clone(),
            eta: Expr::zero(),
        }
    }

    pub fn dependent(&self) -> &Symbol {
        &self.dependent
    }

    /// `ξ^s`, zero if not stored.
    pub fn xi(&self, s: &Symbol) -> Expr {
        self.xi.get(s).cloned().unwrap_or_default()
    }

    pub fn xi_map(&self) -> &BTreeMap<Symbol, Expr> {
        &self.xi
    }

    pub fn eta(&self) -> &Expr {
        &self.eta
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_empty() && self.eta.is_zero()
    }

    /// Independent variables with a nonzero component.
    pub fn support(&self) -> BTreeSet<Symbol> {
        self.xi.keys().cloned().collect()
    }

    /// Same components, ignoring names.
    pub fn same_as(&self, other: &VectorField) -> bool {
        self.dependent == other.dependent && self.xi == other.xi && self.eta == other.eta
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// The field acting as a first-order operator on a function of the
    /// base coordinates.
    pub fn act(&self, f: &Expr) -> Expr {
        let mut out = &self.eta * &f.diff_sym(&self.dependent);
        for (s, c) in &self.xi {
            let d = f.diff_sym(s);
            if !d.is_zero() {
                out += c * &d;
            }
        }
        out
    }

    fn check_same_dependent(&self, other: &VectorField) -> Result<(), LieError> {
        if self.dependent != other.dependent {
            return Err(LieError::DependentMismatch(
                self.dependent.name().to_string(),
                other.dependent.name().to_string(),
            ));
        }
        Ok(())
    }

    /// `self + other`, componentwise.
    pub fn add(&self, other: &VectorField) -> Result<VectorField, LieError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField, LieError> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &VectorField, op: impl Fn(&Expr, &Expr) -> Expr) -> Result<VectorField, LieError> {
        self.check_same_dependent(other)?;
        let keys: BTreeSet<&Symbol> = self.xi.keys().chain(other.xi.keys()).collect();
        let xi = keys
            .into_iter()
            .map(|s| (s.clone(), op(&self.xi(s), &other.xi(s))))
            .collect::<Vec<_>>();
        VectorField::new(
            &format!("{}+{}", self.name, other.name),
            &self.dependent,
            xi,
            op(&self.eta, &other.eta),
        )
    }

    /// Multiplies every component by `c`.
    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField {
            name: self.name.clone(),
            xi: self
                .xi
                .iter()
                .map(|(s, e)| (s.clone(), e * c))
                .filter(|(_, e)| !e.is_zero())
                .collect(),
            dependent: self.dependent.clone(),
            eta: &self.eta * c,
        }
    }

    /// Applies a substitution to every component.
    pub fn substitute_all(&self, map: &crate::expr::Substitution) -> Result<VectorField, LieError> {
        let mut xi = Vec::new();
        for (s, e) in &self.xi {
            xi.push((s.clone(), e.substitute_all(map)?));
        }
        VectorField::new(&self.name, &self.dependent, xi, self.eta.substitute_all(map)?)
    }

    /// Replaces an opaque function in every component.
    pub fn substitute_function(&self, name: &str, body: &Expr) -> Result<VectorField, LieError> {
        let mut xi = Vec::new();
        for (s, e) in &self.xi {
            xi.push((s.clone(), e.substitute_function(name, body)?));
        }
        VectorField::new(
            &self.name,
            &self.dependent,
            xi,
            self.eta.substitute_function(name, body)?,
        )
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (s, e) in &self.xi {
            parts.push(format!("({e})*d_{}", s.name()));
        }
        if !self.eta.is_zero() {
            parts.push(format!("({})*d_{}", self.eta, self.dependent.name()));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self)
    }
}

/// Lie bracket `[X, Y] = XY - YX` of two first-order operators.
pub fn commutator(x: &VectorField, y: &VectorField) -> Result<VectorField, LieError> {
    x.check_same_dependent(y)?;
    let keys: BTreeSet<&Symbol> = x.xi.keys().chain(y.xi.keys()).collect();
    let xi: Vec<(Symbol, Expr)> = keys
        .into_iter()
        .map(|s| (s.clone(), x.act(&y.xi(s)) - y.act(&x.xi(s))))
        .collect();
    let eta = x.act(&y.eta) - y.act(&x.eta);
    VectorField::new(&format!("[{},{}]", x.name, y.name), &x.dependent, xi, eta)
}
