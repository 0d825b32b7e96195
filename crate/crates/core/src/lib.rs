//! Symbolic and numerical toolkit for Lie point symmetry analysis of nonlinear
//! PDEs in three variables.
//!
//! * [`expr`]: exact canonical expressions, differentiation, substitution.
//! * [`jet`]: jet coordinates, total derivatives, solution-manifold
//!   restriction.
//! * [`lie`]: prolongation, symmetry residuals, determining equations,
//!   commutators and closure of generator sets.
//! * [`reduction`]: invariants, similarity ansätze, reduced equations, first
//!   integrals and closed-form solutions.
//! * [`ode`]: compiling reduced ODEs and integrating them.

pub mod expr;
pub mod jet;
pub mod lie;
pub mod ode;
pub mod reduction;

pub use expr::{Atom, Exponent, Expr, ExprError, FuncSymbol, JetVar, Monomial, MultiIndex, Symbol, SymbolKind};

/// Exact rational scalar used for all symbolic coefficients.
pub type Rational = expr::Rational;
