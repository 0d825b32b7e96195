//! Exact symbolic expressions in canonical sum-of-monomials form.
//!
//! An [`Expr`] is a sorted list of terms, each a nonzero [`Rational`]
//! coefficient times a [`Monomial`]. A monomial is a sorted product of
//! [`Atom`]s raised to [`Exponent`]s. Every constructor and operation
//! returns the canonical form, so structural equality is mathematical
//! equality for the polynomial-in-jets expressions this crate handles.

mod atom;
mod collect;
mod diff;
mod display;
mod eval;
mod exponent;
mod raw;
mod subst;
mod symbol;

use std::collections::BTreeSet;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use atom::{Atom, FuncSymbol, JetVar, MultiIndex};
pub use collect::{expand_collected, Collected};
pub use eval::{eval_exact, Scalar};
pub use exponent::{Exponent, Q};
pub use raw::{normalize, RawExpr};
pub use subst::Substitution;
pub use symbol::{Context, ContextError, Symbol, SymbolKind, EXPONENT_PARAMETER};

/// Arbitrary-precision exact rational.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("non-monomial divisor: {0}")]
    NonMonomialDivisor(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("symbolic-power substitution: cannot raise `{base}` to the power {exponent}")]
    SymbolicPowerSubstitution { base: String, exponent: String },
    #[error("exponent `{0}` is not of the form a + b*n + c/n with rational a, b, c")]
    UnsupportedExponent(String),
    #[error("cannot substitute `{0}`: it is an argument of an opaque function")]
    FunctionArgument(String),
}

pub(crate) fn q_to_rational(q: Q) -> Rational {
    Rational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

pub(crate) fn rational_to_q(r: &Rational) -> Option<Q> {
    use num_traits::ToPrimitive;
    Some(Q::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

/// Product of atoms with exponents, sorted by atom, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Atom, Exponent)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, Exponent)] {
        &self.0
    }

    pub fn atom(a: Atom) -> Self {
        Monomial(vec![(a, Exponent::one())])
    }

    /// Exponent of `a` in this monomial (zero when absent).
    pub fn exponent_of(&self, a: &Atom) -> Exponent {
        self.0
            .iter()
            .find(|(b, _)| b == a)
            .map_or(Exponent::zero(), |(_, e)| *e)
    }

    /// Canonicalizes an arbitrary factor list. Returns the rational factor
    /// split off (from constant bases with integer exponents) and the
    /// canonical monomial.
    pub fn from_factors(mut factors: Vec<(Atom, Exponent)>) -> (Rational, Monomial) {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Atom, Exponent)> = Vec::with_capacity(factors.len());
        for (a, e) in factors {
            match merged.last_mut() {
                Some((b, f)) if *b == a => *f = *f + e,
                _ => merged.push((a, e)),
            }
        }
        let mut coeff = Rational::one();
        let mut out: Vec<(Atom, Exponent)> = Vec::with_capacity(merged.len());
        let mut exp_arg: Option<Expr> = None;
        for (a, e) in merged {
            if e.is_zero() {
                continue;
            }
            match a {
                Atom::Const(c) => {
                    let (k, rest) = e.split_integer();
                    coeff *= rational_pow(&c, k);
                    if !rest.is_zero() {
                        out.push((Atom::Const(c), rest));
                    }
                }
                Atom::Exp(arg) if e.is_constant() => {
                    let scaled = &*arg * &Expr::constant(q_to_rational(e.constant_part()));
                    exp_arg = Some(match exp_arg {
                        None => scaled,
                        Some(acc) => acc + scaled,
                    });
                }
                other => out.push((other, e)),
            }
        }
        if let Some(arg) = exp_arg {
            if !arg.is_zero() {
                out.push((Atom::Exp(Box::new(arg)), Exponent::one()));
                out.sort_by(|a, b| a.0.cmp(&b.0));
            }
        }
        (coeff, Monomial(out))
    }

    pub fn mul(&self, other: &Monomial) -> (Rational, Monomial) {
        if self.0.is_empty() {
            return (Rational::one(), other.clone());
        }
        if other.0.is_empty() {
            return (Rational::one(), self.clone());
        }
        let needs_fixup = self
            .0
            .iter()
            .chain(other.0.iter())
            .any(|(a, _)| matches!(a, Atom::Exp(_) | Atom::Const(_)));
        if needs_fixup {
            let mut v = self.0.clone();
            v.extend(other.0.iter().cloned());
            return Monomial::from_factors(v);
        }
        // plain sorted merge
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if !e.is_zero() {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        (Rational::one(), Monomial(out))
    }

    /// Raises the monomial to an exponent. `None` if some factor exponent
    /// leaves the supported exponent span.
    pub fn pow(&self, e: Exponent) -> Option<(Rational, Monomial)> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, f) in &self.0 {
            v.push((a.clone(), f.checked_mul(&e)?));
        }
        Some(Monomial::from_factors(v))
    }

    /// Splits into the part whose atoms satisfy `pred` and the rest.
    pub fn split(&self, pred: impl Fn(&Atom) -> bool) -> (Monomial, Monomial) {
        let (yes, no): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(a, _)| pred(a));
        (Monomial(yes), Monomial(no))
    }

    pub fn depends_on(&self, var: &Atom) -> bool {
        self.0.iter().any(|(a, _)| a.depends_on(var))
    }

    pub fn to_expr(&self) -> Expr {
        Expr::from_term(self.clone(), Rational::one())
    }
}

fn rational_pow(c: &Rational, k: i64) -> Rational {
    if k >= 0 {
        num_traits::pow(c.clone(), k as usize)
    } else {
        num_traits::pow(c.recip(), (-k) as usize)
    }
}

/// Canonical symbolic expression.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Expr {
    terms: Vec<(Monomial, Rational)>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_term(Monomial::one(), c)
    }

    pub fn int(k: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(k)))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::constant(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Expr::zero()
        } else {
            Expr { terms: vec![(m, c)] }
        }
    }

    pub fn atom(a: Atom) -> Self {
        Self::from_term(Monomial::atom(a), Rational::one())
    }

    /// A symbol; dependent symbols become their underived jet variable.
    pub fn sym(s: &Symbol) -> Self {
        Self::atom(Atom::sym(s))
    }

    pub fn jet(dep: &Symbol, vars: &[Symbol]) -> Self {
        Self::atom(Atom::jet(dep, MultiIndex::from_vars(vars)))
    }

    pub fn func(f: FuncSymbol) -> Self {
        Self::atom(Atom::Func(f))
    }

    pub fn exp(arg: Expr) -> Self {
        if arg.is_zero() {
            Expr::one()
        } else {
            let (c, m) = Monomial::from_factors(vec![(Atom::Exp(Box::new(arg)), Exponent::one())]);
            Expr::from_term(m, c)
        }
    }

    pub fn tanh(arg: Expr) -> Self {
        if arg.is_zero() {
            Expr::zero()
        } else {
            Self::atom(Atom::Tanh(Box::new(arg)))
        }
    }

    /// Builds the canonical sum of arbitrary (possibly repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut v: Vec<(Monomial, Rational)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((pm, pc)) if *pm == m => *pc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Expr { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the canonical form has no monomials.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Rational)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    /// The atom, if this expression is exactly one atom to the first power.
    pub fn as_atom(&self) -> Option<&Atom> {
        match self.as_monomial() {
            Some((m, c)) if c.is_one() && m.0.len() == 1 && m.0[0].1.is_one() => Some(&m.0[0].0),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        self.as_atom().and_then(Atom::as_variable)
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiplies by a single monomial.
    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(mm, k)| {
            let (f, prod) = mm.mul(m);
            (prod, k * c * f)
        }))
    }

    /// Positive integer power by repeated squaring.
    pub fn pow_u32(&self, k: u32) -> Expr {
        let mut result = Expr::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Raises to an arbitrary exponent. Nonnegative integer powers expand
    /// multinomially; any other power requires a single-monomial base.
    pub fn pow(&self, e: Exponent) -> Result<Expr, ExprError> {
        if let Some(k) = e.as_integer() {
            if k >= 0 {
                return Ok(self.pow_u32(k as u32));
            }
        }
        let (m, c) = self.as_monomial().ok_or_else(|| ExprError::SymbolicPowerSubstitution {
            base: self.to_string(),
            exponent: e.to_string(),
        })?;
        let (f, pm) = m
            .pow(e)
            .ok_or_else(|| ExprError::UnsupportedExponent(format!("({e}) applied to {self}")))?;
        let coeff_part = if c.is_one() {
            Expr::one()
        } else {
            let (g, cm) = Monomial::from_factors(vec![(Atom::Const(c.clone()), e)]);
            Expr::from_term(cm, g)
        };
        Ok(coeff_part.mul_monomial(&pm, &f))
    }

    /// Multiplicative inverse of a nonzero monomial.
    pub fn recip(&self) -> Result<Expr, ExprError> {
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if self.as_monomial().is_none() {
            return Err(ExprError::NonMonomialDivisor(self.to_string()));
        }
        self.pow(Exponent::int(-1))
    }

    /// Division by a single nonzero monomial.
    pub fn div(&self, divisor: &Expr) -> Result<Expr, ExprError> {
        if let Some(c) = divisor.as_rational() {
            if c.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            return Ok(self.scale(&c.recip()));
        }
        Ok(self * &divisor.recip()?)
    }

    /// Every atom occurring anywhere, including inside function arguments
    /// of `exp` and `tanh`.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set
    }

    fn collect_atoms(&self, set: &mut BTreeSet<Atom>) {
        for (m, _) in &self.terms {
            for (a, _) in &m.0 {
                if let Atom::Exp(arg) | Atom::Tanh(arg) = a {
                    arg.collect_atoms(set);
                }
                set.insert(a.clone());
            }
        }
    }

    /// Jet variables of any dependent variable occurring in the expression.
    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        self.atoms()
            .into_iter()
            .filter_map(|a| match a {
                Atom::Jet(j) => Some(j),
                _ => None,
            })
            .collect()
    }

    pub fn depends_on(&self, var: &Atom) -> bool {
        self.terms.iter().any(|(m, _)| m.depends_on(var))
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.depends_on(&Atom::sym(s))
    }

    /// The largest exponent with which `a` occurs as a direct factor, if it
    /// is always an integer.
    pub fn integer_degree_in(&self, a: &Atom) -> Option<i64> {
        let mut deg = 0;
        for (m, _) in &self.terms {
            deg = deg.max(m.exponent_of(a).as_integer()?);
        }
        Some(deg)
    }

    /// Rational content of the leading term (first in canonical order).
    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Scales so that the first term has coefficient one.
    pub fn monic(&self) -> Expr {
        match self.leading_coefficient() {
            Some(c) => self.scale(&c.recip()),
            None => Expr::zero(),
        }
    }

    /// Largest monomial dividing every term: for every atom with constant
    /// exponents throughout, the minimum exponent over all terms (absent
    /// counts as zero). May contain negative exponents.
    pub fn monomial_content(&self) -> Monomial {
        let mut candidates: BTreeSet<Atom> = BTreeSet::new();
        for (m, _) in &self.terms {
            candidates.extend(m.factors().iter().map(|(a, _)| a.clone()));
        }
        let mut content = Vec::new();
        for a in candidates {
            if matches!(a, Atom::Const(_) | Atom::Exp(_)) {
                continue;
            }
            let mut lo: Option<Q> = None;
            let mut ok = true;
            for (m, _) in &self.terms {
                match m.exponent_of(&a).as_constant() {
                    Some(q) => lo = Some(lo.map_or(q, |l: Q| l.min(q))),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if let (true, Some(q)) = (ok, lo) {
                if !num_traits::Zero::is_zero(&q) {
                    content.push((a, Exponent::constant(q)));
                }
            }
        }
        Monomial(content)
    }
}

impl From<i64> for Expr {
    fn from(k: i64) -> Self {
        Expr::int(k)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::sym(s)
    }
}

fn merge_add(a: &[(Monomial, Rational)], b: &[(Monomial, Rational)]) -> Vec<(Monomial, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = &a[i].1 + &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr {
            terms: merge_add(&self.terms, &rhs.terms),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        &self + &rhs
    }
}

impl Add<&Expr> for Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        &self + rhs
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        self.terms = merge_add(&self.terms, &rhs.terms);
    }
}

impl AddAssign for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        *self += &rhs;
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(mut self) -> Expr {
        for (_, c) in &mut self.terms {
            *c = -c.clone();
        }
        self
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

impl Sub<&Expr> for Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        &self - rhs
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        let mut v = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let (f, m) = ma.mul(mb);
                v.push((m, ca * cb * f));
            }
        }
        Expr::from_terms(v)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl Mul<&Expr> for Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        &self * rhs
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut all = Vec::new();
        for e in iter {
            all.extend(e.terms);
        }
        Expr::from_terms(all)
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::one(), |acc, e| &acc * &e)
    }
}
