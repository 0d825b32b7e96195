use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::symbol::{Symbol, SymbolKind};
use super::{Expr, Rational};

/// Derivative multi-index: how many times each variable is differentiated.
///
/// Stored sorted by variable with zero counts removed, so `u_{tx}` and
/// `u_{xt}` share one representation. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<(Symbol, u32)>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Builds an index from a list of variables, repetitions counted.
    pub fn from_vars<'a>(vars: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let mut idx = MultiIndex::empty();
        for v in vars {
            idx = idx.with(v);
        }
        idx
    }

    pub fn order(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, var: &Symbol) -> u32 {
        self.0.iter().find(|(s, _)| s == var).map_or(0, |(_, k)| *k)
    }

    pub fn entries(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    /// The index with one more derivative in `var`.
    pub fn with(&self, var: &Symbol) -> Self {
        self.with_count(var, 1)
    }

    pub fn with_count(&self, var: &Symbol, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let mut v = self.0.clone();
        match v.binary_search_by(|(s, _)| s.cmp(var)) {
            Ok(i) => v[i].1 += k,
            Err(i) => v.insert(i, (var.clone(), k)),
        }
        MultiIndex(v)
    }

    /// The index with one derivative in `var` removed, if present.
    pub fn without(&self, var: &Symbol) -> Option<Self> {
        let i = self.0.iter().position(|(s, _)| s == var)?;
        let mut v = self.0.clone();
        if v[i].1 == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        Some(MultiIndex(v))
    }

    pub fn plus(&self, other: &MultiIndex) -> Self {
        let mut out = self.clone();
        for (s, k) in &other.0 {
            out = out.with_count(s, *k);
        }
        out
    }

    /// Variables with repetition, in sorted order: `(t,x,x)` for `u_{txx}`.
    pub fn vars(&self) -> Vec<Symbol> {
        self.0
            .iter()
            .flat_map(|(s, k)| std::iter::repeat_n(s.clone(), *k as usize))
            .collect()
    }

    /// All multi-indices over `vars` with `1 <= order <= max_order`, graded.
    pub fn all_up_to(vars: &[Symbol], max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut layer = vec![MultiIndex::empty()];
        for _ in 0..max_order {
            let mut next = Vec::new();
            for idx in &layer {
                for v in vars {
                    let cand = idx.with(v);
                    if !next.contains(&cand) {
                        next.push(cand);
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.vars().iter().map(|s| s.name().to_string()).collect();
        write!(f, "[{}]", names.join(","))
    }
}

/// A jet coordinate `u_J`. The empty index is the dependent variable itself.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub dependent: Symbol,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(dependent: Symbol, index: MultiIndex) -> Self {
        debug_assert_eq!(dependent.kind(), SymbolKind::Dependent);
        JetVar { dependent, index }
    }

    pub fn base(dependent: Symbol) -> Self {
        Self::new(dependent, MultiIndex::empty())
    }

    pub fn order(&self) -> u32 {
        self.index.order()
    }

    pub fn derive(&self, var: &Symbol) -> Self {
        JetVar::new(self.dependent.clone(), self.index.with(var))
    }
}

/// An opaque function of named arguments, possibly differentiated:
/// `phi(t)`, `phi_t(t)`, `xi(t,x,y,u)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FuncSymbol {
    pub name: Arc<str>,
    pub args: Arc<[Symbol]>,
    pub orders: MultiIndex,
}

impl FuncSymbol {
    pub fn new(name: &str, args: Vec<Symbol>) -> Self {
        FuncSymbol {
            name: Arc::from(name),
            args: Arc::from(args),
            orders: MultiIndex::empty(),
        }
    }

    pub fn with_orders(&self, orders: MultiIndex) -> Self {
        FuncSymbol {
            name: self.name.clone(),
            args: self.args.clone(),
            orders,
        }
    }

    pub fn has_arg(&self, s: &Symbol) -> bool {
        self.args.iter().any(|a| a == s)
    }

    /// Same function with its derivative orders reset.
    pub fn underived(&self) -> Self {
        self.with_orders(MultiIndex::empty())
    }
}

/// A factor of a monomial.
///
/// Variant order is the canonical atom order: constants raised to
/// non-integer powers, then variables and parameters, jet variables,
/// opaque functions, and elementary-function applications.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    /// A rational base under a non-integer exponent, e.g. `2^n`.
    Const(Rational),
    /// Independent variable, reduced variable or parameter.
    Sym(Symbol),
    Jet(JetVar),
    Func(FuncSymbol),
    Exp(Box<Expr>),
    Tanh(Box<Expr>),
}

impl Atom {
    pub fn sym(s: &Symbol) -> Self {
        if s.kind() == SymbolKind::Dependent {
            Atom::Jet(JetVar::base(s.clone()))
        } else {
            Atom::Sym(s.clone())
        }
    }

    pub fn jet(dep: &Symbol, index: MultiIndex) -> Self {
        Atom::Jet(JetVar::new(dep.clone(), index))
    }

    /// The symbol this atom stands for when it can be a differentiation
    /// variable: a plain symbol or an underived dependent variable.
    pub fn as_variable(&self) -> Option<&Symbol> {
        match self {
            Atom::Sym(s) => Some(s),
            Atom::Jet(j) if j.index.is_empty() => Some(&j.dependent),
            _ => None,
        }
    }

    pub fn as_jet(&self) -> Option<&JetVar> {
        match self {
            Atom::Jet(j) => Some(j),
            _ => None,
        }
    }

    /// Whether this atom (or anything nested in it) depends on `var`.
    pub fn depends_on(&self, var: &Atom) -> bool {
        if self == var {
            return true;
        }
        match self {
            Atom::Const(_) => false,
            Atom::Sym(_) | Atom::Jet(_) => false,
            Atom::Func(f) => var.as_variable().is_some_and(|s| f.has_arg(s)),
            Atom::Exp(a) | Atom::Tanh(a) => a.depends_on(var),
        }
    }
}
