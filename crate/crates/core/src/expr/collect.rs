use std::collections::{BTreeMap, BTreeSet};

use super::{Atom, Expr, Monomial};

/// Result of splitting an expression by monomials in chosen atoms:
/// `expr = sum(key * value)`.
pub type Collected = BTreeMap<Monomial, Expr>;

impl Expr {
    /// Groups terms by their monomial in the given atoms. Keys are products
    /// of those atoms only; values contain none of them.
    pub fn collect(&self, atoms: &BTreeSet<Atom>) -> Collected {
        self.collect_by(|a| atoms.contains(a))
    }

    /// Like [`Expr::collect`], selecting atoms with a predicate.
    pub fn collect_by(&self, pred: impl Fn(&Atom) -> bool) -> Collected {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, super::Rational)>> = BTreeMap::new();
        for (m, c) in self.terms() {
            let (key, rest) = m.split(&pred);
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, v)| (k, Expr::from_terms(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

/// Rebuilds `sum(key * value)`.
pub fn expand_collected(c: &Collected) -> Expr {
    c.iter()
        .map(|(k, v)| v.mul_monomial(k, &super::Rational::from_integer(1.into())))
        .sum()
}
