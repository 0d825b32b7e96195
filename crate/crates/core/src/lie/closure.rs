use std::collections::BTreeSet;

use super::{commutator, LieError, VectorField};
use crate::expr::{Atom, Expr, Monomial, Rational, SymbolKind};

/// One cell of a commutator table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureEntry {
    /// `[X_i, X_j] = Σ_k c_k X_k` with constant `c_k`.
    Combination(Vec<Expr>),
    /// The commutator is not a constant combination of the basis.
    Witness,
}

/// Commutator table of a set of generators and whether it closes.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub basis: Vec<VectorField>,
    /// `table[i][j]` decomposes `[basis[i], basis[j]]`.
    pub table: Vec<Vec<ClosureEntry>>,
    pub commutators: Vec<Vec<VectorField>>,
    /// Index pairs `(i, j)`, `i < j`, whose commutator does not decompose.
    pub witnesses: Vec<(usize, usize)>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// Structure constants `c_{ij}^k`, if the table closes.
    pub fn structure_constants(&self, i: usize, j: usize) -> Option<&[Expr]> {
        match &self.table[i][j] {
            ClosureEntry::Combination(c) => Some(c),
            ClosureEntry::Witness => None,
        }
    }
}

/// Atoms that count as constants for decomposition: parameters, constant
/// powers, and elementary functions of those.
fn is_constant_atom(a: &Atom) -> bool {
    match a {
        Atom::Const(_) => true,
        Atom::Sym(s) => s.kind() == SymbolKind::Parameter,
        Atom::Jet(_) | Atom::Func(_) => false,
        Atom::Exp(arg) | Atom::Tanh(arg) => arg.atoms().iter().all(is_constant_atom),
    }
}

fn components(fields: &[&VectorField]) -> Vec<Option<crate::expr::Symbol>> {
    let keys: BTreeSet<crate::expr::Symbol> = fields.iter().flat_map(|f| f.support()).collect();
    keys.into_iter().map(Some).chain(std::iter::once(None)).collect()
}

fn component(f: &VectorField, c: &Option<crate::expr::Symbol>) -> Expr {
    match c {
        Some(s) => f.xi(s),
        None => f.eta().clone(),
    }
}

/// Writes `target` as a combination of `basis` with coefficients free of
/// the base variables (rationals and parameters). `Ok(None)` when no such
/// combination exists.
pub fn decompose(target: &VectorField, basis: &[VectorField]) -> Result<Option<Vec<Expr>>, LieError> {
    if basis.is_empty() {
        return Err(LieError::EmptyBasis);
    }
    let k = basis.len();
    let mut all: Vec<&VectorField> = basis.iter().collect();
    all.push(target);
    let mut rows: Vec<Vec<Expr>> = Vec::new();
    for comp in components(&all) {
        let split: Vec<_> = all
            .iter()
            .map(|f| component(f, &comp).collect_by(|a| !is_constant_atom(a)))
            .collect();
        let keys: BTreeSet<&Monomial> = split.iter().flat_map(|m| m.keys()).collect();
        for key in keys {
            rows.push(split.iter().map(|m| m.get(key).cloned().unwrap_or_default()).collect());
        }
    }

    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..k {
        // prefer rational pivots, then any single monomial
        let pick = (r..rows.len())
            .find(|&p| {
                rows[p][c]
                    .as_rational()
                    .is_some_and(|q| q != Rational::from_integer(0.into()))
            })
            .or_else(|| (r..rows.len()).find(|&p| rows[p][c].as_monomial().is_some()));
        let Some(p) = pick else {
            let other = (0..k)
                .find(|&o| o != c)
                .map_or("basis".to_string(), |o| basis[o].name.clone());
            return Err(LieError::Underdetermined(basis[c].name.clone(), other));
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for q in 0..rows.len() {
            if q == r || rows[q][c].is_zero() {
                continue;
            }
            let factor = rows[q][c].div(&pivot)?;
            let pivot_row = rows[r].clone();
            for (cell, p) in rows[q][c..=k].iter_mut().zip(&pivot_row[c..=k]) {
                *cell = &*cell - &(&factor * p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return Ok(None);
    }
    let mut coeffs = vec![Expr::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        coeffs[c] = rows[i][k].div(&rows[i][c])?;
    }
    Ok(Some(coeffs))
}

/// Computes every commutator of `fields` and tries to decompose it in the
/// same basis.
pub fn closure_table(fields: &[VectorField]) -> Result<ClosureReport, LieError> {
    if fields.is_empty() {
        return Err(LieError::EmptyBasis);
    }
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            if fields[i].same_as(&fields[j]) {
                return Err(LieError::Underdetermined(
                    fields[i].name.clone(),
                    fields[j].name.clone(),
                ));
            }
        }
    }
    let n = fields.len();
    let mut table = vec![vec![ClosureEntry::Witness; n]; n];
    let mut commutators = vec![Vec::with_capacity(n); n];
    let mut witnesses = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = commutator(&fields[i], &fields[j])?;
            let entry = match decompose(&c, fields)? {
                Some(v) => ClosureEntry::Combination(v),
                None => {
                    if i < j {
                        witnesses.push((i, j));
                    }
                    ClosureEntry::Witness
                }
            };
            table[i][j] = entry;
            commutators[i].push(c);
        }
    }
    Ok(ClosureReport {
        basis: fields.to_vec(),
        table,
        commutators,
        witnesses,
    })
}
